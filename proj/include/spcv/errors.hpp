#pragma once

#include <stdexcept>
#include <string>

namespace spcv {

/// Base class for all library errors.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Precondition violations: bad sizes, non-finite values, out-of-range args.
class invalid_input_error : public error {
 public:
  explicit invalid_input_error(const std::string& msg) : error(msg) {}
};

/// Malformed input files; carries a human-readable location (line or byte offset).
class parse_error : public error {
 public:
  parse_error(const std::string& msg, const std::string& location)
      : error(msg + " (" + location + ")"), location_(location) {}
  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

/// Filesystem failures (missing file, unwritable directory, short write).
class io_error : public error {
 public:
  explicit io_error(const std::string& msg) : error(msg) {}
};

/// Container format violations, with a distinct kind per failure mode.
class format_error : public error {
 public:
  enum class kind { bad_magic, version_mismatch, truncated, inconsistent_header, missing_metadata };

  format_error(kind k, const std::string& msg) : error(msg), kind_(k) {}
  kind which() const { return kind_; }

 private:
  kind kind_;
};

/// API misuse that is a programming error rather than bad data (e.g. reusing a
/// consumed tape).
class usage_error : public error {
 public:
  explicit usage_error(const std::string& msg) : error(msg) {}
};

/// Raised when an optimization step produces a non-finite loss or gradient.
class numeric_error : public error {
 public:
  explicit numeric_error(const std::string& msg) : error(msg) {}
};

}  // namespace spcv
