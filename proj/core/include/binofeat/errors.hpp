#pragma once

#include <stdexcept>
#include <string>

namespace binofeat {

// Error taxonomy. Categories map to distinct CLI exit codes, see tools/.
enum class ErrorCategory {
  kUsage,     // bad arguments / configuration
  kIo,        // missing or unreadable files
  kFormat,    // parse failures, corrupt containers
  kNumeric,   // NaN/Inf, degenerate systems, tracking failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory cat, const std::string& msg)
      : std::runtime_error(msg), category_(cat) {}
  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

struct InvalidDepthError : Error {
  explicit InvalidDepthError(const std::string& msg)
      : Error(ErrorCategory::kNumeric, msg) {}
};

struct BehindCameraError : Error {
  explicit BehindCameraError(const std::string& msg)
      : Error(ErrorCategory::kNumeric, msg) {}
};

struct DegenerateConfigError : Error {
  explicit DegenerateConfigError(const std::string& msg)
      : Error(ErrorCategory::kNumeric, msg) {}
};

struct ShapeError : Error {
  explicit ShapeError(const std::string& msg)
      : Error(ErrorCategory::kUsage, msg) {}
};

struct NumericError : Error {
  explicit NumericError(const std::string& msg)
      : Error(ErrorCategory::kNumeric, msg) {}
};

struct BoundsError : Error {
  explicit BoundsError(const std::string& msg)
      : Error(ErrorCategory::kUsage, msg) {}
};

struct IoError : Error {
  explicit IoError(const std::string& msg) : Error(ErrorCategory::kIo, msg) {}
};

struct FormatError : Error {
  explicit FormatError(const std::string& msg)
      : Error(ErrorCategory::kFormat, msg) {}
};

struct EmptyBatchError : Error {
  explicit EmptyBatchError(const std::string& msg)
      : Error(ErrorCategory::kUsage, msg) {}
};

struct UnsupervisedPairError : Error {
  explicit UnsupervisedPairError(const std::string& msg)
      : Error(ErrorCategory::kUsage, msg) {}
};

struct TrackingFailureError : Error {
  explicit TrackingFailureError(const std::string& msg)
      : Error(ErrorCategory::kNumeric, msg) {}
};

}  // namespace binofeat
