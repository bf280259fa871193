#pragma once

#include <stdexcept>
#include <string>

namespace shm {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// dense-linalg
struct NonFinite : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct NotSymmetric : Error { using Error::Error; };
struct SingularAfterRegularization : Error { using Error::Error; };
struct ConvergenceFailure : Error { using Error::Error; };

// shm-train
struct SingularCovariance : Error { using Error::Error; };
struct NoPositiveSupportVector : Error { using Error::Error; };
struct DegenerateModel : Error { using Error::Error; };
struct QpFailure : Error { using Error::Error; };

// qp-solver
struct InfeasibleBox : Error { using Error::Error; };
struct TooLarge : Error { using Error::Error; };

// shm-model
struct DimensionMismatch : Error { using Error::Error; };
struct KernelModeUnsupported : Error { using Error::Error; };
struct ZeroNormVector : Error { using Error::Error; };

// svd-reduction
struct RidgedProjector : Error { using Error::Error; };

// cli-io
struct IoError : Error { using Error::Error; };
struct ParseError : Error {
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line(line),
        column(column) {}
  std::size_t line;
  std::size_t column;
};
struct BadLabel : Error { using Error::Error; };
struct RaggedRow : Error { using Error::Error; };
struct VersionMismatch : Error { using Error::Error; };
struct CorruptField : Error { using Error::Error; };

}  // namespace shm
