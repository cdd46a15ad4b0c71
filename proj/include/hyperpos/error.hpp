#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hyperpos {

enum class ErrorCode {
    DimensionMismatch,
    InvalidArgument,
    NotMetzler,
    NotNonnegative,
    NotIrreducible,
    DimensionTooLarge,
    DegreeMismatch,
    SupersymmetryRequired,
    MaxIterExceeded,
    NotMTensor,
    NotPositiveRhs,
    OrderTooLow,
    InfeasibleMask,
    InvalidModel,
    InvalidInitialState,
    Parse,
};

const char* to_string(ErrorCode code) noexcept;

// Validation errors are caused by the input; numerical errors by an
// iteration that did not reach its tolerance.
bool is_numerical(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Raised by metzler_split and friends; carries the offending index tuple.
class NotMetzlerError : public Error {
public:
    NotMetzlerError(std::vector<int> index, double value);
    const std::vector<int>& index() const noexcept { return index_; }
    double value() const noexcept { return value_; }

private:
    std::vector<int> index_;
    double value_;
};

// Raised when an iterative method exhausts its budget. The last iterate and
// (when meaningful) the eigenvalue bracket are kept for diagnostics.
class MaxIterError : public Error {
public:
    MaxIterError(const std::string& what, std::vector<double> last_iterate,
                 std::optional<std::pair<double, double>> bracket = std::nullopt)
        : Error(ErrorCode::MaxIterExceeded, what),
          last_iterate_(std::move(last_iterate)),
          bracket_(bracket) {}

    const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }
    const std::optional<std::pair<double, double>>& bracket() const noexcept { return bracket_; }

private:
    std::vector<double> last_iterate_;
    std::optional<std::pair<double, double>> bracket_;
};

}  // namespace hyperpos
