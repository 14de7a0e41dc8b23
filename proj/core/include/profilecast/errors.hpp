#pragma once

#include <stdexcept>
#include <string>

namespace profilecast {

// Every failure the pipeline can raise, grouped by the process exit code
// the CLI maps it to: input/IO -> 2, configuration -> 3, numeric -> 4.
enum class ErrorKind {
    Io,
    Schema,
    Parse,
    DuplicateRecord,
    EmptyInput,
    Config,
    Param,
    Shape,
    InsufficientData,
    Convergence,
    UndefinedMetric,
    DivisionByZero,
    InfiniteIndex,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

    // 2 = input/IO, 3 = config, 4 = numeric/degenerate metric
    int exit_code() const;

private:
    ErrorKind kind_;
};

const char* error_kind_name(ErrorKind kind);

} // namespace profilecast
