#include "profilecast/errors.hpp"

namespace profilecast {

int Error::exit_code() const {
    switch (kind_) {
    case ErrorKind::Io:
    case ErrorKind::Schema:
    case ErrorKind::Parse:
    case ErrorKind::DuplicateRecord:
    case ErrorKind::EmptyInput:
        return 2;
    case ErrorKind::Config:
    case ErrorKind::Param:
        return 3;
    case ErrorKind::Shape:
    case ErrorKind::InsufficientData:
    case ErrorKind::Convergence:
    case ErrorKind::UndefinedMetric:
    case ErrorKind::DivisionByZero:
    case ErrorKind::InfiniteIndex:
        return 4;
    }
    return 1;
}

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Io: return "io";
    case ErrorKind::Schema: return "schema";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::DuplicateRecord: return "duplicate-record";
    case ErrorKind::EmptyInput: return "empty-input";
    case ErrorKind::Config: return "config";
    case ErrorKind::Param: return "param";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::UndefinedMetric: return "undefined-metric";
    case ErrorKind::DivisionByZero: return "division-by-zero";
    case ErrorKind::InfiniteIndex: return "infinite-index";
    }
    return "unknown";
}

} // namespace profilecast
