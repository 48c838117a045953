#include "platebench/error.hpp"

namespace platebench {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Io: return "io error";
    case ErrorKind::Malformed: return "malformed input";
    case ErrorKind::UnsupportedMagic: return "unsupported magic";
    case ErrorKind::BadMaxval: return "unsupported maxval";
    case ErrorKind::TruncatedData: return "truncated data";
    case ErrorKind::Config: return "configuration error";
    case ErrorKind::OutOfRange: return "out-of-range value";
    case ErrorKind::Converter: return "converter error";
    case ErrorKind::Backend: return "backend error";
    case ErrorKind::Timeout: return "timeout";
    case ErrorKind::Protocol: return "protocol violation";
    case ErrorKind::Precondition: return "precondition violation";
    case ErrorKind::IncompatibleStage: return "incompatible stage sequence";
    case ErrorKind::EmptyPlate: return "empty plate";
    case ErrorKind::ZeroWithinVariance: return "zero within-group variance";
    case ErrorKind::SingleClassRoc: return "single-class roc";
    case ErrorKind::Schema: return "schema mismatch";
    }
    return "error";
}

} // namespace platebench
