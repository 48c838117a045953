#pragma once

#include <stdexcept>
#include <string>

namespace platebench {

/// Classifies every failure the toolkit can report. Each condition the
/// contracts require to be "reported distinctly" gets its own kind.
enum class ErrorKind {
    Io,                 // unreadable/unwritable file
    Malformed,          // header or syntax that cannot be parsed
    UnsupportedMagic,   // netpbm magic other than P5/P6
    BadMaxval,          // netpbm maxval other than 255
    TruncatedData,      // payload shorter than the header promises
    Config,             // bad user configuration (templates, stage names, flags)
    OutOfRange,         // parameter outside its documented range
    Converter,          // external converter failed
    Backend,            // external recognizer process failed
    Timeout,            // external process exceeded its deadline
    Protocol,           // recognizer wire-protocol violation
    Precondition,       // operation called with invalid input
    IncompatibleStage,  // pipeline stage cannot run on the current image
    EmptyPlate,         // plate text empty after normalization
    ZeroWithinVariance, // ANOVA with no within-group variance
    SingleClassRoc,     // ROC input contains only one class
    Schema,             // JSON report does not match the documented schema
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace platebench
