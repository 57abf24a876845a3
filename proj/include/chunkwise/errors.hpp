#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chunkwise {

enum class ErrorCode {
    FileNotFound,
    EncryptedPdf,
    MalformedPdf,
    SchemaViolation,
    InvariantViolation,
    IoError,
    EmptyDocument,
    InconsistentLattice,
    RangeOutOfBounds,
    DomainError,
    DimensionMismatch,
    EmbedderUnreachable,
    MissingPages,
    ConfigError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so the
// CLI and batch runners can report it without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace chunkwise
