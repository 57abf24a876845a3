#include "chunkwise/errors.hpp"

namespace chunkwise {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::FileNotFound: return "FileNotFound";
        case ErrorCode::EncryptedPdf: return "EncryptedPdf";
        case ErrorCode::MalformedPdf: return "MalformedPdf";
        case ErrorCode::SchemaViolation: return "SchemaViolation";
        case ErrorCode::InvariantViolation: return "InvariantViolation";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::EmptyDocument: return "EmptyDocument";
        case ErrorCode::InconsistentLattice: return "InconsistentLattice";
        case ErrorCode::RangeOutOfBounds: return "RangeOutOfBounds";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::EmbedderUnreachable: return "EmbedderUnreachable";
        case ErrorCode::MissingPages: return "MissingPages";
        case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

}  // namespace chunkwise
