#pragma once

#include <filesystem>
#include <string>

#include "chunkwise/raw_document.hpp"

namespace chunkwise {

/// Extracts spans, stroked rules, URI links and the outline from a PDF file.
/// Spans come back sorted by (page, y0, x0) in top-left page coordinates.
/// Throws Error with FileNotFound, EncryptedPdf or MalformedPdf.
RawDocument extract_raw(const std::filesystem::path& pdf_path);
RawDocument extract_raw_from_bytes(std::string pdf_bytes);

}  // namespace chunkwise
