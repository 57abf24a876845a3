#pragma once

#include <string>
#include <string_view>

#include "chunkwise/pdf/object.hpp"

namespace chunkwise::pdf {

// Individual stream filters. Corrupt input decodes as far as possible.
std::string flate_decode(std::string_view in);
std::string flate_encode(std::string_view in);
std::string ascii_hex_decode(std::string_view in);
std::string ascii85_decode(std::string_view in);
std::string lzw_decode(std::string_view in, bool early_change);
std::string run_length_decode(std::string_view in);
std::string apply_predictor(std::string in, const Object& parms);

/// Applies the /Filter chain of a stream. `parms` holds the (resolved) /DecodeParms.
/// Image-only filters (DCT, JPX, CCITT, JBIG2) stop the chain and return data as is.
std::string decode_filters(const std::string& data, const Object& filter, const Object& parms);

}  // namespace chunkwise::pdf
