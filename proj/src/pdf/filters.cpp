#include "filters.hpp"

#include <cstdint>
#include <cstdlib>
#include <vector>

#include <zlib.h>

namespace chunkwise::pdf {

std::string flate_decode(std::string_view in) {
    std::string out;
    if (in.empty()) return out;
    z_stream zs{};
    if (inflateInit(&zs) != Z_OK) return out;
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
    zs.avail_in = static_cast<uInt>(in.size());
    char buf[65536];
    int rc = Z_OK;
    while (rc == Z_OK) {
        zs.next_out = reinterpret_cast<Bytef*>(buf);
        zs.avail_out = sizeof buf;
        rc = inflate(&zs, Z_NO_FLUSH);
        out.append(buf, sizeof buf - zs.avail_out);
        if (rc == Z_BUF_ERROR && zs.avail_in == 0) break;
    }
    inflateEnd(&zs);
    if (rc == Z_DATA_ERROR && out.empty()) {
        // Some writers emit raw deflate without the zlib header.
        z_stream raw{};
        if (inflateInit2(&raw, -MAX_WBITS) == Z_OK) {
            raw.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
            raw.avail_in = static_cast<uInt>(in.size());
            int r = Z_OK;
            while (r == Z_OK) {
                raw.next_out = reinterpret_cast<Bytef*>(buf);
                raw.avail_out = sizeof buf;
                r = inflate(&raw, Z_NO_FLUSH);
                out.append(buf, sizeof buf - raw.avail_out);
                if (r == Z_BUF_ERROR && raw.avail_in == 0) break;
            }
            inflateEnd(&raw);
        }
    }
    return out;
}

std::string flate_encode(std::string_view in) {
    uLongf bound = compressBound(static_cast<uLong>(in.size()));
    std::string out(bound, '\0');
    compress2(reinterpret_cast<Bytef*>(out.data()), &bound, reinterpret_cast<const Bytef*>(in.data()),
              static_cast<uLong>(in.size()), 6);
    out.resize(bound);
    return out;
}

std::string ascii_hex_decode(std::string_view in) {
    std::string out;
    int pending = -1;
    for (char c : in) {
        if (c == '>') break;
        int v;
        if (c >= '0' && c <= '9') v = c - '0';
        else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
        else continue;
        if (pending < 0) {
            pending = v;
        } else {
            out += static_cast<char>(pending * 16 + v);
            pending = -1;
        }
    }
    if (pending >= 0) out += static_cast<char>(pending * 16);
    return out;
}

std::string ascii85_decode(std::string_view in) {
    std::string out;
    std::uint32_t tuple = 0;
    int count = 0;
    std::size_t i = 0;
    if (in.substr(0, 2) == "<~") i = 2;
    for (; i < in.size(); ++i) {
        const char c = in[i];
        if (c == '~') break;
        if (c == 'z' && count == 0) {
            out.append(4, '\0');
            continue;
        }
        if (c < '!' || c > 'u') continue;
        tuple = tuple * 85 + static_cast<std::uint32_t>(c - '!');
        if (++count == 5) {
            for (int s = 3; s >= 0; --s) out += static_cast<char>((tuple >> (s * 8)) & 0xFF);
            tuple = 0;
            count = 0;
        }
    }
    if (count > 1) {
        for (int k = count; k < 5; ++k) tuple = tuple * 85 + 84;
        for (int s = 3; s >= 4 - (count - 1); --s) out += static_cast<char>((tuple >> (s * 8)) & 0xFF);
    }
    return out;
}

std::string lzw_decode(std::string_view in, bool early_change) {
    std::string out;
    std::vector<std::string> table;
    auto reset = [&] {
        table.clear();
        for (int i = 0; i < 256; ++i) table.emplace_back(1, static_cast<char>(i));
        table.emplace_back();  // 256 clear
        table.emplace_back();  // 257 eod
    };
    reset();
    int code_len = 9;
    std::uint32_t bitbuf = 0;
    int bits = 0;
    std::string prev;
    bool have_prev = false;
    for (unsigned char byte : in) {
        bitbuf = (bitbuf << 8) | byte;
        bits += 8;
        while (bits >= code_len) {
            const int code = static_cast<int>((bitbuf >> (bits - code_len)) & ((1u << code_len) - 1));
            bits -= code_len;
            if (code == 256) {
                reset();
                code_len = 9;
                have_prev = false;
                continue;
            }
            if (code == 257) return out;
            std::string entry;
            if (code < static_cast<int>(table.size())) {
                entry = table[code];
            } else if (have_prev) {
                entry = prev + prev[0];
            } else {
                return out;
            }
            out += entry;
            if (have_prev) table.push_back(prev + entry[0]);
            prev = entry;
            have_prev = true;
            const int limit = static_cast<int>(table.size()) + (early_change ? 1 : 0);
            if (limit >= (1 << code_len) && code_len < 12) ++code_len;
        }
    }
    return out;
}

std::string run_length_decode(std::string_view in) {
    std::string out;
    std::size_t i = 0;
    while (i < in.size()) {
        const int len = static_cast<unsigned char>(in[i++]);
        if (len == 128) break;
        if (len < 128) {
            const std::size_t n = std::min<std::size_t>(len + 1, in.size() - i);
            out.append(in.substr(i, n));
            i += n;
        } else if (i < in.size()) {
            out.append(257 - len, in[i++]);
        }
    }
    return out;
}

std::string apply_predictor(std::string in, const Object& parms) {
    const int predictor = static_cast<int>(parms.get("Predictor").as_int(1));
    if (predictor < 2) return in;
    const int colors = static_cast<int>(parms.get("Colors").as_int(1));
    const int bpc = static_cast<int>(parms.get("BitsPerComponent").as_int(8));
    const int columns = static_cast<int>(parms.get("Columns").as_int(1));
    const int bpp = std::max(1, (colors * bpc + 7) / 8);
    const int row_len = (colors * bpc * columns + 7) / 8;
    if (row_len <= 0) return in;

    if (predictor == 2) {
        if (bpc != 8) return in;
        for (std::size_t row = 0; row + row_len <= in.size(); row += row_len) {
            for (int i = bpp; i < row_len; ++i) in[row + i] = static_cast<char>(in[row + i] + in[row + i - bpp]);
        }
        return in;
    }

    std::string out;
    std::vector<unsigned char> prev(row_len, 0), cur(row_len, 0);
    std::size_t pos = 0;
    while (pos < in.size()) {
        const int type = static_cast<unsigned char>(in[pos++]);
        const std::size_t n = std::min<std::size_t>(row_len, in.size() - pos);
        std::fill(cur.begin(), cur.end(), 0);
        for (std::size_t i = 0; i < n; ++i) cur[i] = static_cast<unsigned char>(in[pos + i]);
        pos += n;
        for (int i = 0; i < row_len; ++i) {
            const int left = i >= bpp ? cur[i - bpp] : 0;
            const int up = prev[i];
            const int upleft = i >= bpp ? prev[i - bpp] : 0;
            switch (type) {
                case 1: cur[i] = static_cast<unsigned char>(cur[i] + left); break;
                case 2: cur[i] = static_cast<unsigned char>(cur[i] + up); break;
                case 3: cur[i] = static_cast<unsigned char>(cur[i] + (left + up) / 2); break;
                case 4: {
                    const int p = left + up - upleft;
                    const int pa = std::abs(p - left), pb = std::abs(p - up), pc = std::abs(p - upleft);
                    const int pred = (pa <= pb && pa <= pc) ? left : (pb <= pc ? up : upleft);
                    cur[i] = static_cast<unsigned char>(cur[i] + pred);
                    break;
                }
                default: break;
            }
        }
        out.append(reinterpret_cast<const char*>(cur.data()), n);
        prev = cur;
    }
    return out;
}

std::string decode_filters(const std::string& data, const Object& filter, const Object& parms) {
    std::vector<std::string> names;
    std::vector<Object> parm_list;
    if (filter.is_name()) {
        names.push_back(filter.as_name());
        parm_list.push_back(parms.is_array() ? (parms.as_array().empty() ? Object() : parms.as_array()[0]) : parms);
    } else if (filter.is_array()) {
        const Array& arr = filter.as_array();
        for (std::size_t i = 0; i < arr.size(); ++i) {
            names.push_back(arr[i].as_name());
            if (parms.is_array() && i < parms.as_array().size()) {
                parm_list.push_back(parms.as_array()[i]);
            } else if (parms.is_dict() && i == 0) {
                parm_list.push_back(parms);
            } else {
                parm_list.emplace_back();
            }
        }
    }

    std::string cur = data;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const std::string& f = names[i];
        const Object& p = parm_list[i];
        if (f == "FlateDecode" || f == "Fl") {
            cur = apply_predictor(flate_decode(cur), p);
        } else if (f == "LZWDecode" || f == "LZW") {
            cur = apply_predictor(lzw_decode(cur, p.get("EarlyChange").as_int(1) != 0), p);
        } else if (f == "ASCIIHexDecode" || f == "AHx") {
            cur = ascii_hex_decode(cur);
        } else if (f == "ASCII85Decode" || f == "A85") {
            cur = ascii85_decode(cur);
        } else if (f == "RunLengthDecode" || f == "RL") {
            cur = run_length_decode(cur);
        } else {
            break;
        }
    }
    return cur;
}

}  // namespace chunkwise::pdf
