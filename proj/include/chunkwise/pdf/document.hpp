#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "chunkwise/geometry.hpp"
#include "chunkwise/pdf/object.hpp"

namespace chunkwise::pdf {

struct Page {
    Object dict;
    Object resources;
    Ref ref;
    // MediaBox in native PDF user space (bottom-left origin).
    Rect media_box{0, 0, 612, 792};
};

/// Read-only view of a PDF file: cross-reference resolution, object streams,
/// filters and the page tree. Not thread-safe (object cache); use one instance
/// per thread.
class Document {
public:
    static Document open(const std::filesystem::path& path);
    static Document from_bytes(std::string bytes);

    Object object(Ref ref) const;
    // Follows indirect references until a direct object is reached.
    Object resolve(const Object& obj) const;
    // Resolves a dictionary entry.
    Object get(const Object& dict, std::string_view key) const { return resolve(dict.get(key)); }

    const Object& trailer() const { return trailer_; }
    Object catalog() const { return resolve(trailer_.get("Root")); }
    const std::vector<Page>& pages() const { return pages_; }
    // Page index for a page object reference, if known.
    std::optional<int> page_index(Ref ref) const;

    // Decoded content of a stream object.
    std::string stream_data(const Object& stream) const;

    // Looks up a key in a name tree (e.g. /Names /Dests).
    Object name_tree_lookup(const Object& root, const std::string& key) const;

    bool repaired() const { return repaired_; }

private:
    struct XrefEntry {
        int type = 1;  // 1: offset, 2: in object stream
        std::size_t offset = 0;
        int container = 0;
        int index = 0;
    };

    Document() = default;
    void load();
    bool read_xref_chain(std::size_t offset);
    bool read_xref_table(std::size_t offset, Object& trailer_out);
    bool read_xref_stream(std::size_t offset, Object& trailer_out);
    void reconstruct();
    Object load_at_offset(std::size_t offset, int expected_num, bool& ok) const;
    Object load_from_object_stream(int container, int index, int num) const;
    void build_page_tree();

    std::shared_ptr<const std::string> data_;
    std::map<int, XrefEntry> xref_;
    Object trailer_;
    std::vector<Page> pages_;
    std::map<Ref, int> page_index_;
    bool repaired_ = false;
    mutable std::map<int, Object> cache_;
    mutable std::map<int, std::map<int, std::size_t>> objstm_offsets_;
    mutable std::map<int, std::shared_ptr<const std::string>> objstm_data_;
    mutable int resolve_depth_ = 0;
};

}  // namespace chunkwise::pdf
