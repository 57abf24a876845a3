#include "chunkwise/pdf/object.hpp"

namespace chunkwise::pdf {

namespace {
const std::string kEmptyString;
const Array kEmptyArray;
const Dict kEmptyDict;
const Stream kEmptyStream;
const Object kNull;
}  // namespace

const Object& null_object() { return kNull; }

std::int64_t Object::as_int(std::int64_t fallback) const {
    if (auto* i = std::get_if<std::int64_t>(&value_)) return *i;
    if (auto* d = std::get_if<double>(&value_)) return static_cast<std::int64_t>(*d);
    return fallback;
}

double Object::as_number(double fallback) const {
    if (auto* i = std::get_if<std::int64_t>(&value_)) return static_cast<double>(*i);
    if (auto* d = std::get_if<double>(&value_)) return *d;
    return fallback;
}

const std::string& Object::as_string() const {
    if (auto* s = std::get_if<std::string>(&value_)) return *s;
    return kEmptyString;
}

const std::string& Object::as_name() const {
    if (auto* n = std::get_if<Name>(&value_)) return n->value;
    return kEmptyString;
}

const Array& Object::as_array() const {
    if (auto* a = std::get_if<std::shared_ptr<const Array>>(&value_)) return **a;
    return kEmptyArray;
}

const Dict& Object::as_dict() const {
    if (auto* d = std::get_if<std::shared_ptr<const Dict>>(&value_)) return **d;
    if (auto* s = std::get_if<std::shared_ptr<const Stream>>(&value_)) return (*s)->dict;
    return kEmptyDict;
}

const Stream& Object::as_stream() const {
    if (auto* s = std::get_if<std::shared_ptr<const Stream>>(&value_)) return **s;
    return kEmptyStream;
}

const Object& Object::get(std::string_view key) const {
    const Dict& d = as_dict();
    auto it = d.find(key);
    return it == d.end() ? kNull : it->second;
}

}  // namespace chunkwise::pdf
