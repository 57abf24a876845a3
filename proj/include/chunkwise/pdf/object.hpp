#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace chunkwise::pdf {

struct Ref {
    int num = 0;
    int gen = 0;

    friend auto operator<=>(const Ref&, const Ref&) = default;
};

struct Name {
    std::string value;

    friend bool operator==(const Name&, const Name&) = default;
};

class Object;
using Array = std::vector<Object>;
using Dict = std::map<std::string, Object, std::less<>>;

struct Stream {
    Dict dict;
    std::string data;  // raw, still filtered
};

/// Immutable PDF object. Containers are shared so copies are cheap.
class Object {
public:
    using Value = std::variant<std::monostate, bool, std::int64_t, double, std::string, Name,
                               std::shared_ptr<const Array>, std::shared_ptr<const Dict>,
                               std::shared_ptr<const Stream>, Ref>;

    Object() = default;
    Object(bool b) : value_(b) {}
    Object(std::int64_t i) : value_(i) {}
    Object(int i) : value_(static_cast<std::int64_t>(i)) {}
    Object(double d) : value_(d) {}
    Object(std::string s) : value_(std::move(s)) {}
    Object(Name n) : value_(std::move(n)) {}
    Object(Array a) : value_(std::make_shared<const Array>(std::move(a))) {}
    Object(Dict d) : value_(std::make_shared<const Dict>(std::move(d))) {}
    Object(Stream s) : value_(std::make_shared<const Stream>(std::move(s))) {}
    Object(Ref r) : value_(r) {}

    bool is_null() const { return std::holds_alternative<std::monostate>(value_); }
    bool is_bool() const { return std::holds_alternative<bool>(value_); }
    bool is_int() const { return std::holds_alternative<std::int64_t>(value_); }
    bool is_number() const { return is_int() || std::holds_alternative<double>(value_); }
    bool is_string() const { return std::holds_alternative<std::string>(value_); }
    bool is_name() const { return std::holds_alternative<Name>(value_); }
    bool is_array() const { return std::holds_alternative<std::shared_ptr<const Array>>(value_); }
    bool is_dict() const { return std::holds_alternative<std::shared_ptr<const Dict>>(value_); }
    bool is_stream() const { return std::holds_alternative<std::shared_ptr<const Stream>>(value_); }
    bool is_ref() const { return std::holds_alternative<Ref>(value_); }

    bool as_bool() const { return is_bool() && std::get<bool>(value_); }
    std::int64_t as_int(std::int64_t fallback = 0) const;
    double as_number(double fallback = 0.0) const;
    const std::string& as_string() const;
    const std::string& as_name() const;
    bool is_name(std::string_view n) const { return is_name() && as_name() == n; }
    const Array& as_array() const;
    // For streams this returns the stream dictionary.
    const Dict& as_dict() const;
    const Stream& as_stream() const;
    Ref as_ref() const { return std::get<Ref>(value_); }

    // Dictionary lookup on dicts and stream dicts; null object when absent.
    const Object& get(std::string_view key) const;

    const Value& value() const { return value_; }

private:
    Value value_;
};

const Object& null_object();

}  // namespace chunkwise::pdf
