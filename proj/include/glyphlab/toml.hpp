#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace glyphlab::toml {

// Minimal TOML subset used by the run configs: [table.subtable] headers,
// `key = value` assignments, comments, and scalar/array values. This is not
// a general TOML implementation; it round-trips exactly the documents this
// project writes.
struct Value {
    std::variant<bool, std::int64_t, double, std::string, std::vector<Value>> v;

    Value() : v(std::int64_t{0}) {}
    Value(bool b) : v(b) {}
    Value(std::int64_t i) : v(i) {}
    Value(int i) : v(static_cast<std::int64_t>(i)) {}
    Value(double d) : v(d) {}
    Value(const char* s) : v(std::string(s)) {}
    Value(std::string s) : v(std::move(s)) {}
    Value(std::vector<Value> a) : v(std::move(a)) {}

    bool is_bool() const { return std::holds_alternative<bool>(v); }
    bool is_int() const { return std::holds_alternative<std::int64_t>(v); }
    bool is_float() const { return std::holds_alternative<double>(v); }
    bool is_string() const { return std::holds_alternative<std::string>(v); }
    bool is_array() const { return std::holds_alternative<std::vector<Value>>(v); }

    bool as_bool() const;
    std::int64_t as_int() const;
    double as_float() const;  // accepts ints too
    const std::string& as_string() const;
    const std::vector<Value>& as_array() const;

    std::string to_string() const;
};

// Flat document keyed by dotted paths ("train.steps"). std::map keeps
// serialization order deterministic.
using Document = std::map<std::string, Value>;

Document parse(const std::string& text);
Document parse_file(const std::string& path);

std::string serialize(const Document& doc);
void write_file(const std::string& path, const Document& doc);

// Parses a `key=value` CLI override; the value uses TOML syntax, with a
// fallback to a bare string when it does not parse as a scalar.
std::pair<std::string, Value> parse_override(const std::string& kv);

}  // namespace glyphlab::toml
