#include "glyphlab/toml.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace glyphlab::toml {

bool Value::as_bool() const {
    if (!is_bool()) throw std::runtime_error("toml: expected bool, got " + to_string());
    return std::get<bool>(v);
}

std::int64_t Value::as_int() const {
    if (!is_int()) throw std::runtime_error("toml: expected integer, got " + to_string());
    return std::get<std::int64_t>(v);
}

double Value::as_float() const {
    if (is_int()) return static_cast<double>(std::get<std::int64_t>(v));
    if (!is_float()) throw std::runtime_error("toml: expected float, got " + to_string());
    return std::get<double>(v);
}

const std::string& Value::as_string() const {
    if (!is_string()) throw std::runtime_error("toml: expected string, got " + to_string());
    return std::get<std::string>(v);
}

const std::vector<Value>& Value::as_array() const {
    if (!is_array()) throw std::runtime_error("toml: expected array, got " + to_string());
    return std::get<std::vector<Value>>(v);
}

namespace {

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// Strips a trailing comment that is not inside a string literal.
std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) in_str = !in_str;
        if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

Value parse_scalar(const std::string& raw);

Value parse_array(const std::string& raw) {
    std::vector<Value> items;
    std::string body = trim(raw.substr(1, raw.size() - 2));
    std::string cur;
    bool in_str = false;
    int depth = 0;
    for (std::size_t i = 0; i < body.size(); ++i) {
        char c = body[i];
        if (c == '"' && (i == 0 || body[i - 1] != '\\')) in_str = !in_str;
        if (!in_str) {
            if (c == '[') ++depth;
            if (c == ']') --depth;
            if (c == ',' && depth == 0) {
                if (!trim(cur).empty()) items.emplace_back(parse_scalar(trim(cur)));
                cur.clear();
                continue;
            }
        }
        cur += c;
    }
    if (!trim(cur).empty()) items.emplace_back(parse_scalar(trim(cur)));
    return Value(std::move(items));
}

Value parse_scalar(const std::string& raw) {
    if (raw.empty()) throw std::runtime_error("toml: empty value");
    if (raw.front() == '[') {
        if (raw.back() != ']') throw std::runtime_error("toml: unterminated array: " + raw);
        return parse_array(raw);
    }
    if (raw.front() == '"') {
        if (raw.size() < 2 || raw.back() != '"') throw std::runtime_error("toml: unterminated string: " + raw);
        std::string out;
        for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
            if (raw[i] == '\\' && i + 2 < raw.size() + 1) {
                ++i;
                switch (raw[i]) {
                    case 'n': out += '\n'; break;
                    case 't': out += '\t'; break;
                    case '"': out += '"'; break;
                    case '\\': out += '\\'; break;
                    default: throw std::runtime_error("toml: bad escape in string: " + raw);
                }
            } else {
                out += raw[i];
            }
        }
        return Value(std::move(out));
    }
    if (raw == "true") return Value(true);
    if (raw == "false") return Value(false);
    // Integer?
    {
        bool ok = !raw.empty();
        std::size_t start = (raw[0] == '+' || raw[0] == '-') ? 1 : 0;
        if (start == raw.size()) ok = false;
        for (std::size_t i = start; i < raw.size() && ok; ++i) ok = std::isdigit(static_cast<unsigned char>(raw[i]));
        if (ok) return Value(static_cast<std::int64_t>(std::strtoll(raw.c_str(), nullptr, 10)));
    }
    // Float?
    {
        char* end = nullptr;
        const double d = std::strtod(raw.c_str(), &end);
        if (end && *end == '\0') return Value(d);
    }
    throw std::runtime_error("toml: cannot parse value: " + raw);
}

}  // namespace

std::string Value::to_string() const {
    if (is_bool()) return as_bool() ? "true" : "false";
    if (is_int()) return std::to_string(as_int());
    if (is_float()) {
        std::ostringstream os;
        os.precision(17);
        const double d = std::get<double>(v);
        os << d;
        std::string s = os.str();
        // TOML floats need a decimal point or exponent.
        if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
            s.find("inf") == std::string::npos && s.find("nan") == std::string::npos) {
            s += ".0";
        }
        return s;
    }
    if (is_string()) return "\"" + escape(std::get<std::string>(v)) + "\"";
    std::string s = "[";
    const auto& arr = std::get<std::vector<Value>>(v);
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (i) s += ", ";
        s += arr[i].to_string();
    }
    return s + "]";
}

Document parse(const std::string& text) {
    Document doc;
    std::istringstream is(text);
    std::string line;
    std::string prefix;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw std::runtime_error("toml: bad table header at line " + std::to_string(lineno));
            prefix = trim(line.substr(1, line.size() - 2));
            if (prefix.empty()) throw std::runtime_error("toml: empty table header at line " + std::to_string(lineno));
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw std::runtime_error("toml: expected key = value at line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string raw = trim(line.substr(eq + 1));
        if (key.empty()) throw std::runtime_error("toml: empty key at line " + std::to_string(lineno));
        const std::string full = prefix.empty() ? key : prefix + "." + key;
        if (doc.count(full)) throw std::runtime_error("toml: duplicate key " + full);
        doc[full] = parse_scalar(raw);
    }
    return doc;
}

Document parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("toml: cannot open " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse(buf.str());
}

std::string serialize(const Document& doc) {
    // Root-level keys first (a bare key after a [table] header would belong
    // to that table), then keys grouped by table prefix in map order.
    std::ostringstream os;
    for (const auto& [key, value] : doc) {
        if (key.rfind('.') == std::string::npos) os << key << " = " << value.to_string() << "\n";
    }
    std::string current_table;
    for (const auto& [key, value] : doc) {
        const std::size_t dot = key.rfind('.');
        if (dot == std::string::npos) continue;
        const std::string table = key.substr(0, dot);
        const std::string leaf = key.substr(dot + 1);
        if (table != current_table) {
            os << "\n[" << table << "]\n";
            current_table = table;
        }
        os << leaf << " = " << value.to_string() << "\n";
    }
    return os.str();
}

void write_file(const std::string& path, const Document& doc) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("toml: cannot write " + path);
    f << serialize(doc);
}

std::pair<std::string, Value> parse_override(const std::string& kv) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw std::runtime_error("override must be key=value, got: " + kv);
    }
    const std::string key = trim(kv.substr(0, eq));
    const std::string raw = trim(kv.substr(eq + 1));
    try {
        return {key, parse_scalar(raw)};
    } catch (const std::exception&) {
        return {key, Value(raw)};  // bare string convenience
    }
}

}  // namespace glyphlab::toml
