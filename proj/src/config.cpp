#include "asln/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace asln::harness {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Strip a trailing comment that is not inside a string literal.
std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_str = !in_str;
        if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

TomlValue parse_scalar(const std::string& raw, int line);

TomlValue parse_value(const std::string& raw, int line) {
    const std::string v = trim(raw);
    if (v.empty()) throw config_error("config line " + std::to_string(line) + ": empty value");
    if (v.front() == '[') {
        if (v.back() != ']')
            throw config_error("config line " + std::to_string(line) + ": unterminated array");
        TomlValue out;
        out.type = TomlValue::Type::Array;
        const std::string body = v.substr(1, v.size() - 2);
        std::string item;
        bool in_str = false;
        for (char c : body) {
            if (c == '"') in_str = !in_str;
            if (c == ',' && !in_str) {
                if (!trim(item).empty()) out.array.push_back(parse_scalar(trim(item), line));
                item.clear();
            } else {
                item += c;
            }
        }
        if (!trim(item).empty()) out.array.push_back(parse_scalar(trim(item), line));
        return out;
    }
    return parse_scalar(v, line);
}

TomlValue parse_scalar(const std::string& v, int line) {
    TomlValue out;
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') {
        out.type = TomlValue::Type::Str;
        out.str = v.substr(1, v.size() - 2);
        return out;
    }
    if (v == "true" || v == "false") {
        out.type = TomlValue::Type::Bool;
        out.boolean = (v == "true");
        return out;
    }
    const bool looks_float = v.find_first_of(".eE") != std::string::npos &&
                             v.find_first_not_of("+-0123456789.eE") == std::string::npos;
    try {
        std::size_t used = 0;
        if (looks_float) {
            out.type = TomlValue::Type::Float;
            out.real = std::stod(v, &used);
        } else {
            out.type = TomlValue::Type::Int;
            out.integer = std::stoll(v, &used);
        }
        if (used != v.size()) throw std::invalid_argument(v);
    } catch (const std::exception&) {
        throw config_error("config line " + std::to_string(line) + ": cannot parse value '" +
                           v + "'");
    }
    return out;
}

}  // namespace

double TomlValue::as_double() const {
    switch (type) {
        case Type::Float: return real;
        case Type::Int: return static_cast<double>(integer);
        default: throw config_error("config: expected a number");
    }
}

long long TomlValue::as_int() const {
    if (type != Type::Int) throw config_error("config: expected an integer");
    return integer;
}

TomlTable parse_toml(std::istream& in) {
    TomlTable table;
    std::string section;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string body = trim(strip_comment(line));
        if (body.empty()) continue;
        if (body.front() == '[') {
            if (body.back() != ']')
                throw config_error("config line " + std::to_string(number) +
                                   ": malformed section header");
            section = trim(body.substr(1, body.size() - 2));
            if (section.empty())
                throw config_error("config line " + std::to_string(number) + ": empty section");
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(number) + ": expected key = value");
        const std::string key = trim(body.substr(0, eq));
        if (key.empty())
            throw config_error("config line " + std::to_string(number) + ": empty key");
        const std::string full = section.empty() ? key : section + "." + key;
        table[full] = parse_value(body.substr(eq + 1), number);
    }
    return table;
}

TomlTable parse_toml_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    return parse_toml(in);
}

}  // namespace asln::harness
