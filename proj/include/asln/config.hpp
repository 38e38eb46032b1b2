#pragma once

#include "asln/types.hpp"

#include <istream>
#include <map>
#include <string>
#include <vector>

namespace asln::harness {

// Minimal TOML subset, enough for the experiment configs shipped in
// configs/: `[section]` headers, `key = value` pairs, `#` comments, and
// values that are strings, integers, floats, booleans, or flat arrays of
// those. Keys are flattened to "section.key". No nested tables, no escapes.
struct TomlValue {
    enum class Type { Str, Int, Float, Bool, Array };
    Type type = Type::Str;
    std::string str;
    long long integer = 0;
    double real = 0.0;
    bool boolean = false;
    std::vector<TomlValue> array;

    double as_double() const;
    long long as_int() const;
};

using TomlTable = std::map<std::string, TomlValue>;

TomlTable parse_toml(std::istream& in);
TomlTable parse_toml_file(const std::string& path);

}  // namespace asln::harness
