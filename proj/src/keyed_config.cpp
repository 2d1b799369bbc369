#include "admit/keyed_config.hpp"

#include "admit/csv.hpp"
#include "admit/error.hpp"

#include <fstream>
#include <istream>

namespace admit {

std::optional<std::string> KeyedConfig::Section::get(const std::string& key) const {
    for (const auto& [k, v] : entries) {
        if (k == key) return v;
    }
    return std::nullopt;
}

std::string KeyedConfig::Section::require(const std::string& key) const {
    auto v = get(key);
    if (!v) {
        throw ValidationError("config section [" + name + "] (line " + std::to_string(line) +
                              ") is missing key '" + key + "'");
    }
    return *v;
}

double KeyedConfig::Section::get_double(const std::string& key, double fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    auto d = csv::parse_double(*v);
    if (!d) throw ValidationError("config key '" + key + "' is not a number: " + *v);
    return *d;
}

long long KeyedConfig::Section::get_int(const std::string& key, long long fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    auto d = csv::parse_int(*v);
    if (!d) throw ValidationError("config key '" + key + "' is not an integer: " + *v);
    return *d;
}

KeyedConfig KeyedConfig::parse(std::istream& in) {
    KeyedConfig cfg;
    cfg.sections_.push_back(Section{"", 0, {}});
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string_view line = csv::trim(raw);
        if (line.empty() || line.front() == '#' || line.front() == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(lineno, "unterminated section header");
            cfg.sections_.push_back(
                Section{std::string(csv::trim(line.substr(1, line.size() - 2))), lineno, {}});
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(lineno, "expected 'key = value'");
        std::string key(csv::trim(line.substr(0, eq)));
        std::string value(csv::trim(line.substr(eq + 1)));
        if (key.empty()) throw ParseError(lineno, "empty key");
        cfg.sections_.back().entries.emplace_back(std::move(key), std::move(value));
    }
    return cfg;
}

KeyedConfig KeyedConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file: " + path);
    return parse(in);
}

std::vector<const KeyedConfig::Section*> KeyedConfig::all(const std::string& name) const {
    std::vector<const Section*> out;
    for (const auto& s : sections_) {
        if (s.name == name) out.push_back(&s);
    }
    return out;
}

const KeyedConfig::Section& KeyedConfig::section(const std::string& name) const {
    static const Section empty{};
    for (const auto& s : sections_) {
        if (s.name == name) return s;
    }
    return empty;
}

}  // namespace admit
