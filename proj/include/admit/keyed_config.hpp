#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace admit {

// INI-style keyed text:
//
//   # comment
//   [section]
//   key = value
//
// Sections may repeat (each occurrence is kept in order); keys before the
// first section header belong to an unnamed section "".
class KeyedConfig {
public:
    struct Section {
        std::string name;
        std::size_t line = 0;
        std::vector<std::pair<std::string, std::string>> entries;

        std::optional<std::string> get(const std::string& key) const;
        std::string require(const std::string& key) const;
        double get_double(const std::string& key, double fallback) const;
        long long get_int(const std::string& key, long long fallback) const;
    };

    static KeyedConfig parse(std::istream& in);
    static KeyedConfig load(const std::string& path);

    const std::vector<Section>& sections() const noexcept { return sections_; }
    std::vector<const Section*> all(const std::string& name) const;
    // First section with the given name; an empty section if absent.
    const Section& section(const std::string& name) const;

private:
    std::vector<Section> sections_;
};

}  // namespace admit
