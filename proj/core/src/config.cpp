#include "magband/config.hpp"

#include "magband/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

extern char** environ;

namespace magband {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

} // namespace

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

Config Config::from_string(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash_pos = line.find_first_of("#;");
        if (hash_pos != std::string::npos) line.erase(hash_pos);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw InvalidInput("config: unterminated section header at line " +
                                   std::to_string(lineno));
            section = lower(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidInput("config: expected key=value at line " +
                               std::to_string(lineno));
        std::string key = lower(trim(line.substr(0, eq)));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw InvalidInput("config: empty key at line " + std::to_string(lineno));
        cfg.kv_[section.empty() ? key : section + "." + key] = value;
    }
    return cfg;
}

std::string Config::get_str(const std::string& key, const std::string& dflt) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? dflt : it->second;
}

double Config::get_num(const std::string& key, double dflt) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return dflt;
    char* end = nullptr;
    double v = std::strtod(it->second.c_str(), &end);
    if (end == it->second.c_str() || *end != '\0')
        throw InvalidInput("config: value of '" + key + "' is not numeric: '" +
                           it->second + "'");
    return v;
}

long long Config::get_int(const std::string& key, long long dflt) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return dflt;
    char* end = nullptr;
    long long v = std::strtoll(it->second.c_str(), &end, 10);
    if (end == it->second.c_str() || *end != '\0')
        throw InvalidInput("config: value of '" + key + "' is not an integer: '" +
                           it->second + "'");
    return v;
}

bool Config::get_bool(const std::string& key, bool dflt) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return dflt;
    std::string v = lower(it->second);
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw InvalidInput("config: value of '" + key + "' is not a boolean: '" +
                       it->second + "'");
}

std::vector<double> Config::get_list(const std::string& key,
                                     const std::vector<double>& dflt) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return dflt;
    std::vector<double> out;
    std::istringstream in(it->second);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        char* end = nullptr;
        double v = std::strtod(item.c_str(), &end);
        if (end == item.c_str() || *end != '\0')
            throw InvalidInput("config: list entry of '" + key +
                               "' is not numeric: '" + item + "'");
        out.push_back(v);
    }
    return out;
}

void Config::set(const std::string& key, const std::string& value) {
    kv_[lower(trim(key))] = trim(value);
}

void Config::apply_env() {
    const std::string prefix = "MAGBAND_";
    for (char** e = environ; e && *e; ++e) {
        std::string entry(*e);
        if (entry.compare(0, prefix.size(), prefix) != 0) continue;
        std::size_t eq = entry.find('=');
        if (eq == std::string::npos) continue;
        std::string name = entry.substr(prefix.size(), eq - prefix.size());
        std::string value = entry.substr(eq + 1);
        std::size_t us = name.find('_');
        if (us == std::string::npos || us == 0 || us + 1 >= name.size()) continue;
        std::string key = lower(name.substr(0, us)) + "." + lower(name.substr(us + 1));
        kv_[key] = value;
    }
}

std::string Config::canonical() const {
    std::string out;
    for (const auto& [k, v] : kv_) {
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

std::string Config::hash() const {
    std::string c = canonical();
    unsigned long long h = 14695981039346656037ULL;
    for (unsigned char byte : c) {
        h ^= byte;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", h);
    return buf;
}

} // namespace magband
