#pragma once

#include <map>
#include <string>
#include <vector>

namespace magband {

// INI-style key-value configuration: "[section]" headers flatten to
// "section.key" entries; '#' and ';' start comments.  Precedence is
// flags > environment > file, realized by apply order (file load, then
// apply_env, then explicit set calls from the CLI).
class Config {
public:
    Config() = default;

    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text);

    bool has(const std::string& key) const { return kv_.count(key) > 0; }
    std::string get_str(const std::string& key, const std::string& dflt) const;
    double get_num(const std::string& key, double dflt) const;
    long long get_int(const std::string& key, long long dflt) const;
    bool get_bool(const std::string& key, bool dflt) const;
    // Comma-separated numeric list; missing key gives dflt.
    std::vector<double> get_list(const std::string& key,
                                 const std::vector<double>& dflt = {}) const;

    void set(const std::string& key, const std::string& value);

    // MAGBAND_<SECTION>_<KEY...> = value; the first underscore after the
    // prefix becomes the section dot, the rest is lowercased verbatim.
    void apply_env();

    // Sorted "key=value" lines; the hash input and the reproducibility record.
    std::string canonical() const;
    // FNV-1a 64 of canonical(), 16 hex digits; embedded in every output file.
    std::string hash() const;

    const std::map<std::string, std::string>& entries() const { return kv_; }

private:
    std::map<std::string, std::string> kv_;
};

} // namespace magband
