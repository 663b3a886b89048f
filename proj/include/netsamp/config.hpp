#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "netsamp/design.hpp"
#include "netsamp/fastproc.hpp"
#include "netsamp/harness.hpp"

namespace netsamp {

enum class SettingGroup { design, fast, eval };

struct SettingSpec {
    std::string key;
    std::string default_value;
    SettingGroup group;
    std::string help;
};

/// Every key accepted in a config file, with its default.
const std::vector<SettingSpec> &setting_specs();

/// Resolved run configuration: defaults, then a key=value file, then flags.
/// Values stay as text until a typed view is requested, so each diagnostic
/// can name the offending key.
class RunConfig {
public:
    RunConfig();

    /// Reads "key = value" lines; "#" starts a comment. Unknown keys and
    /// malformed lines throw ConfigError.
    void merge_file(const std::string &path);
    void merge_stream(std::istream &in, const std::string &source = "config");
    /// Throws ConfigError on an unknown key.
    void set(const std::string &key, const std::string &value);
    const std::string &get(const std::string &key) const;

    /// Design settings for one labeled design (coupon_limit and plus_links
    /// default from the label when left at "auto").
    DesignConfig design(const std::string &label) const;
    FastConfig fast() const;
    /// Full evaluation config; designs come from the "designs" key.
    EvalConfig eval() const;
    std::uint64_t seed() const;

private:
    double get_double(const std::string &key) const;
    std::size_t get_count(const std::string &key) const;
    int get_int(const std::string &key) const;
    bool get_bool(const std::string &key) const;

    std::map<std::string, std::string> values_;
};

/// Help text listing every config key and default.
std::string config_key_help();

/// Splits "a,b , c" into trimmed non-empty parts.
std::vector<std::string> split_list(const std::string &text);

}  // namespace netsamp
