#include "netsamp/config.hpp"

#include <algorithm>
#include <fstream>
#include <istream>

#include <fmt/format.h>

#include "netsamp/errors.hpp"
#include "text_util.hpp"

namespace netsamp {

const std::vector<SettingSpec> &setting_specs() {
    static const std::vector<SettingSpec> specs = {
        {"coupon_limit", "auto", SettingGroup::design, "coupons per respondent (auto: 3 for rds/rdsplus, 25 for sb/sbplus)"},
        {"seed_target", "240", SettingGroup::design, "expected number of day-0 seeds"},
        {"sample_target", "1200", SettingGroup::design, "survey sample size"},
        {"coupon_expiry", "28", SettingGroup::design, "days a coupon stays valid"},
        {"daily_trace_prob", "0.004", SettingGroup::design, "daily probability a holder recruits along one link"},
        {"reseed_prob", "0.00001", SettingGroup::design, "daily reseed probability per unsampled node"},
        {"max_days", "1000", SettingGroup::design, "hard limit on survey days"},
        {"plus_links", "auto", SettingGroup::design, "record all within-sample links (auto: from the design label)"},
        {"fast_target", "400", SettingGroup::fast, "target size of the fast sample"},
        {"fast_trace_prob", "0.5", SettingGroup::fast, "fast process link tracing probability"},
        {"removal_mode", "adaptive", SettingGroup::fast, "adaptive or fixed_gated"},
        {"removal_prob", "0.5", SettingGroup::fast, "removal probability for fixed_gated"},
        {"fast_reseed_prob", "0.1", SettingGroup::fast, "fast process reseed probability per outside node"},
        {"iterations", "10000", SettingGroup::fast, "fast process iterations T"},
        {"burn_in", "0", SettingGroup::fast, "iterations discarded before counting"},
        {"fast_mode", "chain", SettingGroup::fast, "chain, independent or with_replacement"},
        {"all_pairs", "false", SettingGroup::fast, "track joint frequencies for every node pair (O(n^2))"},
        {"designs", "rds,rdsplus,sb,sbplus", SettingGroup::eval, "designs to evaluate"},
        {"reps", "1000", SettingGroup::eval, "replicates per design"},
        {"variables", "", SettingGroup::eval, "variables to estimate (empty: degree and every attribute)"},
        {"alpha", "0.05", SettingGroup::eval, "interval level is 1 - alpha"},
        {"variance", "simple", SettingGroup::eval, "interval variance: simple, diagonal, conservative, edge, full"},
        {"seed", "1", SettingGroup::eval, "master random seed"},
        {"workers", "1", SettingGroup::eval, "worker threads"},
    };
    return specs;
}

std::string config_key_help() {
    std::string text = "Config file keys (key = value; flags override file values):\n";
    for (const auto &s : setting_specs()) {
        text += fmt::format("  {:<18} default {:<22} {}\n", s.key, s.default_value.empty() ? "\"\"" : s.default_value,
                            s.help);
    }
    return text;
}

std::vector<std::string> split_list(const std::string &text) {
    std::vector<std::string> parts;
    for (auto f : detail::split_csv(text)) {
        if (!f.empty()) parts.emplace_back(f);
    }
    return parts;
}

RunConfig::RunConfig() {
    for (const auto &s : setting_specs()) values_[s.key] = s.default_value;
}

void RunConfig::set(const std::string &key, const std::string &value) {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second = value;
}

const std::string &RunConfig::get(const std::string &key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
    return it->second;
}

void RunConfig::merge_stream(std::istream &in, const std::string &source) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view text = line;
        if (auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
        text = detail::trim(text);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(fmt::format("{}:{}: expected key = value", source, line_no));
        }
        const std::string key(detail::trim(text.substr(0, eq)));
        const std::string value(detail::trim(text.substr(eq + 1)));
        if (values_.find(key) == values_.end()) {
            throw ConfigError(fmt::format("{}:{}: unknown config key '{}'", source, line_no, key));
        }
        values_[key] = value;
    }
}

void RunConfig::merge_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    merge_stream(in, path);
}

double RunConfig::get_double(const std::string &key) const {
    auto v = detail::parse_double(get(key));
    if (!v) throw ConfigError(fmt::format("config key '{}': expected a number, got '{}'", key, get(key)));
    return *v;
}

std::size_t RunConfig::get_count(const std::string &key) const {
    auto v = detail::parse_int<std::size_t>(get(key));
    if (!v) throw ConfigError(fmt::format("config key '{}': expected a non-negative integer, got '{}'", key, get(key)));
    return *v;
}

int RunConfig::get_int(const std::string &key) const {
    auto v = detail::parse_int<int>(get(key));
    if (!v) throw ConfigError(fmt::format("config key '{}': expected an integer, got '{}'", key, get(key)));
    return *v;
}

bool RunConfig::get_bool(const std::string &key) const {
    const auto &v = get(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(fmt::format("config key '{}': expected true or false, got '{}'", key, v));
}

std::uint64_t RunConfig::seed() const {
    auto v = detail::parse_int<std::uint64_t>(get("seed"));
    if (!v) throw ConfigError(fmt::format("config key 'seed': expected a non-negative integer, got '{}'", get("seed")));
    return *v;
}

DesignConfig RunConfig::design(const std::string &label) const {
    DesignConfig cfg = design_preset(label);
    if (get("coupon_limit") != "auto") cfg.coupon_limit = get_count("coupon_limit");
    if (get("plus_links") != "auto") cfg.plus_links = get_bool("plus_links");
    cfg.seed_target = get_double("seed_target");
    cfg.sample_target = get_count("sample_target");
    cfg.coupon_expiry = get_int("coupon_expiry");
    cfg.daily_trace_prob = get_double("daily_trace_prob");
    cfg.reseed_prob = get_double("reseed_prob");
    cfg.max_days = get_int("max_days");
    try {
        cfg.validate();
    } catch (const ConfigError &e) {
        throw ConfigError(std::string("config key ") + e.what());
    }
    return cfg;
}

FastConfig RunConfig::fast() const {
    FastConfig cfg;
    cfg.target_size = get_count("fast_target");
    cfg.trace_prob = get_double("fast_trace_prob");
    cfg.removal_mode = parse_removal_mode(get("removal_mode"));
    cfg.removal_prob = get_double("removal_prob");
    cfg.reseed_prob = get_double("fast_reseed_prob");
    cfg.iterations = get_count("iterations");
    cfg.burn_in = get_count("burn_in");
    cfg.mode = parse_fast_mode(get("fast_mode"));
    cfg.all_pairs = get_bool("all_pairs");
    try {
        cfg.validate(std::numeric_limits<std::size_t>::max());
    } catch (const ConfigError &e) {
        throw ConfigError(std::string("config key ") + e.what());
    }
    return cfg;
}

EvalConfig RunConfig::eval() const {
    EvalConfig cfg;
    auto labels = split_list(get("designs"));
    if (labels.size() == 1 && labels.front() == "all") labels = {"rds", "rdsplus", "sb", "sbplus"};
    for (const auto &l : labels) {
        const std::string canon = canonical_design_label(l);
        if (std::any_of(cfg.designs.begin(), cfg.designs.end(), [&](const auto &d) { return d.label == canon; })) {
            throw ConfigError("config key 'designs': design '" + canon + "' listed twice");
        }
        cfg.designs.push_back({canon, design(canon)});
    }
    cfg.fast = fast();
    cfg.replicates = get_count("reps");
    cfg.variables = split_list(get("variables"));
    cfg.alpha = get_double("alpha");
    cfg.ci_variance = parse_variance_method(get("variance"));
    cfg.master_seed = seed();
    cfg.workers = get_count("workers");
    if (cfg.replicates < 1) throw ConfigError("config key 'reps' must be at least 1");
    if (cfg.workers < 1) throw ConfigError("config key 'workers' must be at least 1");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw ConfigError("config key 'alpha' must lie in (0, 1)");
    return cfg;
}

}  // namespace netsamp
