#pragma once

// Textual and JSON forms of the run configuration.

#include <algorithm>
#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "kdigo/pipeline.hpp"

namespace kdigo {

/// Values used for the parts a baseline spec string leaves out.
struct BaselineDefaults {
    WindowStat stat = WindowStat::min;
    int window_hours = 168;
    Quantity assumed_gfr{75 * kMicro, Unit::mL_min};
    std::int64_t abw_factor_micro = 400'000;
};

/// Parses "rolling[:STAT[:HOURS]]", "initial[:STAT[:HOURS]]", "fixed:VALUE"
/// or "cockcroft-gault[:GFR]". Throws ConfigError.
inline BaselineMethod parse_baseline(std::string_view spec, const BaselineDefaults& d) {
    std::vector<std::string_view> parts;
    for (std::size_t pos = 0;;) {
        auto colon = spec.find(':', pos);
        parts.push_back(spec.substr(pos, colon == std::string_view::npos ? std::string_view::npos : colon - pos));
        if (colon == std::string_view::npos) break;
        pos = colon + 1;
    }
    auto bad = [&](const std::string& why) -> ConfigError {
        return ConfigError("baseline '" + std::string(spec) + "': " + why);
    };
    const auto kind = parts[0];
    BaselineMethod m;
    if (kind == "rolling" || kind == "initial") {
        if (parts.size() > 3) throw bad("too many fields");
        WindowStat stat = d.stat;
        int hours = d.window_hours;
        if (parts.size() > 1) {
            auto s = parse_stat(parts[1]);
            if (!s) throw bad("statistic must be min, mean or first");
            stat = *s;
        }
        if (parts.size() > 2) {
            auto [p, ec] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), hours);
            if (ec != std::errc{} || p != parts[2].data() + parts[2].size()) throw bad("window hours must be an integer");
        }
        if (kind == "rolling") m = baseline::RollingWindow{stat, hours};
        else m = baseline::InitialWindow{stat, hours};
    } else if (kind == "fixed") {
        if (parts.size() != 2) throw bad("expected fixed:VALUE");
        auto raw = parse_micro(parts[1]);
        if (!raw) throw bad("invalid value");
        m = baseline::FixedValue{{*raw, Unit::mg_dL}};
    } else if (kind == "cockcroft-gault" || kind == "cg") {
        if (parts.size() > 2) throw bad("expected cockcroft-gault[:GFR]");
        baseline::CockcroftGault cg{d.assumed_gfr, d.abw_factor_micro};
        if (parts.size() == 2) {
            auto raw = parse_micro(parts[1]);
            if (!raw) throw bad("invalid GFR");
            cg.assumed_gfr = {*raw, Unit::mL_min};
        }
        m = cg;
    } else {
        throw bad("unknown kind (rolling, initial, fixed, cockcroft-gault)");
    }
    validate_method(m);
    return m;
}

inline bool uses_cockcroft_gault(const ProbeConfig& p) {
    return std::holds_alternative<baseline::CockcroftGault>(p.rel_baseline) ||
           std::holds_alternative<baseline::CockcroftGault>(p.abs_baseline);
}

inline nlohmann::json to_json(const RunConfig& cfg) {
    std::int64_t factor = 400'000;
    for (const auto* m : {&cfg.probe.rel_baseline, &cfg.probe.abs_baseline})
        if (const auto* cg = std::get_if<baseline::CockcroftGault>(m)) factor = cg->adjustment_factor_micro;
    return {
        {"uo_mode", std::string(mode_name(cfg.probe.uo_mode))},
        {"anuria_threshold", cfg.probe.anuria_threshold.to_string()},
        {"rel_baseline", describe(cfg.probe.rel_baseline)},
        {"abs_baseline", describe(cfg.probe.abs_baseline)},
        {"abw_factor", format_micro(factor)},
        {"max_gap_hours", cfg.max_gap_hours},
        {"imputation_enabled", cfg.imputation_enabled},
        {"creatinine_unit", std::string(unit_name(cfg.creatinine_unit))},
    };
}

namespace detail {

// Accepts JSON numbers and numeric strings; numbers go through their
// shortest decimal rendering so 0.1 stays exactly 0.1.
inline std::int64_t json_micro(const nlohmann::json& v, const char* key) {
    std::string text = v.is_string() ? v.get<std::string>() : v.is_number() ? v.dump() : std::string();
    auto raw = parse_micro(text);
    if (!raw) throw ConfigError(std::string("config key '") + key + "' must be a number");
    return *raw;
}

} // namespace detail

/// Overlays the keys present in `j` onto `base`. Unknown keys are rejected.
inline RunConfig run_config_from_json(const nlohmann::json& j, RunConfig base = {}) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    static const std::vector<std::string> known{"uo_mode",       "anuria_threshold", "rel_baseline",
                                                "abs_baseline",  "abw_factor",       "max_gap_hours",
                                                "imputation_enabled", "creatinine_unit", "jobs"};
    for (const auto& [key, value] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError("unknown config key '" + key + "'");
    try {
        if (j.contains("uo_mode")) {
            auto m = parse_mode(j.at("uo_mode").get<std::string>());
            if (!m) throw ConfigError("uo_mode must be strict_consecutive or trailing_mean");
            base.probe.uo_mode = *m;
        }
        if (j.contains("anuria_threshold"))
            base.probe.anuria_threshold = {detail::json_micro(j.at("anuria_threshold"), "anuria_threshold"), Unit::mL_kg_h};
        BaselineDefaults d;
        if (j.contains("abw_factor")) d.abw_factor_micro = detail::json_micro(j.at("abw_factor"), "abw_factor");
        if (j.contains("rel_baseline")) {
            d.window_hours = 168;
            base.probe.rel_baseline = parse_baseline(j.at("rel_baseline").get<std::string>(), d);
        }
        if (j.contains("abs_baseline")) {
            d.window_hours = 48;
            base.probe.abs_baseline = parse_baseline(j.at("abs_baseline").get<std::string>(), d);
        }
        if (j.contains("max_gap_hours")) base.max_gap_hours = j.at("max_gap_hours").get<int>();
        if (j.contains("imputation_enabled")) base.imputation_enabled = j.at("imputation_enabled").get<bool>();
        if (j.contains("creatinine_unit")) {
            auto u = parse_unit(j.at("creatinine_unit").get<std::string>());
            if (!u) throw ConfigError("creatinine_unit must be mg/dL or umol/L");
            base.creatinine_unit = *u;
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    validate_run_config(base);
    return base;
}

} // namespace kdigo
