#pragma once

// The four staging pathways. Each is a per-hour classifier over an hourly
// grid; all threshold tests are integer comparisons on micro-units.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kdigo/baseline.hpp"
#include "kdigo/model.hpp"

namespace kdigo {

namespace threshold {
inline constexpr std::int64_t kOliguriaRate = 500'000;        // 0.5 mL/kg/h
inline constexpr std::int64_t kSevereOliguriaRate = 300'000;  // 0.3 mL/kg/h
inline constexpr int kStage1Hours = 6;
inline constexpr int kStage2Hours = 12;
inline constexpr int kStage3Hours = 24;
inline constexpr int kAnuriaHours = 12;
inline constexpr std::int64_t kAbsoluteRise = 300'000;        // 0.3 mg/dL
inline constexpr std::int64_t kAbsoluteCeiling = 4'000'000;   // 4.0 mg/dL
} // namespace threshold

enum class UrineMode : std::uint8_t {
    /// Every hour of the run must be below the threshold.
    strict_consecutive,
    /// Mean rate over the trailing window must be below the threshold.
    trailing_mean,
};

inline std::string_view mode_name(UrineMode m) {
    return m == UrineMode::strict_consecutive ? "strict_consecutive" : "trailing_mean";
}

inline std::optional<UrineMode> parse_mode(std::string_view s) {
    if (s == "strict_consecutive" || s == "strict") return UrineMode::strict_consecutive;
    if (s == "trailing_mean" || s == "mean") return UrineMode::trailing_mean;
    return std::nullopt;
}

struct ProbeConfig {
    UrineMode uo_mode = UrineMode::strict_consecutive;
    Quantity anuria_threshold{0, Unit::mL_kg_h};
    BaselineMethod rel_baseline = baseline::RollingWindow{WindowStat::min, 168};
    BaselineMethod abs_baseline = baseline::RollingWindow{WindowStat::min, 48};
};

inline void validate_probe_config(const ProbeConfig& cfg) {
    if (cfg.anuria_threshold.raw < 0 || cfg.anuria_threshold.raw >= threshold::kSevereOliguriaRate)
        throw ConfigError("anuria threshold must lie in [0, 0.3) mL/kg/h");
    validate_method(cfg.rel_baseline);
    validate_method(cfg.abs_baseline);
}

using RateSeries = std::span<const std::optional<Quantity>>;

inline std::vector<std::optional<Quantity>> rates_of(const HourlyGrid& grid) {
    std::vector<std::optional<Quantity>> out;
    out.reserve(grid.size());
    for (const auto& c : grid.hours) out.push_back(c.uo_rate);
    return out;
}

namespace detail {

inline Stage classify_runs(int n05, int n03, int n_anuria) {
    using namespace threshold;
    if (n03 >= kStage3Hours || n_anuria >= kAnuriaHours) return Stage::s3;
    if (n05 >= kStage2Hours) return Stage::s2;
    if (n05 >= kStage1Hours) return Stage::s1;
    return Stage::s0;
}

// Mean of rates[t-len+1 .. t] below `limit`, false if the window leaves the
// grid or has a gap.
inline bool window_mean_below(RateSeries rates, std::size_t t, int len, std::int64_t limit) {
    auto L = static_cast<std::size_t>(len);
    if (t + 1 < L) return false;
    __int128 sum = 0;
    for (std::size_t i = t + 1 - L; i <= t; ++i) {
        if (!rates[i]) return false;
        sum += rates[i]->raw;
    }
    return sum < static_cast<__int128>(limit) * len;
}

} // namespace detail

/// Urine-output stage at hour t. Unknown when the rate at t is missing.
inline Stage uo_stage(RateSeries rates, std::size_t t, const ProbeConfig& cfg) {
    using namespace threshold;
    if (!rates[t]) return Stage::unknown;
    int n05 = 0, n03 = 0, na = 0;
    bool in05 = true, in03 = true, ina = true;
    for (std::size_t k = 0; k <= t && k < static_cast<std::size_t>(kStage3Hours); ++k) {
        const auto& r = rates[t - k];
        in05 = in05 && r && r->raw < kOliguriaRate;
        in03 = in03 && r && r->raw < kSevereOliguriaRate;
        ina = ina && r && r->raw <= cfg.anuria_threshold.raw;
        n05 += in05;
        n03 += in03;
        na += ina;
        if (!in05) break;
    }
    if (cfg.uo_mode == UrineMode::strict_consecutive) return detail::classify_runs(n05, n03, na);

    if (na >= kAnuriaHours || detail::window_mean_below(rates, t, kStage3Hours, kSevereOliguriaRate)) return Stage::s3;
    if (detail::window_mean_below(rates, t, kStage2Hours, kOliguriaRate)) return Stage::s2;
    if (detail::window_mean_below(rates, t, kStage1Hours, kOliguriaRate)) return Stage::s1;
    return Stage::s0;
}

inline Stage uo_stage(const HourlyGrid& grid, std::size_t t, const ProbeConfig& cfg) {
    auto rates = rates_of(grid);
    return uo_stage(RateSeries(rates), t, cfg);
}

/// Urine-output stages for every hour using running counters and prefix sums.
inline std::vector<Stage> uo_stages(RateSeries rates, const ProbeConfig& cfg) {
    using namespace threshold;
    const std::size_t n = rates.size();
    std::vector<Stage> out(n, Stage::unknown);
    int n05 = 0, n03 = 0, na = 0;
    std::vector<__int128> prefix(n + 1, 0);     // sum of present rates
    std::vector<std::size_t> gaps(n + 1, 0);    // count of missing hours
    for (std::size_t t = 0; t < n; ++t) {
        const auto& r = rates[t];
        prefix[t + 1] = prefix[t] + (r ? r->raw : 0);
        gaps[t + 1] = gaps[t] + (r ? 0 : 1);
        n05 = (r && r->raw < kOliguriaRate) ? n05 + 1 : 0;
        n03 = (r && r->raw < kSevereOliguriaRate) ? n03 + 1 : 0;
        na = (r && r->raw <= cfg.anuria_threshold.raw) ? na + 1 : 0;
        if (!r) continue;
        if (cfg.uo_mode == UrineMode::strict_consecutive) {
            out[t] = detail::classify_runs(n05, n03, na);
            continue;
        }
        auto below = [&](int len, std::int64_t limit) {
            auto L = static_cast<std::size_t>(len);
            if (t + 1 < L || gaps[t + 1] != gaps[t + 1 - L]) return false;
            return prefix[t + 1] - prefix[t + 1 - L] < static_cast<__int128>(limit) * len;
        };
        if (na >= kAnuriaHours || below(kStage3Hours, kSevereOliguriaRate)) out[t] = Stage::s3;
        else if (below(kStage2Hours, kOliguriaRate)) out[t] = Stage::s2;
        else if (below(kStage1Hours, kOliguriaRate)) out[t] = Stage::s1;
        else out[t] = Stage::s0;
    }
    return out;
}

inline std::vector<Stage> uo_stages(const HourlyGrid& grid, const ProbeConfig& cfg) {
    auto rates = rates_of(grid);
    return uo_stages(RateSeries(rates), cfg);
}

/// Absolute creatinine criterion: >= 4.0 mg/dL is stage 3 regardless of the
/// baseline; a rise of >= 0.3 mg/dL over the baseline is stage 1.
inline Stage abs_scr_stage(const std::optional<Quantity>& current, const std::optional<Quantity>& base) {
    if (!current) return Stage::unknown;
    if (current->raw >= threshold::kAbsoluteCeiling) return Stage::s3;
    if (!base) return Stage::unknown;
    return current->raw - base->raw >= threshold::kAbsoluteRise ? Stage::s1 : Stage::s0;
}

/// Relative creatinine criterion on half-open ratio bands [1.5, 2), [2, 3), [3, inf).
inline Stage rel_scr_stage(const std::optional<Quantity>& current, const std::optional<Quantity>& base) {
    if (!current || !base) return Stage::unknown;
    __int128 c = current->raw;
    __int128 b = base->raw;
    if (c >= 3 * b) return Stage::s3;
    if (c >= 2 * b) return Stage::s2;
    if (2 * c >= 3 * b) return Stage::s1;
    return Stage::s0;
}

inline Stage abs_scr_stage(const HourlyGrid& grid, std::size_t t, const ProbeConfig& cfg,
                           const PatientProfile& profile) {
    const auto& c = grid.hours[t].scr;
    if (c && c->raw >= threshold::kAbsoluteCeiling) return Stage::s3;
    return abs_scr_stage(c, baseline_at(grid, t, cfg.abs_baseline, profile));
}

inline Stage rel_scr_stage(const HourlyGrid& grid, std::size_t t, const ProbeConfig& cfg,
                           const PatientProfile& profile) {
    if (!grid.hours[t].scr) return Stage::unknown;
    return rel_scr_stage(grid.hours[t].scr, baseline_at(grid, t, cfg.rel_baseline, profile));
}

/// Stage 3 while dialysis is active.
inline Stage dialysis_stage(const std::optional<bool>& active) {
    if (!active) return Stage::unknown;
    return *active ? Stage::s3 : Stage::s0;
}

inline Stage dialysis_stage(const HourlyGrid& grid, std::size_t t) { return dialysis_stage(grid.hours[t].dialysis_active); }

} // namespace kdigo
