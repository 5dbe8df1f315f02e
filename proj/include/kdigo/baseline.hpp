#pragma once

// Creatinine baselines: window statistics over the hourly grid, a constant,
// or a Cockcroft-Gault back-calculation from an assumed filtration rate.

#include <algorithm>
#include <deque>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kdigo/errors.hpp"
#include "kdigo/model.hpp"

namespace kdigo {

enum class WindowStat : std::uint8_t { min, mean, first };

inline std::string_view stat_name(WindowStat s) {
    switch (s) {
    case WindowStat::min: return "min";
    case WindowStat::mean: return "mean";
    case WindowStat::first: return "first";
    }
    return "?";
}

inline std::optional<WindowStat> parse_stat(std::string_view s) {
    if (s == "min") return WindowStat::min;
    if (s == "mean") return WindowStat::mean;
    if (s == "first") return WindowStat::first;
    return std::nullopt;
}

namespace baseline {

struct FixedValue {
    Quantity value{kMicro, Unit::mg_dL};
    friend bool operator==(const FixedValue&, const FixedValue&) = default;
};

/// Statistic over hours [0, length) of the stay.
struct InitialWindow {
    WindowStat stat = WindowStat::min;
    int length_hours = 24;
    friend bool operator==(const InitialWindow&, const InitialWindow&) = default;
};

/// Statistic over hours [t - length, t), excluding the current hour.
struct RollingWindow {
    WindowStat stat = WindowStat::min;
    int length_hours = 168;
    friend bool operator==(const RollingWindow&, const RollingWindow&) = default;
};

struct CockcroftGault {
    Quantity assumed_gfr{75 * kMicro, Unit::mL_min};
    /// Share of the excess over ideal body weight kept in the adjusted weight.
    std::int64_t adjustment_factor_micro = 400'000;
    friend bool operator==(const CockcroftGault&, const CockcroftGault&) = default;
};

} // namespace baseline

using BaselineMethod =
    std::variant<baseline::FixedValue, baseline::InitialWindow, baseline::RollingWindow, baseline::CockcroftGault>;

inline void validate_method(const BaselineMethod& m) {
    std::visit(
        [](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, baseline::FixedValue>) {
                if (v.value.raw <= 0) throw ConfigError("fixed baseline must be > 0 mg/dL");
            } else if constexpr (std::is_same_v<T, baseline::CockcroftGault>) {
                if (v.assumed_gfr.raw <= 0) throw ConfigError("assumed GFR must be > 0 mL/min");
                if (v.adjustment_factor_micro < 0 || v.adjustment_factor_micro > kMicro)
                    throw ConfigError("adjusted body weight factor must lie in [0, 1]");
            } else {
                if (v.length_hours < 1) throw ConfigError("baseline window must be >= 1 hour");
            }
        },
        m);
}

/// Compact textual form: "fixed:1.1", "initial:mean:24", "rolling:min:168",
/// "cockcroft-gault:75".
inline std::string describe(const BaselineMethod& m) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, baseline::FixedValue>) return "fixed:" + v.value.to_string();
            else if constexpr (std::is_same_v<T, baseline::InitialWindow>)
                return "initial:" + std::string(stat_name(v.stat)) + ":" + std::to_string(v.length_hours);
            else if constexpr (std::is_same_v<T, baseline::RollingWindow>)
                return "rolling:" + std::string(stat_name(v.stat)) + ":" + std::to_string(v.length_hours);
            else return "cockcroft-gault:" + v.assumed_gfr.to_string();
        },
        m);
}

/// Devine ideal body weight: 50 kg (male) or 45.5 kg (female) plus 0.9 kg per
/// cm above 152.4 cm. Heights below 152.4 cm add nothing.
inline Quantity ideal_body_weight(const PatientProfile& p) {
    if (!p.height || !p.sex)
        throw MissingDemographics("subject " + p.subject_id + ": ideal body weight needs height and sex");
    std::int64_t base = *p.sex == Sex::male ? 50'000'000 : 45'500'000;
    std::int64_t over = std::max<std::int64_t>(0, p.height->raw - 152'400'000);
    auto extra = detail::div_round(static_cast<__int128>(over) * 9, 10);
    return {base + static_cast<std::int64_t>(extra), Unit::kg};
}

inline Quantity adjusted_body_weight(const PatientProfile& p, std::int64_t factor_micro = 400'000) {
    Quantity ibw = ideal_body_weight(p);
    if (p.weight.raw <= ibw.raw) return p.weight;
    auto excess = static_cast<__int128>(p.weight.raw - ibw.raw);
    return {ibw.raw + static_cast<std::int64_t>(detail::div_round(excess * factor_micro, kMicro)), Unit::kg};
}

namespace detail {

/// Weight entering Cockcroft-Gault: adjusted body weight when a height is on
/// record, the measured weight otherwise.
inline Quantity cockcroft_gault_weight(const PatientProfile& p, std::int64_t factor_micro) {
    return p.height ? adjusted_body_weight(p, factor_micro) : p.weight;
}

/// (140 - age) * weight * (0.85 if female) / (72 * divisor); the divisor is
/// creatinine (mg/dL) for clearance or clearance (mL/min) for creatinine.
inline std::int64_t cockcroft_gault_core(const PatientProfile& p, std::int64_t divisor_raw, std::int64_t factor_micro) {
    if (!p.age || !p.sex)
        throw MissingDemographics("subject " + p.subject_id + ": Cockcroft-Gault needs age and sex");
    std::int64_t age_years = p.age->raw / kMicro;
    Quantity weight = cockcroft_gault_weight(p, factor_micro);
    __int128 sex_factor = *p.sex == Sex::female ? 85 : 100;
    __int128 num = static_cast<__int128>(140 - age_years) * weight.raw * sex_factor * kMicro;
    __int128 den = static_cast<__int128>(72) * 100 * divisor_raw;
    return static_cast<std::int64_t>(div_round(num, den));
}

} // namespace detail

inline Quantity cockcroft_gault_clearance(const Quantity& scr, const PatientProfile& p,
                                          std::int64_t factor_micro = 400'000) {
    if (scr.raw <= 0) throw ConfigError("creatinine must be > 0 for Cockcroft-Gault");
    return {detail::cockcroft_gault_core(p, scr.raw, factor_micro), Unit::mL_min};
}

inline Quantity cockcroft_gault_creatinine(const baseline::CockcroftGault& m, const PatientProfile& p) {
    return {detail::cockcroft_gault_core(p, m.assumed_gfr.raw, m.adjustment_factor_micro), Unit::mg_dL};
}

namespace detail {

inline std::optional<Quantity> window_stat(const HourlyGrid& grid, std::size_t begin, std::size_t end,
                                           WindowStat stat) {
    end = std::min(end, grid.size());
    std::optional<std::int64_t> best;
    __int128 sum = 0;
    std::int64_t count = 0;
    for (std::size_t i = begin; i < end; ++i) {
        const auto& scr = grid.hours[i].scr;
        if (!scr) continue;
        if (stat == WindowStat::first) return scr;
        if (!best || scr->raw < *best) best = scr->raw;
        sum += scr->raw;
        ++count;
    }
    if (count == 0) return std::nullopt;
    if (stat == WindowStat::min) return Quantity{*best, Unit::mg_dL};
    return Quantity{static_cast<std::int64_t>(div_round(sum, count)), Unit::mg_dL};
}

} // namespace detail

/// Baseline creatinine (mg/dL) for hour `t`, or nullopt when the window holds
/// no creatinine value. Direct evaluation; see baseline_series for a whole stay.
inline std::optional<Quantity> baseline_at(const HourlyGrid& grid, std::size_t t, const BaselineMethod& method,
                                           const PatientProfile& profile) {
    return std::visit(
        [&](const auto& m) -> std::optional<Quantity> {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, baseline::FixedValue>) {
                return m.value;
            } else if constexpr (std::is_same_v<T, baseline::InitialWindow>) {
                return detail::window_stat(grid, 0, static_cast<std::size_t>(m.length_hours), m.stat);
            } else if constexpr (std::is_same_v<T, baseline::RollingWindow>) {
                auto len = static_cast<std::size_t>(m.length_hours);
                return detail::window_stat(grid, t >= len ? t - len : 0, t, m.stat);
            } else {
                return cockcroft_gault_creatinine(m, profile);
            }
        },
        method);
}

/// Baselines for every hour of the grid in a single pass.
inline std::vector<std::optional<Quantity>> baseline_series(const HourlyGrid& grid, const BaselineMethod& method,
                                                            const PatientProfile& profile) {
    const std::size_t n = grid.size();
    if (const auto* rolling = std::get_if<baseline::RollingWindow>(&method)) {
        std::vector<std::optional<Quantity>> out(n);
        const auto len = static_cast<std::size_t>(rolling->length_hours);
        std::deque<std::size_t> present;  // indices with a value, ascending
        std::deque<std::size_t> minima;   // indices with increasing values
        __int128 sum = 0;
        for (std::size_t t = 0; t < n; ++t) {
            if (t > 0 && grid.hours[t - 1].scr) {
                std::size_t j = t - 1;
                std::int64_t v = grid.hours[j].scr->raw;
                present.push_back(j);
                sum += v;
                while (!minima.empty() && grid.hours[minima.back()].scr->raw >= v) minima.pop_back();
                minima.push_back(j);
            }
            while (!present.empty() && present.front() + len < t) {
                sum -= grid.hours[present.front()].scr->raw;
                present.pop_front();
            }
            while (!minima.empty() && minima.front() + len < t) minima.pop_front();
            if (present.empty()) continue;
            switch (rolling->stat) {
            case WindowStat::min: out[t] = grid.hours[minima.front()].scr; break;
            case WindowStat::first: out[t] = grid.hours[present.front()].scr; break;
            case WindowStat::mean:
                out[t] = Quantity{static_cast<std::int64_t>(detail::div_round(sum, static_cast<__int128>(present.size()))),
                                  Unit::mg_dL};
                break;
            }
        }
        return out;
    }
    // Every other method is constant over the stay.
    return std::vector<std::optional<Quantity>>(n, n == 0 ? std::nullopt : baseline_at(grid, 0, method, profile));
}

} // namespace kdigo
