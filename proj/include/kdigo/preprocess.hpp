#pragma once

#include <algorithm>
#include <span>
#include <string>

#include "kdigo/errors.hpp"
#include "kdigo/model.hpp"

namespace kdigo {

/// Gap limit used by the reference validation setup: gaps shorter than six hours.
inline constexpr int kDefaultMaxGapHours = 5;

/// Hourly urine rate in mL/kg/h, truncated to the micro-unit. Truncation keeps
/// `rate < threshold` exact with respect to the true ratio for any threshold
/// that is itself a whole number of micro-units.
inline Quantity urine_rate(const Quantity& volume_ml, const Quantity& weight_kg) {
    auto raw = detail::div_floor(static_cast<__int128>(volume_ml.raw) * kMicro, weight_kg.raw);
    return {static_cast<std::int64_t>(raw), Unit::mL_kg_h};
}

/// Places one signal on an hourly grid spanning floor(first)..floor(last).
/// Within an hour urine volumes are summed, creatinine keeps the last value,
/// and dialysis is true if any observation is true.
inline HourlyGrid resample_hourly(const ObservationSeries& series, const PatientProfile& profile) {
    if (series.points.empty())
        throw EmptySeries("empty " + std::string(signal_name(series.signal)) + " series for subject " +
                          series.subject_id);
    HourlyGrid grid;
    grid.subject_id = series.subject_id;
    grid.start = floor_hour(series.points.front().time);
    auto last = floor_hour(series.points.back().time);
    grid.hours.resize(static_cast<std::size_t>((last - grid.start).count()) + 1);

    for (const auto& obs : series.points) {
        auto& cell = grid.hours[static_cast<std::size_t>((floor_hour(obs.time) - grid.start).count())];
        switch (series.signal) {
        case Signal::urine_output: {
            const auto& q = std::get<Quantity>(obs.value);
            cell.uo_ml = Quantity{(cell.uo_ml ? cell.uo_ml->raw : 0) + q.raw, Unit::mL};
            break;
        }
        case Signal::creatinine:
            cell.scr = std::get<Quantity>(obs.value);
            break;
        case Signal::dialysis:
            cell.dialysis_active = cell.dialysis_active.value_or(false) || std::get<bool>(obs.value);
            break;
        }
    }
    if (series.signal == Signal::urine_output)
        for (auto& cell : grid.hours)
            if (cell.uo_ml) cell.uo_rate = urine_rate(*cell.uo_ml, profile.weight);
    return grid;
}

/// Overlays per-signal grids of one subject onto the union of their hour ranges.
inline HourlyGrid combine_grids(std::span<const HourlyGrid> parts) {
    if (parts.empty()) throw EmptySeries("no grids to combine");
    HourlyGrid out;
    out.subject_id = parts.front().subject_id;
    out.start = parts.front().start;
    auto end = parts.front().start + std::chrono::hours(static_cast<long>(parts.front().size()));
    for (const auto& g : parts) {
        out.start = std::min(out.start, g.start);
        end = std::max(end, g.start + std::chrono::hours(static_cast<long>(g.size())));
    }
    out.hours.resize(static_cast<std::size_t>((end - out.start).count()));
    for (const auto& g : parts) {
        auto offset = static_cast<std::size_t>((g.start - out.start).count());
        for (std::size_t i = 0; i < g.size(); ++i) {
            const auto& src = g.hours[i];
            auto& dst = out.hours[offset + i];
            if (src.uo_ml) dst.uo_ml = src.uo_ml;
            if (src.uo_rate) dst.uo_rate = src.uo_rate;
            if (src.scr) dst.scr = src.scr;
            if (src.dialysis_active) dst.dialysis_active = src.dialysis_active;
        }
    }
    return out;
}

namespace detail {

// Fills runs of missing cells no longer than max_gap that follow a present cell.
template <typename IsPresent, typename Copy>
void fill_runs(std::vector<HourCell>& cells, int max_gap, IsPresent present, Copy copy) {
    std::size_t n = cells.size();
    std::size_t i = 0;
    while (i < n && !present(cells[i])) ++i; // leading run stays missing
    while (i < n) {
        if (present(cells[i])) {
            ++i;
            continue;
        }
        std::size_t end = i;
        while (end < n && !present(cells[end])) ++end;
        if (end - i <= static_cast<std::size_t>(max_gap))
            for (std::size_t k = i; k < end; ++k) copy(cells[i - 1], cells[k]);
        i = end;
    }
}

} // namespace detail

inline HourlyGrid forward_fill(HourlyGrid grid, int max_gap_hours) {
    if (max_gap_hours < 0) throw ConfigError("max_gap_hours must be >= 0");
    if (max_gap_hours == 0) return grid;
    detail::fill_runs(
        grid.hours, max_gap_hours, [](const HourCell& c) { return c.uo_ml.has_value(); },
        [](const HourCell& from, HourCell& to) {
            to.uo_ml = from.uo_ml;
            to.uo_rate = from.uo_rate;
        });
    detail::fill_runs(
        grid.hours, max_gap_hours, [](const HourCell& c) { return c.scr.has_value(); },
        [](const HourCell& from, HourCell& to) { to.scr = from.scr; });
    detail::fill_runs(
        grid.hours, max_gap_hours, [](const HourCell& c) { return c.dialysis_active.has_value(); },
        [](const HourCell& from, HourCell& to) { to.dialysis_active = from.dialysis_active; });
    return grid;
}

} // namespace kdigo
