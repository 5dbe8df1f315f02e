#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <optional>
#include <ostream>
#include <thread>
#include <vector>

#include "kdigo/baseline.hpp"
#include "kdigo/ingest.hpp"
#include "kdigo/preprocess.hpp"
#include "kdigo/probes.hpp"

namespace kdigo {

struct RunConfig {
    ProbeConfig probe;
    int max_gap_hours = kDefaultMaxGapHours;
    bool imputation_enabled = true;
    Unit creatinine_unit = Unit::mg_dL;
};

inline void validate_run_config(const RunConfig& cfg) {
    validate_probe_config(cfg.probe);
    if (cfg.max_gap_hours < 0) throw ConfigError("max_gap_hours must be >= 0");
    if (cfg.creatinine_unit != Unit::mg_dL && cfg.creatinine_unit != Unit::umol_L)
        throw ConfigError("creatinine unit must be mg/dL or umol/L");
}

/// Hourly grid of one subject over the union of its signals' time ranges,
/// forward-filled when imputation is enabled.
inline HourlyGrid build_grid(const DatasetBundle& bundle, const SubjectId& subject, const RunConfig& cfg) {
    auto profile = bundle.profiles.find(subject);
    std::vector<HourlyGrid> parts;
    for (Signal s : {Signal::urine_output, Signal::creatinine, Signal::dialysis})
        if (const auto* series = bundle.find(subject, s); series && !series->points.empty())
            parts.push_back(resample_hourly(*series, profile->second));
    if (parts.empty()) throw EmptySubject("subject " + subject + " has no observations");
    HourlyGrid grid = combine_grids(parts);
    if (cfg.imputation_enabled) grid = forward_fill(std::move(grid), cfg.max_gap_hours);
    return grid;
}

/// Stages every hour of a prepared grid.
inline std::vector<StageRecord> annotate_grid(const HourlyGrid& grid, const PatientProfile& profile,
                                              const ProbeConfig& cfg) {
    auto rel = baseline_series(grid, cfg.rel_baseline, profile);
    auto abs = baseline_series(grid, cfg.abs_baseline, profile);
    auto uo = uo_stages(grid, cfg);
    std::vector<StageRecord> out;
    out.reserve(grid.size());
    for (std::size_t t = 0; t < grid.size(); ++t) {
        const auto& cell = grid.hours[t];
        StageRecord r;
        r.subject_id = grid.subject_id;
        r.timestamp = grid.time_at(t);
        r.uo_stage = uo[t];
        r.abs_scr_stage = abs_scr_stage(cell.scr, abs[t]);
        r.rel_scr_stage = rel_scr_stage(cell.scr, rel[t]);
        r.dialysis_stage = dialysis_stage(cell.dialysis_active);
        r.overall_stage = merge_stages(r.uo_stage, r.abs_scr_stage, r.rel_scr_stage, r.dialysis_stage);
        r.baseline_rel = rel[t];
        r.baseline_abs = abs[t];
        out.push_back(std::move(r));
    }
    return out;
}

inline std::vector<StageRecord> annotate_subject(const DatasetBundle& bundle, const SubjectId& subject,
                                                 const RunConfig& cfg) {
    auto profile = bundle.profiles.find(subject);
    if (profile == bundle.profiles.end()) throw UnknownSubject("unknown subject " + subject);
    return annotate_grid(build_grid(bundle, subject, cfg), profile->second, cfg.probe);
}

/// Annotates every subject with data, `jobs` at a time. Output is ordered by
/// (subject_id, timestamp) whatever the execution order; if subjects fail,
/// the error of the first failing subject in that order is rethrown.
inline std::vector<StageRecord> annotate_all(const DatasetBundle& bundle, const RunConfig& cfg, unsigned jobs = 1) {
    validate_run_config(cfg);
    const auto subjects = bundle.subjects();
    std::vector<std::vector<StageRecord>> results(subjects.size());
    std::vector<std::exception_ptr> errors(subjects.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < subjects.size(); i = next++) {
            try {
                results[i] = annotate_subject(bundle, subjects[i], cfg);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, subjects.size()))));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<StageRecord> out;
    for (auto& r : results) std::move(r.begin(), r.end(), std::back_inserter(out));
    return out;
}

struct PatientSummary {
    SubjectId subject_id;
    std::array<std::optional<HourStamp>, 5> first_aki{}; // indexed by Category
    std::array<Stage, 5> max_stage{Stage::unknown, Stage::unknown, Stage::unknown, Stage::unknown, Stage::unknown};
    std::size_t hours_observed = 0;

    const std::optional<HourStamp>& first_aki_in(Category c) const { return first_aki[static_cast<std::size_t>(c)]; }
    Stage max_in(Category c) const { return max_stage[static_cast<std::size_t>(c)]; }
};

/// First AKI hour and maximum stage per pathway; unknown hours count as no AKI.
inline PatientSummary summarize(const std::vector<StageRecord>& records) {
    if (records.empty()) throw EmptyInput("cannot summarize an empty record list");
    PatientSummary s;
    s.subject_id = records.front().subject_id;
    s.hours_observed = records.size();
    for (const auto& r : records) {
        if (r.subject_id != s.subject_id)
            throw MixedSubjects("records mix subjects " + s.subject_id + " and " + r.subject_id);
        for (Category c : kCategories) {
            auto i = static_cast<std::size_t>(c);
            Stage st = stage_of(r, c);
            s.max_stage[i] = max_stage(s.max_stage[i], st);
            if (is_aki(st) && !s.first_aki[i]) s.first_aki[i] = r.timestamp;
        }
    }
    return s;
}

/// Splits subject-ordered records into per-subject summaries.
inline std::vector<PatientSummary> summarize_all(const std::vector<StageRecord>& records) {
    std::vector<PatientSummary> out;
    std::size_t begin = 0;
    for (std::size_t i = 1; i <= records.size(); ++i) {
        if (i == records.size() || records[i].subject_id != records[begin].subject_id) {
            out.push_back(summarize(std::vector<StageRecord>(records.begin() + static_cast<long>(begin),
                                                             records.begin() + static_cast<long>(i))));
            begin = i;
        }
    }
    return out;
}

inline void write_summaries(const std::vector<PatientSummary>& summaries, std::ostream& out) {
    out << "subject_id,hours_observed";
    for (Category c : kCategories) out << ",first_aki_" << category_name(c);
    for (Category c : kCategories) out << ",max_" << category_name(c) << "_stage";
    out << '\n';
    for (const auto& s : summaries) {
        out << s.subject_id << ',' << s.hours_observed;
        for (Category c : kCategories) {
            out << ',';
            if (const auto& t = s.first_aki_in(c)) out << format_timestamp(*t);
        }
        for (Category c : kCategories) out << ',' << to_string(s.max_in(c));
        out << '\n';
    }
}

inline void write_summaries(const std::vector<PatientSummary>& summaries, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_summaries(summaries, out);
    out.flush();
    if (!out) throw IoError("write failure on " + path.string());
}

} // namespace kdigo
