#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "kdigo/csv.hpp"
#include "kdigo/errors.hpp"
#include "kdigo/model.hpp"

namespace kdigo {

struct LoadOptions {
    Unit creatinine_unit = Unit::mg_dL;
    char delimiter = ',';
};

struct DatasetPaths {
    std::filesystem::path urine_output;
    std::filesystem::path creatinine;
    std::optional<std::filesystem::path> dialysis;
    std::filesystem::path patients;
};

struct DatasetBundle {
    std::map<SubjectId, PatientProfile> profiles;
    std::map<std::pair<SubjectId, Signal>, ObservationSeries> series;

    const ObservationSeries* find(const SubjectId& subject, Signal signal) const {
        auto it = series.find({subject, signal});
        return it == series.end() ? nullptr : &it->second;
    }

    /// Subjects with at least one series, in ascending id order.
    std::vector<SubjectId> subjects() const {
        std::vector<SubjectId> out;
        for (const auto& [key, s] : series)
            if (out.empty() || out.back() != key.first) out.push_back(key.first);
        return out;
    }
};

namespace detail {

inline std::string obs_context(const SubjectId& subject, Signal signal, Timestamp t) {
    return "subject " + subject + ", signal " + std::string(signal_name(signal)) + ", timestamp " +
           format_timestamp(t);
}

inline bool parse_flag(std::string_view s, bool& out) {
    if (s == "1" || s == "true" || s == "True" || s == "TRUE") {
        out = true;
        return true;
    }
    if (s == "0" || s == "false" || s == "False" || s == "FALSE") {
        out = false;
        return true;
    }
    return false;
}

[[noreturn]] inline void parse_fail(const csv::Reader& r, std::string_view column, const std::string& why) {
    throw ParseError(r.name() + ":" + std::to_string(r.line()) + ": field '" + std::string(column) + "': " + why);
}

} // namespace detail

/// Streams one measurement table into per-subject series. Rows may arrive in
/// any order; series found out of order are re-sorted once at the end.
inline std::map<SubjectId, ObservationSeries> load_series(std::istream& in, const std::string& name, Signal signal,
                                                          const LoadOptions& opts = {}) {
    csv::Reader reader(in, name, opts.delimiter);
    std::string_view value_column = signal == Signal::urine_output ? "urineoutput_ml"
                                    : signal == Signal::creatinine ? "creatinine"
                                                                   : "dialysis_active";
    auto cols = csv::bind_columns(reader.header(), {"subject_id", "timestamp", value_column}, name);

    std::map<SubjectId, ObservationSeries> out;
    std::map<SubjectId, bool> unsorted;
    ObservationSeries* current = nullptr;
    std::vector<std::string> row;
    while (reader.next(row)) {
        if (row.size() != reader.header().size())
            throw ParseError(name + ":" + std::to_string(reader.line()) + ": expected " +
                             std::to_string(reader.header().size()) + " fields, got " + std::to_string(row.size()));
        const std::string& subject = row[cols[0]];
        if (subject.empty()) detail::parse_fail(reader, "subject_id", "empty subject id");
        auto t = parse_timestamp(row[cols[1]]);
        if (!t) detail::parse_fail(reader, "timestamp", "invalid timestamp '" + row[cols[1]] + "'");

        ObservedValue value;
        const std::string& text = row[cols[2]];
        if (signal == Signal::dialysis) {
            bool flag = false;
            if (!detail::parse_flag(text, flag)) detail::parse_fail(reader, value_column, "invalid boolean '" + text + "'");
            value = flag;
        } else {
            auto raw = parse_micro(text);
            if (!raw) detail::parse_fail(reader, value_column, "invalid number '" + text + "'");
            Quantity q{*raw, signal == Signal::urine_output ? Unit::mL : opts.creatinine_unit};
            if (signal == Signal::creatinine) {
                q = convert_unit(q, Unit::mg_dL);
                if (q.raw <= 0)
                    throw IntegrityError("non-positive creatinine at " + detail::obs_context(subject, signal, *t) +
                                         " (" + name + ":" + std::to_string(reader.line()) + ")");
            } else if (q.raw < 0) {
                throw IntegrityError("negative urine output at " + detail::obs_context(subject, signal, *t) + " (" +
                                     name + ":" + std::to_string(reader.line()) + ")");
            }
            value = q;
        }

        if (current == nullptr || current->subject_id != subject) {
            auto [it, inserted] = out.try_emplace(subject);
            if (inserted) {
                it->second.subject_id = subject;
                it->second.signal = signal;
            }
            current = &it->second;
        }
        auto& pts = current->points;
        if (!pts.empty() && pts.back().time >= *t) {
            if (pts.back().time == *t)
                throw IntegrityError("duplicate observation at " + detail::obs_context(subject, signal, *t));
            unsorted[subject] = true;
        }
        pts.push_back({*t, value});
    }

    for (auto& [subject, flag] : unsorted) {
        auto& pts = out[subject].points;
        std::stable_sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.time < b.time; });
        auto dup = std::adjacent_find(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.time == b.time; });
        if (dup != pts.end())
            throw IntegrityError("duplicate observation at " + detail::obs_context(subject, signal, dup->time));
    }
    return out;
}

inline std::map<SubjectId, PatientProfile> load_patients(std::istream& in, const std::string& name,
                                                         const LoadOptions& opts = {}) {
    csv::Reader reader(in, name, opts.delimiter);
    auto cols =
        csv::bind_columns(reader.header(), {"subject_id", "weight_kg", "height_cm", "age_years", "sex"}, name);
    std::map<SubjectId, PatientProfile> out;
    std::vector<std::string> row;
    while (reader.next(row)) {
        if (row.size() != reader.header().size())
            throw ParseError(name + ":" + std::to_string(reader.line()) + ": expected " +
                             std::to_string(reader.header().size()) + " fields, got " + std::to_string(row.size()));
        PatientProfile p;
        p.subject_id = row[cols[0]];
        if (p.subject_id.empty()) detail::parse_fail(reader, "subject_id", "empty subject id");
        auto number = [&](std::size_t col, std::string_view column, Unit unit) -> std::optional<Quantity> {
            const std::string& text = row[cols[col]];
            if (text.empty()) return std::nullopt;
            auto raw = parse_micro(text);
            if (!raw) detail::parse_fail(reader, column, "invalid number '" + text + "'");
            return Quantity{*raw, unit};
        };
        auto weight = number(1, "weight_kg", Unit::kg);
        if (!weight) detail::parse_fail(reader, "weight_kg", "weight is required");
        p.weight = *weight;
        p.height = number(2, "height_cm", Unit::cm);
        p.age = number(3, "age_years", Unit::years);
        const std::string& sex = row[cols[4]];
        if (sex == "f" || sex == "F") p.sex = Sex::female;
        else if (sex == "m" || sex == "M") p.sex = Sex::male;
        else if (!sex.empty()) detail::parse_fail(reader, "sex", "expected 'f' or 'm', got '" + sex + "'");
        validate_profile(p);
        if (!out.emplace(p.subject_id, p).second)
            throw IntegrityError("duplicate patient row for subject " + p.subject_id);
    }
    return out;
}

namespace detail {

inline std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return in;
}

} // namespace detail

inline DatasetBundle load_dataset(const DatasetPaths& paths, const LoadOptions& opts = {}) {
    DatasetBundle bundle;
    {
        auto in = detail::open_input(paths.patients);
        bundle.profiles = load_patients(in, paths.patients.string(), opts);
    }
    auto absorb = [&](const std::filesystem::path& path, Signal signal) {
        auto in = detail::open_input(path);
        for (auto& [subject, s] : load_series(in, path.string(), signal, opts)) {
            if (!bundle.profiles.contains(subject)) {
                std::string first = s.points.empty() ? "" : ", timestamp " + format_timestamp(s.points.front().time);
                throw IntegrityError("series without patient profile: subject " + subject + ", signal " +
                                     std::string(signal_name(signal)) + first);
            }
            bundle.series.emplace(std::pair{subject, signal}, std::move(s));
        }
    };
    absorb(paths.urine_output, Signal::urine_output);
    absorb(paths.creatinine, Signal::creatinine);
    if (paths.dialysis) absorb(*paths.dialysis, Signal::dialysis);
    return bundle;
}

inline constexpr std::string_view kStageRecordHeader =
    "subject_id,timestamp,uo_stage,abs_scr_stage,rel_scr_stage,dialysis_stage,overall_stage,baseline_rel,baseline_abs";

inline void write_stage_records(const std::vector<StageRecord>& records, std::ostream& out) {
    out << kStageRecordHeader << '\n';
    auto opt = [](const std::optional<Quantity>& q) { return q ? q->to_string() : std::string(); };
    for (const auto& r : records) {
        out << r.subject_id << ',' << format_timestamp(r.timestamp) << ',' << to_string(r.uo_stage) << ','
            << to_string(r.abs_scr_stage) << ',' << to_string(r.rel_scr_stage) << ',' << to_string(r.dialysis_stage)
            << ',' << to_string(r.overall_stage) << ',' << opt(r.baseline_rel) << ',' << opt(r.baseline_abs) << '\n';
    }
}

inline void write_stage_records(const std::vector<StageRecord>& records, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_stage_records(records, out);
    out.flush();
    if (!out) throw IoError("write failure on " + path.string());
}

} // namespace kdigo
