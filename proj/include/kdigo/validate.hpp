#pragma once

// Agreement scoring against gold labels, and a deliberately naive urine
// output staging oracle used to cross-check the probes.

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "kdigo/csv.hpp"
#include "kdigo/model.hpp"
#include "kdigo/probes.hpp"

namespace kdigo {

struct LabelRow {
    SubjectId subject_id;
    HourStamp timestamp{};
    std::array<Stage, 5> stages{Stage::unknown, Stage::unknown, Stage::unknown, Stage::unknown, Stage::unknown};

    Stage at(Category c) const { return stages[static_cast<std::size_t>(c)]; }
};

inline LabelRow to_label(const StageRecord& r) {
    LabelRow l{r.subject_id, r.timestamp, {}};
    for (Category c : kCategories) l.stages[static_cast<std::size_t>(c)] = stage_of(r, c);
    return l;
}

inline constexpr std::string_view kGoldHeader =
    "subject_id,timestamp,uo_stage,abs_scr_stage,rel_scr_stage,dialysis_stage,overall_stage";

/// Reads a gold file or a stage-record file (baseline columns are ignored).
inline std::vector<LabelRow> read_labels(std::istream& in, const std::string& name) {
    csv::Reader reader(in, name);
    auto cols = csv::bind_columns(reader.header(),
                                  {"subject_id", "timestamp", "uo_stage", "abs_scr_stage", "rel_scr_stage",
                                   "dialysis_stage", "overall_stage"},
                                  name, {"baseline_rel", "baseline_abs"});
    std::vector<LabelRow> out;
    std::vector<std::string> row;
    while (reader.next(row)) {
        auto where = name + ":" + std::to_string(reader.line());
        if (row.size() != reader.header().size()) throw ParseError(where + ": wrong field count");
        LabelRow l;
        l.subject_id = row[cols[0]];
        auto t = parse_timestamp(row[cols[1]]);
        if (!t) throw ParseError(where + ": field 'timestamp': invalid timestamp '" + row[cols[1]] + "'");
        l.timestamp = floor_hour(*t);
        for (std::size_t c = 0; c < 5; ++c) {
            auto s = parse_stage(row[cols[c + 2]]);
            if (!s) throw ParseError(where + ": invalid stage '" + row[cols[c + 2]] + "'");
            l.stages[c] = *s;
        }
        out.push_back(std::move(l));
    }
    return out;
}

inline std::vector<LabelRow> read_labels(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return read_labels(in, path.string());
}

inline void write_labels(const std::vector<LabelRow>& rows, std::ostream& out) {
    out << kGoldHeader << '\n';
    for (const auto& r : rows) {
        out << r.subject_id << ',' << format_timestamp(r.timestamp);
        for (Stage s : r.stages) out << ',' << to_string(s);
        out << '\n';
    }
}

struct StageTally {
    std::size_t support = 0; // gold hours at this stage
    std::size_t matches = 0;

    /// Recall within the stage; vacuously 1 when the stage never occurs.
    double accuracy() const { return support == 0 ? 1.0 : static_cast<double>(matches) / static_cast<double>(support); }
};

struct CategoryTally {
    std::array<StageTally, 4> by_stage{};

    std::size_t support() const {
        std::size_t n = 0;
        for (const auto& s : by_stage) n += s.support;
        return n;
    }
    std::size_t matches() const {
        std::size_t n = 0;
        for (const auto& s : by_stage) n += s.matches;
        return n;
    }
    double accuracy() const { return StageTally{support(), matches()}.accuracy(); }
};

struct AccuracyReport {
    std::array<CategoryTally, 5> categories{};
    std::size_t hours = 0; // shared keys

    const CategoryTally& at(Category c) const { return categories[static_cast<std::size_t>(c)]; }

    /// Lowest accuracy over every category and every stage with support.
    double min_accuracy() const {
        double m = 1.0;
        for (const auto& c : categories) {
            m = std::min(m, c.accuracy());
            for (const auto& s : c.by_stage) m = std::min(m, s.accuracy());
        }
        return m;
    }
};

namespace detail {

inline bool key_less(const LabelRow& a, const LabelRow& b) {
    return a.subject_id != b.subject_id ? a.subject_id < b.subject_id : a.timestamp < b.timestamp;
}

inline std::string key_text(const LabelRow& r) {
    return "subject " + r.subject_id + ", timestamp " + format_timestamp(r.timestamp);
}

} // namespace detail

/// Per-category agreement. Gold hours with an empty label are not evaluable
/// for that category; predicted unknown counts as a mismatch.
inline AccuracyReport score(std::vector<LabelRow> pred, std::vector<LabelRow> gold) {
    std::stable_sort(pred.begin(), pred.end(), detail::key_less);
    std::stable_sort(gold.begin(), gold.end(), detail::key_less);
    auto check_unique = [](const std::vector<LabelRow>& rows, const char* what) {
        for (std::size_t i = 1; i < rows.size(); ++i)
            if (!detail::key_less(rows[i - 1], rows[i]))
                throw IntegrityError(std::string("duplicate key in ") + what + ": " + detail::key_text(rows[i]));
    };
    check_unique(pred, "predictions");
    check_unique(gold, "gold labels");

    AccuracyReport report;
    std::size_t n = std::min(pred.size(), gold.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (detail::key_less(pred[i], gold[i]))
            throw KeyMismatch("first divergent key: " + detail::key_text(pred[i]) + " present only in predictions");
        if (detail::key_less(gold[i], pred[i]))
            throw KeyMismatch("first divergent key: " + detail::key_text(gold[i]) + " present only in gold labels");
        for (Category c : kCategories) {
            Stage g = gold[i].at(c);
            if (!is_known(g)) continue;
            auto& tally = report.categories[static_cast<std::size_t>(c)].by_stage[static_cast<std::size_t>(to_int(g))];
            ++tally.support;
            if (pred[i].at(c) == g) ++tally.matches;
        }
    }
    if (pred.size() > n)
        throw KeyMismatch("first divergent key: " + detail::key_text(pred[n]) + " present only in predictions");
    if (gold.size() > n)
        throw KeyMismatch("first divergent key: " + detail::key_text(gold[n]) + " present only in gold labels");
    report.hours = n;
    return report;
}

inline AccuracyReport score(const std::vector<StageRecord>& pred, std::vector<LabelRow> gold) {
    std::vector<LabelRow> labels;
    labels.reserve(pred.size());
    for (const auto& r : pred) labels.push_back(to_label(r));
    return score(std::move(labels), std::move(gold));
}

namespace detail {

// Stages each category can take; other stages are listed only if observed.
inline bool stage_applies(Category c, int s) {
    switch (c) {
    case Category::abs_scr: return s != 2;
    case Category::dialysis: return s == 0 || s == 3;
    default: return true;
    }
}

inline std::string fmt_fraction(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

} // namespace detail

inline void print_report(const AccuracyReport& r, std::ostream& out) {
    char line[128];
    std::snprintf(line, sizeof line, "%-10s %-8s %10s %10s %9s\n", "category", "label", "support", "matches", "accuracy");
    out << line;
    for (Category c : kCategories) {
        const auto& t = r.at(c);
        std::snprintf(line, sizeof line, "%-10s %-8s %10zu %10zu %9s\n", std::string(category_name(c)).c_str(),
                      "overall", t.support(), t.matches(), detail::fmt_fraction(t.accuracy()).c_str());
        out << line;
        for (int s = 0; s < 4; ++s) {
            const auto& st = t.by_stage[static_cast<std::size_t>(s)];
            if (!detail::stage_applies(c, s) && st.support == 0) continue;
            std::string label = "stage " + std::to_string(s);
            std::snprintf(line, sizeof line, "%-10s %-8s %10zu %10zu %9s\n", "", label.c_str(), st.support, st.matches,
                          detail::fmt_fraction(st.accuracy()).c_str());
            out << line;
        }
    }
}

inline void write_report_csv(const AccuracyReport& r, std::ostream& out) {
    out << "category,label,support,matches,accuracy\n";
    auto emit = [&](Category c, const std::string& label, std::size_t support, std::size_t matches, double acc) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", acc);
        out << category_name(c) << ',' << label << ',' << support << ',' << matches << ',' << buf << '\n';
    };
    for (Category c : kCategories) {
        const auto& t = r.at(c);
        emit(c, "overall", t.support(), t.matches(), t.accuracy());
        for (int s = 0; s < 4; ++s) {
            const auto& st = t.by_stage[static_cast<std::size_t>(s)];
            if (!detail::stage_applies(c, s) && st.support == 0) continue;
            emit(c, "stage_" + std::to_string(s), st.support, st.matches, st.accuracy());
        }
    }
}

/// Reference urine-output staging. For each hour it re-reads the history
/// from scratch and applies the staging table literally; quadratic on
/// purpose, with no state carried between hours.
inline std::vector<Stage> brute_force_uo_oracle(const std::vector<std::optional<Quantity>>& rates,
                                                const ProbeConfig& cfg) {
    std::vector<Stage> out(rates.size(), Stage::unknown);
    for (std::size_t t = 0; t < rates.size(); ++t) {
        if (!rates[t]) continue;

        // Longest run of hours ending at t in which every hour satisfies `pred`.
        auto longest_run = [&](auto pred) {
            std::size_t best = 0;
            for (std::size_t len = 1; len <= t + 1; ++len) {
                bool all = true;
                for (std::size_t i = t + 1 - len; i <= t && all; ++i) all = rates[i] && pred(rates[i]->raw);
                if (!all) break; // every longer window contains this one
                best = len;
            }
            return best;
        };
        // Mean over the `len` hours ending at t, compared as sum < limit * len.
        auto mean_below = [&](std::size_t len, std::int64_t limit) {
            if (len > t + 1) return false;
            long double sum = 0;
            for (std::size_t i = t + 1 - len; i <= t; ++i) {
                if (!rates[i]) return false;
                sum += static_cast<long double>(rates[i]->raw);
            }
            return sum < static_cast<long double>(limit) * static_cast<long double>(len);
        };

        const std::size_t anuria = longest_run([&](std::int64_t r) { return r <= cfg.anuria_threshold.raw; });
        bool stage3 = false, stage2 = false, stage1 = false;
        if (cfg.uo_mode == UrineMode::strict_consecutive) {
            const std::size_t below05 = longest_run([](std::int64_t r) { return r < 500'000; });
            const std::size_t below03 = longest_run([](std::int64_t r) { return r < 300'000; });
            stage3 = below03 >= 24 || anuria >= 12;
            stage2 = below05 >= 12;
            stage1 = below05 >= 6;
        } else {
            stage3 = mean_below(24, 300'000) || anuria >= 12;
            stage2 = mean_below(12, 500'000);
            stage1 = mean_below(6, 500'000);
        }
        out[t] = stage3 ? Stage::s3 : stage2 ? Stage::s2 : stage1 ? Stage::s1 : Stage::s0;
    }
    return out;
}

} // namespace kdigo
