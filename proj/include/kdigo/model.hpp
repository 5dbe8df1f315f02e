#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "kdigo/errors.hpp"
#include "kdigo/quantity.hpp"
#include "kdigo/stage.hpp"
#include "kdigo/time.hpp"

namespace kdigo {

using SubjectId = std::string;

enum class Signal : std::uint8_t { urine_output, creatinine, dialysis };

inline std::string_view signal_name(Signal s) {
    switch (s) {
    case Signal::urine_output: return "urine_output";
    case Signal::creatinine: return "creatinine";
    case Signal::dialysis: return "dialysis";
    }
    return "?";
}

/// Quantity for urine output (mL) and creatinine (mg/dL), bool for dialysis.
using ObservedValue = std::variant<Quantity, bool>;

struct Observation {
    Timestamp time;
    ObservedValue value;
};

struct ObservationSeries {
    SubjectId subject_id;
    Signal signal = Signal::urine_output;
    std::vector<Observation> points; // strictly increasing time
};

enum class Sex : std::uint8_t { female, male };

struct PatientProfile {
    SubjectId subject_id;
    Quantity weight{0, Unit::kg};
    std::optional<Quantity> height; // cm
    std::optional<Quantity> age;    // years
    std::optional<Sex> sex;
};

inline constexpr std::int64_t kMinAdultAgeYears = 18;
inline constexpr std::int64_t kMaxAgeYears = 130;

/// Throws IntegrityError when a profile field is out of its admissible range.
inline void validate_profile(const PatientProfile& p) {
    auto fail = [&](const std::string& what) {
        throw IntegrityError("patient " + p.subject_id + ": " + what);
    };
    if (p.weight.raw <= 0) fail("weight must be > 0 kg");
    if (p.height && p.height->raw <= 0) fail("height must be > 0 cm");
    if (p.age && (p.age->raw < kMinAdultAgeYears * kMicro || p.age->raw > kMaxAgeYears * kMicro))
        fail("age must be within [18, 130] years (pediatric staging is not supported)");
}

struct HourCell {
    std::optional<Quantity> uo_ml;
    std::optional<Quantity> uo_rate; // mL/kg/h
    std::optional<Quantity> scr;     // mg/dL
    std::optional<bool> dialysis_active;
};

struct HourlyGrid {
    SubjectId subject_id;
    HourStamp start{};
    std::vector<HourCell> hours;

    std::size_t size() const { return hours.size(); }
    HourStamp time_at(std::size_t i) const { return start + std::chrono::hours(static_cast<long>(i)); }
};

struct StageRecord {
    SubjectId subject_id;
    HourStamp timestamp{};
    Stage uo_stage = Stage::unknown;
    Stage abs_scr_stage = Stage::unknown;
    Stage rel_scr_stage = Stage::unknown;
    Stage dialysis_stage = Stage::unknown;
    Stage overall_stage = Stage::unknown;
    std::optional<Quantity> baseline_rel;
    std::optional<Quantity> baseline_abs;

    friend bool operator==(const StageRecord&, const StageRecord&) = default;
};

/// Output columns that carry a stage, in file order.
enum class Category : std::uint8_t { uo, abs_scr, rel_scr, dialysis, overall };

inline constexpr std::array<Category, 5> kCategories{Category::uo, Category::abs_scr, Category::rel_scr,
                                                     Category::dialysis, Category::overall};

inline std::string_view category_name(Category c) {
    switch (c) {
    case Category::uo: return "uo";
    case Category::abs_scr: return "abs_scr";
    case Category::rel_scr: return "rel_scr";
    case Category::dialysis: return "dialysis";
    case Category::overall: return "overall";
    }
    return "?";
}

inline Stage stage_of(const StageRecord& r, Category c) {
    switch (c) {
    case Category::uo: return r.uo_stage;
    case Category::abs_scr: return r.abs_scr_stage;
    case Category::rel_scr: return r.rel_scr_stage;
    case Category::dialysis: return r.dialysis_stage;
    case Category::overall: return r.overall_stage;
    }
    return Stage::unknown;
}

} // namespace kdigo
