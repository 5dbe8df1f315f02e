#pragma once

// Random inputs for property tests. Deterministic per seed.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "kdigo/kdigo.hpp"

namespace kdigo::testing {

using Rng = std::mt19937_64;

inline std::int64_t uniform(Rng& rng, std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

inline bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

/// Hourly urine rates in mL/kg/h. Regimes persist for a few hours so that
/// oliguric runs of 6, 12 and 24+ hours actually occur; values cluster
/// around the staging thresholds, and a random mask punches gaps.
inline std::vector<std::optional<Quantity>> random_rates(Rng& rng, std::size_t length, double missing_p) {
    static constexpr std::int64_t kAnchors[] = {0, 1, 299'999, 300'000, 300'001, 499'999, 500'000, 500'001};
    std::vector<std::optional<Quantity>> out(length);
    int regime = 0;
    std::size_t left = 0;
    for (std::size_t t = 0; t < length; ++t) {
        if (left == 0) {
            regime = static_cast<int>(uniform(rng, 0, 4));
            left = static_cast<std::size_t>(uniform(rng, 1, 40));
        }
        --left;
        if (chance(rng, missing_p)) continue;
        std::int64_t raw = 0;
        switch (regime) {
        case 0: raw = 0; break;                                   // anuric
        case 1: raw = uniform(rng, 0, 299'999); break;            // < 0.3
        case 2: raw = uniform(rng, 0, 499'999); break;            // < 0.5
        case 3: raw = uniform(rng, 200'000, 2'000'000); break;    // mixed
        default: raw = kAnchors[uniform(rng, 0, 7)]; break;       // exact boundaries
        }
        out[t] = Quantity{raw, Unit::mL_kg_h};
    }
    return out;
}

/// Grid with random creatinine/urine/dialysis presence masks.
inline HourlyGrid random_grid(Rng& rng, std::size_t length, double missing_p) {
    HourlyGrid g;
    g.subject_id = "s";
    g.start = floor_hour(*parse_timestamp("2100-01-01T00:00:00"));
    g.hours.resize(length);
    for (auto& c : g.hours) {
        if (!chance(rng, missing_p)) {
            c.uo_ml = Quantity{uniform(rng, 0, 200) * kMicro, Unit::mL};
            c.uo_rate = urine_rate(*c.uo_ml, Quantity::whole(70, Unit::kg));
        }
        if (!chance(rng, missing_p)) c.scr = Quantity{uniform(rng, 300'000, 6'000'000), Unit::mg_dL};
        if (!chance(rng, missing_p)) c.dialysis_active = chance(rng, 0.2);
    }
    return g;
}

/// Demographically plausible adult.
inline PatientProfile random_profile(Rng& rng, const std::string& id = "s") {
    PatientProfile p;
    p.subject_id = id;
    p.weight = {uniform(rng, 35'000'000, 250'000'000), Unit::kg};
    p.age = {uniform(rng, 18, 110) * kMicro + uniform(rng, 0, 999'999), Unit::years};
    p.sex = chance(rng, 0.5) ? Sex::female : Sex::male;
    if (chance(rng, 0.5)) p.height = Quantity{uniform(rng, 140'000'000, 210'000'000), Unit::cm};
    return p;
}

/// Scratch directory removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("kdigo-" + tag + "-" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

} // namespace kdigo::testing
