#pragma once

// Synthetic ICU stays written in the engine's input file formats. Each
// subject follows a scripted course (normal, oliguric, anuric, creatinine
// rise, dialysis) with irregular charting times and charting gaps, so the
// resampling, imputation and every staging pathway are exercised.

#include <filesystem>
#include <fstream>
#include <string>

#include "generators.hpp"

namespace kdigo::testing {

struct CorpusPaths {
    std::filesystem::path urine_output, creatinine, dialysis, patients;

    DatasetPaths as_dataset() const { return {urine_output, creatinine, dialysis, patients}; }
};

inline CorpusPaths corpus_paths(const std::filesystem::path& dir) {
    return {dir / "urine_output.csv", dir / "creatinine.csv", dir / "dialysis.csv", dir / "patients.csv"};
}

namespace detail {

inline std::string decimal(std::int64_t hundredths) {
    return format_micro(hundredths * 10'000);
}

inline std::string stamp(Timestamp t) { return format_timestamp(t); }

} // namespace detail

inline CorpusPaths write_corpus(const std::filesystem::path& dir, int subjects, std::uint64_t seed) {
    using namespace std::chrono;
    std::filesystem::create_directories(dir);
    auto paths = corpus_paths(dir);
    std::ofstream uo(paths.urine_output), cr(paths.creatinine), dia(paths.dialysis), pat(paths.patients);
    uo << "subject_id,timestamp,urineoutput_ml\n";
    cr << "subject_id,timestamp,creatinine\n";
    dia << "subject_id,timestamp,dialysis_active\n";
    pat << "subject_id,weight_kg,height_cm,age_years,sex\n";

    Rng rng(seed);
    const auto epoch = *parse_timestamp("2150-01-01T00:00:00");
    for (int s = 0; s < subjects; ++s) {
        const std::string id = std::to_string(10000000 + s * 7919);
        const std::int64_t weight_tenths = uniform(rng, 450, 1300); // 45.0 - 130.0 kg
        pat << id << ',' << format_micro(weight_tenths * 100'000) << ',';
        if (chance(rng, 0.6)) pat << uniform(rng, 150, 195);
        pat << ',' << uniform(rng, 25, 90) << ',' << (chance(rng, 0.5) ? 'f' : 'm') << '\n';

        const auto admit = epoch + days(uniform(rng, 0, 2000)) + minutes(uniform(rng, 0, 24 * 60 - 1));
        const long stay = uniform(rng, 36, 320);
        const bool control = s == 0;

        // Urine: hourly-ish charting, regime changes every few hours.
        int regime = 0;
        long regime_left = 0;
        for (long h = 0; h < stay; ++h) {
            if (regime_left-- <= 0) {
                regime = control ? 0 : static_cast<int>(uniform(rng, 0, 5));
                regime_left = uniform(rng, 3, 30);
            }
            if (chance(rng, 0.06)) { // charting gap
                h += uniform(rng, 1, 9);
                continue;
            }
            // target rate in hundredths of mL/kg/h
            std::int64_t rate = 0;
            switch (regime) {
            case 0: case 1: rate = uniform(rng, 55, 250); break;
            case 2: rate = uniform(rng, 30, 49); break;
            case 3: rate = uniform(rng, 5, 29); break;
            case 4: rate = chance(rng, 0.8) ? 0 : uniform(rng, 1, 10); break;
            default: rate = chance(rng, 0.5) ? 50 : 30; break; // on the boundary
            }
            // hundredths of mL, rounded down to whole mL like a chart entry
            std::int64_t ml = rate * weight_tenths / 1000;
            int parts = chance(rng, 0.25) ? 2 : 1;
            std::int64_t first_part = parts == 2 ? ml / 3 : ml;
            auto at = admit + hours(h);
            uo << id << ',' << detail::stamp(at + minutes(uniform(rng, 0, 25))) << ',' << first_part << '\n';
            if (parts == 2) uo << id << ',' << detail::stamp(at + minutes(uniform(rng, 30, 59))) << ',' << ml - first_part << '\n';
        }

        // Creatinine: every 4-20 h, drifting with occasional acute rises.
        std::int64_t scr = uniform(rng, 55, 130); // hundredths of mg/dL
        long h = uniform(rng, 0, 6);
        const long scr_end = stay - uniform(rng, 0, 12);
        while (h < scr_end) {
            if (!control) {
                if (chance(rng, 0.12)) scr = scr * uniform(rng, 140, 320) / 100;
                else scr = std::max<std::int64_t>(40, scr + uniform(rng, -15, 12));
                scr = std::min<std::int64_t>(scr, 750);
            }
            cr << id << ',' << detail::stamp(admit + hours(h) + minutes(uniform(rng, 0, 59))) << ','
               << detail::decimal(scr) << '\n';
            h += uniform(rng, 2, 20);
        }

        // Dialysis status charted hourly for some subjects, with sessions.
        if (!control && chance(rng, 0.5)) {
            bool on = false;
            for (long d = 0; d < stay; ++d) {
                if (chance(rng, 0.04)) on = !on;
                if (chance(rng, 0.1)) continue;
                dia << id << ',' << detail::stamp(admit + hours(d) + minutes(5)) << ',' << (on ? "True" : "False")
                    << '\n';
            }
        }
    }
    return paths;
}

} // namespace kdigo::testing
