#include <gtest/gtest.h>

#include "kdigo/kdigo.hpp"
#include "support/generators.hpp"

using namespace kdigo;
namespace kt = kdigo::testing;

namespace {

PatientProfile person(Sex sex, std::int64_t age, std::int64_t kg) {
    return {"1", Quantity::whole(kg, Unit::kg), std::nullopt, Quantity::whole(age, Unit::years), sex};
}

Quantity mg(const char* v) { return Quantity::parse(v, Unit::mg_dL); }

HourlyGrid scr_grid(std::vector<std::optional<Quantity>> values) {
    HourlyGrid g;
    g.subject_id = "1";
    for (auto& v : values) g.hours.push_back(HourCell{{}, {}, v, {}});
    return g;
}

} // namespace

TEST(CockcroftGault, BaselineFromAssumedGfrMale) {
    // (140 - 60) * 70 / (72 * 75) = 5600 / 5400 = 1.037037...
    auto b = baseline_at(scr_grid({mg("1")}), 0, baseline::CockcroftGault{}, person(Sex::male, 60, 70));
    ASSERT_TRUE(b);
    EXPECT_EQ(b->raw, 1'037'037);
    EXPECT_NEAR(b->to_double(), 1.0370, 5e-5);
}

TEST(CockcroftGault, BaselineFromAssumedGfrFemale) {
    // 4760 / 5400 = 0.881481...
    auto b = baseline_at(scr_grid({mg("1")}), 0, baseline::CockcroftGault{}, person(Sex::female, 60, 70));
    EXPECT_EQ(b->raw, 881'481);
    EXPECT_NEAR(b->to_double(), 0.8815, 5e-5);
}

TEST(CockcroftGault, UsesAdjustedWeightWhenHeightKnown) {
    auto p = person(Sex::male, 60, 100);
    p.height = Quantity::parse("177.8", Unit::cm);
    // ABW 83.716 kg: 80 * 83.716 / 5400 = 1.240237...
    EXPECT_EQ(cockcroft_gault_creatinine(baseline::CockcroftGault{}, p).raw, 1'240'237);
}

TEST(CockcroftGault, TruncatesFractionalAge) {
    auto p = person(Sex::male, 60, 70);
    p.age = Quantity::parse("60.99", Unit::years);
    EXPECT_EQ(cockcroft_gault_creatinine(baseline::CockcroftGault{}, p).raw, 1'037'037);
}

TEST(CockcroftGault, MissingDemographicsThrow) {
    auto p = person(Sex::male, 60, 70);
    p.age.reset();
    EXPECT_THROW(baseline_at(scr_grid({mg("1")}), 0, baseline::CockcroftGault{}, p), MissingDemographics);
    auto q = person(Sex::male, 60, 70);
    q.sex.reset();
    EXPECT_THROW(cockcroft_gault_clearance(mg("1"), q), MissingDemographics);
}

TEST(CockcroftGaultClearance, HandValues) {
    // 5600 / 72 = 77.777...
    EXPECT_EQ(cockcroft_gault_clearance(mg("1.0"), person(Sex::male, 60, 70)).raw, 77'777'778);
    // doubling creatinine halves clearance: 2800 / 72 = 38.888...
    EXPECT_EQ(cockcroft_gault_clearance(mg("2.0"), person(Sex::male, 60, 70)).raw, 38'888'889);
    // female factor 0.85: 4760 / 72 = 66.111...
    EXPECT_EQ(cockcroft_gault_clearance(mg("1.0"), person(Sex::female, 60, 70)).raw, 66'111'111);
}

TEST(CockcroftGaultClearance, InverseProportionalityAndFemaleFactor) {
    kt::Rng rng(1);
    for (int i = 0; i < 2000; ++i) {
        auto p = kt::random_profile(rng);
        p.height.reset();
        Quantity scr{kt::uniform(rng, 100'000, 5'000'000), Unit::mg_dL};
        auto c1 = cockcroft_gault_clearance(scr, p);
        auto c2 = cockcroft_gault_clearance(Quantity{scr.raw * 2, Unit::mg_dL}, p);
        EXPECT_LE(std::abs(2 * c2.raw - c1.raw), 2);
        auto female = p, male = p;
        female.sex = Sex::female;
        male.sex = Sex::male;
        auto cf = cockcroft_gault_clearance(scr, female), cm = cockcroft_gault_clearance(scr, male);
        EXPECT_LE(std::abs(cf.raw * 100 - cm.raw * 85), 100);
    }
}

// The back-calculated creatinine is rounded to a micro-unit, so the forward
// direction recovers GFR only to GFR * 0.5e-6 / SCr; creatinine -> clearance
// -> creatinine is exact to one micro-unit because clearance is the larger number.
TEST(CockcroftGaultClearance, RoundTripBounds) {
    kt::Rng rng(2);
    for (int i = 0; i < 10000; ++i) {
        auto p = kt::random_profile(rng);
        baseline::CockcroftGault m;
        m.assumed_gfr = {kt::uniform(rng, 10'000'000, 150'000'000), Unit::mL_min};
        auto scr = cockcroft_gault_creatinine(m, p);
        auto gfr = cockcroft_gault_clearance(scr, p);
        double bound = m.assumed_gfr.to_double() * 0.5 / static_cast<double>(scr.raw) * 1e6 + 1.0;
        EXPECT_LE(static_cast<double>(std::abs(gfr.raw - m.assumed_gfr.raw)), bound);

        Quantity c{kt::uniform(rng, 300'000, 8'000'000), Unit::mg_dL};
        auto clearance = cockcroft_gault_clearance(c, p);
        baseline::CockcroftGault back{clearance, m.adjustment_factor_micro};
        EXPECT_LE(std::abs(cockcroft_gault_creatinine(back, p).raw - c.raw), 1);
    }
}

TEST(AdjustedBodyWeight, DevineWithFortyPercentExcess) {
    auto p = person(Sex::male, 60, 100);
    p.height = Quantity::parse("177.8", Unit::cm);
    EXPECT_EQ(ideal_body_weight(p), Quantity::parse("72.86", Unit::kg));
    EXPECT_EQ(adjusted_body_weight(p), Quantity::parse("83.716", Unit::kg));
    EXPECT_NEAR(ideal_body_weight(p).to_double(), 72.9, 0.05);
    EXPECT_NEAR(adjusted_body_weight(p).to_double(), 83.7, 0.05);
}

TEST(AdjustedBodyWeight, NoDownwardAdjustment) {
    auto p = person(Sex::female, 60, 50);
    p.height = Quantity::whole(170, Unit::cm); // IBW 45.5 + 15.84 = 61.34
    EXPECT_EQ(adjusted_body_weight(p), p.weight);
    p.weight = ideal_body_weight(p);
    EXPECT_EQ(adjusted_body_weight(p), p.weight);
}

TEST(AdjustedBodyWeight, NeedsHeightAndSex) {
    auto p = person(Sex::male, 60, 100);
    EXPECT_THROW(adjusted_body_weight(p), MissingDemographics);
    p.height = Quantity::whole(180, Unit::cm);
    p.sex.reset();
    EXPECT_THROW(adjusted_body_weight(p), MissingDemographics);
}

TEST(WindowBaselines, RollingMinimum) {
    auto g = scr_grid({mg("1.0"), mg("0.8"), mg("1.2"), mg("3.0")});
    auto b = baseline_at(g, 3, baseline::RollingWindow{WindowStat::min, 168}, {});
    EXPECT_EQ(b, mg("0.8"));
}

TEST(WindowBaselines, EmptyWindowIsUnknown) {
    auto g = scr_grid({mg("1.0"), mg("0.8")});
    EXPECT_FALSE(baseline_at(g, 0, baseline::RollingWindow{WindowStat::min, 48}, {}));
    auto sparse = scr_grid({mg("1.0"), {}, {}, {}});
    EXPECT_FALSE(baseline_at(sparse, 3, baseline::RollingWindow{WindowStat::min, 2}, {}));
    EXPECT_EQ(baseline_at(sparse, 3, baseline::RollingWindow{WindowStat::min, 3}, {}), mg("1.0"));
}

TEST(WindowBaselines, MeanFirstAndInitial) {
    auto g = scr_grid({mg("1.0"), {}, mg("0.7"), mg("1.3"), mg("2.0")});
    EXPECT_EQ(baseline_at(g, 4, baseline::RollingWindow{WindowStat::mean, 10}, {}), mg("1.0"));
    EXPECT_EQ(baseline_at(g, 4, baseline::RollingWindow{WindowStat::first, 2}, {}), mg("0.7"));
    EXPECT_EQ(baseline_at(g, 4, baseline::RollingWindow{WindowStat::first, 10}, {}), mg("1.0"));
    EXPECT_EQ(baseline_at(g, 0, baseline::InitialWindow{WindowStat::mean, 3}, {}), mg("0.85"));
    EXPECT_EQ(baseline_at(g, 4, baseline::InitialWindow{WindowStat::min, 100}, {}), mg("0.7"));
    EXPECT_EQ(baseline_at(g, 4, baseline::FixedValue{mg("1.1")}, {}), mg("1.1"));
    // mean of 1, 2 and 2 micro-units is 1.666.. -> 2
    auto tiny = scr_grid({Quantity{1, Unit::mg_dL}, Quantity{2, Unit::mg_dL}, Quantity{2, Unit::mg_dL}, {}});
    EXPECT_EQ(baseline_at(tiny, 3, baseline::RollingWindow{WindowStat::mean, 3}, {})->raw, 2);
}

TEST(WindowBaselines, MethodValidation) {
    EXPECT_THROW(validate_method(baseline::RollingWindow{WindowStat::min, 0}), ConfigError);
    EXPECT_THROW(validate_method(baseline::InitialWindow{WindowStat::min, -3}), ConfigError);
    EXPECT_THROW(validate_method(baseline::FixedValue{mg("0")}), ConfigError);
    EXPECT_THROW(validate_method(baseline::CockcroftGault{Quantity{0, Unit::mL_min}}), ConfigError);
    EXPECT_NO_THROW(validate_method(baseline::RollingWindow{WindowStat::first, 1}));
}

// The single-pass series must agree with direct evaluation at every hour.
TEST(WindowBaselines, SeriesMatchesPointwiseEvaluation) {
    kt::Rng rng(17);
    for (int trial = 0; trial < 400; ++trial) {
        auto grid = kt::random_grid(rng, static_cast<std::size_t>(kt::uniform(rng, 0, 260)),
                                         kt::uniform(rng, 0, 95) / 100.0);
        auto stat = static_cast<WindowStat>(kt::uniform(rng, 0, 2));
        int len = static_cast<int>(kt::uniform(rng, 1, 200));
        for (BaselineMethod m : {BaselineMethod{baseline::RollingWindow{stat, len}},
                                 BaselineMethod{baseline::InitialWindow{stat, len}}}) {
            auto series = baseline_series(grid, m, {});
            ASSERT_EQ(series.size(), grid.size());
            for (std::size_t t = 0; t < grid.size(); ++t)
                ASSERT_EQ(series[t], baseline_at(grid, t, m, {})) << describe(m) << " t=" << t;
        }
    }
}

TEST(WindowBaselines, RollingIgnoresCurrentAndFutureHours) {
    kt::Rng rng(23);
    for (int trial = 0; trial < 300; ++trial) {
        auto grid = kt::random_grid(rng, static_cast<std::size_t>(kt::uniform(rng, 2, 120)), 0.4);
        BaselineMethod m = baseline::RollingWindow{static_cast<WindowStat>(kt::uniform(rng, 0, 2)),
                                                   static_cast<int>(kt::uniform(rng, 1, 60))};
        auto t = static_cast<std::size_t>(kt::uniform(rng, 0, static_cast<std::int64_t>(grid.size()) - 1));
        auto before = baseline_at(grid, t, m, {});
        auto altered = grid;
        for (std::size_t i = t; i < altered.size(); ++i)
            altered.hours[i].scr = Quantity{kt::uniform(rng, 1, 9'000'000), Unit::mg_dL};
        EXPECT_EQ(baseline_at(altered, t, m, {}), before);
    }
}

TEST(WindowBaselines, MinimumNeverRisesWhenWindowGainsAValue) {
    kt::Rng rng(29);
    for (int trial = 0; trial < 1000; ++trial) {
        auto grid = kt::random_grid(rng, static_cast<std::size_t>(kt::uniform(rng, 2, 80)), 0.5);
        int len = static_cast<int>(kt::uniform(rng, 1, 80));
        BaselineMethod m = baseline::RollingWindow{WindowStat::min, len};
        auto t = static_cast<std::size_t>(kt::uniform(rng, 1, static_cast<std::int64_t>(grid.size()) - 1));
        auto lo = static_cast<std::size_t>(std::max<std::int64_t>(0, static_cast<std::int64_t>(t) - len));
        auto slot = static_cast<std::size_t>(kt::uniform(rng, static_cast<std::int64_t>(lo), static_cast<std::int64_t>(t) - 1));
        if (grid.hours[slot].scr) continue;
        auto before = baseline_at(grid, t, m, {});
        grid.hours[slot].scr = Quantity{kt::uniform(rng, 1, 9'000'000), Unit::mg_dL};
        auto after = baseline_at(grid, t, m, {});
        ASSERT_TRUE(after);
        if (before) { EXPECT_LE(after->raw, before->raw); }
    }
}

TEST(WindowBaselines, InitialWindowIsConstantOverStay) {
    kt::Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        auto grid = kt::random_grid(rng, static_cast<std::size_t>(kt::uniform(rng, 1, 100)), 0.5);
        BaselineMethod m = baseline::InitialWindow{static_cast<WindowStat>(kt::uniform(rng, 0, 2)),
                                                   static_cast<int>(kt::uniform(rng, 1, 48))};
        auto first = baseline_at(grid, 0, m, {});
        for (std::size_t t = 1; t < grid.size(); ++t) EXPECT_EQ(baseline_at(grid, t, m, {}), first);
    }
}
