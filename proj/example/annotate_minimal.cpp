// Stages a short synthetic stay in memory and prints the hourly records.

#include <iostream>

#include "kdigo/kdigo.hpp"

int main() {
    using namespace kdigo;
    using namespace std::chrono;

    DatasetBundle bundle;
    PatientProfile patient{"1001", Quantity::whole(80, Unit::kg), std::nullopt, Quantity::whole(67, Unit::years), Sex::male};
    bundle.profiles.emplace(patient.subject_id, patient);

    const auto admit = *parse_timestamp("2150-03-01T06:00:00");
    ObservationSeries urine{patient.subject_id, Signal::urine_output, {}};
    ObservationSeries creatinine{patient.subject_id, Signal::creatinine, {}};
    for (int h = 0; h < 24; ++h) {
        // 20 mL/h is 0.25 mL/kg/h for an 80 kg patient
        auto ml = h < 10 ? Quantity::whole(90, Unit::mL) : Quantity::whole(20, Unit::mL);
        urine.points.push_back({admit + hours(h), ml});
    }
    creatinine.points.push_back({admit, Quantity::parse("0.9", Unit::mg_dL)});
    creatinine.points.push_back({admit + hours(12), Quantity::parse("1.4", Unit::mg_dL)});
    creatinine.points.push_back({admit + hours(23), Quantity::parse("1.9", Unit::mg_dL)});
    bundle.series.emplace(std::pair{patient.subject_id, Signal::urine_output}, urine);
    bundle.series.emplace(std::pair{patient.subject_id, Signal::creatinine}, creatinine);

    RunConfig cfg; // rolling 7-day minimum for the ratio, 48 h minimum for the absolute rise
    auto records = annotate_subject(bundle, patient.subject_id, cfg);
    write_stage_records(records, std::cout);

    auto summary = summarize(records);
    if (const auto& first = summary.first_aki_in(Category::overall))
        std::cout << "first AKI at " << format_timestamp(*first) << ", worst stage "
                  << to_string(summary.max_in(Category::overall)) << '\n';
}
