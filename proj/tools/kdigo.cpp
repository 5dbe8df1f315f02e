// kdigo: command-line front end.
//
//   kdigo annotate --urine-output UO.csv --creatinine SCR.csv --patients P.csv --output OUT.csv
//   kdigo validate --pred OUT.csv --gold GOLD.csv [--min-accuracy 1.0]
//   kdigo config   [annotate flags...]      prints the effective configuration
//
// Exit codes: 0 success, 1 data or validation error, 2 usage error,
// 3 accuracy below --min-accuracy.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "kdigo/kdigo.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDataError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBelowAccuracy = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigFlags {
    std::string config_file;
    std::optional<std::string> uo_mode;
    std::optional<std::string> anuria_threshold;
    std::optional<std::string> rel_baseline;
    std::optional<std::string> abs_baseline;
    std::optional<std::string> baseline_stat;
    std::optional<int> window_hours;
    std::optional<std::string> assumed_gfr;
    std::optional<std::string> abw_factor;
    std::optional<int> max_gap_hours;
    bool no_impute = false;
    std::optional<std::string> creatinine_unit;
    std::optional<unsigned> jobs;

    void attach(CLI::App& app) {
        app.add_option("--config", config_file, "JSON config file; flags override its values")
            ->check(CLI::ExistingFile);
        app.add_option("--uo-mode", uo_mode, "strict_consecutive (default) or trailing_mean");
        app.add_option("--anuria-threshold", anuria_threshold, "anuria rate bound in mL/kg/h (default 0)");
        app.add_option("--rel-baseline", rel_baseline,
                       "relative creatinine baseline: rolling[:STAT[:H]], initial[:STAT[:H]], fixed:V, "
                       "cockcroft-gault[:GFR] (default rolling:min:168)");
        app.add_option("--abs-baseline", abs_baseline, "absolute creatinine baseline (default rolling:min:48)");
        app.add_option("--baseline-stat", baseline_stat, "statistic for window baselines that omit one: min|mean|first");
        app.add_option("--window-hours", window_hours, "window length for window baselines that omit one");
        app.add_option("--assumed-gfr", assumed_gfr, "GFR in mL/min for cockcroft-gault baselines (default 75)");
        app.add_option("--abw-factor", abw_factor, "adjusted body weight factor for cockcroft-gault (default 0.4)");
        app.add_option("--max-gap-hours", max_gap_hours, "longest gap bridged by forward fill (default 5)");
        app.add_flag("--no-impute", no_impute, "disable forward fill; input must already be hourly");
        app.add_option("--creatinine-unit", creatinine_unit, "unit of the creatinine file: mg/dL (default) or umol/L");
        app.add_option("--jobs", jobs, "parallel subjects (default: available processors)");
    }

    kdigo::RunConfig resolve(unsigned& jobs_out) const {
        using namespace kdigo;
        nlohmann::json file = nlohmann::json::object();
        if (!config_file.empty()) {
            std::ifstream in(config_file);
            try {
                file = nlohmann::json::parse(in);
            } catch (const nlohmann::json::exception& e) {
                throw UsageError(config_file + ": " + e.what());
            }
        }
        try {
            RunConfig cfg = run_config_from_json(file);
            if (uo_mode) {
                auto m = parse_mode(*uo_mode);
                if (!m) throw ConfigError("--uo-mode must be strict_consecutive or trailing_mean");
                cfg.probe.uo_mode = *m;
            }
            if (anuria_threshold) cfg.probe.anuria_threshold = Quantity::parse(*anuria_threshold, Unit::mL_kg_h);

            bool rebuild = rel_baseline || abs_baseline || baseline_stat || window_hours || assumed_gfr || abw_factor;
            if (rebuild) {
                BaselineDefaults d;
                if (baseline_stat) {
                    auto s = parse_stat(*baseline_stat);
                    if (!s) throw ConfigError("--baseline-stat must be min, mean or first");
                    d.stat = *s;
                }
                if (assumed_gfr) d.assumed_gfr = Quantity::parse(*assumed_gfr, Unit::mL_min);
                if (abw_factor) {
                    auto raw = parse_micro(*abw_factor);
                    if (!raw) throw ConfigError("--abw-factor must be a number");
                    d.abw_factor_micro = *raw;
                } else if (file.contains("abw_factor")) {
                    d.abw_factor_micro = detail::json_micro(file["abw_factor"], "abw_factor");
                }
                auto spec = [&](const std::optional<std::string>& flag, const char* key) {
                    if (flag) return *flag;
                    if (file.contains(key)) return file[key].get<std::string>();
                    return std::string("rolling");
                };
                d.window_hours = window_hours.value_or(168);
                cfg.probe.rel_baseline = parse_baseline(spec(rel_baseline, "rel_baseline"), d);
                d.window_hours = window_hours.value_or(48);
                cfg.probe.abs_baseline = parse_baseline(spec(abs_baseline, "abs_baseline"), d);
            }
            if (max_gap_hours) cfg.max_gap_hours = *max_gap_hours;
            if (no_impute) cfg.imputation_enabled = false;
            if (creatinine_unit) {
                auto u = parse_unit(*creatinine_unit);
                if (!u) throw ConfigError("--creatinine-unit must be mg/dL or umol/L");
                cfg.creatinine_unit = *u;
            }
            validate_run_config(cfg);

            jobs_out = std::max(1u, std::thread::hardware_concurrency());
            if (file.contains("jobs")) jobs_out = file["jobs"].get<unsigned>();
            if (jobs) jobs_out = *jobs;
            if (jobs_out == 0) throw ConfigError("--jobs must be >= 1");
            return cfg;
        } catch (const kdigo::Error& e) {
            throw UsageError(e.what());
        } catch (const nlohmann::json::exception& e) {
            throw UsageError(std::string("config: ") + e.what());
        }
    }
};

void print_run_report(const kdigo::RunConfig& cfg, unsigned jobs) {
    std::cerr << "kdigo annotate: configuration " << kdigo::to_json(cfg).dump() << " jobs=" << jobs << '\n';
    if (kdigo::uses_cockcroft_gault(cfg.probe))
        std::cerr << "warning: Cockcroft-Gault baseline selected; it assumes a filtration rate and should be a "
                     "last resort when no measured baseline is available\n";
}

int cmd_annotate(const ConfigFlags& flags, const kdigo::DatasetPaths& paths, const std::string& output,
                 std::string summary) {
    unsigned jobs = 1;
    kdigo::RunConfig cfg = flags.resolve(jobs);
    print_run_report(cfg, jobs);

    kdigo::LoadOptions opts;
    opts.creatinine_unit = cfg.creatinine_unit;
    auto bundle = kdigo::load_dataset(paths, opts);
    auto records = kdigo::annotate_all(bundle, cfg, jobs);
    kdigo::write_stage_records(records, std::filesystem::path(output));
    if (summary.empty()) {
        std::filesystem::path p(output);
        summary = (p.parent_path() / (p.stem().string() + "_summary.csv")).string();
    }
    kdigo::write_summaries(kdigo::summarize_all(records), std::filesystem::path(summary));
    std::cerr << "kdigo annotate: " << bundle.subjects().size() << " subjects, " << records.size()
              << " hourly records -> " << output << ", summaries -> " << summary << '\n';
    return kExitOk;
}

int cmd_validate(const std::string& pred_path, const std::string& gold_path, std::optional<double> min_accuracy,
                 const std::string& report_path) {
    auto report = kdigo::score(kdigo::read_labels(pred_path), kdigo::read_labels(gold_path));
    kdigo::print_report(report, std::cout);
    if (!report_path.empty()) {
        std::ofstream out(report_path, std::ios::binary);
        if (!out) throw kdigo::IoError("cannot open " + report_path + " for writing");
        kdigo::write_report_csv(report, out);
    }
    if (min_accuracy && report.min_accuracy() < *min_accuracy) {
        std::cerr << "kdigo validate: lowest accuracy " << report.min_accuracy() << " is below " << *min_accuracy
                  << '\n';
        return kExitBelowAccuracy;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"KDIGO acute kidney injury staging for hourly ICU time series"};
    app.require_subcommand(1);

    ConfigFlags annotate_flags;
    kdigo::DatasetPaths paths;
    std::string dialysis_path, output, summary;
    auto* annotate = app.add_subcommand("annotate", "stage every hour of every subject");
    annotate->add_option("--urine-output", paths.urine_output, "subject_id,timestamp,urineoutput_ml")
        ->required()
        ->check(CLI::ExistingFile);
    annotate->add_option("--creatinine", paths.creatinine, "subject_id,timestamp,creatinine")
        ->required()
        ->check(CLI::ExistingFile);
    annotate->add_option("--dialysis", dialysis_path, "subject_id,timestamp,dialysis_active")->check(CLI::ExistingFile);
    annotate->add_option("--patients", paths.patients, "subject_id,weight_kg,height_cm,age_years,sex")
        ->required()
        ->check(CLI::ExistingFile);
    annotate->add_option("-o,--output", output, "stage record file to write")->required();
    annotate->add_option("--summary", summary, "per-patient summary file (default: <output>_summary.csv)");
    annotate_flags.attach(*annotate);

    std::string pred_path, gold_path, report_path;
    std::optional<double> min_accuracy;
    auto* validate = app.add_subcommand("validate", "score stage records against gold labels");
    validate->add_option("--pred", pred_path, "predicted stage records")->required()->check(CLI::ExistingFile);
    validate->add_option("--gold", gold_path, "gold labels")->required()->check(CLI::ExistingFile);
    validate->add_option("--min-accuracy", min_accuracy, "fail (exit 3) if any accuracy is below this bound")
        ->check(CLI::Range(0.0, 1.0));
    validate->add_option("--report", report_path, "also write the report as CSV");

    ConfigFlags config_flags;
    auto* config = app.add_subcommand("config", "print the effective configuration as JSON");
    config_flags.attach(*config);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*annotate) {
            if (!dialysis_path.empty()) paths.dialysis = dialysis_path;
            return cmd_annotate(annotate_flags, paths, output, summary);
        }
        if (*validate) return cmd_validate(pred_path, gold_path, min_accuracy, report_path);
        if (*config) {
            unsigned jobs = 1;
            auto cfg = config_flags.resolve(jobs);
            auto j = kdigo::to_json(cfg);
            j["jobs"] = jobs;
            std::cout << j.dump(2) << '\n';
            return kExitOk;
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const kdigo::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDataError;
    }
    return kExitUsage;
}
