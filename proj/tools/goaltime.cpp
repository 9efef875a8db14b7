// goaltime: fit the per-minute goal scoring model, test it, simulate it and
// plot it.
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 internal numeric error.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "goaltime/errors.hpp"
#include "goaltime/ingest.hpp"
#include "goaltime/report.hpp"

namespace {

using namespace goaltime;
using nlohmann::json;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

// Error tagged with the pipeline stage it came from.
struct StageError {
    std::string stage;
    int code;
    std::string message;
};

template <typename F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const DataError& e) {
        throw StageError{name, kExitData, e.what()};
    } catch (const NumericError& e) {
        throw StageError{name, kExitNumeric, e.what()};
    } catch (const std::invalid_argument& e) {
        throw StageError{name, kExitUsage, e.what()};
    } catch (const json::exception& e) {
        throw StageError{name, kExitData, e.what()};
    } catch (const std::exception& e) {
        throw StageError{name, kExitNumeric, e.what()};
    }
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    return in;
}

json read_report(const std::string& path) {
    auto in = open_input(path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw DataError(path + " is not valid JSON: " + e.what());
    }
}

MinuteCounts read_counts(const std::string& path, const std::string& format) {
    auto in = open_input(path);
    if (format == "tallied") return parse_tallied(in);
    return tally(filter_regular(parse_dataset(in)));
}

std::string pv(double p) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(4) << p;
    return s.str();
}

void print_summary(const json& report, std::ostream& out) {
    const auto& d = report["dataset"];
    out << "goals: " << d["total_goals"] << " (first half " << d["total_first"] << ", second half "
        << d["total_second"] << ")\n";
    out << "half means: " << std::fixed << std::setprecision(2) << d["mean_first"].get<double>() << " / "
        << d["mean_second"].get<double>() << "\n";
    const auto& m = report["model"];
    out << "second-half line: goals = " << std::setprecision(4) << m["intercept"].get<double>() << " + "
        << m["slope"].get<double>() << " * minute\n";
    out << "P(goal in first half) = " << pv(m["total_first"].get<double>() / m["total_goals"].get<double>()) << "\n";
    const auto& t = report["tests"];
    for (const auto& e : t["first_half_homogeneity"]) out << e["name"].get<std::string>() << ": p = " << pv(e["pvalue"]) << "\n";
    out << "slope t-test: p = " << pv(t["second_half_regression"]["pvalue_slope"]) << ", R^2 = "
        << pv(t["second_half_regression"]["r_squared"]) << "\n";
    for (const auto& e : t["residual_normality"]) out << "residuals " << e["method"].get<std::string>() << ": p = " << pv(e["pvalue"]) << "\n";
    out << "second_half_gof: p = " << pv(t["second_half_gof"]["pvalue"]) << "\n";
    for (const auto& e : t["full_match_gof"]) out << e["name"].get<std::string>() << ": p = " << pv(e["pvalue"]) << "\n";
    out << "bootstrap mean difference: mean " << pv(t["bootstrap_mean_difference"]["mean"]) << ", sd "
        << pv(t["bootstrap_mean_difference"]["sd"]) << "\n";
    for (const char* key : {"maxima_first", "maxima_second"}) {
        const auto& s = report["simulations"][key];
        out << key << ": P(max > " << s["observed_max"] << ") = " << pv(s["tail_prob_gt"]) << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Per-minute goal scoring model: fit, test, simulate, plot"};
    app.require_subcommand(1);

    FitConfig config;
    std::string input, format = "events", output = "report.json";
    std::string blocks = "2,3,5", drops = "18", full_drops = "18;1,2,3,18", maxima_exclude, loess_range = "full";
    bool quiet = false;
    auto* fit = app.add_subcommand("fit", "Fit the model, run every test and write a JSON report");
    fit->add_option("--input", input, "Input CSV")->required();
    fit->add_option("--format", format, "Input format")->check(CLI::IsMember({"events", "tallied"}))->capture_default_str();
    fit->add_option("--output", output, "Report path")->capture_default_str();
    fit->add_option("--seed", config.seed, "Master random seed")->capture_default_str();
    fit->add_option("--bootstrap-reps", config.bootstrap_reps, "Bootstrap replicates")->capture_default_str();
    fit->add_option("--sims", config.sims, "Maxima simulations per half")->capture_default_str();
    fit->add_option("--blocks", blocks, "Block sizes for the blocked tests")->capture_default_str();
    fit->add_option("--drop-minutes", drops, "Minutes dropped in the extra first-half test")->capture_default_str();
    fit->add_option("--full-drop-sets", full_drops, "Drop sets for the full-match tests, ';'-separated")->capture_default_str();
    fit->add_option("--maxima-exclude", maxima_exclude, "Minutes removed from the maxima simulations");
    fit->add_option("--alpha", config.alpha, "Significance level")->capture_default_str();
    fit->add_option("--loess-span", config.loess_span, "Loess span")->capture_default_str();
    fit->add_option("--loess-degree", config.loess_degree, "Loess degree")->capture_default_str();
    fit->add_option("--loess-range", loess_range, "Fit loess over the full match or per half")
        ->check(CLI::IsMember({"full", "halves"}))->capture_default_str();
    fit->add_option("--workers", config.workers, "Threads for bootstrap and simulations")->capture_default_str();
    fit->add_flag("--quiet,-q", quiet, "Do not print the summary");

    std::string report_path, kind, plot_output;
    auto* plot = app.add_subcommand("plot", "Render an SVG figure from a report");
    plot->add_option("--report", report_path, "Report produced by fit")->required();
    plot->add_option("--kind", kind, "scatter_loess, prob_vector, blocks or maxima_hist")->required();
    plot->add_option("--output", plot_output, "SVG path")->required();

    std::int64_t n_samples = 0;
    std::uint64_t sample_seed = 1;
    std::string sample_output;
    auto* sample = app.add_subcommand("sample", "Draw goal times from a fitted model");
    sample->add_option("--report", report_path, "Report produced by fit")->required();
    sample->add_option("--n", n_samples, "Number of draws")->required();
    sample->add_option("--seed", sample_seed, "Random seed")->capture_default_str();
    sample->add_option("--output", sample_output, "CSV path (stdout if omitted)");

    std::string tally_output;
    auto* tally_cmd = app.add_subcommand("tally", "Convert an event CSV into per-minute counts");
    tally_cmd->add_option("--input", input, "Event CSV")->required();
    tally_cmd->add_option("--output", tally_output, "Counts CSV (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (fit->parsed()) {
            stage("options", [&] {
                config.blocks = parse_int_list(blocks);
                const auto d = parse_int_list(drops);
                config.first_half_drops = {d.begin(), d.end()};
                config.full_drop_sets = parse_drop_sets(full_drops);
                const auto x = parse_int_list(maxima_exclude);
                config.maxima_excluded = {x.begin(), x.end()};
                config.loess_range = loess_range == "halves" ? LoessRange::halves : LoessRange::full;
                config.validate();
                return 0;
            });
            const auto counts = stage("ingest", [&] { return read_counts(input, format); });
            const auto report = stage("analysis", [&] { return build_report(counts, config); });
            stage("write", [&] {
                write_file_atomic(output, dump_report(report));
                return 0;
            });
            if (!quiet) print_summary(report, std::cout);
        } else if (plot->parsed()) {
            const auto k = stage("options", [&] { return parse_plot_kind(kind); });
            const auto report = stage("read report", [&] { return read_report(report_path); });
            const auto svg = stage("plot", [&] { return render_plot(report, k); });
            stage("write", [&] {
                write_file_atomic(plot_output, svg);
                return 0;
            });
        } else if (sample->parsed()) {
            if (n_samples < 0) throw StageError{"options", kExitUsage, "--n must be non-negative"};
            const auto model = stage("read report", [&] { return model_from_report(read_report(report_path)); });
            std::ostringstream csv;
            stage("sample", [&] {
                write_samples(csv, model, n_samples, sample_seed);
                return 0;
            });
            if (sample_output.empty()) {
                std::cout << csv.str();
            } else {
                stage("write", [&] {
                    write_file_atomic(sample_output, csv.str());
                    return 0;
                });
            }
        } else if (tally_cmd->parsed()) {
            const auto counts = stage("ingest", [&] { return read_counts(input, "events"); });
            std::ostringstream csv;
            write_tallied(csv, counts);
            if (tally_output.empty()) {
                std::cout << csv.str();
            } else {
                stage("write", [&] {
                    write_file_atomic(tally_output, csv.str());
                    return 0;
                });
            }
        }
    } catch (const StageError& e) {
        std::cerr << "goaltime: " << e.stage << ": " << e.message << "\n";
        return e.code;
    }
    return 0;
}
