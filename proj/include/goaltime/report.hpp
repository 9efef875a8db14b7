#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "goaltime/model.hpp"
#include "goaltime/smooth.hpp"

namespace goaltime {

inline constexpr int kReportSchemaVersion = 1;

enum class LoessRange { full, halves };

// Settings for the whole analysis; the defaults reproduce the standard run.
struct FitConfig {
    std::uint64_t seed = 2014;
    int bootstrap_reps = 10000;
    std::int64_t sims = 10000;
    std::vector<int> blocks{2, 3, 5};
    std::set<int> first_half_drops{18};
    std::vector<std::set<int>> full_drop_sets{{18}, {1, 2, 3, 18}};
    std::set<int> maxima_excluded;
    double alpha = 0.05;
    double loess_span = 0.75;
    int loess_degree = 2;
    LoessRange loess_range = LoessRange::full;
    int workers = 1;

    // Throws std::invalid_argument on out-of-range settings.
    void validate() const;
};

// Runs the full analysis on `counts` and returns the report document.
nlohmann::json build_report(const MinuteCounts& counts, const FitConfig& config);

// Pretty-printed report text, newline terminated.
std::string dump_report(const nlohmann::json& report);

// Throws NumericError naming the first non-finite number in the document.
void require_finite(const nlohmann::json& doc, const std::string& path = "");

PiecewiseScoringModel model_from_report(const nlohmann::json& report);
MinuteCounts counts_from_report(const nlohmann::json& report);

// Writes to a sibling temporary file and renames it over `path`, so a
// failure never leaves a partial file behind.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// CSV `time,minute` of n draws from the model's goal-time distribution.
void write_samples(std::ostream& out, const PiecewiseScoringModel& model, std::int64_t n,
                   std::uint64_t seed);

// Parses "2,3,5" style lists; throws std::invalid_argument.
std::vector<int> parse_int_list(const std::string& text);
// Parses "18;1,2,3,18" into drop sets.
std::vector<std::set<int>> parse_drop_sets(const std::string& text);

void to_json(nlohmann::json& j, const CdfCoefficients& c);
void from_json(const nlohmann::json& j, CdfCoefficients& c);
void to_json(nlohmann::json& j, const PiecewiseScoringModel& m);
void from_json(const nlohmann::json& j, PiecewiseScoringModel& m);
void to_json(nlohmann::json& j, const ChiSqResult& r);
void to_json(nlohmann::json& j, const RegressionFit& r);
void to_json(nlohmann::json& j, const NormalityResult& r);
void to_json(nlohmann::json& j, const MaximaSimResult& r);

// SVG renderings of a report.
enum class PlotKind { scatter_loess, prob_vector, blocks, maxima_hist };

// Throws std::invalid_argument listing the valid kinds.
PlotKind parse_plot_kind(const std::string& name);
std::string render_plot(const nlohmann::json& report, PlotKind kind);

} // namespace goaltime
