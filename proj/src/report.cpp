#include "goaltime/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include "goaltime/errors.hpp"
#include "goaltime/random.hpp"

namespace goaltime {

using nlohmann::json;

namespace {

json vec(const VectorRef& v) { return json(std::vector<double>(v.begin(), v.end())); }

Vector to_vector(const json& j) {
    const auto values = j.get<std::vector<double>>();
    return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json chisq_entry(const std::string& name, const ChiSqResult& r, double alpha,
                 const std::set<int>& drops, std::optional<int> block, json& warnings) {
    json j = r;
    j["name"] = name;
    j["drop_minutes"] = drops;
    j["block_size"] = block ? json(*block) : json(nullptr);
    j["reject"] = r.pvalue < alpha;
    if (r.low_expected) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s: smallest expected value %.3f is below 5", name.c_str(),
                      r.min_expected);
        warnings.push_back(buf);
    }
    return j;
}

std::string set_label(const std::set<int>& s) {
    std::string out;
    for (int m : s) out += (out.empty() ? "" : ",") + std::to_string(m);
    return out;
}

// (minute, count) of the largest count in the half, earliest minute on ties
std::pair<int, std::int64_t> half_peak(const MinuteCounts& counts, Half half) {
    const int first = half == Half::first ? 1 : kMinutesPerHalf + 1;
    int best = first;
    for (int m = first; m < first + kMinutesPerHalf; ++m)
        if (counts.at(m) > counts.at(best)) best = m;
    return {best, counts.at(best)};
}

} // namespace

void FitConfig::validate() const {
    TestConfig{alpha}.validate();
    if (bootstrap_reps < 1) throw std::invalid_argument("bootstrap replicates must be >= 1");
    if (sims < 1) throw std::invalid_argument("simulation count must be >= 1");
    for (int b : blocks)
        if (!valid_block_size(b))
            throw std::invalid_argument("block size must be 2, 3 or 5, got " + std::to_string(b));
    for (int m : first_half_drops)
        if (m < 1 || m > kMinutesPerHalf)
            throw std::invalid_argument("first-half drop minute " + std::to_string(m) + " outside 1..45");
    for (const auto& s : full_drop_sets)
        for (int m : s)
            if (m < 1 || m > kMinutes)
                throw std::invalid_argument("drop minute " + std::to_string(m) + " outside 1..90");
    for (int m : maxima_excluded)
        if (m < 1 || m > kMinutes)
            throw std::invalid_argument("excluded minute " + std::to_string(m) + " outside 1..90");
    if (!(loess_span > 0.0 && loess_span <= 1.0)) throw std::invalid_argument("loess span must lie in (0, 1]");
    if (loess_degree != 1 && loess_degree != 2) throw std::invalid_argument("loess degree must be 1 or 2");
    if (workers < 1) throw std::invalid_argument("workers must be >= 1");
}

void to_json(json& j, const CdfCoefficients& c) {
    j = json{{"linear", c.linear}, {"quad_a", c.quad_a}, {"quad_b", c.quad_b}, {"quad_c", c.quad_c}};
}

void from_json(const json& j, CdfCoefficients& c) {
    j.at("linear").get_to(c.linear);
    j.at("quad_a").get_to(c.quad_a);
    j.at("quad_b").get_to(c.quad_b);
    j.at("quad_c").get_to(c.quad_c);
}

void to_json(json& j, const PiecewiseScoringModel& m) {
    j = json{{"rate_first", m.rate_first},     {"intercept", m.intercept},
             {"slope", m.slope},               {"total_goals", m.total_goals},
             {"total_first", m.total_first},   {"total_second", m.total_second},
             {"prob_vector", vec(m.prob_vector)}, {"cdf", m.cdf}};
}

void from_json(const json& j, PiecewiseScoringModel& m) {
    j.at("rate_first").get_to(m.rate_first);
    j.at("intercept").get_to(m.intercept);
    j.at("slope").get_to(m.slope);
    j.at("total_goals").get_to(m.total_goals);
    j.at("total_first").get_to(m.total_first);
    j.at("total_second").get_to(m.total_second);
    m.prob_vector = to_vector(j.at("prob_vector"));
    if (m.prob_vector.size() != kMinutes) throw DataError("model prob_vector must have 90 entries");
    j.at("cdf").get_to(m.cdf);
}

void to_json(json& j, const ChiSqResult& r) {
    j = json{{"statistic", r.statistic},
             {"df", r.df},
             {"pvalue", r.pvalue},
             {"low_expected", r.low_expected},
             {"min_expected", r.min_expected}};
}

void to_json(json& j, const RegressionFit& r) {
    j = json{{"intercept", r.intercept}, {"slope", r.slope},
             {"slope_se", r.slope_se},   {"t_stat", r.t_stat},
             {"pvalue_slope", r.pvalue_slope}, {"r_squared", r.r_squared},
             {"residuals", vec(r.residuals)}};
}

void to_json(json& j, const NormalityResult& r) {
    j = json{{"method", to_string(r.method)}, {"statistic", r.statistic}, {"pvalue", r.pvalue}};
}

void to_json(json& j, const MaximaSimResult& r) {
    json hist = json::array();
    for (const auto& [max, freq] : r.histogram) hist.push_back({{"max", max}, {"count", freq}});
    j = json{{"half", to_string(r.half)}, {"n_sims", r.n_sims}, {"n_goals", r.n_goals}, {"histogram", hist}};
}

json build_report(const MinuteCounts& counts, const FitConfig& config) {
    config.validate();
    json warnings = json::array();

    RegressionFit regression;
    const auto model = fit_model(counts, regression);
    const auto [mean_first, mean_second] = half_means(counts);
    const auto peak_first = half_peak(counts, Half::first);
    const auto peak_second = half_peak(counts, Half::second);

    const std::uint64_t bootstrap_seed = derive_seed(config.seed, 1);
    const std::uint64_t maxima_first_seed = derive_seed(config.seed, 2);
    const std::uint64_t maxima_second_seed = derive_seed(config.seed, 3);

    json report;
    report["schema_version"] = kReportSchemaVersion;
    report["config"] = {
        {"seed", config.seed},
        {"seeds", {{"bootstrap", bootstrap_seed},
                   {"maxima_first", maxima_first_seed},
                   {"maxima_second", maxima_second_seed}}},
        {"alpha", config.alpha},
        {"bootstrap_replicates", config.bootstrap_reps},
        {"maxima_simulations", config.sims},
        {"block_sizes", config.blocks},
        {"first_half_drop_minutes", config.first_half_drops},
        {"full_match_drop_sets", config.full_drop_sets},
        {"maxima_excluded_minutes", config.maxima_excluded},
        {"loess", {{"span", config.loess_span},
                   {"degree", config.loess_degree},
                   {"range", config.loess_range == LoessRange::full ? "full" : "halves"}}},
    };

    std::vector<std::int64_t> raw(counts.counts().begin(), counts.counts().end());
    report["dataset"] = {
        {"counts", raw},
        {"total_goals", counts.total()},
        {"total_first", counts.total_first()},
        {"total_second", counts.total_second()},
        {"mean_first", mean_first},
        {"mean_second", mean_second},
        {"peak_first", {{"minute", peak_first.first}, {"count", peak_first.second}}},
        {"peak_second", {{"minute", peak_second.first}, {"count", peak_second.second}}},
    };
    report["model"] = model;

    // smoothing
    const Vector minutes = Vector::LinSpaced(kMinutes, 1, kMinutes);
    const Vector all = counts.as_real();
    json smoothing;
    if (config.loess_range == LoessRange::full) {
        smoothing["loess"] = vec(loess_fit(minutes, all, config.loess_span, config.loess_degree).fitted);
    } else {
        Vector fitted(kMinutes);
        fitted.head<kMinutesPerHalf>() =
            loess_fit(minutes.head<kMinutesPerHalf>(), all.head<kMinutesPerHalf>(), config.loess_span,
                      config.loess_degree).fitted;
        fitted.tail<kMinutesPerHalf>() =
            loess_fit(minutes.tail<kMinutesPerHalf>(), all.tail<kMinutesPerHalf>(), config.loess_span,
                      config.loess_degree).fitted;
        smoothing["loess"] = vec(fitted);
    }
    report["smoothing"] = smoothing;

    // tests
    json tests;
    json homogeneity = json::array();
    homogeneity.push_back(chisq_entry("first_half_homogeneity", first_half_homogeneity(counts),
                                      config.alpha, {}, std::nullopt, warnings));
    if (!config.first_half_drops.empty())
        homogeneity.push_back(chisq_entry("first_half_homogeneity drop " + set_label(config.first_half_drops),
                                          first_half_homogeneity(counts, config.first_half_drops),
                                          config.alpha, config.first_half_drops, std::nullopt, warnings));
    for (int b : config.blocks)
        homogeneity.push_back(chisq_entry("first_half_homogeneity blocks " + std::to_string(b),
                                          first_half_homogeneity(counts, {}, b), config.alpha, {}, b,
                                          warnings));
    tests["first_half_homogeneity"] = homogeneity;

    json reg = regression;
    reg["fitted_mean_second"] = (regression.intercept + regression.slope * minutes.tail<kMinutesPerHalf>().array()).mean();
    tests["second_half_regression"] = reg;
    json normality = json::array();
    try {
        normality.push_back(ks_normality(regression.residuals));
        normality.push_back(shapiro_wilk(regression.residuals));
    } catch (const DataError& e) {
        normality = json::array();
        warnings.push_back(std::string("residual normality tests skipped: ") + e.what());
    }
    tests["residual_normality"] = normality;
    tests["second_half_gof"] =
        chisq_entry("second_half_gof", second_half_gof(counts, model), config.alpha, {}, std::nullopt, warnings);

    json full = json::array();
    full.push_back(chisq_entry("full_gof", full_gof(counts, model), config.alpha, {}, std::nullopt, warnings));
    for (const auto& drops : config.full_drop_sets)
        full.push_back(chisq_entry("full_gof drop " + set_label(drops), full_gof(counts, model, drops),
                                   config.alpha, drops, std::nullopt, warnings));
    for (int b : config.blocks)
        full.push_back(chisq_entry("full_gof blocks " + std::to_string(b), full_gof(counts, model, {}, b),
                                   config.alpha, {}, b, warnings));
    tests["full_match_gof"] = full;

    const auto boot = bootstrap_mean_diff(counts.first_half(), counts.second_half(), config.bootstrap_reps,
                                          bootstrap_seed, config.workers);
    std::vector<double> sorted(boot.samples.begin(), boot.samples.end());
    std::sort(sorted.begin(), sorted.end());
    auto quantile = [&](double p) {
        const double pos = p * static_cast<double>(sorted.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, sorted.size() - 1);
        return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
    };
    const auto nonpositive = std::count_if(sorted.begin(), sorted.end(), [](double d) { return d <= 0.0; });
    tests["bootstrap_mean_difference"] = {
        {"replicates", boot.replicates},
        {"observed", mean_second - mean_first},
        {"mean", boot.mean},
        {"sd", boot.sd},
        {"ci_lower", quantile(config.alpha / 2.0)},
        {"ci_upper", quantile(1.0 - config.alpha / 2.0)},
        {"fraction_nonpositive", static_cast<double>(nonpositive) / static_cast<double>(sorted.size())},
    };
    report["tests"] = tests;

    // simulations
    json sims;
    const std::pair<Half, std::pair<int, std::int64_t>> halves[] = {{Half::first, peak_first},
                                                                    {Half::second, peak_second}};
    for (const auto& [half, peak] : halves) {
        const auto sim = simulate_half_maxima(counts, model, half, config.sims,
                                              half == Half::first ? maxima_first_seed : maxima_second_seed,
                                              config.maxima_excluded, config.workers);
        json j = sim;
        j["observed_max"] = peak.second;
        j["observed_minute"] = peak.first;
        j["tail_prob_gt"] = sim.tail_prob_gt(peak.second);
        j["tail_prob_ge"] = sim.tail_prob_ge(peak.second);
        sims[half == Half::first ? "maxima_first" : "maxima_second"] = j;
    }
    report["simulations"] = sims;

    warnings.push_back("chi-square tests use df = cells - 1, also against fitted probabilities");
    warnings.push_back("blocked chi-square tests use per-block average counts, which are not integer counts");
    warnings.push_back("ks_normality estimates mean and sd from the residuals and uses the asymptotic "
                       "Kolmogorov p-value without Lilliefors correction");
    if (!config.maxima_excluded.empty())
        warnings.push_back("maxima simulations exclude minutes " + set_label(config.maxima_excluded));
    report["warnings"] = warnings;

    require_finite(report);
    return report;
}

std::string dump_report(const json& report) { return report.dump(2) + "\n"; }

void require_finite(const json& doc, const std::string& path) {
    if (doc.is_number_float()) {
        if (!std::isfinite(doc.get<double>())) throw NumericError("non-finite value at " + path);
    } else if (doc.is_object()) {
        for (const auto& [k, v] : doc.items()) require_finite(v, path + "/" + k);
    } else if (doc.is_array()) {
        for (std::size_t i = 0; i < doc.size(); ++i) require_finite(doc[i], path + "/" + std::to_string(i));
    }
}

PiecewiseScoringModel model_from_report(const json& report) {
    try {
        return report.at("model").get<PiecewiseScoringModel>();
    } catch (const json::exception& e) {
        throw DataError(std::string("report has no usable model: ") + e.what());
    }
}

MinuteCounts counts_from_report(const json& report) {
    try {
        const auto raw = report.at("dataset").at("counts").get<std::vector<std::int64_t>>();
        if (raw.size() != static_cast<std::size_t>(kMinutes)) throw DataError("report counts must have 90 entries");
        return MinuteCounts(Eigen::Map<const MinuteCounts::Storage>(raw.data()));
    } catch (const json::exception& e) {
        throw DataError(std::string("report has no usable counts: ") + e.what());
    }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw DataError("failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw DataError("cannot move output into place at " + path.string());
    }
}

void write_samples(std::ostream& out, const PiecewiseScoringModel& model, std::int64_t n, std::uint64_t seed) {
    if (n < 0) throw std::invalid_argument("sample count must be non-negative");
    const Vector times = sample_goal_times(model, n, seed);
    out << "time,minute\n";
    char buf[64];
    for (double t : times) {
        const int minute = std::max(1, static_cast<int>(std::ceil(kMinutes * t)));
        std::snprintf(buf, sizeof buf, "%.10f,%d\n", t, minute);
        out << buf;
    }
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    if (text.empty()) return out;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw std::invalid_argument("empty entry in list '" + text + "'");
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size()) throw std::invalid_argument("not an integer: '" + item + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<std::set<int>> parse_drop_sets(const std::string& text) {
    std::vector<std::set<int>> out;
    std::stringstream ss(text);
    std::string group;
    while (std::getline(ss, group, ';')) {
        const auto values = parse_int_list(group);
        if (!values.empty()) out.emplace_back(values.begin(), values.end());
    }
    return out;
}

} // namespace goaltime
