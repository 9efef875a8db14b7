#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>

#include "goaltime/blocks.hpp"
#include "goaltime/ingest.hpp"
#include "goaltime/stats.hpp"

namespace goaltime {

// Goal-time CDF on the match rescaled to [0, 1]:
//   F(x) = linear * x                    0 <= x < 1/2
//   F(x) = quad_a x^2 + quad_b x + quad_c  1/2 <= x < 1
struct CdfCoefficients {
    double linear = 1.0;
    double quad_a = 0.0;
    double quad_b = 1.0;
    double quad_c = 0.0;

    double breakpoint_mass() const { return 0.5 * linear; }
};

// Constant scoring rate in the first half, a fitted line in the second.
struct PiecewiseScoringModel {
    double rate_first = 0.0; // mean goals per minute, minutes 1..45
    double intercept = 0.0;  // second-half line: goals = intercept + slope * minute
    double slope = 0.0;
    std::int64_t total_goals = 0;
    std::int64_t total_first = 0;
    std::int64_t total_second = 0;
    Vector prob_vector;      // 90 entries, minute 1 first
    CdfCoefficients cdf;

    // The fitted line over minutes 46..90, normalized to sum to one.
    Vector second_half_probs() const;
};

// CDF coefficients for a model whose expected count is `rate_first` on
// minutes 1..45 and intercept + slope * m on minutes 46..90. Minute m maps
// to ((m - 1)/90, m/90], so the CDF increments over each minute's interval
// reproduce the discrete probabilities exactly.
CdfCoefficients derive_cdf(double rate_first, double intercept, double slope);

// Throws DataError("empty half") when either half has no goals, and
// DataError when the fitted line is not positive on every second-half minute.
PiecewiseScoringModel fit_model(const MinuteCounts& counts);

// Also returns the underlying second-half regression.
PiecewiseScoringModel fit_model(const MinuteCounts& counts, RegressionFit& regression);

double expected_goals(const PiecewiseScoringModel& model, int minute);

double cdf(const CdfCoefficients& c, double x);
double cdf(const PiecewiseScoringModel& model, double x);
double inverse_cdf(const CdfCoefficients& c, double u);
double inverse_cdf(const PiecewiseScoringModel& model, double u);

// Inverse-transform draws of goal times in [0, 1).
Vector sample_goal_times(const PiecewiseScoringModel& model, std::int64_t n, std::uint64_t seed);

struct MaximaSimResult {
    Half half = Half::first;
    std::int64_t n_sims = 0;
    std::int64_t n_goals = 0;
    std::map<std::int64_t, std::int64_t> histogram; // maximum cell count -> frequency

    double tail_prob_ge(std::int64_t observed) const;
    double tail_prob_gt(std::int64_t observed) const;
};

// Distribution of the largest cell of Multinomial(n_goals, probs) over
// n_sims draws. Simulation s uses an engine seeded with derive_seed(seed, s).
MaximaSimResult simulate_maxima(const VectorRef& probs, std::int64_t n_goals, std::int64_t n_sims,
                                std::uint64_t seed, int workers = 1);

// Maxima simulation for one half under the fitted model: uniform cells and
// total_first goals for the first half, second_half_probs() and
// total_second goals for the second. Excluded minutes are removed from
// both the cells and the goal total.
MaximaSimResult simulate_half_maxima(const MinuteCounts& counts, const PiecewiseScoringModel& model,
                                     Half half, std::int64_t n_sims, std::uint64_t seed,
                                     const std::set<int>& excluded = {}, int workers = 1);

// Observed counts over all 90 minutes against the model's prob_vector.
// Dropped minutes are removed and the remaining probabilities rescaled; with
// block_size, both sides are blocked first (drops are then not allowed).
ChiSqResult full_gof(const MinuteCounts& counts, const PiecewiseScoringModel& model,
                     const std::set<int>& drop_minutes = {},
                     std::optional<int> block_size = std::nullopt);

// First-half counts against equal minute probabilities.
ChiSqResult first_half_homogeneity(const MinuteCounts& counts, const std::set<int>& drop_minutes = {},
                                   std::optional<int> block_size = std::nullopt);

// Second-half counts against second_half_probs().
ChiSqResult second_half_gof(const MinuteCounts& counts, const PiecewiseScoringModel& model);

} // namespace goaltime
