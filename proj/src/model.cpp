#include "goaltime/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

#include "goaltime/errors.hpp"
#include "goaltime/random.hpp"

namespace goaltime {

namespace {

// Sum of the minutes 46..90.
constexpr double kSecondHalfMinuteSum = 3060.0;

Vector second_half_minutes() {
    return Vector::LinSpaced(kMinutesPerHalf, kMinutesPerHalf + 1, kMinutes);
}

void check_minutes(const std::set<int>& minutes, int lo, int hi, const char* what) {
    for (int m : minutes)
        if (m < lo || m > hi)
            throw std::invalid_argument(std::string(what) + ": minute " + std::to_string(m) +
                                        " outside " + std::to_string(lo) + ".." + std::to_string(hi));
}

// Chi-square of `observed` against `probs` after removing the entries whose
// minute (first_minute + index) is in `drops`.
ChiSqResult gof_without(const VectorRef& observed, const VectorRef& probs, int first_minute,
                        const std::set<int>& drops) {
    if (drops.empty()) return chisq_gof(observed, probs);
    std::vector<double> obs;
    std::vector<double> p;
    for (Eigen::Index i = 0; i < observed.size(); ++i) {
        if (drops.contains(first_minute + static_cast<int>(i))) continue;
        obs.push_back(observed(i));
        p.push_back(probs(i));
    }
    const Eigen::Map<const Vector> o(obs.data(), static_cast<Eigen::Index>(obs.size()));
    Vector pv = Eigen::Map<const Vector>(p.data(), static_cast<Eigen::Index>(p.size()));
    pv /= pv.sum();
    return chisq_gof(o, pv);
}

} // namespace

Vector PiecewiseScoringModel::second_half_probs() const {
    const Vector g = (intercept + slope * second_half_minutes().array()).matrix();
    return g / g.sum();
}

CdfCoefficients derive_cdf(double rate_first, double intercept, double slope) {
    const double first_mass = kMinutesPerHalf * rate_first;
    const double second_mass = kMinutesPerHalf * intercept + slope * kSecondHalfMinuteSum;
    const double total = first_mass + second_mass;
    if (!(total > 0.0) || rate_first < 0.0)
        throw DataError("derive_cdf: model has no positive goal mass");
    // density on (1/2, 1]: (90 / total) * (intercept + slope * (90 x + 1/2)),
    // i.e. the line evaluated at the minute whose interval midpoint is x
    CdfCoefficients c;
    c.linear = 2.0 * first_mass / total;
    c.quad_a = 90.0 * 45.0 * slope / total;
    c.quad_b = 90.0 * (intercept + 0.5 * slope) / total;
    c.quad_c = 0.5 * c.linear - 0.5 * c.quad_b - 0.25 * c.quad_a;
    return c;
}

PiecewiseScoringModel fit_model(const MinuteCounts& counts, RegressionFit& regression) {
    if (counts.total_first() <= 0 || counts.total_second() <= 0) throw DataError("empty half");

    PiecewiseScoringModel m;
    m.total_first = counts.total_first();
    m.total_second = counts.total_second();
    m.total_goals = counts.total();
    m.rate_first = static_cast<double>(m.total_first) / kMinutesPerHalf;

    regression = ols_fit(second_half_minutes(), counts.second_half());
    m.intercept = regression.intercept;
    m.slope = regression.slope;

    Vector expected(kMinutes);
    expected.head<kMinutesPerHalf>().setConstant(m.rate_first);
    expected.tail<kMinutesPerHalf>() = (m.intercept + m.slope * second_half_minutes().array()).matrix();
    if (!(expected.tail<kMinutesPerHalf>().array() > 0.0).all())
        throw DataError("fitted second-half line is not positive on minutes 46..90");
    m.prob_vector = expected / expected.sum();
    m.cdf = derive_cdf(m.rate_first, m.intercept, m.slope);
    return m;
}

PiecewiseScoringModel fit_model(const MinuteCounts& counts) {
    RegressionFit unused;
    return fit_model(counts, unused);
}

double expected_goals(const PiecewiseScoringModel& model, int minute) {
    if (minute < 1 || minute > kMinutes)
        throw std::out_of_range("minute " + std::to_string(minute) + " outside 1..90");
    if (minute <= kMinutesPerHalf) return model.rate_first;
    return model.intercept + model.slope * minute;
}

double cdf(const CdfCoefficients& c, double x) {
    if (x <= 0.0) return 0.0;
    if (x < 0.5) return c.linear * x;
    if (x < 1.0) return (c.quad_a * x + c.quad_b) * x + c.quad_c;
    return 1.0;
}

double cdf(const PiecewiseScoringModel& model, double x) { return cdf(model.cdf, x); }

double inverse_cdf(const CdfCoefficients& c, double u) {
    if (std::isnan(u)) throw std::invalid_argument("inverse_cdf: u is NaN");
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    if (u < c.breakpoint_mass()) return u / c.linear;
    const double shifted = u - c.quad_c;
    double x;
    if (c.quad_a == 0.0) {
        x = shifted / c.quad_b;
    } else {
        const double root = std::sqrt(std::max(0.0, c.quad_b * c.quad_b + 4.0 * c.quad_a * shifted));
        // pick the form without cancellation
        x = c.quad_b >= 0.0 ? 2.0 * shifted / (c.quad_b + root) : (root - c.quad_b) / (2.0 * c.quad_a);
    }
    return std::clamp(x, 0.5, 1.0);
}

double inverse_cdf(const PiecewiseScoringModel& model, double u) { return inverse_cdf(model.cdf, u); }

Vector sample_goal_times(const PiecewiseScoringModel& model, std::int64_t n, std::uint64_t seed) {
    if (n < 0) throw std::invalid_argument("sample_goal_times: n must be non-negative");
    Engine eng(derive_seed(seed, 0));
    Vector out(n);
    for (std::int64_t i = 0; i < n; ++i) out(i) = inverse_cdf(model.cdf, uniform01(eng));
    return out;
}

double MaximaSimResult::tail_prob_ge(std::int64_t observed) const {
    std::int64_t hits = 0;
    for (auto it = histogram.lower_bound(observed); it != histogram.end(); ++it) hits += it->second;
    return n_sims > 0 ? static_cast<double>(hits) / static_cast<double>(n_sims) : 0.0;
}

double MaximaSimResult::tail_prob_gt(std::int64_t observed) const {
    std::int64_t hits = 0;
    for (auto it = histogram.upper_bound(observed); it != histogram.end(); ++it) hits += it->second;
    return n_sims > 0 ? static_cast<double>(hits) / static_cast<double>(n_sims) : 0.0;
}

MaximaSimResult simulate_maxima(const VectorRef& probs, std::int64_t n_goals, std::int64_t n_sims,
                                std::uint64_t seed, int workers) {
    if (n_goals < 1) throw std::invalid_argument("simulate_maxima: n_goals must be >= 1");
    if (n_sims < 1) throw std::invalid_argument("simulate_maxima: n_sims must be >= 1");
    if (probs.size() < 1 || (probs.array() < 0.0).any() || !probs.allFinite())
        throw std::invalid_argument("simulate_maxima: invalid probability vector");
    if (std::abs(probs.sum() - 1.0) > 1e-9)
        throw std::invalid_argument("simulate_maxima: probabilities sum to " + std::to_string(probs.sum()));

    const auto cells = probs.size();
    std::vector<double> cumulative(cells);
    std::partial_sum(probs.begin(), probs.end(), cumulative.begin());
    const double total = cumulative.back();

    std::vector<std::int64_t> maxima(n_sims);
    auto run = [&](std::int64_t begin, std::int64_t end) {
        std::vector<std::int64_t> cell(cells);
        for (std::int64_t s = begin; s < end; ++s) {
            Engine eng(derive_seed(seed, static_cast<std::uint64_t>(s)));
            std::fill(cell.begin(), cell.end(), 0);
            for (std::int64_t g = 0; g < n_goals; ++g) {
                const double u = uniform01(eng) * total;
                auto idx = std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin();
                ++cell[std::min<std::ptrdiff_t>(idx, cells - 1)];
            }
            maxima[s] = *std::max_element(cell.begin(), cell.end());
        }
    };

    const auto nw = static_cast<std::int64_t>(std::clamp<std::int64_t>(workers, 1, n_sims));
    if (nw == 1) {
        run(0, n_sims);
    } else {
        std::vector<std::jthread> pool;
        const std::int64_t chunk = (n_sims + nw - 1) / nw;
        for (std::int64_t w = 0; w < nw; ++w) {
            const std::int64_t begin = w * chunk;
            const std::int64_t end = std::min(n_sims, begin + chunk);
            if (begin < end) pool.emplace_back(run, begin, end);
        }
    }

    MaximaSimResult r;
    r.n_sims = n_sims;
    r.n_goals = n_goals;
    for (auto m : maxima) ++r.histogram[m];
    return r;
}

MaximaSimResult simulate_half_maxima(const MinuteCounts& counts, const PiecewiseScoringModel& model,
                                     Half half, std::int64_t n_sims, std::uint64_t seed,
                                     const std::set<int>& excluded, int workers) {
    if (half == Half::full) throw std::invalid_argument("simulate_half_maxima: pick one half");
    const int first_minute = half == Half::first ? 1 : kMinutesPerHalf + 1;
    check_minutes(excluded, 1, kMinutes, "simulate_half_maxima");

    const Vector base = half == Half::first ? Vector(Vector::Constant(kMinutesPerHalf, 1.0 / kMinutesPerHalf))
                                            : model.second_half_probs();
    std::vector<double> p;
    std::int64_t goals = 0;
    for (int i = 0; i < kMinutesPerHalf; ++i) {
        const int minute = first_minute + i;
        if (excluded.contains(minute)) continue;
        p.push_back(base(i));
        goals += counts.at(minute);
    }
    if (p.empty()) throw DataError("every minute of the half is excluded");
    Vector probs = Eigen::Map<const Vector>(p.data(), static_cast<Eigen::Index>(p.size()));
    if (!excluded.empty()) probs /= probs.sum();
    if (goals < 1) throw DataError("empty half");

    auto r = simulate_maxima(probs, goals, n_sims, seed, workers);
    r.half = half;
    return r;
}

ChiSqResult full_gof(const MinuteCounts& counts, const PiecewiseScoringModel& model,
                     const std::set<int>& drop_minutes, std::optional<int> block_size) {
    check_minutes(drop_minutes, 1, kMinutes, "full_gof");
    if (model.prob_vector.size() != kMinutes) throw std::invalid_argument("full_gof: model is not fitted");

    if (block_size) {
        if (!drop_minutes.empty())
            throw std::invalid_argument("full_gof: minute drops cannot be combined with blocks");
        const auto blocking = reshape_blocks(counts, Half::full, *block_size);
        Vector p(static_cast<Eigen::Index>(blocking.minutes.size()));
        for (std::size_t i = 0; i < blocking.minutes.size(); ++i)
            p(static_cast<Eigen::Index>(i)) = model.prob_vector(blocking.minutes[i] - 1);
        p /= p.sum();
        return chisq_gof(blocking.values, block_probs(p, blocking));
    }

    auto dropped_in = [&](int lo, int hi) {
        return std::count_if(drop_minutes.begin(), drop_minutes.end(),
                             [&](int m) { return m >= lo && m <= hi; });
    };
    if (dropped_in(1, kMinutesPerHalf) == kMinutesPerHalf ||
        dropped_in(kMinutesPerHalf + 1, kMinutes) == kMinutesPerHalf)
        throw DataError("full_gof: every minute of a half is dropped");
    return gof_without(counts.as_real(), model.prob_vector, 1, drop_minutes);
}

ChiSqResult first_half_homogeneity(const MinuteCounts& counts, const std::set<int>& drop_minutes,
                                   std::optional<int> block_size) {
    check_minutes(drop_minutes, 1, kMinutesPerHalf, "first_half_homogeneity");
    if (block_size) {
        if (!drop_minutes.empty())
            throw std::invalid_argument("first_half_homogeneity: minute drops cannot be combined with blocks");
        const auto blocking = reshape_blocks(counts, Half::first, *block_size);
        const auto k = blocking.values.size();
        return chisq_gof(blocking.values, Vector::Constant(k, 1.0 / static_cast<double>(k)));
    }
    if (drop_minutes.size() == static_cast<std::size_t>(kMinutesPerHalf))
        throw DataError("first_half_homogeneity: every minute is dropped");
    const Vector uniform = Vector::Constant(kMinutesPerHalf, 1.0 / kMinutesPerHalf);
    return gof_without(counts.first_half(), uniform, 1, drop_minutes);
}

ChiSqResult second_half_gof(const MinuteCounts& counts, const PiecewiseScoringModel& model) {
    return chisq_gof(counts.second_half(), model.second_half_probs());
}

} // namespace goaltime
