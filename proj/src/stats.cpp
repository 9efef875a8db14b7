#include "goaltime/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

#include "goaltime/errors.hpp"
#include "goaltime/random.hpp"

namespace goaltime {

void TestConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
}

std::string_view to_string(NormalityMethod m) {
    return m == NormalityMethod::ks ? "ks" : "shapiro_wilk";
}

double sample_mean(const VectorRef& v) {
    if (v.size() == 0) throw std::invalid_argument("sample_mean: empty sample");
    return v.mean();
}

double sample_sd(const VectorRef& v) {
    const auto n = v.size();
    if (n == 0) throw std::invalid_argument("sample_sd: empty sample");
    if (n == 1) return 0.0;
    const double m = v.mean();
    return std::sqrt((v.array() - m).square().sum() / static_cast<double>(n - 1));
}

ChiSqResult chisq_gof(const VectorRef& observed, const VectorRef& probs) {
    const auto k = observed.size();
    if (k != probs.size())
        throw std::invalid_argument("chisq_gof: observed has " + std::to_string(k) +
                                    " cells, probs has " + std::to_string(probs.size()));
    if (k < 2) throw std::invalid_argument("chisq_gof: need at least two cells");
    if ((observed.array() < 0.0).any() || !observed.allFinite())
        throw std::invalid_argument("chisq_gof: observed values must be finite and non-negative");
    if ((probs.array() < 0.0).any() || !probs.allFinite())
        throw std::invalid_argument("chisq_gof: probabilities must be finite and non-negative");
    if (std::abs(probs.sum() - 1.0) > 1e-9)
        throw std::invalid_argument("chisq_gof: probabilities sum to " + std::to_string(probs.sum()));
    const double total = observed.sum();
    if (!(total > 0.0)) throw DataError("chisq_gof: no observations");

    ChiSqResult r;
    r.df = static_cast<int>(k - 1);
    r.min_expected = std::numeric_limits<double>::infinity();
    double stat = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
        const double expected = probs(i) * total;
        r.min_expected = std::min(r.min_expected, expected);
        if (expected == 0.0) {
            if (observed(i) > 0.0)
                throw DataError("chisq_gof: cell " + std::to_string(i) +
                                " has zero probability but positive count");
            continue;
        }
        const double diff = observed(i) - expected;
        stat += diff * diff / expected;
    }
    r.statistic = stat;
    r.low_expected = r.min_expected < 5.0;
    r.pvalue = chisq_sf(stat, r.df);
    return r;
}

RegressionFit ols_fit(const VectorRef& x, const VectorRef& y) {
    const auto n = x.size();
    if (n != y.size()) throw std::invalid_argument("ols_fit: x and y differ in length");
    if (n < 3) throw std::invalid_argument("ols_fit: need at least 3 points");
    const double xm = x.mean();
    const double ym = y.mean();
    const Eigen::ArrayXd dx = x.array() - xm;
    const Eigen::ArrayXd dy = y.array() - ym;
    const double sxx = dx.square().sum();
    if (!(sxx > 0.0)) throw DataError("ols_fit: x is constant");
    const double sxy = (dx * dy).sum();

    RegressionFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = ym - fit.slope * xm;
    fit.residuals = (dy - fit.slope * dx).matrix();
    const double rss = fit.residuals.squaredNorm();
    const double tss = dy.square().sum();
    fit.r_squared = tss > 0.0 ? std::clamp(1.0 - rss / tss, 0.0, 1.0) : 1.0;

    const int df = static_cast<int>(n - 2);
    fit.slope_se = std::sqrt(rss / df / sxx);
    if (fit.slope_se > 0.0) {
        fit.t_stat = fit.slope / fit.slope_se;
        fit.pvalue_slope = std::min(1.0, 2.0 * student_t_sf(std::abs(fit.t_stat), df));
    } else if (fit.slope == 0.0) {
        fit.t_stat = 0.0;
        fit.pvalue_slope = 1.0;
    } else {
        fit.t_stat = std::copysign(std::numeric_limits<double>::infinity(), fit.slope);
        fit.pvalue_slope = 0.0;
    }
    return fit;
}

NormalityResult ks_normality(const VectorRef& sample) {
    const auto n = sample.size();
    if (n < 5) throw std::invalid_argument("ks_normality: need at least 5 observations");
    const double mean = sample.mean();
    const double sd = sample_sd(sample);
    if (!(sd > 0.0)) throw DataError("ks_normality: sample has zero variance");

    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const double nn = static_cast<double>(n);
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = normal_cdf((sorted[i] - mean) / sd);
        d = std::max({d, (i + 1) / nn - f, f - i / nn});
    }
    return {NormalityMethod::ks, d, kolmogorov_sf(std::sqrt(nn) * d)};
}

namespace {

// c[0] + c[1] x + ... + c[n-1] x^(n-1)
double poly(std::initializer_list<double> c, double x) {
    double r = 0.0;
    for (auto it = std::rbegin(c); it != std::rend(c); ++it) r = r * x + *it;
    return r;
}

// Royston's approximation to the Shapiro-Wilk coefficients for the upper
// half of the order statistics; a[0] multiplies x(n) - x(1).
std::vector<double> shapiro_wilk_coefficients(int n) {
    const int half = n / 2;
    if (n == 3) return {std::numbers::sqrt2 / 2.0};
    std::vector<double> m(half);
    const double an25 = n + 0.25;
    double summ2 = 0.0;
    for (int i = 0; i < half; ++i) {
        m[i] = normal_quantile((i + 1 - 0.375) / an25);
        summ2 += m[i] * m[i];
    }
    summ2 *= 2.0;
    const double ssumm2 = std::sqrt(summ2);
    const double rsn = 1.0 / std::sqrt(static_cast<double>(n));
    const double a1 = poly({0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056}, rsn) -
                      m[0] / ssumm2;

    std::vector<double> a(half);
    int first_scaled;
    double fac;
    if (n > 5) {
        first_scaled = 2;
        const double a2 = -m[1] / ssumm2 +
                          poly({0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633}, rsn);
        fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) /
                        (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
        a[1] = a2;
    } else {
        first_scaled = 1;
        fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
    }
    a[0] = a1;
    for (int i = first_scaled; i < half; ++i) a[i] = -m[i] / fac;
    return a;
}

} // namespace

NormalityResult shapiro_wilk(const VectorRef& sample) {
    const auto n = static_cast<int>(sample.size());
    if (n < 3 || n > 5000) throw std::invalid_argument("shapiro_wilk: need 3 <= n <= 5000");
    std::vector<double> x(sample.begin(), sample.end());
    std::sort(x.begin(), x.end());
    const double range = x.back() - x.front();
    if (!(range > 0.0)) throw DataError("shapiro_wilk: sample has zero variance");

    // rescaling by the range keeps the sums well conditioned
    const double mean = sample.mean();
    double ss = 0.0;
    for (double v : x) ss += ((v - mean) / range) * ((v - mean) / range);
    const auto a = shapiro_wilk_coefficients(n);
    double num = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) num += a[i] * (x[n - 1 - i] - x[i]) / range;
    const double w = std::min(1.0, num * num / ss);

    NormalityResult r{NormalityMethod::shapiro_wilk, w, 1.0};
    if (n == 3) {
        constexpr double pi6 = 6.0 / std::numbers::pi;
        constexpr double stqr = std::numbers::pi / 3.0;
        r.pvalue = std::clamp(pi6 * (std::asin(std::sqrt(w)) - stqr), 0.0, 1.0);
        return r;
    }
    double y = std::log1p(-w);
    const double nn = n;
    double mu, sigma;
    if (n <= 11) {
        const double gamma = poly({-2.273, 0.459}, nn);
        if (y >= gamma) {
            r.pvalue = 1e-99;
            return r;
        }
        y = -std::log(gamma - y);
        mu = poly({0.5440, -0.39978, 0.025054, -6.714e-4}, nn);
        sigma = std::exp(poly({1.3822, -0.77857, 0.062767, -0.0020322}, nn));
    } else {
        const double ln = std::log(nn);
        mu = poly({-1.5861, -0.31082, -0.083751, 0.0038915}, ln);
        sigma = std::exp(poly({-0.4803, -0.082676, 0.0030302}, ln));
    }
    r.pvalue = std::clamp(normal_sf((y - mu) / sigma), 0.0, 1.0);
    return r;
}

BootstrapSummary bootstrap_mean_diff(const VectorRef& a, const VectorRef& b, int replicates,
                                     std::uint64_t seed, int workers) {
    if (a.size() == 0 || b.size() == 0)
        throw std::invalid_argument("bootstrap_mean_diff: empty sample");
    if (replicates < 1) throw std::invalid_argument("bootstrap_mean_diff: replicates must be >= 1");
    workers = std::clamp(workers, 1, replicates);

    BootstrapSummary out;
    out.replicates = replicates;
    out.samples.resize(replicates);
    const auto na = static_cast<std::uint64_t>(a.size());
    const auto nb = static_cast<std::uint64_t>(b.size());

    auto run = [&](int begin, int end) {
        for (int r = begin; r < end; ++r) {
            Engine eng(derive_seed(seed, static_cast<std::uint64_t>(r)));
            double sa = 0.0;
            for (std::uint64_t i = 0; i < na; ++i) sa += a(static_cast<Eigen::Index>(uniform_index(eng, na)));
            double sb = 0.0;
            for (std::uint64_t i = 0; i < nb; ++i) sb += b(static_cast<Eigen::Index>(uniform_index(eng, nb)));
            out.samples(r) = sb / static_cast<double>(nb) - sa / static_cast<double>(na);
        }
    };

    if (workers == 1) {
        run(0, replicates);
    } else {
        std::vector<std::jthread> pool;
        const int chunk = (replicates + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const int begin = w * chunk;
            const int end = std::min(replicates, begin + chunk);
            if (begin < end) pool.emplace_back(run, begin, end);
        }
    }
    out.mean = out.samples.mean();
    out.sd = sample_sd(out.samples);
    return out;
}

} // namespace goaltime
