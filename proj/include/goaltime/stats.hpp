#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "goaltime/special.hpp"

namespace goaltime {

using Vector = Eigen::VectorXd;
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;

struct TestConfig {
    double alpha = 0.05;

    // Throws std::invalid_argument unless 0 < alpha < 1.
    void validate() const;
};

struct ChiSqResult {
    double statistic = 0.0;
    int df = 1;
    double pvalue = 1.0;
    // Set when some expected count is below 5; the approximation is then
    // questionable but the result is still reported.
    bool low_expected = false;
    double min_expected = 0.0;
};

struct RegressionFit {
    double intercept = 0.0;
    double slope = 0.0;
    double slope_se = 0.0;
    double t_stat = 0.0;
    double pvalue_slope = 1.0; // two-sided
    double r_squared = 0.0;
    Vector residuals;
};

enum class NormalityMethod { ks, shapiro_wilk };
std::string_view to_string(NormalityMethod m);

struct NormalityResult {
    NormalityMethod method = NormalityMethod::ks;
    double statistic = 0.0;
    double pvalue = 1.0;
};

struct BootstrapSummary {
    int replicates = 0;
    double mean = 0.0;
    double sd = 0.0;
    Vector samples;
};

// Pearson chi-square goodness of fit, df = k - 1, no continuity correction.
// `observed` may hold non-integer values (block averages).
ChiSqResult chisq_gof(const VectorRef& observed, const VectorRef& probs);

// Simple linear regression of y on x with the slope t-test on n - 2 df.
RegressionFit ols_fit(const VectorRef& x, const VectorRef& y);

// One-sample Kolmogorov-Smirnov test against a normal whose mean and sd
// (n - 1 denominator) are estimated from the sample. The p-value is the
// asymptotic Kolmogorov tail, without Lilliefors correction.
NormalityResult ks_normality(const VectorRef& sample);

// Shapiro-Wilk W test, Royston's approximation (AS R94), 3 <= n <= 5000.
NormalityResult shapiro_wilk(const VectorRef& sample);

// Bootstrap of mean(b*) - mean(a*), resampling the two vectors
// independently. Replicate r draws from an engine seeded with
// derive_seed(seed, r), so the output is identical for any `workers`.
BootstrapSummary bootstrap_mean_diff(const VectorRef& a, const VectorRef& b, int replicates,
                                     std::uint64_t seed, int workers = 1);

// Sample mean and sd (n - 1 denominator; 0 for a single value).
double sample_mean(const VectorRef& v);
double sample_sd(const VectorRef& v);

} // namespace goaltime
