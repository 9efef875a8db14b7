#pragma once

// Distribution functions backing the hypothesis tests.

namespace goaltime {

// Regularized lower / upper incomplete gamma functions P(a, x), Q(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Regularized incomplete beta I_x(a, b).
double beta_inc(double a, double b, double x);

double normal_cdf(double z);
double normal_sf(double z);
// Inverse of normal_cdf for 0 < p < 1 (Wichura's AS 241, ~1e-16 relative).
double normal_quantile(double p);

// Upper tail of the chi-square distribution: Q(df/2, x/2). Throws
// std::invalid_argument for df == 0 or x < 0.
double chisq_sf(double x, int df);

// Upper tail P(T > t) of Student's t with df degrees of freedom.
double student_t_sf(double t, int df);

// Limiting Kolmogorov distribution: P(K > lambda) with
// K = sup|B(t)| for a Brownian bridge.
double kolmogorov_sf(double lambda);

} // namespace goaltime
