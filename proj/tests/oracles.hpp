#pragma once

// Independent reference computations used only by the tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

namespace goaltime::oracle {

// Exact distribution of the largest cell of Multinomial(n, probs), by
// enumerating every composition of n into probs.size() cells.
inline std::map<int, double> multinomial_max_pmf(const std::vector<double>& probs, int n) {
    std::map<int, double> pmf;
    std::vector<int> cell(probs.size(), 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
        if (i + 1 == cell.size()) {
            cell[i] = left;
            double logp = std::lgamma(n + 1.0);
            int mx = 0;
            for (std::size_t k = 0; k < cell.size(); ++k) {
                logp += cell[k] * std::log(probs[k]) - std::lgamma(cell[k] + 1.0);
                mx = std::max(mx, cell[k]);
            }
            pmf[mx] += std::exp(logp);
            return;
        }
        for (int c = 0; c <= left; ++c) {
            cell[i] = c;
            rec(i + 1, left - c);
        }
    };
    rec(0, n);
    return pmf;
}

// Weighted least-squares polynomial value at x0 via the normal equations,
// solved with Gaussian elimination; the textbook loess definition evaluated
// without any of the library's centring or QR machinery.
inline double local_poly_value(const std::vector<double>& x, const std::vector<double>& y,
                               const std::vector<double>& w, int degree, double x0) {
    const int m = degree + 1;
    std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (int r = 0; r < m; ++r) {
            for (int c = 0; c < m; ++c) a[r][c] += w[i] * std::pow(x[i], r + c);
            a[r][m] += w[i] * std::pow(x[i], r) * y[i];
        }
    }
    for (int col = 0; col < m; ++col) {
        int piv = col;
        for (int r = col + 1; r < m; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        for (int r = 0; r < m; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (int c = col; c <= m; ++c) a[r][c] -= f * a[col][c];
        }
    }
    double v = 0.0;
    for (int r = 0; r < m; ++r) v += a[r][m] / a[r][r] * std::pow(x0, r);
    return v;
}

// Brute-force loess: sort all distances, take the q-th as the radius,
// tricube-weight, fit.
inline std::vector<double> loess_bruteforce(const std::vector<double>& x, const std::vector<double>& y,
                                            double span, int degree) {
    const std::size_t n = x.size();
    const auto q = static_cast<std::size_t>(std::floor(span * n));
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> d(n);
        for (std::size_t j = 0; j < n; ++j) d[j] = std::abs(x[j] - x[i]);
        auto sorted = d;
        std::sort(sorted.begin(), sorted.end());
        const double dmax = sorted[q - 1];
        std::vector<double> w(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double u = d[j] / dmax;
            w[j] = u < 1.0 ? std::pow(1.0 - u * u * u, 3) : 0.0;
        }
        // shift x so the normal equations stay well conditioned
        std::vector<double> xs(n);
        for (std::size_t j = 0; j < n; ++j) xs[j] = x[j] - x[i];
        out[i] = local_poly_value(xs, y, w, degree, 0.0);
    }
    return out;
}

} // namespace goaltime::oracle
