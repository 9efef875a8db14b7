#include "goaltime/smooth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/QR>

#include "goaltime/errors.hpp"

namespace goaltime {

LoessFit loess_fit(const VectorRef& x, const VectorRef& y, double span, int degree) {
    const auto n = x.size();
    if (y.size() != n) throw std::invalid_argument("loess_fit: x and y differ in length");
    if (degree != 1 && degree != 2) throw std::invalid_argument("loess_fit: degree must be 1 or 2");
    if (!(span > 0.0 && span <= 1.0)) throw std::invalid_argument("loess_fit: span must lie in (0, 1]");
    if (n < degree + 2) throw std::invalid_argument("loess_fit: too few points for the degree");
    for (Eigen::Index i = 1; i < n; ++i)
        if (!(x(i) > x(i - 1))) throw std::invalid_argument("loess_fit: x must be strictly increasing");
    const auto q = static_cast<Eigen::Index>(std::floor(span * static_cast<double>(n)));
    if (q < degree + 1) throw std::invalid_argument("loess_fit: span * n below degree + 1");

    LoessFit out{span, degree, Vector(n)};
    const int terms = degree + 1;
    std::vector<double> dist(n);
    std::vector<Eigen::Index> order(n);

    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) dist[j] = std::abs(x(j) - x(i));
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        std::nth_element(order.begin(), order.begin() + (q - 1), order.end(),
                         [&](auto a, auto b) { return dist[a] < dist[b]; });
        const double dmax = dist[order[q - 1]];
        if (!(dmax > 0.0)) throw DataError("loess_fit: zero neighbourhood radius");

        // Local design centred on x(i) and scaled by dmax; the intercept
        // is then the fitted value.
        Eigen::MatrixXd design(n, terms);
        Vector rhs(n);
        Eigen::Index used = 0;
        for (Eigen::Index j = 0; j < n; ++j) {
            const double u = dist[j] / dmax;
            if (u >= 1.0) continue;
            const double w = std::pow(1.0 - u * u * u, 3);
            const double sw = std::sqrt(w);
            const double t = (x(j) - x(i)) / dmax;
            double p = sw;
            for (int c = 0; c < terms; ++c) {
                design(used, c) = p;
                p *= t;
            }
            rhs(used) = sw * y(j);
            ++used;
        }
        if (used < terms) throw DataError("loess_fit: insufficient neighbours with positive weight");
        const auto qr = design.topRows(used).colPivHouseholderQr();
        if (qr.rank() < terms) throw DataError("loess_fit: singular local fit");
        const Vector coef = qr.solve(rhs.head(used));
        out.fitted(i) = coef(0);
    }
    return out;
}

} // namespace goaltime
