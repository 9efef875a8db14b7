#pragma once

#include "goaltime/stats.hpp"

namespace goaltime {

struct LoessFit {
    double span = 0.75;
    int degree = 2;
    Vector fitted;
};

// Local polynomial regression (gaussian family, no robustness iterations),
// evaluated exactly at every input x. Each point uses its floor(span * n)
// nearest neighbours with tricube weights (1 - (d / d_max)^3)^3, where
// d_max is the distance to the farthest of them.
//
// Requires x strictly increasing, degree in {1, 2}, 0 < span <= 1.
LoessFit loess_fit(const VectorRef& x, const VectorRef& y, double span = 0.75, int degree = 2);

} // namespace goaltime
