#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tbri {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double rms_residual = 0.0;
    std::size_t n = 0;
};

// Ordinary least squares y = intercept + slope * x.
LinearFit fit_linear(std::span<const double> x, std::span<const double> y);

struct GaussianFit {
    double amplitude = 0.0;
    double center = 0.0;
    double sigma = 0.0;
    double r2 = 0.0;
    bool converged = false;
};

// Levenberg-damped Gauss-Newton fit of a*exp(-(x-c)^2 / 2 s^2), seeded from
// the sample moments of the (x, y) histogram. Deterministic.
GaussianFit fit_gaussian(std::span<const double> x, std::span<const double> y, int max_iter = 100);

// Two-parameter fit of the normalized form total/sqrt(2 pi s^2) *
// exp(-(x-c)^2/2s^2): the amplitude is slaved to the width.
GaussianFit fit_gaussian_normalized(std::span<const double> x, std::span<const double> y,
                                    double total, int max_iter = 100);

// Centered moving average with window 2*half+1, shrinking at the edges.
std::vector<double> moving_average(std::span<const double> v, int half);

// Indices of strict local maxima (greater than both neighbours).
std::vector<std::size_t> local_maxima(std::span<const double> v);

} // namespace tbri
