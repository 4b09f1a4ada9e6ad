#include "tbri/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "tbri/errors.hpp"
#include "tbri/fitting.hpp"

namespace tbri {

EigenDecomposition diagonalize(MatrixRef h) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceFailure("diagonalize: symmetric eigensolver did not converge");
    }
    EigenDecomposition d;
    d.energies = solver.eigenvalues();
    d.components = solver.eigenvectors();
    // sign convention: largest-magnitude component of each eigenvector positive
    for (Index k = 0; k < d.components.cols(); ++k) {
        Index imax = 0;
        d.components.col(k).cwiseAbs().maxCoeff(&imax);
        if (d.components(imax, k) < 0) d.components.col(k) = -d.components.col(k);
    }
    return d;
}

EigenDecomposition diagonalize(const HamiltonianMatrix& h) {
    return diagonalize(MatrixRef(h.mat));
}

StrengthFunctionEstimate strength_function(const EigenDecomposition& d, Index i,
                                           double bandwidth, double h_ii) {
    const Index n = d.size();
    if (i < 0 || i >= n) throw IndexOutOfRange("strength_function: bad state index");
    if (!(bandwidth > 0)) throw InvalidDimensions("strength_function: bandwidth must be > 0");

    StrengthFunctionEstimate est;
    const Vector w = d.components.row(i).array().square();
    est.centroid = (w.array() * d.energies.array()).sum();
    est.variance = (w.array() * (d.energies.array() - est.centroid).square()).sum();
    est.shift = est.centroid - h_ii;

    const double e_lo = d.energies(0);
    const double e_hi = d.energies(n - 1);
    const int bins = std::max(1, static_cast<int>(std::ceil((e_hi - e_lo) / bandwidth)));
    est.bin_width = bandwidth;
    est.energy.resize(static_cast<std::size_t>(bins));
    est.density.assign(static_cast<std::size_t>(bins), 0.0);
    for (int b = 0; b < bins; ++b) {
        est.energy[static_cast<std::size_t>(b)] = e_lo + (b + 0.5) * bandwidth;
    }
    for (Index k = 0; k < n; ++k) {
        int b = static_cast<int>((d.energies(k) - e_lo) / bandwidth);
        b = std::clamp(b, 0, bins - 1);
        est.density[static_cast<std::size_t>(b)] += w(k) / bandwidth;
    }
    return est;
}

SpectralSummary density_of_states(const EigenDecomposition& d, int bins) {
    const Index n = d.size();
    if (n < 10) throw InvalidDimensions("density_of_states: need N >= 10");
    if (bins < 4) throw InvalidDimensions("density_of_states: need bins >= 4");

    SpectralSummary s;
    s.n = n;
    const double e_lo = d.energies(0);
    const double e_hi = d.energies(n - 1);
    const double span = std::max(e_hi - e_lo, 1e-12);
    const double width = span / bins * (1.0 + 1e-12);

    s.energy.resize(static_cast<std::size_t>(bins));
    s.rho.assign(static_cast<std::size_t>(bins), 0.0);
    for (int b = 0; b < bins; ++b) s.energy[static_cast<std::size_t>(b)] = e_lo + (b + 0.5) * width;
    for (Index k = 0; k < n; ++k) {
        int b = static_cast<int>((d.energies(k) - e_lo) / width);
        b = std::clamp(b, 0, bins - 1);
        s.rho[static_cast<std::size_t>(b)] += 1.0 / width;
    }

    // fit only the central 80% of levels
    const double q10 = d.energies(static_cast<Index>(0.10 * static_cast<double>(n - 1)));
    const double q90 = d.energies(static_cast<Index>(0.90 * static_cast<double>(n - 1)));
    std::vector<double> fx, fy;
    for (int b = 0; b < bins; ++b) {
        const auto ub = static_cast<std::size_t>(b);
        if (s.energy[ub] >= q10 && s.energy[ub] <= q90) {
            fx.push_back(s.energy[ub]);
            fy.push_back(s.rho[ub]);
        }
    }
    // Gaussian constrained to integrate to N: only (sigma, center) float
    const GaussianFit fit = fit_gaussian_normalized(fx, fy, static_cast<double>(n));
    s.sigma = fit.sigma;
    s.e_center = fit.center;
    s.rho_at_center = fit.amplitude;
    s.mean_spacing = 1.0 / fit.amplitude;
    return s;
}

double participation_number(const EigenDecomposition& d, Index i) {
    if (i < 0 || i >= d.size()) throw IndexOutOfRange("participation_number: bad state index");
    const double ipr = d.components.row(i).array().square().square().sum();
    return 1.0 / ipr;
}

} // namespace tbri
