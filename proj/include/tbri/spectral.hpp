#pragma once

#include <vector>

#include "tbri/tbri_model.hpp"
#include "tbri/types.hpp"

namespace tbri {

// Full eigensystem of a dense symmetric Hamiltonian. Column k of
// `components` holds the eigenvector C_f^(k) in the determinant basis,
// with energies ascending and each column's largest-|.| entry positive.
struct EigenDecomposition {
    Vector energies;
    Matrix components;

    Index size() const { return energies.size(); }
};

EigenDecomposition diagonalize(MatrixRef h);
EigenDecomposition diagonalize(const HamiltonianMatrix& h);

struct StrengthFunctionEstimate {
    std::vector<double> energy;   // bin centers
    std::vector<double> density;  // binned P_i(E); sums to 1 * (1/bin width)
    double bin_width = 0.0;
    double centroid = 0.0;        // exact first moment (= H_ii identically)
    double variance = 0.0;        // exact second central moment
    double shift = 0.0;           // centroid - H_ii
};

// Binned strength function of basis state i with exact (unbinned) moments.
// `bandwidth` is the bin width used for the shape samples only.
StrengthFunctionEstimate strength_function(const EigenDecomposition& d, Index i,
                                           double bandwidth, double h_ii);

struct SpectralSummary {
    std::vector<double> energy;   // bin centers
    std::vector<double> rho;      // binned density of states, integrates to N
    double sigma = 0.0;           // Gaussian fit width
    double e_center = 0.0;        // Gaussian fit center
    double rho_at_center = 0.0;   // fitted density at e_center
    double mean_spacing = 0.0;    // D = 1 / rho(e_center)
    Index n = 0;
};

// Histogram + Gaussian fit of the total density of states. The fit is
// restricted to the central 80% of the spectrum (10%..90% quantiles) to
// stay clear of edge distortion.
SpectralSummary density_of_states(const EigenDecomposition& d, int bins);

// (sum_k |C_i^(k)|^4)^-1, in [1, N].
double participation_number(const EigenDecomposition& d, Index i);

} // namespace tbri
