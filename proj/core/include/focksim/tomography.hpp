#pragma once

#include <string>

#include "focksim/homodyne.hpp"

namespace focksim {

struct TomographySettings {
    int cutoff = 5;
    /// Detection efficiency folded into the POVM so the reconstruction
    /// estimates the state before the detection loss.
    double efficiency_compensation = 1.0;
    int max_iterations = 2000;
    double loglik_tolerance = 1e-9;
    double bin_width = 0.1;
};

/// Quadrature histogram: weights(p, b) samples of phase p in bin
/// [edges[b], edges[b+1]). Weights may be non-integer (e.g. exact
/// probabilities in fixed-point checks); edges may be infinite.
struct BinnedQuadratures {
    std::vector<double> phases;
    std::vector<double> edges;
    Eigen::MatrixXd weights;
};

/// Histogram a dataset on [lo, hi] with the given bin width; phases keep their
/// order of first appearance. Values outside the range are rejected.
BinnedQuadratures bin_dataset(const QuadratureDataset& data, double bin_width,
                              double lo = kQuadMin, double hi = kQuadMax);

/// Binned quadrature projector at one phase, pre-composed with the adjoint of
/// the efficiency-eta loss channel: traces against the true state reproduce
/// click statistics of the detected state. PSD; the full-line bin at eta = 1
/// is the identity.
Eigen::MatrixXcd povm_element(double phase, double bin_lo, double bin_hi,
                              const TomographySettings& settings);

struct TomographyResult {
    MixedState rho;
    std::vector<double> loglik_trace; // log-likelihood after each iteration
    int iterations_used = 0;
    bool converged = false;
};

/// Iterative maximum-likelihood reconstruction: rho <- N[R rho R] with
/// R = sum_j (f_j / p_j) Pi_j, starting from the maximally mixed state, until
/// the log-likelihood gain drops below the tolerance or the iteration budget
/// runs out.
TomographyResult maxlik_reconstruct(const BinnedQuadratures& data, const TomographySettings& settings);
TomographyResult maxlik_reconstruct(const QuadratureDataset& data, const TomographySettings& settings);

/// Diagonal of the reconstructed state, clipped at -1e-10 and renormalized.
std::vector<double> photon_number_distribution(const TomographyResult& result);

/// JSON text with the settings echo, convergence data and the density matrix
/// as [re, im] pairs.
std::string serialize_result(const TomographyResult& result, const TomographySettings& settings);

} // namespace focksim
