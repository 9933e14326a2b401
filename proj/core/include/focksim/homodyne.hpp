#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "focksim/fock_space.hpp"

namespace focksim {

// Quadrature convention: x = (a + a^dag)/sqrt(2), vacuum variance 1/2.

/// Sampler grid (shared with the default tomography binning range).
inline constexpr double kQuadMin = -6.0;
inline constexpr double kQuadMax = 6.0;
inline constexpr double kQuadStep = 0.005;

struct QuadratureSample {
    double phase = 0.0; // local-oscillator phase in [0, pi)
    double value = 0.0;
};

/// Homodyne dataset with its generating seed; serialized as delimited text,
/// one "phase,value" line per sample after a "# seed=... source=..." header.
/// Values round-trip exactly at 17 significant digits.
struct QuadratureDataset {
    std::vector<QuadratureSample> samples;
    std::uint64_t seed = 0;
    std::string source_label;

    void save(std::ostream& os) const;
    static QuadratureDataset load(std::istream& is);
};

/// Harmonic-oscillator position wavefunction <x|n>, computed with the stable
/// three-term recurrence psi_{n+1} = (sqrt(2) x psi_n - sqrt(n) psi_{n-1}) / sqrt(n+1).
double quadrature_wavefunction(int n, double x);

/// psi_0(x) .. psi_{n_max}(x) in one recurrence pass.
std::vector<double> quadrature_wavefunctions(int n_max, double x);

/// pr(x|theta) = sum_{mn} rho_mn e^{i(m-n) theta} psi_m(x) psi_n(x) on a grid;
/// requires a single-mode state of unit trace.
std::vector<double> marginal_distribution(const MixedState& rho, double phase,
                                          std::span<const double> grid);

/// Draw count_per_phase quadrature values at each phase by inverse-CDF
/// sampling on the dense grid; deterministic for a given seed.
QuadratureDataset sample_quadratures(const MixedState& rho, std::span<const double> phases,
                                     int count_per_phase, std::uint64_t seed,
                                     std::string source_label = {});

} // namespace focksim
