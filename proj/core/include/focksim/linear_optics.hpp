#pragma once

#include <vector>

#include "focksim/fock_space.hpp"

namespace focksim {

/// Passive two-mode transformation with coefficients (mu, lambda),
/// |mu|^2 + |lambda|^2 = 1. Applied to modes (i, j) it realizes, in the
/// Heisenberg picture,
///     a_in,i = mu * a_i + lambda * a_j,
///     a_in,j = conj(lambda) * a_i - conj(mu) * a_j,
/// i.e. an input photon in mode i is found in mode j with probability
/// |lambda|^2. Equivalently, output-mode operators pull back as
///     U^dag a_i U = conj(mu) a_i + lambda a_j.
class BeamSplitter {
public:
    BeamSplitter(cplx mu, cplx lambda);

    cplx mu() const { return mu_; }
    cplx lambda() const { return lambda_; }

    /// The unique beamsplitter undoing this one: (mu, lambda) -> (conj(mu), lambda).
    BeamSplitter inverse() const { return BeamSplitter(std::conj(mu_), lambda_); }

    static BeamSplitter balanced();
    /// Splitter that sends the fraction `reflectivity` of the energy of mode i
    /// into mode j (the tap port).
    static BeamSplitter tap(double reflectivity);

private:
    cplx mu_;
    cplx lambda_;
};

/// Ordered beamsplitter applications; steps are applied front to back.
struct PlanStep {
    int mode_a;
    int mode_b;
    BeamSplitter bs;
};

struct InterferometerPlan {
    std::vector<PlanStep> steps;
    /// Plan undoing this one: reversed order, each splitter inverted.
    InterferometerPlan inverted() const;
};

/// Apply a beamsplitter to modes (i, j) of a pure state. Exact whenever the
/// total photon number in the two modes stays below the cutoff; otherwise the
/// overflowing amplitude is dropped and reported as leakage.
TruncatedPure apply_beamsplitter(const PureState& psi, int i, int j, const BeamSplitter& bs);

/// Density-operator version (U rho U^dag); lost trace is written to *leakage
/// when given.
MixedState apply_beamsplitter(const MixedState& rho, int i, int j, const BeamSplitter& bs,
                              double* leakage = nullptr);

TruncatedPure apply_plan(const PureState& psi, const InterferometerPlan& plan);
MixedState apply_plan(const MixedState& rho, const InterferometerPlan& plan, double* leakage = nullptr);

/// Distribute a single-mode state over `coefficients.size()` pixel modes with
/// a chain of beamsplitters so that a_in = sum_k c_k a_k; the mean photon
/// number of pixel k becomes <n> |c_k|^2. Coefficients must be normalized to
/// 1e-10.
TruncatedPure split_mode(const PureState& single_mode, std::span<const cplx> coefficients);

/// Rotation plan concentrating the cloud mode sum_{k in S} c_k a_k
/// (normalized) onto the lowest-index mode of `subset`, touching only modes in
/// `subset`; apply the plan, act on that mode, then apply plan.inverted().
/// `subset` must be a nonempty strict subset of the pixels and the restriction
/// of `coefficients` to it must not vanish.
InterferometerPlan cloud_mode_rotation(int pixel_count, std::span<const cplx> coefficients,
                                       std::span<const int> subset);

/// Designated computational mode of a cloud rotation: the lowest pixel index
/// in the subset.
int cloud_target_mode(std::span<const int> subset);

} // namespace focksim
