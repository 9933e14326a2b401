#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "focksim/errors.hpp"

namespace focksim {

using cplx = std::complex<double>;

// Module-wide numerical tolerances (double precision on small bases).
inline constexpr double kNormTol = 1e-12;
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kPsdTol = -1e-10;
inline constexpr double kLeakageWarn = 1e-6;
inline constexpr double kEventFloor = 1e-15;

/// Truncated multimode Fock basis: `mode_count` modes, each holding at most
/// `cutoff` photons. Flat indices run with the last mode fastest, so appending
/// vacuum modes multiplies existing indices by a stride.
class ModeSet {
public:
    ModeSet(int mode_count, int cutoff);

    int mode_count() const { return mode_count_; }
    int cutoff() const { return cutoff_; }
    Eigen::Index dim() const { return dim_; }
    Eigen::Index stride(int mode) const;

    int occupation(Eigen::Index index, int mode) const;
    Eigen::Index index_of(std::span<const int> occupations) const;
    std::vector<int> occupations_of(Eigen::Index index) const;

    bool operator==(const ModeSet& other) const {
        return mode_count_ == other.mode_count_ && cutoff_ == other.cutoff_;
    }

private:
    int mode_count_;
    int cutoff_;
    Eigen::Index dim_;
    std::vector<Eigen::Index> strides_;
};

/// Pure state as a dense complex amplitude tensor over occupation tuples.
/// `norm_weight` carries the squared norm the state represents: raw outputs of
/// non-unitary operations keep norm_weight == squared_norm(); normalize()
/// rescales the amplitudes to unit norm while norm_weight keeps recording the
/// pre-normalization weight (the conditioning probability).
class PureState {
public:
    /// Zero vector on a minimal one-mode space; placeholder for containers.
    PureState() : PureState(ModeSet(1, 1), Eigen::VectorXcd::Zero(2), 0.0) {}
    PureState(ModeSet modes, Eigen::VectorXcd amplitudes);
    PureState(ModeSet modes, Eigen::VectorXcd amplitudes, double norm_weight);

    static PureState zero(const ModeSet& modes);

    const ModeSet& modes() const { return modes_; }
    const Eigen::VectorXcd& amplitudes() const { return amps_; }
    double norm_weight() const { return norm_weight_; }

    double squared_norm() const { return amps_.squaredNorm(); }
    double norm() const { return amps_.norm(); }
    cplx amplitude(std::span<const int> occupations) const;

private:
    ModeSet modes_;
    Eigen::VectorXcd amps_;
    double norm_weight_;
};

/// Density operator on the truncated basis. Hermitian within 1e-10 (the stored
/// matrix is symmetrized on construction), PSD within -1e-10, trace <= 1+1e-10.
class MixedState {
public:
    /// Zero operator on a minimal one-mode space; placeholder for containers.
    MixedState() : MixedState(ModeSet(1, 1), Eigen::MatrixXcd::Zero(2, 2), 0.0) {}
    MixedState(ModeSet modes, Eigen::MatrixXcd matrix);
    MixedState(ModeSet modes, Eigen::MatrixXcd matrix, double trace_weight);

    static MixedState from_pure(const PureState& psi);

    const ModeSet& modes() const { return modes_; }
    const Eigen::MatrixXcd& matrix() const { return mat_; }
    double trace_weight() const { return trace_weight_; }

    double trace() const { return mat_.trace().real(); }
    /// Smallest eigenvalue; used by tests and selftest to confirm positivity.
    double min_eigenvalue() const;

private:
    ModeSet modes_;
    Eigen::MatrixXcd mat_;
    double trace_weight_;
};

/// State produced by an operation that can push amplitude past the cutoff;
/// `leakage` is the squared-norm (or trace) weight dropped there.
struct TruncatedPure {
    PureState state;
    double leakage = 0.0;
    bool truncation_warning() const { return leakage > kLeakageWarn; }
};

// ---- construction ----

/// Unit basis vector |n1,...,nM>.
PureState fock_state(const ModeSet& modes, std::span<const int> occupations);
PureState fock_state(const ModeSet& modes, std::initializer_list<int> occupations);

/// Coherent state of amplitude alpha in one mode, vacuum elsewhere, truncated
/// and renormalized. Requires |alpha|^2 <= cutoff/4 so the dropped Poisson tail
/// stays harmless; the tail weight is reported as leakage.
TruncatedPure coherent_state(const ModeSet& modes, int mode, cplx alpha);

// ---- ladder operators ----

/// Photon annihilation on one mode; exact under truncation, unnormalized
/// result (vacuum input yields the zero vector).
PureState apply_annihilation(const PureState& psi, int mode);

/// Photon creation on one mode; amplitude raised past the cutoff is dropped
/// and reported as leakage.
TruncatedPure apply_creation(const PureState& psi, int mode);

// ---- expectations, normalization, reshaping ----

double mean_photon_number(const PureState& psi, int mode);
double mean_photon_number(const MixedState& rho, int mode);

/// Total photons summed over all modes.
double total_photon_number(const PureState& psi);
double total_photon_number(const MixedState& rho);

/// Returns (unit-norm state, pre-normalization norm). The unit state's
/// norm_weight keeps the squared pre-normalization norm.
std::pair<PureState, double> normalize(const PureState& psi);
/// Returns (trace-one state, pre-normalization trace).
std::pair<MixedState, double> normalize(const MixedState& rho);

/// Trace out every mode not listed in `keep`; modes are renumbered in the
/// order given. Preserves trace and positivity.
MixedState partial_trace(const MixedState& rho, std::span<const int> keep);
MixedState partial_trace(const MixedState& rho, std::initializer_list<int> keep);

/// Uhlmann fidelity F = (Tr sqrt(sqrt(a) b sqrt(a)))^2 of two trace-one states;
/// equals <b|a|b> when b is pure.
double fidelity(const MixedState& a, const MixedState& b);

/// Half the trace norm of a - b.
double trace_distance(const MixedState& a, const MixedState& b);

/// Append vacuum modes after the existing ones; norm unchanged.
PureState embed(const PureState& psi, int extra_modes);
MixedState embed(const MixedState& rho, int extra_modes);

cplx inner_product(const PureState& a, const PureState& b);

} // namespace focksim
