#include "focksim/fock_space.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace focksim {

namespace {

std::string occ_to_string(std::span<const int> occ) {
    std::ostringstream os;
    os << "(";
    for (size_t k = 0; k < occ.size(); ++k) os << (k ? "," : "") << occ[k];
    os << ")";
    return os.str();
}

} // namespace

// ---- ModeSet ----

ModeSet::ModeSet(int mode_count, int cutoff) : mode_count_(mode_count), cutoff_(cutoff) {
    if (mode_count < 1) throw std::invalid_argument("ModeSet: mode_count must be >= 1");
    if (cutoff < 1) throw std::invalid_argument("ModeSet: cutoff must be >= 1");
    const Eigen::Index base = cutoff + 1;
    dim_ = 1;
    for (int k = 0; k < mode_count; ++k) {
        if (dim_ > std::numeric_limits<Eigen::Index>::max() / base)
            throw std::invalid_argument("ModeSet: basis dimension overflows");
        dim_ *= base;
    }
    strides_.resize(mode_count);
    Eigen::Index s = 1;
    for (int k = mode_count - 1; k >= 0; --k) {
        strides_[k] = s;
        s *= base;
    }
}

Eigen::Index ModeSet::stride(int mode) const {
    if (mode < 0 || mode >= mode_count_) throw std::invalid_argument("ModeSet: mode index out of range");
    return strides_[static_cast<size_t>(mode)];
}

int ModeSet::occupation(Eigen::Index index, int mode) const {
    return static_cast<int>((index / stride(mode)) % (cutoff_ + 1));
}

Eigen::Index ModeSet::index_of(std::span<const int> occupations) const {
    if (static_cast<int>(occupations.size()) != mode_count_)
        throw std::invalid_argument("ModeSet: occupation tuple length does not match mode count");
    Eigen::Index idx = 0;
    for (int k = 0; k < mode_count_; ++k) {
        const int n = occupations[static_cast<size_t>(k)];
        if (n < 0) throw std::invalid_argument("ModeSet: negative occupation");
        if (n > cutoff_)
            throw CutoffError("occupation " + occ_to_string(occupations) + " exceeds cutoff " +
                              std::to_string(cutoff_));
        idx += n * strides_[static_cast<size_t>(k)];
    }
    return idx;
}

std::vector<int> ModeSet::occupations_of(Eigen::Index index) const {
    std::vector<int> occ(static_cast<size_t>(mode_count_));
    for (int k = 0; k < mode_count_; ++k) occ[static_cast<size_t>(k)] = occupation(index, k);
    return occ;
}

// ---- PureState ----

PureState::PureState(ModeSet modes, Eigen::VectorXcd amplitudes)
    : PureState(std::move(modes), std::move(amplitudes), -1.0) {
    norm_weight_ = amps_.squaredNorm();
}

PureState::PureState(ModeSet modes, Eigen::VectorXcd amplitudes, double norm_weight)
    : modes_(std::move(modes)), amps_(std::move(amplitudes)), norm_weight_(norm_weight) {
    if (amps_.size() != modes_.dim())
        throw std::invalid_argument("PureState: amplitude vector size does not match basis dimension");
    if (!amps_.allFinite()) throw std::invalid_argument("PureState: non-finite amplitude");
}

PureState PureState::zero(const ModeSet& modes) {
    return PureState(modes, Eigen::VectorXcd::Zero(modes.dim()), 0.0);
}

cplx PureState::amplitude(std::span<const int> occupations) const {
    return amps_(modes_.index_of(occupations));
}

// ---- MixedState ----

MixedState::MixedState(ModeSet modes, Eigen::MatrixXcd matrix)
    : MixedState(std::move(modes), std::move(matrix), -1.0) {
    trace_weight_ = mat_.trace().real();
}

MixedState::MixedState(ModeSet modes, Eigen::MatrixXcd matrix, double trace_weight)
    : modes_(std::move(modes)), mat_(std::move(matrix)), trace_weight_(trace_weight) {
    if (mat_.rows() != modes_.dim() || mat_.cols() != modes_.dim())
        throw std::invalid_argument("MixedState: matrix size does not match basis dimension");
    const double herm_dev = (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
    if (herm_dev > kHermitianTol)
        throw std::invalid_argument("MixedState: matrix not Hermitian (deviation " +
                                    std::to_string(herm_dev) + ")");
    mat_ = 0.5 * (mat_ + mat_.adjoint().eval());
    const double tr = mat_.trace().real();
    if (tr < -kHermitianTol || tr > 1.0 + 1e-8)
        throw std::invalid_argument("MixedState: trace " + std::to_string(tr) + " outside [0, 1]");
}

MixedState MixedState::from_pure(const PureState& psi) {
    Eigen::MatrixXcd m = psi.amplitudes() * psi.amplitudes().adjoint();
    return MixedState(psi.modes(), std::move(m), psi.norm_weight());
}

double MixedState::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mat_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

// ---- construction ----

PureState fock_state(const ModeSet& modes, std::span<const int> occupations) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(modes.dim());
    v(modes.index_of(occupations)) = 1.0;
    return PureState(modes, std::move(v), 1.0);
}

PureState fock_state(const ModeSet& modes, std::initializer_list<int> occupations) {
    return fock_state(modes, std::span<const int>(occupations.begin(), occupations.size()));
}

TruncatedPure coherent_state(const ModeSet& modes, int mode, cplx alpha) {
    const int cut = modes.cutoff();
    const double a2 = std::norm(alpha);
    if (a2 > cut / 4.0)
        throw CutoffError("coherent_state: |alpha|^2 = " + std::to_string(a2) +
                          " exceeds cutoff/4 = " + std::to_string(cut / 4.0));
    // amplitudes e^{-|a|^2/2} a^n / sqrt(n!) on the chosen mode, vacuum elsewhere
    std::vector<cplx> coef(static_cast<size_t>(cut) + 1);
    coef[0] = std::exp(-0.5 * a2);
    for (int n = 1; n <= cut; ++n)
        coef[static_cast<size_t>(n)] = coef[static_cast<size_t>(n - 1)] * alpha / std::sqrt(double(n));
    double kept = 0.0;
    for (const cplx& c : coef) kept += std::norm(c);
    const double leakage = std::max(0.0, 1.0 - kept);

    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(modes.dim());
    const Eigen::Index s = modes.stride(mode);
    const double renorm = 1.0 / std::sqrt(kept);
    for (int n = 0; n <= cut; ++n) v(n * s) = coef[static_cast<size_t>(n)] * renorm;
    return {PureState(modes, std::move(v), 1.0), leakage};
}

// ---- ladder operators ----

PureState apply_annihilation(const PureState& psi, int mode) {
    const ModeSet& ms = psi.modes();
    const Eigen::Index s = ms.stride(mode);
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(ms.dim());
    for (Eigen::Index i = 0; i < ms.dim(); ++i) {
        const int n = ms.occupation(i, mode);
        if (n == 0) continue;
        out(i - s) += std::sqrt(double(n)) * psi.amplitudes()(i);
    }
    return PureState(ms, std::move(out));
}

TruncatedPure apply_creation(const PureState& psi, int mode) {
    const ModeSet& ms = psi.modes();
    const Eigen::Index s = ms.stride(mode);
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(ms.dim());
    double leakage = 0.0;
    for (Eigen::Index i = 0; i < ms.dim(); ++i) {
        const cplx a = psi.amplitudes()(i);
        if (a == cplx(0.0)) continue;
        const int n = ms.occupation(i, mode);
        if (n == ms.cutoff()) {
            leakage += double(n + 1) * std::norm(a);
            continue;
        }
        out(i + s) += std::sqrt(double(n + 1)) * a;
    }
    return {PureState(ms, std::move(out)), leakage};
}

// ---- expectations ----

double mean_photon_number(const PureState& psi, int mode) {
    const double n2 = psi.squared_norm();
    if (n2 <= 0.0) throw NormError("mean_photon_number: zero-norm state");
    const ModeSet& ms = psi.modes();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < ms.dim(); ++i) {
        const double w = std::norm(psi.amplitudes()(i));
        if (w != 0.0) acc += w * ms.occupation(i, mode);
    }
    return acc / n2;
}

double mean_photon_number(const MixedState& rho, int mode) {
    const double tr = rho.trace();
    if (tr <= 0.0) throw NormError("mean_photon_number: zero-trace state");
    const ModeSet& ms = rho.modes();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < ms.dim(); ++i)
        acc += rho.matrix()(i, i).real() * ms.occupation(i, mode);
    return acc / tr;
}

double total_photon_number(const PureState& psi) {
    double acc = 0.0;
    for (int m = 0; m < psi.modes().mode_count(); ++m) acc += mean_photon_number(psi, m);
    return acc;
}

double total_photon_number(const MixedState& rho) {
    double acc = 0.0;
    for (int m = 0; m < rho.modes().mode_count(); ++m) acc += mean_photon_number(rho, m);
    return acc;
}

// ---- normalization ----

std::pair<PureState, double> normalize(const PureState& psi) {
    const double n = psi.norm();
    if (n <= 0.0) throw NormError("normalize: zero-norm state");
    return {PureState(psi.modes(), psi.amplitudes() / n, n * n), n};
}

std::pair<MixedState, double> normalize(const MixedState& rho) {
    const double tr = rho.trace();
    if (tr <= 0.0) throw NormError("normalize: zero-trace state");
    return {MixedState(rho.modes(), rho.matrix() / tr, tr), tr};
}

// ---- partial trace ----

MixedState partial_trace(const MixedState& rho, std::span<const int> keep) {
    const ModeSet& ms = rho.modes();
    if (keep.empty()) throw std::invalid_argument("partial_trace: keep set must be nonempty");
    std::vector<bool> kept(static_cast<size_t>(ms.mode_count()), false);
    for (int m : keep) {
        if (m < 0 || m >= ms.mode_count()) throw std::invalid_argument("partial_trace: mode index out of range");
        if (kept[static_cast<size_t>(m)]) throw std::invalid_argument("partial_trace: duplicate mode in keep set");
        kept[static_cast<size_t>(m)] = true;
    }
    std::vector<int> traced;
    for (int m = 0; m < ms.mode_count(); ++m)
        if (!kept[static_cast<size_t>(m)]) traced.push_back(m);

    if (traced.empty()) {
        bool identity_order = true;
        for (size_t k = 0; k < keep.size(); ++k) identity_order &= keep[k] == int(k);
        if (identity_order) return rho;
    }

    const int base = ms.cutoff() + 1;
    ModeSet out_ms(static_cast<int>(keep.size()), ms.cutoff());

    // Flat-index offsets of every kept (resp. traced) sub-configuration.
    auto offsets = [&](std::span<const int> modes_sub) {
        Eigen::Index count = 1;
        for (size_t k = 0; k < modes_sub.size(); ++k) count *= base;
        std::vector<Eigen::Index> off(static_cast<size_t>(count), 0);
        for (Eigen::Index i = 0; i < count; ++i) {
            Eigen::Index rem = i;
            for (size_t k = modes_sub.size(); k-- > 0;) {
                const int n = static_cast<int>(rem % base);
                rem /= base;
                off[static_cast<size_t>(i)] += n * ms.stride(modes_sub[k]);
            }
        }
        return off;
    };
    const std::vector<Eigen::Index> keep_off = offsets(keep);
    const std::vector<Eigen::Index> tr_off = offsets(traced);

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(out_ms.dim(), out_ms.dim());
    for (Eigen::Index r = 0; r < out_ms.dim(); ++r)
        for (Eigen::Index c = 0; c < out_ms.dim(); ++c) {
            cplx acc = 0.0;
            for (const Eigen::Index t : tr_off)
                acc += rho.matrix()(keep_off[static_cast<size_t>(r)] + t,
                                    keep_off[static_cast<size_t>(c)] + t);
            out(r, c) = acc;
        }
    return MixedState(out_ms, std::move(out), rho.trace_weight());
}

MixedState partial_trace(const MixedState& rho, std::initializer_list<int> keep) {
    return partial_trace(rho, std::span<const int>(keep.begin(), keep.size()));
}

// ---- fidelity / distance ----

double fidelity(const MixedState& a, const MixedState& b) {
    if (!(a.modes() == b.modes())) throw std::invalid_argument("fidelity: mode sets differ");
    if (std::abs(a.trace() - 1.0) > 1e-8 || std::abs(b.trace() - 1.0) > 1e-8)
        throw std::invalid_argument("fidelity: states must have unit trace");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.matrix());
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    Eigen::MatrixXcd sqrt_a =
        es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
    Eigen::MatrixXcd m = sqrt_a * b.matrix() * sqrt_a;
    m = 0.5 * (m + m.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es2(m, Eigen::EigenvaluesOnly);
    const double root_sum = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return std::min(1.0, root_sum * root_sum);
}

double trace_distance(const MixedState& a, const MixedState& b) {
    if (!(a.modes() == b.modes())) throw std::invalid_argument("trace_distance: mode sets differ");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.matrix() - b.matrix(), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

// ---- embedding ----

PureState embed(const PureState& psi, int extra_modes) {
    if (extra_modes < 0) throw std::invalid_argument("embed: extra_modes must be >= 0");
    if (extra_modes == 0) return psi;
    const ModeSet& ms = psi.modes();
    ModeSet out_ms(ms.mode_count() + extra_modes, ms.cutoff());
    Eigen::Index stretch = 1;
    for (int k = 0; k < extra_modes; ++k) stretch *= ms.cutoff() + 1;
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(out_ms.dim());
    for (Eigen::Index i = 0; i < ms.dim(); ++i) out(i * stretch) = psi.amplitudes()(i);
    return PureState(out_ms, std::move(out), psi.norm_weight());
}

MixedState embed(const MixedState& rho, int extra_modes) {
    if (extra_modes < 0) throw std::invalid_argument("embed: extra_modes must be >= 0");
    if (extra_modes == 0) return rho;
    const ModeSet& ms = rho.modes();
    ModeSet out_ms(ms.mode_count() + extra_modes, ms.cutoff());
    Eigen::Index stretch = 1;
    for (int k = 0; k < extra_modes; ++k) stretch *= ms.cutoff() + 1;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(out_ms.dim(), out_ms.dim());
    for (Eigen::Index r = 0; r < ms.dim(); ++r)
        for (Eigen::Index c = 0; c < ms.dim(); ++c)
            out(r * stretch, c * stretch) = rho.matrix()(r, c);
    return MixedState(out_ms, std::move(out), rho.trace_weight());
}

cplx inner_product(const PureState& a, const PureState& b) {
    if (!(a.modes() == b.modes())) throw std::invalid_argument("inner_product: mode sets differ");
    return a.amplitudes().dot(b.amplitudes());
}

} // namespace focksim
