#include "focksim/linear_optics.hpp"

#include <algorithm>
#include <cmath>

namespace focksim {

namespace {

cplx ipow(cplx base, int n) {
    cplx r = 1.0;
    for (int k = 0; k < n; ++k) r *= base;
    return r;
}

// Fock-basis kernel of a beamsplitter on the two-mode sector with `total`
// photons: K(a, m) = <a, total-a| U |m, total-m>, from the binomial expansion
// of (conj(mu) ad_i + conj(lambda) ad_j)^m (lambda ad_i - mu ad_j)^{total-m}.
Eigen::MatrixXcd sector_kernel(const BeamSplitter& bs, int total) {
    std::vector<double> fact(static_cast<size_t>(total) + 1, 1.0);
    for (int k = 1; k <= total; ++k) fact[static_cast<size_t>(k)] = fact[static_cast<size_t>(k - 1)] * k;
    auto choose = [&](int n, int k) { return fact[size_t(n)] / (fact[size_t(k)] * fact[size_t(n - k)]); };

    const cplx muc = std::conj(bs.mu());
    const cplx lac = std::conj(bs.lambda());
    Eigen::MatrixXcd kern(total + 1, total + 1);
    for (int m = 0; m <= total; ++m) {
        const int n = total - m;
        for (int a = 0; a <= total; ++a) {
            const int b = total - a;
            cplx acc = 0.0;
            const int p_lo = std::max(0, a - n);
            const int p_hi = std::min(m, a);
            for (int p = p_lo; p <= p_hi; ++p) {
                const int q = a - p;
                acc += choose(m, p) * choose(n, q) * ipow(muc, p) * ipow(lac, m - p) *
                       ipow(bs.lambda(), q) * ipow(-bs.mu(), n - q);
            }
            kern(a, m) = acc * std::sqrt(fact[size_t(a)] * fact[size_t(b)] /
                                         (fact[size_t(m)] * fact[size_t(n)]));
        }
    }
    return kern;
}

// Apply the beamsplitter kernel to a dense amplitude vector in place of psi.
Eigen::VectorXcd apply_kernel(const ModeSet& ms, const Eigen::VectorXcd& in, int i, int j,
                              const std::vector<Eigen::MatrixXcd>& kernels) {
    const int cut = ms.cutoff();
    const Eigen::Index si = ms.stride(i);
    const Eigen::Index sj = ms.stride(j);
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(ms.dim());
    for (Eigen::Index idx = 0; idx < ms.dim(); ++idx) {
        const cplx amp = in(idx);
        if (amp == cplx(0.0)) continue;
        const int m = ms.occupation(idx, i);
        const int n = ms.occupation(idx, j);
        const int total = m + n;
        const Eigen::Index rest = idx - m * si - n * sj;
        const Eigen::MatrixXcd& kern = kernels[static_cast<size_t>(total)];
        const int a_lo = std::max(0, total - cut);
        const int a_hi = std::min(total, cut);
        for (int a = a_lo; a <= a_hi; ++a)
            out(rest + a * si + (total - a) * sj) += kern(a, m) * amp;
    }
    return out;
}

std::vector<Eigen::MatrixXcd> all_kernels(const BeamSplitter& bs, int cutoff) {
    std::vector<Eigen::MatrixXcd> kernels;
    kernels.reserve(static_cast<size_t>(2 * cutoff) + 1);
    for (int total = 0; total <= 2 * cutoff; ++total) kernels.push_back(sector_kernel(bs, total));
    return kernels;
}

void check_pair(const ModeSet& ms, int i, int j) {
    if (i == j) throw std::invalid_argument("apply_beamsplitter: modes must differ");
    if (i < 0 || i >= ms.mode_count() || j < 0 || j >= ms.mode_count())
        throw std::invalid_argument("apply_beamsplitter: mode index out of range");
}

} // namespace

BeamSplitter::BeamSplitter(cplx mu, cplx lambda) : mu_(mu), lambda_(lambda) {
    const double s = std::norm(mu) + std::norm(lambda);
    if (std::abs(s - 1.0) > kNormTol)
        throw std::invalid_argument("BeamSplitter: |mu|^2 + |lambda|^2 = " + std::to_string(s) +
                                    " != 1");
}

BeamSplitter BeamSplitter::balanced() {
    const double r = 1.0 / std::sqrt(2.0);
    return BeamSplitter(r, r);
}

BeamSplitter BeamSplitter::tap(double reflectivity) {
    if (reflectivity < 0.0 || reflectivity > 1.0)
        throw std::invalid_argument("BeamSplitter::tap: reflectivity outside [0, 1]");
    return BeamSplitter(std::sqrt(1.0 - reflectivity), std::sqrt(reflectivity));
}

InterferometerPlan InterferometerPlan::inverted() const {
    InterferometerPlan inv;
    inv.steps.reserve(steps.size());
    for (auto it = steps.rbegin(); it != steps.rend(); ++it)
        inv.steps.push_back({it->mode_a, it->mode_b, it->bs.inverse()});
    return inv;
}

TruncatedPure apply_beamsplitter(const PureState& psi, int i, int j, const BeamSplitter& bs) {
    const ModeSet& ms = psi.modes();
    check_pair(ms, i, j);
    Eigen::VectorXcd out = apply_kernel(ms, psi.amplitudes(), i, j, all_kernels(bs, ms.cutoff()));
    const double leakage = std::max(0.0, psi.squared_norm() - out.squaredNorm());
    return {PureState(ms, std::move(out)), leakage};
}

MixedState apply_beamsplitter(const MixedState& rho, int i, int j, const BeamSplitter& bs,
                              double* leakage) {
    const ModeSet& ms = rho.modes();
    check_pair(ms, i, j);
    const auto kernels = all_kernels(bs, ms.cutoff());
    // U rho U^dag as two column passes: B = U rho, out = (U B^dag)^dag.
    Eigen::MatrixXcd tmp(ms.dim(), ms.dim());
    for (Eigen::Index c = 0; c < ms.dim(); ++c)
        tmp.col(c) = apply_kernel(ms, rho.matrix().col(c), i, j, kernels);
    Eigen::MatrixXcd tmp2 = tmp.adjoint();
    for (Eigen::Index c = 0; c < ms.dim(); ++c)
        tmp.col(c) = apply_kernel(ms, tmp2.col(c), i, j, kernels);
    Eigen::MatrixXcd out = tmp.adjoint();
    if (leakage) *leakage = std::max(0.0, rho.trace() - out.trace().real());
    return MixedState(ms, std::move(out), rho.trace_weight());
}

TruncatedPure apply_plan(const PureState& psi, const InterferometerPlan& plan) {
    TruncatedPure cur{psi, 0.0};
    for (const PlanStep& st : plan.steps) {
        TruncatedPure next = apply_beamsplitter(cur.state, st.mode_a, st.mode_b, st.bs);
        cur.state = std::move(next.state);
        cur.leakage += next.leakage;
    }
    return cur;
}

MixedState apply_plan(const MixedState& rho, const InterferometerPlan& plan, double* leakage) {
    MixedState cur = rho;
    double acc = 0.0;
    for (const PlanStep& st : plan.steps) {
        double step_leak = 0.0;
        cur = apply_beamsplitter(cur, st.mode_a, st.mode_b, st.bs, &step_leak);
        acc += step_leak;
    }
    if (leakage) *leakage = acc;
    return cur;
}

TruncatedPure split_mode(const PureState& single_mode, std::span<const cplx> coefficients) {
    if (single_mode.modes().mode_count() != 1)
        throw std::invalid_argument("split_mode: input must be a single-mode state");
    const int pixels = static_cast<int>(coefficients.size());
    if (pixels < 1) throw std::invalid_argument("split_mode: need at least one coefficient");
    double sum = 0.0;
    for (const cplx& c : coefficients) sum += std::norm(c);
    if (std::abs(sum - 1.0) > 1e-10)
        throw std::invalid_argument("split_mode: coefficients not normalized (sum " +
                                    std::to_string(sum) + ")");
    TruncatedPure cur{embed(single_mode, pixels - 1), 0.0};
    // Peel coefficient c_k into pixel k; the remainder flows to pixel k+1.
    // rem[k] is the energy fraction still undistributed before step k.
    std::vector<double> rem(static_cast<size_t>(pixels) + 1, 0.0);
    for (int k = pixels - 1; k >= 0; --k)
        rem[size_t(k)] = rem[size_t(k) + 1] + std::norm(coefficients[size_t(k)]);
    for (int k = 0; k + 1 < pixels; ++k) {
        const double denom = std::sqrt(rem[size_t(k)]);
        if (denom < 1e-15) break; // nothing left to distribute
        const cplx mu = coefficients[size_t(k)] / denom;
        const cplx lambda = (k + 2 < pixels) ? cplx(std::sqrt(rem[size_t(k) + 1]) / denom)
                                             : coefficients[size_t(k) + 1] / denom;
        if (lambda == cplx(0.0) && mu == cplx(1.0)) continue; // trivial routing
        TruncatedPure next = apply_beamsplitter(cur.state, k, k + 1, BeamSplitter(mu, lambda));
        cur.state = std::move(next.state);
        cur.leakage += next.leakage;
    }
    return cur;
}

int cloud_target_mode(std::span<const int> subset) {
    if (subset.empty()) throw std::invalid_argument("cloud_target_mode: empty subset");
    return *std::min_element(subset.begin(), subset.end());
}

InterferometerPlan cloud_mode_rotation(int pixel_count, std::span<const cplx> coefficients,
                                       std::span<const int> subset) {
    if (static_cast<int>(coefficients.size()) != pixel_count)
        throw std::invalid_argument("cloud_mode_rotation: coefficient count != pixel count");
    if (subset.empty()) throw std::invalid_argument("cloud_mode_rotation: empty subset");
    std::vector<int> s(subset.begin(), subset.end());
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
        throw std::invalid_argument("cloud_mode_rotation: duplicate pixel in subset");
    if (s.front() < 0 || s.back() >= pixel_count)
        throw std::invalid_argument("cloud_mode_rotation: pixel index out of range");
    if (static_cast<int>(s.size()) == pixel_count)
        throw std::invalid_argument("cloud_mode_rotation: subset must be strict");

    const int m = static_cast<int>(s.size());
    std::vector<cplx> d(static_cast<size_t>(m));
    double w = 0.0;
    for (int k = 0; k < m; ++k) {
        d[size_t(k)] = coefficients[size_t(s[size_t(k)])];
        w += std::norm(d[size_t(k)]);
    }
    if (w < 1e-24)
        throw std::invalid_argument("cloud_mode_rotation: coefficients vanish on the subset");
    const double wn = std::sqrt(w);
    for (cplx& v : d) v /= wn;

    // rho[t] = sqrt(sum_{j>=t} |d_j|^2). Merging from the tail makes
    // U^dag a_{s0} U = sum_k d_k a_{sk}; steps are emitted in application order.
    std::vector<double> rho(static_cast<size_t>(m) + 1, 0.0);
    for (int t = m - 1; t >= 0; --t) rho[size_t(t)] = std::hypot(rho[size_t(t) + 1], std::abs(d[size_t(t)]));

    InterferometerPlan plan;
    for (int t = m - 2; t >= 0; --t) {
        const double r = rho[size_t(t)];
        if (r < 1e-15) continue;
        const cplx mu = std::conj(d[size_t(t)] / r);
        const cplx lambda = (t == m - 2) ? d[size_t(t) + 1] / r : cplx(rho[size_t(t) + 1] / r);
        if (lambda == cplx(0.0) && mu == cplx(1.0)) continue; // trivial rotation
        plan.steps.push_back({s[size_t(t)], s[size_t(t) + 1], BeamSplitter(mu, lambda)});
    }
    return plan;
}

} // namespace focksim
