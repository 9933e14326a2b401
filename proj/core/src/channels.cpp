#include "focksim/channels.hpp"

#include <cmath>

namespace focksim {

namespace {

void check_detector(const DetectorModel& det) {
    if (det.efficiency < 0.0 || det.efficiency > 1.0)
        throw std::invalid_argument("DetectorModel: efficiency outside [0, 1]");
    if (det.dark_prob < 0.0 || det.dark_prob >= 1.0)
        throw std::invalid_argument("DetectorModel: dark_prob outside [0, 1)");
}

double no_click_factor(const DetectorModel& det, int n) {
    return (1.0 - det.dark_prob) * std::pow(1.0 - det.efficiency, n);
}

// Appends a vacuum tap mode, routes `tap_reflectivity` of mode `mode` into it.
MixedState tapped_state(const MixedState& rho, int mode, double tap_reflectivity) {
    if (tap_reflectivity <= 0.0 || tap_reflectivity >= 1.0)
        throw std::invalid_argument("tap_reflectivity must lie in (0, 1)");
    MixedState wide = embed(rho, 1);
    return apply_beamsplitter(wide, mode, wide.modes().mode_count() - 1,
                              BeamSplitter::tap(tap_reflectivity));
}

std::vector<int> all_but_last(int mode_count) {
    std::vector<int> keep(static_cast<size_t>(mode_count) - 1);
    for (int k = 0; k + 1 < mode_count; ++k) keep[size_t(k)] = k;
    return keep;
}

} // namespace

ClickPovm click_povm(const DetectorModel& det, Eigen::Index dim) {
    check_detector(det);
    Eigen::MatrixXcd no_click = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index n = 0; n < dim; ++n) no_click(n, n) = no_click_factor(det, static_cast<int>(n));
    Eigen::MatrixXcd click = Eigen::MatrixXcd::Identity(dim, dim) - no_click;
    return {std::move(no_click), std::move(click)};
}

Eigen::MatrixXd attenuation_kraus_element(Eigen::Index dim, int k, double gamma) {
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index n = k; n < dim; ++n) {
        double binom = 1.0;
        for (int j = 0; j < k; ++j) binom *= double(n - j) / double(j + 1);
        e(n - k, n) = std::sqrt(binom * std::pow(1.0 - gamma, double(n - k)) *
                                std::pow(gamma, double(k)));
    }
    return e;
}

std::pair<PureState, double> exact_annihilation(const PureState& psi, int mode) {
    const double in2 = psi.squared_norm();
    if (in2 <= 0.0) throw NormError("exact_annihilation: zero-norm state");
    PureState lowered = apply_annihilation(psi, mode);
    const double weight = lowered.squared_norm() / in2;
    if (weight <= 0.0) throw NormError("exact_annihilation: mode carries no photons");
    auto [unit, n] = normalize(lowered);
    (void)n;
    return {std::move(unit), weight};
}

std::pair<MixedState, double> exact_annihilation(const MixedState& rho, int mode) {
    const ModeSet& ms = rho.modes();
    const Eigen::Index s = ms.stride(mode);
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(ms.dim(), ms.dim());
    for (Eigen::Index r = 0; r < ms.dim(); ++r) {
        const int nr = ms.occupation(r, mode);
        if (nr == 0) continue;
        for (Eigen::Index c = 0; c < ms.dim(); ++c) {
            const int nc = ms.occupation(c, mode);
            if (nc == 0) continue;
            out(r - s, c - s) += std::sqrt(double(nr) * double(nc)) * rho.matrix()(r, c);
        }
    }
    const double tr_in = rho.trace();
    if (tr_in <= 0.0) throw NormError("exact_annihilation: zero-trace state");
    const double weight = out.trace().real() / tr_in;
    if (weight <= 0.0) throw NormError("exact_annihilation: mode carries no photons");
    return {MixedState(ms, out / out.trace().real(), weight), weight};
}

std::pair<MixedState, double> condition_on_click(const MixedState& rho, int mode,
                                                 const DetectorModel& det) {
    check_detector(det);
    const ModeSet& ms = rho.modes();
    if (mode < 0 || mode >= ms.mode_count())
        throw std::invalid_argument("condition_on_click: mode index out of range");
    const double tr_in = rho.trace();
    if (tr_in <= 0.0) throw NormError("condition_on_click: zero-trace state");

    if (ms.mode_count() == 1) {
        // Conditioning destroys the only mode; probability is still well defined
        // but there is no remainder to return.
        throw std::invalid_argument("condition_on_click: cannot trace out the only mode");
    }

    std::vector<int> keep;
    for (int m = 0; m < ms.mode_count(); ++m)
        if (m != mode) keep.push_back(m);
    ModeSet out_ms(static_cast<int>(keep.size()), ms.cutoff());

    const int base = ms.cutoff() + 1;
    const Eigen::Index s_mode = ms.stride(mode);
    std::vector<Eigen::Index> rest_off(static_cast<size_t>(out_ms.dim()), 0);
    for (Eigen::Index i = 0; i < out_ms.dim(); ++i) {
        Eigen::Index rem = i;
        for (size_t k = keep.size(); k-- > 0;) {
            const int n = static_cast<int>(rem % base);
            rem /= base;
            rest_off[size_t(i)] += n * ms.stride(keep[k]);
        }
    }

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(out_ms.dim(), out_ms.dim());
    for (int n = 0; n < base; ++n) {
        const double e = 1.0 - no_click_factor(det, n);
        if (e == 0.0) continue;
        for (Eigen::Index r = 0; r < out_ms.dim(); ++r)
            for (Eigen::Index c = 0; c < out_ms.dim(); ++c)
                out(r, c) += e * rho.matrix()(rest_off[size_t(r)] + n * s_mode,
                                              rest_off[size_t(c)] + n * s_mode);
    }
    const double probability = out.trace().real() / tr_in;
    if (probability < kEventFloor)
        throw EventError("condition_on_click: click probability " + std::to_string(probability) +
                         " below " + std::to_string(kEventFloor));
    return {MixedState(out_ms, out / out.trace().real(), probability), probability};
}

std::pair<MixedState, double> physical_subtraction(const MixedState& rho, int mode,
                                                   double tap_reflectivity,
                                                   const DetectorModel& det) {
    MixedState tapped = tapped_state(rho, mode, tap_reflectivity);
    return condition_on_click(tapped, tapped.modes().mode_count() - 1, det);
}

std::pair<MixedState, double> physical_subtraction(const PureState& psi, int mode,
                                                   double tap_reflectivity,
                                                   const DetectorModel& det) {
    return physical_subtraction(MixedState::from_pure(psi), mode, tap_reflectivity, det);
}

MixedState attenuate(const MixedState& rho, int mode, const AttenuationChannel& ch) {
    if (ch.gamma < 0.0 || ch.gamma > 1.0)
        throw std::invalid_argument("attenuate: gamma outside [0, 1]");
    const ModeSet& ms = rho.modes();
    const Eigen::Index s = ms.stride(mode);
    const int base = ms.cutoff() + 1;

    // Per-photon-number Kraus coefficients kappa_k(n) = sqrt(C(n,k) (1-g)^{n-k} g^k).
    std::vector<std::vector<double>> kappa(static_cast<size_t>(base),
                                           std::vector<double>(static_cast<size_t>(base), 0.0));
    for (int k = 0; k < base; ++k) {
        const Eigen::MatrixXd e = attenuation_kraus_element(base, k, ch.gamma);
        for (int n = k; n < base; ++n) kappa[size_t(k)][size_t(n)] = e(n - k, n);
    }

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(ms.dim(), ms.dim());
    for (int k = 0; k < base; ++k) {
        for (Eigen::Index r = 0; r < ms.dim(); ++r) {
            const int nr = ms.occupation(r, mode);
            if (nr < k) continue;
            const double kr = kappa[size_t(k)][size_t(nr)];
            if (kr == 0.0) continue;
            for (Eigen::Index c = 0; c < ms.dim(); ++c) {
                const int nc = ms.occupation(c, mode);
                if (nc < k) continue;
                const double kc = kappa[size_t(k)][size_t(nc)];
                if (kc == 0.0) continue;
                out(r - Eigen::Index(k) * s, c - Eigen::Index(k) * s) +=
                    kr * kc * rho.matrix()(r, c);
            }
        }
    }
    return MixedState(ms, std::move(out), rho.trace_weight());
}

MixedState unconditional_map(const MixedState& rho, int mode, double tap_reflectivity,
                             const DetectorModel& det) {
    check_detector(det);
    MixedState tapped = tapped_state(rho, mode, tap_reflectivity);
    const std::vector<int> keep = all_but_last(tapped.modes().mode_count());
    return partial_trace(tapped, keep);
}

MixedState unconditional_map(const PureState& psi, int mode, double tap_reflectivity,
                             const DetectorModel& det) {
    return unconditional_map(MixedState::from_pure(psi), mode, tap_reflectivity, det);
}

} // namespace focksim
