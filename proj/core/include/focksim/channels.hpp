#pragma once

#include "focksim/fock_space.hpp"
#include "focksim/linear_optics.hpp"

namespace focksim {

/// Non-number-resolving click detector: quantum efficiency and a per-pulse
/// dark-count probability combined by logical OR with true detections. The
/// number_resolving flag is a diagnostic marker only; the POVM below always
/// describes a bucket detector.
struct DetectorModel {
    double efficiency = 1.0;
    double dark_prob = 0.0;
    bool number_resolving = false;
};

/// Integrated photon-loss channel losing the fraction `gamma` of the energy.
struct AttenuationChannel {
    double gamma = 0.0;
};

struct ClickPovm {
    Eigen::MatrixXcd no_click;
    Eigen::MatrixXcd click;
};

/// POVM pair of the detector on a single-mode space of dimension `dim`:
/// no_click is diagonal with entries (1 - dark) (1 - eta)^n, click completes
/// it to the identity.
ClickPovm click_povm(const DetectorModel& det, Eigen::Index dim);

/// Kraus element E_k of the loss channel with parameter gamma on a
/// single-mode space: <n-k| E_k |n> = sqrt(C(n,k) (1-gamma)^{n-k} gamma^k).
Eigen::MatrixXd attenuation_kraus_element(Eigen::Index dim, int k, double gamma);

/// Ideal photon annihilation on one mode; returns the renormalized state and
/// the relative event weight <n_mode> (the heralding rate).
std::pair<PureState, double> exact_annihilation(const PureState& psi, int mode);
std::pair<MixedState, double> exact_annihilation(const MixedState& rho, int mode);

/// Apply the click element of `det` to one mode, trace that mode out, and
/// return the renormalized remainder together with the click probability.
std::pair<MixedState, double> condition_on_click(const MixedState& rho, int mode,
                                                 const DetectorModel& det);

/// Physical photon subtraction: tap the fraction `tap_reflectivity` of the
/// mode's energy onto `det` and condition on a click. Converges to
/// exact_annihilation as the tap vanishes (ideal detector, no dark counts).
std::pair<MixedState, double> physical_subtraction(const MixedState& rho, int mode,
                                                   double tap_reflectivity,
                                                   const DetectorModel& det);
std::pair<MixedState, double> physical_subtraction(const PureState& psi, int mode,
                                                   double tap_reflectivity,
                                                   const DetectorModel& det);

/// Trace-preserving binomial photon loss on one mode.
MixedState attenuate(const MixedState& rho, int mode, const AttenuationChannel& ch);

/// The subtraction apparatus without conditioning: tap beamsplitter applied,
/// tap mode traced out over both click and no-click outcomes. Trace
/// preserving; equals attenuation with gamma = tap_reflectivity.
MixedState unconditional_map(const MixedState& rho, int mode, double tap_reflectivity,
                             const DetectorModel& det);
MixedState unconditional_map(const PureState& psi, int mode, double tap_reflectivity,
                             const DetectorModel& det);

} // namespace focksim
