#pragma once

#include <cstdint>
#include <string>

#include "focksim/channels.hpp"
#include "focksim/tomography.hpp"

namespace focksim {

/// Parameters of the end-to-end experiment simulations. Defaults follow the
/// modeled setup: 6% tap, balanced split, 53% detection efficiency, calibrated
/// per-pulse dark-count probability on the subtraction detector.
struct ExperimentConfig {
    double squeezing = 0.1;               // two-mode squeezed vacuum parameter s in (0,1)
    DetectorModel herald_detector{1.0, 0.0, false};
    double tap_reflectivity = 0.06;
    DetectorModel subtraction_detector{1.0, 0.0025, false};
    cplx split_mu = cplx(0.7071067811865476, 0.0);
    cplx split_lambda = cplx(0.7071067811865476, 0.0);
    double detection_efficiency = 0.53;
    int samples_per_phase = 4000;
    std::vector<double> phases = default_phases();
    int cutoff = 5;
    std::uint64_t seed = 707;

    static std::vector<double> default_phases(int count = 12);
};

/// Range checks with field-name diagnostics; throws ConfigError.
void validate(const ExperimentConfig& config);

struct HeraldedPrep {
    MixedState signal;
    double herald_probability;
};

/// Two-mode squeezed vacuum, heralded on idler clicks: a single idler click
/// for target_n = 1, a coincidence behind a balanced idler split for
/// target_n = 2. Returns the signal state with the idler traced out.
HeraldedPrep heralded_fock_prep(const ExperimentConfig& config, int target_n);

/// Mean photon number in the transmitted arm for Fock input |n> split with
/// transmissivity lambda_sq: n lambda_sq, or (n-1) lambda_sq after photon
/// annihilation on the other arm.
double bob_mean_photons(int n, double lambda_sq, bool subtracted);

enum class SubtractionMechanism {
    physical_tap, // tap beamsplitter + click detector (the default apparatus)
    exact_ladder  // ideal annihilation operator (diagnostic)
};

/// Aggregated quadrature histogram with the expected detected-state density at
/// the bin centers; CSV rows "bin_left,bin_right,count,theory_density".
struct HistogramTable {
    std::vector<double> bin_left;
    std::vector<double> bin_right;
    std::vector<std::int64_t> counts;
    std::vector<double> theory_density;
    std::string to_csv() const;
};

struct VampireBranch {
    std::string label;
    double branch_probability = 1.0; // click probability (1 for the unconditioned branch)
    double perp_population = 0.0;    // photons left in the orthogonal output mode
    int target_fock = 0;
    std::vector<double> true_distribution; // diagonal before detection loss
    double true_fidelity = 0.0;            // against |target_fock>, before detection loss
    TomographyResult tomography;
    std::vector<double> reconstructed_distribution;
    double reconstructed_fidelity = 0.0;
    HistogramTable histogram;
    QuadratureDataset dataset;
};

struct VampireReport {
    ExperimentConfig config;
    int target_n = 1;
    SubtractionMechanism mechanism = SubtractionMechanism::physical_tap;
    double herald_probability = 0.0;
    VampireBranch conditioned;
    VampireBranch unconditioned;
};

/// Full pipeline: heralded Fock preparation, distribution over two arms,
/// photon subtraction on one arm (conditioned branch) or the same apparatus
/// traced out (unconditioned branch), recombination, detection loss, homodyne
/// sampling and maximum-likelihood reconstruction with loss compensation.
/// Datasets derive from config.seed (conditioned) and config.seed + 1.
VampireReport vampire_pipeline(const ExperimentConfig& config, int target_n,
                               SubtractionMechanism mechanism = SubtractionMechanism::physical_tap);

struct ShadowMechanism {
    enum class Kind { annihilation, attenuation };
    Kind kind = Kind::annihilation;
    double gamma = 0.0;

    static ShadowMechanism annihilation() { return {Kind::annihilation, 0.0}; }
    static ShadowMechanism attenuation(double gamma) { return {Kind::attenuation, gamma}; }
};

struct ShadowReport {
    int pixels = 0;
    std::vector<int> cloud;
    std::vector<cplx> coefficients;
    int input_n = 0;
    ShadowMechanism mechanism;
    std::vector<double> input_intensity;
    std::vector<double> output_intensity;
    std::vector<double> intensity_ratio; // NaN where the input pixel is dark
    double contrast = 0.0;               // max_k |ratio_k - mean ratio|
    double total_photons_in = 0.0;
    double total_photons_out = 0.0;
    double event_weight = 1.0; // <n_cloud> for annihilation, 1 for attenuation
    std::string pixel_csv() const; // "pixel,input_intensity,output_intensity,ratio"
};

/// |input_n> distributed over pixel modes by `coefficients`; the mechanism
/// acts on the cloud mode spanned by the pixels in `cloud` (conditioned
/// annihilation, or unconditional attenuation). Reports per-pixel intensities
/// and the shadow contrast.
ShadowReport shadow_demo(int pixels, std::span<const cplx> coefficients,
                         std::span<const int> cloud, const ShadowMechanism& mechanism,
                         int input_n);

struct PrepReport {
    ExperimentConfig config;
    int target_n = 1;
    double herald_probability = 0.0;
    std::vector<double> distribution;
    double fidelity_target = 0.0;
};

PrepReport prep_report(const ExperimentConfig& config, int target_n);

// Deterministic JSON payloads (no timestamps; callers may add metadata).
std::string serialize_report(const VampireReport& report);
std::string serialize_report(const ShadowReport& report);
std::string serialize_report(const PrepReport& report);

} // namespace focksim
