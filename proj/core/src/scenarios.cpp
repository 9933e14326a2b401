#include "focksim/scenarios.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <tuple>

#include <nlohmann/json.hpp>

namespace focksim {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ordered_json complex_to_json(cplx v) { return ordered_json::array({v.real(), v.imag()}); }

ordered_json config_to_json(const ExperimentConfig& c) {
    ordered_json j;
    j["squeezing"] = c.squeezing;
    j["herald_efficiency"] = c.herald_detector.efficiency;
    j["herald_dark_prob"] = c.herald_detector.dark_prob;
    j["tap_reflectivity"] = c.tap_reflectivity;
    j["subtraction_efficiency"] = c.subtraction_detector.efficiency;
    j["subtraction_dark_prob"] = c.subtraction_detector.dark_prob;
    j["split_mu"] = complex_to_json(c.split_mu);
    j["split_lambda"] = complex_to_json(c.split_lambda);
    j["detection_efficiency"] = c.detection_efficiency;
    j["samples_per_phase"] = c.samples_per_phase;
    j["phases"] = c.phases;
    j["cutoff"] = c.cutoff;
    j["seed"] = c.seed;
    return j;
}

MixedState fock_density(int n, int cutoff) {
    const ModeSet ms(1, cutoff);
    std::vector<int> occ{n};
    return MixedState::from_pure(fock_state(ms, occ));
}

TomographySettings tomography_settings(const ExperimentConfig& c) {
    TomographySettings s;
    s.cutoff = c.cutoff;
    s.efficiency_compensation = c.detection_efficiency;
    return s;
}

HistogramTable make_histogram(const QuadratureDataset& data, const MixedState& detected,
                              std::span<const double> phases, double bin_width) {
    const BinnedQuadratures binned = bin_dataset(data, bin_width);
    const int nbins = static_cast<int>(binned.edges.size()) - 1;
    HistogramTable h;
    h.bin_left.resize(size_t(nbins));
    h.bin_right.resize(size_t(nbins));
    h.counts.assign(size_t(nbins), 0);
    h.theory_density.assign(size_t(nbins), 0.0);
    std::vector<double> centers(static_cast<size_t>(nbins), 0.0);
    for (int b = 0; b < nbins; ++b) {
        h.bin_left[size_t(b)] = binned.edges[size_t(b)];
        h.bin_right[size_t(b)] = binned.edges[size_t(b) + 1];
        centers[size_t(b)] = 0.5 * (h.bin_left[size_t(b)] + h.bin_right[size_t(b)]);
        for (Eigen::Index p = 0; p < binned.weights.rows(); ++p)
            h.counts[size_t(b)] += std::int64_t(std::llround(binned.weights(p, b)));
    }
    // Phase-averaged density of the detected state at the bin centers.
    for (double th : phases) {
        const std::vector<double> pdf = marginal_distribution(detected, th, centers);
        for (int b = 0; b < nbins; ++b) h.theory_density[size_t(b)] += pdf[size_t(b)];
    }
    for (double& v : h.theory_density) v /= double(phases.size());
    return h;
}

} // namespace

std::vector<double> ExperimentConfig::default_phases(int count) {
    std::vector<double> out(static_cast<size_t>(count));
    for (int k = 0; k < count; ++k) out[size_t(k)] = std::numbers::pi * double(k) / double(count);
    return out;
}

void validate(const ExperimentConfig& c) {
    auto range = [](bool ok, const std::string& field, const std::string& what) {
        if (!ok) throw ConfigError(field + " " + what);
    };
    range(c.squeezing > 0.0 && c.squeezing < 1.0, "squeezing", "must lie in (0, 1)");
    range(c.herald_detector.efficiency >= 0.0 && c.herald_detector.efficiency <= 1.0,
          "herald_efficiency", "must lie in [0, 1]");
    range(c.herald_detector.dark_prob >= 0.0 && c.herald_detector.dark_prob < 1.0,
          "herald_dark_prob", "must lie in [0, 1)");
    range(c.tap_reflectivity > 0.0 && c.tap_reflectivity < 1.0, "tap_reflectivity",
          "must lie in (0, 1)");
    range(c.subtraction_detector.efficiency >= 0.0 && c.subtraction_detector.efficiency <= 1.0,
          "subtraction_efficiency", "must lie in [0, 1]");
    range(c.subtraction_detector.dark_prob >= 0.0 && c.subtraction_detector.dark_prob < 1.0,
          "subtraction_dark_prob", "must lie in [0, 1)");
    range(c.detection_efficiency > 0.0 && c.detection_efficiency <= 1.0, "detection_efficiency",
          "must lie in (0, 1]");
    range(c.samples_per_phase >= 1, "samples_per_phase", "must be >= 1");
    range(c.cutoff >= 1, "cutoff", "must be >= 1");
    range(!c.phases.empty(), "phases", "must be nonempty");
    for (double th : c.phases)
        range(th >= 0.0 && th < std::numbers::pi, "phases", "must lie in [0, pi)");
    const double s = std::norm(c.split_mu) + std::norm(c.split_lambda);
    range(std::abs(s - 1.0) <= 1e-9, "split_mu/split_lambda",
          "must satisfy |mu|^2 + |lambda|^2 = 1 (got " + g17(s) + ")");
    range(std::abs(c.split_mu) > 0.0 && std::abs(c.split_lambda) > 0.0, "split_mu/split_lambda",
          "must both be nonvanishing");
}

HeraldedPrep heralded_fock_prep(const ExperimentConfig& config, int target_n) {
    validate(config);
    if (target_n != 1 && target_n != 2)
        throw std::invalid_argument("heralded_fock_prep: target_n must be 1 or 2");
    const int cut = config.cutoff;
    const double s = config.squeezing;
    const double tail = std::pow(s * s, cut + 1);
    if (tail >= 1e-8)
        throw CutoffError("heralded_fock_prep: squeezing " + g17(s) +
                          " leaks weight " + g17(tail) + " past cutoff " + std::to_string(cut));

    // Two-mode squeezed vacuum sum_n sqrt(1-s^2) s^n |n,n>, renormalized on the
    // truncated space.
    const ModeSet two(2, cut);
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(two.dim());
    for (int n = 0; n <= cut; ++n) {
        const std::vector<int> occ{n, n};
        amps(two.index_of(occ)) = std::sqrt(1.0 - s * s) * std::pow(s, n);
    }
    amps /= amps.norm();
    const PureState tmsv(two, std::move(amps), 1.0);

    if (target_n == 1) {
        auto [signal, p] = condition_on_click(MixedState::from_pure(tmsv), 1, config.herald_detector);
        return {std::move(signal), p};
    }
    // target_n == 2: split the idler on a balanced splitter and demand a
    // coincidence of both detectors.
    const PureState three = embed(tmsv, 1);
    const TruncatedPure split = apply_beamsplitter(three, 1, 2, BeamSplitter::balanced());
    auto [after_first, p1] =
        condition_on_click(MixedState::from_pure(split.state), 2, config.herald_detector);
    auto [signal, p2] = condition_on_click(after_first, 1, config.herald_detector);
    return {std::move(signal), p1 * p2};
}

double bob_mean_photons(int n, double lambda_sq, bool subtracted) {
    if (n < 0) throw std::invalid_argument("bob_mean_photons: negative photon number");
    if (lambda_sq <= 0.0 || lambda_sq >= 1.0)
        throw std::invalid_argument("bob_mean_photons: lambda_sq must lie in (0, 1)");
    if (subtracted && n == 0)
        throw std::invalid_argument("bob_mean_photons: cannot subtract from vacuum");
    return (subtracted ? n - 1 : n) * lambda_sq;
}

std::string HistogramTable::to_csv() const {
    std::string out = "bin_left,bin_right,count,theory_density\n";
    for (size_t b = 0; b < counts.size(); ++b) {
        out += g17(bin_left[b]);
        out += ',';
        out += g17(bin_right[b]);
        out += ',';
        out += std::to_string(counts[b]);
        out += ',';
        out += g17(theory_density[b]);
        out += '\n';
    }
    return out;
}

namespace {

VampireBranch run_branch(const ExperimentConfig& config, const MixedState& rho_two,
                         const BeamSplitter& split, double probability, int target_fock,
                         std::string label, std::uint64_t seed) {
    VampireBranch br;
    br.label = std::move(label);
    br.branch_probability = probability;
    br.target_fock = target_fock;

    const MixedState recombined = apply_beamsplitter(rho_two, 0, 1, split.inverse());
    br.perp_population = mean_photon_number(recombined, 1);
    const MixedState mode_a = partial_trace(recombined, {0});

    br.true_distribution.resize(size_t(config.cutoff) + 1);
    for (int n = 0; n <= config.cutoff; ++n)
        br.true_distribution[size_t(n)] = mode_a.matrix()(n, n).real();
    br.true_fidelity = fidelity(mode_a, fock_density(target_fock, config.cutoff));

    const MixedState detected =
        attenuate(mode_a, 0, AttenuationChannel{1.0 - config.detection_efficiency});
    br.dataset = sample_quadratures(detected, config.phases, config.samples_per_phase, seed,
                                    br.label);
    const TomographySettings settings = tomography_settings(config);
    br.tomography = maxlik_reconstruct(br.dataset, settings);
    br.reconstructed_distribution = photon_number_distribution(br.tomography);
    br.reconstructed_fidelity =
        fidelity(br.tomography.rho, fock_density(target_fock, config.cutoff));
    br.histogram = make_histogram(br.dataset, detected, config.phases, settings.bin_width);
    return br;
}

} // namespace

VampireReport vampire_pipeline(const ExperimentConfig& config, int target_n,
                               SubtractionMechanism mechanism) {
    validate(config);
    VampireReport report;
    report.config = config;
    report.target_n = target_n;
    report.mechanism = mechanism;

    HeraldedPrep prep = heralded_fock_prep(config, target_n);
    report.herald_probability = prep.herald_probability;

    const BeamSplitter split(config.split_mu, config.split_lambda);
    const MixedState rho_split = apply_beamsplitter(embed(prep.signal, 1), 0, 1, split);

    MixedState conditioned = rho_split;
    double p_click = 0.0;
    if (mechanism == SubtractionMechanism::physical_tap) {
        std::tie(conditioned, p_click) = physical_subtraction(
            rho_split, 0, config.tap_reflectivity, config.subtraction_detector);
    } else {
        std::tie(conditioned, p_click) = exact_annihilation(rho_split, 0);
    }
    const MixedState unconditioned =
        mechanism == SubtractionMechanism::physical_tap
            ? unconditional_map(rho_split, 0, config.tap_reflectivity, config.subtraction_detector)
            : rho_split;

    report.conditioned =
        run_branch(config, conditioned, split, p_click, target_n - 1,
                   "vampire-n" + std::to_string(target_n) + "-conditioned", config.seed);
    report.unconditioned =
        run_branch(config, unconditioned, split, 1.0, target_n,
                   "vampire-n" + std::to_string(target_n) + "-unconditioned", config.seed + 1);
    return report;
}

ShadowReport shadow_demo(int pixels, std::span<const cplx> coefficients,
                         std::span<const int> cloud, const ShadowMechanism& mechanism,
                         int input_n) {
    if (pixels < 2) throw std::invalid_argument("shadow_demo: need at least two pixels");
    if (input_n < 1) throw std::invalid_argument("shadow_demo: input_n must be >= 1");
    if (static_cast<int>(coefficients.size()) != pixels)
        throw std::invalid_argument("shadow_demo: coefficient count != pixel count");
    if (mechanism.kind == ShadowMechanism::Kind::attenuation &&
        (mechanism.gamma < 0.0 || mechanism.gamma > 1.0))
        throw std::invalid_argument("shadow_demo: gamma outside [0, 1]");

    ShadowReport rep;
    rep.pixels = pixels;
    rep.cloud.assign(cloud.begin(), cloud.end());
    rep.coefficients.assign(coefficients.begin(), coefficients.end());
    rep.input_n = input_n;
    rep.mechanism = mechanism;

    // Photon number never grows here, so the minimal exact cutoff suffices.
    const ModeSet single(1, input_n);
    const PureState input = fock_state(single, {input_n});
    const PureState beam = split_mode(input, coefficients).state;

    rep.input_intensity.resize(size_t(pixels));
    for (int k = 0; k < pixels; ++k) rep.input_intensity[size_t(k)] = mean_photon_number(beam, k);

    const InterferometerPlan plan = cloud_mode_rotation(pixels, coefficients, cloud);
    const int target = cloud_target_mode(cloud);

    rep.output_intensity.resize(size_t(pixels));
    if (mechanism.kind == ShadowMechanism::Kind::annihilation) {
        const PureState rotated = apply_plan(beam, plan).state;
        auto [lowered, weight] = exact_annihilation(rotated, target);
        rep.event_weight = weight;
        const PureState out = apply_plan(lowered, plan.inverted()).state;
        for (int k = 0; k < pixels; ++k)
            rep.output_intensity[size_t(k)] = mean_photon_number(out, k);
    } else {
        const MixedState rotated = apply_plan(MixedState::from_pure(beam), plan);
        const MixedState dimmed = attenuate(rotated, target, AttenuationChannel{mechanism.gamma});
        const MixedState out = apply_plan(dimmed, plan.inverted());
        rep.event_weight = 1.0;
        for (int k = 0; k < pixels; ++k)
            rep.output_intensity[size_t(k)] = mean_photon_number(out, k);
    }

    rep.intensity_ratio.assign(size_t(pixels), std::numeric_limits<double>::quiet_NaN());
    double mean_ratio = 0.0;
    int lit = 0;
    for (int k = 0; k < pixels; ++k) {
        if (rep.input_intensity[size_t(k)] > 1e-12) {
            rep.intensity_ratio[size_t(k)] =
                rep.output_intensity[size_t(k)] / rep.input_intensity[size_t(k)];
            mean_ratio += rep.intensity_ratio[size_t(k)];
            ++lit;
        }
        rep.total_photons_in += rep.input_intensity[size_t(k)];
        rep.total_photons_out += rep.output_intensity[size_t(k)];
    }
    if (lit > 0) {
        mean_ratio /= lit;
        for (int k = 0; k < pixels; ++k)
            if (!std::isnan(rep.intensity_ratio[size_t(k)]))
                rep.contrast =
                    std::max(rep.contrast, std::abs(rep.intensity_ratio[size_t(k)] - mean_ratio));
    }
    return rep;
}

std::string ShadowReport::pixel_csv() const {
    std::string out = "pixel,input_intensity,output_intensity,ratio\n";
    for (size_t k = 0; k < input_intensity.size(); ++k) {
        out += std::to_string(k);
        out += ',';
        out += g17(input_intensity[k]);
        out += ',';
        out += g17(output_intensity[k]);
        out += ',';
        out += std::isnan(intensity_ratio[k]) ? std::string("nan") : g17(intensity_ratio[k]);
        out += '\n';
    }
    return out;
}

PrepReport prep_report(const ExperimentConfig& config, int target_n) {
    PrepReport rep;
    rep.config = config;
    rep.target_n = target_n;
    HeraldedPrep prep = heralded_fock_prep(config, target_n);
    rep.herald_probability = prep.herald_probability;
    rep.distribution.resize(size_t(config.cutoff) + 1);
    for (int n = 0; n <= config.cutoff; ++n)
        rep.distribution[size_t(n)] = prep.signal.matrix()(n, n).real();
    rep.fidelity_target = fidelity(prep.signal, fock_density(target_n, config.cutoff));
    return rep;
}

namespace {

ordered_json branch_to_json(const VampireBranch& br) {
    ordered_json j;
    j["label"] = br.label;
    j["branch_probability"] = br.branch_probability;
    j["perp_population"] = br.perp_population;
    j["target_fock"] = br.target_fock;
    j["true_distribution"] = br.true_distribution;
    j["true_fidelity"] = br.true_fidelity;
    j["reconstructed_distribution"] = br.reconstructed_distribution;
    j["reconstructed_fidelity"] = br.reconstructed_fidelity;
    j["tomography"] = {{"converged", br.tomography.converged},
                       {"iterations_used", br.tomography.iterations_used},
                       {"final_loglik", br.tomography.loglik_trace.empty()
                                            ? 0.0
                                            : br.tomography.loglik_trace.back()}};
    return j;
}

} // namespace

std::string serialize_report(const VampireReport& report) {
    ordered_json j;
    j["scenario"] = "vampire";
    j["target_n"] = report.target_n;
    j["mechanism"] =
        report.mechanism == SubtractionMechanism::physical_tap ? "physical_tap" : "exact_ladder";
    j["herald_probability"] = report.herald_probability;
    j["conditioned"] = branch_to_json(report.conditioned);
    j["unconditioned"] = branch_to_json(report.unconditioned);
    j["config"] = config_to_json(report.config);
    return j.dump(2);
}

std::string serialize_report(const ShadowReport& report) {
    ordered_json j;
    j["scenario"] = "shadow";
    j["pixels"] = report.pixels;
    j["cloud"] = report.cloud;
    ordered_json coef = ordered_json::array();
    for (const cplx& c : report.coefficients) coef.push_back(complex_to_json(c));
    j["coefficients"] = std::move(coef);
    j["input_n"] = report.input_n;
    j["mechanism"] = report.mechanism.kind == ShadowMechanism::Kind::annihilation
                         ? "annihilation"
                         : "attenuation";
    if (report.mechanism.kind == ShadowMechanism::Kind::attenuation)
        j["gamma"] = report.mechanism.gamma;
    j["input_intensity"] = report.input_intensity;
    j["output_intensity"] = report.output_intensity;
    ordered_json ratios = ordered_json::array();
    for (double r : report.intensity_ratio) {
        if (std::isnan(r))
            ratios.push_back(nullptr);
        else
            ratios.push_back(r);
    }
    j["intensity_ratio"] = std::move(ratios);
    j["contrast"] = report.contrast;
    j["total_photons_in"] = report.total_photons_in;
    j["total_photons_out"] = report.total_photons_out;
    j["event_weight"] = report.event_weight;
    return j.dump(2);
}

std::string serialize_report(const PrepReport& report) {
    ordered_json j;
    j["scenario"] = "prep";
    j["target_n"] = report.target_n;
    j["herald_probability"] = report.herald_probability;
    j["distribution"] = report.distribution;
    j["fidelity_target"] = report.fidelity_target;
    j["config"] = config_to_json(report.config);
    return j.dump(2);
}

} // namespace focksim
