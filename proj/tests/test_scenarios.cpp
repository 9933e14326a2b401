#include <doctest.h>

#include <algorithm>
#include <numbers>

#include <nlohmann/json.hpp>

#include "focksim/scenarios.hpp"
#include "support/oracles.hpp"

using namespace focksim;

namespace {

MixedState fock_dm(int n, int cutoff) {
    const ModeSet one(1, cutoff);
    return MixedState::from_pure(fock_state(one, {n}));
}

// Fast pipeline settings for unit tests; the acceptance suite runs the
// defaults.
ExperimentConfig quick_config() {
    ExperimentConfig cfg;
    cfg.samples_per_phase = 1500;
    cfg.phases = ExperimentConfig::default_phases(6);
    return cfg;
}

} // namespace

TEST_SUITE_BEGIN("scenarios");

TEST_CASE("heralded preparation") {
    SUBCASE("small squeezing gives a clean single photon") {
        ExperimentConfig cfg;
        cfg.squeezing = 0.05;
        const HeraldedPrep prep = heralded_fock_prep(cfg, 1);
        CHECK(fidelity(prep.signal, fock_dm(1, cfg.cutoff)) >= 1.0 - cfg.squeezing * cfg.squeezing - 1e-6);
        // with an ideal bucket detector every n >= 1 heralds, so
        // p = sum_{n>=1} (1-s^2) s^{2n} = s^2
        CHECK(prep.herald_probability == doctest::Approx(0.05 * 0.05).epsilon(1e-6));
    }
    SUBCASE("unconditioned idler trace leaves a thermal signal") {
        ExperimentConfig cfg;
        const double s = cfg.squeezing;
        const ModeSet two(2, cfg.cutoff);
        Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(two.dim());
        for (int n = 0; n <= cfg.cutoff; ++n)
            amps(two.index_of(std::vector<int>{n, n})) = std::sqrt(1 - s * s) * std::pow(s, n);
        amps /= amps.norm();
        const MixedState reduced =
            partial_trace(MixedState::from_pure(PureState(two, amps, 1.0)), {0});
        CHECK(mean_photon_number(reduced, 0) ==
              doctest::Approx(s * s / (1 - s * s)).epsilon(1e-9));
    }
    SUBCASE("two-photon coincidence composition matches the tensor oracle") {
        // P(n | coincidence) ∝ s^{2n} (1 - 2^{1-n}): a balanced idler split
        // fires both ideal detectors unless all idler photons bunch.
        ExperimentConfig cfg;
        cfg.squeezing = 0.2;
        const HeraldedPrep prep = heralded_fock_prep(cfg, 2);
        const double s2 = cfg.squeezing * cfg.squeezing;
        std::vector<double> expect(size_t(cfg.cutoff) + 1, 0.0);
        double norm = 0.0;
        for (int n = 2; n <= cfg.cutoff; ++n) {
            expect[size_t(n)] = std::pow(s2, n) * (1.0 - std::pow(2.0, 1 - n));
            norm += expect[size_t(n)];
        }
        for (int n = 0; n <= cfg.cutoff; ++n)
            CHECK(prep.signal.matrix()(n, n).real() ==
                  doctest::Approx(expect[size_t(n)] / norm).epsilon(1e-9));
        CHECK(prep.signal.matrix()(2, 2).real() > 0.9);
    }
    SUBCASE("impossible herald is rejected") {
        ExperimentConfig cfg;
        cfg.herald_detector = DetectorModel{0.0, 0.0, false};
        CHECK_THROWS_AS(heralded_fock_prep(cfg, 1), EventError);
    }
    SUBCASE("squeezing too hot for the cutoff is rejected") {
        ExperimentConfig cfg;
        cfg.squeezing = 0.6;
        CHECK_THROWS_AS(heralded_fock_prep(cfg, 1), CutoffError);
    }
}

TEST_CASE("bob_mean_photons") {
    CHECK(bob_mean_photons(2, 0.5, false) == doctest::Approx(1.0));
    CHECK(bob_mean_photons(2, 0.5, true) == doctest::Approx(0.5));
    CHECK(bob_mean_photons(1, 0.37, true) == doctest::Approx(0.0));
    CHECK_THROWS_AS(bob_mean_photons(0, 0.5, true), std::invalid_argument);
    CHECK_THROWS_AS(bob_mean_photons(2, 1.5, false), std::invalid_argument);

    SUBCASE("cross-checked against the full simulator") {
        for (int n : {1, 2, 3}) {
            for (double lam_sq : {0.3, 0.5, 0.7}) {
                const BeamSplitter bs(std::sqrt(1 - lam_sq), std::sqrt(lam_sq));
                const ModeSet one(1, 4);
                const PureState split =
                    apply_beamsplitter(embed(fock_state(one, {n}), 1), 0, 1, bs).state;
                CHECK(mean_photon_number(split, 1) ==
                      doctest::Approx(bob_mean_photons(n, lam_sq, false)).epsilon(1e-12));
                const auto [low, w] = exact_annihilation(split, 0);
                (void)w;
                CHECK(mean_photon_number(low, 1) ==
                      doctest::Approx(bob_mean_photons(n, lam_sq, true)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("shadow_demo") {
    std::mt19937_64 rng(51);
    std::normal_distribution<double> gauss;

    SUBCASE("exact annihilation leaves no shadow") {
        // random profiles, random strict clouds, pixel counts 2..4, inputs up to |3>
        for (int rep = 0; rep < 12; ++rep) {
            const int pixels = 2 + rep % 3;
            std::vector<cplx> c(static_cast<size_t>(pixels), cplx(0.0));
            double norm = 0.0;
            for (cplx& v : c) {
                v = cplx(gauss(rng), gauss(rng));
                norm += std::norm(v);
            }
            for (cplx& v : c) v /= std::sqrt(norm);

            std::vector<int> all(static_cast<size_t>(pixels));
            for (int k = 0; k < pixels; ++k) all[size_t(k)] = k;
            std::shuffle(all.begin(), all.end(), rng);
            const int cloud_size = 1 + int(rng() % std::uint64_t(pixels - 1));
            std::vector<int> cloud(all.begin(), all.begin() + cloud_size);
            std::sort(cloud.begin(), cloud.end());

            const int n = 1 + rep % 3;
            const ShadowReport rep_out =
                shadow_demo(pixels, c, cloud, ShadowMechanism::annihilation(), n);
            CHECK(rep_out.contrast < 1e-12);
            CHECK(rep_out.total_photons_out == doctest::Approx(double(n - 1)).epsilon(1e-12));
            for (int k = 0; k < pixels; ++k)
                CHECK(rep_out.output_intensity[size_t(k)] ==
                      doctest::Approx((n - 1) * std::norm(c[size_t(k)])).epsilon(1e-11));
            double cloud_weight = 0.0;
            for (int k : cloud) cloud_weight += std::norm(c[size_t(k)]);
            CHECK(rep_out.event_weight == doctest::Approx(n * cloud_weight).epsilon(1e-10));
        }
    }
    SUBCASE("attenuation dims exactly the covered pixels") {
        const std::vector<cplx> c(4, cplx(0.5, 0.0));
        const std::vector<int> cloud{0, 1};
        const ShadowReport out =
            shadow_demo(4, c, cloud, ShadowMechanism::attenuation(0.5), 2);
        CHECK(out.intensity_ratio[0] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(out.intensity_ratio[1] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(out.intensity_ratio[2] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(out.intensity_ratio[3] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(out.contrast > 0.2);
    }
    SUBCASE("covered pixels are strictly dimmer for any gamma > 0") {
        for (double gamma : {0.1, 0.35, 0.9}) {
            std::vector<cplx> c(3);
            double norm = 0.0;
            for (cplx& v : c) {
                v = cplx(gauss(rng), gauss(rng));
                norm += std::norm(v);
            }
            for (cplx& v : c) v /= std::sqrt(norm);
            const std::vector<int> cloud{1};
            const ShadowReport out =
                shadow_demo(3, c, cloud, ShadowMechanism::attenuation(gamma), 2);
            CHECK(out.intensity_ratio[1] < out.intensity_ratio[0] - 1e-6);
            CHECK(out.intensity_ratio[1] < out.intensity_ratio[2] - 1e-6);
        }
    }
    SUBCASE("gamma 0 is the identity") {
        const std::vector<cplx> c(4, cplx(0.5, 0.0));
        const ShadowReport out =
            shadow_demo(4, c, std::vector<int>{0, 1}, ShadowMechanism::attenuation(0.0), 2);
        for (int k = 0; k < 4; ++k)
            CHECK(out.output_intensity[size_t(k)] ==
                  doctest::Approx(out.input_intensity[size_t(k)]).epsilon(1e-12));
        CHECK(out.contrast < 1e-12);
    }
}

TEST_CASE("vampire_pipeline") {
    SUBCASE("exact mechanism keeps the orthogonal mode empty") {
        ExperimentConfig cfg = quick_config();
        const VampireReport rep = vampire_pipeline(cfg, 1, SubtractionMechanism::exact_ladder);
        CHECK(rep.conditioned.perp_population < 1e-12);
        CHECK(rep.conditioned.target_fock == 0);
        CHECK(rep.conditioned.true_fidelity > 0.98);
        CHECK(rep.conditioned.reconstructed_distribution[0] > 0.9);
    }
    SUBCASE("physical tap, ideal detector, N = 1") {
        ExperimentConfig cfg = quick_config();
        cfg.subtraction_detector = DetectorModel{1.0, 0.0, false};
        const VampireReport rep = vampire_pipeline(cfg, 1);
        CHECK(rep.herald_probability == doctest::Approx(0.01).epsilon(1e-4));
        CHECK(rep.conditioned.reconstructed_distribution[0] > 0.9);
        CHECK(rep.unconditioned.reconstructed_distribution[1] > 0.9);
        CHECK(rep.conditioned.perp_population < 1e-3);
        // loglik monotone in both branches
        for (const VampireBranch* br : {&rep.conditioned, &rep.unconditioned})
            for (size_t i = 1; i < br->tomography.loglik_trace.size(); ++i)
                CHECK(br->tomography.loglik_trace[i] - br->tomography.loglik_trace[i - 1] > -1e-9);
    }
    SUBCASE("vanishing tap reproduces the prepared state in both branches") {
        ExperimentConfig cfg = quick_config();
        cfg.tap_reflectivity = 1e-9;
        cfg.subtraction_detector = DetectorModel{1.0, 0.0, false};
        const VampireReport rep = vampire_pipeline(cfg, 1);
        CHECK(rep.unconditioned.true_fidelity > 0.98);
        CHECK(rep.unconditioned.reconstructed_fidelity > 0.95);
        // conditioned branch converges to ideal annihilation as the tap vanishes
        CHECK(rep.conditioned.true_fidelity > 0.97);
    }
    SUBCASE("finite tap fidelity approaches the target linearly in the tap") {
        for (double tap : {0.02, 0.01}) {
            ExperimentConfig cfg = quick_config();
            cfg.tap_reflectivity = tap;
            cfg.subtraction_detector = DetectorModel{1.0, 0.0, false};
            const VampireReport rep = vampire_pipeline(cfg, 2);
            CHECK(rep.conditioned.true_fidelity > 1.0 - 3.0 * tap - 0.03);
        }
    }
    SUBCASE("report serialization carries both branches and the config echo") {
        ExperimentConfig cfg = quick_config();
        const VampireReport rep = vampire_pipeline(cfg, 1);
        const auto j = nlohmann::json::parse(serialize_report(rep));
        CHECK(j["scenario"] == "vampire");
        CHECK(j["conditioned"]["target_fock"].get<int>() == 0);
        CHECK(j["unconditioned"]["target_fock"].get<int>() == 1);
        CHECK(j["config"]["tap_reflectivity"].get<double>() == doctest::Approx(0.06));
        CHECK(j["config"]["seed"].get<std::uint64_t>() == cfg.seed);
    }
    SUBCASE("determinism for a fixed seed") {
        ExperimentConfig cfg = quick_config();
        cfg.samples_per_phase = 400;
        const std::string a = serialize_report(vampire_pipeline(cfg, 1));
        const std::string b = serialize_report(vampire_pipeline(cfg, 1));
        CHECK(a == b);
    }
}

TEST_CASE("histogram table format") {
    ExperimentConfig cfg = quick_config();
    cfg.samples_per_phase = 400;
    const VampireReport rep = vampire_pipeline(cfg, 1);
    const std::string csv = rep.conditioned.histogram.to_csv();
    CHECK(csv.rfind("bin_left,bin_right,count,theory_density\n", 0) == 0);
    // 120 bins + header
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 121);
    std::int64_t total = 0;
    for (std::int64_t c : rep.conditioned.histogram.counts) total += c;
    CHECK(total == 400 * 6);
}

TEST_CASE("prep report serialization") {
    ExperimentConfig cfg;
    const PrepReport rep = prep_report(cfg, 2);
    const auto j = nlohmann::json::parse(serialize_report(rep));
    CHECK(j["scenario"] == "prep");
    CHECK(j["herald_probability"].get<double>() > 0.0);
    CHECK(j["distribution"][2].get<double>() > 0.9);
}

TEST_SUITE_END();
