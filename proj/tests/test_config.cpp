#include <doctest.h>

#include <numbers>

#include "focksim/config.hpp"

using namespace focksim;

TEST_SUITE_BEGIN("config");

TEST_CASE("empty document yields the defaults") {
    const ExperimentConfig cfg = parse_config("");
    CHECK(cfg.tap_reflectivity == doctest::Approx(0.06));
    CHECK(std::abs(cfg.split_mu - cplx(1 / std::sqrt(2.0), 0.0)) < 1e-12);
    CHECK(std::abs(cfg.split_lambda - cplx(1 / std::sqrt(2.0), 0.0)) < 1e-12);
    CHECK(cfg.detection_efficiency == doctest::Approx(0.53));
    CHECK(cfg.squeezing == doctest::Approx(0.1));
    CHECK(cfg.subtraction_detector.dark_prob == doctest::Approx(0.0025));
    CHECK(cfg.subtraction_detector.efficiency == doctest::Approx(1.0));
    CHECK(cfg.samples_per_phase == 4000);
    CHECK(cfg.phases.size() == 12);
    CHECK(cfg.phases[1] == doctest::Approx(std::numbers::pi / 12));
    CHECK(cfg.cutoff == 5);
}

TEST_CASE("comments and blank lines are ignored") {
    const ExperimentConfig cfg = parse_config(
        "# a comment\n"
        "\n"
        "squeezing = 0.15   # trailing comment\n");
    CHECK(cfg.squeezing == doctest::Approx(0.15));
}

TEST_CASE("out-of-range values name the field and line") {
    try {
        parse_config("tap_reflectivity = 1.5\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("tap_reflectivity") != std::string::npos);
        CHECK(msg.find("line 1") != std::string::npos);
    }
}

TEST_CASE("unknown keys are rejected with their line") {
    try {
        parse_config("squeezing = 0.1\nfoo = 1\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("unknown key 'foo'") != std::string::npos);
        CHECK(msg.find("line 2") != std::string::npos);
    }
}

TEST_CASE("malformed lines are rejected") {
    CHECK_THROWS_AS(parse_config("squeezing 0.1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("squeezing = \n"), ConfigError);
    CHECK_THROWS_AS(parse_config("squeezing = abc\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("split_mu = (0.1\n"), ConfigError);
}

TEST_CASE("splitter normalization is enforced across fields") {
    CHECK_THROWS_AS(parse_config("split_mu = 0.9\nsplit_lambda = 0.9\n"), ConfigError);
    const ExperimentConfig ok = parse_config("split_mu = (0.6,0)\nsplit_lambda = (0,0.8)\n");
    CHECK(std::abs(ok.split_lambda - cplx(0.0, 0.8)) < 1e-12);
}

TEST_CASE("phases list") {
    const ExperimentConfig cfg = parse_config("phases = 0, 0.5, 1.0, 2.5\n");
    REQUIRE(cfg.phases.size() == 4);
    CHECK(cfg.phases[3] == doctest::Approx(2.5));
    CHECK_THROWS_AS(parse_config("phases = 0, 3.2\n"), ConfigError); // outside [0, pi)
}

TEST_CASE("serialize then parse reproduces the config exactly") {
    ExperimentConfig cfg;
    cfg.squeezing = 0.123456789012345;
    cfg.herald_detector = DetectorModel{0.77, 0.001, true};
    cfg.subtraction_detector = DetectorModel{0.65, 0.0025, false};
    cfg.tap_reflectivity = 0.0625;
    cfg.split_mu = cplx(0.6, 0.36);
    cfg.split_lambda = cplx(-0.48, 0.53665631459994954);
    const double s = std::norm(cfg.split_mu) + std::norm(cfg.split_lambda);
    cfg.split_mu /= std::sqrt(s);
    cfg.split_lambda /= std::sqrt(s);
    cfg.detection_efficiency = 0.531;
    cfg.samples_per_phase = 123;
    cfg.phases = {0.0, 1.25, 3.0};
    cfg.cutoff = 7;
    cfg.seed = 987654321;

    const ExperimentConfig back = parse_config(serialize_config(cfg));
    CHECK(back.squeezing == cfg.squeezing);
    CHECK(back.herald_detector.efficiency == cfg.herald_detector.efficiency);
    CHECK(back.herald_detector.dark_prob == cfg.herald_detector.dark_prob);
    CHECK(back.herald_detector.number_resolving == cfg.herald_detector.number_resolving);
    CHECK(back.subtraction_detector.efficiency == cfg.subtraction_detector.efficiency);
    CHECK(back.subtraction_detector.dark_prob == cfg.subtraction_detector.dark_prob);
    CHECK(back.tap_reflectivity == cfg.tap_reflectivity);
    CHECK(back.split_mu == cfg.split_mu);
    CHECK(back.split_lambda == cfg.split_lambda);
    CHECK(back.detection_efficiency == cfg.detection_efficiency);
    CHECK(back.samples_per_phase == cfg.samples_per_phase);
    CHECK(back.phases == cfg.phases);
    CHECK(back.cutoff == cfg.cutoff);
    CHECK(back.seed == cfg.seed);

    // serializing the reparsed config is byte-identical
    CHECK(serialize_config(back) == serialize_config(cfg));
}

TEST_SUITE_END();
