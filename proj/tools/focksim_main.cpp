// focksim command-line front end: configures, runs and serializes the
// photon-subtraction scenarios and the homodyne reconstruction.
//
// Subcommands: vampire, shadow, tomo, prep, selftest.
// Reports are JSON payloads; the run timestamp lives in a separate "meta"
// object so payloads are byte-identical for identical manifest and seed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "focksim/config.hpp"
#include "focksim/selftest.hpp"

namespace fs = std::filesystem;
using focksim::cplx;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
};

focksim::ExperimentConfig load_config(const CommonArgs& args) {
    focksim::ExperimentConfig cfg;
    if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        if (!in) throw focksim::ConfigError("cannot open config file '" + args.config_path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        cfg = focksim::parse_config(ss.str());
    }
    if (args.seed_set) cfg.seed = args.seed;
    return cfg;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
}

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Deterministic payload + separate metadata object.
std::string with_meta(const std::string& payload) {
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(payload);
    j["meta"] = {{"generated_at", timestamp_utc()}, {"generator", "focksim"}};
    return j.dump(2) + "\n";
}

fs::path ensure_out_dir(const CommonArgs& args) {
    fs::path dir(args.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw std::runtime_error("output directory '" + dir.string() + "' is not writable");
    return dir;
}

void print_distribution(const char* head, const std::vector<double>& dist) {
    std::printf("%s", head);
    for (double v : dist) std::printf(" %.4f", v);
    std::printf("\n");
}

int run_vampire(const CommonArgs& args, int target_n, const std::string& mechanism_name) {
    const focksim::ExperimentConfig cfg = load_config(args);
    const fs::path dir = ensure_out_dir(args);
    const focksim::SubtractionMechanism mech = mechanism_name == "exact"
                                                   ? focksim::SubtractionMechanism::exact_ladder
                                                   : focksim::SubtractionMechanism::physical_tap;
    const focksim::VampireReport rep = focksim::vampire_pipeline(cfg, target_n, mech);

    const std::string stem = "vampire_n" + std::to_string(target_n);
    write_file(dir / (stem + "_report.json"), with_meta(serialize_report(rep)));
    for (const focksim::VampireBranch* br : {&rep.conditioned, &rep.unconditioned}) {
        const std::string tag = br == &rep.conditioned ? "conditioned" : "unconditioned";
        write_file(dir / (stem + "_" + tag + "_hist.csv"), br->histogram.to_csv());
        std::ofstream data(dir / (stem + "_" + tag + "_data.csv"), std::ios::binary);
        br->dataset.save(data);
    }

    std::printf("heralded |%d> preparation: p_herald = %.4e\n", target_n, rep.herald_probability);
    std::printf("conditioned branch (p_click = %.4e, fidelity vs |%d> = %.4f):\n",
                rep.conditioned.branch_probability, rep.conditioned.target_fock,
                rep.conditioned.reconstructed_fidelity);
    print_distribution("  reconstructed P(n):", rep.conditioned.reconstructed_distribution);
    std::printf("unconditioned branch (fidelity vs |%d> = %.4f):\n", rep.unconditioned.target_fock,
                rep.unconditioned.reconstructed_fidelity);
    print_distribution("  reconstructed P(n):", rep.unconditioned.reconstructed_distribution);
    std::printf("wrote %s_report.json and per-branch hist/data CSV files to %s\n", stem.c_str(),
                dir.string().c_str());
    return 0;
}

int run_shadow(const CommonArgs& args, int pixels, const std::vector<int>& cloud,
               const std::string& mechanism_name, double gamma, int input_n,
               const std::vector<double>& coeffs_in) {
    std::vector<cplx> coeffs;
    if (coeffs_in.empty()) {
        coeffs.assign(static_cast<size_t>(pixels), cplx(1.0 / std::sqrt(double(pixels)), 0.0));
    } else {
        if (static_cast<int>(coeffs_in.size()) != pixels)
            throw std::runtime_error("--coeffs needs exactly --pixels entries");
        double norm = 0.0;
        for (double c : coeffs_in) norm += c * c;
        if (norm <= 0.0) throw std::runtime_error("--coeffs must not vanish");
        for (double c : coeffs_in) coeffs.emplace_back(c / std::sqrt(norm), 0.0);
    }
    const focksim::ShadowMechanism mech =
        mechanism_name == "attenuate" ? focksim::ShadowMechanism::attenuation(gamma)
                                      : focksim::ShadowMechanism::annihilation();
    const focksim::ShadowReport rep = focksim::shadow_demo(pixels, coeffs, cloud, mech, input_n);

    const fs::path dir = ensure_out_dir(args);
    write_file(dir / "shadow_report.json", with_meta(serialize_report(rep)));
    write_file(dir / "shadow_pixels.csv", rep.pixel_csv());

    std::printf("mechanism: %s, cloud pixels:", mechanism_name.c_str());
    for (int k : cloud) std::printf(" %d", k);
    std::printf("\n");
    print_distribution("input  intensity:", rep.input_intensity);
    print_distribution("output intensity:", rep.output_intensity);
    std::printf("shadow contrast: %.3e  photons %.4f -> %.4f\n", rep.contrast,
                rep.total_photons_in, rep.total_photons_out);
    std::printf("wrote shadow_report.json, shadow_pixels.csv to %s\n", dir.string().c_str());
    return 0;
}

int run_tomo(const CommonArgs& args, const std::string& data_path, double compensation_override) {
    const focksim::ExperimentConfig cfg = load_config(args);
    const fs::path dir = ensure_out_dir(args);
    std::ifstream in(data_path);
    if (!in) throw std::runtime_error("cannot open dataset '" + data_path + "'");
    const focksim::QuadratureDataset ds = focksim::QuadratureDataset::load(in);

    focksim::TomographySettings settings;
    settings.cutoff = cfg.cutoff;
    settings.efficiency_compensation =
        compensation_override > 0.0 ? compensation_override : cfg.detection_efficiency;
    const focksim::TomographyResult res = focksim::maxlik_reconstruct(ds, settings);

    write_file(dir / "tomo_result.json", with_meta(serialize_result(res, settings)));
    std::printf("%zu samples, %d iterations, %s\n", ds.samples.size(), res.iterations_used,
                res.converged ? "converged" : "iteration budget reached");
    print_distribution("reconstructed P(n):", focksim::photon_number_distribution(res));
    std::printf("wrote tomo_result.json to %s\n", dir.string().c_str());
    return 0;
}

int run_prep(const CommonArgs& args, int target_n) {
    const focksim::ExperimentConfig cfg = load_config(args);
    const fs::path dir = ensure_out_dir(args);
    const focksim::PrepReport rep = focksim::prep_report(cfg, target_n);
    write_file(dir / ("prep_n" + std::to_string(target_n) + "_report.json"),
               with_meta(serialize_report(rep)));
    std::printf("herald probability: %.4e, fidelity vs |%d>: %.4f\n", rep.herald_probability,
                target_n, rep.fidelity_target);
    print_distribution("signal P(n):", rep.distribution);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Truncated Fock-space simulator of conditional photon subtraction,\n"
                 "linear optics and homodyne tomography."};
    app.require_subcommand(1);
    app.fallthrough(); // common options may follow the subcommand name

    CommonArgs common;
    app.add_option("--config", common.config_path, "Path to a key = value configuration file");
    app.add_option("--out", common.out_dir, "Output directory (default: current)");
    auto* seed_opt = app.add_option("--seed", common.seed, "Override the configured RNG seed");

    int target_n = 1;
    std::string mechanism = "tap";
    auto* vampire = app.add_subcommand(
        "vampire", "Heralded Fock state, split, photon subtraction on one arm, recombination,"
                   " homodyne reconstruction of both branches");
    vampire->add_option("--n", target_n, "Target Fock state (1 or 2)")->check(CLI::Range(1, 2));
    vampire->add_option("--mechanism", mechanism, "Subtraction mechanism: tap | exact")
        ->check(CLI::IsMember({"tap", "exact"}));

    int pixels = 4;
    std::vector<int> cloud{0, 1};
    std::string shadow_mech = "annihilate";
    double gamma = 0.5;
    int shadow_n = 2;
    std::vector<double> coeffs;
    auto* shadow = app.add_subcommand(
        "shadow", "Fock state over pixel modes; annihilation on a cloud mode casts no shadow,"
                  " attenuation does");
    shadow->add_option("--pixels", pixels, "Number of pixel modes")->check(CLI::Range(2, 6));
    shadow->add_option("--cloud", cloud, "Pixel indices covered by the cloud");
    shadow->add_option("--mechanism", shadow_mech, "annihilate | attenuate")
        ->check(CLI::IsMember({"annihilate", "attenuate"}));
    shadow->add_option("--gamma", gamma, "Attenuation strength in [0, 1]");
    shadow->add_option("--n", shadow_n, "Input Fock state")->check(CLI::Range(1, 4));
    shadow->add_option("--coeffs", coeffs, "Real pixel coefficients (normalized automatically)");

    std::string data_path;
    double compensation = 0.0;
    auto* tomo = app.add_subcommand("tomo", "Maximum-likelihood reconstruction from a dataset file");
    tomo->add_option("--data", data_path, "QuadratureDataset text file")->required();
    tomo->add_option("--compensation", compensation,
                     "Efficiency compensation override (default: detection_efficiency)");

    auto* prep = app.add_subcommand("prep", "Heralded Fock-state preparation only");
    prep->add_option("--n", target_n, "Target Fock state (1 or 2)")->check(CLI::Range(1, 2));

    app.add_subcommand("selftest", "Run the built-in invariant suite");

    CLI11_PARSE(app, argc, argv);
    common.seed_set = seed_opt->count() > 0;

    try {
        if (app.got_subcommand("vampire")) return run_vampire(common, target_n, mechanism);
        if (app.got_subcommand("shadow"))
            return run_shadow(common, pixels, cloud, shadow_mech, gamma, shadow_n, coeffs);
        if (app.got_subcommand("tomo")) return run_tomo(common, data_path, compensation);
        if (app.got_subcommand("prep")) return run_prep(common, target_n);
        return focksim::run_selftest(std::cout) == 0 ? 0 : 1;
    } catch (const focksim::ConfigError& e) {
        std::cerr << "error: config: " << e.what() << "\n";
    } catch (const focksim::DataError& e) {
        std::cerr << "error: data: " << e.what() << "\n";
    } catch (const focksim::EventError& e) {
        std::cerr << "error: event: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return 1;
}
