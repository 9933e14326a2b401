// End-to-end tests of the command-line tool. The binary path arrives through
// the FOCKSIM_CLI_BIN environment variable (set by CTest); the suite is
// skipped when it is absent.
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int status;
    std::string output;
};

const char* cli_bin() { return std::getenv("FOCKSIM_CLI_BIN"); }

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("focksim_cli_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

RunResult run(const std::string& args, const fs::path& capture) {
    const std::string cmd =
        std::string(cli_bin()) + " " + args + " > " + capture.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    std::ifstream in(capture);
    std::ostringstream ss;
    ss << in.rdbuf();
    return {WEXITSTATUS(raw), ss.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// quick config: few phases, few samples, so CLI runs stay fast
void write_quick_config(const fs::path& p, const std::string& extra = {}) {
    std::ofstream out(p);
    out << "samples_per_phase = 400\n"
        << "phases = 0, 0.5235987755982988, 1.0471975511965976, 1.5707963267948966,"
           " 2.0943951023931953, 2.6179938779914944\n"
        << extra;
}

} // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("selftest exits cleanly") {
    if (!cli_bin()) return;
    const fs::path dir = fresh_dir("selftest");
    const RunResult r = run("selftest", dir / "out.txt");
    CHECK(r.status == 0);
    CHECK(r.output.find("selftest passed") != std::string::npos);
}

TEST_CASE("missing config file names the path and fails") {
    if (!cli_bin()) return;
    const fs::path dir = fresh_dir("missing");
    const RunResult r = run("prep --config /no/such/file.cfg", dir / "out.txt");
    CHECK(r.status != 0);
    CHECK(r.output.find("error: config:") != std::string::npos);
    CHECK(r.output.find("/no/such/file.cfg") != std::string::npos);
}

TEST_CASE("config errors carry a line diagnostic") {
    if (!cli_bin()) return;
    const fs::path dir = fresh_dir("badcfg");
    std::ofstream(dir / "bad.cfg") << "tap_reflectivity = 2.0\n";
    const RunResult r = run("prep --config " + (dir / "bad.cfg").string(), dir / "out.txt");
    CHECK(r.status != 0);
    CHECK(r.output.find("error: config: line 1: tap_reflectivity") != std::string::npos);
}

TEST_CASE("unknown subcommand fails") {
    if (!cli_bin()) return;
    const fs::path dir = fresh_dir("unknown");
    const RunResult r = run("frobnicate", dir / "out.txt");
    CHECK(r.status != 0);
}

TEST_CASE("vampire run writes reports, tables and datasets") {
    if (!cli_bin()) return;
    const fs::path dir = fresh_dir("vampire");
    write_quick_config(dir / "quick.cfg");
    const RunResult r = run("vampire --n 1 --config " + (dir / "quick.cfg").string() + " --out " +
                                (dir / "out").string(),
                            dir / "stdout.txt");
    REQUIRE(r.status == 0);
    CHECK(r.output.find("reconstructed P(n):") != std::string::npos);
    CHECK(fs::exists(dir / "out/vampire_n1_report.json"));
    CHECK(fs::exists(dir / "out/vampire_n1_conditioned_hist.csv"));
    CHECK(fs::exists(dir / "out/vampire_n1_unconditioned_hist.csv"));
    CHECK(fs::exists(dir / "out/vampire_n1_conditioned_data.csv"));

    const auto j = nlohmann::json::parse(slurp(dir / "out/vampire_n1_report.json"));
    CHECK(j["conditioned"]["reconstructed_distribution"][0].get<double>() > 0.5);
    CHECK(j.contains("meta"));

    const std::string hist = slurp(dir / "out/vampire_n1_conditioned_hist.csv");
    CHECK(hist.rfind("bin_left,bin_right,count,theory_density\n", 0) == 0);
}

TEST_CASE("identical manifest and seed give byte-identical payloads") {
    if (!cli_bin()) return;
    const fs::path dir = fresh_dir("determinism");
    write_quick_config(dir / "quick.cfg");
    const std::string base = "vampire --n 1 --config " + (dir / "quick.cfg").string() +
                             " --seed 321 --out ";
    REQUIRE(run(base + (dir / "a").string(), dir / "a.txt").status == 0);
    REQUIRE(run(base + (dir / "b").string(), dir / "b.txt").status == 0);
    auto ja = nlohmann::json::parse(slurp(dir / "a/vampire_n1_report.json"));
    auto jb = nlohmann::json::parse(slurp(dir / "b/vampire_n1_report.json"));
    // timestamps live only in the separate meta object
    ja.erase("meta");
    jb.erase("meta");
    CHECK(ja.dump() == jb.dump());
    CHECK(slurp(dir / "a/vampire_n1_conditioned_data.csv") ==
          slurp(dir / "b/vampire_n1_conditioned_data.csv"));
    CHECK(slurp(dir / "a/vampire_n1_conditioned_hist.csv") ==
          slurp(dir / "b/vampire_n1_conditioned_hist.csv"));
}

TEST_CASE("tomo reconstructs a dataset written by vampire") {
    if (!cli_bin()) return;
    const fs::path dir = fresh_dir("tomo");
    write_quick_config(dir / "quick.cfg");
    REQUIRE(run("vampire --n 1 --config " + (dir / "quick.cfg").string() + " --out " +
                    (dir / "out").string(),
                dir / "v.txt")
                .status == 0);
    const RunResult r =
        run("tomo --data " + (dir / "out/vampire_n1_unconditioned_data.csv").string() +
                " --config " + (dir / "quick.cfg").string() + " --out " + (dir / "out").string(),
            dir / "t.txt");
    REQUIRE(r.status == 0);
    CHECK(fs::exists(dir / "out/tomo_result.json"));
    const auto j = nlohmann::json::parse(slurp(dir / "out/tomo_result.json"));
    CHECK(j["photon_number_distribution"][1].get<double>() > 0.5);

    // malformed dataset is a data error
    std::ofstream(dir / "bad.csv") << "not a dataset\n";
    const RunResult bad =
        run("tomo --data " + (dir / "bad.csv").string() + " --out " + (dir / "out").string(),
            dir / "bad.txt");
    CHECK(bad.status != 0);
    CHECK(bad.output.find("error: data:") != std::string::npos);
}

TEST_CASE("shadow subcommand reports contrast") {
    if (!cli_bin()) return;
    const fs::path dir = fresh_dir("shadow");
    const RunResult none = run("shadow --mechanism annihilate --n 2 --out " + (dir / "a").string(),
                               dir / "a.txt");
    REQUIRE(none.status == 0);
    const auto ja = nlohmann::json::parse(slurp(dir / "a/shadow_report.json"));
    CHECK(ja["contrast"].get<double>() < 1e-12);
    CHECK(ja["total_photons_out"].get<double>() == doctest::Approx(1.0));

    const RunResult dim = run("shadow --mechanism attenuate --gamma 0.5 --n 2 --out " +
                                  (dir / "b").string(),
                              dir / "b.txt");
    REQUIRE(dim.status == 0);
    const auto jb = nlohmann::json::parse(slurp(dir / "b/shadow_report.json"));
    CHECK(jb["contrast"].get<double>() > 0.1);
    CHECK(fs::exists(dir / "b/shadow_pixels.csv"));
}

TEST_CASE("prep subcommand prints the heralded distribution") {
    if (!cli_bin()) return;
    const fs::path dir = fresh_dir("prep");
    const RunResult r = run("prep --n 2 --out " + dir.string(), dir / "out.txt");
    REQUIRE(r.status == 0);
    CHECK(r.output.find("herald probability") != std::string::npos);
    CHECK(fs::exists(dir / "prep_n2_report.json"));
}

TEST_SUITE_END();
