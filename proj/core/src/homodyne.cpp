#include "focksim/homodyne.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace focksim {

namespace {

void check_single_mode_unit(const MixedState& rho, const char* who) {
    if (rho.modes().mode_count() != 1)
        throw std::invalid_argument(std::string(who) + ": single-mode state required");
    if (std::abs(rho.trace() - 1.0) > 1e-8)
        throw std::invalid_argument(std::string(who) + ": state must have unit trace");
}

void append_g17(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

} // namespace

double quadrature_wavefunction(int n, double x) {
    if (n < 0) throw std::invalid_argument("quadrature_wavefunction: n must be >= 0");
    return quadrature_wavefunctions(n, x).back();
}

std::vector<double> quadrature_wavefunctions(int n_max, double x) {
    std::vector<double> psi(static_cast<size_t>(n_max) + 1);
    psi[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
    if (n_max >= 1) psi[1] = std::sqrt(2.0) * x * psi[0];
    for (int n = 1; n < n_max; ++n)
        psi[size_t(n) + 1] =
            (std::sqrt(2.0) * x * psi[size_t(n)] - std::sqrt(double(n)) * psi[size_t(n) - 1]) /
            std::sqrt(double(n) + 1.0);
    return psi;
}

std::vector<double> marginal_distribution(const MixedState& rho, double phase,
                                          std::span<const double> grid) {
    check_single_mode_unit(rho, "marginal_distribution");
    const int cut = rho.modes().cutoff();
    Eigen::VectorXcd h(cut + 1);
    std::vector<double> out(grid.size());
    for (size_t g = 0; g < grid.size(); ++g) {
        const std::vector<double> psi = quadrature_wavefunctions(cut, grid[g]);
        for (int n = 0; n <= cut; ++n)
            h(n) = psi[size_t(n)] * std::polar(1.0, -double(n) * phase);
        out[g] = (h.adjoint() * rho.matrix() * h)(0).real();
    }
    return out;
}

QuadratureDataset sample_quadratures(const MixedState& rho, std::span<const double> phases,
                                     int count_per_phase, std::uint64_t seed,
                                     std::string source_label) {
    check_single_mode_unit(rho, "sample_quadratures");
    if (count_per_phase < 1)
        throw std::invalid_argument("sample_quadratures: count_per_phase must be >= 1");
    for (double th : phases)
        if (th < 0.0 || th >= std::numbers::pi)
            throw std::invalid_argument("sample_quadratures: phase outside [0, pi)");

    const auto grid_size = static_cast<size_t>(std::lround((kQuadMax - kQuadMin) / kQuadStep)) + 1;
    std::vector<double> grid(grid_size);
    for (size_t g = 0; g < grid_size; ++g) grid[g] = kQuadMin + kQuadStep * double(g);

    std::mt19937_64 rng(seed);
    auto uniform = [&rng]() { return double(rng() >> 11) * 0x1.0p-53; };

    QuadratureDataset ds;
    ds.seed = seed;
    ds.source_label = std::move(source_label);
    ds.samples.reserve(phases.size() * static_cast<size_t>(count_per_phase));

    std::vector<double> cdf(grid_size);
    for (double th : phases) {
        const std::vector<double> pdf = marginal_distribution(rho, th, grid);
        cdf[0] = 0.0;
        for (size_t g = 1; g < grid_size; ++g)
            cdf[g] = cdf[g - 1] + 0.5 * (pdf[g - 1] + pdf[g]) * kQuadStep;
        const double total = cdf.back();
        for (int k = 0; k < count_per_phase; ++k) {
            const double u = uniform() * total;
            const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
            const size_t hi = std::min(grid_size - 1, size_t(it - cdf.begin()));
            const size_t lo = hi - 1;
            const double span = cdf[hi] - cdf[lo];
            const double frac = span > 0.0 ? (u - cdf[lo]) / span : 0.5;
            ds.samples.push_back({th, grid[lo] + frac * kQuadStep});
        }
    }
    return ds;
}

void QuadratureDataset::save(std::ostream& os) const {
    std::string line = "# seed=" + std::to_string(seed) + " source=" + source_label + "\n";
    os << line;
    for (const QuadratureSample& s : samples) {
        std::string row;
        append_g17(row, s.phase);
        row += ',';
        append_g17(row, s.value);
        row += '\n';
        os << row;
    }
}

QuadratureDataset QuadratureDataset::load(std::istream& is) {
    QuadratureDataset ds;
    std::string line;
    if (!std::getline(is, line) || line.rfind("# seed=", 0) != 0)
        throw DataError("QuadratureDataset: missing '# seed=... source=...' header");
    const size_t src = line.find(" source=");
    if (src == std::string::npos) throw DataError("QuadratureDataset: header lacks source label");
    try {
        ds.seed = std::stoull(line.substr(7, src - 7));
    } catch (const std::exception&) {
        throw DataError("QuadratureDataset: unparsable seed in header");
    }
    ds.source_label = line.substr(src + 8);
    size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw DataError("QuadratureDataset: line " + std::to_string(lineno) + " lacks a comma");
        try {
            const double phase = std::stod(line.substr(0, comma));
            const double value = std::stod(line.substr(comma + 1));
            ds.samples.push_back({phase, value});
        } catch (const std::exception&) {
            throw DataError("QuadratureDataset: unparsable number on line " + std::to_string(lineno));
        }
    }
    return ds;
}

} // namespace focksim
