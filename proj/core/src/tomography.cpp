#include "focksim/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "focksim/channels.hpp"

namespace focksim {

namespace {

// 16-point Gauss-Legendre rule on [-1, 1].
constexpr double kGlNode[8] = {
    0.09501250983763744, 0.28160355077925891, 0.45801677765722739, 0.61787624440264375,
    0.75540440835500303, 0.86563120238783174, 0.94457502307323258, 0.98940093499164993};
constexpr double kGlWeight[8] = {
    0.18945061045506850, 0.18260341504492359, 0.16915651939500254, 0.14959598881657673,
    0.12462897125553387, 0.09515851168249278, 0.06225352393864789, 0.02715245941175409};

// Hermite-Gauss products decay like exp(-x^2); beyond this the integrand is
// below double precision for the cutoffs used here.
constexpr double kIntegrationClip = 10.0;
constexpr double kMaxPanel = 0.25;

void check_settings(const TomographySettings& s) {
    if (s.cutoff < 1) throw std::invalid_argument("TomographySettings: cutoff must be >= 1");
    if (s.efficiency_compensation <= 0.0 || s.efficiency_compensation > 1.0)
        throw std::invalid_argument("TomographySettings: efficiency_compensation outside (0, 1]");
    if (s.max_iterations < 0) throw std::invalid_argument("TomographySettings: negative max_iterations");
    if (s.loglik_tolerance <= 0.0)
        throw std::invalid_argument("TomographySettings: loglik_tolerance must be > 0");
    if (s.bin_width <= 0.0) throw std::invalid_argument("TomographySettings: bin_width must be > 0");
}

// integral over [lo, hi] of psi_m psi_n for all m, n <= cutoff
Eigen::MatrixXd overlap_matrix(double lo, double hi, int cutoff) {
    const int dim = cutoff + 1;
    Eigen::MatrixXd o = Eigen::MatrixXd::Zero(dim, dim);
    lo = std::max(lo, -kIntegrationClip);
    hi = std::min(hi, kIntegrationClip);
    if (!(lo < hi)) return o;
    const int panels = std::max(1, int(std::ceil((hi - lo) / kMaxPanel)));
    const double h = (hi - lo) / panels;
    Eigen::VectorXd psi(dim);
    for (int p = 0; p < panels; ++p) {
        const double mid = lo + (p + 0.5) * h;
        for (int g = 0; g < 8; ++g) {
            for (const double sign : {-1.0, 1.0}) {
                const double x = mid + sign * 0.5 * h * kGlNode[g];
                const std::vector<double> values = quadrature_wavefunctions(cutoff, x);
                for (int n = 0; n < dim; ++n) psi(n) = values[size_t(n)];
                o.selfadjointView<Eigen::Lower>().rankUpdate(psi, 0.5 * h * kGlWeight[g]);
            }
        }
    }
    return o.selfadjointView<Eigen::Lower>();
}

struct PovmJob {
    Eigen::MatrixXcd element;
    double weight;
};

std::vector<PovmJob> build_jobs(const BinnedQuadratures& data, const TomographySettings& s) {
    if (data.phases.empty() || data.edges.size() < 2)
        throw std::invalid_argument("maxlik_reconstruct: empty dataset");
    if (data.weights.rows() != Eigen::Index(data.phases.size()) ||
        data.weights.cols() != Eigen::Index(data.edges.size()) - 1)
        throw std::invalid_argument("maxlik_reconstruct: histogram shape mismatch");
    std::vector<PovmJob> jobs;
    for (size_t p = 0; p < data.phases.size(); ++p)
        for (Eigen::Index b = 0; b + 1 < Eigen::Index(data.edges.size()); ++b) {
            const double f = data.weights(Eigen::Index(p), b);
            if (f < 0.0) throw std::invalid_argument("maxlik_reconstruct: negative bin weight");
            if (f == 0.0) continue;
            jobs.push_back({povm_element(data.phases[p], data.edges[size_t(b)],
                                         data.edges[size_t(b) + 1], s),
                            f});
        }
    if (jobs.empty()) throw std::invalid_argument("maxlik_reconstruct: no occupied bins");
    return jobs;
}

} // namespace

BinnedQuadratures bin_dataset(const QuadratureDataset& data, double bin_width, double lo, double hi) {
    if (data.samples.empty()) throw std::invalid_argument("bin_dataset: empty dataset");
    if (bin_width <= 0.0) throw std::invalid_argument("bin_dataset: bin_width must be > 0");
    const int nbins = std::max(1, int(std::lround((hi - lo) / bin_width)));
    BinnedQuadratures out;
    out.edges.resize(size_t(nbins) + 1);
    for (int b = 0; b <= nbins; ++b) out.edges[size_t(b)] = lo + (hi - lo) * double(b) / nbins;

    std::vector<std::vector<double>> rows;
    for (const QuadratureSample& s : data.samples) {
        auto it = std::find(out.phases.begin(), out.phases.end(), s.phase);
        size_t p;
        if (it == out.phases.end()) {
            out.phases.push_back(s.phase);
            rows.emplace_back(size_t(nbins), 0.0);
            p = out.phases.size() - 1;
        } else {
            p = size_t(it - out.phases.begin());
        }
        if (s.value < lo || s.value > hi)
            throw std::invalid_argument("bin_dataset: value " + std::to_string(s.value) +
                                        " outside the representable range");
        int b = int((s.value - lo) / (hi - lo) * nbins);
        b = std::clamp(b, 0, nbins - 1);
        rows[p][size_t(b)] += 1.0;
    }
    out.weights = Eigen::MatrixXd::Zero(Eigen::Index(out.phases.size()), nbins);
    for (size_t p = 0; p < rows.size(); ++p)
        for (int b = 0; b < nbins; ++b) out.weights(Eigen::Index(p), b) = rows[p][size_t(b)];
    return out;
}

Eigen::MatrixXcd povm_element(double phase, double bin_lo, double bin_hi,
                              const TomographySettings& settings) {
    check_settings(settings);
    if (!(bin_lo < bin_hi)) throw std::invalid_argument("povm_element: empty bin interval");
    const int dim = settings.cutoff + 1;
    const Eigen::MatrixXd o = overlap_matrix(bin_lo, bin_hi, settings.cutoff);
    Eigen::VectorXcd d(dim);
    for (int n = 0; n < dim; ++n) d(n) = std::polar(1.0, double(n) * phase);
    Eigen::MatrixXcd pi = d.conjugate().asDiagonal() * o * d.asDiagonal();
    const double eta = settings.efficiency_compensation;
    if (eta >= 1.0) return pi;
    // Adjoint of the loss channel: Pi -> sum_k E_k^T Pi E_k with gamma = 1 - eta.
    Eigen::MatrixXcd smeared = Eigen::MatrixXcd::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) {
        const Eigen::MatrixXd e = attenuation_kraus_element(dim, k, 1.0 - eta);
        smeared += e.transpose() * pi * e;
    }
    return smeared;
}

TomographyResult maxlik_reconstruct(const BinnedQuadratures& data,
                                    const TomographySettings& settings) {
    check_settings(settings);
    const std::vector<PovmJob> jobs = build_jobs(data, settings);
    const int dim = settings.cutoff + 1;

    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(dim, dim) / double(dim);

    std::vector<double> p(jobs.size());
    auto evaluate = [&]() -> long double {
        long double loglik = 0.0L;
        for (size_t j = 0; j < jobs.size(); ++j) {
            p[j] = (jobs[j].element * rho).trace().real();
            if (!(p[j] > 0.0) || p[j] < 1e-300)
                throw DataError("maxlik_reconstruct: occupied bin with vanishing probability "
                                "(ill-posed data)");
            loglik += static_cast<long double>(jobs[j].weight) * std::log(static_cast<long double>(p[j]));
        }
        return loglik;
    };

    TomographyResult result{MixedState(ModeSet(1, settings.cutoff), rho), {}, 0, false};
    if (settings.max_iterations == 0) return result;

    long double loglik_prev = evaluate();
    for (int it = 1; it <= settings.max_iterations; ++it) {
        Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(dim, dim);
        for (size_t j = 0; j < jobs.size(); ++j) r += (jobs[j].weight / p[j]) * jobs[j].element;
        rho = r * rho * r;
        rho = 0.5 * (rho + rho.adjoint().eval());
        rho /= rho.trace().real();

        const long double loglik = evaluate();
        result.loglik_trace.push_back(double(loglik));
        result.iterations_used = it;
        if (double(loglik - loglik_prev) < settings.loglik_tolerance) {
            result.converged = true;
            break;
        }
        loglik_prev = loglik;
    }
    result.rho = MixedState(ModeSet(1, settings.cutoff), rho);
    return result;
}

TomographyResult maxlik_reconstruct(const QuadratureDataset& data,
                                    const TomographySettings& settings) {
    check_settings(settings);
    if (data.samples.empty()) throw std::invalid_argument("maxlik_reconstruct: empty dataset");
    return maxlik_reconstruct(bin_dataset(data, settings.bin_width), settings);
}

std::vector<double> photon_number_distribution(const TomographyResult& result) {
    const Eigen::MatrixXcd& m = result.rho.matrix();
    std::vector<double> diag(size_t(m.rows()));
    double sum = 0.0;
    for (Eigen::Index n = 0; n < m.rows(); ++n) {
        diag[size_t(n)] = std::max(0.0, m(n, n).real());
        sum += diag[size_t(n)];
    }
    if (sum > 0.0)
        for (double& v : diag) v /= sum;
    return diag;
}

std::string serialize_result(const TomographyResult& result, const TomographySettings& settings) {
    nlohmann::ordered_json j;
    j["settings"] = {{"cutoff", settings.cutoff},
                     {"efficiency_compensation", settings.efficiency_compensation},
                     {"max_iterations", settings.max_iterations},
                     {"loglik_tolerance", settings.loglik_tolerance},
                     {"bin_width", settings.bin_width}};
    j["converged"] = result.converged;
    j["iterations_used"] = result.iterations_used;
    j["loglik_trace"] = result.loglik_trace;
    j["photon_number_distribution"] = photon_number_distribution(result);
    nlohmann::ordered_json rho = nlohmann::ordered_json::array();
    const Eigen::MatrixXcd& m = result.rho.matrix();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back({m(r, c).real(), m(r, c).imag()});
        rho.push_back(std::move(row));
    }
    j["rho"] = std::move(rho);
    return j.dump(2);
}

} // namespace focksim
