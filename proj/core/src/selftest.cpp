#include "focksim/selftest.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

#include "focksim/scenarios.hpp"

namespace focksim {

namespace {

struct Harness {
    std::ostream& out;
    int failures = 0;

    void check(const char* name, bool ok, double measure, double bound) {
        out << (ok ? "ok   " : "FAIL ") << name << "  (" << measure << " vs bound " << bound
            << ")\n";
        if (!ok) ++failures;
    }
};

// Random state restricted to total occupation <= cutoff, the sector on which
// beamsplitters act without leakage.
PureState random_state(const ModeSet& ms, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    Eigen::VectorXcd v(ms.dim());
    for (Eigen::Index i = 0; i < ms.dim(); ++i) {
        int total = 0;
        for (int m = 0; m < ms.mode_count(); ++m) total += ms.occupation(i, m);
        v(i) = total <= ms.cutoff() ? cplx(gauss(rng), gauss(rng)) : cplx(0.0);
    }
    v /= v.norm();
    return PureState(ms, std::move(v), 1.0);
}

BeamSplitter random_splitter(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double theta = 0.15 + 1.27 * uni(rng); // keep both coefficients nonvanishing
    const double pa = 2.0 * std::numbers::pi * uni(rng);
    const double pb = 2.0 * std::numbers::pi * uni(rng);
    return BeamSplitter(std::polar(std::cos(theta), pa), std::polar(std::sin(theta), pb));
}

} // namespace

int run_selftest(std::ostream& out) {
    Harness h{out};
    std::mt19937_64 rng(0xf0c5);

    { // ladder algebra on every basis state below the cutoff
        const ModeSet ms(1, 6);
        double worst = 0.0;
        for (int n = 0; n < 6; ++n) {
            const PureState basis = fock_state(ms, {n});
            const PureState down_up = apply_creation(apply_annihilation(basis, 0), 0).state;
            const PureState up_down = apply_annihilation(apply_creation(basis, 0).state, 0);
            worst = std::max(worst, (up_down.amplitudes() - double(n + 1) * basis.amplitudes()).norm());
            worst = std::max(worst, (down_up.amplitudes() - double(n) * basis.amplitudes()).norm());
        }
        h.check("ladder algebra a ad = n+1, ad a = n", worst < 1e-12, worst, 1e-12);
    }

    { // local annihilation equals the scaled global operator across a splitter
        const ModeSet one(1, 4);
        double worst = 0.0;
        for (int rep = 0; rep < 10; ++rep) {
            const PureState psi = random_state(one, rng);
            const BeamSplitter bs = random_splitter(rng);
            const PureState wide = embed(psi, 1);
            const PureState split = apply_beamsplitter(wide, 0, 1, bs).state;
            const PureState lhs = apply_annihilation(split, 0);
            const PureState rhs =
                apply_beamsplitter(embed(apply_annihilation(psi, 0), 1), 0, 1, bs).state;
            worst = std::max(worst,
                             (lhs.amplitudes() - std::conj(bs.mu()) * rhs.amplitudes()).norm());
        }
        h.check("splitter locality identity", worst < 1e-12, worst, 1e-12);
    }

    { // unitarity and inverse round trip
        const ModeSet two(2, 5);
        double worst = 0.0;
        for (int rep = 0; rep < 6; ++rep) {
            const PureState psi = random_state(two, rng);
            const BeamSplitter bs = random_splitter(rng);
            const PureState fwd = apply_beamsplitter(psi, 0, 1, bs).state;
            worst = std::max(worst, std::abs(fwd.squared_norm() - 1.0));
            const PureState back = apply_beamsplitter(fwd, 0, 1, bs.inverse()).state;
            worst = std::max(worst, (back.amplitudes() - psi.amplitudes()).norm());
        }
        h.check("splitter unitarity and inverse", worst < 1e-12, worst, 1e-12);
    }

    { // two-photon interference on a balanced splitter
        const ModeSet two(2, 2);
        const PureState in = fock_state(two, {1, 1});
        const PureState hom = apply_beamsplitter(in, 0, 1, BeamSplitter::balanced()).state;
        Eigen::VectorXcd expect = Eigen::VectorXcd::Zero(two.dim());
        expect(two.index_of(std::vector<int>{2, 0})) = 1.0 / std::sqrt(2.0);
        expect(two.index_of(std::vector<int>{0, 2})) = -1.0 / std::sqrt(2.0);
        const double err = (hom.amplitudes() - expect).norm();
        h.check("two-photon interference amplitudes", err < 1e-12, err, 1e-12);
    }

    { // click POVM completeness and positivity
        double worst = 0.0;
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        for (int rep = 0; rep < 5; ++rep) {
            const DetectorModel det{uni(rng), 0.3 * uni(rng), false};
            const ClickPovm povm = click_povm(det, 7);
            worst = std::max(worst, (povm.no_click + povm.click -
                                     Eigen::MatrixXcd::Identity(7, 7)).cwiseAbs().maxCoeff());
            worst = std::max(worst, -povm.no_click.diagonal().real().minCoeff());
            worst = std::max(worst, -povm.click.diagonal().real().minCoeff());
        }
        h.check("click POVM completeness", worst < 1e-12, worst, 1e-12);
    }

    { // attenuation composes multiplicatively in the transmitted fraction
        const ModeSet one(1, 5);
        const MixedState rho = MixedState::from_pure(random_state(one, rng));
        const MixedState two_step = attenuate(attenuate(rho, 0, {0.3}), 0, {0.25});
        const MixedState one_step = attenuate(rho, 0, {1.0 - 0.7 * 0.75});
        const double err = (two_step.matrix() - one_step.matrix()).cwiseAbs().maxCoeff();
        h.check("attenuation composition", err < 1e-10, err, 1e-10);
    }

    { // the unconditional tap apparatus preserves the trace
        const ModeSet one(1, 4);
        double worst = 0.0;
        for (int rep = 0; rep < 5; ++rep) {
            const MixedState rho = MixedState::from_pure(random_state(one, rng));
            const MixedState out = unconditional_map(rho, 0, 0.06, DetectorModel{});
            worst = std::max(worst, std::abs(out.trace() - rho.trace()));
        }
        h.check("unconditional map trace preservation", worst < 1e-12, worst, 1e-12);
    }

    { // mode splitting conserves the photon budget
        const ModeSet one(1, 3);
        const PureState in = fock_state(one, {3});
        const std::vector<cplx> c{0.5, cplx(0.0, 0.5), -0.5, cplx(0.5, 0.0)};
        const PureState beam = split_mode(in, c).state;
        double total = 0.0;
        for (int k = 0; k < 4; ++k) total += mean_photon_number(beam, k);
        const double err = std::abs(total - 3.0);
        h.check("split photon bookkeeping", err < 1e-12, err, 1e-12);
    }

    { // quadrature marginals normalize on the default grid
        double worst = 0.0;
        const ModeSet one(1, 4);
        for (int n = 0; n <= 2; ++n) {
            const MixedState rho = MixedState::from_pure(fock_state(one, {n}));
            std::vector<double> grid;
            for (double x = -6.0; x <= 6.0 + 1e-12; x += 0.01) grid.push_back(x);
            const std::vector<double> pdf = marginal_distribution(rho, 0.3, grid);
            double integral = 0.0;
            for (size_t g = 1; g < grid.size(); ++g)
                integral += 0.5 * (pdf[g - 1] + pdf[g]) * (grid[g] - grid[g - 1]);
            worst = std::max(worst, std::abs(integral - 1.0));
        }
        h.check("marginal normalization", worst < 1e-6, worst, 1e-6);
    }

    { // subtraction at a vanishing tap approaches ideal annihilation
        const ModeSet one(1, 3);
        const MixedState rho = MixedState::from_pure(fock_state(one, {2}));
        auto [ideal, w] = exact_annihilation(rho, 0);
        (void)w;
        auto [tapped, p] = physical_subtraction(rho, 0, 0.01, DetectorModel{});
        (void)p;
        const double dist = trace_distance(tapped, ideal);
        h.check("tap-limit convergence (tap 0.01)", dist < 0.01, dist, 0.01);
    }

    out << (h.failures == 0 ? "selftest passed" : "selftest FAILED") << "\n";
    return h.failures;
}

} // namespace focksim
