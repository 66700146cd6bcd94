#include <doctest.h>

#include "hypercone/mollify.hpp"
#include "hypercone/presets.hpp"
#include "hypercone/quadrature.hpp"
#include "oracles.hpp"

using namespace hypercone;

namespace {

Symmetrizer linear_symmetrizer() {
    // S(t) = (1 + t) Id on [0, 1]
    return Symmetrizer::sampled({0.0, 1.0}, {Mat::identity(2), Mat::identity(2) * 2.0},
                                SymmetrizerInterp::linear);
}

Symmetrizer jump_symmetrizer() {
    // one interior jump diag(1,2) -> diag(2,1); Lambda declared at 4.4 so the
    // uniform bound sqrt(Lambda) dominates |S|
    return Symmetrizer::sampled({0.0, 0.5, 1.0},
                                {Mat::diag({cplx(1, 0), cplx(2, 0)}),
                                 Mat::diag({cplx(2, 0), cplx(1, 0)}),
                                 Mat::diag({cplx(2, 0), cplx(1, 0)})},
                                SymmetrizerInterp::constant_left, 0.9, 4.4);
}

const std::vector<double> xi1{1.0};

} // namespace

TEST_SUITE("mollify") {

TEST_CASE("kernel is an even unit-mass bump with the expected derivative norm") {
    MollifierKernel k = MollifierKernel::standard_bump();
    CHECK(adaptive_simpson([&k](double t) { return k(t); }, -1.0, 1.0, 1e-13, 40) ==
          doctest::Approx(1.0).epsilon(1e-10));
    for (double t : {0.1, 0.45, 0.99}) {
        CHECK(k(t) == doctest::Approx(k(-t)).epsilon(1e-14));
        CHECK(k(t) >= 0.0);
        CHECK(k(t) <= 1.0);
    }
    CHECK(k(1.0) == 0.0);
    CHECK(k(-1.2) == 0.0);
    // rho rises on [-1,0] and falls on [0,1], so |rho'| integrates to 2 rho(0)
    CHECK(k.l1_drho() == doctest::Approx(2.0 * k(0.0)).epsilon(1e-8));
    CHECK(k.l1_rho() == 1.0);

    double mass = 0.0;
    for (double w : k.mass_weights()) mass += w;
    CHECK(mass == 1.0); // exact by normalization
    double dmass = 0.0;
    for (double w : k.deriv_weights()) dmass += w;
    CHECK(std::abs(dmass) < 1e-15);
}

TEST_CASE("constant extension clamps in time and keeps the bounds") {
    Symmetrizer s = linear_symmetrizer();
    auto ext = extend(s);
    CHECK(op_norm(ext(-1.0, xi1) - s.at(0.0, xi1)) == 0.0);
    CHECK(op_norm(ext(0.37, xi1) - s.at(0.37, xi1)) == 0.0);
    Mat far = ext(6.0, xi1);
    PsdBounds b = psd_bounds(far);
    CHECK(b.min_eig >= s.lambda());
    CHECK(b.max_eig <= s.Lambda());
}

TEST_CASE("mollifying a constant symmetrizer is exact") {
    Symmetrizer s = Symmetrizer::identity(3, 1.0);
    MollifiedSymmetrizer ms = mollify(s, MollifierKernel::standard_bump(), 0.3);
    for (double t : {0.0, 0.2, 0.9, 1.0}) {
        CHECK(op_norm(ms.at(t, xi1) - Mat::identity(3)) < 1e-10);
        CHECK(op_norm(ms.dt_at(t, xi1)) < 1e-10);
    }
    CHECK_THROWS_AS(mollify(s, MollifierKernel::standard_bump(), 0.0), BadEpsilon);
    CHECK_THROWS_AS(mollify(s, MollifierKernel::standard_bump(), 1.5), BadEpsilon);
    CHECK_THROWS_AS(ms.at(2.0, 0.5, xi1), BadEpsilon);
}

TEST_CASE("odd-moment cancellation keeps linear-in-t symmetrizers fixed") {
    Symmetrizer s = linear_symmetrizer();
    MollifiedSymmetrizer ms = mollify(s, MollifierKernel::standard_bump(), 0.2);
    // interior points at distance > eps from both ends
    for (double t : {0.3, 0.5, 0.7}) {
        Mat expected = Mat::identity(2) * (1.0 + t);
        CHECK(op_norm(ms.at(t, xi1) - expected) < 1e-10);
        CHECK(op_norm(ms.dt_at(t, xi1) - Mat::identity(2)) < 1e-8);
    }
}

TEST_CASE("kernel-derivative route matches centered differences") {
    CoefficientFamily fam = CoefficientFamily::smooth_oscillatory(
        {presets::base_shear()}, 1.0, 2.0 * M_PI);
    Symmetrizer s = build_strict(fam);
    MollifiedSymmetrizer ms = mollify(s, MollifierKernel::standard_bump(), 0.15);
    double delta = 1e-5;
    for (double t : {0.2, 0.5, 0.85}) {
        Mat d = ms.dt_at(t, xi1);
        Mat fd = (ms.at(t + delta, xi1) - ms.at(t - delta, xi1)) * (0.5 / delta);
        double tol = std::max(1e-6, 1e-4 * op_norm(d));
        CHECK(op_norm(d - fd) <= tol + 1e-4 * delta); // FD truncation floor
    }
}

TEST_CASE("mollified bounds hold at random probes for every preset") {
    std::vector<Symmetrizer> presets_list;
    presets_list.push_back(Symmetrizer::identity(2, 1.0));
    presets_list.push_back(linear_symmetrizer());
    presets_list.push_back(jump_symmetrizer());
    presets_list.push_back(build_strict(
        CoefficientFamily::smooth_oscillatory({presets::base_shear()}, 1.0, 2.0 * M_PI)));

    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> ut(0.0, 1.0);
    std::uniform_real_distribution<double> ue(0.02, 0.5);
    std::uniform_real_distribution<double> ux(0.2, 3.0);
    for (auto& s : presets_list) {
        MollifiedSymmetrizer ms = mollify(s, MollifierKernel::standard_bump(), 0.2);
        double slack = 1e-9 * std::max(1.0, s.Lambda());
        // 250 probes per preset, 1e3 overall
        for (int k = 0; k < 250; ++k) {
            double t = ut(rng), eps = ue(rng);
            std::vector<double> xi{ux(rng) * (k % 2 ? 1.0 : -1.0)};
            PsdBounds b = psd_bounds(ms.at(eps, t, xi), 1e-8);
            CHECK(b.min_eig >= s.lambda() - slack);
            CHECK(b.max_eig <= s.Lambda() + slack);
        }
    }
}

TEST_CASE("omega_S closed forms and brute-force cross-check") {
    Symmetrizer id = Symmetrizer::identity(2, 1.0);
    CHECK(omega_S(id, xi1, 0.3) == doctest::Approx(0.0));

    // S = (1+t) Id: omega(sigma) = sup_tau tau (1 - sigma) = sigma (1 - sigma)
    Symmetrizer lin = linear_symmetrizer();
    for (double sigma : {0.1, 0.25, 0.4})
        CHECK(omega_S(lin, xi1, sigma) ==
              doctest::Approx(sigma * (1.0 - sigma)).epsilon(1e-6));

    // monotone S: the sup sits at tau = sigma; dense tau grid agrees
    double sigma = 0.2;
    double dense = oracles::omega_bruteforce(
        [&lin](double t) { return lin.at(std::clamp(t, 0.0, 1.0), xi1); }, 1.0, sigma, 1000, 512);
    CHECK(omega_S(lin, xi1, sigma) == doctest::Approx(dense).epsilon(1e-6));

    CHECK_THROWS_AS(omega_S(lin, xi1, 0.0), OutOfDomain);
    CHECK_THROWS_AS(omega_S(lin, xi1, 1.0), OutOfDomain);
}

TEST_CASE("mu_S diagnostic averages the norm") {
    Symmetrizer lin = linear_symmetrizer();
    // |S(t)| = 1 + t, mean over [0,1] is 1.5
    CHECK(mu_S(lin, xi1) == doctest::Approx(1.5).epsilon(1e-6));
}

TEST_CASE("lemma bounds: constant, linear, and jump symmetrizers") {
    Symmetrizer id = Symmetrizer::identity(2, 1.0);
    MollifiedSymmetrizer mid = mollify(id, MollifierKernel::standard_bump(), 0.1);
    MollifyBoundsReport r0 = mollify_bounds_report(mid, xi1, 0.1);
    CHECK(r0.lhs1 == doctest::Approx(0.0));
    CHECK(r0.lhs2 == doctest::Approx(0.0));
    CHECK(r0.ratio1 < 1e-12);
    CHECK(r0.ratio2 < 1e-12);

    Symmetrizer lin = linear_symmetrizer();
    MollifiedSymmetrizer mlin = mollify(lin, MollifierKernel::standard_bump(), 0.1);
    MollifyBoundsReport r1 = mollify_bounds_report(mlin, xi1, 0.1);
    CHECK(r1.ratio1 <= 1.0);
    CHECK(r1.ratio2 <= 1.0);
    CHECK(r1.omega == doctest::Approx(0.1 * 0.9).epsilon(1e-6));

    Symmetrizer jump = jump_symmetrizer();
    MollifiedSymmetrizer mj = mollify(jump, MollifierKernel::standard_bump(), 0.1);
    double prev_lhs2 = 0.0;
    for (double eps : {0.2, 0.1, 0.05}) {
        MollifyBoundsReport r = mollify_bounds_report(mj, xi1, eps);
        CHECK(r.ratio1 <= 1.0);
        CHECK(r.ratio2 <= 1.0);
        // the dt integral stays of the order of the jump size as eps -> 0
        CHECK(r.lhs2 > 0.5);
        CHECK(r.lhs2 < 2.0);
        if (prev_lhs2 > 0.0) CHECK(r.lhs2 == doctest::Approx(prev_lhs2).epsilon(0.05));
        prev_lhs2 = r.lhs2;
        CHECK(r.shift_ratio <= 1.0 + 1e-9);
    }
}

TEST_CASE("mollification gap shrinks as eps halves on continuous presets") {
    std::vector<Symmetrizer> continuous;
    continuous.push_back(linear_symmetrizer());
    continuous.push_back(build_strict(
        CoefficientFamily::smooth_oscillatory({presets::base_shear()}, 1.0, 2.0 * M_PI)));
    continuous.push_back(build_strict(
        CoefficientFamily::hoelder({presets::base_shear()}, 1.0, 0.5, 0.5, 0.05)));
    for (auto& s : continuous) {
        MollifiedSymmetrizer ms = mollify(s, MollifierKernel::standard_bump(), 0.4);
        double prev = -1.0;
        for (double eps : {0.4, 0.2, 0.1, 0.05}) {
            MollifyBoundsReport r = mollify_bounds_report(ms, xi1, eps);
            if (prev >= 0.0) CHECK(r.lhs1 <= 1.05 * prev + 1e-15);
            prev = r.lhs1;
        }
    }
}

TEST_CASE("lemma ratios stay below one on random sampled symmetrizers") {
    std::mt19937_64 rng(211);
    std::uniform_real_distribution<double> ueps(0.05, 0.45);
    for (int inst = 0; inst < 100; ++inst) {
        int nodes = 2 + static_cast<int>(rng() % 4);
        std::vector<double> times;
        for (int i = 0; i < nodes; ++i) times.push_back(static_cast<double>(i) / (nodes - 1));
        std::vector<Mat> vals;
        for (int i = 0; i < nodes; ++i) vals.push_back(oracles::random_spd(2, rng, 0.5, 2.0));
        bool jumpy = (inst % 3 == 0);
        // Lambda >= |S|^2 keeps the sqrt(Lambda) uniform bound valid
        Symmetrizer s = Symmetrizer::sampled(
            times, vals, jumpy ? SymmetrizerInterp::constant_left : SymmetrizerInterp::linear,
            0.45, 4.5);
        MollifiedSymmetrizer ms = mollify(s, MollifierKernel::standard_bump(), 0.2);
        ms.set_cache_cells(2048);
        double eps = ueps(rng);
        MollifyBoundsReport r = mollify_bounds_report(ms, xi1, eps);
        CHECK(r.ratio1 <= 1.0);
        CHECK(r.ratio2 <= 1.0);
    }
}

} // TEST_SUITE
