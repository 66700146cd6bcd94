#include <doctest.h>

#include <fstream>

#include "hypercone/coefficients.hpp"
#include "hypercone/presets.hpp"
#include "oracles.hpp"

using namespace hypercone;

namespace {

CoefficientFamily ramp_family() {
    // A_1(t) = t (scalar), so alpha(t) = t
    return CoefficientFamily(1, 1, 1.0, CoefficientKind::smooth,
                             [](double t) { return std::vector<Mat>{Mat::diag({cplx(t, 0.0)})}; });
}

} // namespace

TEST_SUITE("coefficients") {

TEST_CASE("alpha sums the operator norms") {
    CoefficientFamily zero = CoefficientFamily::constant({Mat(2)}, 1.0);
    CHECK(alpha(zero, 0.3) == 0.0);

    CoefficientFamily flip = CoefficientFamily::constant({presets::base_symmetric_wave()}, 1.0);
    auto [s1, s2] = oracles::svd2x2(0, 1, 1, 0);
    CHECK(alpha(flip, 0.5) == doctest::Approx(s1).epsilon(1e-10));

    CoefficientFamily two(2, 2, 1.0, CoefficientKind::constant, [](double) {
        return std::vector<Mat>{Mat::identity(2), Mat::identity(2) * 2.0};
    });
    CHECK(alpha(two, 0.1) == doctest::Approx(3.0).epsilon(1e-12));

    CHECK_THROWS_AS(alpha(flip, -0.1), OutOfDomain);
    CHECK_THROWS_AS(alpha(flip, 1.1), OutOfDomain);
}

TEST_CASE("alpha_integral on constant and ramp families") {
    CoefficientFamily ones = CoefficientFamily::constant({Mat::identity(1)}, 2.0);
    CHECK(alpha_integral(ones, 2.0) == doctest::Approx(2.0).epsilon(1e-10));

    CHECK(alpha_integral(ramp_family(), 1.0) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK_THROWS_AS(alpha_integral(ones, 2.5), OutOfDomain);
}

TEST_CASE("singular preset integrates and matches the brute-force oracle") {
    CoefficientFamily sing = CoefficientFamily::singular_alpha(1.0);
    double val = alpha_integral(sing, 1.0);
    CHECK(std::isfinite(val));
    // hand primitive: int |t-1/2|^{-1/2}/10 over [0,1] = 0.4 sqrt(1/2)
    CHECK(val == doctest::Approx(0.4 * std::sqrt(0.5)).epsilon(1e-4));
    // the plain midpoint rule carries O(sqrt(cell)) error at the pole, so it
    // is only good to a couple of permille at 1e5 points
    double oracle = oracles::midpoint_bruteforce(
        [](double t) { return 0.1 / std::sqrt(std::abs(t - 0.5)); }, 0.0, 1.0, 100000);
    CHECK(val == doctest::Approx(oracle).epsilon(2e-3));
}

TEST_CASE("preset quadrature matches the declared analytic integral") {
    std::vector<CoefficientFamily> presets_list;
    presets_list.push_back(CoefficientFamily::constant({presets::base_shear()}, 1.0));
    presets_list.push_back(
        CoefficientFamily::smooth_oscillatory({presets::base_symmetric_wave()}, 1.0, 2.0 * M_PI));
    presets_list.push_back(CoefficientFamily::piecewise_constant(
        {presets::base_symmetric_wave()}, 1.0, {1.0, 0.5, 1.5}, {1.0 / 3.0, 2.0 / 3.0}));
    presets_list.push_back(
        CoefficientFamily::hoelder({presets::base_shear()}, 1.0, 0.5, 0.5, 0.05));
    for (const auto& fam : presets_list) {
        for (double t : {0.3, 0.7, 1.0}) {
            auto analytic = fam.analytic_alpha_integral(t);
            REQUIRE(analytic.has_value());
            CHECK(alpha_integral(fam, t) == doctest::Approx(*analytic).epsilon(1e-7));
        }
    }
}

TEST_CASE("alpha scales homogeneously with the coefficients") {
    std::mt19937_64 rng(5);
    Mat b1 = oracles::random_mat(3, rng, true);
    Mat b2 = oracles::random_mat(3, rng, true);
    double s = 2.0; // power of two keeps the scaling exact in floating point
    CoefficientFamily base(2, 3, 1.0, CoefficientKind::smooth, [b1, b2](double t) {
        return std::vector<Mat>{b1 * (1.0 + t), b2 * (2.0 - t)};
    });
    CoefficientFamily scaled(2, 3, 1.0, CoefficientKind::smooth, [b1, b2, s](double t) {
        return std::vector<Mat>{(b1 * (1.0 + t)) * s, (b2 * (2.0 - t)) * s};
    });
    for (double t : {0.0, 0.25, 0.9}) {
        CHECK(alpha(scaled, t) == doctest::Approx(s * alpha(base, t)).epsilon(1e-12));
    }
    CHECK(alpha_integral(scaled, 1.0) ==
          doctest::Approx(s * alpha_integral(base, 1.0)).epsilon(1e-9));
}

TEST_CASE("cone radii follow the definition exactly") {
    CoefficientFamily ones = CoefficientFamily::constant({Mat::identity(1)}, 2.0);
    ConeRadii radii = cone_radii(ones, 0.5, 1.0);
    // alpha = 1, Lambda = 1: r(t) = 0.5 + 2t
    CHECK(radii.forward(1.0) == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(radii.backward(1.0) == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(radii.forward(0.0) == 0.5);
    CHECK(radii.backward(0.0) == 0.5);

    // bit-for-bit identity r - r0 = growth and r + rho = 2 r0
    for (double t : {0.2, 0.7, 1.4}) {
        CHECK(radii.forward(t) - radii.r0() == radii.growth(t));
        CHECK(radii.forward(t) + radii.backward(t) == 2.0 * radii.r0());
    }

    CoefficientFamily zero = CoefficientFamily::constant({Mat(1)}, 2.0);
    ConeRadii still = cone_radii(zero, 0.5, 1.0);
    CHECK(still.forward(1.7) == 0.5);
}

TEST_CASE("sampled families use exact trapezoid of node norms") {
    std::vector<double> times{0.0, 0.5, 1.0};
    std::vector<std::vector<Mat>> nodes{{Mat(1)}, {Mat::identity(1)}, {Mat(1)}};
    CoefficientFamily fam = CoefficientFamily::sampled(1, 1, times, nodes);
    // alpha is the hat function peaking at 1: integral = 1/2
    CHECK(alpha_integral(fam, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(alpha(fam, 0.25) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("csv loading round-trips a sampled family") {
    const char* path = "coeffs_test.csv";
    {
        std::ofstream out(path);
        out << "t,j,row,col,value\n";
        out << "0.0,1,1,1,0.0\n0.0,1,1,2,1.0\n0.0,1,2,1,1.0\n";
        out << "1.0,1,1,2,2.0\n1.0,1,2,1,2.0\n";
    }
    CoefficientFamily fam = CoefficientFamily::from_csv(path, 1, 2);
    CHECK(fam.kind() == CoefficientKind::sampled);
    CHECK(alpha(fam, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(alpha(fam, 1.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(alpha(fam, 0.5) == doctest::Approx(1.5).epsilon(1e-12));
    std::remove(path);

    {
        std::ofstream out(path);
        out << "time,j,row,col,value\n0,1,1,1,1\n";
    }
    CHECK_THROWS_AS(CoefficientFamily::from_csv(path, 1, 2), ConfigError);
    std::remove(path);

    {
        std::ofstream out(path);
        out << "t,j,row,col,value\n1.0,1,1,1,1\n0.5,1,1,1,1\n";
    }
    CHECK_THROWS_AS(CoefficientFamily::from_csv(path, 1, 2), ConfigError);
    std::remove(path);
}

TEST_CASE("quadrature stabilizes under grid refinement for regular kinds") {
    // midpoint refinement on breakpoint-aware cells, so jump locations do
    // not alias against the grid
    auto grid_integral = [](const CoefficientFamily& fam, int cells) {
        std::vector<double> edges{0.0};
        for (double b : fam.time_breakpoints())
            if (b > 0.0 && b < fam.horizon()) edges.push_back(b);
        edges.push_back(fam.horizon());
        std::sort(edges.begin(), edges.end());
        double acc = 0.0;
        for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
            double lo = edges[e], hi = edges[e + 1];
            double h = (hi - lo) / cells;
            for (int i = 0; i < cells; ++i) acc += alpha(fam, lo + h * (i + 0.5)) * h;
        }
        return acc;
    };
    std::vector<CoefficientFamily> fams;
    fams.push_back(CoefficientFamily::smooth_oscillatory({presets::base_shear()}, 1.0, 2.0 * M_PI));
    fams.push_back(CoefficientFamily::piecewise_constant({presets::base_symmetric_wave()}, 1.0,
                                                         {1.0, 0.5, 1.5}, {1.0 / 3.0, 2.0 / 3.0}));
    for (const auto& fam : fams) {
        double coarse = grid_integral(fam, 4096);
        double fine = grid_integral(fam, 8192);
        CHECK(std::abs(fine - coarse) <= 1e-6 * std::max(1.0, std::abs(fine)));
    }
}

TEST_CASE("boundedness detection separates bounded from singular alpha") {
    BoundednessReport smooth = boundedness(
        CoefficientFamily::smooth_oscillatory({presets::base_symmetric_wave()}, 1.0, 2.0 * M_PI));
    CHECK(smooth.bounded);
    CHECK(smooth.C0 == doctest::Approx(1.5).epsilon(1e-3));

    BoundednessReport sing = boundedness(CoefficientFamily::singular_alpha(1.0));
    CHECK_FALSE(sing.bounded);
}

} // TEST_SUITE
