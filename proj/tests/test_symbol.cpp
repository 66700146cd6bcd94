#include <doctest.h>

#include "hypercone/presets.hpp"
#include "hypercone/symbol.hpp"
#include "oracles.hpp"

using namespace hypercone;

TEST_SUITE("symbol") {

TEST_CASE("symbol assembly against direct summation") {
    CoefficientFamily flip = CoefficientFamily::constant({presets::base_symmetric_wave()}, 1.0);
    std::vector<double> zero_xi{0.0};
    CHECK(op_norm(symbol_at(flip, 0.5, zero_xi)) == 0.0);

    std::vector<double> xi3{3.0};
    Mat expected = Mat::real({{0, 3}, {3, 0}});
    CHECK(op_norm(symbol_at(flip, 0.5, xi3) - expected) < 1e-15);

    std::mt19937_64 rng(17);
    Mat b1 = oracles::random_mat(3, rng, true);
    Mat b2 = oracles::random_mat(3, rng, true);
    CoefficientFamily fam(2, 3, 1.0, CoefficientKind::constant,
                          [b1, b2](double) { return std::vector<Mat>{b1, b2}; });
    std::vector<double> xi{1.0, -2.0};
    Mat direct(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) direct(i, j) = b1(i, j) * 1.0 + b2(i, j) * (-2.0);
    CHECK(op_norm(symbol_at(fam, 0.2, xi) - direct) < 1e-14);

    CHECK_THROWS_AS(symbol_at(fam, 2.0, xi), OutOfDomain);
}

TEST_CASE("complex-frequency symbol splits into real and imaginary parts") {
    CoefficientFamily flip = CoefficientFamily::constant({presets::base_symmetric_wave()}, 1.0);

    std::vector<cplx> real_only{cplx(2.0, 0.0)};
    std::vector<double> xi{2.0};
    CHECK(op_norm(symbol_complex(flip, 0.5, real_only) - symbol_at(flip, 0.5, xi)) == 0.0);

    std::vector<cplx> imag_only{cplx(0.0, 1.5)};
    Mat pure = symbol_complex(flip, 0.5, imag_only);
    Mat expected = presets::base_symmetric_wave() * cplx(0.0, 1.5);
    CHECK(op_norm(pure - expected) < 1e-15);

    std::vector<cplx> mixed{cplx(1.0, 1.0)};
    Mat m = symbol_complex(flip, 0.5, mixed);
    Mat want = presets::base_symmetric_wave() * cplx(1.0, 1.0);
    CHECK(op_norm(m - want) < 1e-15);
}

TEST_CASE("positive scaling of xi scales the symbol exactly") {
    std::mt19937_64 rng(29);
    Mat b1 = oracles::random_mat(2, rng, true);
    Mat b2 = oracles::random_mat(2, rng, true);
    CoefficientFamily fam(2, 2, 1.0, CoefficientKind::constant,
                          [b1, b2](double) { return std::vector<Mat>{b1, b2}; });
    std::vector<double> xi{0.37, -1.21};
    std::vector<double> xi2{2.0 * 0.37, 2.0 * -1.21};
    Mat a1 = symbol_at(fam, 0.1, xi) * 2.0;
    Mat a2 = symbol_at(fam, 0.1, xi2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(a1(i, j) == a2(i, j)); // bitwise for factor 2
}

TEST_CASE("classification of the canonical 2x2 families") {
    CoefficientFamily strict = CoefficientFamily::constant({presets::base_symmetric_wave()}, 1.0);
    CHECK(classify(strict).verdict == Hyperbolicity::strictly_hyperbolic);

    CoefficientFamily shear = CoefficientFamily::constant({presets::base_shear()}, 1.0);
    CHECK(classify(shear).verdict == Hyperbolicity::strictly_hyperbolic);

    CoefficientFamily rot =
        CoefficientFamily::constant({Mat::real({{0, -1}, {1, 0}})}, 1.0);
    HyperbolicityClass rc = classify(rot);
    CHECK(rc.verdict == Hyperbolicity::not_hyperbolic);
    CHECK(rc.witness.eigenvalues.size() == 2);

    CoefficientFamily jordan = CoefficientFamily::constant({Mat::real({{0, 1}, {0, 0}})}, 1.0);
    CHECK(classify(jordan).verdict == Hyperbolicity::not_semisimple);

    // equal-speed diagonal family: real, semisimple, multiplicity 2 everywhere
    CoefficientFamily multi = CoefficientFamily::constant({Mat::identity(2)}, 1.0);
    CHECK(classify(multi).verdict == Hyperbolicity::constant_multiplicities);
}

TEST_CASE("classification is invariant under positive sample scaling") {
    CoefficientFamily shear = CoefficientFamily::constant({presets::base_shear()}, 1.0);
    auto samples = default_samples(shear, 4, 2);
    auto scaled = samples;
    for (auto& s : scaled)
        for (double& v : s.xi) v *= 7.25;
    CHECK(classify(shear, samples).verdict == classify(shear, scaled).verdict);
}

TEST_CASE("symmetric families never classify as defective or nonreal") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        int m = 2 + static_cast<int>(rng() % 3);
        Mat b1 = oracles::random_mat(m, rng, true);
        b1 = 0.5 * (b1 + b1.adjoint());
        Mat b2 = oracles::random_mat(m, rng, true);
        b2 = 0.5 * (b2 + b2.adjoint());
        CoefficientFamily fam(2, m, 1.0, CoefficientKind::smooth, [b1, b2](double t) {
            return std::vector<Mat>{b1 * (1.0 + 0.5 * std::sin(t)), b2 * (1.0 + t)};
        });
        HyperbolicityClass hc = classify(fam, default_samples(fam, 6, 8));
        CHECK(hc.verdict != Hyperbolicity::not_hyperbolic);
        CHECK(hc.verdict != Hyperbolicity::not_semisimple);
    }
}

TEST_CASE("classify rejects empty and zero-frequency samples") {
    CoefficientFamily fam = CoefficientFamily::constant({presets::base_symmetric_wave()}, 1.0);
    CHECK_THROWS_AS(classify(fam, {}), Error);
    CHECK_THROWS_AS(classify(fam, {TXiSample{0.5, {0.0}}}), Error);
}

} // TEST_SUITE
