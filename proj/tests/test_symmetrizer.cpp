#include <doctest.h>

#include <fstream>

#include "hypercone/presets.hpp"
#include "hypercone/symmetrizer.hpp"
#include "oracles.hpp"

using namespace hypercone;

namespace {

CoefficientFamily shear_family(double T = 1.0) {
    return CoefficientFamily::constant({presets::base_shear()}, T);
}

CoefficientFamily wave_family(double T = 1.0) {
    return CoefficientFamily::constant({presets::base_symmetric_wave()}, T);
}

} // namespace

TEST_SUITE("symmetrizer") {

TEST_CASE("build_strict on a symmetric family gives the identity") {
    CoefficientFamily fam = wave_family();
    Symmetrizer s = build_strict(fam);
    CHECK(s.provenance() == Provenance::eigen_built);
    for (double t : {0.0, 0.4, 1.0})
        for (double xi : {1.0, -2.0, 0.25}) {
            std::vector<double> v{xi};
            CHECK(op_norm(s.at(t, v) - Mat::identity(2)) < 1e-10);
        }
    CHECK(s.lambda() == doctest::Approx(0.9).epsilon(1e-6));
    CHECK(s.Lambda() == doctest::Approx(1.1).epsilon(1e-6));
}

TEST_CASE("build_strict on the shear family matches the hand eigendecomposition") {
    // A = [[1,1],[0,-1]]: eigenvectors (1,0) and (-1,2)/sqrt(5) under the
    // sign convention, so (R^-1)^* R^-1 = [[1, 1/2], [1/2, 3/2]]
    Mat hand = Mat::real({{1.0, 0.5}, {0.5, 1.5}});
    CoefficientFamily fam = shear_family();
    Symmetrizer s = build_strict(fam);
    for (double xi : {1.0, -1.0, 3.5}) {
        std::vector<double> v{xi};
        Mat got = s.at(0.5, v);
        CHECK(op_norm(got - hand) < 1e-10);
        Mat sa = got * symbol_at(fam, 0.5, v);
        CHECK(op_norm(sa - sa.adjoint()) < 1e-10);
        CHECK(psd_bounds(got).min_eig > 0.0);
    }
}

TEST_CASE("build_strict output is invariant under eigenvector relabeling") {
    Mat a = presets::base_shear();
    EigenResult er = eig(a);
    Mat rinv = inverse(er.right_vectors);
    Mat s_direct = rinv.adjoint() * rinv;
    // permute the columns and rebuild
    Mat perm(2);
    perm(0, 1) = 1.0;
    perm(1, 0) = 1.0;
    Mat rp = er.right_vectors * perm;
    Mat rpinv = inverse(rp);
    Mat s_perm = rpinv.adjoint() * rpinv;
    CHECK(op_norm(s_direct - s_perm) < 1e-12);
}

TEST_CASE("build_strict rejects non-strict families") {
    CoefficientFamily rot = CoefficientFamily::constant({Mat::real({{0, -1}, {1, 0}})}, 1.0);
    CHECK_THROWS_AS(build_strict(rot), NotStrictlyHyperbolic);
    CoefficientFamily multi = CoefficientFamily::constant({Mat::identity(2)}, 1.0);
    CHECK_THROWS_AS(build_strict(multi), NotStrictlyHyperbolic);
}

TEST_CASE("m = 1 families get the scalar unit symmetrizer") {
    CoefficientFamily scalar(1, 1, 1.0, CoefficientKind::smooth, [](double t) {
        return std::vector<Mat>{Mat::diag({cplx(std::sin(t) + 2.0, 0.0)})};
    });
    Symmetrizer s = build_strict(scalar);
    std::vector<double> v{1.0};
    CHECK(std::abs(s.at(0.3, v)(0, 0) - cplx(1.0, 0.0)) < 1e-12);
}

TEST_CASE("validate passes identity-on-symmetric and flags identity-on-shear") {
    CoefficientFamily waves = wave_family();
    auto samples = default_samples(waves, 8, 2);
    Symmetrizer id = Symmetrizer::identity(2, 1.0);

    ValidationReport good = validate(id, waves, samples);
    CHECK(good.pass);
    CHECK(good.lambda_min == doctest::Approx(1.0));
    CHECK(good.lambda_max == doctest::Approx(1.0));

    CoefficientFamily shear = shear_family();
    ValidationReport bad = validate(id, shear, samples);
    CHECK_FALSE(bad.pass);
    bool sa_failed = false;
    for (const auto& chk : bad.checks)
        if (chk.property == "symmetrized_symbol") sa_failed = !chk.pass;
    CHECK(sa_failed);
    CHECK(bad.max_sa_defect > 0.1);

    // self-consistency: the built symmetrizer validates on its own family
    Symmetrizer built = build_strict(shear);
    ValidationReport self = validate(built, shear, default_samples(shear, 16, 2));
    CHECK(self.pass);
    for (const auto& chk : self.checks) CHECK(chk.violation <= chk.tolerance);
}

TEST_CASE("validate catches a declared-bounds violation") {
    // true eigenvalues of S are {1, 3}; declare Lambda = 2 and watch it fail
    CoefficientFamily waves = wave_family();
    Symmetrizer s = Symmetrizer::from_function(2, 1.0, 1.0, 2.0, [](double, std::span<const double>) {
        return Mat::real({{2, 1}, {1, 2}});
    });
    ValidationReport rep = validate(s, waves, default_samples(waves, 4, 2));
    CHECK_FALSE(rep.pass);
    CHECK(rep.lambda_max == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("adjoint check passes whenever validation passes") {
    CoefficientFamily waves = wave_family();
    CoefficientFamily shear = shear_family();
    auto samples = default_samples(waves, 8, 2);

    ValidationReport a1 = adjoint_check(Symmetrizer::identity(2, 1.0), waves, samples);
    CHECK(a1.pass);

    Symmetrizer built = build_strict(shear);
    ValidationReport a2 = adjoint_check(built, shear, samples);
    CHECK(a2.pass);
    CHECK(a2.checks.front().violation <= 1e-9);

    // independent route: defect of S^-1 A^* computed from the hand formula
    Mat hand = Mat::real({{1.0, 0.5}, {0.5, 1.5}});
    Mat hand_inv = inverse(hand);
    Mat astar = presets::base_shear().adjoint();
    Mat chk = hand_inv * astar;
    CHECK(op_norm(chk - chk.adjoint()) < 1e-10);
}

TEST_CASE("inverse norm stays below 1/lambda on validated symmetrizers") {
    CoefficientFamily shear = shear_family();
    Symmetrizer built = build_strict(shear);
    for (const TXiSample& smp : default_samples(shear, 8, 2)) {
        Mat s = built.at(smp.t, smp.xi);
        CHECK(op_norm(inverse(s)) <= 1.0 / built.lambda() + 1e-9);
    }
}

TEST_CASE("sampled symmetrizers interpolate and bound-estimate") {
    std::vector<double> times{0.0, 0.5, 1.0};
    std::vector<Mat> vals{Mat::identity(2), Mat::diag({cplx(1, 0), cplx(2, 0)}),
                          Mat::identity(2)};
    Symmetrizer s = Symmetrizer::sampled(times, vals, SymmetrizerInterp::linear);
    std::vector<double> xi{1.0};
    CHECK(op_norm(s.at(0.25, xi) - Mat::diag({cplx(1, 0), cplx(1.5, 0)})) < 1e-12);
    CHECK(s.lambda() == doctest::Approx(0.9));
    CHECK(s.Lambda() == doctest::Approx(2.2));

    Symmetrizer sc = Symmetrizer::sampled(times, vals, SymmetrizerInterp::constant_left, 0.9, 4.4);
    CHECK(op_norm(sc.at(0.25, xi) - Mat::identity(2)) == 0.0);
    CHECK(op_norm(sc.at(0.75, xi) - Mat::diag({cplx(1, 0), cplx(2, 0)})) == 0.0);
    CHECK(sc.Lambda() == 4.4);

    CHECK_THROWS_AS(Symmetrizer::sampled({0.0, 1.0}, {Mat(2), Mat(2)}, SymmetrizerInterp::linear),
                    Error); // zero matrix is not positive definite
}

TEST_CASE("symmetrizer JSON files load with strict keys") {
    const char* path = "symm_test.json";
    {
        std::ofstream out(path);
        out << R"({"times": [0.0, 0.5, 1.0],
                   "matrices": [[[1,0],[0,2]], [[2,0],[0,1]], [[2,0],[0,1]]],
                   "interpolation": "constant_left",
                   "lambda": 0.9, "Lambda": 4.4})";
    }
    Symmetrizer s = Symmetrizer::from_json_file(path);
    std::vector<double> xi{1.0};
    CHECK(s.lambda() == 0.9);
    CHECK(op_norm(s.at(0.2, xi) - Mat::diag({cplx(1, 0), cplx(2, 0)})) == 0.0);
    CHECK(op_norm(s.at(0.7, xi) - Mat::diag({cplx(2, 0), cplx(1, 0)})) == 0.0);
    std::remove(path);

    {
        std::ofstream out(path);
        out << R"({"times": [0, 1], "matrices": [[[1]],[[1]]], "extra": 3})";
    }
    CHECK_THROWS_AS(Symmetrizer::from_json_file(path), ConfigError);
    std::remove(path);
}

} // TEST_SUITE
