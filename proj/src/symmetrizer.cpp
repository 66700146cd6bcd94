#include "hypercone/symmetrizer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>

namespace hypercone {

using nlohmann::json;

const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::identity: return "identity";
        case Provenance::user_supplied: return "user_supplied";
        case Provenance::eigen_built: return "eigen_built";
    }
    return "?";
}

Symmetrizer::Symmetrizer(int m, double horizon, double lambda, double Lambda, Provenance prov,
                         Evaluator eval)
    : m_(m), T_(horizon), lambda_(lambda), Lambda_(Lambda), prov_(prov), eval_(std::move(eval)) {
    if (horizon <= 0.0) throw Error("Symmetrizer: horizon must be positive");
    if (!(lambda > 0.0) || !(Lambda >= lambda)) throw Error("Symmetrizer: need 0 < lambda <= Lambda");
}

Mat Symmetrizer::at(double t, std::span<const double> xi) const {
    double nx = 0.0;
    for (double v : xi) nx += v * v;
    if (nx == 0.0) throw Error("Symmetrizer: xi must be nonzero");
    return eval_(t, xi);
}

Mat Symmetrizer::at_extended(double t, std::span<const double> xi) const {
    return at(std::clamp(t, 0.0, T_), xi);
}

Symmetrizer Symmetrizer::identity(int m, double horizon) {
    return Symmetrizer(m, horizon, 1.0, 1.0, Provenance::identity,
                       [m](double, std::span<const double>) { return Mat::identity(m); });
}

Symmetrizer Symmetrizer::from_function(int m, double horizon, double lambda, double Lambda,
                                       Evaluator eval) {
    return Symmetrizer(m, horizon, lambda, Lambda, Provenance::user_supplied, std::move(eval));
}

Symmetrizer Symmetrizer::sampled(std::vector<double> times, std::vector<Mat> values,
                                 SymmetrizerInterp interp, std::optional<double> lambda,
                                 std::optional<double> Lambda) {
    if (times.size() < 2 || times.size() != values.size())
        throw Error("Symmetrizer::sampled: need matching times/values, at least two");
    if (times.front() != 0.0) throw Error("Symmetrizer::sampled: first time must be 0");
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
        if (times[i] >= times[i + 1]) throw Error("Symmetrizer::sampled: times must increase");
    int m = values.front().dim();
    double lo = 1e300, hi = -1e300;
    for (const Mat& v : values) {
        if (v.dim() != m) throw Error("Symmetrizer::sampled: inconsistent dimensions");
        PsdBounds b = psd_bounds(v); // also enforces self-adjointness
        lo = std::min(lo, b.min_eig);
        hi = std::max(hi, b.max_eig);
    }
    if (lo <= 0.0) throw Error("Symmetrizer::sampled: nodes must be positive definite");
    double lam = lambda.value_or(0.9 * lo);
    double Lam = Lambda.value_or(1.1 * hi);
    double T = times.back();
    auto tm = std::make_shared<std::vector<double>>(std::move(times));
    auto vals = std::make_shared<std::vector<Mat>>(std::move(values));
    Symmetrizer s(m, T, lam, Lam, Provenance::user_supplied,
                  [tm, vals, interp](double t, std::span<const double>) {
                      auto it = std::upper_bound(tm->begin(), tm->end(), t);
                      std::size_t hi_idx = static_cast<std::size_t>(it - tm->begin());
                      if (hi_idx == 0) hi_idx = 1;
                      if (hi_idx >= tm->size()) hi_idx = tm->size() - 1;
                      std::size_t lo_idx = hi_idx - 1;
                      if (interp == SymmetrizerInterp::constant_left)
                          return (t >= (*tm)[hi_idx]) ? (*vals)[hi_idx] : (*vals)[lo_idx];
                      double w = (t - (*tm)[lo_idx]) / ((*tm)[hi_idx] - (*tm)[lo_idx]);
                      w = std::clamp(w, 0.0, 1.0);
                      return (*vals)[lo_idx] * (1.0 - w) + (*vals)[hi_idx] * w;
                  });
    s.set_time_breakpoints(*tm);
    return s;
}

Symmetrizer Symmetrizer::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open symmetrizer file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("symmetrizer file is not valid JSON: ") + e.what());
    }
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        std::string k = it.key();
        if (k != "times" && k != "matrices" && k != "interpolation" && k != "lambda" && k != "Lambda")
            throw ConfigError("symmetrizer file: unknown key '" + k + "'");
    }
    if (!doc.contains("times") || !doc.contains("matrices"))
        throw ConfigError("symmetrizer file needs 'times' and 'matrices'");
    std::vector<double> times = doc["times"].get<std::vector<double>>();
    std::vector<Mat> values;
    for (const auto& mj : doc["matrices"]) {
        auto rows = mj.get<std::vector<std::vector<double>>>();
        int m = static_cast<int>(rows.size());
        Mat v(m);
        for (int i = 0; i < m; ++i) {
            if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != m)
                throw ConfigError("symmetrizer file: matrices must be square");
            for (int j = 0; j < m; ++j) v(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
        values.push_back(v);
    }
    SymmetrizerInterp interp = SymmetrizerInterp::linear;
    if (doc.contains("interpolation")) {
        std::string s = doc["interpolation"].get<std::string>();
        if (s == "linear") interp = SymmetrizerInterp::linear;
        else if (s == "constant_left") interp = SymmetrizerInterp::constant_left;
        else throw ConfigError("symmetrizer file: interpolation must be 'linear' or 'constant_left'");
    }
    std::optional<double> lam, Lam;
    if (doc.contains("lambda")) lam = doc["lambda"].get<double>();
    if (doc.contains("Lambda")) Lam = doc["Lambda"].get<double>();
    return sampled(std::move(times), std::move(values), interp, lam, Lam);
}

Symmetrizer build_strict(const CoefficientFamily& c) {
    HyperbolicityClass hc = classify(c);
    if (hc.verdict != Hyperbolicity::strictly_hyperbolic)
        throw NotStrictlyHyperbolic(std::string("build_strict: family classified as ") +
                                    to_string(hc.verdict));
    int m = c.system_size();

    auto eval = [&c, m](double t, std::span<const double> xi) {
        double nx = 0.0;
        for (double v : xi) nx += v * v;
        nx = std::sqrt(nx);
        std::vector<double> nu(xi.begin(), xi.end());
        for (double& v : nu) v /= nx;
        Mat a = symbol_at(c, t, nu);
        EigenResult er = eig(a);
        if (er.condition > 1e6)
            throw IllConditionedEigenbasis("build_strict: eigenbasis condition exceeds 1e6");
        Mat rinv = inverse(er.right_vectors);
        Mat s = rinv.adjoint() * rinv;
        // symmetrize away last-bit asymmetry so downstream psd checks are exact
        return 0.5 * (s + s.adjoint());
    };

    // estimate the bounds over the default sample grid, then pad by 10%
    double lo = 1e300, hi = -1e300;
    for (const TXiSample& smp : default_samples(c)) {
        Mat s = eval(smp.t, smp.xi);
        PsdBounds b = psd_bounds(s);
        lo = std::min(lo, b.min_eig);
        hi = std::max(hi, b.max_eig);
    }
    if (!(lo > 0.0)) throw IllConditionedEigenbasis("build_strict: estimated lambda is not positive");

    // capture the family by value so the symmetrizer owns its inputs
    CoefficientFamily owned = c;
    Symmetrizer s(m, c.horizon(), 0.9 * lo, 1.1 * hi, Provenance::eigen_built,
                  [owned, m](double t, std::span<const double> xi) {
                      double nx = 0.0;
                      for (double v : xi) nx += v * v;
                      nx = std::sqrt(nx);
                      std::vector<double> nu(xi.begin(), xi.end());
                      for (double& v : nu) v /= nx;
                      Mat a = symbol_at(owned, t, nu);
                      EigenResult er = eig(a);
                      if (er.condition > 1e6)
                          throw IllConditionedEigenbasis("symmetrizer: eigenbasis condition exceeds 1e6");
                      Mat rinv = inverse(er.right_vectors);
                      Mat sm = rinv.adjoint() * rinv;
                      return 0.5 * (sm + sm.adjoint());
                  });
    s.set_time_breakpoints(c.time_breakpoints());
    return s;
}

// ---------------------------------------------------------------------------
// validation
// ---------------------------------------------------------------------------

namespace {

void fold_check(PropertyCheck& chk, double violation, double tolerance, const TXiSample& smp) {
    if (violation > chk.violation) {
        chk.violation = violation;
        chk.worst_t = smp.t;
        chk.worst_xi = smp.xi;
    }
    chk.tolerance = tolerance;
    chk.pass = chk.violation <= chk.tolerance;
}

} // namespace

ValidationReport validate(const Symmetrizer& s, const CoefficientFamily& c,
                          const std::vector<TXiSample>& samples) {
    if (samples.empty()) throw Error("validate: sample set must be nonempty");
    ValidationReport rep;
    PropertyCheck self_adj{"self_adjoint", true, 0.0, 1e-10, 0.0, {}};
    PropertyCheck bounds{"two_sided_bounds", true, 0.0, 0.0, 0.0, {}};
    PropertyCheck homog{"degree0_homogeneity", true, 0.0, 1e-12, 0.0, {}};
    PropertyCheck sa{"symmetrized_symbol", true, 0.0, 1e-9, 0.0, {}};
    rep.lambda_min = 1e300;
    rep.lambda_max = -1e300;

    double bound_tol = 1e-9 * std::max(1.0, s.Lambda());

    for (const TXiSample& smp : samples) {
        Mat sm = s.at(smp.t, smp.xi);
        double snorm = op_norm(sm);

        double sa_defect = op_norm(sm - sm.adjoint());
        fold_check(self_adj, sa_defect / std::max(1.0, snorm), 1e-10, smp);

        Mat herm = 0.5 * (sm + sm.adjoint());
        PsdBounds b = psd_bounds(herm, 1e-6);
        rep.lambda_min = std::min(rep.lambda_min, b.min_eig);
        rep.lambda_max = std::max(rep.lambda_max, b.max_eig);
        double bviol = std::max({s.lambda() - b.min_eig, b.max_eig - s.Lambda(), 0.0});
        fold_check(bounds, bviol, bound_tol, smp);

        std::vector<double> xi2 = smp.xi;
        for (double& v : xi2) v *= 2.0;
        Mat sm2 = s.at(smp.t, xi2);
        fold_check(homog, (sm2 - sm).max_abs() / std::max(1.0, sm.max_abs()), 1e-12, smp);

        Mat a = symbol_at(c, smp.t, smp.xi);
        Mat m = sm * a;
        double defect = op_norm(m - m.adjoint()) / std::max(1.0, snorm * op_norm(a));
        if (defect > rep.max_sa_defect) rep.max_sa_defect = defect;
        fold_check(sa, defect, 1e-9, smp);
    }
    rep.checks = {self_adj, bounds, homog, sa};
    rep.pass = true;
    for (const auto& chk : rep.checks) rep.pass = rep.pass && chk.pass;
    return rep;
}

ValidationReport adjoint_check(const Symmetrizer& s, const CoefficientFamily& c,
                               const std::vector<TXiSample>& samples) {
    if (samples.empty()) throw Error("adjoint_check: sample set must be nonempty");
    ValidationReport rep;
    PropertyCheck adj{"adjoint_symmetrizer", true, 0.0, 1e-9, 0.0, {}};
    rep.lambda_min = 1e300;
    rep.lambda_max = -1e300;
    for (const TXiSample& smp : samples) {
        Mat sm = s.at(smp.t, smp.xi);
        Mat sinv(sm.dim());
        try {
            sinv = inverse(sm);
        } catch (const Error& e) {
            throw SingularSymmetrizer(std::string("adjoint_check: cannot invert S: ") + e.what());
        }
        PsdBounds b = psd_bounds(0.5 * (sinv + sinv.adjoint()), 1e-6);
        rep.lambda_min = std::min(rep.lambda_min, b.min_eig);
        rep.lambda_max = std::max(rep.lambda_max, b.max_eig);
        Mat astar = symbol_at(c, smp.t, smp.xi).adjoint();
        Mat m = sinv * astar;
        double defect = op_norm(m - m.adjoint()) / std::max(1.0, op_norm(astar));
        if (defect > rep.max_sa_defect) rep.max_sa_defect = defect;
        fold_check(adj, defect, 1e-9, smp);
    }
    rep.checks = {adj};
    rep.pass = adj.pass;
    return rep;
}

json ValidationReport::to_json() const {
    json out;
    out["pass"] = pass;
    out["lambda_min"] = lambda_min;
    out["lambda_max"] = lambda_max;
    out["max_sa_defect"] = max_sa_defect;
    json arr = json::array();
    for (const auto& chk : checks) {
        json c;
        c["property"] = chk.property;
        c["pass"] = chk.pass;
        c["violation"] = chk.violation;
        c["tolerance"] = chk.tolerance;
        c["worst_t"] = chk.worst_t;
        c["worst_xi"] = chk.worst_xi;
        arr.push_back(c);
    }
    out["checks"] = arr;
    return out;
}

} // namespace hypercone
