#include "hypercone/symbol.hpp"

#include <algorithm>
#include <cmath>

namespace hypercone {

namespace {

constexpr double kGapTol = 1e-6;  // relative gap for strict hyperbolicity
constexpr double kImagTol = 1e-8; // relative imaginary-part tolerance

} // namespace

Mat assemble_symbol(const std::vector<Mat>& coeffs, std::span<const double> xi) {
    Mat acc(coeffs.front().dim());
    for (std::size_t j = 0; j < coeffs.size(); ++j) acc += coeffs[j] * xi[j];
    return acc;
}

Mat assemble_symbol_complex(const std::vector<Mat>& coeffs, std::span<const cplx> zeta) {
    Mat acc(coeffs.front().dim());
    for (std::size_t j = 0; j < coeffs.size(); ++j) acc += coeffs[j] * zeta[j];
    return acc;
}

Mat symbol_at(const CoefficientFamily& c, double t, std::span<const double> xi) {
    if (static_cast<int>(xi.size()) != c.space_dim())
        throw Error("symbol_at: frequency dimension mismatch");
    return assemble_symbol(c.at(t), xi);
}

Mat symbol_complex(const CoefficientFamily& c, double t, std::span<const cplx> zeta) {
    if (static_cast<int>(zeta.size()) != c.space_dim())
        throw Error("symbol_complex: frequency dimension mismatch");
    return assemble_symbol_complex(c.at(t), zeta);
}

const char* to_string(Hyperbolicity h) {
    switch (h) {
        case Hyperbolicity::strictly_hyperbolic: return "strictly_hyperbolic";
        case Hyperbolicity::constant_multiplicities: return "constant_multiplicities";
        case Hyperbolicity::hyperbolic: return "hyperbolic";
        case Hyperbolicity::not_hyperbolic: return "not_hyperbolic";
        case Hyperbolicity::not_semisimple: return "not_semisimple";
    }
    return "?";
}

std::vector<std::vector<double>> sphere_directions(int n, int count) {
    std::vector<std::vector<double>> dirs;
    if (n == 1) {
        dirs.push_back({1.0});
        if (count > 1) dirs.push_back({-1.0});
        return dirs;
    }
    if (n == 2) {
        for (int k = 0; k < count; ++k) {
            double th = 2.0 * M_PI * k / count;
            dirs.push_back({std::cos(th), std::sin(th)});
        }
        return dirs;
    }
    if (n == 3) {
        const double golden = M_PI * (3.0 - std::sqrt(5.0));
        for (int k = 0; k < count; ++k) {
            double z = 1.0 - 2.0 * (k + 0.5) / count;
            double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            double th = golden * k;
            dirs.push_back({r * std::cos(th), r * std::sin(th), z});
        }
        return dirs;
    }
    throw Error("sphere_directions: only n <= 3 supported");
}

std::vector<TXiSample> default_samples(const CoefficientFamily& c, int nt, int ndir) {
    auto dirs = sphere_directions(c.space_dim(), ndir);
    std::vector<TXiSample> samples;
    samples.reserve(static_cast<std::size_t>(nt) * dirs.size());
    for (int i = 0; i < nt; ++i) {
        double t = c.horizon() * (i + 0.5) / nt;
        for (const auto& d : dirs) samples.push_back({t, d});
    }
    return samples;
}

HyperbolicityClass classify(const CoefficientFamily& c, const std::vector<TXiSample>& samples) {
    if (samples.empty()) throw Error("classify: sample set must be nonempty");
    HyperbolicityClass out;
    out.verdict = Hyperbolicity::strictly_hyperbolic;

    std::vector<int> reference_pattern;
    bool have_reference = false;

    auto weaken = [&out](Hyperbolicity v, double t, const std::vector<double>& xi,
                         const std::vector<cplx>& ev) {
        // verdict lattice: strict > constant mult > hyperbolic > (defect states)
        auto rank = [](Hyperbolicity h) {
            switch (h) {
                case Hyperbolicity::strictly_hyperbolic: return 0;
                case Hyperbolicity::constant_multiplicities: return 1;
                case Hyperbolicity::hyperbolic: return 2;
                case Hyperbolicity::not_semisimple: return 3;
                case Hyperbolicity::not_hyperbolic: return 4;
            }
            return 4;
        };
        if (rank(v) > rank(out.verdict)) {
            out.verdict = v;
            out.witness = {t, xi, ev};
        }
    };

    for (const TXiSample& s : samples) {
        double nx = 0.0;
        for (double v : s.xi) nx += v * v;
        if (nx == 0.0) throw Error("classify: xi = 0 sample is not allowed");
        Mat a = symbol_at(c, s.t, s.xi);
        double scale = 1.0 + op_norm(a);
        EigenResult er = eig(a);

        bool real_spectrum = true;
        for (const cplx& l : er.eigenvalues)
            if (std::abs(l.imag()) > kImagTol * scale) real_spectrum = false;
        if (!real_spectrum) {
            weaken(Hyperbolicity::not_hyperbolic, s.t, s.xi, er.eigenvalues);
            continue;
        }
        if (!er.diagonalizable) {
            weaken(Hyperbolicity::not_semisimple, s.t, s.xi, er.eigenvalues);
            continue;
        }

        auto groups = cluster_eigenvalues(er.eigenvalues, kGapTol * scale);
        std::vector<int> pattern;
        for (const auto& g : groups) pattern.push_back(static_cast<int>(g.size()));
        std::sort(pattern.begin(), pattern.end());

        bool all_distinct = static_cast<int>(groups.size()) == c.system_size();
        if (!all_distinct) weaken(Hyperbolicity::constant_multiplicities, s.t, s.xi, er.eigenvalues);
        if (!have_reference) {
            reference_pattern = pattern;
            have_reference = true;
        } else if (pattern != reference_pattern) {
            weaken(Hyperbolicity::hyperbolic, s.t, s.xi, er.eigenvalues);
        }
    }
    if (out.witness.xi.empty()) {
        // verdict held through every sample; record the first one
        out.witness.t = samples.front().t;
        out.witness.xi = samples.front().xi;
        out.witness.eigenvalues = eig(symbol_at(c, samples.front().t, samples.front().xi)).eigenvalues;
    }
    return out;
}

HyperbolicityClass classify(const CoefficientFamily& c) {
    return classify(c, default_samples(c));
}

} // namespace hypercone
