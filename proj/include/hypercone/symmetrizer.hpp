#pragma once

// Microlocal symmetrizers S(t, xi): identity / user-supplied / eigen-built
// evaluators with declared bounds lambda, Lambda, validation of the defining
// properties, and the adjoint-symmetrizer check (S^{-1} symmetrizes the
// adjoint symbol).

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hypercone/symbol.hpp"

namespace hypercone {

enum class Provenance { identity, user_supplied, eigen_built };

enum class SymmetrizerInterp { linear, constant_left };

const char* to_string(Provenance p);

class Symmetrizer {
public:
    using Evaluator = std::function<Mat(double, std::span<const double>)>;

    Symmetrizer(int m, double horizon, double lambda, double Lambda, Provenance prov,
                Evaluator eval);

    int system_size() const { return m_; }
    double horizon() const { return T_; }
    double lambda() const { return lambda_; }
    double Lambda() const { return Lambda_; }
    Provenance provenance() const { return prov_; }
    const std::vector<double>& time_breakpoints() const { return breakpoints_; }
    void set_time_breakpoints(std::vector<double> b) { breakpoints_ = std::move(b); }

    /// S(t, xi) for t in [0, T], xi != 0.
    Mat at(double t, std::span<const double> xi) const;

    /// Constant-extension evaluation on all of R (t clamped to [0, T]).
    Mat at_extended(double t, std::span<const double> xi) const;

    static Symmetrizer identity(int m, double horizon);
    static Symmetrizer from_function(int m, double horizon, double lambda, double Lambda,
                                     Evaluator eval);
    /// xi-independent S(t) interpolated from nodes; bounds default to the
    /// node eigenvalue range padded by 10%.
    static Symmetrizer sampled(std::vector<double> times, std::vector<Mat> values,
                               SymmetrizerInterp interp,
                               std::optional<double> lambda = std::nullopt,
                               std::optional<double> Lambda = std::nullopt);
    static Symmetrizer from_json_file(const std::string& path);

private:
    int m_;
    double T_;
    double lambda_;
    double Lambda_;
    Provenance prov_;
    Evaluator eval_;
    std::vector<double> breakpoints_;
};

/// S(t, xi) = (R^{-1})^* R^{-1} from the unit-direction eigenbasis of the
/// symbol. Requires a strictly hyperbolic family; throws
/// IllConditionedEigenbasis when cond(R) exceeds 1e6 at an estimation sample.
Symmetrizer build_strict(const CoefficientFamily& c);

struct PropertyCheck {
    std::string property;
    bool pass = true;
    double violation = 0.0; // worst over samples, in the property's own scale
    double tolerance = 0.0;
    double worst_t = 0.0;
    std::vector<double> worst_xi;
};

struct ValidationReport {
    std::vector<PropertyCheck> checks;
    bool pass = true;
    double lambda_min = 0.0; // measured over the sample set
    double lambda_max = 0.0;
    double max_sa_defect = 0.0;
    nlohmann::json to_json() const;
};

/// Checks self-adjointness, the two-sided bound with declared lambda/Lambda
/// (slack 1e-9), degree-0 homogeneity (xi vs 2 xi), and self-adjointness of
/// S*A at every sample.
ValidationReport validate(const Symmetrizer& s, const CoefficientFamily& c,
                          const std::vector<TXiSample>& samples);

/// Lemma-level adjoint property: S^{-1} A^* self-adjoint within 1e-9 |A|.
ValidationReport adjoint_check(const Symmetrizer& s, const CoefficientFamily& c,
                               const std::vector<TXiSample>& samples);

} // namespace hypercone
