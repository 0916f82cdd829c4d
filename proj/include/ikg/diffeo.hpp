#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ikg/curvature.hpp"
#include "ikg/manifold.hpp"
#include "ikg/rng.hpp"

namespace ikg {

/// A diffeomorphism between equal-dimensional charts, given by component
/// expressions of the target coordinates in the source coordinates.
struct DiffeoMap {
    ChartManifold source;
    ChartManifold target;
    std::vector<Expr> components;
    std::optional<std::vector<Expr>> inverse;

    std::vector<double> map_point(std::span<const double> p) const;
    /// Jacobian (f_*) at p; throws NumericError when singular.
    Mat jacobian_at(std::span<const double> p) const;
};

Vec pushforward(const DiffeoMap& f, std::span<const double> p, const Vec& v);

/// (f* gbar)(v,w) = gbar(f_* v, f_* w) at p.
Mat pullback_metric_at(const DiffeoMap& f, std::span<const double> p);

enum class ConformalClass { Isometry, Homothety, ConformalNonconstant, NotConformal };
enum class GradientClass { Zero, Isotropic, Nonnull, Unknown };

struct ConformalReport {
    ConformalClass cls = ConformalClass::NotConformal;
    GradientClass grad_class = GradientClass::Unknown;
    std::string grad_path;  // "symbolic" or "finite-difference"
    std::vector<double> lambda;    // per sample point
    std::vector<double> sigma;     // 0.5 ln(lambda)
    std::vector<double> residual;  // max-abs(f*gbar - lambda g)/(1+max-abs(f*gbar))
};

/// Classify f against f* gbar = e^{2 sigma} g at >= 2 sample points. When a
/// closed-form sigma is supplied (identity-map conformal pairs), the gradient
/// class uses symbolic derivatives; otherwise finite differences of
/// 0.5 ln(lambda).
ConformalReport conformal_classify(const DiffeoMap& f,
                                   std::span<const std::vector<double>> points,
                                   const std::optional<Expr>& sigma_symbolic = std::nullopt);

enum class PreserveMode { Sectional, RicciUnit };

struct PreservationResult {
    double defect = 0.0;
    int used = 0;
    int skipped = 0;
};

/// Max over random samples of |Kbar(f_* alpha) - K(alpha)| (sectional) or
/// |Kbar_Sbar(f_* x) - K_S(x)| (unit vectors). Samples violating the mode's
/// nondegeneracy preconditions are skipped and counted.
PreservationResult preservation_defect(const DiffeoMap& f, PreserveMode mode,
                                       std::span<const std::vector<double>> points,
                                       Rng& rng, int samples);

enum class LimitMode { PlaneWeak, PlaneStrong, Ricci, Holo };

struct LimitReport {
    LimitMode mode;
    std::vector<double> t;
    std::vector<double> ratio;
    double limit = 0.0;
    bool converged = false;
    std::string diagnostics;
};

/// Curvature-ratio limit along a linear approximating family toward a
/// degenerate plane (plane modes) or isotropic vector (ricci/holo), with
/// first-order Richardson extrapolation over t_k = 0.1 * 2^-k, k = 0..10.
LimitReport limit_ratio(const DiffeoMap& f, LimitMode mode, std::span<const double> p,
                        Rng& rng);

/// Defects of the conformal-change Ricci identity and of the curvature-tensor
/// display it implies, for gbar = e^{2 sigma} g at p. Returns (d22, dR).
std::pair<double, double> theorem1_identities_defect(const ChartManifold& m,
                                                     const Expr& sigma,
                                                     std::span<const double> p);

struct CorollaryReport {
    double lambda = 0.0;     // constant conformal factor of f
    double r1 = 0.0;         // (f* Rbar)(xi,Jxi,Jxi,xi) / R(xi,Jxi,Jxi,xi)
    double defect_lambda = 0.0;
    double defect_lambda_sq = 0.0;
    bool consistent_with_isometry = false;
};

/// The lambda-vs-lambda^2 comparison at a sampled isotropic xi with
/// R(xi,Jxi,Jxi,xi) != 0. Throws NumericError when no usable xi is found
/// within 10^4 samples or when f is not a constant-factor conformal map.
CorollaryReport corollary_lambda_check(const DiffeoMap& f,
                                       std::span<const std::vector<double>> points,
                                       Rng& rng);

/// Builds the conformally changed chart gbar = e^{2 sigma} g (same coords).
ChartManifold conformal_change(const ChartManifold& m, const Expr& sigma,
                               const std::string& name_suffix = "_conf");

}  // namespace ikg
