#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ikg/curvature.hpp"

namespace ikg {

/// max-abs(S - (tau/n) g) / (1 + max-abs(S)); zero iff Einstein at the point.
double einstein_defect(const CurvatureBundle& b);

/// max-abs(Weyl) / (1 + max-abs(R)); requires dim >= 4.
double conformally_flat_defect(const CurvatureBundle& b);

struct ModelFit {
    double c;
    double residual;  // max-abs(R - c*model) / (1 + max-abs(R))
};

/// Least-squares fit of R against pi1 in the auxiliary inner product.
ModelFit constant_curvature_fit(const CurvatureBundle& b);

/// Least-squares fit of R against (pi1+pi2)/4; requires a Hermitian metric.
ModelFit constant_hol_curvature_fit(const CurvatureBundle& b, const ComplexStructure& J);

struct QuasiConstantFit {
    enum class Status { Ok, NotConformallyFlat, NoDistinguishedEigenvector };
    Status status;
    Vec V;  // unit distinguished direction (|g(V,V)| = 1) when status == Ok
    double H = 0.0;
    double N = 0.0;
    double residual = 0.0;  // max-abs(R - (N-H)phi(B_V) - H pi1)
};

/// Fit R = (N-H)phi(B_V) + H pi1 with V a distinguished Ricci eigendirection.
/// On an Einstein point the fit degenerates: no distinguished V, residual
/// reported with H = N = tau/(n(n-1)).
QuasiConstantFit quasi_constant_fit(const CurvatureBundle& b, double tol = 1e-6);

struct RecurrenceFit {
    enum class Class { Recurrent, SymmetricWalker, SymmetricUnclassified, NotKnStar };
    Class cls;
    Vec alpha;              // recurrence covector (zero when not applicable)
    double residual = 0.0;  // of nabla R - alpha (x) R, or of the cyclic sum
};

/// K*_n classification at a point; the optional v is Walker's recurrence
/// function used to form alpha = dv in the symmetric branch.
RecurrenceFit kn_star_classify(const ChartManifold& m, std::span<const double> p,
                               const std::optional<Expr>& v = std::nullopt,
                               double tol = 1e-6);

struct KaehlerReport {
    double hermitian_defect = 0.0;  // max over points of max-abs(J^T g J - g)
    double dphi_defect = 0.0;       // max-abs of the antisymmetrized dPhi components
    double nabla_j_defect = 0.0;    // max-abs of nabla J
    bool passed(double tol = 1e-8) const {
        return hermitian_defect <= 1e-9 && dphi_defect <= tol && nabla_j_defect <= tol;
    }
};

/// Kaehler conditions at the given sample points; requires a complex structure.
KaehlerReport kaehler_check(const ChartManifold& m,
                            std::span<const std::vector<double>> points);

/// Defect of H(x) g(x,x) = (4/(m+2)) S(x,x) - (tau/((m+1)(m+2))) g(x,x)
/// with m the complex dimension; vanishes wherever the Bochner tensor does.
double bochner_zero_hol_identity_defect(const CurvatureBundle& b, const ComplexStructure& J,
                                        const Vec& x);

}  // namespace ikg
