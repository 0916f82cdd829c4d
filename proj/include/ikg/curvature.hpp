#pragma once

#include <memory>
#include <span>
#include <vector>

#include "ikg/geometry.hpp"
#include "ikg/manifold.hpp"
#include "ikg/tensor.hpp"

namespace ikg {

/// All point-local curvature data of a chart metric. Sign conventions are
/// anchored so that the unit round sphere has K(alpha) = +1 and S = (n-1)g.
struct CurvatureBundle {
    std::vector<double> point;
    Mat g;
    Mat ginv;
    std::vector<double> gamma;  // Christoffels, [k][i][j] row-major, k upper
    Tensor4 riemann;            // R(x,y,z,u), covariant
    Tensor5 nabla_riemann;      // slot 0 = differentiation direction
    Mat ricci;
    double scalar = 0.0;
    FrameResult frame;

    int dim() const { return static_cast<int>(point.size()); }
    double christoffel(int k, int i, int j) const {
        const int n = dim();
        return gamma[(static_cast<size_t>(k) * n + i) * n + j];
    }
};

/// Bundle at a point; cached per (manifold, exact point).
std::shared_ptr<const CurvatureBundle> bundle_at(const ChartManifold& m,
                                                 std::span<const double> p);

/// Christoffel symbols only (same layout as CurvatureBundle::gamma).
std::vector<double> christoffels_at(const ChartManifold& m, std::span<const double> p);

Tensor4 riemann_at(const ChartManifold& m, std::span<const double> p);
Tensor5 nabla_riemann_at(const ChartManifold& m, std::span<const double> p);
Mat ricci_at(const ChartManifold& m, std::span<const double> p);
double scalar_at(const ChartManifold& m, std::span<const double> p);

/// K(alpha) = R(x,y,y,x) / pi1(x,y,y,x); requires a nondegenerate plane.
double sectional_curvature(const CurvatureBundle& b, const Vec& x, const Vec& y);

/// K_S(x) = S(x,x) / g(x,x); requires non-isotropic x.
double ricci_direction_curvature(const CurvatureBundle& b, const Vec& x);

/// H(x) = R(x,Jx,Jx,x) / g(x,x)^2; requires non-isotropic x.
double holomorphic_sectional(const CurvatureBundle& b, const ComplexStructure& J, const Vec& x);

/// Weyl conformal tensor; requires dim >= 4 (dim 3 is unsupported).
Tensor4 weyl_at(const CurvatureBundle& b);

/// Bochner tensor of a Kaehler metric; the complex dimension is dim/2.
Tensor4 bochner_at(const CurvatureBundle& b, const ComplexStructure& J);

}  // namespace ikg
