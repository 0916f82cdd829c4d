#pragma once

#include <span>

#include "ikg/manifold.hpp"
#include "ikg/rng.hpp"
#include "ikg/tensor.hpp"

namespace ikg {

enum class PlaneClass { Nondegenerate, WeaklyDegenerate, StronglyDegenerate };

struct PlaneClassification {
    PlaneClass cls;
    int rank;  // rank of the restricted metric: 2, 1 or 0
};

struct FrameResult {
    std::vector<Vec> vectors;  // pseudo-orthonormal basis e_i, columns of components
    std::vector<int> signs;    // epsilon_i in {-1,+1}, -1 first
};

/// pi1(z,u,v,w) = g(z,w)g(u,v) - g(z,v)g(u,w).
double pi1_apply(const Mat& g, const Vec& z, const Vec& u, const Vec& v, const Vec& w);

/// pi1 as a dense (0,4) tensor.
Tensor4 pi1_build(const Mat& g);

/// phi(Q)(x,y,z,u) = g(x,u)Q(y,z) - g(x,z)Q(y,u) + g(y,z)Q(x,u) - g(y,u)Q(x,z).
/// Rejects Q with asymmetry above 1e-9 relative.
Tensor4 phi_build(const Mat& g, const Mat& Q);

/// The six-term Kaehler analogue of phi.
Tensor4 psi_build(const Mat& g, const ComplexStructure& J, const Mat& Q);

/// pi2 = (1/2) psi(g).
Tensor4 pi2_build(const Mat& g, const ComplexStructure& J);

/// Rank-one form g(X,V)g(Y,V) for a unit vector V (|g(V,V)| = 1 to 1e-9).
Mat rank1_form_build(const Mat& g, const Vec& V);

/// Pseudo-orthonormal frame: g(e_i,e_j) = eps_i delta_ij, eps sorted -1 first.
FrameResult orthonormal_frame(const Mat& g);

/// Degeneracy class of span{x,y} from the rank of the restricted metric.
/// Requires linearly independent spanners (Euclidean check).
PlaneClassification classify_plane(const Mat& g, const Vec& x, const Vec& y);

bool is_isotropic(const Mat& g, const Vec& x);

/// Random isotropic vector u_- + u_+ with unit legs in the negative and
/// positive frame spans. Throws NumericError on definite metrics.
Vec sample_isotropic(const Mat& g, Rng& rng);

/// True iff span{x,y} = J span{x,y}.
bool is_holomorphic_plane(const ComplexStructure& J, const Vec& x, const Vec& y);

}  // namespace ikg
