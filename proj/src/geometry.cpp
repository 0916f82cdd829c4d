#include "ikg/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "ikg/error.hpp"

namespace ikg {

namespace {

double sym_defect(const Mat& Q) {
    return max_abs(Mat(Q - Q.transpose())) / (1.0 + max_abs(Q));
}

}  // namespace

double pi1_apply(const Mat& g, const Vec& z, const Vec& u, const Vec& v, const Vec& w) {
    const double gzw = z.dot(g * w), guv = u.dot(g * v);
    const double gzv = z.dot(g * v), guw = u.dot(g * w);
    return gzw * guv - gzv * guw;
}

Tensor4 pi1_build(const Mat& g) {
    const int n = static_cast<int>(g.rows());
    Tensor4 t(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    t.at(i, j, k, l) = g(i, l) * g(j, k) - g(i, k) * g(j, l);
    return t;
}

Tensor4 phi_build(const Mat& g, const Mat& Q) {
    if (sym_defect(Q) > 1e-9) throw InputError("phi requires a symmetric Q");
    const int n = static_cast<int>(g.rows());
    Tensor4 t(n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                for (int u = 0; u < n; ++u)
                    t.at(x, y, z, u) = g(x, u) * Q(y, z) - g(x, z) * Q(y, u) +
                                       g(y, z) * Q(x, u) - g(y, u) * Q(x, z);
    return t;
}

Tensor4 psi_build(const Mat& g, const ComplexStructure& J, const Mat& Q) {
    if (sym_defect(Q) > 1e-9) throw InputError("psi requires a symmetric Q");
    const int n = static_cast<int>(g.rows());
    if (J.dim != n) throw InputError("complex structure dimension mismatch");
    const Mat Jm = J.matrix();
    const Mat gJ = g * Jm;   // gJ(x,u) = g(x, Ju)
    const Mat QJ = Q * Jm;   // QJ(y,z) = Q(y, Jz)
    Tensor4 t(n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                for (int u = 0; u < n; ++u)
                    t.at(x, y, z, u) = gJ(x, u) * QJ(y, z) - gJ(x, z) * QJ(y, u) -
                                       2.0 * gJ(x, y) * QJ(z, u) + gJ(y, z) * QJ(x, u) -
                                       gJ(y, u) * QJ(x, z) - 2.0 * gJ(z, u) * QJ(x, y);
    return t;
}

Tensor4 pi2_build(const Mat& g, const ComplexStructure& J) {
    Tensor4 t = psi_build(g, J, g);
    t *= 0.5;
    return t;
}

Mat rank1_form_build(const Mat& g, const Vec& V) {
    const double gvv = V.dot(g * V);
    if (std::abs(std::abs(gvv) - 1.0) > 1e-9)
        throw InputError("rank-one form requires a unit vector (|g(V,V)| = 1)");
    const Vec gV = g * V;
    return gV * gV.transpose();
}

FrameResult orthonormal_frame(const Mat& g) {
    const int n = static_cast<int>(g.rows());
    if (sym_defect(g) > 1e-9) throw InputError("metric must be symmetric");
    Eigen::SelfAdjointEigenSolver<Mat> es(g);
    const Vec lambda = es.eigenvalues();  // ascending: negatives first
    const double scale = lambda.cwiseAbs().maxCoeff();
    FrameResult fr;
    for (int i = 0; i < n; ++i) {
        if (std::abs(lambda[i]) <= 1e-12 * scale) throw NumericError("singular metric in frame");
        Vec e = es.eigenvectors().col(i) / std::sqrt(std::abs(lambda[i]));
        // Deterministic sign: first component of noticeable size positive.
        for (int k = 0; k < n; ++k) {
            if (std::abs(e[k]) > 1e-12) {
                if (e[k] < 0.0) e = -e;
                break;
            }
        }
        fr.vectors.push_back(std::move(e));
        fr.signs.push_back(lambda[i] < 0.0 ? -1 : 1);
    }
    return fr;
}

PlaneClassification classify_plane(const Mat& g, const Vec& x, const Vec& y) {
    Mat span(x.size(), 2);
    span.col(0) = x;
    span.col(1) = y;
    Eigen::JacobiSVD<Mat> indep(span);
    const double smax = indep.singularValues()[0];
    if (indep.singularValues()[1] <= 1e-12 * std::max(smax, 1e-300) || smax == 0.0)
        throw InputError("plane spanning vectors are linearly dependent");

    Mat gram(2, 2);
    gram(0, 0) = x.dot(g * x);
    gram(0, 1) = gram(1, 0) = x.dot(g * y);
    gram(1, 1) = y.dot(g * y);
    Eigen::JacobiSVD<Mat> svd(gram);
    const double thr = 1e-9 * (1.0 + max_abs(gram));
    int rank = 0;
    for (int i = 0; i < 2; ++i)
        if (svd.singularValues()[i] > thr) ++rank;
    PlaneClass cls = rank == 2   ? PlaneClass::Nondegenerate
                     : rank == 1 ? PlaneClass::WeaklyDegenerate
                                 : PlaneClass::StronglyDegenerate;
    return {cls, rank};
}

bool is_isotropic(const Mat& g, const Vec& x) {
    const double aux2 = x.squaredNorm();
    if (aux2 == 0.0) return false;
    return std::abs(x.dot(g * x)) <= 1e-9 * aux2;
}

Vec sample_isotropic(const Mat& g, Rng& rng) {
    const FrameResult fr = orthonormal_frame(g);
    const int n = static_cast<int>(fr.signs.size());
    int nneg = 0;
    for (int s : fr.signs)
        if (s < 0) ++nneg;
    if (nneg == 0 || nneg == n)
        throw NumericError("metric is definite: no isotropic vectors exist");
    // Unit directions (in frame coefficients) within each sign span.
    Vec cneg = Vec::Zero(n), cpos = Vec::Zero(n);
    double nn = 0.0, np = 0.0;
    while (nn == 0.0 || np == 0.0) {
        for (int i = 0; i < n; ++i) {
            const double a = rng.normal();
            if (fr.signs[i] < 0)
                cneg[i] = a;
            else
                cpos[i] = a;
        }
        nn = cneg.norm();
        np = cpos.norm();
    }
    cneg /= nn;
    cpos /= np;
    Vec xi = Vec::Zero(n);
    for (int i = 0; i < n; ++i) xi += (cneg[i] + cpos[i]) * fr.vectors[static_cast<size_t>(i)];
    return xi;
}

bool is_holomorphic_plane(const ComplexStructure& J, const Vec& x, const Vec& y) {
    const int n = J.dim;
    Mat cols(n, 4);
    cols.col(0) = x;
    cols.col(1) = y;
    cols.col(2) = J.apply(x);
    cols.col(3) = J.apply(y);
    Eigen::JacobiSVD<Mat> svd(cols);
    const double thr = 1e-9 * std::max(svd.singularValues()[0], 1e-300);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > thr) ++rank;
    return rank == 2;
}

}  // namespace ikg
