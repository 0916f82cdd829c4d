#include "ikg/predicates.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "ikg/error.hpp"
#include "ikg/geometry.hpp"

namespace ikg {

double einstein_defect(const CurvatureBundle& b) {
    const int n = b.dim();
    const Mat dev = b.ricci - (b.scalar / n) * b.g;
    return max_abs(dev) / (1.0 + max_abs(b.ricci));
}

double conformally_flat_defect(const CurvatureBundle& b) {
    return weyl_at(b).max_abs() / (1.0 + b.riemann.max_abs());
}

ModelFit constant_curvature_fit(const CurvatureBundle& b) {
    const Tensor4 model = pi1_build(b.g);
    const double c = b.riemann.dot(model) / model.dot(model);
    Tensor4 res = b.riemann;
    res -= c * model;
    return {c, res.max_abs() / (1.0 + b.riemann.max_abs())};
}

ModelFit constant_hol_curvature_fit(const CurvatureBundle& b, const ComplexStructure& J) {
    const Mat Jm = J.matrix();
    if (max_abs(Mat(Jm.transpose() * b.g * Jm - b.g)) > 1e-9 * (1.0 + max_abs(b.g)))
        throw InputError("constant_hol_curvature_fit requires a Hermitian metric");
    Tensor4 model = pi1_build(b.g);
    model += pi2_build(b.g, J);
    model *= 0.25;
    const double c = b.riemann.dot(model) / model.dot(model);
    Tensor4 res = b.riemann;
    res -= c * model;
    return {c, res.max_abs() / (1.0 + b.riemann.max_abs())};
}

namespace {

double qc_residual(const CurvatureBundle& b, const Vec& V, double H, double N) {
    Tensor4 model = pi1_build(b.g);
    model *= H;
    if (N != H) {
        Tensor4 ph = phi_build(b.g, rank1_form_build(b.g, V));
        ph *= (N - H);
        model += ph;
    }
    Tensor4 res = b.riemann;
    res -= model;
    return res.max_abs();
}

// A vector g-orthogonal to V with |g(w,w)| bounded away from zero.
Vec g_orthogonal_complement_vector(const Mat& g, const Vec& V, const Vec& seed) {
    const double gVV = V.dot(g * V);
    Vec w = seed - (seed.dot(g * V) / gVV) * V;
    return w;
}

}  // namespace

QuasiConstantFit quasi_constant_fit(const CurvatureBundle& b, double tol) {
    QuasiConstantFit fit;
    const int n = b.dim();
    if (conformally_flat_defect(b) > tol) {
        fit.status = QuasiConstantFit::Status::NotConformallyFlat;
        return fit;
    }
    const Mat A = b.ginv * b.ricci;
    const Eigen::EigenSolver<Mat> es(A);
    const Eigen::VectorXcd ev = es.eigenvalues();
    const double rad = ev.cwiseAbs().maxCoeff();

    auto degenerate = [&](QuasiConstantFit::Status st) {
        fit.status = st;
        fit.H = fit.N = b.scalar / (n * (n - 1.0));
        fit.V = Vec::Zero(n);
        fit.residual = qc_residual(b, Vec::Unit(n, 0), fit.H, fit.N);  // reduces to H pi1
        return fit;
    };

    for (int i = 0; i < n; ++i)
        if (std::abs(ev[i].imag()) > 1e-8 * (1.0 + rad))
            return degenerate(QuasiConstantFit::Status::NoDistinguishedEigenvector);

    // Look for one simple eigenvalue separated from an (n-1)-fold cluster.
    std::vector<double> lam(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) lam[static_cast<size_t>(i)] = ev[i].real();
    int simple = -1;
    const double gap_tol = 1e-6 * (rad > 0.0 ? rad : 1.0);
    for (int i = 0; i < n; ++i) {
        bool isolated = true;
        double cluster_lo = 0.0, cluster_hi = 0.0;
        bool first = true;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            if (std::abs(lam[static_cast<size_t>(j)] - lam[static_cast<size_t>(i)]) <= gap_tol)
                isolated = false;
            if (first) {
                cluster_lo = cluster_hi = lam[static_cast<size_t>(j)];
                first = false;
            } else {
                cluster_lo = std::min(cluster_lo, lam[static_cast<size_t>(j)]);
                cluster_hi = std::max(cluster_hi, lam[static_cast<size_t>(j)]);
            }
        }
        if (isolated && cluster_hi - cluster_lo <= gap_tol) {
            simple = i;
            break;
        }
    }
    if (simple < 0) return degenerate(QuasiConstantFit::Status::NoDistinguishedEigenvector);

    Vec V = es.eigenvectors().col(simple).real();
    const double gVV = V.dot(b.g * V);
    if (std::abs(gVV) <= 1e-9 * V.squaredNorm())
        return degenerate(QuasiConstantFit::Status::NoDistinguishedEigenvector);
    V /= std::sqrt(std::abs(gVV));
    for (int i = 0; i < n; ++i) {
        if (std::abs(V[i]) > 1e-12) {
            if (V[i] < 0.0) V = -V;
            break;
        }
    }

    // H from a plane g-orthogonal to V, N from a plane containing V.
    Vec w1, w2;
    {
        int found = 0;
        for (int i = 0; i < n && found < 2; ++i) {
            Vec w = g_orthogonal_complement_vector(b.g, V, Vec::Unit(n, i));
            if (found == 1) w = g_orthogonal_complement_vector(b.g, w1, w);
            if (w.norm() < 1e-6) continue;
            const double gww = w.dot(b.g * w);
            if (std::abs(gww) < 1e-6 * w.squaredNorm()) continue;
            (found == 0 ? w1 : w2) = w / std::sqrt(std::abs(gww));
            ++found;
        }
        if (found < 2) return degenerate(QuasiConstantFit::Status::NoDistinguishedEigenvector);
    }
    fit.H = sectional_curvature(b, w1, w2);
    // N from the display itself: fit the remaining coefficient of phi(B_V).
    // (For a timelike V the curvature of planes containing V is not N but
    // H + g(V,V)(N - H); solving on the display keeps the residual exact.)
    {
        const Tensor4 phiB = phi_build(b.g, rank1_form_build(b.g, V));
        Tensor4 rem = b.riemann;
        Tensor4 p1 = pi1_build(b.g);
        p1 *= fit.H;
        rem -= p1;
        fit.N = fit.H + rem.dot(phiB) / phiB.dot(phiB);
    }
    fit.V = V;
    fit.residual = qc_residual(b, V, fit.H, fit.N);
    fit.status = fit.residual <= tol ? QuasiConstantFit::Status::Ok
                                     : QuasiConstantFit::Status::NoDistinguishedEigenvector;
    return fit;
}

RecurrenceFit kn_star_classify(const ChartManifold& m, std::span<const double> p,
                               const std::optional<Expr>& v, double tol) {
    const auto b = bundle_at(m, p);
    const int n = b->dim();
    RecurrenceFit fit;
    fit.alpha = Vec::Zero(n);
    const double rmax = b->riemann.max_abs();
    const double drmax = b->nabla_riemann.max_abs();

    if (drmax > tol * (1.0 + rmax)) {
        // Recurrent candidate: per-slot least squares for nabla R = alpha (x) R.
        const double rr = b->riemann.dot(b->riemann);
        double worst = 0.0;
        for (int a = 0; a < n; ++a) {
            double num = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k)
                        for (int l = 0; l < n; ++l)
                            num += b->nabla_riemann.at(a, i, j, k, l) * b->riemann.at(i, j, k, l);
            fit.alpha[a] = num / rr;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k)
                        for (int l = 0; l < n; ++l)
                            worst = std::max(worst,
                                             std::abs(b->nabla_riemann.at(a, i, j, k, l) -
                                                      fit.alpha[a] * b->riemann.at(i, j, k, l)));
        }
        fit.residual = worst / (1.0 + drmax);
        fit.cls = (fit.residual <= tol && max_abs(fit.alpha) > tol)
                      ? RecurrenceFit::Class::Recurrent
                      : RecurrenceFit::Class::NotKnStar;
        return fit;
    }

    // Symmetric branch (nabla R = 0).
    if (!v) {
        fit.cls = RecurrenceFit::Class::SymmetricUnclassified;
        return fit;
    }
    for (int i = 0; i < n; ++i) fit.alpha[i] = v->diff(i).eval(p);
    double worst = 0.0;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                for (int u = 0; u < n; ++u)
                    for (int w = 0; w < n; ++w)
                        worst = std::max(
                            worst, std::abs(fit.alpha[x] * b->riemann.at(y, z, u, w) +
                                            fit.alpha[y] * b->riemann.at(z, x, u, w) +
                                            fit.alpha[z] * b->riemann.at(x, y, u, w)));
    fit.residual = worst / ((1.0 + rmax) * (1.0 + max_abs(fit.alpha)));
    fit.cls = (fit.residual <= 1e-8 && max_abs(fit.alpha) > tol)
                  ? RecurrenceFit::Class::SymmetricWalker
                  : RecurrenceFit::Class::SymmetricUnclassified;
    return fit;
}

KaehlerReport kaehler_check(const ChartManifold& m,
                            std::span<const std::vector<double>> points) {
    if (!m.complex_structure()) throw InputError("kaehler_check requires a complex structure");
    const auto& J = *m.complex_structure();
    const Mat Jm = J.matrix();
    const int n = m.dim();
    KaehlerReport rep;
    for (const auto& p : points) {
        const auto b = bundle_at(m, p);
        rep.hermitian_defect = std::max(
            rep.hermitian_defect, max_abs(Mat(Jm.transpose() * b->g * Jm - b->g)));

        // dPhi: cyclic sum of coordinate derivatives of Phi_jk = g(J e_j, e_k).
        // dPhi_i(jk) needs d_i Phi_jk = sum_m J^m_j d_i g_mk.
        std::vector<double> dPhi(static_cast<size_t>(n) * n * n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double s = 0.0;
                    for (int mm = 0; mm < n; ++mm)
                        s += Jm(mm, j) * m.g(mm, k).diff(i).eval(p);
                    dPhi[(static_cast<size_t>(i) * n + j) * n + k] = s;
                }
        auto d = [&](int i, int j, int k) {
            return dPhi[(static_cast<size_t>(i) * n + j) * n + k];
        };
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    rep.dphi_defect = std::max(
                        rep.dphi_defect, std::abs(d(i, j, k) + d(j, k, i) + d(k, i, j)));

        // (nabla_i J)^k_j = Gamma^k_im J^m_j - Gamma^m_ij J^k_m (J constant).
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double s = 0.0;
                    for (int mm = 0; mm < n; ++mm)
                        s += b->christoffel(k, i, mm) * Jm(mm, j) -
                             b->christoffel(mm, i, j) * Jm(k, mm);
                    rep.nabla_j_defect = std::max(rep.nabla_j_defect, std::abs(s));
                }
    }
    return rep;
}

double bochner_zero_hol_identity_defect(const CurvatureBundle& b, const ComplexStructure& J,
                                        const Vec& x) {
    const double gxx = x.dot(b.g * x);
    if (std::abs(gxx) <= 1e-9 * x.squaredNorm())
        throw NumericError("holomorphic identity needs a non-isotropic direction");
    const int m = b.dim() / 2;
    const double H = holomorphic_sectional(b, J, x);
    const double lhs = H * gxx;
    const double rhs =
        (4.0 / (m + 2.0)) * x.dot(b.ricci * x) - (b.scalar / ((m + 1.0) * (m + 2.0))) * gxx;
    return std::abs(lhs - rhs) / (1.0 + std::abs(lhs));
}

}  // namespace ikg
