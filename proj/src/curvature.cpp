#include "ikg/curvature.hpp"

#include <cmath>
#include <mutex>

#include "ikg/error.hpp"
#include "ikg/internal_caches.hpp"

namespace ikg {

namespace {

// Indexing helpers for flat derivative tables.
struct Tables {
    int n;
    const std::vector<Expr>* dg;
    const std::vector<Expr>* d2g;
    const std::vector<Expr>* d3g;

    size_t i3(int k, int i, int j) const { return (static_cast<size_t>(k) * n + i) * n + j; }
    size_t i4(int k, int l, int i, int j) const {
        return ((static_cast<size_t>(k) * n + l) * n + i) * n + j;
    }
    size_t i5(int k, int l, int m, int i, int j) const {
        return (((static_cast<size_t>(k) * n + l) * n + m) * n + i) * n + j;
    }
};

void build_tables(const ChartManifold& m, detail::ManifoldCaches& c) {
    const int n = m.dim();
    c.n = n;
    c.dg.resize(static_cast<size_t>(n) * n * n);
    c.d2g.resize(static_cast<size_t>(n) * n * n * n);
    c.d3g.resize(static_cast<size_t>(n) * n * n * n * n);
    Tables t{n, nullptr, nullptr, nullptr};
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                Expr d1 = m.g(i, j).diff(k);
                c.dg[t.i3(k, i, j)] = d1;
                c.dg[t.i3(k, j, i)] = d1;
                for (int l = k; l < n; ++l) {
                    Expr d2 = d1.diff(l);
                    c.d2g[t.i4(k, l, i, j)] = d2;
                    c.d2g[t.i4(l, k, i, j)] = d2;
                    c.d2g[t.i4(k, l, j, i)] = d2;
                    c.d2g[t.i4(l, k, j, i)] = d2;
                    for (int q = l; q < n; ++q) {
                        Expr d3 = d2.diff(q);
                        const int ks[3] = {k, l, q};
                        // store under all orderings of the derivative triple
                        int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                          {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
                        for (auto& pr : perm) {
                            c.d3g[t.i5(ks[pr[0]], ks[pr[1]], ks[pr[2]], i, j)] = d3;
                            c.d3g[t.i5(ks[pr[0]], ks[pr[1]], ks[pr[2]], j, i)] = d3;
                        }
                    }
                }
            }
        }
    c.tables_built = true;
}

// Numeric derivative data of the metric at one point.
struct MetricJet {
    int n;
    Mat g, ginv;
    std::vector<double> dg, d2g, d3g;      // same layouts as the symbolic tables
    std::vector<double> dginv, d2ginv;     // [k][i][j], [k][l][i][j]

    size_t i3(int k, int i, int j) const { return (static_cast<size_t>(k) * n + i) * n + j; }
    size_t i4(int k, int l, int i, int j) const {
        return ((static_cast<size_t>(k) * n + l) * n + i) * n + j;
    }
    size_t i5(int k, int l, int m, int i, int j) const {
        return (((static_cast<size_t>(k) * n + l) * n + m) * n + i) * n + j;
    }
};

MetricJet evaluate_jet(const ChartManifold& m, std::span<const double> p) {
    detail::ManifoldCaches& c = m.caches();
    {
        std::lock_guard lock(c.mutex);
        if (!c.tables_built) build_tables(m, c);
    }
    const int n = m.dim();
    MetricJet j;
    j.n = n;
    j.g = metric_at(m, p);
    j.ginv = j.g.inverse();
    j.dg.resize(c.dg.size());
    j.d2g.resize(c.d2g.size());
    j.d3g.resize(c.d3g.size());
    for (size_t i = 0; i < c.dg.size(); ++i) j.dg[i] = c.dg[i].eval(p);
    for (size_t i = 0; i < c.d2g.size(); ++i) j.d2g[i] = c.d2g[i].eval(p);
    for (size_t i = 0; i < c.d3g.size(); ++i) j.d3g[i] = c.d3g[i].eval(p);

    // d(g^-1) = -g^-1 dg g^-1 ; second derivative by the product rule.
    j.dginv.resize(j.dg.size());
    j.d2ginv.resize(j.d2g.size());
    std::vector<Mat> dgm(static_cast<size_t>(n)), dgim(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        Mat d(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) d(a, b) = j.dg[j.i3(k, a, b)];
        dgm[static_cast<size_t>(k)] = d;
        Mat di = -j.ginv * d * j.ginv;
        dgim[static_cast<size_t>(k)] = di;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) j.dginv[j.i3(k, a, b)] = di(a, b);
    }
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            Mat d2(n, n);
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) d2(a, b) = j.d2g[j.i4(k, l, a, b)];
            const Mat m2 = -dgim[static_cast<size_t>(l)] * dgm[static_cast<size_t>(k)] * j.ginv -
                           j.ginv * d2 * j.ginv -
                           j.ginv * dgm[static_cast<size_t>(k)] * dgim[static_cast<size_t>(l)];
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) j.d2ginv[j.i4(k, l, a, b)] = m2(a, b);
        }
    return j;
}

std::shared_ptr<CurvatureBundle> compute_bundle(const ChartManifold& m,
                                                std::span<const double> p) {
    const MetricJet jet = evaluate_jet(m, p);
    const int n = jet.n;
    auto b = std::make_shared<CurvatureBundle>();
    b->point.assign(p.begin(), p.end());
    b->g = jet.g;
    b->ginv = jet.ginv;

    // C_lij = d_i g_jl + d_j g_il - d_l g_ij ; Gamma^k_ij = (1/2) g^{kl} C_lij
    auto C = [&](int l, int i, int j) {
        return jet.dg[jet.i3(i, j, l)] + jet.dg[jet.i3(j, i, l)] - jet.dg[jet.i3(l, i, j)];
    };
    auto dC = [&](int m1, int l, int i, int j) {
        return jet.d2g[jet.i4(m1, i, j, l)] + jet.d2g[jet.i4(m1, j, i, l)] -
               jet.d2g[jet.i4(m1, l, i, j)];
    };
    auto d2C = [&](int m1, int m2, int l, int i, int j) {
        return jet.d3g[jet.i5(m1, m2, i, j, l)] + jet.d3g[jet.i5(m1, m2, j, i, l)] -
               jet.d3g[jet.i5(m1, m2, l, i, j)];
    };

    std::vector<double> gamma(static_cast<size_t>(n) * n * n, 0.0);
    std::vector<double> dgamma(static_cast<size_t>(n) * n * n * n, 0.0);   // [m][k][i][j]
    std::vector<double> d2gamma(static_cast<size_t>(n) * n * n * n * n, 0.0);  // [m1][m2][k][i][j]
    auto G = [&](int k, int i, int j) -> double& {
        return gamma[(static_cast<size_t>(k) * n + i) * n + j];
    };
    auto dG = [&](int m1, int k, int i, int j) -> double& {
        return dgamma[((static_cast<size_t>(m1) * n + k) * n + i) * n + j];
    };
    auto d2G = [&](int m1, int m2, int k, int i, int j) -> double& {
        return d2gamma[(((static_cast<size_t>(m1) * n + m2) * n + k) * n + i) * n + j];
    };

    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double s = 0.0;
                for (int l = 0; l < n; ++l) s += jet.ginv(k, l) * C(l, i, j);
                G(k, i, j) = 0.5 * s;
                G(k, j, i) = 0.5 * s;
            }
    for (int m1 = 0; m1 < n; ++m1)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    double s = 0.0;
                    for (int l = 0; l < n; ++l)
                        s += jet.dginv[jet.i3(m1, k, l)] * C(l, i, j) +
                             jet.ginv(k, l) * dC(m1, l, i, j);
                    dG(m1, k, i, j) = 0.5 * s;
                    dG(m1, k, j, i) = 0.5 * s;
                }
    for (int m1 = 0; m1 < n; ++m1)
        for (int m2 = 0; m2 < n; ++m2)
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < n; ++i)
                    for (int j = i; j < n; ++j) {
                        double s = 0.0;
                        for (int l = 0; l < n; ++l)
                            s += jet.d2ginv[jet.i4(m1, m2, k, l)] * C(l, i, j) +
                                 jet.dginv[jet.i3(m1, k, l)] * dC(m2, l, i, j) +
                                 jet.dginv[jet.i3(m2, k, l)] * dC(m1, l, i, j) +
                                 jet.ginv(k, l) * d2C(m1, m2, l, i, j);
                        d2G(m1, m2, k, i, j) = 0.5 * s;
                        d2G(m1, m2, k, j, i) = 0.5 * s;
                    }

    // Rup^m_{ijk} = d_i Gamma^m_jk - d_j Gamma^m_ik
    //            + Gamma^m_ip Gamma^p_jk - Gamma^m_jp Gamma^p_ik
    std::vector<double> rup(static_cast<size_t>(n) * n * n * n, 0.0);       // [m][i][j][k]
    std::vector<double> drup(static_cast<size_t>(n) * n * n * n * n, 0.0);  // [a][m][i][j][k]
    auto RU = [&](int m1, int i, int j, int k) -> double& {
        return rup[((static_cast<size_t>(m1) * n + i) * n + j) * n + k];
    };
    auto dRU = [&](int a, int m1, int i, int j, int k) -> double& {
        return drup[(((static_cast<size_t>(a) * n + m1) * n + i) * n + j) * n + k];
    };
    for (int m1 = 0; m1 < n; ++m1)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double s = dG(i, m1, j, k) - dG(j, m1, i, k);
                    for (int q = 0; q < n; ++q)
                        s += G(m1, i, q) * G(q, j, k) - G(m1, j, q) * G(q, i, k);
                    RU(m1, i, j, k) = s;
                }
    for (int a = 0; a < n; ++a)
        for (int m1 = 0; m1 < n; ++m1)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k) {
                        double s = d2G(a, i, m1, j, k) - d2G(a, j, m1, i, k);
                        for (int q = 0; q < n; ++q)
                            s += dG(a, m1, i, q) * G(q, j, k) + G(m1, i, q) * dG(a, q, j, k) -
                                 dG(a, m1, j, q) * G(q, i, k) - G(m1, j, q) * dG(a, q, i, k);
                        dRU(a, m1, i, j, k) = s;
                    }

    Tensor4 R(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double s = 0.0;
                    for (int m1 = 0; m1 < n; ++m1) s += jet.g(l, m1) * RU(m1, i, j, k);
                    R.at(i, j, k, l) = s;
                }

    // partial_a R_{ijkl}, then the covariant corrections.
    Tensor5 nR(n);
    for (int a = 0; a < n; ++a)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        double s = 0.0;
                        for (int m1 = 0; m1 < n; ++m1)
                            s += jet.dg[jet.i3(a, l, m1)] * RU(m1, i, j, k) +
                                 jet.g(l, m1) * dRU(a, m1, i, j, k);
                        for (int q = 0; q < n; ++q)
                            s -= G(q, a, i) * R.at(q, j, k, l) + G(q, a, j) * R.at(i, q, k, l) +
                                 G(q, a, k) * R.at(i, j, q, l) + G(q, a, l) * R.at(i, j, k, q);
                        nR.at(a, i, j, k, l) = s;
                    }

    Mat S = Mat::Zero(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            double s = 0.0;
            for (int i = 0; i < n; ++i)
                for (int l = 0; l < n; ++l) s += jet.ginv(i, l) * R.at(i, j, k, l);
            S(j, k) = s;
        }
    double tau = 0.0;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) tau += jet.ginv(j, k) * S(j, k);

    b->gamma = std::move(gamma);
    b->riemann = std::move(R);
    b->nabla_riemann = std::move(nR);
    b->ricci = std::move(S);
    b->scalar = tau;
    b->frame = orthonormal_frame(jet.g);
    return b;
}

}  // namespace

std::shared_ptr<const CurvatureBundle> bundle_at(const ChartManifold& m,
                                                 std::span<const double> p) {
    detail::ManifoldCaches& c = m.caches();
    std::vector<double> key(p.begin(), p.end());
    {
        std::lock_guard lock(c.mutex);
        auto it = c.bundles.find(key);
        if (it != c.bundles.end()) return it->second;
    }
    auto b = compute_bundle(m, p);
    std::lock_guard lock(c.mutex);
    auto [it, inserted] = c.bundles.emplace(std::move(key), b);
    return it->second;  // idempotent on concurrent insertion
}

std::vector<double> christoffels_at(const ChartManifold& m, std::span<const double> p) {
    return bundle_at(m, p)->gamma;
}

Tensor4 riemann_at(const ChartManifold& m, std::span<const double> p) {
    return bundle_at(m, p)->riemann;
}

Tensor5 nabla_riemann_at(const ChartManifold& m, std::span<const double> p) {
    return bundle_at(m, p)->nabla_riemann;
}

Mat ricci_at(const ChartManifold& m, std::span<const double> p) {
    return bundle_at(m, p)->ricci;
}

double scalar_at(const ChartManifold& m, std::span<const double> p) {
    return bundle_at(m, p)->scalar;
}

double sectional_curvature(const CurvatureBundle& b, const Vec& x, const Vec& y) {
    const PlaneClassification pc = classify_plane(b.g, x, y);
    if (pc.cls != PlaneClass::Nondegenerate)
        throw NumericError("sectional curvature undefined: plane rank " +
                           std::to_string(pc.rank));
    return b.riemann.apply(x, y, y, x) / pi1_apply(b.g, x, y, y, x);
}

double ricci_direction_curvature(const CurvatureBundle& b, const Vec& x) {
    const double gxx = x.dot(b.g * x);
    if (std::abs(gxx) <= 1e-9 * x.squaredNorm())
        throw NumericError("Ricci curvature undefined: isotropic direction");
    return x.dot(b.ricci * x) / gxx;
}

double holomorphic_sectional(const CurvatureBundle& b, const ComplexStructure& J,
                             const Vec& x) {
    const double gxx = x.dot(b.g * x);
    if (std::abs(gxx) <= 1e-9 * x.squaredNorm())
        throw NumericError("holomorphic curvature undefined: isotropic direction");
    const Vec Jx = J.apply(x);
    return b.riemann.apply(x, Jx, Jx, x) / (gxx * gxx);
}

Tensor4 weyl_at(const CurvatureBundle& b) {
    const int n = b.dim();
    if (n < 4)
        throw NumericError("Weyl-based tests require dimension >= 4 (n=3 unsupported)");
    Tensor4 W = b.riemann;
    W -= (1.0 / (n - 2)) * phi_build(b.g, b.ricci);
    W += (b.scalar / ((n - 1.0) * (n - 2.0))) * pi1_build(b.g);
    return W;
}

Tensor4 bochner_at(const CurvatureBundle& b, const ComplexStructure& J) {
    const int dim = b.dim();
    if (dim % 2 != 0 || dim < 4)
        throw NumericError("Bochner tensor requires even dimension >= 4");
    const double m = dim / 2.0;  // complex dimension
    Tensor4 B = b.riemann;
    Tensor4 phiS = phi_build(b.g, b.ricci);
    phiS += psi_build(b.g, J, b.ricci);
    B -= (1.0 / (2.0 * (m + 2.0))) * phiS;
    Tensor4 pis = pi1_build(b.g);
    pis += pi2_build(b.g, J);
    B += (b.scalar / (4.0 * (m + 1.0) * (m + 2.0))) * pis;
    return B;
}

}  // namespace ikg
