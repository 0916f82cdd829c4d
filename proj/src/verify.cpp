#include "ikg/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ikg/curvature.hpp"
#include "ikg/diffeo.hpp"
#include "ikg/error.hpp"
#include "ikg/geometry.hpp"
#include "ikg/predicates.hpp"
#include "ikg/zoo.hpp"

namespace ikg {

namespace {

std::vector<double> sample_point(const ChartManifold& m, Rng& rng) {
    std::vector<double> p(static_cast<size_t>(m.dim()));
    const auto& c = m.coords();
    for (int i = 0; i < m.dim(); ++i) {
        if (c[static_cast<size_t>(i)].rfind("th", 0) == 0)
            p[static_cast<size_t>(i)] = rng.uniform(0.4, 2.7);
        else if (c[static_cast<size_t>(i)] == "u")
            p[static_cast<size_t>(i)] = rng.uniform(0.5, 2.0);
        else
            p[static_cast<size_t>(i)] = rng.uniform(-0.3, 0.3);
    }
    return p;
}

Vec random_vec(int n, Rng& rng) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.normal();
    return v;
}

/// Random element of the pseudo-orthogonal group of eta (Cayley transform of
/// an eta-antisymmetric generator).
Mat random_pseudo_orthogonal(const Mat& eta, Rng& rng) {
    const int n = static_cast<int>(eta.rows());
    Mat W(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) W(i, j) = 0.4 * rng.normal();
    const Mat Wt = W.transpose();
    W = 0.5 * (W - Wt);
    const Mat A = eta * W;
    return (Mat::Identity(n, n) + A) * (Mat::Identity(n, n) - A).inverse();
}

/// Worst relative defect across the algebraic Riemann symmetries, first
/// Bianchi identity, and (separately) the differential Bianchi identity.
struct SymmetryDefects {
    double algebraic = 0.0;
    double differential = 0.0;
};

SymmetryDefects symmetry_defects(const CurvatureBundle& b) {
    SymmetryDefects d;
    const int n = b.dim();
    const double scale = 1.0 + b.riemann.max_abs();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const double r = b.riemann.at(i, j, k, l);
                    double w = std::abs(r + b.riemann.at(j, i, k, l));
                    w = std::max(w, std::abs(r + b.riemann.at(i, j, l, k)));
                    w = std::max(w, std::abs(r - b.riemann.at(k, l, i, j)));
                    w = std::max(w, std::abs(r + b.riemann.at(j, k, i, l) +
                                             b.riemann.at(k, i, j, l)));
                    d.algebraic = std::max(d.algebraic, w / scale);
                }
    const double dscale = 1.0 + b.nabla_riemann.max_abs();
    for (int a = 0; a < n; ++a)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l)
                        d.differential = std::max(
                            d.differential, std::abs(b.nabla_riemann.at(a, i, j, k, l) +
                                                     b.nabla_riemann.at(i, j, a, k, l) +
                                                     b.nabla_riemann.at(j, a, i, k, l)) /
                                                dscale);
    return d;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << x;
    return os.str();
}

struct SuiteBuilder {
    bool ok = true;
    std::ostringstream detail;
    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (detail.tellp() > 0) detail << "; ";
            detail << "FAIL " << what;
        }
    }
    void note(const std::string& what) {
        if (detail.tellp() > 0) detail << "; ";
        detail << what;
    }
    SuiteResult finish(const std::string& name) {
        return SuiteResult{name, ok, detail.str()};
    }
};

// --- suite bodies ----------------------------------------------------------

SuiteResult suite_curvature_symmetry(std::uint64_t seed) {
    SuiteBuilder sb;
    Rng rng(seed);
    double worst_alg = 0.0, worst_diff = 0.0;
    for (const auto& info : zoo_registry()) {
        if (info.kind != "manifold") continue;
        const auto m = instantiate_model(info.id);
        for (int k = 0; k < 10; ++k) {
            const auto b = bundle_at(m, sample_point(m, rng));
            const auto d = symmetry_defects(*b);
            worst_alg = std::max(worst_alg, d.algebraic);
            worst_diff = std::max(worst_diff, d.differential);
        }
    }
    sb.require(worst_alg <= 1e-10, "algebraic symmetry defect " + fmt(worst_alg));
    sb.require(worst_diff <= 1e-8, "differential Bianchi defect " + fmt(worst_diff));
    if (sb.ok)
        sb.note("symmetries " + fmt(worst_alg) + ", Bianchi II " + fmt(worst_diff) +
                " over all models x 10 points");
    return sb.finish("curvature_symmetry");
}

SuiteResult suite_anchors(std::uint64_t seed) {
    SuiteBuilder sb;
    Rng rng(seed);
    // flat charts: everything vanishes to machine precision
    double worst_flat = 0.0;
    for (int nu : {0, 1, 2}) {
        const auto m = zoo_flat(4, nu);
        const auto b = bundle_at(m, sample_point(m, rng));
        worst_flat = std::max({worst_flat, b->riemann.max_abs(), max_abs(b->ricci),
                               std::abs(b->scalar)});
    }
    sb.require(worst_flat <= 1e-12, "flat curvature " + fmt(worst_flat));

    // constant curvature c = 1: sectional curvature 1 on random planes, tau = 12
    const auto cc = zoo_const_curv(4, 1, 1.0);
    double worst_k = 0.0, worst_tau = 0.0;
    int planes = 0;
    for (int pi = 0; pi < 4; ++pi) {
        const auto b = bundle_at(cc, sample_point(cc, rng));
        worst_tau = std::max(worst_tau, std::abs(b->scalar - 12.0));
        while (planes < 50 * (pi + 1)) {
            const Vec x = random_vec(4, rng), y = random_vec(4, rng);
            if (classify_plane(b->g, x, y).cls != PlaneClass::Nondegenerate) continue;
            worst_k = std::max(worst_k, std::abs(sectional_curvature(*b, x, y) - 1.0));
            ++planes;
        }
    }
    sb.require(worst_k <= 1e-8, "sectional curvature defect " + fmt(worst_k));
    sb.require(worst_tau <= 1e-7, "scalar curvature defect " + fmt(worst_tau));
    if (sb.ok)
        sb.note("flat " + fmt(worst_flat) + ", K-1 " + fmt(worst_k) + " on 200 planes, tau-12 " +
                fmt(worst_tau));
    return sb.finish("anchors");
}

SuiteResult suite_algebraic_operators(std::uint64_t seed) {
    SuiteBuilder sb;
    Rng rng(seed);
    const int n = 4;
    const auto J = ComplexStructure::standard(n, {{0, 1}, {2, 3}});
    const Mat Jm = J.matrix();
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        // random nondegenerate symmetric metric, conditioned away from singular
        Mat A(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) A(i, j) = rng.normal();
        Mat d = Mat::Zero(n, n);
        for (int i = 0; i < n; ++i) d(i, i) = (i < 2 ? -1.0 : 1.0) * (1.0 + rng.uniform());
        const Mat g = A.transpose() * d * A + 0.0 * Mat::Identity(n, n);
        Mat Q0(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) Q0(i, j) = rng.normal();
        const Mat Q = 0.5 * (Q0 + Mat(Q0.transpose()));

        const Tensor4 p1 = pi1_build(g);
        const Tensor4 phig = phi_build(g, g);
        worst = std::max(worst, (phig - 2.0 * p1).max_abs() / (1.0 + p1.max_abs()));

        // frame contraction identities
        const auto fr = orthonormal_frame(g);
        const Tensor4 phiq = phi_build(g, Q);
        double trQ = 0.0;
        const Mat ginv = g.inverse();
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) trQ += ginv(a, b) * Q(a, b);
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                double cphi = 0.0, cpi1 = 0.0;
                for (int i = 0; i < n; ++i) {
                    const Vec& e = fr.vectors[static_cast<size_t>(i)];
                    Vec ey = Vec::Unit(n, y), ez = Vec::Unit(n, z);
                    cphi += fr.signs[static_cast<size_t>(i)] * phiq.apply(e, ey, ez, e);
                    cpi1 += fr.signs[static_cast<size_t>(i)] * pi1_apply(g, e, ey, ez, e);
                }
                const double want_phi = (n - 2) * Q(y, z) + trQ * g(y, z);
                worst = std::max(worst, std::abs(cphi - want_phi) / (1.0 + std::abs(want_phi)));
                const double want_pi1 = (n - 1) * g(y, z);
                worst = std::max(worst, std::abs(cpi1 - want_pi1) / (1.0 + std::abs(want_pi1)));
            }

        // pi2 = psi(g)/2 needs a Hermitian metric
        const Mat gh = 0.5 * (g + Mat(Jm.transpose() * g * Jm));
        const Tensor4 p2 = pi2_build(gh, J);
        const Tensor4 psig = psi_build(gh, J, gh);
        worst = std::max(worst, (p2 - 0.5 * psig).max_abs() / (1.0 + p2.max_abs()));
    }
    sb.require(worst <= 1e-8, "operator identity defect " + fmt(worst));

    // trace-free parts on models with nonvanishing Weyl / Bochner tensors
    const auto sp = zoo_sphere_product();
    const auto bsp = bundle_at(sp, sample_point(sp, rng));
    const Tensor4 W = weyl_at(*bsp);
    double wtrace = 0.0;
    for (int y = 0; y < 4; ++y)
        for (int z = 0; z < 4; ++z) {
            double c = 0.0;
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) c += bsp->ginv(a, b) * W.at(a, y, z, b);
            wtrace = std::max(wtrace, std::abs(c));
        }
    sb.require(wtrace <= 1e-8 * (1.0 + W.max_abs()), "Weyl trace " + fmt(wtrace));

    const auto kp = instantiate_model("kaehler_product");
    const auto bkp = bundle_at(kp, sample_point(kp, rng));
    const Tensor4 B = bochner_at(*bkp, *kp.complex_structure());
    double btrace = 0.0;
    for (int y = 0; y < 4; ++y)
        for (int z = 0; z < 4; ++z) {
            double c = 0.0;
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) c += bkp->ginv(a, b) * B.at(a, y, z, b);
            btrace = std::max(btrace, std::abs(c));
        }
    sb.require(btrace <= 1e-8 * (1.0 + B.max_abs()), "Bochner trace " + fmt(btrace));
    if (sb.ok)
        sb.note("identities " + fmt(worst) + ", Weyl trace " + fmt(wtrace) + ", Bochner trace " +
                fmt(btrace));
    return sb.finish("algebraic_operators");
}

SuiteResult suite_conformal_tools(std::uint64_t seed) {
    SuiteBuilder sb;
    Rng rng(seed);
    // Weyl conformal covariance: Wbar = e^{2 sigma} W for random sigma
    const auto sp = zoo_sphere_product();
    double worst_cov = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
        const double a = rng.uniform(0.05, 0.25);
        const double b = rng.uniform(0.05, 0.2);
        std::ostringstream st;
        st.precision(17);
        st << a << "*sin(th1) + " << b << "*th2*ph1";
        const Expr sigma = parse_expr(st.str(), sp.coords());
        const auto spc = conformal_change(sp, sigma, "_c" + std::to_string(trial));
        for (int k = 0; k < 3; ++k) {
            const auto p = sample_point(sp, rng);
            const Tensor4 W = weyl_at(*bundle_at(sp, p));
            const Tensor4 Wb = weyl_at(*bundle_at(spc, p));
            const double f = std::exp(2.0 * sigma.eval(p));
            worst_cov = std::max(worst_cov, (Wb - f * W).max_abs() / (1.0 + Wb.max_abs()));
        }
    }
    sb.require(worst_cov <= 1e-7, "Weyl covariance defect " + fmt(worst_cov));

    double worst_cf = 0.0;
    for (const char* id : {"conf_flat_one_var", "conf_flat_generic"}) {
        const auto m = instantiate_model(id);
        for (int k = 0; k < 5; ++k)
            worst_cf = std::max(worst_cf,
                                conformally_flat_defect(*bundle_at(m, sample_point(m, rng))));
    }
    sb.require(worst_cf <= 1e-8, "conformally-flat defect " + fmt(worst_cf));
    if (sb.ok) sb.note("covariance " + fmt(worst_cov) + ", flat-family Weyl " + fmt(worst_cf));
    return sb.finish("conformal_tools");
}

SuiteResult suite_quasi_constant(std::uint64_t seed) {
    SuiteBuilder sb;
    Rng rng(seed);
    const auto m = instantiate_model("conf_flat_one_var");  // e^{2 x1} eta, sigma = x1
    double worst_res = 0.0, worst_dir = 0.0, worst_plane = 0.0;
    for (int pi = 0; pi < 3; ++pi) {
        const auto p = sample_point(m, rng);
        const auto b = bundle_at(m, p);
        const auto fit = quasi_constant_fit(*b);
        if (fit.status != QuasiConstantFit::Status::Ok) {
            sb.require(false, "fit status not Ok at point " + std::to_string(pi));
            continue;
        }
        worst_res = std::max(worst_res, fit.residual);
        // distinguished direction must align with grad sigma = e1 (aux norm)
        Vec Vn = fit.V / fit.V.norm();
        const Vec e1 = Vec::Unit(4, 0);
        worst_dir = std::max(worst_dir, std::min((Vn - e1).norm(), (Vn + e1).norm()));
        const double epsV = fit.V.dot(b->g * fit.V);
        for (int k = 0; k < 20; ++k) {
            auto project = [&](const Vec& r) {
                return Vec(r - (r.dot(b->g * fit.V) / epsV) * fit.V);
            };
            const Vec w1 = project(random_vec(4, rng));
            const Vec w2 = project(random_vec(4, rng));
            if (classify_plane(b->g, w1, w2).cls == PlaneClass::Nondegenerate)
                worst_plane = std::max(
                    worst_plane, std::abs(sectional_curvature(*b, w1, w2) - fit.H));
            if (classify_plane(b->g, fit.V, w1).cls == PlaneClass::Nondegenerate) {
                const double want = fit.H + epsV * (fit.N - fit.H);
                worst_plane = std::max(
                    worst_plane, std::abs(sectional_curvature(*b, fit.V, w1) - want));
            }
        }
    }
    sb.require(worst_res <= 1e-7, "display residual " + fmt(worst_res));
    sb.require(worst_dir <= 1e-6, "direction defect " + fmt(worst_dir));
    sb.require(worst_plane <= 1e-7, "plane-curvature defect " + fmt(worst_plane));
    if (sb.ok)
        sb.note("residual " + fmt(worst_res) + ", V alignment " + fmt(worst_dir) +
                ", plane curvatures " + fmt(worst_plane));
    return sb.finish("quasi_constant");
}

SuiteResult suite_kn_star(std::uint64_t seed) {
    SuiteBuilder sb;
    Rng rng(seed);
    const auto pr = instantiate_model("pp_wave_recurrent");
    double worst_res = 0.0, worst_alpha = 0.0;
    for (double u : {0.5, 0.8, 1.2, 1.6, 2.0}) {
        const std::vector<double> p{u, rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3),
                                    rng.uniform(-0.3, 0.3)};
        const auto fit = kn_star_classify(pr, p);
        if (fit.cls != RecurrenceFit::Class::Recurrent) {
            sb.require(false, "not recurrent at u=" + std::to_string(u));
            continue;
        }
        worst_res = std::max(worst_res, fit.residual);
        worst_alpha = std::max(worst_alpha, std::abs(fit.alpha[0] - 1.0 / u));
        for (int i = 1; i < 4; ++i) worst_alpha = std::max(worst_alpha, std::abs(fit.alpha[i]));
    }
    sb.require(worst_res <= 1e-7, "recurrence residual " + fmt(worst_res));
    sb.require(worst_alpha <= 1e-6, "alpha vs d(ln u) defect " + fmt(worst_alpha));

    const auto ps = instantiate_model("pp_wave_symmetric");
    const std::vector<double> p{1.3, 0.1, 0.4, -0.2};
    const auto sym = kn_star_classify(ps, p, ps.recurrence_function());
    sb.require(sym.cls == RecurrenceFit::Class::SymmetricWalker,
               "symmetric model not classified as symmetric_walker");
    const auto unk = kn_star_classify(ps, p);
    sb.require(unk.cls == RecurrenceFit::Class::SymmetricUnclassified,
               "symmetric model without v not symmetric_unclassified");
    if (sb.ok)
        sb.note("recurrent residual " + fmt(worst_res) + ", alpha defect " + fmt(worst_alpha) +
                ", walker class ok");
    return sb.finish("kn_star");
}

SuiteResult suite_kaehler(std::uint64_t seed) {
    SuiteBuilder sb;
    Rng rng(seed);
    double worst = 0.0;
    for (const char* id : {"flat_kaehler", "const_hol", "kaehler_product"}) {
        const auto m = instantiate_model(id);
        std::vector<std::vector<double>> pts;
        for (int k = 0; k < 4; ++k) pts.push_back(sample_point(m, rng));
        const auto rep = kaehler_check(m, pts);
        sb.require(rep.passed(1e-8), std::string(id) + " fails the Kaehler conditions");
        worst = std::max({worst, rep.dphi_defect, rep.nabla_j_defect});
    }

    // Hermitian witness: the fundamental form is not closed, |dPhi| = 2 e^{2 x3}
    const auto w = instantiate_model("non_kaehler_hermitian");
    double worst_wit = 0.0;
    for (double x3 : {0.0, 0.5}) {
        const std::vector<std::vector<double>> pts{{0.1, -0.2, x3, 0.3}};
        const auto rep = kaehler_check(w, pts);
        const double want = 2.0 * std::exp(2.0 * x3);
        worst_wit = std::max(worst_wit, std::abs(rep.dphi_defect - want) / want);
        sb.require(rep.hermitian_defect <= 1e-9, "witness metric not Hermitian");
    }
    sb.require(worst_wit <= 0.1, "witness dPhi magnitude off by " + fmt(worst_wit));
    if (sb.ok)
        sb.note("Kaehler defects " + fmt(worst) + ", witness dPhi relative error " +
                fmt(worst_wit));
    return sb.finish("kaehler");
}

SuiteResult suite_constant_holomorphic(std::uint64_t seed) {
    SuiteBuilder sb;
    Rng rng(seed);
    const auto m = zoo_const_hol(2, 1, 2.0);
    const auto& J = *m.complex_structure();
    double worst_h = 0.0, worst_boch = 0.0, worst_id = 0.0;
    int used = 0;
    for (int pi = 0; pi < 4; ++pi) {
        const auto b = bundle_at(m, sample_point(m, rng));
        worst_boch = std::max(worst_boch,
                              bochner_at(*b, J).max_abs() / (1.0 + b->riemann.max_abs()));
        while (used < 25 * (pi + 1)) {
            const Vec x = random_vec(4, rng);
            const double q = x.dot(b->g * x);
            if (std::abs(q) < 0.1 * max_abs(b->g) * x.squaredNorm()) continue;
            worst_h = std::max(worst_h, std::abs(holomorphic_sectional(*b, J, x) - 2.0));
            worst_id = std::max(worst_id, bochner_zero_hol_identity_defect(*b, J, x));
            ++used;
        }
    }
    sb.require(worst_h <= 1e-8, "H(x) - c defect " + fmt(worst_h));
    sb.require(worst_boch <= 1e-8, "Bochner tensor " + fmt(worst_boch));
    sb.require(worst_id <= 1e-8, "Bochner-flat Ricci identity defect " + fmt(worst_id));
    if (sb.ok)
        sb.note("H-2 " + fmt(worst_h) + " on 100 vectors, Bochner " + fmt(worst_boch) +
                ", identity " + fmt(worst_id));
    return sb.finish("constant_holomorphic");
}

SuiteResult suite_null_cone_lemma(std::uint64_t seed) {
    SuiteBuilder sb;
    Rng rng(seed);
    Mat eta = Mat::Identity(4, 4);
    eta(0, 0) = eta(1, 1) = -1.0;
    auto qform = [&](const Vec& v) { return v.dot(eta * v); };

    // generic linear maps must be exposed by some isotropic direction
    int exposed = 0;
    for (int k = 0; k < 100; ++k) {
        Mat A(4, 4);
        bool fresh = false;
        while (!fresh) {
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) A(i, j) = rng.normal();
            // reject accidental conformal maps (A^T eta A proportional to eta)
            const Mat P = A.transpose() * eta * A;
            const double s = -P(0, 0);
            fresh = max_abs(Mat(P - s * eta)) > 1e-3 * (1.0 + max_abs(P));
        }
        bool found = false;
        for (int s = 0; s < 500 && !found; ++s) {
            const Vec xi = sample_isotropic(eta, rng);
            const Vec y = A * xi;
            found = std::abs(qform(y)) > 1e-6 * y.squaredNorm();
        }
        if (found) ++exposed;
    }
    sb.require(exposed == 100,
               "only " + std::to_string(exposed) + "/100 generic maps exposed");

    // scaled pseudo-orthogonal maps preserve the null cone
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const Mat B = rng.uniform(0.5, 2.0) * random_pseudo_orthogonal(eta, rng);
        for (int s = 0; s < 20; ++s) {
            const Vec xi = sample_isotropic(eta, rng);
            const Vec y = B * xi;
            worst = std::max(worst, std::abs(qform(y)) / y.squaredNorm());
        }
    }
    sb.require(worst <= 1e-10, "null-cone preservation defect " + fmt(worst));
    if (sb.ok) sb.note("100/100 generic maps exposed; conformal-group defect " + fmt(worst));
    return sb.finish("null_cone_lemma");
}

SuiteResult suite_limits(std::uint64_t seed) {
    SuiteBuilder sb;
    Rng rng(seed);
    auto run = [&](const DiffeoMap& f, LimitMode mode, double want, double tol,
                   const char* what) {
        Rng sub = rng.split(static_cast<std::uint64_t>(mode) + 101);
        const auto p = sample_point(f.source, sub);
        const auto rep = limit_ratio(f, mode, p, sub);
        sb.require(rep.converged, std::string(what) + " did not converge");
        sb.require(std::abs(rep.limit - want) <= tol,
                   std::string(what) + " limit " + fmt(rep.limit) + " != " + fmt(want));
        return rep.converged ? std::abs(rep.limit - want) : 1.0;
    };
    const double d1 = run(zoo_const_curv_boost(1, 0.4), LimitMode::PlaneWeak, 1.0, 1e-5,
                          "plane_weak");
    const double d2 = run(zoo_const_curv_boost(2, 0.4), LimitMode::PlaneStrong, 1.0, 1e-5,
                          "plane_strong");
    const double d3 = run(zoo_const_curv_boost(1, 0.4), LimitMode::Ricci, 1.0, 1e-5, "ricci");
    const auto kp = instantiate_model("kaehler_product");
    const double d4 = run(zoo_identity_map(kp, kp), LimitMode::Holo, 1.0, 1e-5, "holo");
    const double d5 =
        run(instantiate_map("homothety"), LimitMode::Ricci, 0.25, 1e-4, "homothety ricci");
    if (sb.ok)
        sb.note("limit defects: weak " + fmt(d1) + ", strong " + fmt(d2) + ", ricci " + fmt(d3) +
                ", holo " + fmt(d4) + ", homothety " + fmt(d5));
    return sb.finish("limits");
}

SuiteResult suite_preservation(std::uint64_t seed) {
    SuiteBuilder sb;
    Rng rng(seed);
    const auto iso = zoo_const_curv_boost(1, 0.6);
    std::vector<std::vector<double>> pts;
    for (int k = 0; k < 3; ++k) pts.push_back(sample_point(iso.source, rng));
    Rng r1 = rng.split(1);
    const auto sec = preservation_defect(iso, PreserveMode::Sectional, pts, r1, 200);
    Rng r2 = rng.split(2);
    const auto ric = preservation_defect(iso, PreserveMode::RicciUnit, pts, r2, 200);
    sb.require(sec.defect <= 1e-8, "isometry sectional defect " + fmt(sec.defect));
    sb.require(ric.defect <= 1e-8, "isometry ricci defect " + fmt(ric.defect));

    const auto hom = instantiate_map("homothety");
    std::vector<std::vector<double>> hpts;
    for (int k = 0; k < 3; ++k) hpts.push_back(sample_point(hom.source, rng));
    Rng r3 = rng.split(3);
    const auto hsec = preservation_defect(hom, PreserveMode::Sectional, hpts, r3, 200);
    sb.require(std::abs(hsec.defect - 0.75) <= 1e-6,
               "homothety sectional defect " + fmt(hsec.defect) + " != 0.75");
    if (sb.ok)
        sb.note("isometry " + fmt(std::max(sec.defect, ric.defect)) + ", homothety " +
                fmt(hsec.defect));
    return sb.finish("preservation");
}

SuiteResult suite_theorem_identities(std::uint64_t seed) {
    SuiteBuilder sb;
    Rng rng(seed);
    const auto flat = zoo_flat(4, 1);
    double worst = 0.0;
    for (const char* sig : {"0", "0.7"}) {
        const Expr sigma = parse_expr(sig, flat.coords());
        const auto [d22, dR] =
            theorem1_identities_defect(flat, sigma, sample_point(flat, rng));
        worst = std::max({worst, d22, dR});
    }
    sb.require(worst <= 1e-10, "conformal-change identity defect " + fmt(worst));

    // isotropic holomorphic-curvature comparison: isometry vs genuine homothety
    const auto kp = instantiate_model("kaehler_product");
    std::vector<std::vector<double>> pts;
    for (int k = 0; k < 3; ++k) pts.push_back(sample_point(kp, rng));
    Rng r1 = rng.split(11);
    const auto iso = corollary_lambda_check(zoo_identity_map(kp, kp), pts, r1);
    sb.require(std::abs(iso.lambda - 1.0) <= 1e-8, "isometry lambda " + fmt(iso.lambda));
    sb.require(iso.defect_lambda <= 1e-6 && iso.defect_lambda_sq <= 1e-6,
               "isometry defects " + fmt(iso.defect_lambda) + "/" + fmt(iso.defect_lambda_sq));
    sb.require(iso.consistent_with_isometry, "isometry not flagged consistent");

    Rng r2 = rng.split(12);
    const auto hom = corollary_lambda_check(zoo_identity_map(kp, scale_metric(kp, 4.0)), pts, r2);
    sb.require(std::abs(hom.lambda - 4.0) <= 1e-8, "homothety lambda " + fmt(hom.lambda));
    sb.require(hom.defect_lambda_sq > 1.0,
               "homothety lambda^2 defect " + fmt(hom.defect_lambda_sq) + " not flagged");
    sb.require(!hom.consistent_with_isometry, "homothety wrongly consistent");
    if (sb.ok)
        sb.note("identity defects " + fmt(worst) + "; isometry r1 " + fmt(iso.r1) +
                ", homothety lambda^2 gap " + fmt(hom.defect_lambda_sq));
    return sb.finish("theorem_identities");
}

}  // namespace

const std::vector<std::string>& verify_suite_names() {
    static const std::vector<std::string> names = {
        "curvature_symmetry", "anchors",        "algebraic_operators", "conformal_tools",
        "quasi_constant",     "kn_star",        "kaehler",             "constant_holomorphic",
        "null_cone_lemma",    "limits",         "preservation",        "theorem_identities",
    };
    return names;
}

SuiteResult run_verify_suite(const std::string& name, std::uint64_t seed) {
    if (name == "curvature_symmetry") return suite_curvature_symmetry(seed);
    if (name == "anchors") return suite_anchors(seed);
    if (name == "algebraic_operators") return suite_algebraic_operators(seed);
    if (name == "conformal_tools") return suite_conformal_tools(seed);
    if (name == "quasi_constant") return suite_quasi_constant(seed);
    if (name == "kn_star") return suite_kn_star(seed);
    if (name == "kaehler") return suite_kaehler(seed);
    if (name == "constant_holomorphic") return suite_constant_holomorphic(seed);
    if (name == "null_cone_lemma") return suite_null_cone_lemma(seed);
    if (name == "limits") return suite_limits(seed);
    if (name == "preservation") return suite_preservation(seed);
    if (name == "theorem_identities") return suite_theorem_identities(seed);
    throw InputError("unknown verification suite '" + name + "'");
}

std::vector<SuiteResult> run_all_suites(std::uint64_t seed) {
    std::vector<SuiteResult> out;
    for (const auto& n : verify_suite_names()) out.push_back(run_verify_suite(n, seed));
    return out;
}

}  // namespace ikg
