#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "ikg/diffeo.hpp"
#include "ikg/error.hpp"
#include "ikg/geometry.hpp"
#include "ikg/predicates.hpp"
#include "ikg/rng.hpp"
#include "ikg/zoo.hpp"

using namespace ikg;

namespace {

Vec random_vec(int n, Rng& rng) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.normal();
    return v;
}

std::vector<double> small_point(int n, Rng& rng) {
    std::vector<double> p(static_cast<size_t>(n));
    for (auto& x : p) x = rng.uniform(-0.3, 0.3);
    return p;
}

std::vector<std::vector<double>> small_points(int n, int count, Rng& rng) {
    std::vector<std::vector<double>> pts;
    for (int k = 0; k < count; ++k) pts.push_back(small_point(n, rng));
    return pts;
}

// Random eta-orthogonal matrix via the Cayley transform of an
// eta-antisymmetric generator: B = (I + eta W)(I - eta W)^-1, W^T = -W.
Mat random_pseudo_orthogonal(const Mat& eta, Rng& rng) {
    const int n = static_cast<int>(eta.rows());
    Mat W(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) W(i, j) = 0.3 * rng.normal();
    const Mat Wt = W.transpose();
    W = 0.5 * (W - Wt);
    const Mat A = eta * W;
    const Mat I = Mat::Identity(n, n);
    return (I + A) * (I - A).inverse();
}

}  // namespace

TEST_CASE("pushforward basics") {
    Rng rng(1);
    const auto flat = zoo_flat(4, 1);
    const auto id = zoo_identity_map(flat, flat);
    const auto dbl = zoo_linear_map(flat, flat, Mat(2.0 * Mat::Identity(4, 4)));
    const auto boost = zoo_lorentz_boost(0.7);
    Mat eta = Mat::Identity(4, 4);
    eta(0, 0) = -1.0;
    for (int k = 0; k < 20; ++k) {
        const auto p = small_point(4, rng);
        const Vec v = random_vec(4, rng), w = random_vec(4, rng);
        CHECK(max_abs(Vec(pushforward(id, p, v) - v)) == 0.0);
        CHECK(max_abs(Vec(pushforward(dbl, p, v) - 2.0 * v)) < 1e-12);
        const Vec bv = pushforward(boost, p, v), bw = pushforward(boost, p, w);
        CHECK(bv.dot(eta * bw) == doctest::Approx(v.dot(eta * w)).epsilon(1e-12));
    }
}

TEST_CASE("pullback metric") {
    Rng rng(2);
    const auto flat = zoo_flat(4, 1);
    const auto id = zoo_identity_map(flat, flat);
    const auto p = small_point(4, rng);
    CHECK(max_abs(Mat(pullback_metric_at(id, p) - metric_at(flat, p))) == 0.0);

    const auto dbl = zoo_linear_map(flat, flat, Mat(2.0 * Mat::Identity(4, 4)));
    CHECK(max_abs(Mat(pullback_metric_at(dbl, p) - 4.0 * metric_at(flat, p))) < 1e-12);

    const auto inv = zoo_inversion();
    const std::vector<double> q{0.4, 1.5, 0.2, -0.3};
    const Mat P = pullback_metric_at(inv, q);
    CHECK(max_abs(Mat(P - P.transpose())) < 1e-12 * (1.0 + max_abs(P)));

    // the stored inverse really inverts the map at sample points
    for (int k = 0; k < 5; ++k) {
        auto r = small_point(4, rng);
        r[1] += 1.2;  // stay off the null cone of <x,x>
        const auto fr = inv.map_point(r);
        DiffeoMap back{inv.target, inv.source, *inv.inverse, inv.components};
        const auto rr = back.map_point(fr);
        for (int i = 0; i < 4; ++i)
            CHECK(rr[static_cast<size_t>(i)] ==
                  doctest::Approx(r[static_cast<size_t>(i)]).epsilon(1e-8));
    }
}

TEST_CASE("conformal classification") {
    Rng rng(3);
    const auto pts = small_points(4, 6, rng);

    const auto hom = instantiate_map("homothety");
    const auto rh = conformal_classify(hom, pts);
    CHECK(rh.cls == ConformalClass::Homothety);
    for (double s : rh.sigma) CHECK(s == doctest::Approx(std::log(2.0)).epsilon(1e-10));
    CHECK(rh.grad_class == GradientClass::Zero);

    const auto boost = zoo_lorentz_boost(0.5);
    CHECK(conformal_classify(boost, pts).cls == ConformalClass::Isometry);

    const auto inv = zoo_inversion();
    std::vector<std::vector<double>> far;
    for (int k = 0; k < 10; ++k) {
        auto p = small_point(4, rng);
        p[1] += 1.5;
        far.push_back(p);
    }
    const auto ri = conformal_classify(inv, far);
    CHECK(ri.cls == ConformalClass::ConformalNonconstant);
    for (size_t k = 0; k < far.size(); ++k) {
        const auto& p = far[k];
        const double q = -p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3];
        CHECK(ri.lambda[k] == doctest::Approx(1.0 / (q * q)).epsilon(1e-8));
    }

    CHECK(conformal_classify(instantiate_map("nonconformal_linear"), pts).cls ==
          ConformalClass::NotConformal);

    CHECK_THROWS_AS(
        (void)conformal_classify(boost, std::vector<std::vector<double>>{pts[0]}),
        InputError);
}

TEST_CASE("conformal class is stable under precomposed isometries") {
    Rng rng(4);
    Mat eta = Mat::Identity(4, 4);
    eta(0, 0) = eta(1, 1) = -1.0;
    const auto flat = zoo_flat(4, 2);
    const auto pts = small_points(4, 4, rng);
    Mat A(4, 4);
    A << 1.0, 0.3, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.2, 0.1, 0.0, 0.0, 1.0;
    const auto base = conformal_classify(zoo_linear_map(flat, flat, A), pts).cls;
    for (int k = 0; k < 10; ++k) {
        const Mat B = random_pseudo_orthogonal(eta, rng);
        const auto f = zoo_linear_map(flat, flat, Mat(A * B));
        CHECK(conformal_classify(f, pts).cls == base);
    }
}

TEST_CASE("gradient class of the conformal factor") {
    Rng rng(5);
    const auto flat = zoo_flat(4, 1);
    const auto pts = small_points(4, 5, rng);

    // spacelike gradient: sigma = x2
    const Expr s1 = parse_expr("x2", flat.coords());
    const auto f1 = zoo_identity_map(flat, conformal_change(flat, s1));
    const auto r1 = conformal_classify(f1, pts, s1);
    CHECK(r1.cls == ConformalClass::ConformalNonconstant);
    CHECK(r1.grad_class == GradientClass::Nonnull);
    CHECK(r1.grad_path == "symbolic");

    // isotropic gradient: sigma = x1 + x2 has g(grad, grad) = 0 in eta
    const Expr s2 = parse_expr("x1 + x2", flat.coords());
    const auto f2 = zoo_identity_map(flat, conformal_change(flat, s2));
    CHECK(conformal_classify(f2, pts, s2).grad_class == GradientClass::Isotropic);

    // same answers through the finite-difference path
    const auto r1fd = conformal_classify(f1, pts);
    CHECK(r1fd.grad_class == GradientClass::Nonnull);
    CHECK(r1fd.grad_path == "finite-difference");
    CHECK(conformal_classify(f2, pts).grad_class == GradientClass::Isotropic);
}

TEST_CASE("null-cone preservation at the linear level") {
    Rng rng(6);
    Mat eta = Mat::Identity(4, 4);
    eta(0, 0) = eta(1, 1) = -1.0;

    // scaled pseudo-orthogonal maps keep every sampled null vector null
    for (int k = 0; k < 100; ++k) {
        const Mat B = rng.uniform(0.5, 2.0) * random_pseudo_orthogonal(eta, rng);
        for (int s = 0; s < 20; ++s) {
            const Vec xi = sample_isotropic(eta, rng);
            const Vec bxi = B * xi;
            CHECK(std::abs(bxi.dot(eta * bxi)) <= 1e-10 * bxi.squaredNorm());
        }
    }

    // generic linear maps (A^T eta A not proportional to eta) do not
    for (int k = 0; k < 100; ++k) {
        Mat A(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) A(i, j) = rng.normal();
        const Mat G = A.transpose() * eta * A;
        const double scale = (G.array() * eta.array()).sum() / 4.0;
        if (max_abs(Mat(G - scale * eta)) < 1e-3 * (1.0 + max_abs(G))) continue;
        bool exposed = false;
        for (int s = 0; s < 500 && !exposed; ++s) {
            const Vec xi = sample_isotropic(eta, rng);
            const Vec axi = A * xi;
            if (std::abs(axi.dot(eta * axi)) > 1e-6 * axi.squaredNorm()) exposed = true;
        }
        CHECK(exposed);
    }
}

TEST_CASE("preservation defects") {
    Rng rng(7);
    const auto pts = small_points(4, 4, rng);

    const auto id = instantiate_map("identity");
    // flat: every sectional curvature is 0 on both sides
    CHECK(preservation_defect(id, PreserveMode::Sectional, pts, rng, 100).defect == 0.0);

    const auto iso = zoo_const_curv_boost(1, 0.6);
    CHECK(preservation_defect(iso, PreserveMode::Sectional, pts, rng, 100).defect <= 1e-8);
    CHECK(preservation_defect(iso, PreserveMode::RicciUnit, pts, rng, 100).defect <= 1e-8);

    const auto hom = instantiate_map("homothety");  // gbar = 4g on the c=1 model
    const auto rs = preservation_defect(hom, PreserveMode::Sectional, pts, rng, 100);
    CHECK(rs.defect == doctest::Approx(0.75).epsilon(1e-6));
    CHECK(rs.defect > 0.1);
    CHECK(rs.used > 0);
}

TEST_CASE("curvature-ratio limits") {
    Rng rng(8);
    const std::vector<double> p{0.1, -0.2, 0.15, 0.05};

    const auto iso1 = zoo_const_curv_boost(1, 0.4);
    for (const auto mode : {LimitMode::PlaneWeak, LimitMode::Ricci}) {
        const auto rep = limit_ratio(iso1, mode, p, rng);
        CHECK(rep.converged);
        CHECK(rep.limit == doctest::Approx(1.0).epsilon(1e-5));
    }

    const auto iso2 = zoo_const_curv_boost(2, 0.4);  // signature (2,2)
    const auto rs = limit_ratio(iso2, LimitMode::PlaneStrong, p, rng);
    CHECK(rs.converged);
    CHECK(rs.limit == doctest::Approx(1.0).epsilon(1e-5));
    // strongly degenerate seed planes need two orthogonal isotropic legs
    CHECK_THROWS_AS((void)limit_ratio(iso1, LimitMode::PlaneStrong, p, rng), NumericError);

    const auto kp = zoo_kaehler_product(1.0, 2.0, true);
    const auto kiso = zoo_identity_map(kp, kp);
    const auto rh = limit_ratio(kiso, LimitMode::Holo, p, rng);
    CHECK(rh.converged);
    CHECK(rh.limit == doctest::Approx(1.0).epsilon(1e-5));

    const auto hom = instantiate_map("homothety");
    const auto rr = limit_ratio(hom, LimitMode::Ricci, p, rng);
    CHECK(rr.converged);
    CHECK(rr.limit == doctest::Approx(0.25).epsilon(1e-4));

    // flat source: the denominator vanishes along every family
    const auto idf = instantiate_map("identity");
    try {
        (void)limit_ratio(idf, LimitMode::Ricci, p, rng);
        FAIL("expected a zero-denominator diagnostic");
    } catch (const NumericError& e) {
        CHECK(std::string(e.what()).find("denominator identically zero") !=
              std::string::npos);
    }

    // non-holomorphic map is rejected before any numerics
    const auto nh = instantiate_map("nonholomorphic_linear");
    try {
        (void)limit_ratio(nh, LimitMode::Holo, p, rng);
        FAIL("expected a holomorphy rejection");
    } catch (const NumericError& e) {
        CHECK(std::string(e.what()).find("not holomorphic") != std::string::npos);
    }
}

TEST_CASE("conformal-change curvature identities") {
    Rng rng(9);
    const auto flat = zoo_flat(4, 1);
    const auto p = small_point(4, rng);

    const auto [a0, b0] = theorem1_identities_defect(flat, Expr::constant(0.0), p);
    CHECK(a0 <= 1e-10);
    CHECK(b0 <= 1e-10);
    const auto [a1, b1] = theorem1_identities_defect(flat, Expr::constant(0.7), p);
    CHECK(a1 <= 1e-10);
    CHECK(b1 <= 1e-10);

    const auto cc = zoo_const_curv(4, 1, 1.0);
    const Expr sig = parse_expr("0.3*x2", cc.coords());
    const auto [a2, b2] = theorem1_identities_defect(cc, sig, p);
    CHECK(a2 > 1e-3);
    (void)b2;
}

TEST_CASE("constant-factor pullback of the quartic curvature expression") {
    Rng rng(10);
    const auto kp = zoo_kaehler_product(1.0, 2.0, true);
    const auto pts = small_points(4, 3, rng);

    const auto iso = zoo_identity_map(kp, kp);
    const auto r1 = corollary_lambda_check(iso, pts, rng);
    CHECK(r1.lambda == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r1.defect_lambda <= 1e-6);
    CHECK(r1.defect_lambda_sq <= 1e-6);
    CHECK(r1.consistent_with_isometry);

    const auto hom = zoo_identity_map(kp, scale_metric(kp, 4.0));
    const auto r4 = corollary_lambda_check(hom, pts, rng);
    CHECK(r4.lambda == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(r4.r1 == doctest::Approx(4.0).epsilon(1e-8));
    CHECK(r4.defect_lambda <= 1e-6);
    CHECK(r4.defect_lambda_sq > 1.0);
    CHECK_FALSE(r4.consistent_with_isometry);

    const auto fk = zoo_flat_kaehler(4, 2);
    CHECK_THROWS_AS((void)corollary_lambda_check(zoo_identity_map(fk, fk), pts, rng),
                    NumericError);
}
