#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <set>

#include "doctest.h"
#include "ikg/error.hpp"
#include "ikg/geometry.hpp"
#include "ikg/rng.hpp"

using namespace ikg;

namespace {

Mat minkowski4() {
    Mat g = Mat::Identity(4, 4);
    g(0, 0) = -1.0;
    return g;
}

// Random symmetric nonsingular metric with prescribed signature, via a random
// congruence of diag(eps) -- gives an independent handle on the signs.
Mat random_metric(int n, int nu, Rng& rng) {
    Mat A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = rng.normal();
    A += 0.3 * static_cast<double>(n) * Mat::Identity(n, n);  // keep well-conditioned
    Mat d = Mat::Identity(n, n);
    for (int i = 0; i < nu; ++i) d(i, i) = -1.0;
    return A.transpose() * d * A;
}

Mat random_symmetric(int n, Rng& rng) {
    Mat q(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) q(i, j) = rng.normal();
    return Mat(0.5 * (q + q.transpose()));
}

Vec random_vec(int n, Rng& rng) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.normal();
    return v;
}

// Expands the four-term display directly; independent of phi_build's loops.
double phi_oracle(const Mat& g, const Mat& Q, const Vec& x, const Vec& y, const Vec& z,
                  const Vec& u) {
    auto gd = [&](const Vec& a, const Vec& b) { return a.dot(g * b); };
    auto qd = [&](const Vec& a, const Vec& b) { return a.dot(Q * b); };
    return gd(x, u) * qd(y, z) - gd(x, z) * qd(y, u) + gd(y, z) * qd(x, u) -
           gd(y, u) * qd(x, z);
}

// Six-term display, expanded independently.
double psi_oracle(const Mat& g, const Mat& J, const Mat& Q, const Vec& x, const Vec& y,
                  const Vec& z, const Vec& u) {
    auto gd = [&](const Vec& a, const Vec& b) { return a.dot(g * b); };
    auto qd = [&](const Vec& a, const Vec& b) { return a.dot(Q * b); };
    const Vec Jy = J * y, Jz = J * z, Ju = J * u;
    return gd(x, Ju) * qd(y, Jz) - gd(x, Jz) * qd(y, Ju) - 2.0 * gd(x, Jy) * qd(z, Ju) +
           gd(y, Jz) * qd(x, Ju) - gd(y, Ju) * qd(x, Jz) - 2.0 * gd(z, Ju) * qd(x, Jy);
}

}  // namespace

TEST_CASE("pi1 on the standard indefinite metric") {
    const Mat g = minkowski4();
    const Vec e1 = Vec::Unit(4, 0), e2 = Vec::Unit(4, 1), e3 = Vec::Unit(4, 2);
    CHECK(pi1_apply(g, e2, e3, e3, e2) == doctest::Approx(1.0));
    CHECK(pi1_apply(g, e1, e2, e2, e1) == doctest::Approx(-1.0));
    Rng rng(11);
    for (int k = 0; k < 20; ++k) {
        const Vec x = random_vec(4, rng), z = random_vec(4, rng), u = random_vec(4, rng);
        CHECK(std::abs(pi1_apply(g, x, x, z, u)) < 1e-12);
    }
}

TEST_CASE("phi of the metric itself is twice pi1") {
    Rng rng(21);
    for (int k = 0; k < 5; ++k) {
        const Mat g = random_metric(4, k % 3, rng);
        const Tensor4 lhs = phi_build(g, g);
        const Tensor4 p1 = pi1_build(g);
        Tensor4 diff = lhs;
        diff -= 2.0 * p1;
        CHECK(diff.max_abs() < 1e-12 * (1.0 + lhs.max_abs()));
    }
}

TEST_CASE("phi componentwise against the four-term expansion") {
    Rng rng(22);
    const Mat g = random_metric(4, 1, rng);
    const Mat Q = random_symmetric(4, rng);
    const Tensor4 t = phi_build(g, Q);
    for (int k = 0; k < 50; ++k) {
        const Vec x = random_vec(4, rng), y = random_vec(4, rng);
        const Vec z = random_vec(4, rng), u = random_vec(4, rng);
        const double a = t.apply(x, y, z, u);
        const double b = phi_oracle(g, Q, x, y, z, u);
        CHECK(a == doctest::Approx(b).epsilon(1e-10));
    }
    CHECK(phi_build(g, Mat::Zero(4, 4)).max_abs() == 0.0);
    Mat bad = Q;
    bad(0, 1) += 1.0;
    CHECK_THROWS_AS((void)phi_build(g, bad), InputError);
}

TEST_CASE("phi frame contraction identity") {
    Rng rng(23);
    for (int rep = 0; rep < 5; ++rep) {
        const int n = 4;
        const Mat g = random_metric(n, 1 + rep % 2, rng);
        const Mat Q = random_symmetric(n, rng);
        const Tensor4 t = phi_build(g, Q);
        const FrameResult fr = orthonormal_frame(g);
        const Mat ginv = g.inverse();
        const double trQ = (ginv * Q).trace();
        const Vec y = random_vec(n, rng), z = random_vec(n, rng);
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            s += fr.signs[static_cast<size_t>(i)] *
                 t.apply(fr.vectors[static_cast<size_t>(i)], y, z,
                         fr.vectors[static_cast<size_t>(i)]);
        const double expect = (n - 2) * y.dot(Q * z) + trQ * y.dot(g * z);
        CHECK(s == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("psi display values and symmetries") {
    const Mat g = Mat::Identity(4, 4);
    const auto J = ComplexStructure::standard(4, {{0, 1}, {2, 3}});
    const Tensor4 psig = psi_build(g, J, g);
    const Vec e1 = Vec::Unit(4, 0);
    const Vec Je1 = J.apply(e1);
    CHECK(psig.apply(e1, Je1, Je1, e1) == doctest::Approx(6.0));
    CHECK(psi_build(g, J, Mat::Zero(4, 4)).max_abs() == 0.0);

    Rng rng(31);
    const Mat Jm = J.matrix();
    // componentwise agreement with the expanded display, generic Q
    {
        const Mat Q = random_symmetric(4, rng);
        const Tensor4 t = psi_build(g, J, Q);
        for (int k = 0; k < 40; ++k) {
            const Vec x = random_vec(4, rng), y = random_vec(4, rng);
            const Vec z = random_vec(4, rng), u = random_vec(4, rng);
            CHECK(t.apply(x, y, z, u) ==
                  doctest::Approx(psi_oracle(g, Jm, Q, x, y, z, u)).epsilon(1e-10));
        }
    }
    // curvature symmetries need a Hermitian Q (Q(Jx,Jy) = Q(x,y)), the case
    // of the Ricci tensor this operator is applied to
    {
        const Mat Q0 = random_symmetric(4, rng);
        const Mat Q = 0.5 * (Q0 + Jm.transpose() * Q0 * Jm);
        const Tensor4 t = psi_build(g, J, Q);
        for (int k = 0; k < 40; ++k) {
            const Vec x = random_vec(4, rng), y = random_vec(4, rng);
            const Vec z = random_vec(4, rng), u = random_vec(4, rng);
            const double v = t.apply(x, y, z, u);
            CHECK(v == doctest::Approx(-t.apply(y, x, z, u)).epsilon(1e-10));
            CHECK(v == doctest::Approx(-t.apply(x, y, u, z)).epsilon(1e-10));
            CHECK(v == doctest::Approx(t.apply(z, u, x, y)).epsilon(1e-10));
        }
    }
}

TEST_CASE("curvature-type symmetries of phi and first Bianchi sum") {
    Rng rng(32);
    const Mat g = random_metric(4, 1, rng);
    const Mat Q = random_symmetric(4, rng);
    const Tensor4 t = phi_build(g, Q);
    for (int k = 0; k < 40; ++k) {
        const Vec x = random_vec(4, rng), y = random_vec(4, rng);
        const Vec z = random_vec(4, rng), u = random_vec(4, rng);
        const double v = t.apply(x, y, z, u);
        CHECK(v == doctest::Approx(-t.apply(y, x, z, u)).epsilon(1e-10));
        CHECK(v == doctest::Approx(-t.apply(x, y, u, z)).epsilon(1e-10));
        CHECK(v == doctest::Approx(t.apply(z, u, x, y)).epsilon(1e-10));
        const double bianchi =
            t.apply(x, y, z, u) + t.apply(y, z, x, u) + t.apply(z, x, y, u);
        CHECK(std::abs(bianchi) < 1e-10 * (1.0 + t.max_abs()));
    }
}

TEST_CASE("pi2 is half of psi(g) and has the quartic normalization") {
    Rng rng(41);
    for (int rep = 0; rep < 4; ++rep) {
        // Hermitian random metric: average a random one over J
        const auto J = ComplexStructure::standard(4, {{0, 1}, {2, 3}});
        const Mat Jm = J.matrix();
        Mat g0 = random_metric(4, 2, rng);
        Mat g = 0.5 * (g0 + Jm.transpose() * g0 * Jm);
        if (std::abs(g.determinant()) < 1e-6) continue;
        Tensor4 p2 = pi2_build(g, J);
        Tensor4 half_psi = psi_build(g, J, g);
        half_psi *= 0.5;
        Tensor4 diff = p2;
        diff -= half_psi;
        CHECK(diff.max_abs() < 1e-12 * (1.0 + p2.max_abs()));
        for (int k = 0; k < 20; ++k) {
            const Vec x = random_vec(4, rng);
            const double gxx = x.dot(g * x);
            const Vec Jx = J.apply(x);
            CHECK(p2.apply(x, Jx, Jx, x) ==
                  doctest::Approx(3.0 * gxx * gxx).epsilon(1e-9));
            const Vec y = random_vec(4, rng), z = random_vec(4, rng), u = random_vec(4, rng);
            CHECK(p2.apply(x, y, z, u) ==
                  doctest::Approx(p2.apply(z, u, x, y)).epsilon(1e-10));
        }
    }
}

TEST_CASE("pi2 vanishes to fourth order on isotropic directions") {
    const Mat g = (Mat(4, 4) << -1, 0, 0, 0, 0, -1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1).finished();
    const auto J = ComplexStructure::standard(4, {{0, 1}, {2, 3}});
    const Tensor4 p2 = pi2_build(g, J);
    Rng rng(42);
    for (int k = 0; k < 30; ++k) {
        const Vec xi = sample_isotropic(g, rng);
        const Vec Jxi = J.apply(xi);
        CHECK(std::abs(p2.apply(xi, Jxi, Jxi, xi)) < 1e-9 * std::pow(xi.norm(), 4));
    }
}

TEST_CASE("rank-one form of a unit vector") {
    const Mat g = minkowski4();
    const Vec e2 = Vec::Unit(4, 1);
    const Mat B = rank1_form_build(g, e2);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(B(i, j) == doctest::Approx(i == 1 && j == 1 ? 1.0 : 0.0));
    CHECK(e2.dot(B * e2) == doctest::Approx(1.0));
    Rng rng(43);
    for (int k = 0; k < 20; ++k) {
        Vec x = random_vec(4, rng);
        x -= (x.dot(g * e2)) * e2;  // now g(x, e2) = 0
        CHECK(std::abs(x.dot(B * x)) < 1e-12);
    }
    CHECK_THROWS_AS((void)rank1_form_build(g, Vec(2.0 * e2)), InputError);
}

TEST_CASE("pseudo-orthonormal frames") {
    const Mat eta = minkowski4();
    const FrameResult f1 = orthonormal_frame(eta);
    CHECK(f1.signs == std::vector<int>{-1, 1, 1, 1});
    const FrameResult f4 = orthonormal_frame(Mat(4.0 * eta));
    CHECK(f4.signs == std::vector<int>{-1, 1, 1, 1});
    for (const auto& v : f4.vectors) CHECK(v.norm() == doctest::Approx(0.5));

    Rng rng(51);
    for (int rep = 0; rep < 10; ++rep) {
        const int nu = rep % 4;
        const Mat g = random_metric(4, nu, rng);
        const FrameResult fr = orthonormal_frame(g);
        int negs = 0;
        for (int i = 0; i < 4; ++i) {
            if (fr.signs[static_cast<size_t>(i)] < 0) ++negs;
            for (int j = 0; j < 4; ++j) {
                const double gij =
                    fr.vectors[static_cast<size_t>(i)].dot(g * fr.vectors[static_cast<size_t>(j)]);
                const double expect = (i == j) ? fr.signs[static_cast<size_t>(i)] : 0.0;
                CHECK(std::abs(gij - expect) < 1e-9);
            }
        }
        CHECK(negs == nu);
    }
}

TEST_CASE("plane degeneracy classes") {
    const Mat eta = minkowski4();
    const Vec e1 = Vec::Unit(4, 0), e2 = Vec::Unit(4, 1), e3 = Vec::Unit(4, 2);
    CHECK(classify_plane(eta, e2, e3).cls == PlaneClass::Nondegenerate);
    CHECK(classify_plane(eta, e2, e3).rank == 2);
    CHECK(classify_plane(eta, Vec(e1 + e2), e3).cls == PlaneClass::WeaklyDegenerate);
    CHECK(classify_plane(eta, Vec(e1 + e2), e3).rank == 1);

    Mat eta2 = Mat::Identity(4, 4);
    eta2(0, 0) = eta2(1, 1) = -1.0;
    const Vec e4 = Vec::Unit(4, 3);
    CHECK(classify_plane(eta2, Vec(e1 + e3), Vec(e2 + e4)).cls ==
          PlaneClass::StronglyDegenerate);
    CHECK(classify_plane(eta2, Vec(e1 + e3), Vec(e2 + e4)).rank == 0);

    CHECK_THROWS_AS((void)classify_plane(eta, e2, Vec(3.0 * e2)), InputError);
}

TEST_CASE("plane classification is basis independent") {
    Rng rng(52);
    const Mat g = random_metric(4, 2, rng);
    for (int rep = 0; rep < 5; ++rep) {
        const Vec x = random_vec(4, rng), y = random_vec(4, rng);
        const auto base = classify_plane(g, x, y);
        for (int k = 0; k < 20; ++k) {
            double a, b, c, d;
            do {
                a = rng.uniform(-2, 2);
                b = rng.uniform(-2, 2);
                c = rng.uniform(-2, 2);
                d = rng.uniform(-2, 2);
            } while (std::abs(a * d - b * c) < 0.05);
            const auto re = classify_plane(g, Vec(a * x + b * y), Vec(c * x + d * y));
            CHECK(re.cls == base.cls);
            CHECK(re.rank == base.rank);
        }
    }
}

TEST_CASE("isotropic vectors") {
    const Mat eta = minkowski4();
    const Vec e1 = Vec::Unit(4, 0), e2 = Vec::Unit(4, 1);
    CHECK(is_isotropic(eta, Vec(e1 + e2)));
    CHECK_FALSE(is_isotropic(eta, e2));
    CHECK_FALSE(is_isotropic(eta, Vec(Vec::Zero(4))));
}

TEST_CASE("isotropic sampling") {
    Mat g2 = Mat::Identity(2, 2);
    g2(0, 0) = -1.0;
    Rng rng(61);
    for (int k = 0; k < 50; ++k) {
        const Vec xi = sample_isotropic(g2, rng);
        CHECK(std::abs(xi.dot(g2 * xi)) < 1e-12 * xi.squaredNorm());
        // in 2d the isotropic cone is +-(e1 +- e2)
        CHECK(std::abs(std::abs(xi[0]) - std::abs(xi[1])) < 1e-9);
    }
    CHECK_THROWS_AS((void)sample_isotropic(Mat(Mat::Identity(2, 2)), rng), NumericError);

    Mat g4 = Mat::Identity(4, 4);
    g4(0, 0) = g4(1, 1) = -1.0;
    std::set<int> bins;
    for (int k = 0; k < 1000; ++k) {
        const Vec xi = sample_isotropic(g4, rng);
        CHECK(is_isotropic(g4, xi));
        const int b1 = static_cast<int>(std::floor((std::atan2(xi[1], xi[0]) + 3.15) / 0.8));
        const int b2 = static_cast<int>(std::floor((std::atan2(xi[3], xi[2]) + 3.15) / 0.8));
        bins.insert(b1 * 16 + b2);
    }
    CHECK(bins.size() >= 61);  // >= 95% of the 8x8 coarse angular histogram
}

TEST_CASE("holomorphic planes") {
    const auto J = ComplexStructure::standard(4, {{0, 1}, {2, 3}});
    Rng rng(71);
    for (int k = 0; k < 20; ++k) {
        const Vec x = random_vec(4, rng);
        CHECK(is_holomorphic_plane(J, x, J.apply(x)));
    }
    const Vec e1 = Vec::Unit(4, 0), e3 = Vec::Unit(4, 2);
    CHECK_FALSE(is_holomorphic_plane(J, e1, e3));

    // indefinite Kaehler signature (2,2): the holomorphic plane of an
    // isotropic vector is strongly degenerate
    Mat g = Mat::Identity(4, 4);
    g(0, 0) = g(1, 1) = -1.0;
    const Vec xi = e1 + e3;
    CHECK(is_holomorphic_plane(J, xi, J.apply(xi)));
    CHECK(classify_plane(g, xi, J.apply(xi)).cls == PlaneClass::StronglyDegenerate);
    for (int k = 0; k < 30; ++k) {
        const Vec z = sample_isotropic(g, rng);
        CHECK(classify_plane(g, z, J.apply(z)).cls == PlaneClass::StronglyDegenerate);
    }
}
