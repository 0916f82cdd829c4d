#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "ikg/curvature.hpp"
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

}  // namespace

TEST_CASE("Einstein defect") {
    Rng rng(1);
    const auto flat = zoo_flat(4, 1);
    CHECK(einstein_defect(*bundle_at(flat, small_point(4, rng))) == 0.0);

    const auto cc = zoo_const_curv(4, 1, 1.0);
    CHECK(einstein_defect(*bundle_at(cc, small_point(4, rng))) <= 1e-9);

    const auto cf = instantiate_model("conf_flat_one_var");
    CHECK(einstein_defect(*bundle_at(cf, std::vector<double>{0, 0, 0, 0})) > 0.05);
}

TEST_CASE("conformal flatness defect") {
    Rng rng(2);
    const auto cf = instantiate_model("conf_flat_generic");
    for (int k = 0; k < 4; ++k)
        CHECK(conformally_flat_defect(*bundle_at(cf, small_point(4, rng))) <= 1e-8);

    const auto cc = zoo_const_curv(4, 1, 1.0);
    CHECK(conformally_flat_defect(*bundle_at(cc, small_point(4, rng))) <= 1e-9);

    const auto sp = zoo_sphere_product();
    CHECK(conformally_flat_defect(*bundle_at(sp, std::vector<double>{1.1, 0.4, 0.9, 2.0})) >
          0.01);
}

TEST_CASE("constant-curvature fit") {
    Rng rng(3);
    const auto flat = zoo_flat(4, 2);
    const auto ff = constant_curvature_fit(*bundle_at(flat, small_point(4, rng)));
    CHECK(ff.c == 0.0);
    CHECK(ff.residual == 0.0);

    const auto cc = zoo_const_curv(4, 1, 1.0);
    const auto fc = constant_curvature_fit(*bundle_at(cc, small_point(4, rng)));
    CHECK(fc.c == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(fc.residual <= 1e-8);

    const auto sp = zoo_sphere_product();
    CHECK(constant_curvature_fit(*bundle_at(sp, std::vector<double>{1.1, 0.4, 0.9, 2.0}))
              .residual > 0.1);
}

TEST_CASE("constant holomorphic curvature fit") {
    Rng rng(4);
    const auto fk = zoo_flat_kaehler(4, 2);
    const auto f0 = constant_hol_curvature_fit(*bundle_at(fk, small_point(4, rng)),
                                               *fk.complex_structure());
    CHECK(f0.c == 0.0);
    CHECK(f0.residual == 0.0);

    const auto ch = zoo_const_hol(2, 1, 2.0);
    for (int k = 0; k < 3; ++k) {
        const auto f = constant_hol_curvature_fit(*bundle_at(ch, small_point(4, rng)),
                                                  *ch.complex_structure());
        CHECK(f.c == doctest::Approx(2.0).epsilon(1e-8));
        CHECK(f.residual <= 1e-8);
    }

    const auto kp = zoo_kaehler_product(1.0, 2.0, true);
    CHECK(constant_hol_curvature_fit(*bundle_at(kp, small_point(4, rng)),
                                     *kp.complex_structure())
              .residual > 0.01);

    // non-Hermitian metric for the chosen J is rejected
    const auto lz = zoo_flat(4, 1);
    const auto J = ComplexStructure::standard(4, {{0, 1}, {2, 3}});
    CHECK_THROWS_AS((void)constant_hol_curvature_fit(*bundle_at(lz, small_point(4, rng)), J),
                    InputError);
}

TEST_CASE("quasi-constant curvature fit") {
    Rng rng(5);
    // degenerate (Einstein) case: H = N = tau/(n(n-1)), small residual
    const auto cc = zoo_const_curv(4, 1, 1.0);
    const auto bcc = bundle_at(cc, small_point(4, rng));
    const auto fd = quasi_constant_fit(*bcc);
    CHECK(fd.status == QuasiConstantFit::Status::NoDistinguishedEigenvector);
    CHECK(fd.H == doctest::Approx(bcc->scalar / 12.0).epsilon(1e-9));
    CHECK(fd.N == doctest::Approx(fd.H));
    CHECK(fd.residual <= 1e-8 * (1.0 + bcc->riemann.max_abs()));

    // e^{2 x1} eta: distinguished direction along the gradient of the factor
    const auto cf = instantiate_model("conf_flat_one_var");
    const auto b = bundle_at(cf, std::vector<double>{0, 0, 0, 0});
    const auto fit = quasi_constant_fit(*b);
    REQUIRE(fit.status == QuasiConstantFit::Status::Ok);
    CHECK(fit.residual <= 1e-7);
    // V parallel to e1 in the auxiliary angle
    Vec grad_dir = Vec::Unit(4, 0);
    const double cosang = std::abs(fit.V.dot(grad_dir)) / fit.V.norm();
    CHECK(std::acos(std::min(1.0, cosang)) <= 1e-6);
    CHECK(std::abs(fit.V.dot(b->g * fit.V)) == doctest::Approx(1.0).epsilon(1e-9));

    // H is the curvature of planes g-orthogonal to V; planes containing V
    // carry the display value H + g(V,V)(N - H), which reduces to N when V
    // is spacelike
    const double epsV = fit.V.dot(b->g * fit.V);
    const double k_containing = fit.H + epsV * (fit.N - fit.H);
    int perp = 0, containing = 0;
    while (perp < 50 || containing < 50) {
        Vec x = random_vec(4, rng), y = random_vec(4, rng);
        if (perp < 50) {
            Vec xp = x - (x.dot(b->g * fit.V) / epsV) * fit.V;
            Vec yp = y - (y.dot(b->g * fit.V) / epsV) * fit.V;
            if (classify_plane(b->g, xp, yp).cls == PlaneClass::Nondegenerate) {
                CHECK(sectional_curvature(*b, xp, yp) ==
                      doctest::Approx(fit.H).epsilon(1e-7));
                ++perp;
            }
        }
        if (containing < 50) {
            Vec w = x - (x.dot(b->g * fit.V) / epsV) * fit.V;  // g(w, V) = 0
            if (classify_plane(b->g, fit.V, w).cls == PlaneClass::Nondegenerate) {
                CHECK(sectional_curvature(*b, fit.V, w) ==
                      doctest::Approx(k_containing).epsilon(1e-7));
                ++containing;
            }
        }
    }

    const auto sp = zoo_sphere_product();
    CHECK(quasi_constant_fit(*bundle_at(sp, std::vector<double>{1.1, 0.4, 0.9, 2.0})).status ==
          QuasiConstantFit::Status::NotConformallyFlat);
}

TEST_CASE("recurrence classification") {
    const auto flat = zoo_flat(4, 1);
    CHECK(kn_star_classify(flat, std::vector<double>{0.1, 0.2, 0.3, 0.4}).cls ==
          RecurrenceFit::Class::SymmetricUnclassified);

    // profile A(u) = u: recurrent with alpha = (1/u) du
    const auto pw = zoo_pp_wave(true);
    for (double u : {2.0, 0.8, 1.5}) {
        const std::vector<double> p{u, 0.3, 0.5, -0.7};
        const auto fit = kn_star_classify(pw, p);
        REQUIRE(fit.cls == RecurrenceFit::Class::Recurrent);
        CHECK(fit.residual <= 1e-7);
        CHECK(fit.alpha[0] == doctest::Approx(1.0 / u).epsilon(1e-7));
        for (int i = 1; i < 4; ++i) CHECK(std::abs(fit.alpha[i]) < 1e-8);
    }
    // scaling the metric rescales R and nabla R together; alpha is unchanged
    const auto pw3 = scale_metric(pw, 3.0);
    const std::vector<double> p{2.0, 0.3, 0.5, -0.7};
    const auto f1 = kn_star_classify(pw, p);
    const auto f3 = kn_star_classify(pw3, p);
    REQUIRE(f3.cls == RecurrenceFit::Class::Recurrent);
    CHECK(max_abs(Vec(f1.alpha - f3.alpha)) <= 1e-6);

    // profile A(u) = 1: symmetric, Walker with recurrence function v = u
    const auto ps = zoo_pp_wave(false);
    const auto fs = kn_star_classify(ps, p, ps.recurrence_function());
    CHECK(fs.cls == RecurrenceFit::Class::SymmetricWalker);
    CHECK(kn_star_classify(ps, p).cls == RecurrenceFit::Class::SymmetricUnclassified);
}

TEST_CASE("Kaehler conditions") {
    Rng rng(6);
    std::vector<std::vector<double>> pts;
    for (int k = 0; k < 5; ++k) pts.push_back(small_point(4, rng));

    const auto fk = zoo_flat_kaehler(4, 2);
    const auto r0 = kaehler_check(fk, pts);
    CHECK(r0.hermitian_defect == 0.0);
    CHECK(r0.dphi_defect == 0.0);
    CHECK(r0.nabla_j_defect == 0.0);

    for (const auto& m : {zoo_const_hol(2, 1, 2.0), zoo_kaehler_product(1.0, 2.0, true)}) {
        const auto r = kaehler_check(m, pts);
        CHECK(r.passed(1e-9));
        CHECK(r.nabla_j_defect <= 1e-9);  // implied by (i)+(ii) for constant J
    }

    const auto nk = zoo_non_kaehler_hermitian();
    for (double x3 : {0.0, 0.5}) {
        const std::vector<std::vector<double>> one{{0.2, -0.1, x3, 0.3}};
        const auto r = kaehler_check(nk, one);
        CHECK(r.hermitian_defect <= 1e-9);
        const double hand = 2.0 * std::exp(2.0 * x3);
        CHECK(std::abs(r.dphi_defect - hand) <= 0.1 * hand);
        CHECK_FALSE(r.passed());
    }

    const auto flat = zoo_flat(4, 1);
    CHECK_THROWS_AS((void)kaehler_check(flat, pts), InputError);
}

TEST_CASE("holomorphic-curvature identity at vanishing Bochner tensor") {
    Rng rng(7);
    const auto fk = zoo_flat_kaehler(4, 2);
    const auto bf = bundle_at(fk, small_point(4, rng));
    CHECK(bochner_zero_hol_identity_defect(*bf, *fk.complex_structure(),
                                           Vec(Vec::Unit(4, 2))) == 0.0);

    const auto ch = zoo_const_hol(2, 1, 2.0);
    const auto bc = bundle_at(ch, small_point(4, rng));
    int used = 0;
    while (used < 30) {
        const Vec x = random_vec(4, rng);
        if (std::abs(x.dot(bc->g * x)) < 1e-2 * x.squaredNorm()) continue;
        CHECK(bochner_zero_hol_identity_defect(*bc, *ch.complex_structure(), x) <= 1e-8);
        ++used;
    }

    const auto kp = zoo_kaehler_product(1.0, 2.0, true);
    const auto bk = bundle_at(kp, small_point(4, rng));
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        const Vec x = random_vec(4, rng);
        if (std::abs(x.dot(bk->g * x)) < 1e-2 * x.squaredNorm()) continue;
        worst = std::max(worst,
                         bochner_zero_hol_identity_defect(*bk, *kp.complex_structure(), x));
    }
    CHECK(worst > 1e-3);

    const Vec xi = Vec::Unit(4, 0) + Vec::Unit(4, 2);  // isotropic in signature (2,2)
    CHECK_THROWS_AS(
        (void)bochner_zero_hol_identity_defect(*bf, *fk.complex_structure(), xi),
        NumericError);
}
