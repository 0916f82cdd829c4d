#include "ikg/diffeo.hpp"

#include <algorithm>
#include <cmath>

#include "ikg/error.hpp"
#include "ikg/geometry.hpp"

namespace ikg {

std::vector<double> DiffeoMap::map_point(std::span<const double> p) const {
    std::vector<double> q;
    q.reserve(components.size());
    for (const auto& c : components) q.push_back(c.eval(p));
    return q;
}

Mat DiffeoMap::jacobian_at(std::span<const double> p) const {
    const int n = source.dim();
    Mat J(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) J(i, j) = components[static_cast<size_t>(i)].diff(j).eval(p);
    const double scale = std::max(max_abs(J), 1e-300);
    if (std::abs(J.determinant()) <= 1e-12 * std::pow(scale, n))
        throw NumericError("singular Jacobian at evaluated point");
    return J;
}

Vec pushforward(const DiffeoMap& f, std::span<const double> p, const Vec& v) {
    return f.jacobian_at(p) * v;
}

Mat pullback_metric_at(const DiffeoMap& f, std::span<const double> p) {
    const Mat J = f.jacobian_at(p);
    const Mat gbar = metric_at(f.target, f.map_point(p));
    return J.transpose() * gbar * J;
}

namespace {

struct PointwiseConformal {
    double lambda;
    double residual;
};

PointwiseConformal conformal_factor_at(const DiffeoMap& f, std::span<const double> p) {
    const Mat G = metric_at(f.source, p);
    const Mat P = pullback_metric_at(f, p);
    const double lambda = (P.array() * G.array()).sum() / (G.array() * G.array()).sum();
    const double residual = max_abs(Mat(P - lambda * G)) / (1.0 + max_abs(P));
    return {lambda, residual};
}

GradientClass classify_gradient(const Mat& G, const Vec& dsigma) {
    const Vec grad = G.inverse() * dsigma;
    const double aux = grad.norm();
    if (aux < 1e-8) return GradientClass::Zero;
    const double norm2 = grad.dot(G * grad);
    if (std::abs(norm2) < 1e-8 * aux * aux && aux >= 1e-6) return GradientClass::Isotropic;
    return GradientClass::Nonnull;
}

}  // namespace

ConformalReport conformal_classify(const DiffeoMap& f,
                                   std::span<const std::vector<double>> points,
                                   const std::optional<Expr>& sigma_symbolic) {
    if (points.size() < 2) throw InputError("conformal_classify needs >= 2 sample points");
    ConformalReport rep;
    bool conformal = true;
    for (const auto& p : points) {
        const auto [lambda, residual] = conformal_factor_at(f, p);
        rep.lambda.push_back(lambda);
        rep.residual.push_back(residual);
        if (residual > 1e-6 || lambda <= 0.0) conformal = false;
        rep.sigma.push_back(lambda > 0.0 ? 0.5 * std::log(lambda) : 0.0);
    }
    if (!conformal) {
        rep.cls = ConformalClass::NotConformal;
        rep.grad_class = GradientClass::Unknown;
        return rep;
    }
    const auto [mn, mx] = std::minmax_element(rep.sigma.begin(), rep.sigma.end());
    if (*mx - *mn <= 1e-8) {
        double amax = 0.0;
        for (double s : rep.sigma) amax = std::max(amax, std::abs(s));
        rep.cls = amax <= 1e-8 ? ConformalClass::Isometry : ConformalClass::Homothety;
    } else {
        rep.cls = ConformalClass::ConformalNonconstant;
    }

    // Gradient class of sigma, pointwise, aggregated over the samples.
    bool any_isotropic = false, any_nonnull = false;
    for (const auto& p : points) {
        const int n = f.source.dim();
        const Mat G = metric_at(f.source, p);
        Vec dsigma(n);
        if (sigma_symbolic) {
            for (int i = 0; i < n; ++i) dsigma[i] = sigma_symbolic->diff(i).eval(p);
            rep.grad_path = "symbolic";
        } else {
            const double h = 1e-5;
            for (int i = 0; i < n; ++i) {
                std::vector<double> pp(p.begin(), p.end()), pm(p.begin(), p.end());
                pp[static_cast<size_t>(i)] += h;
                pm[static_cast<size_t>(i)] -= h;
                const double sp = 0.5 * std::log(conformal_factor_at(f, pp).lambda);
                const double sm = 0.5 * std::log(conformal_factor_at(f, pm).lambda);
                dsigma[i] = (sp - sm) / (2.0 * h);
            }
            rep.grad_path = "finite-difference";
        }
        switch (classify_gradient(G, dsigma)) {
            case GradientClass::Zero: break;
            case GradientClass::Isotropic: any_isotropic = true; break;
            default: any_nonnull = true; break;
        }
    }
    rep.grad_class = any_nonnull      ? GradientClass::Nonnull
                     : any_isotropic  ? GradientClass::Isotropic
                                      : GradientClass::Zero;
    return rep;
}

namespace {

Vec random_vec(int n, Rng& rng) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.normal();
    return v;
}

}  // namespace

PreservationResult preservation_defect(const DiffeoMap& f, PreserveMode mode,
                                       std::span<const std::vector<double>> points,
                                       Rng& rng, int samples) {
    if (points.empty()) throw InputError("preservation_defect needs sample points");
    PreservationResult res;
    const int n = f.source.dim();
    for (int s = 0; s < samples; ++s) {
        const auto& p = points[static_cast<size_t>(s) % points.size()];
        const auto bsrc = bundle_at(f.source, p);
        const auto q = f.map_point(p);
        const auto btgt = bundle_at(f.target, q);
        const Mat J = f.jacobian_at(p);
        Rng sub = rng.split(static_cast<std::uint64_t>(s));
        if (mode == PreserveMode::Sectional) {
            const Vec x = random_vec(n, sub), y = random_vec(n, sub);
            const Vec fx = J * x, fy = J * y;
            try {
                if (classify_plane(bsrc->g, x, y).cls != PlaneClass::Nondegenerate ||
                    classify_plane(btgt->g, fx, fy).cls != PlaneClass::Nondegenerate) {
                    ++res.skipped;
                    continue;
                }
                const double k = sectional_curvature(*bsrc, x, y);
                const double kbar = sectional_curvature(*btgt, fx, fy);
                res.defect = std::max(res.defect, std::abs(kbar - k));
                ++res.used;
            } catch (const Error&) {
                ++res.skipped;
            }
        } else {
            Vec x = random_vec(n, sub);
            const double gxx = x.dot(bsrc->g * x);
            if (std::abs(gxx) <= 1e-9 * x.squaredNorm()) {
                ++res.skipped;
                continue;
            }
            x /= std::sqrt(std::abs(gxx));  // unit vector
            const Vec fx = J * x;
            if (std::abs(fx.dot(btgt->g * fx)) <= 1e-9 * fx.squaredNorm()) {
                ++res.skipped;
                continue;
            }
            const double k = ricci_direction_curvature(*bsrc, x);
            const double kbar = ricci_direction_curvature(*btgt, fx);
            res.defect = std::max(res.defect, std::abs(kbar - k));
            ++res.used;
        }
    }
    if (res.used == 0) throw NumericError("preservation_defect: all samples skipped");
    return res;
}

namespace {

// Iterated first-order Richardson extrapolation for t halving each step.
struct Extrapolated {
    double limit;
    bool converged;
};

Extrapolated richardson(const std::vector<double>& r) {
    const size_t k = r.size();
    std::vector<std::vector<double>> T(k);
    for (size_t i = 0; i < k; ++i) {
        T[i].resize(i + 1);
        T[i][0] = r[i];
        double pow2 = 1.0;
        for (size_t m = 1; m <= i; ++m) {
            pow2 *= 2.0;
            T[i][m] = (pow2 * T[i][m - 1] - T[i - 1][m - 1]) / (pow2 - 1.0);
        }
    }
    const double last = T[k - 1][k - 1];
    const double prev = T[k - 2][k - 2];
    return {last, std::abs(last - prev) < 1e-5};
}

std::vector<double> t_schedule() {
    std::vector<double> t;
    for (int k = 0; k <= 10; ++k) t.push_back(0.1 * std::pow(2.0, -k));
    return t;
}

// Two isotropic vectors spanning a strongly degenerate plane: unit legs from
// orthonormal pairs inside the negative and positive frame spans.
std::pair<Vec, Vec> isotropic_orthogonal_pair(const Mat& g, Rng& rng) {
    const FrameResult fr = orthonormal_frame(g);
    const int n = static_cast<int>(fr.signs.size());
    std::vector<int> neg, pos;
    for (int i = 0; i < n; ++i) (fr.signs[static_cast<size_t>(i)] < 0 ? neg : pos).push_back(i);
    if (neg.size() < 2 || pos.size() < 2)
        throw NumericError("strongly degenerate planes require signature >= (2,2)");
    auto ortho_pair = [&](const std::vector<int>& idx) {
        Vec a = Vec::Zero(static_cast<Eigen::Index>(idx.size()));
        Vec b = Vec::Zero(static_cast<Eigen::Index>(idx.size()));
        do {
            for (Eigen::Index i = 0; i < a.size(); ++i) a[i] = rng.normal();
        } while (a.norm() < 1e-6);
        a /= a.norm();
        do {
            for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = rng.normal();
            b -= a.dot(b) * a;
        } while (b.norm() < 1e-6);
        b /= b.norm();
        Vec va = Vec::Zero(static_cast<Eigen::Index>(g.rows()));
        Vec vb = Vec::Zero(static_cast<Eigen::Index>(g.rows()));
        for (size_t i = 0; i < idx.size(); ++i) {
            va += a[static_cast<Eigen::Index>(i)] * fr.vectors[static_cast<size_t>(idx[i])];
            vb += b[static_cast<Eigen::Index>(i)] * fr.vectors[static_cast<size_t>(idx[i])];
        }
        return std::make_pair(va, vb);
    };
    const auto [n1, n2] = ortho_pair(neg);
    const auto [p1, p2] = ortho_pair(pos);
    return {n1 + p1, n2 + p2};
}

}  // namespace

LimitReport limit_ratio(const DiffeoMap& f, LimitMode mode, std::span<const double> p,
                        Rng& rng) {
    LimitReport rep;
    rep.mode = mode;
    const auto bsrc = bundle_at(f.source, p);
    const auto q = f.map_point(p);
    const auto btgt = bundle_at(f.target, q);
    const Mat J = f.jacobian_at(p);
    const int n = f.source.dim();
    const auto ts = t_schedule();
    rep.t = ts;

    if (mode == LimitMode::Holo) {
        if (!f.source.complex_structure() || !f.target.complex_structure())
            throw NumericError("holo mode requires complex structures on both charts");
        const Mat Js = f.source.complex_structure()->matrix();
        const Mat Jt = f.target.complex_structure()->matrix();
        if (max_abs(Mat(J * Js - Jt * J)) > 1e-8 * std::max(max_abs(J), 1.0))
            throw NumericError("holo mode: map is not holomorphic (f_* J != Jbar f_*)");
    }

    // Evaluates the ratio along the family, retrying the perturbation
    // direction when a nondegeneracy condition fails mid-schedule.
    auto run_family = [&](auto&& make_ratio) {
        for (int attempt = 0; attempt < 40; ++attempt) {
            Rng sub = rng.split(1000 + static_cast<std::uint64_t>(attempt));
            std::vector<double> ratios;
            int zero_den = 0;
            bool ok = true;
            for (double t : ts) {
                double num = 0.0, den = 0.0;
                if (!make_ratio(t, sub, num, den)) {
                    ok = false;
                    break;
                }
                if (std::abs(den) < 1e-13) {
                    ++zero_den;
                    ratios.push_back(0.0);
                } else {
                    ratios.push_back(num / den);
                }
            }
            if (!ok) continue;
            if (zero_den == static_cast<int>(ts.size()))
                throw NumericError("limit_ratio: denominator identically zero along the family");
            if (zero_den > 0) continue;  // family clipped a zero of K; re-aim
            rep.ratio = ratios;
            const auto ex = richardson(ratios);
            rep.limit = ex.limit;
            rep.converged = ex.converged;
            return;
        }
        throw NumericError("limit_ratio: could not build a nondegenerate approximating family");
    };

    if (mode == LimitMode::PlaneWeak) {
        const Vec xi = sample_isotropic(bsrc->g, rng);
        // y with g(xi,y)=0 and g(y,y) away from zero
        Vec y;
        bool found = false;
        for (int k = 0; k < 100 && !found; ++k) {
            Vec w = random_vec(n, rng);
            const double gxw = xi.dot(bsrc->g * w);
            if (std::abs(gxw) < 1e-3) continue;
            Vec y0 = random_vec(n, rng);
            y = y0 - (xi.dot(bsrc->g * y0) / gxw) * w;
            if (std::abs(y.dot(bsrc->g * y)) > 0.1 * y.squaredNorm() && y.norm() > 1e-3)
                found = true;
        }
        if (!found) throw NumericError("limit_ratio: no weakly degenerate seed plane found");
        run_family([&](double t, Rng& sub, double& num, double& den) {
            Rng zrng = sub.split(1);  // split() is stateless: same z for every t
            const Vec z = random_vec(n, zrng);
            if (std::abs(xi.dot(bsrc->g * z)) < 0.05 * z.norm() * xi.norm()) return false;
            const Vec xt = xi + t * z;
            const double p1 = pi1_apply(bsrc->g, xt, y, y, xt);
            const Vec fxt = J * xt, fy = J * y;
            const double p1bar = pi1_apply(btgt->g, fxt, fy, fy, fxt);
            if (std::abs(p1) < 1e-13 || std::abs(p1bar) < 1e-13) return false;
            den = bsrc->riemann.apply(xt, y, y, xt) / p1;
            num = btgt->riemann.apply(fxt, fy, fy, fxt) / p1bar;
            return true;
        });
        return rep;
    }

    if (mode == LimitMode::PlaneStrong) {
        const auto [xi1, xi2] = isotropic_orthogonal_pair(bsrc->g, rng);
        run_family([&](double t, Rng& sub, double& num, double& den) {
            Rng zrng = sub.split(1);
            const Vec z = random_vec(n, zrng), w = random_vec(n, zrng);
            if (std::abs(xi1.dot(bsrc->g * z)) < 0.05 || std::abs(xi2.dot(bsrc->g * w)) < 0.05)
                return false;
            const Vec xt = xi1 + t * z, yt = xi2 + t * w;
            const double p1 = pi1_apply(bsrc->g, xt, yt, yt, xt);
            const Vec fxt = J * xt, fyt = J * yt;
            const double p1bar = pi1_apply(btgt->g, fxt, fyt, fyt, fxt);
            if (std::abs(p1) < 1e-13 || std::abs(p1bar) < 1e-13) return false;
            den = bsrc->riemann.apply(xt, yt, yt, xt) / p1;
            num = btgt->riemann.apply(fxt, fyt, fyt, fxt) / p1bar;
            return true;
        });
        return rep;
    }

    if (mode == LimitMode::Ricci) {
        // Prefer an isotropic seed with S(xi,xi) != 0 when one exists.
        Vec xi = sample_isotropic(bsrc->g, rng);
        double best = std::abs(xi.dot(bsrc->ricci * xi));
        for (int k = 0; k < 50; ++k) {
            const Vec cand = sample_isotropic(bsrc->g, rng);
            const double s = std::abs(cand.dot(bsrc->ricci * cand));
            if (s > best) {
                best = s;
                xi = cand;
            }
        }
        run_family([&](double t, Rng& sub, double& num, double& den) {
            Rng zrng = sub.split(1);
            const Vec u = random_vec(n, zrng);
            if (std::abs(xi.dot(bsrc->g * u)) < 0.05 * u.norm() * xi.norm()) return false;
            const Vec xt = xi + t * u;
            const double gxx = xt.dot(bsrc->g * xt);
            const Vec fxt = J * xt;
            const double gbar = fxt.dot(btgt->g * fxt);
            if (std::abs(gxx) < 1e-13 || std::abs(gbar) < 1e-13) return false;
            den = xt.dot(bsrc->ricci * xt) / gxx;
            num = fxt.dot(btgt->ricci * fxt) / gbar;
            return true;
        });
        return rep;
    }

    // Holo mode
    const auto& Jsrc = *f.source.complex_structure();
    const auto& Jtgt = *f.target.complex_structure();
    Vec xi = sample_isotropic(bsrc->g, rng);
    {
        double best = std::abs(bsrc->riemann.apply(xi, Jsrc.apply(xi), Jsrc.apply(xi), xi));
        for (int k = 0; k < 50; ++k) {
            const Vec cand = sample_isotropic(bsrc->g, rng);
            const Vec jc = Jsrc.apply(cand);
            const double s = std::abs(bsrc->riemann.apply(cand, jc, jc, cand));
            if (s > best) {
                best = s;
                xi = cand;
            }
        }
    }
    run_family([&](double t, Rng& sub, double& num, double& den) {
        Rng zrng = sub.split(1);
        const Vec u = random_vec(n, zrng);
        if (std::abs(xi.dot(bsrc->g * u)) < 0.05 * u.norm() * xi.norm()) return false;
        const Vec xt = xi + t * u;
        const double gxx = xt.dot(bsrc->g * xt);
        const Vec fxt = J * xt;
        const double gbar = fxt.dot(btgt->g * fxt);
        if (std::abs(gxx) < 1e-13 || std::abs(gbar) < 1e-13) return false;
        const Vec jx = Jsrc.apply(xt), jfx = Jtgt.apply(fxt);
        den = bsrc->riemann.apply(xt, jx, jx, xt) / (gxx * gxx);
        num = btgt->riemann.apply(fxt, jfx, jfx, fxt) / (gbar * gbar);
        return true;
    });
    return rep;
}

ChartManifold conformal_change(const ChartManifold& m, const Expr& sigma,
                               const std::string& name_suffix) {
    const int n = m.dim();
    const Expr factor = Expr::apply(Expr::Func::Exp, Expr::mul(Expr::constant(2.0), sigma));
    std::vector<Expr> g;
    g.reserve(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g.push_back(Expr::mul(factor, m.g(i, j)));
    return ChartManifold(m.name() + name_suffix, m.coords(), std::move(g),
                         m.complex_structure(), m.recurrence_function());
}

std::pair<double, double> theorem1_identities_defect(const ChartManifold& m,
                                                     const Expr& sigma,
                                                     std::span<const double> p) {
    const ChartManifold mbar = conformal_change(m, sigma);
    const auto b = bundle_at(m, p);
    const auto bb = bundle_at(mbar, p);
    const int n = m.dim();
    const double s = sigma.eval(p);
    const double e2s = std::exp(2.0 * s), e4s = std::exp(4.0 * s);
    const double dtau = bb->scalar - b->scalar;

    const Mat rhs22 = e2s * (b->ricci + (dtau / n) * b->g);
    const double d22 = max_abs(Mat(bb->ricci - rhs22)) / (1.0 + max_abs(bb->ricci));

    Tensor4 rhsR = b->riemann;
    rhsR += (dtau / (n * (n - 1.0))) * pi1_build(b->g);
    rhsR *= e4s;
    Tensor4 diff = bb->riemann;
    diff -= rhsR;
    const double dR = diff.max_abs() / (1.0 + bb->riemann.max_abs());
    return {d22, dR};
}

CorollaryReport corollary_lambda_check(const DiffeoMap& f,
                                       std::span<const std::vector<double>> points,
                                       Rng& rng) {
    if (!f.source.complex_structure())
        throw InputError("corollary check requires a Kaehler source");
    const ConformalReport conf = conformal_classify(f, points);
    if (conf.cls != ConformalClass::Isometry && conf.cls != ConformalClass::Homothety)
        throw NumericError("corollary check requires a constant-factor conformal map");
    CorollaryReport rep;
    rep.lambda = 0.0;
    for (double l : conf.lambda) rep.lambda += l;
    rep.lambda /= static_cast<double>(conf.lambda.size());

    const auto& Jsrc = *f.source.complex_structure();
    const auto& Jtgt = *f.target.complex_structure();
    for (const auto& p : points) {
        const auto bsrc = bundle_at(f.source, p);
        const auto btgt = bundle_at(f.target, f.map_point(p));
        const Mat J = f.jacobian_at(p);
        const double scale = 1.0 + bsrc->riemann.max_abs();
        for (int k = 0; k < 10000 / static_cast<int>(points.size()) + 1; ++k) {
            const Vec xi = sample_isotropic(bsrc->g, rng);
            const Vec jxi = Jsrc.apply(xi);
            const double r = bsrc->riemann.apply(xi, jxi, jxi, xi);
            if (std::abs(r) <= 1e-6 * scale * std::pow(xi.norm(), 4)) continue;
            const Vec fxi = J * xi;
            const Vec jfxi = Jtgt.apply(fxi);
            const double rbar = btgt->riemann.apply(fxi, jfxi, jfxi, fxi);
            rep.r1 = rbar / r;
            rep.defect_lambda = std::abs(rep.r1 - rep.lambda);
            rep.defect_lambda_sq = std::abs(rep.r1 - rep.lambda * rep.lambda);
            rep.consistent_with_isometry = std::abs(rep.lambda - 1.0) <= 1e-6;
            return rep;
        }
    }
    throw NumericError(
        "corollary check: no usable isotropic xi with R(xi,Jxi,Jxi,xi) != 0 found");
}

}  // namespace ikg
