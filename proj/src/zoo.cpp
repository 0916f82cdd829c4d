#include "ikg/zoo.hpp"

#include <cmath>
#include <sstream>

#include "ikg/error.hpp"

namespace ikg {

namespace {

std::vector<std::string> coord_names(int n) {
    std::vector<std::string> c;
    for (int i = 1; i <= n; ++i) c.push_back("x" + std::to_string(i));
    return c;
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::vector<Expr> parse_metric(const std::vector<std::string>& coords,
                               const std::vector<std::string>& comps) {
    std::vector<Expr> out;
    out.reserve(comps.size());
    for (const auto& s : comps) out.push_back(parse_expr(s, coords));
    return out;
}

std::vector<int> signature(int n, int nu) {
    if (nu < 0 || nu > n) throw InputError("signature count out of range");
    std::vector<int> eps(static_cast<size_t>(n), 1);
    for (int i = 0; i < nu; ++i) eps[static_cast<size_t>(i)] = -1;
    return eps;
}

std::vector<std::pair<int, int>> adjacent_pairs(int n) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i + 1 < n; i += 2) pairs.emplace_back(i, i + 1);
    return pairs;
}

double get(const ZooParams& p, const std::string& key, double dflt) {
    auto it = p.find(key);
    return it == p.end() ? dflt : it->second;
}

}  // namespace

ChartManifold zoo_flat(int n, int nu) {
    const auto coords = coord_names(n);
    const auto eps = signature(n, nu);
    std::vector<std::string> g(static_cast<size_t>(n) * n, "0");
    for (int i = 0; i < n; ++i) g[static_cast<size_t>(i) * n + i] = eps[static_cast<size_t>(i)] < 0 ? "-1" : "1";
    return ChartManifold("flat_" + std::to_string(n) + "_" + std::to_string(nu), coords,
                         parse_metric(coords, g));
}

ChartManifold zoo_const_curv(int n, int nu, double c) {
    if (c == 0.0) return zoo_flat(n, nu);
    const auto coords = coord_names(n);
    const auto eps = signature(n, nu);
    std::string q;  // <x,x>_eps
    for (int i = 0; i < n; ++i) {
        const std::string term = coords[static_cast<size_t>(i)] + "^2";
        if (q.empty())
            q = (eps[static_cast<size_t>(i)] < 0 ? "0 - " + term : term);
        else
            q += (eps[static_cast<size_t>(i)] < 0 ? " - " : " + ") + term;
    }
    const std::string den = "(1 + " + num(c / 4.0) + "*(" + q + "))^2";
    std::vector<std::string> g(static_cast<size_t>(n) * n, "0");
    for (int i = 0; i < n; ++i)
        g[static_cast<size_t>(i) * n + i] =
            (eps[static_cast<size_t>(i)] < 0 ? "-1/" : "1/") + den;
    return ChartManifold("const_curv", coords, parse_metric(coords, g));
}

ChartManifold zoo_conf_flat(const std::string& sigma_text, int nu) {
    const int n = 4;
    const auto coords = coord_names(n);
    const auto eps = signature(n, nu);
    const Expr sigma = parse_expr(sigma_text, coords);
    const Expr factor = Expr::apply(Expr::Func::Exp, Expr::mul(Expr::constant(2.0), sigma));
    std::vector<Expr> g(static_cast<size_t>(n) * n, Expr::constant(0.0));
    for (int i = 0; i < n; ++i)
        g[static_cast<size_t>(i) * n + i] =
            Expr::mul(Expr::constant(eps[static_cast<size_t>(i)]), factor);
    return ChartManifold("conf_flat", coords, std::move(g));
}

ChartManifold zoo_pp_wave(bool linear_profile) {
    // 2 du dv + A(u)(x^2 - y^2) du^2 + dx^2 + dy^2
    const std::vector<std::string> coords{"u", "v", "x", "y"};
    std::vector<std::string> g(16, "0");
    g[0] = linear_profile ? "u*(x^2 - y^2)" : "x^2 - y^2";
    g[1] = "1";
    g[10] = "1";
    g[15] = "1";
    auto m = ChartManifold(linear_profile ? "pp_wave_recurrent" : "pp_wave_symmetric", coords,
                           parse_metric(coords, g), std::nullopt, parse_expr("u", coords));
    return m;
}

ChartManifold zoo_flat_kaehler(int n, int nu) {
    if (n % 2 != 0 || nu % 2 != 0)
        throw InputError("flat Kaehler model needs even dimension and even signature");
    const auto coords = coord_names(n);
    const auto eps = signature(n, nu);
    std::vector<std::string> g(static_cast<size_t>(n) * n, "0");
    for (int i = 0; i < n; ++i)
        g[static_cast<size_t>(i) * n + i] = eps[static_cast<size_t>(i)] < 0 ? "-1" : "1";
    return ChartManifold("flat_kaehler", coords, parse_metric(coords, g),
                         ComplexStructure::standard(n, adjacent_pairs(n)));
}

ChartManifold zoo_const_hol(int m_complex, int nu_complex, double c) {
    // Fubini-Study-type potential chart: g = 2 Re(d dbar of (2/c) ln F),
    // F = 1 + (c/4) sum_a eps_a |z_a|^2, valid near the origin.
    const int n = 2 * m_complex;
    if (m_complex < 1) throw InputError("complex dimension must be >= 1");
    if (nu_complex < 0 || nu_complex > m_complex)
        throw InputError("complex signature count out of range");
    if (c == 0.0) return zoo_flat_kaehler(n, 2 * nu_complex);
    const auto coords = coord_names(n);
    std::vector<int> ce(static_cast<size_t>(m_complex), 1);
    for (int a = 0; a < nu_complex; ++a) ce[static_cast<size_t>(a)] = -1;

    auto u = [&](int a) { return coords[static_cast<size_t>(2 * a)]; };
    auto v = [&](int a) { return coords[static_cast<size_t>(2 * a + 1)]; };

    std::string q;
    for (int a = 0; a < m_complex; ++a) {
        const std::string term = u(a) + "^2 + " + v(a) + "^2";
        if (q.empty())
            q = (ce[static_cast<size_t>(a)] < 0 ? "0 - (" + term + ")" : "(" + term + ")");
        else
            q += (ce[static_cast<size_t>(a)] < 0 ? " - (" : " + (") + term + ")";
    }
    const std::string F = "(1 + " + num(c / 4.0) + "*(" + q + "))";
    const std::string F2 = F + "^2";
    const std::string k4 = num(c / 4.0);

    std::vector<std::string> g(static_cast<size_t>(n) * n, "0");
    auto set = [&](int i, int j, const std::string& s) {
        g[static_cast<size_t>(i) * n + j] = s;
        g[static_cast<size_t>(j) * n + i] = s;
    };
    for (int a = 0; a < m_complex; ++a) {
        const std::string ea = ce[static_cast<size_t>(a)] < 0 ? "-1" : "1";
        const std::string diag = ea + "/" + F + " - " + k4 + "*(" + u(a) + "^2 + " + v(a) +
                                 "^2)/" + F2;
        set(2 * a, 2 * a, diag);
        set(2 * a + 1, 2 * a + 1, diag);
        // g(u_a, v_a) = 0
        for (int b = a + 1; b < m_complex; ++b) {
            const double ee = ce[static_cast<size_t>(a)] * ce[static_cast<size_t>(b)];
            const std::string s = num(-ee * c / 4.0);
            set(2 * a, 2 * b, s + "*(" + u(a) + "*" + u(b) + " + " + v(a) + "*" + v(b) + ")/" + F2);
            set(2 * a + 1, 2 * b + 1,
                s + "*(" + u(a) + "*" + u(b) + " + " + v(a) + "*" + v(b) + ")/" + F2);
            set(2 * a, 2 * b + 1,
                s + "*(" + u(a) + "*" + v(b) + " - " + v(a) + "*" + u(b) + ")/" + F2);
            set(2 * a + 1, 2 * b,
                s + "*(" + u(b) + "*" + v(a) + " - " + v(b) + "*" + u(a) + ")/" + F2);
        }
    }
    return ChartManifold("const_hol", coords, parse_metric(coords, g),
                         ComplexStructure::standard(n, adjacent_pairs(n)));
}

ChartManifold zoo_kaehler_product(double c1, double c2, bool indefinite) {
    const auto coords = coord_names(4);
    const std::string d1 = "(1 + " + num(c1 / 4.0) + "*(x1^2 + x2^2))^2";
    const std::string d2 = "(1 + " + num(c2 / 4.0) + "*(x3^2 + x4^2))^2";
    std::vector<std::string> g(16, "0");
    g[0] = g[5] = "1/" + d1;
    g[10] = g[15] = (indefinite ? "-1/" : "1/") + d2;
    return ChartManifold("kaehler_product", coords, parse_metric(coords, g),
                         ComplexStructure::standard(4, adjacent_pairs(4)));
}

ChartManifold zoo_non_kaehler_hermitian() {
    const auto coords = coord_names(4);
    std::vector<std::string> g(16, "0");
    g[0] = g[5] = "exp(2*x3)";
    g[10] = g[15] = "1";
    return ChartManifold("non_kaehler_hermitian", coords, parse_metric(coords, g),
                         ComplexStructure::standard(4, adjacent_pairs(4)));
}

ChartManifold zoo_sphere(double c) {
    const std::vector<std::string> coords{"th", "ph"};
    std::vector<std::string> g(4, "0");
    g[0] = "1/" + num(c);
    g[3] = "sin(th)^2/" + num(c);
    return ChartManifold("sphere", coords, parse_metric(coords, g));
}

ChartManifold zoo_sphere_product() {
    const std::vector<std::string> coords{"th1", "ph1", "th2", "ph2"};
    std::vector<std::string> g(16, "0");
    g[0] = "1";
    g[5] = "sin(th1)^2";
    g[10] = "1";
    g[15] = "sin(th2)^2";
    return ChartManifold("sphere_product", coords, parse_metric(coords, g));
}

ChartManifold scale_metric(const ChartManifold& m, double factor) {
    const int n = m.dim();
    std::vector<Expr> g;
    g.reserve(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g.push_back(Expr::mul(Expr::constant(factor), m.g(i, j)));
    return ChartManifold(m.name() + "_scaled", m.coords(), std::move(g), m.complex_structure(),
                         m.recurrence_function());
}

DiffeoMap zoo_identity_map(const ChartManifold& source, const ChartManifold& target) {
    if (source.dim() != target.dim()) throw InputError("identity map needs equal dimensions");
    std::vector<Expr> comps;
    for (int i = 0; i < source.dim(); ++i)
        comps.push_back(Expr::coord(source.coords()[static_cast<size_t>(i)], i));
    return DiffeoMap{source, target, comps, comps};
}

DiffeoMap zoo_linear_map(const ChartManifold& source, const ChartManifold& target, const Mat& A) {
    const int n = source.dim();
    std::vector<Expr> comps;
    for (int i = 0; i < n; ++i) {
        Expr e = Expr::constant(0.0);
        for (int j = 0; j < n; ++j)
            e = Expr::add(std::move(e),
                          Expr::mul(Expr::constant(A(i, j)),
                                    Expr::coord(source.coords()[static_cast<size_t>(j)], j)));
        comps.push_back(std::move(e));
    }
    std::vector<Expr> inv;
    const Mat Ai = A.inverse();
    for (int i = 0; i < n; ++i) {
        Expr e = Expr::constant(0.0);
        for (int j = 0; j < n; ++j)
            e = Expr::add(std::move(e),
                          Expr::mul(Expr::constant(Ai(i, j)),
                                    Expr::coord(target.coords()[static_cast<size_t>(j)], j)));
        inv.push_back(std::move(e));
    }
    return DiffeoMap{source, target, std::move(comps), std::move(inv)};
}

namespace {

Mat boost_matrix(int n, int i, int j, double s) {
    Mat A = Mat::Identity(n, n);
    A(i, i) = std::cosh(s);
    A(j, j) = std::cosh(s);
    A(i, j) = std::sinh(s);
    A(j, i) = std::sinh(s);
    return A;
}

}  // namespace

DiffeoMap zoo_lorentz_boost(double rapidity) {
    const ChartManifold flat = zoo_flat(4, 1);
    return zoo_linear_map(flat, flat, boost_matrix(4, 0, 1, rapidity));
}

DiffeoMap zoo_const_curv_boost(int nu, double rapidity) {
    const ChartManifold m = zoo_const_curv(4, nu, 1.0);
    return zoo_linear_map(m, m, boost_matrix(4, 0, nu, rapidity));
}

DiffeoMap zoo_inversion() {
    const ChartManifold flat = zoo_flat(4, 1);
    const auto& coords = flat.coords();
    const std::string q = "(0 - x1^2 + x2^2 + x3^2 + x4^2)";
    std::vector<Expr> comps;
    for (int i = 0; i < 4; ++i)
        comps.push_back(parse_expr(coords[static_cast<size_t>(i)] + "/" + q, coords));
    auto inv = comps;  // the inversion is an involution
    return DiffeoMap{flat, flat, std::move(comps), std::move(inv)};
}

DiffeoMap zoo_nonconformal_linear() {
    const ChartManifold flat = zoo_flat(4, 2);
    Mat A(4, 4);
    A << 1.0, 0.3, 0.0, 0.0,  //
        0.0, 2.0, 0.0, 0.0,   //
        0.0, 0.0, 1.0, 0.2,   //
        0.1, 0.0, 0.0, 1.0;
    return zoo_linear_map(flat, flat, A);
}

DiffeoMap zoo_nonholomorphic_linear() {
    const ChartManifold fk = zoo_flat_kaehler(4, 2);
    Mat A = Mat::Identity(4, 4);
    A(1, 1) = -1.0;  // conjugation in the first complex coordinate only
    return zoo_linear_map(fk, fk, A);
}

const std::vector<ZooModelInfo>& zoo_registry() {
    static const std::vector<ZooModelInfo> reg = {
        {"flat", "manifold", "flat pseudo-Euclidean space", {{"n", 4}, {"nu", 1}}},
        {"const_curv", "manifold", "constant sectional curvature model (stereographic chart)",
         {{"n", 4}, {"nu", 1}, {"c", 1}}},
        {"conf_flat_one_var", "manifold", "conformally flat e^{2 x1} eta (quasi-constant witness)",
         {{"nu", 1}}},
        {"conf_flat_generic", "manifold", "conformally flat e^{2 sin(x1) x2} eta", {{"nu", 1}}},
        {"pp_wave_recurrent", "manifold", "pp-wave with profile A(u) = u (recurrent)", {}},
        {"pp_wave_symmetric", "manifold", "pp-wave with profile A(u) = 1 (symmetric)", {}},
        {"flat_kaehler", "manifold", "flat indefinite Kaehler space", {{"n", 4}, {"nu", 2}}},
        {"const_hol", "manifold", "constant holomorphic sectional curvature Kaehler model",
         {{"m", 2}, {"nu_c", 1}, {"c", 2}}},
        {"kaehler_product", "manifold", "product of two conformal 2-blocks (B != 0)",
         {{"c1", 1}, {"c2", 2}, {"indefinite", 1}}},
        {"non_kaehler_hermitian", "manifold", "Hermitian metric with dPhi != 0", {}},
        {"sphere", "manifold", "round 2-sphere, polar chart", {{"c", 1}}},
        {"sphere_product", "manifold", "unit S^2 x S^2 (Weyl != 0)", {}},
        {"identity", "map", "identity map of a flat space", {{"n", 4}, {"nu", 1}}},
        {"homothety", "map", "identity chart map into the 4x-scaled metric",
         {{"n", 4}, {"nu", 1}, {"c", 1}}},
        {"lorentz_boost", "map", "Lorentz boost on flat R^4_1", {{"rapidity", 0.5}}},
        {"const_curv_boost", "map", "linear isometry of the constant-curvature model",
         {{"nu", 1}, {"rapidity", 0.5}}},
        {"inversion", "map", "conformal inversion on punctured flat R^4_1", {}},
        {"nonconformal_linear", "map", "generic linear map on flat R^4_2", {}},
        {"nonholomorphic_linear", "map", "real-linear non-complex-linear map on Kaehler R^4_2", {}},
    };
    return reg;
}

namespace {

void check_keys(const std::string& id, const ZooParams& params) {
    for (const auto& info : zoo_registry()) {
        if (info.id != id) continue;
        for (const auto& [k, v] : params)
            if (!info.defaults.count(k))
                throw InputError("unknown parameter '" + k + "' for model '" + id + "'");
        return;
    }
    throw InputError("unknown model id '" + id + "'");
}

}  // namespace

ChartManifold instantiate_model(const std::string& id, const ZooParams& params) {
    check_keys(id, params);
    if (id == "flat")
        return zoo_flat(static_cast<int>(get(params, "n", 4)), static_cast<int>(get(params, "nu", 1)));
    if (id == "const_curv")
        return zoo_const_curv(static_cast<int>(get(params, "n", 4)),
                              static_cast<int>(get(params, "nu", 1)), get(params, "c", 1.0));
    if (id == "conf_flat_one_var")
        return zoo_conf_flat("x1", static_cast<int>(get(params, "nu", 1)));
    if (id == "conf_flat_generic")
        return zoo_conf_flat("sin(x1)*x2", static_cast<int>(get(params, "nu", 1)));
    if (id == "pp_wave_recurrent") return zoo_pp_wave(true);
    if (id == "pp_wave_symmetric") return zoo_pp_wave(false);
    if (id == "flat_kaehler")
        return zoo_flat_kaehler(static_cast<int>(get(params, "n", 4)),
                                static_cast<int>(get(params, "nu", 2)));
    if (id == "const_hol")
        return zoo_const_hol(static_cast<int>(get(params, "m", 2)),
                             static_cast<int>(get(params, "nu_c", 1)), get(params, "c", 2.0));
    if (id == "kaehler_product")
        return zoo_kaehler_product(get(params, "c1", 1.0), get(params, "c2", 2.0),
                                   get(params, "indefinite", 1.0) != 0.0);
    if (id == "non_kaehler_hermitian") return zoo_non_kaehler_hermitian();
    if (id == "sphere") return zoo_sphere(get(params, "c", 1.0));
    if (id == "sphere_product") return zoo_sphere_product();
    throw InputError("model id '" + id + "' is a map, not a manifold");
}

DiffeoMap instantiate_map(const std::string& id, const ZooParams& params) {
    check_keys(id, params);
    if (id == "identity") {
        const auto m = zoo_flat(static_cast<int>(get(params, "n", 4)),
                                static_cast<int>(get(params, "nu", 1)));
        return zoo_identity_map(m, m);
    }
    if (id == "homothety") {
        const auto m = zoo_const_curv(static_cast<int>(get(params, "n", 4)),
                                      static_cast<int>(get(params, "nu", 1)),
                                      get(params, "c", 1.0));
        return zoo_identity_map(m, scale_metric(m, 4.0));
    }
    if (id == "lorentz_boost") return zoo_lorentz_boost(get(params, "rapidity", 0.5));
    if (id == "const_curv_boost")
        return zoo_const_curv_boost(static_cast<int>(get(params, "nu", 1)),
                                    get(params, "rapidity", 0.5));
    if (id == "inversion") return zoo_inversion();
    if (id == "nonconformal_linear") return zoo_nonconformal_linear();
    if (id == "nonholomorphic_linear") return zoo_nonholomorphic_linear();
    throw InputError("model id '" + id + "' is a manifold, not a map");
}

}  // namespace ikg
