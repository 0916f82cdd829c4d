// ikg: curvature and conformal-equivalence toolkit for indefinite metrics.
//
// Subcommands: report, plane, predicate, preserve, limit, theorem1, zoo, verify.
// Exit codes: 0 success, 1 predicate/verification failure, 2 input/schema
// error, 3 numerical failure.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ikg/curvature.hpp"
#include "ikg/diffeo.hpp"
#include "ikg/error.hpp"
#include "ikg/geometry.hpp"
#include "ikg/manifest.hpp"
#include "ikg/predicates.hpp"
#include "ikg/rng.hpp"
#include "ikg/verify.hpp"
#include "ikg/zoo.hpp"

namespace {

using namespace ikg;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitPredicateFail = 1;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

std::vector<double> parse_csv_doubles(const std::string& text, const char* field) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            size_t used = 0;
            const double v = std::stod(tok, &used);
            while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used])))
                ++used;
            if (used != tok.size()) throw std::invalid_argument(tok);
            out.push_back(v);
        } catch (const std::exception&) {
            throw InputError(std::string("field '") + field + "': '" + tok +
                             "' is not a decimal number");
        }
    }
    if (out.empty())
        throw InputError(std::string("field '") + field + "' is empty");
    return out;
}

std::vector<double> parse_point(const std::string& text, int dim, const char* field) {
    auto p = parse_csv_doubles(text, field);
    if (static_cast<int>(p.size()) != dim)
        throw InputError(std::string("field '") + field + "': expected " +
                         std::to_string(dim) + " coordinates, got " +
                         std::to_string(p.size()));
    return p;
}

std::vector<std::vector<double>> load_points_file(const std::string& path, int dim) {
    std::ifstream in(path);
    if (!in) throw InputError("field 'points': cannot open '" + path + "'");
    std::vector<std::vector<double>> pts;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        pts.push_back(parse_point(line, dim, "points"));
    }
    if (pts.empty()) throw InputError("field 'points': file '" + path + "' has no points");
    return pts;
}

// Deterministic sample box keyed to the chart's coordinate names, matching the
// charts in the built-in zoo (angles stay away from polar-chart degeneracies).
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

void emit(const json& j, bool as_json) {
    if (as_json) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    // aligned human table over the top-level fields
    size_t width = 0;
    for (const auto& [k, v] : j.items()) width = std::max(width, k.size());
    for (const auto& [k, v] : j.items()) {
        std::cout << std::left << std::setw(static_cast<int>(width) + 2) << k;
        if (v.is_string())
            std::cout << v.get<std::string>() << "\n";
        else
            std::cout << v.dump() << "\n";
    }
}

json point_json(const std::vector<double>& p) { return json(p); }

const char* gradient_class_name(GradientClass c) {
    switch (c) {
        case GradientClass::Zero: return "zero";
        case GradientClass::Isotropic: return "isotropic";
        case GradientClass::Nonnull: return "nonnull";
        default: return "unknown";
    }
}

// ---- report ----------------------------------------------------------------

int cmd_report(const std::string& manifest, const std::string& point_text, bool as_json) {
    const ChartManifold m = load_manifold_manifest(manifest);
    const auto p = parse_point(point_text, m.dim(), "point");
    const auto b = bundle_at(m, p);

    json j;
    j["command"] = "report";
    j["name"] = m.name();
    j["dim"] = m.dim();
    j["point"] = point_json(p);
    j["scalar_curvature"] = b->scalar;
    j["max_abs_riemann"] = b->riemann.max_abs();
    j["einstein_defect"] = einstein_defect(*b);

    // eigenvalues of the Ricci endomorphism g^{-1} S, sorted by (re, im)
    Eigen::EigenSolver<Mat> es(Mat(b->ginv * b->ricci));
    std::vector<std::pair<double, double>> ev;
    for (int i = 0; i < m.dim(); ++i)
        ev.emplace_back(es.eigenvalues()[i].real(), es.eigenvalues()[i].imag());
    std::sort(ev.begin(), ev.end());
    json evj = json::array();
    for (const auto& [re, im] : ev) evj.push_back(json::array({re, im}));
    j["ricci_eigenvalues"] = std::move(evj);

    if (m.dim() >= 4) j["conformally_flat_defect"] = conformally_flat_defect(*b);
    if (m.complex_structure()) {
        const Mat Jm = m.complex_structure()->matrix();
        const double herm = max_abs(Mat(Jm.transpose() * b->g * Jm - b->g));
        j["hermitian_defect"] = herm;
        if (herm <= 1e-9 * (1.0 + max_abs(b->g)))
            j["bochner_defect"] = bochner_at(*b, *m.complex_structure()).max_abs() /
                                  (1.0 + b->riemann.max_abs());
    }
    emit(j, as_json);
    return kExitOk;
}

// ---- plane -----------------------------------------------------------------

int cmd_plane(const std::string& manifest, const std::string& point_text,
              const std::string& x_text, const std::string& y_text, bool as_json) {
    const ChartManifold m = load_manifold_manifest(manifest);
    const auto p = parse_point(point_text, m.dim(), "point");
    const auto xv = parse_point(x_text, m.dim(), "x");
    const auto yv = parse_point(y_text, m.dim(), "y");
    Vec x = Eigen::Map<const Vec>(xv.data(), m.dim());
    Vec y = Eigen::Map<const Vec>(yv.data(), m.dim());
    const auto b = bundle_at(m, p);
    const auto cls = classify_plane(b->g, x, y);

    json j;
    j["command"] = "plane";
    j["point"] = point_json(p);
    j["rank"] = cls.rank;
    switch (cls.cls) {
        case PlaneClass::Nondegenerate: j["class"] = "nondegenerate"; break;
        case PlaneClass::WeaklyDegenerate: j["class"] = "weakly_degenerate"; break;
        case PlaneClass::StronglyDegenerate: j["class"] = "strongly_degenerate"; break;
    }
    if (cls.cls == PlaneClass::Nondegenerate)
        j["sectional_curvature"] = sectional_curvature(*b, x, y);
    emit(j, as_json);
    return kExitOk;
}

// ---- predicate -------------------------------------------------------------

int cmd_predicate(const std::string& manifest, const std::string& which,
                  const std::string& points_file, int random_n, std::uint64_t seed,
                  double tol, bool as_json) {
    const ChartManifold m = load_manifold_manifest(manifest);
    std::vector<std::vector<double>> pts;
    if (!points_file.empty()) {
        pts = load_points_file(points_file, m.dim());
    } else if (random_n > 0) {
        Rng rng(seed);
        for (int k = 0; k < random_n; ++k) pts.push_back(sample_point(m, rng));
    } else {
        throw InputError("field 'points': give --points FILE or --random N");
    }

    json j;
    j["command"] = "predicate";
    j["which"] = which;
    j["tol"] = tol;
    json per = json::array();
    bool pass = true;

    auto per_point_defect = [&](auto&& defect_of) {
        for (const auto& p : pts) {
            const double d = defect_of(p);
            per.push_back(json{{"point", point_json(p)}, {"defect", d}});
            pass = pass && d <= tol;
        }
    };

    if (which == "einstein") {
        per_point_defect([&](const auto& p) { return einstein_defect(*bundle_at(m, p)); });
    } else if (which == "conf-flat") {
        per_point_defect(
            [&](const auto& p) { return conformally_flat_defect(*bundle_at(m, p)); });
    } else if (which == "const-curv") {
        for (const auto& p : pts) {
            const auto fit = constant_curvature_fit(*bundle_at(m, p));
            per.push_back(json{{"point", point_json(p)}, {"c", fit.c},
                               {"defect", fit.residual}});
            pass = pass && fit.residual <= tol;
        }
    } else if (which == "const-hol") {
        if (!m.complex_structure())
            throw InputError("field 'complex_structure': required for const-hol");
        for (const auto& p : pts) {
            const auto fit = constant_hol_curvature_fit(*bundle_at(m, p),
                                                        *m.complex_structure());
            per.push_back(json{{"point", point_json(p)}, {"c", fit.c},
                               {"defect", fit.residual}});
            pass = pass && fit.residual <= tol;
        }
    } else if (which == "quasi-const") {
        for (const auto& p : pts) {
            const auto fit = quasi_constant_fit(*bundle_at(m, p));
            const char* st = fit.status == QuasiConstantFit::Status::Ok
                                 ? "ok"
                                 : (fit.status == QuasiConstantFit::Status::NotConformallyFlat
                                        ? "not_conformally_flat"
                                        : "no_distinguished_eigenvector");
            json e{{"point", point_json(p)}, {"status", st}, {"defect", fit.residual},
                   {"H", fit.H}, {"N", fit.N}};
            if (fit.status == QuasiConstantFit::Status::Ok) {
                std::vector<double> V(fit.V.data(), fit.V.data() + fit.V.size());
                e["V"] = V;
            }
            per.push_back(std::move(e));
            pass = pass && fit.status != QuasiConstantFit::Status::NotConformallyFlat &&
                   fit.residual <= tol;
        }
    } else if (which == "kn-star") {
        for (const auto& p : pts) {
            const auto fit = kn_star_classify(m, p, m.recurrence_function());
            const char* cls = "not_kn_star";
            if (fit.cls == RecurrenceFit::Class::Recurrent) cls = "recurrent";
            else if (fit.cls == RecurrenceFit::Class::SymmetricWalker) cls = "symmetric_walker";
            else if (fit.cls == RecurrenceFit::Class::SymmetricUnclassified)
                cls = "symmetric_unclassified";
            std::vector<double> alpha(fit.alpha.data(), fit.alpha.data() + fit.alpha.size());
            per.push_back(json{{"point", point_json(p)}, {"class", cls},
                               {"defect", fit.residual}, {"alpha", alpha}});
            pass = pass && fit.cls != RecurrenceFit::Class::NotKnStar;
        }
    } else if (which == "kaehler") {
        if (!m.complex_structure())
            throw InputError("field 'complex_structure': required for kaehler");
        const auto rep = kaehler_check(m, pts);
        j["hermitian_defect"] = rep.hermitian_defect;
        j["dphi_defect"] = rep.dphi_defect;
        j["nabla_j_defect"] = rep.nabla_j_defect;
        pass = rep.passed(tol);
    } else {
        throw InputError("field 'which': unknown predicate '" + which + "'");
    }

    if (!per.empty()) j["points"] = std::move(per);
    j["verdict"] = pass ? "pass" : "fail";
    emit(j, as_json);
    return pass ? kExitOk : kExitPredicateFail;
}

// ---- preserve --------------------------------------------------------------

int cmd_preserve(const std::string& manifest, const std::string& mode_text,
                 const std::string& points_file, int samples, std::uint64_t seed,
                 bool as_json) {
    const DiffeoMap f = load_diffeo_manifest(manifest);
    PreserveMode mode;
    if (mode_text == "sectional") mode = PreserveMode::Sectional;
    else if (mode_text == "ricci-unit") mode = PreserveMode::RicciUnit;
    else throw InputError("field 'mode': expected sectional or ricci-unit");

    Rng rng(seed);
    std::vector<std::vector<double>> pts;
    if (!points_file.empty())
        pts = load_points_file(points_file, f.source.dim());
    else
        for (int k = 0; k < 3; ++k) pts.push_back(sample_point(f.source, rng));

    Rng sub = rng.split(1);
    const auto res = preservation_defect(f, mode, pts, sub, samples);
    json j;
    j["command"] = "preserve";
    j["mode"] = mode_text;
    j["samples"] = samples;
    j["defect"] = res.defect;
    j["used"] = res.used;
    j["skipped"] = res.skipped;
    emit(j, as_json);
    return kExitOk;
}

// ---- limit -----------------------------------------------------------------

int cmd_limit(const std::string& manifest, const std::string& mode_text,
              const std::string& point_text, std::uint64_t seed, bool as_json) {
    const DiffeoMap f = load_diffeo_manifest(manifest);
    LimitMode mode;
    if (mode_text == "plane-weak") mode = LimitMode::PlaneWeak;
    else if (mode_text == "plane-strong") mode = LimitMode::PlaneStrong;
    else if (mode_text == "ricci") mode = LimitMode::Ricci;
    else if (mode_text == "holo") mode = LimitMode::Holo;
    else throw InputError("field 'mode': expected plane-weak, plane-strong, ricci or holo");

    const auto p = parse_point(point_text, f.source.dim(), "point");
    Rng rng(seed);
    const auto rep = limit_ratio(f, mode, p, rng);

    json j;
    j["command"] = "limit";
    j["mode"] = mode_text;
    j["point"] = point_json(p);
    j["t"] = rep.t;
    j["ratio"] = rep.ratio;
    j["limit"] = rep.limit;
    j["converged"] = rep.converged;
    if (!rep.diagnostics.empty()) j["diagnostics"] = rep.diagnostics;
    emit(j, as_json);
    return rep.converged ? kExitOk : kExitPredicateFail;
}

// ---- theorem1 ---------------------------------------------------------------

int cmd_theorem1(const std::string& manifest, const std::string& sigma_text,
                 const std::string& point_text, bool as_json) {
    const ChartManifold m = load_manifold_manifest(manifest);
    const auto p = parse_point(point_text, m.dim(), "point");
    Expr sigma;
    try {
        sigma = parse_expr(sigma_text, m.coords());
    } catch (const InputError& e) {
        throw InputError(std::string("field 'sigma': ") + e.what());
    }
    const auto [d22, dR] = theorem1_identities_defect(m, sigma, p);

    // gradient class of sigma at p decides the case split a/b/c
    const int n = m.dim();
    Vec dsig(n);
    for (int i = 0; i < n; ++i) dsig[i] = sigma.diff(i).eval(p);
    const Mat g = metric_at(m, p);
    const Vec grad = g.inverse() * dsig;
    const double aux = grad.norm();
    GradientClass gc;
    if (aux < 1e-8)
        gc = GradientClass::Zero;
    else if (std::abs(grad.dot(g * grad)) < 1e-8 * aux * aux && aux >= 1e-6)
        gc = GradientClass::Isotropic;
    else
        gc = GradientClass::Nonnull;
    const char* case_label = gc == GradientClass::Zero
                                 ? "a"
                                 : (gc == GradientClass::Isotropic ? "b" : "c");

    json j;
    j["command"] = "theorem1";
    j["point"] = point_json(p);
    j["sigma"] = sigma.render();
    j["ricci_identity_defect"] = d22;
    j["curvature_identity_defect"] = dR;
    j["gradient_class"] = gradient_class_name(gc);
    j["case"] = case_label;
    emit(j, as_json);
    return kExitOk;
}

// ---- zoo -------------------------------------------------------------------

int cmd_zoo_list(bool as_json) {
    if (as_json) {
        json arr = json::array();
        for (const auto& info : zoo_registry()) {
            json d = json::object();
            for (const auto& [k, v] : info.defaults) d[k] = v;
            arr.push_back(json{{"id", info.id}, {"kind", info.kind},
                               {"summary", info.summary}, {"defaults", std::move(d)}});
        }
        std::cout << json{{"command", "zoo_list"}, {"models", std::move(arr)}}.dump(2)
                  << "\n";
        return kExitOk;
    }
    size_t w = 0;
    for (const auto& info : zoo_registry()) w = std::max(w, info.id.size());
    for (const auto& info : zoo_registry()) {
        std::cout << std::left << std::setw(static_cast<int>(w) + 2) << info.id
                  << std::setw(10) << info.kind << info.summary;
        if (!info.defaults.empty()) {
            std::cout << "  [";
            bool first = true;
            for (const auto& [k, v] : info.defaults) {
                if (!first) std::cout << ", ";
                first = false;
                std::cout << k << "=" << v;
            }
            std::cout << "]";
        }
        std::cout << "\n";
    }
    return kExitOk;
}

int cmd_zoo_emit(const std::string& id, const std::string& out_path) {
    std::string text;
    bool is_map = false;
    for (const auto& info : zoo_registry())
        if (info.id == id) is_map = info.kind == "map";
    text = is_map ? diffeo_to_json_text(instantiate_map(id))
                  : manifold_to_json_text(instantiate_model(id));
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw InputError("field 'output': cannot write '" + out_path + "'");
        out << text;
    }
    return kExitOk;
}

// ---- verify ------------------------------------------------------------------

int cmd_verify(const std::string& suite, std::uint64_t seed, bool as_json) {
    std::vector<SuiteResult> results;
    if (suite == "all")
        results = run_all_suites(seed);
    else
        results.push_back(run_verify_suite(suite, seed));
    bool all = true;
    for (const auto& r : results) all = all && r.passed;

    if (as_json) {
        json arr = json::array();
        for (const auto& r : results)
            arr.push_back(json{{"name", r.name}, {"passed", r.passed},
                               {"detail", r.detail}});
        std::cout << json{{"command", "verify"}, {"suites", std::move(arr)},
                          {"all_passed", all}}
                         .dump(2)
                  << "\n";
    } else {
        size_t w = 0;
        for (const auto& r : results) w = std::max(w, r.name.size());
        for (const auto& r : results)
            std::cout << std::left << std::setw(static_cast<int>(w) + 2) << r.name
                      << (r.passed ? "pass" : "FAIL") << "  " << r.detail << "\n";
        std::cout << (all ? "all suites passed" : "some suites FAILED") << "\n";
    }
    return all ? kExitOk : kExitPredicateFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"curvature and conformal-equivalence toolkit for indefinite metrics"};
    app.require_subcommand(1);
    int threads = 1;
    app.add_option("--threads", threads, "parallelism cap (output is independent of it)")
        ->check(CLI::PositiveNumber);

    std::string manifest, point_text, x_text, y_text, which, points_file, sigma_text;
    std::string mode_text, out_path, suite = "all", zoo_id;
    int random_n = 0, samples = 100;
    std::uint64_t seed = 1;
    bool as_json = false;

    auto* report = app.add_subcommand("report", "curvature summary at a point");
    report->add_option("-m,--manifold", manifest, "manifold manifest")->required();
    report->add_option("-p,--point", point_text, "comma-separated coordinates")->required();
    report->add_flag("--json", as_json, "emit a single JSON object");

    auto* plane = app.add_subcommand("plane", "classify a tangent plane");
    plane->add_option("-m,--manifold", manifest, "manifold manifest")->required();
    plane->add_option("-p,--point", point_text, "comma-separated coordinates")->required();
    plane->add_option("--x", x_text, "first spanning vector")->required();
    plane->add_option("--y", y_text, "second spanning vector")->required();
    plane->add_flag("--json", as_json, "emit a single JSON object");

    auto* predicate = app.add_subcommand("predicate", "structural predicate over points");
    predicate->add_option("-m,--manifold", manifest, "manifold manifest")->required();
    predicate
        ->add_option("--which", which,
                     "einstein|conf-flat|const-curv|const-hol|quasi-const|kn-star|kaehler")
        ->required();
    predicate->add_option("--points", points_file, "file of points, one per line");
    predicate->add_option("--random", random_n, "number of random sample points");
    predicate->add_option("--seed", seed, "random seed");
    double tol = 1e-8;
    predicate->add_option("--tol", tol, "pass/fail tolerance");
    predicate->add_flag("--json", as_json, "emit a single JSON object");

    auto* preserve = app.add_subcommand("preserve", "curvature preservation defect of a map");
    preserve->add_option("-f,--map", manifest, "diffeomorphism manifest")->required();
    preserve->add_option("--mode", mode_text, "sectional|ricci-unit")->required();
    preserve->add_option("--samples", samples, "samples per point");
    preserve->add_option("--seed", seed, "random seed");
    preserve->add_option("--points", points_file, "file of base points (default: 3 random)");
    preserve->add_flag("--json", as_json, "emit a single JSON object");

    auto* limit = app.add_subcommand("limit", "curvature-ratio limit along a degeneration");
    limit->add_option("-f,--map", manifest, "diffeomorphism manifest")->required();
    limit->add_option("--mode", mode_text, "plane-weak|plane-strong|ricci|holo")->required();
    limit->add_option("-p,--point", point_text, "comma-separated coordinates")->required();
    limit->add_option("--seed", seed, "random seed");
    limit->add_flag("--json", as_json, "emit a single JSON object");

    auto* theorem1 = app.add_subcommand("theorem1",
                                        "conformal-change identity defects and case split");
    theorem1->add_option("-m,--manifold", manifest, "manifold manifest")->required();
    theorem1->add_option("--sigma", sigma_text, "conformal exponent expression")->required();
    theorem1->add_option("-p,--point", point_text, "comma-separated coordinates")->required();
    theorem1->add_flag("--json", as_json, "emit a single JSON object");

    auto* zoo = app.add_subcommand("zoo", "built-in model registry");
    auto* zoo_list = zoo->add_subcommand("list", "list the registry");
    zoo_list->add_flag("--json", as_json, "emit a single JSON object");
    auto* zoo_emit = zoo->add_subcommand("emit", "emit a model manifest");
    zoo_emit->add_option("id", zoo_id, "model id")->required();
    zoo_emit->add_option("-o,--output", out_path, "output file (default stdout)");
    zoo->require_subcommand(1);

    std::uint64_t vseed = 12345;
    auto* verify = app.add_subcommand("verify", "run the verification suites");
    verify->add_option("--suite", suite, "all or a suite name");
    verify->add_option("--seed", vseed, "random seed");
    verify->add_flag("--json", as_json, "emit a single JSON object");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (report->parsed()) return cmd_report(manifest, point_text, as_json);
        if (plane->parsed()) return cmd_plane(manifest, point_text, x_text, y_text, as_json);
        if (predicate->parsed())
            return cmd_predicate(manifest, which, points_file, random_n, seed, tol, as_json);
        if (preserve->parsed())
            return cmd_preserve(manifest, mode_text, points_file, samples, seed, as_json);
        if (limit->parsed()) return cmd_limit(manifest, mode_text, point_text, seed, as_json);
        if (theorem1->parsed()) return cmd_theorem1(manifest, sigma_text, point_text, as_json);
        if (zoo->parsed()) {
            if (zoo_list->parsed()) return cmd_zoo_list(as_json);
            return cmd_zoo_emit(zoo_id, out_path);
        }
        if (verify->parsed()) return cmd_verify(suite, vseed, as_json);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitInput;
}
