#include "ikg/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ikg/error.hpp"
#include "json.hpp"

namespace ikg {

namespace {

using nlohmann::json;

json parse_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open manifest file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError("invalid JSON in '" + path + "': " + e.what());
    }
}

void check_schema_version(const json& j, const std::string& what) {
    if (j.contains("schema_version") && j["schema_version"] != kManifestSchemaVersion)
        throw InputError(what + ": unsupported schema_version (expected 1)");
}

ChartManifold manifold_from_json(const json& j) {
    check_schema_version(j, "manifold manifest");
    if (!j.contains("name") || !j["name"].is_string())
        throw InputError("manifold manifest: field 'name' must be a string");
    if (!j.contains("dim") || !j["dim"].is_number_integer())
        throw InputError("manifold manifest: field 'dim' must be an integer");
    const int dim = j["dim"].get<int>();
    if (!j.contains("coords") || !j["coords"].is_array())
        throw InputError("manifold manifest: field 'coords' must be an array");
    std::vector<std::string> coords;
    for (const auto& c : j["coords"]) {
        if (!c.is_string())
            throw InputError("manifold manifest: 'coords' entries must be strings");
        coords.push_back(c.get<std::string>());
    }
    if (static_cast<int>(coords.size()) != dim)
        throw InputError("manifold manifest: 'coords' length does not match 'dim'");

    if (!j.contains("metric") || !j["metric"].is_array() ||
        static_cast<int>(j["metric"].size()) != dim)
        throw InputError("manifold manifest: field 'metric' must be a dim x dim array");
    // Upper triangle is authoritative; the lower triangle is mirrored.
    std::vector<Expr> g(static_cast<size_t>(dim) * dim);
    for (int i = 0; i < dim; ++i) {
        const auto& row = j["metric"][static_cast<size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != dim)
            throw InputError("manifold manifest: field 'metric' must be a dim x dim array");
        for (int k = i; k < dim; ++k) {
            const auto& cell = row[static_cast<size_t>(k)];
            if (!cell.is_string())
                throw InputError("manifold manifest: 'metric' entries must be expression strings");
            Expr e;
            try {
                e = parse_expr(cell.get<std::string>(), coords);
            } catch (const InputError& err) {
                throw InputError("manifold manifest: metric[" + std::to_string(i) + "][" +
                                 std::to_string(k) + "]: " + err.what());
            }
            g[static_cast<size_t>(i) * dim + k] = e;
            g[static_cast<size_t>(k) * dim + i] = e;
        }
    }

    std::optional<ComplexStructure> J;
    if (j.contains("complex_structure")) {
        const auto& cs = j["complex_structure"];
        if (!cs.is_object() || !cs.contains("pairs") || !cs["pairs"].is_array())
            throw InputError(
                "manifold manifest: 'complex_structure' must be an object with 'pairs'");
        std::vector<std::pair<int, int>> pairs;
        for (const auto& pr : cs["pairs"]) {
            if (!pr.is_array() || pr.size() != 2 || !pr[0].is_number_integer() ||
                !pr[1].is_number_integer())
                throw InputError(
                    "manifold manifest: 'complex_structure.pairs' entries must be index pairs");
            pairs.emplace_back(pr[0].get<int>(), pr[1].get<int>());
        }
        try {
            J = ComplexStructure::standard(dim, std::move(pairs));
        } catch (const Error& err) {
            throw InputError(std::string("manifold manifest: 'complex_structure.pairs': ") +
                             err.what());
        }
    }

    std::optional<Expr> v;
    if (j.contains("recurrence_function")) {
        if (!j["recurrence_function"].is_string())
            throw InputError("manifold manifest: 'recurrence_function' must be a string");
        try {
            v = parse_expr(j["recurrence_function"].get<std::string>(), coords);
        } catch (const InputError& err) {
            throw InputError(std::string("manifold manifest: 'recurrence_function': ") +
                             err.what());
        }
    }

    try {
        return ChartManifold(j["name"].get<std::string>(), std::move(coords), std::move(g),
                             std::move(J), std::move(v));
    } catch (const Error& err) {
        throw InputError(std::string("manifold manifest: ") + err.what());
    }
}

json manifold_to_json(const ChartManifold& m) {
    json j;
    j["schema_version"] = kManifestSchemaVersion;
    j["name"] = m.name();
    j["dim"] = m.dim();
    j["coords"] = m.coords();
    json metric = json::array();
    for (int i = 0; i < m.dim(); ++i) {
        json row = json::array();
        for (int k = 0; k < m.dim(); ++k) row.push_back(m.g(i, k).render());
        metric.push_back(std::move(row));
    }
    j["metric"] = std::move(metric);
    if (m.complex_structure()) {
        json pairs = json::array();
        for (const auto& [a, b] : m.complex_structure()->pairs)
            pairs.push_back(json::array({a, b}));
        j["complex_structure"] = {{"pairs", std::move(pairs)}};
    }
    if (m.recurrence_function()) j["recurrence_function"] = m.recurrence_function()->render();
    return j;
}

ChartManifold manifold_from_ref(const json& ref, const std::string& base_dir,
                                const char* field) {
    if (ref.is_string()) {
        std::filesystem::path p(ref.get<std::string>());
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        return manifold_from_json(parse_json_file(p.string()));
    }
    if (ref.is_object()) return manifold_from_json(ref);
    throw InputError(std::string("diffeo manifest: field '") + field +
                     "' must be a path or an inline manifold manifest");
}

}  // namespace

ChartManifold load_manifold_manifest(const std::string& path) {
    return manifold_from_json(parse_json_file(path));
}

ChartManifold manifold_from_json_text(const std::string& text) {
    try {
        return manifold_from_json(json::parse(text));
    } catch (const json::parse_error& e) {
        throw InputError(std::string("invalid manifest JSON: ") + e.what());
    }
}

std::string manifold_to_json_text(const ChartManifold& m) {
    return manifold_to_json(m).dump(2) + "\n";
}

DiffeoMap load_diffeo_manifest(const std::string& path) {
    const json j = parse_json_file(path);
    check_schema_version(j, "diffeo manifest");
    const std::string base_dir = std::filesystem::path(path).parent_path().string();
    if (!j.contains("source")) throw InputError("diffeo manifest: missing field 'source'");
    if (!j.contains("target")) throw InputError("diffeo manifest: missing field 'target'");
    ChartManifold source = manifold_from_ref(j["source"], base_dir, "source");
    ChartManifold target = manifold_from_ref(j["target"], base_dir, "target");
    if (source.dim() != target.dim())
        throw InputError("diffeo manifest: source and target dimensions differ");

    if (!j.contains("components") || !j["components"].is_array() ||
        static_cast<int>(j["components"].size()) != source.dim())
        throw InputError(
            "diffeo manifest: field 'components' must be an array of dim expression strings");
    auto parse_components = [&](const json& arr, const ChartManifold& over, const char* field) {
        std::vector<Expr> out;
        for (size_t i = 0; i < arr.size(); ++i) {
            if (!arr[i].is_string())
                throw InputError(std::string("diffeo manifest: '") + field +
                                 "' entries must be expression strings");
            try {
                out.push_back(parse_expr(arr[i].get<std::string>(), over.coords()));
            } catch (const InputError& err) {
                throw InputError(std::string("diffeo manifest: ") + field + "[" +
                                 std::to_string(i) + "]: " + err.what());
            }
        }
        return out;
    };
    std::vector<Expr> comps = parse_components(j["components"], source, "components");
    std::optional<std::vector<Expr>> inverse;
    if (j.contains("inverse")) {
        if (!j["inverse"].is_array() ||
            static_cast<int>(j["inverse"].size()) != source.dim())
            throw InputError(
                "diffeo manifest: field 'inverse' must be an array of dim expression strings");
        inverse = parse_components(j["inverse"], target, "inverse");
    }
    return DiffeoMap{std::move(source), std::move(target), std::move(comps),
                     std::move(inverse)};
}

std::string diffeo_to_json_text(const DiffeoMap& f) {
    json j;
    j["schema_version"] = kManifestSchemaVersion;
    j["source"] = manifold_to_json(f.source);
    j["target"] = manifold_to_json(f.target);
    json comps = json::array();
    for (const auto& c : f.components) comps.push_back(c.render());
    j["components"] = std::move(comps);
    if (f.inverse) {
        json inv = json::array();
        for (const auto& c : *f.inverse) inv.push_back(c.render());
        j["inverse"] = std::move(inv);
    }
    return j.dump(2) + "\n";
}

}  // namespace ikg
