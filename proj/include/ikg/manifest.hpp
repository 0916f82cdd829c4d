#pragma once

#include <string>

#include "ikg/diffeo.hpp"
#include "ikg/manifold.hpp"

namespace ikg {

inline constexpr int kManifestSchemaVersion = 1;

/// Load a chart-manifold manifest (JSON; see schemas/manifest.schema.json).
/// Throws InputError naming the offending field.
ChartManifold load_manifold_manifest(const std::string& path);
ChartManifold manifold_from_json_text(const std::string& text);

/// Serialize to manifest JSON text (schema_version 1, 2-space indent).
std::string manifold_to_json_text(const ChartManifold& m);

/// Load a diffeomorphism manifest. "source"/"target" may be inline manifold
/// manifests or paths relative to the manifest file's directory.
DiffeoMap load_diffeo_manifest(const std::string& path);

std::string diffeo_to_json_text(const DiffeoMap& f);

}  // namespace ikg
