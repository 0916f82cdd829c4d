#pragma once

#include <map>
#include <string>
#include <vector>

#include "ikg/diffeo.hpp"
#include "ikg/manifold.hpp"

namespace ikg {

using ZooParams = std::map<std::string, double>;

struct ZooModelInfo {
    std::string id;
    std::string kind;  // "manifold" or "map"
    std::string summary;
    ZooParams defaults;
};

/// All built-in models, in a fixed order.
const std::vector<ZooModelInfo>& zoo_registry();

/// Instantiate a manifold model by id; unknown keys in params are rejected.
ChartManifold instantiate_model(const std::string& id, const ZooParams& params = {});

/// Instantiate a map model by id.
DiffeoMap instantiate_map(const std::string& id, const ZooParams& params = {});

// Direct constructors used throughout the test suites.
ChartManifold zoo_flat(int n, int nu);
ChartManifold zoo_const_curv(int n, int nu, double c);
ChartManifold zoo_conf_flat(const std::string& sigma_text, int nu);  // n = 4
ChartManifold zoo_pp_wave(bool linear_profile);  // A(u) = u when true, else 1
ChartManifold zoo_flat_kaehler(int n, int nu);
ChartManifold zoo_const_hol(int m_complex, int nu_complex, double c);
ChartManifold zoo_kaehler_product(double c1, double c2, bool indefinite);
ChartManifold zoo_non_kaehler_hermitian();
ChartManifold zoo_sphere(double c);       // round 2-sphere, polar chart
ChartManifold zoo_sphere_product();       // unit S^2 x S^2, polar charts

/// Same chart with every metric component multiplied by a constant factor.
ChartManifold scale_metric(const ChartManifold& m, double factor);

DiffeoMap zoo_identity_map(const ChartManifold& source, const ChartManifold& target);
DiffeoMap zoo_linear_map(const ChartManifold& source, const ChartManifold& target, const Mat& A);
DiffeoMap zoo_lorentz_boost(double rapidity);             // flat R^4_1
DiffeoMap zoo_const_curv_boost(int nu, double rapidity);  // isometry of const_curv
DiffeoMap zoo_inversion();                                // conformal inversion, flat R^4_1
DiffeoMap zoo_nonconformal_linear();                      // flat R^4_2
DiffeoMap zoo_nonholomorphic_linear();                    // flat Kaehler R^4_2

}  // namespace ikg
