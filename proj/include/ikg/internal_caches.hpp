#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "ikg/expr.hpp"

namespace ikg {

struct CurvatureBundle;

namespace detail {

/// Per-manifold mutable state: symbolic metric-derivative tables and the
/// curvature-bundle cache keyed by exact point coordinates. Recomputation is
/// pure, so this is an optimization only.
struct ManifoldCaches {
    std::mutex mutex;
    bool tables_built = false;
    int n = 0;
    // Row-major tables of symbolic partial derivatives of g_ij.
    std::vector<Expr> dg;    // [k][i][j]
    std::vector<Expr> d2g;   // [k][l][i][j]
    std::vector<Expr> d3g;   // [k][l][m][i][j]
    std::map<std::vector<double>, std::shared_ptr<const CurvatureBundle>> bundles;
};

}  // namespace detail
}  // namespace ikg
