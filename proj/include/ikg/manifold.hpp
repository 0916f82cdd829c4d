#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ikg/expr.hpp"
#include "ikg/tensor.hpp"

namespace ikg {

/// Constant standard almost complex structure on coordinate pairs (a,b):
/// J e_a = e_b, J e_b = -e_a. J^2 = -id holds by construction.
struct ComplexStructure {
    int dim = 0;
    std::vector<std::pair<int, int>> pairs;

    /// Validates that the pairs are disjoint and cover 0..dim-1.
    static ComplexStructure standard(int dim, std::vector<std::pair<int, int>> pairs);

    Mat matrix() const;  // dim x dim, J as an endomorphism of components
    Vec apply(const Vec& v) const;
};

namespace detail {
struct ManifoldCaches;
}

/// Single chart of a pseudo-Riemannian manifold: coordinates and symmetric
/// metric component expressions, with an optional standard complex structure.
class ChartManifold {
  public:
    ChartManifold() = default;
    ChartManifold(std::string name, std::vector<std::string> coords,
                  std::vector<Expr> metric_row_major,
                  std::optional<ComplexStructure> J = std::nullopt,
                  std::optional<Expr> recurrence_function = std::nullopt);

    const std::string& name() const { return name_; }
    int dim() const { return static_cast<int>(coords_.size()); }
    const std::vector<std::string>& coords() const { return coords_; }
    const Expr& g(int i, int j) const { return metric_[static_cast<size_t>(i) * dim() + j]; }
    const std::optional<ComplexStructure>& complex_structure() const { return J_; }
    const std::optional<Expr>& recurrence_function() const { return recurrence_function_; }

    /// Shared mutable caches (symbolic derivative tables, curvature bundles).
    /// Copies of a manifold share them; purely an optimization.
    detail::ManifoldCaches& caches() const { return *caches_; }

  private:
    std::string name_;
    std::vector<std::string> coords_;
    std::vector<Expr> metric_;  // row-major dim x dim, symmetrized on construction
    std::optional<ComplexStructure> J_;
    std::optional<Expr> recurrence_function_;
    std::shared_ptr<detail::ManifoldCaches> caches_;
};

struct TangentVector {
    std::vector<double> point;
    Vec components;
};

struct TangentPlane {
    std::vector<double> point;
    Vec x, y;
};

/// Metric matrix at a point. Throws NumericError if |det g| is below
/// 1e-12 * max|g_ij|^n (singular metric).
Mat metric_at(const ChartManifold& m, std::span<const double> p);

/// Inverse metric; same singularity policy.
Mat inverse_metric_at(const ChartManifold& m, std::span<const double> p);

}  // namespace ikg
