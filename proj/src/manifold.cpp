#include "ikg/manifold.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "ikg/error.hpp"
#include "ikg/internal_caches.hpp"

namespace ikg {

ComplexStructure ComplexStructure::standard(int dim, std::vector<std::pair<int, int>> pairs) {
    if (dim % 2 != 0) throw InputError("complex structure requires even dimension");
    if (static_cast<int>(pairs.size()) != dim / 2)
        throw InputError("complex structure needs dim/2 index pairs");
    std::vector<bool> seen(static_cast<size_t>(dim), false);
    for (auto [a, b] : pairs) {
        if (a < 0 || b < 0 || a >= dim || b >= dim || a == b)
            throw InputError("complex structure pair index out of range");
        if (seen[static_cast<size_t>(a)] || seen[static_cast<size_t>(b)])
            throw InputError("complex structure pairs must be disjoint");
        seen[static_cast<size_t>(a)] = seen[static_cast<size_t>(b)] = true;
    }
    ComplexStructure J;
    J.dim = dim;
    J.pairs = std::move(pairs);
    return J;
}

Mat ComplexStructure::matrix() const {
    Mat J = Mat::Zero(dim, dim);
    for (auto [a, b] : pairs) {
        J(b, a) = 1.0;   // J e_a = e_b
        J(a, b) = -1.0;  // J e_b = -e_a
    }
    return J;
}

Vec ComplexStructure::apply(const Vec& v) const {
    Vec w = Vec::Zero(dim);
    for (auto [a, b] : pairs) {
        w[b] += v[a];
        w[a] -= v[b];
    }
    return w;
}

ChartManifold::ChartManifold(std::string name, std::vector<std::string> coords,
                             std::vector<Expr> metric_row_major,
                             std::optional<ComplexStructure> J,
                             std::optional<Expr> recurrence_function)
    : name_(std::move(name)),
      coords_(std::move(coords)),
      metric_(std::move(metric_row_major)),
      J_(std::move(J)),
      recurrence_function_(std::move(recurrence_function)),
      caches_(std::make_shared<detail::ManifoldCaches>()) {
    const int n = dim();
    if (n < 2) throw InputError("manifold dimension must be >= 2");
    if (metric_.size() != static_cast<size_t>(n) * n)
        throw InputError("metric must have dim x dim components");
    // Upper triangle is authoritative; mirror it.
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            metric_[static_cast<size_t>(j) * n + i] = metric_[static_cast<size_t>(i) * n + j];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (metric_[static_cast<size_t>(i) * n + j].empty())
                throw InputError("missing metric component");
    if (J_ && J_->dim != n) throw InputError("complex structure dimension mismatch");
}

Mat metric_at(const ChartManifold& m, std::span<const double> p) {
    const int n = m.dim();
    if (static_cast<int>(p.size()) != n) throw InputError("point dimension mismatch");
    Mat g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) g(i, j) = g(j, i) = m.g(i, j).eval(p);
    double scale = max_abs(g);
    const double det = g.determinant();
    if (std::abs(det) <= 1e-12 * std::pow(std::max(scale, 1e-300), n))
        throw NumericError("singular metric at evaluated point (|det| too small)");
    return g;
}

Mat inverse_metric_at(const ChartManifold& m, std::span<const double> p) {
    return metric_at(m, p).inverse();
}

}  // namespace ikg
