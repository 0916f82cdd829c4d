#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <vector>

namespace ikg {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Dense covariant order-4 tensor over dimension n.
class Tensor4 {
  public:
    Tensor4() = default;
    explicit Tensor4(int n) : n_(n), v_(static_cast<size_t>(n) * n * n * n, 0.0) {}

    int dim() const { return n_; }
    double& at(int i, int j, int k, int l) { return v_[idx(i, j, k, l)]; }
    double at(int i, int j, int k, int l) const { return v_[idx(i, j, k, l)]; }

    double max_abs() const {
        double m = 0.0;
        for (double x : v_) m = std::max(m, std::abs(x));
        return m;
    }

    Tensor4& operator+=(const Tensor4& o) {
        for (size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
        return *this;
    }
    Tensor4& operator-=(const Tensor4& o) {
        for (size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
        return *this;
    }
    Tensor4& operator*=(double s) {
        for (double& x : v_) x *= s;
        return *this;
    }
    friend Tensor4 operator+(Tensor4 a, const Tensor4& b) { return a += b; }
    friend Tensor4 operator-(Tensor4 a, const Tensor4& b) { return a -= b; }
    friend Tensor4 operator*(double s, Tensor4 a) { return a *= s; }

    /// Componentwise Frobenius inner product (the auxiliary inner product).
    double dot(const Tensor4& o) const {
        double s = 0.0;
        for (size_t i = 0; i < v_.size(); ++i) s += v_[i] * o.v_[i];
        return s;
    }

    /// Multilinear evaluation on four vectors.
    double apply(const Vec& x, const Vec& y, const Vec& z, const Vec& u) const {
        double s = 0.0;
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                for (int k = 0; k < n_; ++k)
                    for (int l = 0; l < n_; ++l)
                        s += at(i, j, k, l) * x[i] * y[j] * z[k] * u[l];
        return s;
    }

  private:
    size_t idx(int i, int j, int k, int l) const {
        return ((static_cast<size_t>(i) * n_ + j) * n_ + k) * n_ + l;
    }
    int n_ = 0;
    std::vector<double> v_;
};

/// Dense covariant order-5 tensor; slot 0 is the differentiation direction.
class Tensor5 {
  public:
    Tensor5() = default;
    explicit Tensor5(int n) : n_(n), v_(static_cast<size_t>(n) * n * n * n * n, 0.0) {}

    int dim() const { return n_; }
    double& at(int m, int i, int j, int k, int l) { return v_[idx(m, i, j, k, l)]; }
    double at(int m, int i, int j, int k, int l) const { return v_[idx(m, i, j, k, l)]; }

    double max_abs() const {
        double m = 0.0;
        for (double x : v_) m = std::max(m, std::abs(x));
        return m;
    }

  private:
    size_t idx(int m, int i, int j, int k, int l) const {
        return (((static_cast<size_t>(m) * n_ + i) * n_ + j) * n_ + k) * n_ + l;
    }
    int n_ = 0;
    std::vector<double> v_;
};

inline double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
inline double max_abs(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace ikg
