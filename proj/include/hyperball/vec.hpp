#ifndef HYPERBALL_VEC_HPP
#define HYPERBALL_VEC_HPP

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <initializer_list>

namespace hyperball {

// Largest ambient dimension any routine needs: balls up to n = 6 and the
// (n+1)-dimensional hyperboloid model, with room to spare.
inline constexpr int kMaxDim = 8;

/// Small fixed-capacity vector with a runtime dimension. Avoids heap traffic in
/// the quadrature inner loops.
class Vec {
 public:
  Vec() = default;
  explicit Vec(int dim) : dim_(dim) { assert(dim >= 0 && dim <= kMaxDim); }
  Vec(std::initializer_list<double> xs) : dim_(static_cast<int>(xs.size())) {
    assert(dim_ <= kMaxDim);
    std::copy(xs.begin(), xs.end(), x_.begin());
  }

  static Vec unit(int dim, int axis) {
    Vec v(dim);
    v[axis] = 1.0;
    return v;
  }

  int dim() const { return dim_; }
  double& operator[](int i) { return x_[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return x_[static_cast<std::size_t>(i)]; }
  const double* data() const { return x_.data(); }

  double dot(const Vec& o) const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += x_[i] * o.x_[i];
    return s;
  }
  double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < dim_; ++i) x_[i] += o.x_[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < dim_; ++i) x_[i] -= o.x_[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (int i = 0; i < dim_; ++i) x_[i] *= s;
    return *this;
  }
  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(double s, Vec a) { return a *= s; }
  friend Vec operator*(Vec a, double s) { return a *= s; }

  Vec normalized() const { return (1.0 / norm()) * *this; }

  friend bool operator==(const Vec& a, const Vec& b) {
    if (a.dim_ != b.dim_) return false;
    for (int i = 0; i < a.dim_; ++i)
      if (a.x_[i] != b.x_[i]) return false;
    return true;
  }

 private:
  std::array<double, kMaxDim> x_{};
  int dim_ = 0;
};

// a*x + b*y without temporaries
inline Vec axpby(double a, const Vec& x, double b, const Vec& y) {
  Vec out(x.dim());
  for (int i = 0; i < x.dim(); ++i) out[i] = a * x[i] + b * y[i];
  return out;
}

/// Orthonormal frame whose last column is `pole`; columns 0..dim-2 span the
/// tangent space at `pole`. Built from a Householder reflection, so it is
/// orthogonal but may have determinant -1.
class Frame {
 public:
  Frame() = default;
  explicit Frame(const Vec& pole) : dim_(pole.dim()) {
    const int n = dim_;
    const int last = n - 1;
    // Reflection H with H e_last = pole.
    Vec v = Vec::unit(n, last) - pole;
    const double vv = v.norm2();
    for (int j = 0; j < n; ++j) {
      Vec col = Vec::unit(n, j);
      if (vv > 1e-28) {
        const double c = 2.0 * v[j] / vv;
        col -= c * v;
      }
      cols_[static_cast<std::size_t>(j)] = col;
    }
  }

  int dim() const { return dim_; }
  const Vec& column(int j) const { return cols_[static_cast<std::size_t>(j)]; }
  const Vec& pole() const { return column(dim_ - 1); }

  // Maps local coordinates (pole along the last axis) to ambient coordinates.
  Vec to_ambient(const Vec& local) const {
    Vec out(dim_);
    for (int j = 0; j < local.dim(); ++j) {
      const double c = local[j];
      if (c == 0.0) continue;
      const Vec& col = column(j);
      for (int i = 0; i < dim_; ++i) out[i] += c * col[i];
    }
    return out;
  }

  Vec to_local(const Vec& ambient) const {
    Vec out(dim_);
    for (int j = 0; j < dim_; ++j) out[j] = column(j).dot(ambient);
    return out;
  }

 private:
  std::array<Vec, kMaxDim> cols_{};
  int dim_ = 0;
};

}  // namespace hyperball

#endif  // HYPERBALL_VEC_HPP
