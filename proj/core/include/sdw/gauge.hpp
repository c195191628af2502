#pragma once

// Fiber data: the sesquilinear form S, the connection potential A_mu and the potential B.

#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "sdw/expression.hpp"
#include "sdw/geometry.hpp"
#include "sdw/matrix.hpp"

namespace sdw {

template <class T>
struct complex_of {
  using type = T;
};
template <>
struct complex_of<double> {
  using type = Complex;
};
template <>
struct complex_of<Jet<double>> {
  using type = Jet<Complex>;
};
template <class T>
using complex_of_t = typename complex_of<T>::type;

/// re + i im for real or complex-jet scalars.
template <class T>
complex_of_t<T> make_complex(const T& re, const T& im) {
  if constexpr (std::is_same_v<T, double>) {
    return Complex(re, im);
  } else {
    using CT = complex_of_t<T>;
    return CT(re) + CT(im) * CT(Complex(0.0, 1.0));
  }
}

/// Hermitian, invertible k x k form; defines M^dagger = S^{-1} M^H S.
class FiberForm {
 public:
  explicit FiberForm(CMatrix s);
  static FiberForm identity(std::size_t k) { return FiberForm(CMatrix::identity(k)); }

  std::size_t k() const noexcept { return s_.rows(); }
  const CMatrix& matrix() const noexcept { return s_; }
  const CMatrix& inverse_matrix() const noexcept { return s_inv_; }

  template <class T>
  Matrix<T> adjoint(const Matrix<T>& m) const {
    return promote<T>(s_inv_) * m.conj_transpose() * promote<T>(s_);
  }

 private:
  CMatrix s_;
  CMatrix s_inv_;
};

inline CMatrix adjoint(const CMatrix& m, const FiberForm& form) { return form.adjoint(m); }

struct ComplexExpression {
  Expression re;
  Expression im;

  bool is_zero() const { return re.is_number(0.0) && im.is_number(0.0); }

  template <class T>
  complex_of_t<T> evaluate(std::span<const T> x) const {
    using CT = complex_of_t<T>;
    if (im.is_number(0.0)) return CT(re.evaluate(x));
    return make_complex(re.evaluate(x), im.evaluate(x));
  }

  ComplexExpression derivative(int var) const { return {re.derivative(var), im.derivative(var)}; }
};

using ExpressionMatrix = std::vector<std::vector<ComplexExpression>>;

/// Connection potentials A_mu (k x k each) and the potential B (k x k) on a chart.
class GaugeFields {
 public:
  GaugeFields(int dim, std::size_t k, std::vector<ExpressionMatrix> a, ExpressionMatrix b);

  /// A = 0 and B = b * identity.
  static GaugeFields scalar(int dim, std::size_t k, const Expression& b);
  static GaugeFields zero(int dim, std::size_t k) { return scalar(dim, k, Expression::number(0.0)); }

  int dim() const noexcept { return dim_; }
  std::size_t k() const noexcept { return k_; }
  bool has_connection() const noexcept { return has_a_; }
  const ExpressionMatrix& a_expression(int mu) const { return a_[mu]; }
  const ExpressionMatrix& b_expression() const { return b_; }

  template <class T>
  Matrix<complex_of_t<T>> A(int mu, std::span<const T> x) const {
    return eval(a_[mu], x);
  }
  /// d_nu A_mu
  template <class T>
  Matrix<complex_of_t<T>> dA(int mu, int nu, std::span<const T> x) const {
    return eval(da_[mu][nu], x);
  }
  template <class T>
  Matrix<complex_of_t<T>> B(std::span<const T> x) const {
    return eval(b_, x);
  }

  /// Sum_mu w^mu A_mu(x).
  template <class T, class W>
  Matrix<complex_of_t<T>> contract(std::span<const W> w, std::span<const T> x) const {
    using CT = complex_of_t<T>;
    Matrix<CT> out(k_, k_);
    if (!has_a_) return out;
    for (int mu = 0; mu < dim_; ++mu) {
      if (a_zero_[mu]) continue;
      Matrix<CT> a = A(mu, x);
      for (std::size_t i = 0; i < k_; ++i)
        for (std::size_t j = 0; j < k_; ++j) out(i, j) = out(i, j) + a(i, j) * CT(w[mu]);
    }
    return out;
  }

  /// Checks A_mu^dagger = -A_mu and B^dagger = B at `samples` points of the box.
  void validate(const FiberForm& form, const ChartBox& box, int samples = 64, double tol = 1e-10) const;

 private:
  template <class T>
  Matrix<complex_of_t<T>> eval(const ExpressionMatrix& e, std::span<const T> x) const {
    Matrix<complex_of_t<T>> out(k_, k_);
    for (std::size_t i = 0; i < k_; ++i)
      for (std::size_t j = 0; j < k_; ++j)
        if (!e[i][j].is_zero()) out(i, j) = e[i][j].evaluate(x);
    return out;
  }

  int dim_;
  std::size_t k_;
  std::vector<ExpressionMatrix> a_;
  std::vector<std::vector<ExpressionMatrix>> da_;
  ExpressionMatrix b_;
  std::vector<bool> a_zero_;
  bool has_a_ = false;
};

}  // namespace sdw
