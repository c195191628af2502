#pragma once

// Truncated multivariate Taylor arithmetic.
//
// A Jet<T> stores the Taylor coefficients f_alpha = d^alpha f / alpha! of a function of
// `dim` variables at a base point, for every multi-index with |alpha| <= order. The
// coefficient type T may itself be a Jet, which gives nested (jet-over-jet) lifting.
//
// A jet without a layout is a constant: it carries only a value and combines with any
// layout. Jets of equal dimension but different order combine at the lower order.

#include <complex>
#include <cstdint>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include "sdw/errors.hpp"
#include "sdw/pool.hpp"

namespace sdw {

using Complex = std::complex<double>;
using MultiIndex = std::vector<int>;

/// Dense graded-lexicographic coefficient layout shared by all jets of one (dim, order).
///
/// Indices are graded: every multi-index of degree <= k precedes those of degree k+1, so
/// the layout of a lower order is a prefix of the layout of a higher order. Truncation is
/// therefore a resize, and product tables of lower orders are prefixes as well.
class JetLayout {
 public:
  struct Term {
    std::uint32_t lhs;
    std::uint32_t rhs;
    std::uint32_t out;
  };

  /// Process-wide cached layout; the reference stays valid for the program lifetime.
  static const JetLayout& get(int dim, int order);

  int dim() const noexcept { return dim_; }
  int order() const noexcept { return order_; }
  std::size_t size() const noexcept { return indices_.size(); }

  const MultiIndex& multi_index(std::size_t i) const { return indices_[i]; }
  int degree(std::size_t i) const { return degrees_[i]; }
  /// alpha! for the i-th multi-index.
  double factorial(std::size_t i) const { return factorials_[i]; }

  /// Position of alpha in this layout. Throws OrderError when |alpha| > order.
  std::size_t find(const MultiIndex& alpha) const;

  /// Number of multi-indices of degree <= k.
  std::size_t prefix_size(int k) const;

  /// All (lhs, rhs, out) with alpha_lhs + alpha_rhs = alpha_out, sorted by out.
  const std::vector<Term>& products() const noexcept { return products_; }

  /// raise(v)[b] is the index of beta_b + e_v; defined for every b of degree < order.
  const std::vector<std::uint32_t>& raise(int var) const { return raise_[var]; }

 private:
  JetLayout(int dim, int order);

  int dim_;
  int order_;
  std::vector<MultiIndex> indices_;
  std::vector<int> degrees_;
  std::vector<double> factorials_;
  std::vector<Term> products_;
  std::vector<std::vector<std::uint32_t>> raise_;
};

namespace jet_detail {
// Plain complex arithmetic; the library never relies on the inf/nan recovery of std::complex.
inline Complex multiply(const Complex& a, const Complex& b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}
inline void multiply_add(Complex& acc, const Complex& a, const Complex& b) {
  acc = {acc.real() + a.real() * b.real() - a.imag() * b.imag(), acc.imag() + a.real() * b.imag() + a.imag() * b.real()};
}
template <class T>
T multiply(const T& a, const T& b) {
  return a * b;
}
template <class T>
void multiply_add(T& acc, const T& a, const T& b) {
  acc += a * b;
}
}  // namespace jet_detail

template <class T>
class Jet;

template <class T>
struct is_jet : std::false_type {};
template <class T>
struct is_jet<Jet<T>> : std::true_type {};
template <class T>
inline constexpr bool is_jet_v = is_jet<T>::value;

template <class T>
class Jet {
 public:
  using scalar_type = T;

  Jet() : coeffs_(1, T(0.0)) {}
  Jet(double v)
    requires(!std::is_same_v<T, double>)
      : coeffs_(1, T(v)) {}
  Jet(const T& v) : coeffs_(1, v) {}
  explicit Jet(const JetLayout& layout) : layout_(&layout), coeffs_(layout.size(), T(0.0)) {}
  Jet(const JetLayout& layout, const T& value) : Jet(layout) { coeffs_[0] = value; }
  /// Real jet promoted to a complex one.
  template <class U>
    requires(std::is_same_v<U, double> && !std::is_same_v<T, double>)
  explicit Jet(const Jet<U>& real) : layout_(real.layout()), coeffs_(real.coeffs().begin(), real.coeffs().end()) {}

  /// value + (variable `var`), i.e. the coordinate function shifted to `value`.
  static Jet variable(const JetLayout& layout, int var, const T& value) {
    Jet j(layout, value);
    if (layout.order() >= 1) j.coeffs_[1 + static_cast<std::size_t>(var)] = T(1.0);
    return j;
  }

  bool is_constant() const noexcept { return layout_ == nullptr; }
  const JetLayout* layout() const noexcept { return layout_; }
  int dim() const noexcept { return layout_ ? layout_->dim() : 0; }
  int order() const noexcept { return layout_ ? layout_->order() : 0; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  const T& value() const { return coeffs_[0]; }
  T& value() { return coeffs_[0]; }
  const T& coeff(std::size_t i) const { return coeffs_[i]; }
  T& coeff(std::size_t i) { return coeffs_[i]; }
  std::span<const T> coeffs() const { return coeffs_; }

  /// Stored Taylor coefficient f_alpha (zero above the value for constants).
  T coefficient(const MultiIndex& alpha) const {
    if (is_constant()) {
      for (int a : alpha)
        if (a != 0) return T(0.0);
      return coeffs_[0];
    }
    return coeffs_[layout_->find(alpha)];
  }

  Jet operator-() const {
    Jet r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }

  Jet& operator+=(const Jet& b) { return *this = std::move(*this) + b; }
  Jet& operator-=(const Jet& b) { return *this = std::move(*this) - b; }

  /// *this += s * b without temporaries when the layouts agree.
  void add_scaled(const Jet& b, double s) {
    if (layout_ == b.layout_) {
      for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += b.coeffs_[i] * s;
    } else {
      *this = std::move(*this) + b * s;
    }
  }
  Jet& operator*=(const Jet& b) { return *this = *this * b; }
  Jet& operator/=(const Jet& b) { return *this = *this / b; }

  friend Jet operator+(const Jet& a, const Jet& b) {
    if (b.is_constant()) {
      Jet r = a;
      r.coeffs_[0] += b.coeffs_[0];
      return r;
    }
    if (a.is_constant()) {
      Jet r = b;
      r.coeffs_[0] += a.coeffs_[0];
      return r;
    }
    const JetLayout& l = common_layout(a, b);
    Jet r(l);
    for (std::size_t i = 0; i < l.size(); ++i) r.coeffs_[i] = a.coeffs_[i] + b.coeffs_[i];
    return r;
  }

  friend Jet operator-(const Jet& a, const Jet& b) {
    if (b.is_constant()) {
      Jet r = a;
      r.coeffs_[0] -= b.coeffs_[0];
      return r;
    }
    if (a.is_constant()) {
      Jet r = -b;
      r.coeffs_[0] += a.coeffs_[0];
      return r;
    }
    const JetLayout& l = common_layout(a, b);
    Jet r(l);
    for (std::size_t i = 0; i < l.size(); ++i) r.coeffs_[i] = a.coeffs_[i] - b.coeffs_[i];
    return r;
  }

  friend Jet operator*(const Jet& a, const Jet& b) {
    if (a.is_constant()) return scaled(b, a.coeffs_[0]);
    if (b.is_constant()) return scaled(a, b.coeffs_[0]);
    const JetLayout& l = common_layout(a, b);
    Jet r(l);
    const T* pa = a.coeffs_.data();
    const T* pb = b.coeffs_.data();
    T* pr = r.coeffs_.data();
    for (const auto& t : l.products()) jet_detail::multiply_add(pr[t.out], pa[t.lhs], pb[t.rhs]);
    return r;
  }

  // rvalue and scalar forms avoid temporaries in long arithmetic chains
  friend Jet operator+(Jet&& a, const Jet& b) {
    if (b.is_constant()) {
      a.coeffs_[0] += b.coeffs_[0];
      return std::move(a);
    }
    if (a.layout_ != b.layout_) return static_cast<const Jet&>(a) + b;
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) a.coeffs_[i] += b.coeffs_[i];
    return std::move(a);
  }
  friend Jet operator+(const Jet& a, Jet&& b) { return std::move(b) + a; }
  friend Jet operator+(Jet&& a, Jet&& b) { return std::move(a) + static_cast<const Jet&>(b); }
  friend Jet operator-(Jet&& a, const Jet& b) {
    if (b.is_constant()) {
      a.coeffs_[0] -= b.coeffs_[0];
      return std::move(a);
    }
    if (a.layout_ != b.layout_) return static_cast<const Jet&>(a) - b;
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) a.coeffs_[i] -= b.coeffs_[i];
    return std::move(a);
  }
  friend Jet operator-(Jet&& a, Jet&& b) { return std::move(a) - static_cast<const Jet&>(b); }
  friend Jet operator*(const Jet& a, double s) { return scaled(a, T(s)); }
  friend Jet operator*(double s, const Jet& a) { return scaled(a, T(s)); }
  friend Jet operator*(Jet&& a, double s) {
    for (auto& c : a.coeffs_) c *= s;
    return std::move(a);
  }
  friend Jet operator*(double s, Jet&& a) { return std::move(a) * s; }
  friend Jet operator/(const Jet& a, double s) { return a * (1.0 / s); }

  friend Jet operator/(const Jet& a, const Jet& b) {
    if (b.is_constant()) return scaled(a, T(1.0) / b.coeffs_[0]);
    return a * reciprocal(b);
  }

  friend bool operator==(const Jet& a, const Jet& b) {
    return a.layout_ == b.layout_ && a.coeffs_ == b.coeffs_;
  }

 private:
  static const JetLayout& common_layout(const Jet& a, const Jet& b) {
    if (a.layout_ == b.layout_) return *a.layout_;
    if (a.layout_->dim() != b.layout_->dim())
      throw LayoutError("jets of dimension " + std::to_string(a.layout_->dim()) + " and " +
                        std::to_string(b.layout_->dim()) + " cannot be combined");
    return a.layout_->order() < b.layout_->order() ? *a.layout_ : *b.layout_;
  }

  static Jet scaled(const Jet& a, const T& s) {
    Jet r = a;
    for (auto& c : r.coeffs_) c = jet_detail::multiply(c, s);
    return r;
  }

  const JetLayout* layout_ = nullptr;
  std::vector<T, CoefficientAllocator<T>> coeffs_;
};

// ---------------------------------------------------------------------------------------
// Scalar helpers shared by double, Complex and Jet coefficient types.

inline Complex base_scalar(double x) { return x; }
inline Complex base_scalar(const Complex& z) { return z; }
template <class T>
Complex base_scalar(const Jet<T>& j) {
  return base_scalar(j.value());
}

inline double conj(double x) { return x; }
inline Complex conj(const Complex& z) { return std::conj(z); }
template <class T>
Jet<T> conj(const Jet<T>& j) {
  Jet<T> r = j;
  for (std::size_t i = 0; i < r.size(); ++i) r.coeff(i) = conj(j.coeff(i));
  return r;
}

/// True for exact zeros that carry no derivative information.
inline bool is_constant_zero(double x) { return x == 0.0; }
inline bool is_constant_zero(const Complex& z) { return z == Complex(0.0, 0.0); }
template <class T>
bool is_constant_zero(const Jet<T>& j) {
  return j.is_constant() && is_constant_zero(j.value());
}

/// |base value|, used for pivoting and convergence tests.
template <class T>
double base_abs(const T& x) {
  return std::abs(base_scalar(x));
}

void check_positive_base(const Complex& c, const char* fn);
void check_nonzero_base(const Complex& c, const char* fn);

inline double sin(double x) { return std::sin(x); }
inline double cos(double x) { return std::cos(x); }
inline double tan(double x) { return std::tan(x); }
inline double exp(double x) { return std::exp(x); }
inline double sinh(double x) { return std::sinh(x); }
inline double cosh(double x) { return std::cosh(x); }
inline double atan(double x) { return std::atan(x); }
double ln(double x);
double sqrt(double x);
double pow(double x, double r);
double reciprocal(double x);

inline Complex sin(const Complex& x) { return std::sin(x); }
inline Complex cos(const Complex& x) { return std::cos(x); }
inline Complex tan(const Complex& x) { return std::tan(x); }
inline Complex exp(const Complex& x) { return std::exp(x); }
inline Complex sinh(const Complex& x) { return std::sinh(x); }
inline Complex cosh(const Complex& x) { return std::cosh(x); }
inline Complex atan(const Complex& x) { return std::atan(x); }
Complex ln(const Complex& x);
Complex sqrt(const Complex& x);
Complex pow(const Complex& x, double r);
Complex reciprocal(const Complex& x);

namespace detail {

/// Sum_k a_k (j - value(j))^k truncated at the order of j (Horner scheme).
template <class T>
Jet<T> compose(const Jet<T>& j, const std::vector<T>& a) {
  Jet<T> u = j;
  u.value() = T(0.0);
  Jet<T> r(*j.layout(), a.back());
  for (std::size_t k = a.size() - 1; k-- > 0;) {
    r = r * u;
    r.value() += a[k];
  }
  return r;
}

inline double inverse_factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return 1.0 / f;
}

/// Coefficients of the quotient of two univariate truncated series (den[0] invertible).
template <class T>
std::vector<T> series_divide(const std::vector<T>& num, const std::vector<T>& den, int n) {
  std::vector<T> q(static_cast<std::size_t>(n) + 1, T(0.0));
  T inv0 = reciprocal(den[0]);
  for (int k = 0; k <= n; ++k) {
    T acc = k < static_cast<int>(num.size()) ? num[k] : T(0.0);
    for (int i = 1; i <= k && i < static_cast<int>(den.size()); ++i) acc = acc - den[i] * q[k - i];
    q[k] = acc * inv0;
  }
  return q;
}

/// Taylor coefficients of a function whose derivatives cycle through `cycle` (sin, cos, ...).
template <class T>
std::vector<T> cyclic_coeffs(const std::vector<T>& cycle, int n) {
  std::vector<T> a;
  a.reserve(n + 1);
  for (int k = 0; k <= n; ++k) a.push_back(cycle[k % cycle.size()] * inverse_factorial(k));
  return a;
}

}  // namespace detail

template <class T>
Jet<T> reciprocal(const Jet<T>& j) {
  if (j.is_constant()) return Jet<T>(reciprocal(j.value()));
  check_nonzero_base(base_scalar(j), "reciprocal");
  const int n = j.order();
  T inv = reciprocal(j.value());
  std::vector<T> a;
  a.reserve(n + 1);
  T term = inv;
  for (int k = 0; k <= n; ++k) {
    a.push_back(term);
    term = -(term * inv);
  }
  return detail::compose(j, a);
}

template <class T>
Jet<T> exp(const Jet<T>& j) {
  if (j.is_constant()) return Jet<T>(exp(j.value()));
  T e = exp(j.value());
  return detail::compose(j, detail::cyclic_coeffs<T>({e}, j.order()));
}

template <class T>
Jet<T> sin(const Jet<T>& j) {
  if (j.is_constant()) return Jet<T>(sin(j.value()));
  T s = sin(j.value()), c = cos(j.value());
  return detail::compose(j, detail::cyclic_coeffs<T>({s, c, -s, -c}, j.order()));
}

template <class T>
Jet<T> cos(const Jet<T>& j) {
  if (j.is_constant()) return Jet<T>(cos(j.value()));
  T s = sin(j.value()), c = cos(j.value());
  return detail::compose(j, detail::cyclic_coeffs<T>({c, -s, -c, s}, j.order()));
}

template <class T>
Jet<T> sinh(const Jet<T>& j) {
  if (j.is_constant()) return Jet<T>(sinh(j.value()));
  T s = sinh(j.value()), c = cosh(j.value());
  return detail::compose(j, detail::cyclic_coeffs<T>({s, c}, j.order()));
}

template <class T>
Jet<T> cosh(const Jet<T>& j) {
  if (j.is_constant()) return Jet<T>(cosh(j.value()));
  T s = sinh(j.value()), c = cosh(j.value());
  return detail::compose(j, detail::cyclic_coeffs<T>({c, s}, j.order()));
}

template <class T>
Jet<T> tan(const Jet<T>& j) {
  if (j.is_constant()) return Jet<T>(tan(j.value()));
  const int n = j.order();
  T s = sin(j.value()), c = cos(j.value());
  check_nonzero_base(base_scalar(c), "tan");
  auto num = detail::cyclic_coeffs<T>({s, c, -s, -c}, n);
  auto den = detail::cyclic_coeffs<T>({c, -s, -c, s}, n);
  return detail::compose(j, detail::series_divide(num, den, n));
}

template <class T>
Jet<T> atan(const Jet<T>& j) {
  if (j.is_constant()) return Jet<T>(atan(j.value()));
  const int n = j.order();
  const T& c = j.value();
  // atan'(c + t) = 1 / (1 + c^2 + 2 c t + t^2)
  std::vector<T> den{T(1.0) + c * c, T(2.0) * c, T(1.0)};
  auto b = detail::series_divide<T>({T(1.0)}, den, n);
  std::vector<T> a(static_cast<std::size_t>(n) + 1, T(0.0));
  a[0] = atan(c);
  for (int k = 1; k <= n; ++k) a[k] = b[k - 1] * (1.0 / k);
  return detail::compose(j, a);
}

template <class T>
Jet<T> ln(const Jet<T>& j) {
  if (j.is_constant()) return Jet<T>(ln(j.value()));
  check_positive_base(base_scalar(j), "ln");
  const int n = j.order();
  T inv = reciprocal(j.value());
  std::vector<T> a;
  a.reserve(n + 1);
  a.push_back(ln(j.value()));
  T power = inv;
  for (int k = 1; k <= n; ++k) {
    a.push_back(power * ((k % 2 == 1 ? 1.0 : -1.0) / k));
    power = power * inv;
  }
  return detail::compose(j, a);
}

/// j^r for a real exponent r; requires a positive base value.
template <class T>
Jet<T> pow(const Jet<T>& j, double r) {
  if (j.is_constant()) return Jet<T>(pow(j.value(), r));
  check_positive_base(base_scalar(j), "pow");
  const int n = j.order();
  T inv = reciprocal(j.value());
  T term = pow(j.value(), r);
  std::vector<T> a;
  a.reserve(n + 1);
  for (int k = 0; k <= n; ++k) {
    a.push_back(term);
    term = term * inv * ((r - k) / (k + 1));
  }
  return detail::compose(j, a);
}

template <class T>
Jet<T> sqrt(const Jet<T>& j) {
  if (j.is_constant()) return Jet<T>(sqrt(j.value()));
  return pow(j, 0.5);
}

/// Integer power by repeated squaring; negative exponents go through reciprocal.
template <class T>
T ipow(const T& x, int k) {
  if (k < 0) return reciprocal(ipow(x, -k));
  T result(1.0);
  T base = x;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

// ---------------------------------------------------------------------------------------
// Structural operations.

/// Coordinate lift: d jets of the given order, the i-th equal to x_i + (variable i).
std::vector<Jet<Complex>> lift_point(std::span<const double> x, int order);

/// d^alpha f at the base point, i.e. f_alpha * alpha!.
template <class T>
T extract(const Jet<T>& j, const MultiIndex& alpha) {
  if (j.is_constant()) return j.coefficient(alpha);
  int degree = 0;
  for (int a : alpha) degree += a;
  if (static_cast<int>(alpha.size()) != j.dim())
    throw OrderError("multi-index dimension does not match the jet");
  if (degree > j.order())
    throw OrderError("derivative of degree " + std::to_string(degree) +
                     " requested from a jet of order " + std::to_string(j.order()));
  std::size_t i = j.layout()->find(alpha);
  return j.coeff(i) * j.layout()->factorial(i);
}

/// Partial derivative with respect to variable `var`; the order drops by one.
template <class T>
Jet<T> derivative(const Jet<T>& j, int var) {
  if (j.is_constant()) return Jet<T>();
  if (j.order() == 0) throw OrderError("cannot differentiate a jet of order 0");
  const JetLayout& lower = JetLayout::get(j.dim(), j.order() - 1);
  const auto& raise = j.layout()->raise(var);
  Jet<T> r(lower);
  for (std::size_t b = 0; b < lower.size(); ++b) {
    const double factor = lower.multi_index(b)[var] + 1;
    r.coeff(b) = j.coeff(raise[b]) * factor;
  }
  return r;
}

template <class T>
Jet<T> truncate(const Jet<T>& j, int order) {
  if (j.is_constant() || order >= j.order()) return j;
  const JetLayout& lower = JetLayout::get(j.dim(), order);
  Jet<T> r(lower);
  for (std::size_t i = 0; i < lower.size(); ++i) r.coeff(i) = j.coeff(i);
  return r;
}

/// g(w) = f(s w): multiplies each coefficient by s^|alpha|.
template <class T>
Jet<T> scale_variables(const Jet<T>& j, double s) {
  if (j.is_constant()) return j;
  Jet<T> r = j;
  std::vector<double> powers(static_cast<std::size_t>(j.order()) + 1, 1.0);
  for (std::size_t k = 1; k < powers.size(); ++k) powers[k] = powers[k - 1] * s;
  for (std::size_t i = 0; i < r.size(); ++i) r.coeff(i) = r.coeff(i) * powers[j.layout()->degree(i)];
  return r;
}

/// Re-express a jet in a layout of dimension new_dim >= dim, placing variable v at map[v].
template <class T>
Jet<T> remap_variables(const Jet<T>& j, int new_dim, std::span<const int> map) {
  if (j.is_constant()) return j;
  const JetLayout& target = JetLayout::get(new_dim, j.order());
  Jet<T> r(target);
  MultiIndex beta(static_cast<std::size_t>(new_dim));
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::fill(beta.begin(), beta.end(), 0);
    const auto& alpha = j.layout()->multi_index(i);
    for (int v = 0; v < j.dim(); ++v) beta[map[v]] += alpha[v];
    r.coeff(target.find(beta)) = j.coeff(i);
  }
  return r;
}

/// Adds trailing variables the jet does not depend on.
template <class T>
Jet<T> embed(const Jet<T>& j, int new_dim) {
  std::vector<int> map(static_cast<std::size_t>(j.dim()));
  for (int v = 0; v < j.dim(); ++v) map[v] = v;
  return remap_variables(j, new_dim, map);
}

}  // namespace sdw
