#include "sdw/jets.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace sdw {

namespace {

void enumerate_degree(int dim, int degree, int var, MultiIndex& current, std::vector<MultiIndex>& out) {
  if (var == dim - 1) {
    current[var] = degree;
    out.push_back(current);
    current[var] = 0;
    return;
  }
  for (int a = degree; a >= 0; --a) {
    current[var] = a;
    enumerate_degree(dim, degree - a, var + 1, current, out);
  }
  current[var] = 0;
}

}  // namespace

JetLayout::JetLayout(int dim, int order) : dim_(dim), order_(order) {
  MultiIndex current(static_cast<std::size_t>(dim), 0);
  for (int k = 0; k <= order; ++k) enumerate_degree(dim, k, 0, current, indices_);

  degrees_.reserve(indices_.size());
  factorials_.reserve(indices_.size());
  for (const auto& alpha : indices_) {
    int deg = 0;
    double fact = 1.0;
    for (int a : alpha) {
      deg += a;
      for (int i = 2; i <= a; ++i) fact *= i;
    }
    degrees_.push_back(deg);
    factorials_.push_back(fact);
  }

  MultiIndex sum(static_cast<std::size_t>(dim));
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    for (std::size_t j = 0; j < indices_.size(); ++j) {
      if (degrees_[i] + degrees_[j] > order) continue;
      for (int v = 0; v < dim; ++v) sum[v] = indices_[i][v] + indices_[j][v];
      products_.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                           static_cast<std::uint32_t>(find(sum))});
    }
  }
  std::stable_sort(products_.begin(), products_.end(),
                   [](const Term& a, const Term& b) { return a.out < b.out; });

  raise_.resize(static_cast<std::size_t>(dim));
  const std::size_t lower = order > 0 ? prefix_size(order - 1) : 0;
  for (int v = 0; v < dim; ++v) {
    raise_[v].resize(lower);
    for (std::size_t b = 0; b < lower; ++b) {
      MultiIndex up = indices_[b];
      up[v] += 1;
      raise_[v][b] = static_cast<std::uint32_t>(find(up));
    }
  }
}

std::size_t JetLayout::prefix_size(int k) const {
  if (k < 0) return 0;
  if (k >= order_) return indices_.size();
  // C(dim + k, k)
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (dim_ + i) / i;
  return static_cast<std::size_t>(std::llround(c));
}

std::size_t JetLayout::find(const MultiIndex& alpha) const {
  if (static_cast<int>(alpha.size()) != dim_) throw OrderError("multi-index dimension mismatch");
  int deg = 0;
  for (int a : alpha) {
    if (a < 0) throw OrderError("negative multi-index entry");
    deg += a;
  }
  if (deg > order_)
    throw OrderError("multi-index of degree " + std::to_string(deg) + " exceeds jet order " +
                     std::to_string(order_));
  // Rank within degree `deg` in the enumeration order (first variable descending).
  std::size_t pos = prefix_size(deg - 1);
  int remaining = deg;
  for (int v = 0; v < dim_ - 1; ++v) {
    // indices with a larger entry at v come first
    for (int a = remaining; a > alpha[v]; --a) {
      int rest = remaining - a;
      int vars = dim_ - v - 1;
      // number of multi-indices of exact degree `rest` in `vars` variables: C(rest+vars-1, vars-1)
      double c = 1.0;
      for (int i = 1; i <= vars - 1; ++i) c = c * (rest + i) / i;
      pos += static_cast<std::size_t>(std::llround(c));
    }
    remaining -= alpha[v];
  }
  return pos;
}

const JetLayout& JetLayout::get(int dim, int order) {
  if (dim < 1) throw LayoutError("jet dimension must be at least 1");
  if (order < 0) throw OrderError("jet order must be non-negative");
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<JetLayout>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{dim, order}];
  if (!slot) slot.reset(new JetLayout(dim, order));
  return *slot;
}

void check_positive_base(const Complex& c, const char* fn) {
  if (!(c.real() > 0.0))
    throw DomainError(std::string(fn) + ": base value " + std::to_string(c.real()) +
                      (c.imag() != 0.0 ? "+" + std::to_string(c.imag()) + "i" : "") +
                      " has non-positive real part");
}

void check_nonzero_base(const Complex& c, const char* fn) {
  if (c == Complex(0.0, 0.0)) throw DomainError(std::string(fn) + ": zero base value");
}

double ln(double x) {
  if (!(x > 0.0)) throw DomainError("ln: non-positive argument " + std::to_string(x));
  return std::log(x);
}

double sqrt(double x) {
  if (x < 0.0) throw DomainError("sqrt: negative argument " + std::to_string(x));
  return std::sqrt(x);
}

double pow(double x, double r) {
  if (x < 0.0 && r != std::floor(r))
    throw DomainError("pow: negative base with non-integer exponent");
  if (x == 0.0 && r < 0.0) throw DomainError("pow: zero base with negative exponent");
  return std::pow(x, r);
}

double reciprocal(double x) {
  if (x == 0.0) throw DomainError("reciprocal: zero argument");
  return 1.0 / x;
}

Complex ln(const Complex& x) {
  if (x == Complex(0.0, 0.0)) throw DomainError("ln: zero argument");
  if (x.imag() == 0.0 && x.real() < 0.0) throw DomainError("ln: negative real argument");
  return std::log(x);
}

Complex sqrt(const Complex& x) {
  if (x.imag() == 0.0 && x.real() < 0.0) throw DomainError("sqrt: negative real argument");
  return std::sqrt(x);
}

Complex pow(const Complex& x, double r) {
  if (x == Complex(0.0, 0.0)) {
    if (r < 0.0) throw DomainError("pow: zero base with negative exponent");
    return r == 0.0 ? Complex(1.0) : Complex(0.0);
  }
  if (x.imag() == 0.0) return Complex(pow(x.real(), r));
  return std::pow(x, r);
}

Complex reciprocal(const Complex& x) {
  if (x == Complex(0.0, 0.0)) throw DomainError("reciprocal: zero argument");
  return 1.0 / x;
}

std::vector<Jet<Complex>> lift_point(std::span<const double> x, int order) {
  const int d = static_cast<int>(x.size());
  const JetLayout& layout = JetLayout::get(d, order);
  std::vector<Jet<Complex>> out;
  out.reserve(x.size());
  for (int i = 0; i < d; ++i) out.push_back(Jet<Complex>::variable(layout, i, x[i]));
  return out;
}

}  // namespace sdw
