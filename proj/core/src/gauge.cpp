#include "sdw/gauge.hpp"

#include <random>

namespace sdw {

FiberForm::FiberForm(CMatrix s) : s_(std::move(s)) {
  if (s_.rows() == 0 || s_.rows() != s_.cols()) throw ValidationError("fiber form must be a non-empty square matrix");
  double scale = std::max(1.0, frobenius_norm(s_));
  if (frobenius_norm(s_ - s_.conj_transpose()) > 1e-12 * scale) throw ValidationError("fiber form S is not hermitian");
  try {
    s_inv_ = solve(s_, CMatrix::identity(s_.rows()), 1e-12);
  } catch (const NumericalError&) {
    throw ValidationError("fiber form S is singular");
  }
}

GaugeFields::GaugeFields(int dim, std::size_t k, std::vector<ExpressionMatrix> a, ExpressionMatrix b)
    : dim_(dim), k_(k), a_(std::move(a)), b_(std::move(b)) {
  auto check_shape = [&](const ExpressionMatrix& m, const std::string& what) {
    if (m.size() != k_) throw ValidationError(what + " must have k rows");
    for (const auto& row : m) {
      if (row.size() != k_) throw ValidationError(what + " must be k x k");
      for (const auto& e : row)
        if (e.re.max_variable() >= dim_ || e.im.max_variable() >= dim_)
          throw ValidationError(what + " references a coordinate beyond the dimension");
    }
  };
  if (static_cast<int>(a_.size()) != dim_) throw ValidationError("A must have one matrix per coordinate");
  for (int mu = 0; mu < dim_; ++mu) check_shape(a_[mu], "A[" + std::to_string(mu) + "]");
  check_shape(b_, "B");

  a_zero_.assign(dim_, true);
  da_.assign(dim_, std::vector<ExpressionMatrix>(dim_, ExpressionMatrix(k_, std::vector<ComplexExpression>(k_))));
  for (int mu = 0; mu < dim_; ++mu)
    for (std::size_t i = 0; i < k_; ++i)
      for (std::size_t j = 0; j < k_; ++j) {
        if (!a_[mu][i][j].is_zero()) a_zero_[mu] = false;
        for (int nu = 0; nu < dim_; ++nu) da_[mu][nu][i][j] = a_[mu][i][j].derivative(nu);
      }
  for (bool z : a_zero_) has_a_ = has_a_ || !z;
}

GaugeFields GaugeFields::scalar(int dim, std::size_t k, const Expression& b) {
  const ComplexExpression zero{Expression::number(0.0), Expression::number(0.0)};
  std::vector<ExpressionMatrix> a(dim, ExpressionMatrix(k, std::vector<ComplexExpression>(k, zero)));
  ExpressionMatrix bm(k, std::vector<ComplexExpression>(k, zero));
  for (std::size_t i = 0; i < k; ++i) bm[i][i] = {b, Expression::number(0.0)};
  return GaugeFields(dim, k, std::move(a), std::move(bm));
}

void GaugeFields::validate(const FiberForm& form, const ChartBox& box, int samples, double tol) const {
  if (form.k() != k_) throw ValidationError("fiber form dimension does not match the gauge fields");
  std::mt19937_64 rng(0xb0d1e);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RVector x(dim_);
  for (int s = 0; s < samples; ++s) {
    for (int i = 0; i < dim_; ++i) x[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * u(rng);
    for (int mu = 0; mu < dim_; ++mu) {
      CMatrix a = A<double>(mu, x);
      double defect = frobenius_norm(form.adjoint(a) + a);
      if (defect > tol * std::max(1.0, frobenius_norm(a)))
        throw ValidationError("A[" + std::to_string(mu) + "] is not anti-hermitian with respect to S (defect " +
                              std::to_string(defect) + ")");
    }
    CMatrix b = B<double>(x);
    double defect = frobenius_norm(form.adjoint(b) - b);
    if (defect > tol * std::max(1.0, frobenius_norm(b)))
      throw ValidationError("B is not hermitian with respect to S (defect " + std::to_string(defect) + ")");
  }
}

}  // namespace sdw
