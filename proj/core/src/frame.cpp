#include "sdw/frame.hpp"

namespace sdw {

JetMatrix constant_matrix(const CMatrix& c) { return c.map([](const Complex& z) { return CJet(z); }); }

JetMatrix derivative(const JetMatrix& f, int var) {
  return f.map([var](const CJet& j) { return derivative(j, var); });
}

JetMatrix kg_apply(const LocalFrame& frame, const JetMatrix& F) {
  const int d = frame.dim;
  std::vector<JetMatrix> dF;
  dF.reserve(d);
  for (int a = 0; a < d; ++a) dF.push_back(derivative(F, a));

  JetMatrix out = frame.potential * F;
  for (int a = 0; a < d; ++a) {
    out = out + frame.gamma_trace[a] * dF[a];
    if (!frame.a_up.empty()) out = out + (frame.a_up[a] * dF[a]) * CJet(2.0);
    for (int b = a; b < d; ++b) {
      CJet coef = frame.ginv(a, b);
      if (b != a) coef = coef * 2.0;
      out = out + coef * derivative(dF[a], b);
    }
  }
  return out;
}

namespace {

JetMatrix embed_matrix(const JetMatrix& m, int new_dim) {
  return m.map([new_dim](const CJet& j) { return embed(j, new_dim); });
}

}  // namespace

LocalFrame embed_frame(const LocalFrame& frame, int new_dim) {
  LocalFrame out;
  out.dim = frame.dim;
  out.k = frame.k;
  out.ginv = embed_matrix(frame.ginv, new_dim);
  for (const auto& c : frame.gamma_trace) out.gamma_trace.push_back(embed(c, new_dim));
  for (const auto& a : frame.a_up) out.a_up.push_back(embed_matrix(a, new_dim));
  out.potential = embed_matrix(frame.potential, new_dim);
  return out;
}

LocalFrame truncate_frame(const LocalFrame& frame, int order) {
  LocalFrame out;
  out.dim = frame.dim;
  out.k = frame.k;
  out.ginv = truncate(frame.ginv, order);
  for (const auto& c : frame.gamma_trace) out.gamma_trace.push_back(truncate(c, order));
  for (const auto& a : frame.a_up) out.a_up.push_back(truncate(a, order));
  out.potential = truncate(frame.potential, order);
  return out;
}

LocalFrame chart_frame(const MetricField& m, const GaugeFields& gauge, std::span<const CJet> y) {
  const int d = m.dim();
  const std::size_t k = gauge.k();
  LocalFrame fr;
  fr.dim = d;
  fr.k = k;
  auto mp = m.metric_at(y);
  auto dg = m.derivatives(y);
  auto chr = MetricField::christoffel_from(mp.ginv, dg);
  fr.ginv = mp.ginv;
  fr.gamma_trace.assign(d, CJet(0.0));
  for (int c = 0; c < d; ++c)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) fr.gamma_trace[c] = fr.gamma_trace[c] - mp.ginv(a, b) * chr.gamma[c](a, b);

  fr.potential = gauge.B(y);
  if (gauge.has_connection()) {
    std::vector<JetMatrix> a_low;
    for (int mu = 0; mu < d; ++mu) a_low.push_back(gauge.A(mu, y));
    fr.a_up.assign(d, JetMatrix(k, k));
    for (int mu = 0; mu < d; ++mu)
      for (int nu = 0; nu < d; ++nu) fr.a_up[mu] = fr.a_up[mu] + mp.ginv(mu, nu) * a_low[nu];
    // d_mu A^mu = (d_mu g^{mu nu}) A_nu + g^{mu nu} d_mu A_nu,  d_mu g^{-1} = -g^{-1} (d_mu g) g^{-1}
    JetMatrix div(k, k);
    for (int mu = 0; mu < d; ++mu) {
      JetMatrix dginv = -(mp.ginv * dg[mu] * mp.ginv);
      for (int nu = 0; nu < d; ++nu)
        div = div + dginv(mu, nu) * a_low[nu] + mp.ginv(mu, nu) * gauge.dA(nu, mu, y);
    }
    JetMatrix rest(k, k);
    for (int mu = 0; mu < d; ++mu) {
      rest = rest + a_low[mu] * fr.a_up[mu];
      for (int lam = 0; lam < d; ++lam) rest = rest + chr.gamma[mu](mu, lam) * fr.a_up[lam];
    }
    fr.potential = fr.potential + div + rest;
  }
  return fr;
}

}  // namespace sdw
