#include "prethermo/propagation.hpp"

#include <cmath>

#include "prethermo/errors.hpp"

namespace prethermo {

ComplexMatrix expm(const ComplexMatrix& a) {
  std::size_t n = a.rows();
  double norm = max_norm_inf(a);
  int s = 0;
  while (norm > 0.5) { norm *= 0.5; ++s; }
  ComplexMatrix x = a;
  double f = std::ldexp(1.0, -s);
  x *= f;

  // Pade (6,6) coefficients.
  static const double c[7] = {1.0,        1.0 / 2.0,    5.0 / 44.0, 1.0 / 66.0,
                              1.0 / 792.0, 1.0 / 15840.0, 1.0 / 665280.0};
  ComplexMatrix num = ComplexMatrix::identity(n);
  ComplexMatrix den = ComplexMatrix::identity(n);
  ComplexMatrix power = ComplexMatrix::identity(n);
  for (int k = 1; k <= 6; ++k) {
    power = power * x;
    ComplexMatrix term = power;
    term *= c[k];
    num += term;
    if (k % 2 == 0) den += term; else den -= term;
  }
  ComplexMatrix e = inverse(den) * num;
  for (int k = 0; k < s; ++k) e = e * e;
  return e;
}

static PropagationResult propagate_expm(const ComplexMatrix& g, const cvector& v0,
                                        const std::vector<double>& times) {
  PropagationResult out;
  out.used_expm_fallback = true;
  out.states.reserve(times.size());
  for (double t : times) {
    if (t < 0.0) throw DomainError("propagate: negative time");
    ComplexMatrix gt = g;
    gt *= t;
    out.states.push_back(expm(gt).apply(v0));
  }
  return out;
}

PropagationResult propagate_spectral(const ComplexMatrix& g, const EigenSystem& es,
                                     const cvector& v0, const std::vector<double>& times) {
  if (es.ill_conditioned) return propagate_expm(g, v0, times);
  std::size_t n = g.rows();
  cvector w = es.inverse_vectors.apply(v0);
  // Snap numerically-zero eigenvalues to 0 so stationary modes stay exactly
  // stationary; an O(eps) residual would be amplified by e^{lambda t} at
  // large t.
  cvector lambda = es.eigenvalues;
  double scale = g.max_abs();
  for (auto& l : lambda)
    if (std::abs(l) < 1e-12 * scale) l = 0.0;
  PropagationResult out;
  out.states.reserve(times.size());
  cvector scaled(n);
  for (double t : times) {
    if (t < 0.0) throw DomainError("propagate_spectral: negative time");
    for (std::size_t k = 0; k < n; ++k)
      scaled[k] = w[k] * std::exp(lambda[k] * t);
    out.states.push_back(es.right_vectors.apply(scaled));
  }
  return out;
}

PropagationResult propagate_spectral(const ComplexMatrix& g, const cvector& v0,
                                     const std::vector<double>& times) {
  try {
    EigenSystem es = general_eig(g);
    return propagate_spectral(g, es, v0, times);
  } catch (const NumericsError&) {
    return propagate_expm(g, v0, times);
  }
}

cvector rk4_integrate(const ComplexMatrix& g, cvector v, double t_final, double h) {
  if (t_final < 0.0 || h <= 0.0) throw DomainError("rk4_integrate: bad time or step");
  double t = 0.0;
  std::size_t n = v.size();
  while (t < t_final) {
    double step = std::min(h, t_final - t);
    cvector k1 = g.apply(v);
    cvector tmp(n);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = v[i] + 0.5 * step * k1[i];
    cvector k2 = g.apply(tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = v[i] + 0.5 * step * k2[i];
    cvector k3 = g.apply(tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = v[i] + step * k3[i];
    cvector k4 = g.apply(tmp);
    for (std::size_t i = 0; i < n; ++i)
      v[i] += (step / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    t += step;
  }
  return v;
}

std::vector<double> log_spaced(double start, double stop, std::size_t points) {
  if (points == 0 || start <= 0.0 || stop < start)
    throw DomainError("log_spaced: need points >= 1 and 0 < start <= stop");
  std::vector<double> t(points);
  if (points == 1) { t[0] = start; return t; }
  double l0 = std::log10(start), l1 = std::log10(stop);
  for (std::size_t i = 0; i < points; ++i)
    t[i] = std::pow(10.0, l0 + (l1 - l0) * static_cast<double>(i) / (points - 1));
  return t;
}

}  // namespace prethermo
