#include "prethermo/eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "prethermo/errors.hpp"

namespace prethermo {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double residual_max(const ComplexMatrix& a, const EigenSystem& es) {
  std::size_t n = a.rows();
  double r = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      cdouble av = 0.0;
      for (std::size_t k = 0; k < n; ++k) av += a(i, k) * es.right_vectors(k, j);
      r = std::max(r, std::abs(av - es.right_vectors(i, j) * es.eigenvalues[j]));
    }
  }
  return r;
}

}  // namespace

EigenSystem hermitian_eig(const ComplexMatrix& a) {
  if (!a.square()) throw DomainError("hermitian_eig: matrix not square");
  double scale = std::max(a.max_abs(), 1e-300);
  double defect = a.hermiticity_defect();
  if (defect >= 1e-12 * scale)
    throw DomainError(fmt::format(
        "hermitian_eig: non-Hermitian input, defect {:.3e} vs bound {:.3e}",
        defect, 1e-12 * scale));

  std::size_t n = a.rows();
  ComplexMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      h(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
  ComplexMatrix v = ComplexMatrix::identity(n);

  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(h(p, q)));
    if (off <= 1e-15 * scale) break;
    if (sweep == max_sweeps - 1)
      throw NumericsError("hermitian_eig: Jacobi sweep cap reached");

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = std::abs(h(p, q));
        if (apq <= 1e-18 * scale) { h(p, q) = 0.0; h(q, p) = 0.0; continue; }
        cdouble phase = h(p, q) / apq;
        double app = h(p, p).real();
        double aqq = h(q, q).real();
        double tau = (aqq - app) / (2.0 * apq);
        double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        cdouble sp = s * phase;
        // R = [[c, sp], [-conj(sp), c]] on the (p,q) plane.
        // Rows p,q: H <- R^dag H ; columns p,q: H <- H R; V <- V R.
        for (std::size_t j = 0; j < n; ++j) {
          cdouble hp = h(p, j), hq = h(q, j);
          h(p, j) = c * hp - sp * hq;
          h(q, j) = std::conj(sp) * hp + c * hq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          cdouble hp = h(i, p), hq = h(i, q);
          h(i, p) = c * hp - std::conj(sp) * hq;
          h(i, q) = sp * hp + c * hq;
          cdouble vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - std::conj(sp) * vq;
          v(i, q) = sp * vp + c * vq;
        }
        h(p, q) = 0.0;
        h(q, p) = 0.0;
        h(p, p) = h(p, p).real();
        h(q, q) = h(q, q).real();
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return h(i, i).real() < h(j, j).real(); });

  EigenSystem es;
  es.eigenvalues.resize(n);
  es.right_vectors = ComplexMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    es.eigenvalues[j] = h(order[j], order[j]).real();
    for (std::size_t i = 0; i < n; ++i) es.right_vectors(i, j) = v(i, order[j]);
  }
  es.inverse_vectors = es.right_vectors.adjoint();
  es.condition_estimate = 1.0;
  es.residual_norm = residual_max(a, es);
  return es;
}

namespace {

struct Givens {
  double c;    // real cosine
  cdouble s;   // complex sine
};

// Rotation G = [[c, s], [-conj(s), c]] with G (f,g)^T = (r, 0)^T.
Givens make_givens(cdouble f, cdouble g) {
  double af = std::abs(f), ag = std::abs(g);
  if (ag == 0.0) return {1.0, 0.0};
  if (af == 0.0) return {0.0, 1.0};
  double r = std::hypot(af, ag);
  double c = af / r;
  cdouble s = (f / af) * std::conj(g) / r;
  return {c, s};
}

}  // namespace

EigenSystem general_eig(const ComplexMatrix& a) {
  if (!a.square()) throw DomainError("general_eig: matrix not square");
  std::size_t n = a.rows();
  if (n > 1024) throw DomainError("general_eig: dimension exceeds 1024");
  double scale = std::max(a.max_abs(), 1e-300);

  ComplexMatrix h = a;
  ComplexMatrix z = ComplexMatrix::identity(n);

  // Householder reduction to upper Hessenberg, accumulating Z.
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double xnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm += std::norm(h(i, k));
    xnorm = std::sqrt(xnorm);
    if (xnorm <= 1e-300) continue;
    cdouble x0 = h(k + 1, k);
    cdouble alpha = (std::abs(x0) > 0.0) ? -(x0 / std::abs(x0)) * xnorm : cdouble(-xnorm);
    cvector w(n, 0.0);
    w[k + 1] = x0 - alpha;
    for (std::size_t i = k + 2; i < n; ++i) w[i] = h(i, k);
    double wnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) wnorm += std::norm(w[i]);
    if (wnorm <= 1e-300) continue;
    wnorm = std::sqrt(wnorm);
    for (std::size_t i = k + 1; i < n; ++i) w[i] /= wnorm;
    // H <- (I - 2 w w^dag) H
    for (std::size_t j = 0; j < n; ++j) {
      cdouble dot = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) dot += std::conj(w[i]) * h(i, j);
      dot *= 2.0;
      for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= dot * w[i];
    }
    // H <- H (I - 2 w w^dag), Z <- Z (I - 2 w w^dag)
    for (std::size_t i = 0; i < n; ++i) {
      cdouble dot = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) dot += h(i, j) * w[j];
      dot *= 2.0;
      for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= dot * std::conj(w[j]);
      cdouble zdot = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) zdot += z(i, j) * w[j];
      zdot *= 2.0;
      for (std::size_t j = k + 1; j < n; ++j) z(i, j) -= zdot * std::conj(w[j]);
    }
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }

  // Shifted QR with deflation on the Hessenberg form; Schur vectors in Z.
  const std::size_t max_total = 30 * std::max<std::size_t>(n, 1);
  std::size_t total_iters = 0;
  std::size_t hi = n - 1;
  std::size_t since_deflation = 0;
  auto subdiag_small = [&](std::size_t i) {
    double bound = kEps * (std::abs(h(i - 1, i - 1)) + std::abs(h(i, i)));
    if (bound == 0.0) bound = kEps * scale;
    return std::abs(h(i, i - 1)) <= bound;
  };

  while (true) {
    // Deflate converged trailing eigenvalues.
    while (hi > 0 && subdiag_small(hi)) {
      h(hi, hi - 1) = 0.0;
      --hi;
      since_deflation = 0;
    }
    if (hi == 0) break;

    // Active block [lo, hi].
    std::size_t lo = hi;
    while (lo > 0 && !subdiag_small(lo)) --lo;
    if (lo > 0) h(lo, lo - 1) = 0.0;

    if (++total_iters > max_total)
      throw NumericsError("general_eig: QR iteration cap (30 n) reached");

    // Wilkinson shift from the trailing 2x2 of the active block.
    cdouble mu;
    {
      cdouble aa = h(hi - 1, hi - 1), bb = h(hi - 1, hi);
      cdouble cc = h(hi, hi - 1), dd = h(hi, hi);
      cdouble mean = 0.5 * (aa + dd);
      cdouble disc = std::sqrt(mean * mean - (aa * dd - bb * cc));
      cdouble m1 = mean + disc, m2 = mean - disc;
      mu = (std::abs(m1 - dd) < std::abs(m2 - dd)) ? m1 : m2;
      if (++since_deflation % 12 == 0)
        mu = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1));  // exceptional shift
    }

    for (std::size_t i = lo; i <= hi; ++i) h(i, i) -= mu;

    std::vector<Givens> rots(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) {
      Givens g = make_givens(h(i, i), h(i + 1, i));
      rots[i - lo] = g;
      for (std::size_t j = i; j < n; ++j) {
        cdouble t1 = h(i, j), t2 = h(i + 1, j);
        h(i, j) = g.c * t1 + g.s * t2;
        h(i + 1, j) = -std::conj(g.s) * t1 + g.c * t2;
      }
      h(i + 1, i) = 0.0;
    }
    for (std::size_t i = lo; i < hi; ++i) {
      const Givens& g = rots[i - lo];
      std::size_t rmax = i + 1;
      for (std::size_t r = 0; r <= rmax; ++r) {
        cdouble t1 = h(r, i), t2 = h(r, i + 1);
        h(r, i) = t1 * g.c + t2 * std::conj(g.s);
        h(r, i + 1) = -t1 * g.s + t2 * g.c;
      }
      for (std::size_t r = 0; r < n; ++r) {
        cdouble t1 = z(r, i), t2 = z(r, i + 1);
        z(r, i) = t1 * g.c + t2 * std::conj(g.s);
        z(r, i + 1) = -t1 * g.s + t2 * g.c;
      }
    }
    for (std::size_t i = lo; i <= hi; ++i) h(i, i) += mu;
  }

  // Eigenvectors of the triangular factor by back-substitution.
  double tnorm = std::max(h.max_abs(), 1e-300);
  ComplexMatrix y(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    cdouble lam = h(k, k);
    y(k, k) = 1.0;
    for (std::size_t j = k; j-- > 0;) {
      cdouble acc = 0.0;
      for (std::size_t m = j + 1; m <= k; ++m) acc += h(j, m) * y(m, k);
      cdouble den = h(j, j) - lam;
      if (std::abs(den) < kEps * tnorm) den = cdouble(kEps * tnorm);
      y(j, k) = -acc / den;
    }
  }

  EigenSystem es;
  es.eigenvalues.resize(n);
  for (std::size_t k = 0; k < n; ++k) es.eigenvalues[k] = h(k, k);
  es.right_vectors = z * y;
  for (std::size_t j = 0; j < n; ++j) {
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += std::norm(es.right_vectors(i, j));
    norm = std::sqrt(norm);
    if (norm > 0.0)
      for (std::size_t i = 0; i < n; ++i) es.right_vectors(i, j) /= norm;
  }

  try {
    es.inverse_vectors = inverse(es.right_vectors);
    es.condition_estimate =
        max_norm_inf(es.right_vectors) * max_norm_inf(es.inverse_vectors);
  } catch (const NumericsError&) {
    es.condition_estimate = std::numeric_limits<double>::infinity();
  }
  es.ill_conditioned = !(es.condition_estimate <= 1e12);
  es.residual_norm = residual_max(a, es);
  return es;
}

}  // namespace prethermo
