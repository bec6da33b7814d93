#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "prethermo/complex_matrix.hpp"
#include "prethermo/dynamics.hpp"
#include "prethermo/eig.hpp"
#include "prethermo/errors.hpp"
#include "prethermo/propagation.hpp"

using namespace prethermo;

namespace {

ComplexMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = u(rng);
    for (std::size_t j = i + 1; j < n; ++j) {
      a(i, j) = cdouble(u(rng), u(rng));
      a(j, i) = std::conj(a(i, j));
    }
  }
  return a;
}

double reconstruction_error(const ComplexMatrix& a, const EigenSystem& es) {
  std::size_t n = a.rows();
  ComplexMatrix lam(n, n);
  for (std::size_t i = 0; i < n; ++i) lam(i, i) = es.eigenvalues[i];
  ComplexMatrix rec = es.right_vectors * lam * es.inverse_vectors;
  rec -= a;
  return rec.max_abs();
}

// Fig.-1 rate constants, frozen from 2*0.07*(1 + 1/(e^4 - 1)) and k(1+2e^-4).
constexpr double kFig1K = 0.14261203045092838;
constexpr double kFig1Phi = 0.14783629398942937;

}  // namespace

TEST_CASE("hermitian_eig identity") {
  EigenSystem es = hermitian_eig(ComplexMatrix::identity(3));
  for (const auto& l : es.eigenvalues) CHECK(l.real() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("hermitian_eig prethermal 3x3 block") {
  double pt = 0.0089931, st = 0.0089931;
  ComplexMatrix a(3, 3);
  a(0, 0) = 1.0 - 2.0 * pt;
  a(1, 1) = a(2, 2) = pt;
  a(1, 2) = a(2, 1) = st;
  EigenSystem es = hermitian_eig(a);
  // Ascending: p - s = 0, p + s, 1 - 2p.
  CHECK(es.eigenvalues[0].real() == doctest::Approx(pt - st).epsilon(1e-12));
  CHECK(es.eigenvalues[1].real() == doctest::Approx(pt + st).epsilon(1e-12));
  CHECK(es.eigenvalues[2].real() == doctest::Approx(1.0 - 2.0 * pt).epsilon(1e-12));
}

TEST_CASE("hermitian_eig random 8x8 reconstruction") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 5; ++rep) {
    ComplexMatrix a = random_hermitian(8, rng);
    EigenSystem es = hermitian_eig(a);
    CHECK(reconstruction_error(a, es) < 1e-10);
    for (const auto& l : es.eigenvalues) CHECK(std::abs(l.imag()) < 1e-12);
    for (std::size_t i = 1; i < 8; ++i)
      CHECK(es.eigenvalues[i].real() >= es.eigenvalues[i - 1].real());
    // Orthonormality of eigenvectors.
    ComplexMatrix g = es.right_vectors.adjoint() * es.right_vectors;
    g -= ComplexMatrix::identity(8);
    CHECK(g.max_abs() < 1e-10);
  }
}

TEST_CASE("hermitian_eig rejects non-Hermitian input") {
  ComplexMatrix a(2, 2);
  a(0, 1) = 1.0;
  CHECK_THROWS_AS(hermitian_eig(a), DomainError);
}

TEST_CASE("general_eig diagonal") {
  ComplexMatrix a(2, 2);
  a(0, 0) = -1.0;
  a(1, 1) = -2.0;
  EigenSystem es = general_eig(a);
  std::vector<double> re{es.eigenvalues[0].real(), es.eigenvalues[1].real()};
  std::sort(re.begin(), re.end());
  CHECK(re[0] == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(re[1] == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("general_eig rotation block") {
  ComplexMatrix a(2, 2);
  a(0, 1) = -1.0;
  a(1, 0) = 1.0;
  EigenSystem es = general_eig(a);
  std::vector<double> im{es.eigenvalues[0].imag(), es.eigenvalues[1].imag()};
  std::sort(im.begin(), im.end());
  CHECK(im[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(im[1] == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& l : es.eigenvalues) CHECK(std::abs(l.real()) < 1e-12);
}

TEST_CASE("general_eig reduced V-model generator slowest eigenvalue") {
  Rates rates{kFig1K, kFig1Phi, 0.0186574};
  Generator gen = reduced_generator(rates, 1e-4);
  EigenSystem es = general_eig(gen.matrix);
  double slowest = 0.0;
  double best = 1e300;
  for (const auto& l : es.eigenvalues) {
    double a = std::abs(l);
    if (a > 1e-12 && a < best) {
      best = a;
      slowest = l.real();
    }
  }
  double lepe = -kFig1Phi * 1e-8 / (kFig1K * (kFig1K + kFig1Phi));
  CHECK(slowest == doctest::Approx(-3.57e-8).epsilon(2e-3));
  CHECK(std::abs(slowest - lepe) / std::abs(lepe) < 2e-3);
}

TEST_CASE("general_eig residual bound on random matrices") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int rep = 0; rep < 5; ++rep) {
    std::size_t n = 6 + 2 * rep;
    ComplexMatrix a(n, n);
    for (auto& z : a.data()) z = cdouble(u(rng), u(rng));
    EigenSystem es = general_eig(a);
    CHECK(es.residual_norm < 1e-9 * std::max(a.max_abs(), 1.0));
    CHECK(reconstruction_error(a, es) < 1e-8);
  }
}

TEST_CASE("propagate_spectral trivial generators") {
  ComplexMatrix zero(3, 3);
  cvector v0{1.0, 2.0, 3.0};
  auto r = propagate_spectral(zero, v0, {0.0, 1.0, 1e6});
  for (const auto& v : r.states)
    for (std::size_t i = 0; i < 3; ++i)
      CHECK(std::abs(v[i] - v0[i]) < 1e-12);

  ComplexMatrix scalar(1, 1);
  double k = 0.37;
  scalar(0, 0) = -k;
  auto rs = propagate_spectral(scalar, {1.0}, {1.0 / k});
  CHECK(std::abs(rs.states[0][0] - std::exp(-1.0)) < 1e-12);
}

TEST_CASE("propagate_spectral t=0 returns v0") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexMatrix g(4, 4);
  for (auto& z : g.data()) z = cdouble(u(rng), u(rng));
  cvector v0{0.1, -0.2, 0.3, 0.4};
  auto r = propagate_spectral(g, v0, {0.0});
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(r.states[0][i] - v0[i]) < 1e-12);
}

TEST_CASE("propagate_spectral matches closed form at t=1e4") {
  Rates rates{kFig1K, kFig1Phi, 0.0186574};
  cvector v0{0.0, 0.0, 0.0, 1.0};  // ground start, homogeneous coordinate
  // The closed form is itself an O(delta^2) approximation (about 4e-9 off at
  // delta = 1e-4), so the 1e-9 agreement check runs at delta = 1e-5.
  Generator tight = reduced_generator(rates, 1e-5);
  auto r5 = propagate_spectral(tight.matrix, v0, {1e4});
  ReducedState cf5 = closed_form_evolution(rates, 1e-5, ReducedState{}, 1e4);
  CHECK(std::abs(r5.states[0][0].real() - cf5.p) < 1e-9);
  CHECK(std::abs(r5.states[0][1].real() - cf5.sigmaR) < 1e-9);

  Generator gen = reduced_generator(rates, 1e-4);
  auto r = propagate_spectral(gen.matrix, v0, {1e4});
  ReducedState cf = closed_form_evolution(rates, 1e-4, ReducedState{}, 1e4);
  CHECK(std::abs(r.states[0][0].real() - cf.p) < 1e-8);
  CHECK(std::abs(r.states[0][1].real() - cf.sigmaR) < 1e-8);
}

TEST_CASE("propagate_spectral semigroup property") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int rep = 0; rep < 100; ++rep) {
    std::size_t n = 3;
    ComplexMatrix g(n, n);
    for (auto& z : g.data()) z = cdouble(u(rng), u(rng));
    // Shift towards stability so exponentials stay O(1).
    for (std::size_t i = 0; i < n; ++i) g(i, i) -= 1.0;
    cvector v0{u(rng), u(rng), u(rng)};
    double t1 = 0.35 + 0.4 * u(rng);
    double t2 = t1 + 1.0 + 0.8 * u(rng);
    auto direct = propagate_spectral(g, v0, {t2});
    auto first = propagate_spectral(g, v0, {t1});
    auto second = propagate_spectral(g, first.states[0], {t2 - t1});
    for (std::size_t i = 0; i < n; ++i)
      CHECK(std::abs(direct.states[0][i] - second.states[0][i]) < 1e-9);
  }
}

TEST_CASE("expm fallback agrees with spectral path") {
  Rates rates{kFig1K, kFig1Phi, 0.0186574};
  Generator gen = reduced_generator(rates, 1e-4);
  cvector v0{0.1, 0.05, 0.0, 1.0};
  for (double t : {0.5, 5.0, 50.0}) {
    ComplexMatrix gt = gen.matrix;
    gt *= t;
    cvector e = expm(gt).apply(v0);
    auto s = propagate_spectral(gen.matrix, v0, {t});
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(e[i] - s.states[0][i]) < 1e-11);
  }
}

TEST_CASE("rk4 cross-checks the spectral propagator on a short window") {
  Rates rates{kFig1K, kFig1Phi, 0.0186574};
  Generator gen = reduced_generator(rates, 1e-4);
  cvector v0{0.0, 0.0, 0.0, 1.0};
  double t = 100.0 / (kFig1Phi + kFig1K);
  double h = 0.01 / (kFig1Phi + kFig1K);
  cvector rk = rk4_integrate(gen.matrix, v0, t, h);
  auto sp = propagate_spectral(gen.matrix, v0, {t});
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(rk[i] - sp.states[0][i]) < 1e-9);
}

TEST_CASE("log_spaced grid") {
  auto t = log_spaced(1e-2, 1e9, 200);
  CHECK(t.size() == 200);
  CHECK(t.front() == doctest::Approx(1e-2).epsilon(1e-12));
  CHECK(t.back() == doctest::Approx(1e9).epsilon(1e-12));
  CHECK_THROWS_AS(log_spaced(0.0, 1.0, 5), DomainError);
}

TEST_CASE("lu inverse and solve") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexMatrix a(5, 5);
  for (auto& z : a.data()) z = cdouble(u(rng), u(rng));
  ComplexMatrix inv = inverse(a);
  ComplexMatrix prod = a * inv;
  prod -= ComplexMatrix::identity(5);
  CHECK(prod.max_abs() < 1e-11);

  ComplexMatrix sing(2, 2);
  sing(0, 0) = sing(0, 1) = sing(1, 0) = sing(1, 1) = 1.0;
  CHECK_THROWS_AS(inverse(sing), NumericsError);
}
