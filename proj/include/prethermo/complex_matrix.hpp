#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace prethermo {

using cdouble = std::complex<double>;
using cvector = std::vector<cdouble>;

/// Dense complex matrix, row-major. Small-dimension workhorse for states,
/// coupling operators and superoperators (dims up to ~1024).
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(const std::vector<double>& d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  cdouble& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cdouble& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  cvector& data() { return data_; }
  const cvector& data() const { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  cdouble trace() const;
  double max_abs() const;

  /// max |A - A^dag|, the Hermiticity defect.
  double hermiticity_defect() const;
  bool is_hermitian(double rel_tol = 1e-12) const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cdouble s);

  cvector apply(const cvector& v) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  cvector data_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(cdouble s, ComplexMatrix a);

/// Superoperator for rho -> A rho B on row-major vec(rho).
/// M[(i,j),(k,l)] = A(i,k) * B(l,j).
ComplexMatrix superop_sandwich(const ComplexMatrix& a, const ComplexMatrix& b);

/// LU-based inverse with partial pivoting. Throws NumericsError when singular.
ComplexMatrix inverse(const ComplexMatrix& a);

/// Solve A x = b in place of explicit inverse when a single solve suffices.
cvector solve(const ComplexMatrix& a, const cvector& b);

double max_norm_inf(const ComplexMatrix& a);  // max row sum of |entries|

}  // namespace prethermo
