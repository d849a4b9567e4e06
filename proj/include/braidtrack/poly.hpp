#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "braidtrack/errors.hpp"

namespace braidtrack {

using Complex = std::complex<double>;

/// Dense complex polynomial in z and t. coeff(i, j) multiplies z^i t^j.
/// Arithmetic keeps the representation trimmed so deg_z/deg_t report the
/// true degrees of the expanded form.
class BivariatePoly {
 public:
  BivariatePoly() : coeffs_(1, std::vector<Complex>(1, Complex(0, 0))) {}

  static BivariatePoly constant(Complex c);
  static BivariatePoly variable_z();
  static BivariatePoly variable_t();
  static BivariatePoly from_coeffs(std::vector<std::vector<Complex>> rows);

  int deg_z() const { return static_cast<int>(coeffs_.size()) - 1; }
  int deg_t() const { return static_cast<int>(coeffs_[0].size()) - 1; }

  Complex coeff(int i, int j) const;
  void set_coeff(int i, int j, Complex c);

  bool is_zero() const;

  const std::vector<std::vector<Complex>>& rows() const { return coeffs_; }

  BivariatePoly operator+(const BivariatePoly& o) const;
  BivariatePoly operator-(const BivariatePoly& o) const;
  BivariatePoly operator*(const BivariatePoly& o) const;
  BivariatePoly operator-() const;
  BivariatePoly pow(int e) const;

 private:
  void trim();
  // coeffs_[i][j] multiplies z^i t^j; row 0 always present.
  std::vector<std::vector<Complex>> coeffs_;
};

/// Coefficients ascending in degree; the zero polynomial is {0}.
class UnivariatePoly {
 public:
  UnivariatePoly() : coeffs_(1, Complex(0, 0)) {}
  explicit UnivariatePoly(std::vector<Complex> coeffs);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const;
  Complex coeff(int k) const;
  const std::vector<Complex>& coeffs() const { return coeffs_; }

  Complex eval(Complex x) const;
  UnivariatePoly derivative() const;

  /// Taylor coefficients of p(center + h): result[k] = p^(k)(center)/k!.
  std::vector<Complex> taylor_at(Complex center) const;

  /// Zeroes every coefficient with modulus below rel_tol times the largest
  /// coefficient modulus, then drops leading zeros.
  void clean(double rel_tol);

 private:
  void trim();
  std::vector<Complex> coeffs_;
};

/// Sparse polynomial in z and u_1..u_m, keyed by exponent tuples
/// (e_z, e_u1, ..., e_um).
class MultivariatePoly {
 public:
  explicit MultivariatePoly(int num_u_vars) : m_(num_u_vars) {}

  int num_u_vars() const { return m_; }
  const std::map<std::vector<int>, Complex>& terms() const { return terms_; }

  void add_term(const std::vector<int>& exponents, Complex c);
  int deg_z() const;

  Complex eval(Complex z, const std::vector<Complex>& u) const;

  MultivariatePoly operator+(const MultivariatePoly& o) const;
  MultivariatePoly operator-(const MultivariatePoly& o) const;
  MultivariatePoly operator*(const MultivariatePoly& o) const;
  MultivariatePoly operator-() const;
  MultivariatePoly pow(int e) const;

 private:
  int m_;
  std::map<std::vector<int>, Complex> terms_;
};

/// Parses an expression in z and t with +, -, *, ^, parentheses and
/// integer/decimal/complex literals (i is the imaginary unit, usable as a
/// suffix: 2i, 1.5i). Throws ParseError on syntax errors, unknown variables,
/// and when the expanded polynomial has z-degree 0.
BivariatePoly parse_poly(const std::string& source);

/// Same grammar over z and u1..um; num_u_vars fixes m (variables beyond the
/// declared range are unknown).
MultivariatePoly parse_multivariate(const std::string& source, int num_u_vars);

Complex eval(const BivariatePoly& f, Complex z, Complex t);

/// Scale of the evaluation sum, sum_ij |a_ij| |z|^i |t|^j. Residuals are
/// meaningful relative to this.
double eval_scale(const BivariatePoly& f, Complex z, Complex t);

BivariatePoly d_dz(const BivariatePoly& f);
BivariatePoly d_dt(const BivariatePoly& f);

/// Polynomial with every coefficient conjugated.
BivariatePoly conj_poly(const BivariatePoly& f);

/// f(lambda*z, t); coefficient a[i][j] is multiplied by lambda^i.
BivariatePoly scale_z(const BivariatePoly& f, Complex lambda);

/// Univariate z -> f(z, t0). Throws if the result is identically zero.
UnivariatePoly restrict_t(const BivariatePoly& f, Complex t0);

/// Leading z-coefficient as a polynomial in t.
UnivariatePoly leading_z_coeff(const BivariatePoly& f);

/// All complex roots by Aberth-Ehrlich simultaneous iteration. Multiple
/// roots come back as clusters. The convergence test is backward error:
/// |p(r)| <= tol * sum_k |a_k| |r|^k. Results are sorted by (re, im).
std::vector<Complex> roots(const UnivariatePoly& p, double tol = 1e-12);

std::string to_string(const BivariatePoly& f);
std::string to_string(const UnivariatePoly& p);

/// Canonical JSON {"degz":n,"degt":m,"coeffs":[[[re,im],...],...]},
/// row-major in the z-degree index.
std::string poly_to_json(const BivariatePoly& f);
BivariatePoly poly_from_json(const std::string& text);

std::string format_complex(Complex c, int significant_digits = 6);

}  // namespace braidtrack
