#include "braidtrack/poly.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace braidtrack {

namespace {

bool is_finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

void require_finite(Complex c, const char* where) {
  if (!is_finite(c)) throw Error(std::string("non-finite value in ") + where);
}

}  // namespace

// ---------------------------------------------------------------------------
// BivariatePoly

BivariatePoly BivariatePoly::constant(Complex c) {
  BivariatePoly p;
  p.coeffs_[0][0] = c;
  return p;
}

BivariatePoly BivariatePoly::variable_z() {
  BivariatePoly p;
  p.coeffs_.assign(2, std::vector<Complex>(1, Complex(0, 0)));
  p.coeffs_[1][0] = Complex(1, 0);
  return p;
}

BivariatePoly BivariatePoly::variable_t() {
  BivariatePoly p;
  p.coeffs_.assign(1, std::vector<Complex>(2, Complex(0, 0)));
  p.coeffs_[0][1] = Complex(1, 0);
  return p;
}

BivariatePoly BivariatePoly::from_coeffs(std::vector<std::vector<Complex>> rows) {
  if (rows.empty()) rows.assign(1, {Complex(0, 0)});
  std::size_t width = 1;
  for (const auto& r : rows) width = std::max(width, r.size());
  for (auto& r : rows) r.resize(width, Complex(0, 0));
  BivariatePoly p;
  p.coeffs_ = std::move(rows);
  for (const auto& r : p.coeffs_)
    for (Complex c : r) require_finite(c, "BivariatePoly coefficients");
  p.trim();
  return p;
}

Complex BivariatePoly::coeff(int i, int j) const {
  if (i < 0 || j < 0 || i > deg_z() || j > deg_t()) return Complex(0, 0);
  return coeffs_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
}

void BivariatePoly::set_coeff(int i, int j, Complex c) {
  require_finite(c, "set_coeff");
  if (i < 0 || j < 0) throw Error("negative exponent in set_coeff");
  if (i > deg_z()) coeffs_.resize(static_cast<std::size_t>(i) + 1,
                                  std::vector<Complex>(coeffs_[0].size(), Complex(0, 0)));
  if (j > deg_t())
    for (auto& row : coeffs_) row.resize(static_cast<std::size_t>(j) + 1, Complex(0, 0));
  coeffs_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = c;
  trim();
}

bool BivariatePoly::is_zero() const {
  for (const auto& r : coeffs_)
    for (Complex c : r)
      if (c != Complex(0, 0)) return false;
  return true;
}

void BivariatePoly::trim() {
  auto row_zero = [](const std::vector<Complex>& r) {
    for (Complex c : r)
      if (c != Complex(0, 0)) return false;
    return true;
  };
  while (coeffs_.size() > 1 && row_zero(coeffs_.back())) coeffs_.pop_back();
  std::size_t width = 1;
  for (const auto& r : coeffs_)
    for (std::size_t j = r.size(); j-- > 0;)
      if (r[j] != Complex(0, 0)) {
        width = std::max(width, j + 1);
        break;
      }
  for (auto& r : coeffs_) r.resize(width, Complex(0, 0));
}

BivariatePoly BivariatePoly::operator+(const BivariatePoly& o) const {
  std::vector<std::vector<Complex>> rows(
      std::max(coeffs_.size(), o.coeffs_.size()),
      std::vector<Complex>(std::max(coeffs_[0].size(), o.coeffs_[0].size()), Complex(0, 0)));
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < coeffs_[i].size(); ++j) rows[i][j] += coeffs_[i][j];
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < o.coeffs_[i].size(); ++j) rows[i][j] += o.coeffs_[i][j];
  return from_coeffs(std::move(rows));
}

BivariatePoly BivariatePoly::operator-(const BivariatePoly& o) const { return *this + (-o); }

BivariatePoly BivariatePoly::operator-() const {
  auto rows = coeffs_;
  for (auto& r : rows)
    for (auto& c : r) c = -c;
  return from_coeffs(std::move(rows));
}

BivariatePoly BivariatePoly::operator*(const BivariatePoly& o) const {
  std::vector<std::vector<Complex>> rows(
      coeffs_.size() + o.coeffs_.size() - 1,
      std::vector<Complex>(coeffs_[0].size() + o.coeffs_[0].size() - 1, Complex(0, 0)));
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < coeffs_[i].size(); ++j) {
      if (coeffs_[i][j] == Complex(0, 0)) continue;
      for (std::size_t k = 0; k < o.coeffs_.size(); ++k)
        for (std::size_t l = 0; l < o.coeffs_[k].size(); ++l)
          rows[i + k][j + l] += coeffs_[i][j] * o.coeffs_[k][l];
    }
  return from_coeffs(std::move(rows));
}

BivariatePoly BivariatePoly::pow(int e) const {
  if (e < 0) throw Error("negative exponent");
  BivariatePoly acc = constant(Complex(1, 0));
  BivariatePoly base = *this;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// UnivariatePoly

UnivariatePoly::UnivariatePoly(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.assign(1, Complex(0, 0));
  for (Complex c : coeffs_) require_finite(c, "UnivariatePoly coefficients");
  trim();
}

void UnivariatePoly::trim() {
  while (coeffs_.size() > 1 && coeffs_.back() == Complex(0, 0)) coeffs_.pop_back();
}

bool UnivariatePoly::is_zero() const {
  return coeffs_.size() == 1 && coeffs_[0] == Complex(0, 0);
}

Complex UnivariatePoly::coeff(int k) const {
  if (k < 0 || k > degree()) return Complex(0, 0);
  return coeffs_[static_cast<std::size_t>(k)];
}

Complex UnivariatePoly::eval(Complex x) const {
  Complex acc = coeffs_.back();
  for (std::size_t k = coeffs_.size() - 1; k-- > 0;) acc = acc * x + coeffs_[k];
  return acc;
}

UnivariatePoly UnivariatePoly::derivative() const {
  if (coeffs_.size() == 1) return UnivariatePoly();
  std::vector<Complex> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k)
    d[k - 1] = coeffs_[k] * Complex(static_cast<double>(k), 0);
  return UnivariatePoly(std::move(d));
}

std::vector<Complex> UnivariatePoly::taylor_at(Complex center) const {
  // Repeated synthetic division by (x - center); remainder k is p^(k)(c)/k!.
  std::vector<Complex> out(coeffs_.size(), Complex(0, 0));
  std::vector<Complex> q = coeffs_;
  for (std::size_t k = 0; k < out.size() && !q.empty(); ++k) {
    Complex carry(0, 0);
    for (std::size_t j = q.size(); j-- > 0;) {
      carry = q[j] + carry * center;
      q[j] = carry;
    }
    out[k] = q[0];
    q.erase(q.begin());
  }
  return out;
}

void UnivariatePoly::clean(double rel_tol) {
  double maxmod = 0;
  for (Complex c : coeffs_) maxmod = std::max(maxmod, std::abs(c));
  if (maxmod == 0) {
    coeffs_.assign(1, Complex(0, 0));
    return;
  }
  for (Complex& c : coeffs_)
    if (std::abs(c) < rel_tol * maxmod) c = Complex(0, 0);
  trim();
}

// ---------------------------------------------------------------------------
// MultivariatePoly

void MultivariatePoly::add_term(const std::vector<int>& exponents, Complex c) {
  if (static_cast<int>(exponents.size()) != m_ + 1)
    throw Error("exponent tuple length mismatch");
  require_finite(c, "MultivariatePoly term");
  auto it = terms_.find(exponents);
  if (it == terms_.end()) {
    if (c != Complex(0, 0)) terms_.emplace(exponents, c);
  } else {
    it->second += c;
    if (it->second == Complex(0, 0)) terms_.erase(it);
  }
}

int MultivariatePoly::deg_z() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[0]);
  return d;
}

Complex MultivariatePoly::eval(Complex z, const std::vector<Complex>& u) const {
  if (static_cast<int>(u.size()) != m_) throw Error("eval: wrong number of u values");
  Complex acc(0, 0);
  for (const auto& [e, c] : terms_) {
    Complex term = c;
    for (int k = 0; k < e[0]; ++k) term *= z;
    for (int v = 0; v < m_; ++v)
      for (int k = 0; k < e[v + 1]; ++k) term *= u[static_cast<std::size_t>(v)];
    acc += term;
  }
  return acc;
}

MultivariatePoly MultivariatePoly::operator+(const MultivariatePoly& o) const {
  if (m_ != o.m_) throw Error("variable count mismatch");
  MultivariatePoly r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

MultivariatePoly MultivariatePoly::operator-(const MultivariatePoly& o) const {
  return *this + (-o);
}

MultivariatePoly MultivariatePoly::operator-() const {
  MultivariatePoly r(m_);
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
  return r;
}

MultivariatePoly MultivariatePoly::operator*(const MultivariatePoly& o) const {
  if (m_ != o.m_) throw Error("variable count mismatch");
  MultivariatePoly r(m_);
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) {
      std::vector<int> e(e1.size());
      for (std::size_t k = 0; k < e.size(); ++k) e[k] = e1[k] + e2[k];
      r.add_term(e, c1 * c2);
    }
  return r;
}

MultivariatePoly MultivariatePoly::pow(int e) const {
  if (e < 0) throw Error("negative exponent");
  MultivariatePoly acc(m_);
  acc.add_term(std::vector<int>(static_cast<std::size_t>(m_) + 1, 0), Complex(1, 0));
  MultivariatePoly base = *this;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Expression parser. One tokenizer and AST feed both polynomial types.

namespace {

enum class Tok { number, ident, plus, minus, star, caret, lparen, rparen, end };

struct Token {
  Tok kind;
  double value = 0;
  bool imaginary = false;
  std::string text;
  std::size_t pos = 0;
};

std::vector<Token> tokenize(const std::string& src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    Token tok;
    tok.pos = i;
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '.'))
        ++j;
      if (j + 1 < src.size() && (src[j] == 'e' || src[j] == 'E') &&
          (std::isdigit(static_cast<unsigned char>(src[j + 1])) ||
           ((src[j + 1] == '+' || src[j + 1] == '-') && j + 2 < src.size() &&
            std::isdigit(static_cast<unsigned char>(src[j + 2]))))) {
        j += 2;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      tok.kind = Tok::number;
      try {
        tok.value = std::stod(src.substr(i, j - i));
      } catch (const std::exception&) {
        throw ParseError("malformed number", i);
      }
      if (j < src.size() && src[j] == 'i') {
        tok.imaginary = true;
        ++j;
      }
      i = j;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      tok.kind = Tok::ident;
      tok.text = src.substr(i, j - i);
      i = j;
    } else {
      switch (c) {
        case '+': tok.kind = Tok::plus; break;
        case '-': tok.kind = Tok::minus; break;
        case '*': tok.kind = Tok::star; break;
        case '^': tok.kind = Tok::caret; break;
        case '(': tok.kind = Tok::lparen; break;
        case ')': tok.kind = Tok::rparen; break;
        default: throw ParseError(std::string("unexpected character '") + c + "'", i);
      }
      ++i;
    }
    out.push_back(tok);
  }
  Token end;
  end.kind = Tok::end;
  end.pos = src.size();
  out.push_back(end);
  return out;
}

// Recursive-descent over an abstract value type P that supports +, -, *, pow.
template <typename P>
class ExprParser {
 public:
  ExprParser(std::vector<Token> toks,
             std::function<P(const Token&)> make_leaf)
      : toks_(std::move(toks)), make_leaf_(std::move(make_leaf)) {}

  P parse() {
    P v = expression();
    if (cur().kind != Tok::end) throw ParseError("trailing input", cur().pos);
    return v;
  }

 private:
  const Token& cur() const { return toks_[idx_]; }
  void advance() { ++idx_; }

  P expression() {
    P v = (cur().kind == Tok::minus || cur().kind == Tok::plus) ? signed_term() : term();
    while (cur().kind == Tok::plus || cur().kind == Tok::minus) {
      bool neg = cur().kind == Tok::minus;
      advance();
      P rhs = term();
      v = neg ? v - rhs : v + rhs;
    }
    return v;
  }

  P signed_term() {
    bool neg = cur().kind == Tok::minus;
    advance();
    P v = term();
    return neg ? -v : v;
  }

  P term() {
    P v = factor();
    while (cur().kind == Tok::star) {
      advance();
      v = v * factor();
    }
    return v;
  }

  P factor() {
    if (cur().kind == Tok::minus) {
      advance();
      return -factor();
    }
    P base = atom();
    if (cur().kind == Tok::caret) {
      std::size_t caret_pos = cur().pos;
      advance();
      int e = exponent_literal(caret_pos);
      // Right-associative: z^2^3 = z^(2^3).
      if (cur().kind == Tok::caret) {
        advance();
        int e2 = exponent_literal(caret_pos);
        double p = std::pow(static_cast<double>(e), static_cast<double>(e2));
        if (p > 64) throw ParseError("exponent too large", caret_pos);
        e = static_cast<int>(p);
      }
      return base.pow(e);
    }
    return base;
  }

  int exponent_literal(std::size_t caret_pos) {
    if (cur().kind != Tok::number || cur().imaginary)
      throw ParseError("expected integer exponent after ^", caret_pos);
    double v = cur().value;
    if (v != std::floor(v) || v < 0 || v > 64)
      throw ParseError("exponent must be a small non-negative integer", cur().pos);
    advance();
    return static_cast<int>(v);
  }

  P atom() {
    const Token& t = cur();
    switch (t.kind) {
      case Tok::number:
      case Tok::ident: {
        P v = make_leaf_(t);
        advance();
        return v;
      }
      case Tok::lparen: {
        advance();
        P v = expression();
        if (cur().kind != Tok::rparen) throw ParseError("expected ')'", cur().pos);
        advance();
        return v;
      }
      default:
        throw ParseError("expected a value", t.pos);
    }
  }

  std::vector<Token> toks_;
  std::function<P(const Token&)> make_leaf_;
  std::size_t idx_ = 0;
};

}  // namespace

BivariatePoly parse_poly(const std::string& source) {
  auto leaf = [](const Token& t) -> BivariatePoly {
    if (t.kind == Tok::number) {
      return BivariatePoly::constant(t.imaginary ? Complex(0, t.value) : Complex(t.value, 0));
    }
    if (t.text == "z") return BivariatePoly::variable_z();
    if (t.text == "t") return BivariatePoly::variable_t();
    if (t.text == "i") return BivariatePoly::constant(Complex(0, 1));
    throw ParseError("unknown variable '" + t.text + "'", t.pos);
  };
  ExprParser<BivariatePoly> parser(tokenize(source), leaf);
  BivariatePoly p = parser.parse();
  if (p.deg_z() < 1) throw ParseError("polynomial has z-degree 0", 0);
  return p;
}

MultivariatePoly parse_multivariate(const std::string& source, int num_u_vars) {
  auto constant = [num_u_vars](Complex c) {
    MultivariatePoly p(num_u_vars);
    p.add_term(std::vector<int>(static_cast<std::size_t>(num_u_vars) + 1, 0), c);
    return p;
  };
  auto leaf = [&](const Token& t) -> MultivariatePoly {
    if (t.kind == Tok::number)
      return constant(t.imaginary ? Complex(0, t.value) : Complex(t.value, 0));
    if (t.text == "i") return constant(Complex(0, 1));
    std::vector<int> e(static_cast<std::size_t>(num_u_vars) + 1, 0);
    if (t.text == "z") {
      e[0] = 1;
    } else if (t.text.size() >= 2 && t.text[0] == 'u') {
      int idx = 0;
      for (std::size_t k = 1; k < t.text.size(); ++k) {
        if (!std::isdigit(static_cast<unsigned char>(t.text[k])))
          throw ParseError("unknown variable '" + t.text + "'", t.pos);
        idx = idx * 10 + (t.text[k] - '0');
      }
      if (idx < 1 || idx > num_u_vars)
        throw ParseError("variable '" + t.text + "' out of range", t.pos);
      e[static_cast<std::size_t>(idx)] = 1;
    } else {
      throw ParseError("unknown variable '" + t.text + "'", t.pos);
    }
    MultivariatePoly p(num_u_vars);
    p.add_term(e, Complex(1, 0));
    return p;
  };
  ExprParser<MultivariatePoly> parser(tokenize(source), leaf);
  return parser.parse();
}

// ---------------------------------------------------------------------------
// Evaluation and calculus

Complex eval(const BivariatePoly& f, Complex z, Complex t) {
  const auto& rows = f.rows();
  Complex acc(0, 0);
  for (std::size_t i = rows.size(); i-- > 0;) {
    Complex row = rows[i].back();
    for (std::size_t j = rows[i].size() - 1; j-- > 0;) row = row * t + rows[i][j];
    acc = acc * z + row;
  }
  return acc;
}

double eval_scale(const BivariatePoly& f, Complex z, Complex t) {
  const auto& rows = f.rows();
  double az = std::abs(z), at = std::abs(t);
  double acc = 0;
  double zi = 1;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double tj = 1;
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      acc += std::abs(rows[i][j]) * zi * tj;
      tj *= at;
    }
    zi *= az;
  }
  return acc;
}

BivariatePoly d_dz(const BivariatePoly& f) {
  const auto& rows = f.rows();
  if (rows.size() == 1) return BivariatePoly();
  std::vector<std::vector<Complex>> out(rows.size() - 1);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    out[i - 1] = rows[i];
    for (auto& c : out[i - 1]) c *= static_cast<double>(i);
  }
  return BivariatePoly::from_coeffs(std::move(out));
}

BivariatePoly d_dt(const BivariatePoly& f) {
  const auto& rows = f.rows();
  std::vector<std::vector<Complex>> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() == 1) {
      out[i] = {Complex(0, 0)};
      continue;
    }
    out[i].resize(rows[i].size() - 1);
    for (std::size_t j = 1; j < rows[i].size(); ++j)
      out[i][j - 1] = rows[i][j] * static_cast<double>(j);
  }
  return BivariatePoly::from_coeffs(std::move(out));
}

BivariatePoly conj_poly(const BivariatePoly& f) {
  auto rows = f.rows();
  for (auto& r : rows)
    for (auto& c : r) c = std::conj(c);
  return BivariatePoly::from_coeffs(std::move(rows));
}

BivariatePoly scale_z(const BivariatePoly& f, Complex lambda) {
  if (lambda == Complex(0, 0)) throw Error("scale_z: lambda must be nonzero");
  auto rows = f.rows();
  Complex li(1, 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (auto& c : rows[i]) c *= li;
    li *= lambda;
  }
  return BivariatePoly::from_coeffs(std::move(rows));
}

UnivariatePoly restrict_t(const BivariatePoly& f, Complex t0) {
  const auto& rows = f.rows();
  std::vector<Complex> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Complex acc = rows[i].back();
    for (std::size_t j = rows[i].size() - 1; j-- > 0;) acc = acc * t0 + rows[i][j];
    out[i] = acc;
  }
  UnivariatePoly p(std::move(out));
  if (p.is_zero()) throw Error("restrict_t: polynomial vanishes identically at t0");
  return p;
}

UnivariatePoly leading_z_coeff(const BivariatePoly& f) {
  return UnivariatePoly(f.rows().back());
}

// ---------------------------------------------------------------------------
// Aberth-Ehrlich root finder

namespace {

double fujiwara_bound(const std::vector<Complex>& monic) {
  // monic: coefficients ascending, leading coefficient 1 (implicit last).
  std::size_t n = monic.size();  // degree
  double bound = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    double a = std::abs(monic[n - k]);
    if (k == n) a *= 0.5;
    if (a > 0) bound = std::max(bound, std::pow(a, 1.0 / static_cast<double>(k)));
  }
  return 2.0 * bound;
}

}  // namespace

std::vector<Complex> roots(const UnivariatePoly& p, double tol) {
  if (p.degree() < 1 || p.is_zero())
    throw Error("roots: polynomial must have degree >= 1");

  std::vector<Complex> cs = p.coeffs();
  std::vector<Complex> result;

  // Exact zero roots deflate immediately.
  std::size_t zero_count = 0;
  while (zero_count + 1 < cs.size() && cs[zero_count] == Complex(0, 0)) ++zero_count;
  result.assign(zero_count, Complex(0, 0));
  cs.erase(cs.begin(), cs.begin() + static_cast<std::ptrdiff_t>(zero_count));

  std::size_t n = cs.size() - 1;
  if (n >= 1) {
    // Normalize to monic.
    Complex lead = cs.back();
    std::vector<Complex> monic(cs.size() - 1);
    for (std::size_t k = 0; k + 1 < cs.size(); ++k) monic[k] = cs[k] / lead;

    if (n == 1) {
      result.push_back(-monic[0]);
    } else if (n == 2) {
      Complex b = monic[1], c = monic[0];
      Complex disc = std::sqrt(b * b - 4.0 * c);
      Complex q = (std::real(std::conj(b) * disc) >= 0) ? -0.5 * (b + disc) : -0.5 * (b - disc);
      Complex r1 = q;
      Complex r2 = (q == Complex(0, 0)) ? Complex(0, 0) : c / q;
      result.push_back(r1);
      result.push_back(r2);
    } else {
      UnivariatePoly pn(cs);
      UnivariatePoly dpn = pn.derivative();
      double radius = fujiwara_bound(monic);
      if (radius <= 0 || !std::isfinite(radius)) radius = 1.0;

      std::vector<Complex> zs(n);
      const double two_pi = 6.283185307179586476925286766559;
      for (std::size_t k = 0; k < n; ++k) {
        double ang = two_pi * static_cast<double>(k) / static_cast<double>(n) + 0.3711;
        double r = radius * (0.65 + 0.05 * static_cast<double>(k) / static_cast<double>(n));
        zs[k] = Complex(r * std::cos(ang), r * std::sin(ang));
      }

      std::vector<bool> done(n, false);
      const int max_iter = 200;
      bool all_done = false;
      for (int iter = 0; iter < max_iter && !all_done; ++iter) {
        all_done = true;
        for (std::size_t k = 0; k < n; ++k) {
          Complex pv = pn.eval(zs[k]);
          // Backward-error convergence: root of a coefficient-wise nearby poly.
          double scale = 0, zk = 1, az = std::abs(zs[k]);
          for (std::size_t j = 0; j < cs.size(); ++j) {
            scale += std::abs(cs[j]) * zk;
            zk *= az;
          }
          if (std::abs(pv) <= tol * std::max(scale, 1e-300)) {
            done[k] = true;
            continue;
          }
          done[k] = false;
          all_done = false;
          Complex dv = dpn.eval(zs[k]);
          Complex w = (dv == Complex(0, 0)) ? Complex(1e-12, 1e-12) : pv / dv;
          Complex s(0, 0);
          for (std::size_t j = 0; j < n; ++j) {
            if (j == k) continue;
            Complex diff = zs[k] - zs[j];
            if (diff == Complex(0, 0)) diff = Complex(1e-14, 1e-14);
            s += 1.0 / diff;
          }
          Complex denom = 1.0 - w * s;
          Complex step = (denom == Complex(0, 0)) ? w : w / denom;
          zs[k] -= step;
        }
      }
      if (!all_done) {
        std::ostringstream msg;
        msg << "roots: no convergence after " << max_iter << " iterations; residuals:";
        for (std::size_t k = 0; k < n; ++k)
          if (!done[k]) msg << " |p(" << format_complex(zs[k]) << ")|=" << std::abs(pn.eval(zs[k]));
        throw RootSolveError(msg.str());
      }
      for (Complex z : zs) result.push_back(z);
    }
  }

  std::sort(result.begin(), result.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return result;
}

// ---------------------------------------------------------------------------
// Formatting and JSON

std::string format_complex(Complex c, int significant_digits) {
  char buf[64];
  auto fmt = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, v);
    return std::string(buf);
  };
  if (c.imag() == 0) return fmt(c.real());
  std::string out;
  if (c.real() != 0) out = fmt(c.real());
  double im = c.imag();
  if (!out.empty() && im >= 0) out += "+";
  if (im == 1) {
    out += "i";
  } else if (im == -1) {
    out += "-i";
  } else {
    out += fmt(im) + "i";
  }
  return out;
}

namespace {

std::string coeff_literal(Complex c) {
  char buf[128];
  if (c.imag() == 0) {
    std::snprintf(buf, sizeof(buf), "%.17g", c.real());
    std::string s(buf);
    if (c.real() < 0) return "(0" + s + ")";
    return s;
  }
  char re[64], im[64];
  std::snprintf(re, sizeof(re), "%.17g", c.real());
  std::snprintf(im, sizeof(im), "%.17g", std::abs(c.imag()));
  return std::string("(") + re + (c.imag() < 0 ? "-" : "+") + im + "i)";
}

}  // namespace

std::string to_string(const BivariatePoly& f) {
  std::string out;
  for (int i = f.deg_z(); i >= 0; --i) {
    for (int j = f.deg_t(); j >= 0; --j) {
      Complex c = f.coeff(i, j);
      if (c == Complex(0, 0)) continue;
      if (!out.empty()) out += " + ";
      out += coeff_literal(c);
      if (i > 0) out += "*z^" + std::to_string(i);
      if (j > 0) out += "*t^" + std::to_string(j);
    }
  }
  if (out.empty()) out = "0";
  return out;
}

std::string to_string(const UnivariatePoly& p) {
  std::string out;
  for (int k = p.degree(); k >= 0; --k) {
    Complex c = p.coeff(k);
    if (c == Complex(0, 0)) continue;
    if (!out.empty()) out += " + ";
    out += coeff_literal(c);
    if (k > 0) out += "*x^" + std::to_string(k);
  }
  if (out.empty()) out = "0";
  return out;
}

std::string poly_to_json(const BivariatePoly& f) {
  nlohmann::ordered_json j;
  j["degz"] = f.deg_z();
  j["degt"] = f.deg_t();
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (int i = 0; i <= f.deg_z(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int jx = 0; jx <= f.deg_t(); ++jx) {
      Complex c = f.coeff(i, jx);
      row.push_back({c.real(), c.imag()});
    }
    rows.push_back(row);
  }
  j["coeffs"] = rows;
  return j.dump();
}

BivariatePoly poly_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  std::vector<std::vector<Complex>> rows;
  for (const auto& row : j.at("coeffs")) {
    std::vector<Complex> r;
    for (const auto& c : row) {
      if (c.is_number()) {
        r.emplace_back(c.get<double>(), 0.0);
      } else {
        r.emplace_back(c.at(0).get<double>(), c.at(1).get<double>());
      }
    }
    rows.push_back(std::move(r));
  }
  return BivariatePoly::from_coeffs(std::move(rows));
}

}  // namespace braidtrack
