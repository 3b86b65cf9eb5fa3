#pragma once

// Exact arithmetic in Q(i)(rho): Gaussian rationals extended by a formal
// transcendental rho. Elements are reduced fractions of dense polynomials in
// rho with Gaussian-rational coefficients; the denominator is monic and
// coprime to the numerator. tau = 2*i*rho is the distinguished constant.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cassert>
#include <compare>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vertop/errors.hpp"

namespace vertop {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline Rational rational_pow(const Rational& a, int e) {
  if (e == 0) return Rational(1);
  if (e < 0) {
    if (a == 0) throw arithmetic_error("rational_pow: 0^negative");
    return rational_pow(Rational(1) / a, -e);
  }
  Rational r(1), base(a);
  int k = e;
  while (k > 0) {
    if (k & 1) r *= base;
    base *= base;
    k >>= 1;
  }
  return r;
}

/// Exact inverse square root of a positive rational that is a perfect square.
inline std::optional<Rational> rational_sqrt(const Rational& a) {
  if (a < 0) return std::nullopt;
  if (a == 0) return Rational(0);
  Integer num = numerator(a), den = denominator(a);
  Integer sn = sqrt(num), sd = sqrt(den);
  if (sn * sn != num || sd * sd != den) return std::nullopt;
  return Rational(sn, sd);
}

inline std::string rational_str(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

/// (2k-1)!! with the convention (-1)!! = 1.
inline Rational double_factorial_odd(int k) {
  Rational r(1);
  for (int j = 1; j <= k; ++j) r *= 2 * j - 1;
  return r;
}

// ---------------------------------------------------------------------------
// GaussianRational: re + i*im with rational components.
// ---------------------------------------------------------------------------

struct GaussianRational {
  Rational re{0};
  Rational im{0};

  GaussianRational() = default;
  GaussianRational(Rational r) : re(std::move(r)) {}
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  GaussianRational(int r) : re(r) {}

  static GaussianRational i() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_one() const { return re == 1 && im == 0; }

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    // Most coefficients are purely real or purely imaginary; skip the
    // full four-product form when a component vanishes.
    if (a.im == 0) {
      if (a.re == 0) return {};
      return {a.re * b.re, a.re * b.im};
    }
    if (b.im == 0) {
      if (b.re == 0) return {};
      return {a.re * b.re, a.im * b.re};
    }
    if (a.re == 0 && b.re == 0) return {-(a.im * b.im), Rational(0)};
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  GaussianRational inverse() const {
    Rational n = re * re + im * im;
    if (n == 0) throw arithmetic_error("GaussianRational: inverse of zero");
    return {re / n, -im / n};
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
    return a * b.inverse();
  }
  GaussianRational& operator+=(const GaussianRational& o) { return *this = *this + o; }
  GaussianRational& operator-=(const GaussianRational& o) { return *this = *this - o; }
  GaussianRational& operator*=(const GaussianRational& o) { return *this = *this * o; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }

  std::string str() const {
    std::ostringstream os;
    if (im == 0) {
      os << re;
    } else if (re == 0) {
      os << im << "*i";
    } else {
      os << re << (im > 0 ? "+" : "") << im << "*i";
    }
    return os.str();
  }
};

// ---------------------------------------------------------------------------
// Dense polynomial in rho over the Gaussian rationals.
// ---------------------------------------------------------------------------

struct RhoPoly {
  std::vector<GaussianRational> c;  // c[k] is the coefficient of rho^k

  RhoPoly() = default;
  explicit RhoPoly(GaussianRational a) {
    if (!a.is_zero()) c.push_back(std::move(a));
  }
  static RhoPoly rho() {
    RhoPoly p;
    p.c = {GaussianRational(0), GaussianRational(1)};
    return p;
  }
  static RhoPoly one() { return RhoPoly(GaussianRational(1)); }

  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }

  void trim() {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
  }
  const GaussianRational& leading() const {
    assert(!c.empty());
    return c.back();
  }

  friend RhoPoly operator+(const RhoPoly& a, const RhoPoly& b) {
    RhoPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()));
    for (std::size_t k = 0; k < r.c.size(); ++k) {
      if (k < a.c.size()) r.c[k] += a.c[k];
      if (k < b.c.size()) r.c[k] += b.c[k];
    }
    r.trim();
    return r;
  }
  friend RhoPoly operator-(const RhoPoly& a, const RhoPoly& b) {
    RhoPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()));
    for (std::size_t k = 0; k < r.c.size(); ++k) {
      if (k < a.c.size()) r.c[k] += a.c[k];
      if (k < b.c.size()) r.c[k] -= b.c[k];
    }
    r.trim();
    return r;
  }
  friend RhoPoly operator-(const RhoPoly& a) {
    RhoPoly r = a;
    for (auto& x : r.c) x = -x;
    return r;
  }
  friend RhoPoly operator*(const RhoPoly& a, const RhoPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    RhoPoly r;
    r.c.resize(a.c.size() + b.c.size() - 1);
    for (std::size_t k = 0; k < a.c.size(); ++k)
      for (std::size_t l = 0; l < b.c.size(); ++l) r.c[k + l] += a.c[k] * b.c[l];
    r.trim();
    return r;
  }
  RhoPoly scaled(const GaussianRational& s) const {
    if (s.is_zero()) return {};
    RhoPoly r = *this;
    for (auto& x : r.c) x *= s;
    return r;
  }

  /// Euclidean division; requires divisor nonzero.
  static std::pair<RhoPoly, RhoPoly> divmod(RhoPoly num, const RhoPoly& den) {
    if (den.is_zero()) throw arithmetic_error("RhoPoly: division by zero polynomial");
    RhoPoly q;
    if (num.degree() >= den.degree())
      q.c.resize(num.degree() - den.degree() + 1);
    GaussianRational lead_inv = den.leading().inverse();
    while (!num.is_zero() && num.degree() >= den.degree()) {
      int shift = num.degree() - den.degree();
      GaussianRational f = num.leading() * lead_inv;
      q.c[shift] += f;
      for (std::size_t k = 0; k < den.c.size(); ++k)
        num.c[k + shift] -= f * den.c[k];
      num.trim();
    }
    q.trim();
    return {std::move(q), std::move(num)};
  }

  static RhoPoly gcd(RhoPoly a, RhoPoly b) {
    while (!b.is_zero()) {
      auto [q, r] = divmod(a, b);
      (void)q;
      a = std::move(b);
      b = std::move(r);
    }
    if (!a.is_zero()) a = a.scaled(a.leading().inverse());  // monic
    return a;
  }

  friend bool operator==(const RhoPoly& a, const RhoPoly& b) { return a.c == b.c; }
};

// ---------------------------------------------------------------------------
// Scalar: reduced fraction num/den of RhoPolys, den monic.
// ---------------------------------------------------------------------------

class Scalar {
 public:
  Scalar() : num_(), den_(RhoPoly::one()) {}
  Scalar(int v) : num_(GaussianRational(v)), den_(RhoPoly::one()) {}
  Scalar(Rational v) : num_(GaussianRational(std::move(v))), den_(RhoPoly::one()) {}
  Scalar(GaussianRational v) : num_(std::move(v)), den_(RhoPoly::one()) {}
  Scalar(RhoPoly n, RhoPoly d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

  static Scalar i() { return Scalar(GaussianRational::i()); }
  static Scalar rho() { return Scalar(RhoPoly::rho(), RhoPoly::one()); }
  /// tau = 2*i*rho, the constant standing for 2*pi*i.
  static Scalar tau() { return Scalar(RhoPoly::rho().scaled({Rational(0), Rational(2)}), RhoPoly::one()); }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const {
    return num_.c.size() == 1 && num_.c[0].is_one() && den_.c.size() == 1 &&
           den_.c[0].is_one();
  }
  const RhoPoly& num() const { return num_; }
  const RhoPoly& den() const { return den_; }

  /// The rational value when this scalar is a plain rational, else nullopt.
  std::optional<Rational> as_rational() const {
    if (den_.degree() != 0 || num_.degree() > 0) return std::nullopt;
    if (num_.is_zero()) return Rational(0);
    if (num_.c[0].im != 0) return std::nullopt;
    return num_.c[0].re;
  }

  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    if (a.den_ == b.den_) return Scalar(a.num_ + b.num_, a.den_);
    return Scalar(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Scalar operator-(const Scalar& a, const Scalar& b) {
    if (a.den_ == b.den_) return Scalar(a.num_ - b.num_, a.den_);
    return Scalar(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Scalar operator-(const Scalar& a) {
    Scalar r = a;
    r.num_ = -r.num_;
    return r;
  }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    return Scalar(a.num_ * b.num_, a.den_ * b.den_);
  }
  Scalar inverse() const {
    if (is_zero()) throw arithmetic_error("Scalar: division by zero");
    return Scalar(den_, num_);
  }
  friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

  Scalar pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    Scalar r(1), base(*this);
    while (e > 0) {
      if (e & 1) r *= base;
      base *= base;
      e >>= 1;
    }
    return r;
  }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  std::string str() const;

  /// Total ordering for use as a map key; not a numeric order.
  std::strong_ordering key_order(const Scalar& o) const {
    auto cmp_gr = [](const GaussianRational& x, const GaussianRational& y) {
      if (auto c = x.re.compare(y.re); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
      if (auto c = x.im.compare(y.im); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
      return std::strong_ordering::equal;
    };
    auto cmp_poly = [&](const RhoPoly& x, const RhoPoly& y) {
      if (x.c.size() != y.c.size())
        return x.c.size() < y.c.size() ? std::strong_ordering::less : std::strong_ordering::greater;
      for (std::size_t k = 0; k < x.c.size(); ++k)
        if (auto c = cmp_gr(x.c[k], y.c[k]); c != std::strong_ordering::equal) return c;
      return std::strong_ordering::equal;
    };
    if (auto c = cmp_poly(num_, o.num_); c != std::strong_ordering::equal) return c;
    return cmp_poly(den_, o.den_);
  }

 private:
  void normalize() {
    if (den_.is_zero()) throw arithmetic_error("Scalar: zero denominator");
    if (num_.is_zero()) {
      den_ = RhoPoly::one();
      return;
    }
    if (den_ == RhoPoly::one()) return;
    // Monomial denominator d*rho^k: scale monic and cancel rho powers
    // directly, skipping the Euclidean gcd.
    int k = den_.degree();
    bool monomial = true;
    for (int j = 0; j < k; ++j) {
      if (!den_.c[static_cast<std::size_t>(j)].is_zero()) {
        monomial = false;
        break;
      }
    }
    if (monomial) {
      GaussianRational lead_inv = den_.leading().inverse();
      if (!lead_inv.is_one()) num_ = num_.scaled(lead_inv);
      int ord = 0;
      while (ord < static_cast<int>(num_.c.size()) &&
             num_.c[static_cast<std::size_t>(ord)].is_zero())
        ++ord;
      int t = std::min(ord, k);
      if (t > 0) num_.c.erase(num_.c.begin(), num_.c.begin() + t);
      den_.c.assign(static_cast<std::size_t>(k - t) + 1, GaussianRational(0));
      den_.c.back() = GaussianRational(1);
      return;
    }
    if (den_.degree() > 0 || num_.degree() > 0) {
      RhoPoly g = RhoPoly::gcd(num_, den_);
      if (g.degree() > 0) {
        num_ = RhoPoly::divmod(num_, g).first;
        den_ = RhoPoly::divmod(den_, g).first;
      }
    }
    GaussianRational lead_inv = den_.leading().inverse();
    num_ = num_.scaled(lead_inv);
    den_ = den_.scaled(lead_inv);
  }

  RhoPoly num_;
  RhoPoly den_;
};

// ---------------------------------------------------------------------------
// Rendering. Grammar shared with parse_scalar below.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string render_poly(const RhoPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (int k = p.degree(); k >= 0; --k) {
    const GaussianRational& a = p.c[k];
    if (a.is_zero()) continue;
    std::string coeff;
    bool simple = (a.im == 0) || (a.re == 0);
    if (k == 0) {
      coeff = simple ? a.str() : "(" + a.str() + ")";
    } else if (a.is_one()) {
      coeff = "";
    } else {
      coeff = (simple ? a.str() : "(" + a.str() + ")") + "*";
    }
    std::string mono = k == 0 ? "" : (k == 1 ? "rho" : "rho^" + std::to_string(k));
    std::string term = coeff + mono;
    if (out.empty()) {
      out = term;
    } else if (!term.empty() && term[0] == '-') {
      out += term;
    } else {
      out += "+" + term;
    }
  }
  return out;
}

}  // namespace detail

inline std::string Scalar::str() const {
  if (*this == Scalar::tau()) return "tau";
  if (*this == Scalar::rho()) return "rho";
  std::string n = detail::render_poly(num_);
  if (den_ == RhoPoly::one()) {
    if (num_.degree() > 0 && num_.c.size() > 1) {
      int nonzero = 0;
      for (const auto& x : num_.c) nonzero += !x.is_zero();
      if (nonzero > 1) return "(" + n + ")";
    }
    return n;
  }
  return "(" + n + ")/(" + detail::render_poly(den_) + ")";
}

// ---------------------------------------------------------------------------
// Scalar expression parser: number | i | rho | tau | (+,-,*,/,^,parens).
// ---------------------------------------------------------------------------

class ScalarParser {
 public:
  explicit ScalarParser(std::string src) : src_(std::move(src)) {}

  Scalar parse() {
    Scalar v = expr();
    skip_ws();
    if (pos_ != src_.size()) throw parse_error(pos_, "end of input");
    return v;
  }

 private:
  Scalar expr() {
    Scalar v = term();
    for (;;) {
      skip_ws();
      if (accept('+')) {
        v += term();
      } else if (accept('-')) {
        v -= term();
      } else {
        return v;
      }
    }
  }
  Scalar term() {
    Scalar v = factor();
    for (;;) {
      skip_ws();
      if (accept('*')) {
        v *= factor();
      } else if (accept('/')) {
        v = v / factor();
      } else {
        return v;
      }
    }
  }
  Scalar factor() {
    skip_ws();
    if (accept('-')) return -factor();
    Scalar v = atom();
    skip_ws();
    if (accept('^')) {
      skip_ws();
      bool neg = accept('-');
      if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
        throw parse_error(pos_, "integer exponent");
      int e = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
        e = e * 10 + (src_[pos_++] - '0');
      v = v.pow(neg ? -e : e);
    }
    return v;
  }
  Scalar atom() {
    skip_ws();
    if (accept('(')) {
      Scalar v = expr();
      skip_ws();
      if (!accept(')')) throw parse_error(pos_, "')'");
      return v;
    }
    if (match_word("tau")) return Scalar::tau();
    if (match_word("rho")) return Scalar::rho();
    if (match_word("i")) return Scalar::i();
    if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      std::size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      Integer n(src_.substr(start, pos_ - start));
      return Scalar(Rational(n));
    }
    throw parse_error(pos_, "number, 'i', 'rho', 'tau', or '('");
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool match_word(const std::string& w) {
    if (src_.compare(pos_, w.size(), w) != 0) return false;
    std::size_t end = pos_ + w.size();
    if (end < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
      return false;
    pos_ = end;
    return true;
  }

  std::string src_;
  std::size_t pos_ = 0;
};

inline Scalar parse_scalar(const std::string& src) { return ScalarParser(src).parse(); }

}  // namespace vertop
