#pragma once

// Polynomial and Gaussian-twisted-polynomial model spaces with the depth
// filtration U_N, precision-tracked vectors (equivalence classes mod U_N),
// and the primitive operators: multiplication, differentiation (with the
// Gaussian chain rule), and the depth-shift integration operator pi_t.

#include <compare>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "vertop/errors.hpp"
#include "vertop/scalar.hpp"

namespace vertop {

/// Coordinate x_{species,-depth}; species in 1..d, depth >= 1.
struct VariableId {
  int species = 1;
  int depth = 1;
  auto operator<=>(const VariableId&) const = default;
};

/// Canonical sorted product of variables with positive exponents.
struct Monomial {
  std::vector<std::pair<VariableId, int>> factors;  // sorted by VariableId

  bool is_constant() const { return factors.empty(); }

  int max_depth() const {
    int d = 0;
    for (const auto& [v, e] : factors) d = std::max(d, v.depth);
    return d;
  }
  int degree() const {
    int t = 0;
    for (const auto& [v, e] : factors) t += e;
    return t;
  }

  int exponent(const VariableId& v) const {
    for (const auto& [w, e] : factors)
      if (w == v) return e;
    return 0;
  }

  Monomial times(const VariableId& v, int e = 1) const {
    Monomial r;
    r.factors.reserve(factors.size() + 1);
    bool placed = false;
    for (const auto& f : factors) {
      if (!placed && v < f.first) {
        r.factors.emplace_back(v, e);
        placed = true;
      }
      if (f.first == v) {
        r.factors.emplace_back(v, f.second + e);
        placed = true;
      } else {
        r.factors.push_back(f);
      }
    }
    if (!placed) r.factors.emplace_back(v, e);
    return r;
  }

  Monomial times(const Monomial& o) const {
    Monomial r = *this;
    for (const auto& [v, e] : o.factors) r = r.times(v, e);
    return r;
  }

  /// d/dv at the polynomial level: returns (old exponent, monomial with one
  /// power of v removed), or nullopt when v is absent.
  std::optional<std::pair<int, Monomial>> removed(const VariableId& v) const {
    Monomial r;
    int found = 0;
    for (const auto& f : factors) {
      if (f.first == v) {
        found = f.second;
        if (f.second > 1) r.factors.emplace_back(v, f.second - 1);
      } else {
        r.factors.push_back(f);
      }
    }
    if (found == 0) return std::nullopt;
    return std::make_pair(found, std::move(r));
  }

  /// Shift every depth down by one; requires all depths >= 2.
  Monomial depth_down_shift() const {
    Monomial r;
    r.factors.reserve(factors.size());
    for (const auto& [v, e] : factors)
      r.factors.emplace_back(VariableId{v.species, v.depth - 1}, e);
    return r;
  }

  auto operator<=>(const Monomial&) const = default;

  std::string str() const {
    if (factors.empty()) return "1";
    std::string out;
    for (const auto& [v, e] : factors) {
      if (!out.empty()) out += "*";
      out += "x[" + std::to_string(v.species) + ",-" + std::to_string(v.depth) + "]";
      if (e > 1) out += "^" + std::to_string(e);
    }
    return out;
  }
};

/// Largest n with m in U_n (monomials of depth > n); 0 for shallow monomials.
inline int filtration_degree(const Monomial& m) {
  return std::max(0, m.max_depth() - 1);
}

// ---------------------------------------------------------------------------
// ModelSpace: d species, basis vectors m * exp(-a * sum x^2) for twist a.
// ---------------------------------------------------------------------------

class ModelSpace {
 public:
  enum class TwistKind { Plain, Half, GaussPi };

  /// Placeholder (one plain species); fields overwrite this on construction.
  ModelSpace() : ModelSpace(1, TwistKind::Plain, Rational(0)) {}

  static ModelSpace plain(int d) { return ModelSpace(d, TwistKind::Plain, Rational(0)); }
  static ModelSpace gaussian_half(int d) { return ModelSpace(d, TwistKind::Half, Rational(0)); }
  /// Twist rho*c; c must be the square of a positive rational.
  static ModelSpace gauss_pi(int d, const Rational& c) {
    auto s = rational_sqrt(c);
    if (!s || *s == 0) throw model_error("gauss_pi model: c must be a positive rational square");
    ModelSpace m(d, TwistKind::GaussPi, c);
    m.sigma_ = Rational(1) / *s;  // sigma = c^{-1/2}
    return m;
  }

  int species_count() const { return d_; }
  TwistKind kind() const { return kind_; }

  /// The twist exponent a as a Scalar (0, 1/2, or rho*c).
  Scalar twist() const {
    switch (kind_) {
      case TwistKind::Plain: return Scalar(0);
      case TwistKind::Half: return Scalar(Rational(1, 2));
      case TwistKind::GaussPi: return Scalar::rho() * Scalar(c_);
    }
    return Scalar(0);
  }

  const Rational& gauss_c() const { return c_; }
  const Rational& sigma() const { return sigma_; }  // c^{-1/2}, GaussPi only

  bool operator==(const ModelSpace& o) const {
    return d_ == o.d_ && kind_ == o.kind_ && c_ == o.c_;
  }

 private:
  ModelSpace(int d, TwistKind k, Rational c) : d_(d), kind_(k), c_(std::move(c)) {
    if (d < 1) throw model_error("ModelSpace: need at least one species");
  }
  int d_;
  TwistKind kind_;
  Rational c_;
  Rational sigma_{0};
};

// ---------------------------------------------------------------------------
// FilteredVector: finite combination of basis monomials, known mod U_N.
// ---------------------------------------------------------------------------

class FilteredVector {
 public:
  /// Exact zero vector.
  FilteredVector() = default;

  static FilteredVector exact(std::map<Monomial, Scalar> terms) {
    FilteredVector v;
    v.terms_ = std::move(terms);
    v.drop_zeros();
    return v;
  }
  static FilteredVector basis(const Monomial& m) {
    FilteredVector v;
    v.terms_.emplace(m, Scalar(1));
    return v;
  }
  static FilteredVector one() { return basis(Monomial{}); }

  const std::map<Monomial, Scalar>& terms() const { return terms_; }
  /// nullopt means exact.
  std::optional<int> precision() const { return precision_; }
  bool is_exact() const { return !precision_.has_value(); }
  bool is_zero() const { return terms_.empty(); }

  Scalar coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  int max_depth() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.max_depth());
    return d;
  }

  FilteredVector truncated(int N) const {
    if (precision_ && N > *precision_)
      throw precision_error(N, *precision_, "truncate");
    FilteredVector v;
    v.precision_ = N;
    for (const auto& [m, c] : terms_)
      if (m.max_depth() <= N) v.terms_.emplace(m, c);
    return v;
  }

  FilteredVector scaled(const Scalar& s) const {
    FilteredVector v;
    v.precision_ = precision_;
    if (s.is_zero()) return v;
    for (const auto& [m, c] : terms_) v.terms_.emplace(m, c * s);
    return v;
  }

  void add_term(const Monomial& m, const Scalar& c) {
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    } else if (c.is_zero()) {
      terms_.erase(it);
    }
  }

  void set_precision(std::optional<int> p) { precision_ = p; }

  bool operator==(const FilteredVector& o) const {
    return precision_ == o.precision_ && terms_ == o.terms_;
  }

  std::string str() const {
    std::string out;
    if (terms_.empty()) {
      out = "0";
    } else {
      for (const auto& [m, c] : terms_) {
        if (!out.empty()) out += " + ";
        std::string cs = c.str();
        if (cs == "1" && !m.is_constant()) {
          out += m.str();
        } else if (m.is_constant()) {
          out += cs;
        } else {
          bool needs_parens = cs.find('+') != std::string::npos ||
                              cs.find('-') != std::string::npos;
          out += (needs_parens ? "(" + cs + ")" : cs) + "*" + m.str();
        }
      }
    }
    if (precision_) out += " @ precision " + std::to_string(*precision_);
    return out;
  }

 private:
  void drop_zeros() {
    for (auto it = terms_.begin(); it != terms_.end();)
      it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
  }
  std::map<Monomial, Scalar> terms_;
  std::optional<int> precision_;
};

/// Sum of scalar multiples; the result's precision is the minimum of the
/// inputs' precisions.
inline FilteredVector linear_combine(
    const std::vector<std::pair<Scalar, FilteredVector>>& pairs) {
  std::optional<int> prec;
  for (const auto& [s, v] : pairs)
    if (v.precision() && (!prec || *v.precision() < *prec)) prec = v.precision();
  FilteredVector out;
  out.set_precision(prec);
  for (const auto& [s, v] : pairs) {
    if (s.is_zero()) continue;
    for (const auto& [m, c] : v.terms()) {
      if (prec && m.max_depth() > *prec) continue;
      out.add_term(m, c * s);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Primitive operators.
// ---------------------------------------------------------------------------

struct PrimitiveOp {
  enum class Kind { Mult, Deriv, PiT };
  Kind kind = Kind::Mult;
  VariableId var;  // unused for PiT

  static PrimitiveOp mult(int species, int depth) {
    return {Kind::Mult, VariableId{species, depth}};
  }
  static PrimitiveOp deriv(int species, int depth) {
    return {Kind::Deriv, VariableId{species, depth}};
  }
  static PrimitiveOp pi_t() { return {Kind::PiT, VariableId{}}; }
};

namespace detail {

/// Exact Gaussian moment per depth-1 slot: integral of y^e exp(-pi c y^2) dy
/// = (e-1)!! (2 pi c)^{-e/2} sigma for even e, 0 for odd e (pi rendered as rho).
inline Scalar gaussian_moment(int e, const ModelSpace& space) {
  if (e % 2 != 0) return Scalar(0);
  if (e == 0) return Scalar(space.sigma());
  int k = e / 2;
  Scalar twopic = Scalar(2) * Scalar::rho() * Scalar(space.gauss_c());
  return Scalar(double_factorial_odd(k)) * twopic.pow(-k) * Scalar(space.sigma());
}

}  // namespace detail

inline FilteredVector apply_primitive(const PrimitiveOp& op, const FilteredVector& v,
                                      const ModelSpace& space) {
  std::optional<int> prec = v.precision();
  FilteredVector out;
  switch (op.kind) {
    case PrimitiveOp::Kind::Mult: {
      out.set_precision(prec);
      for (const auto& [m, c] : v.terms()) {
        Monomial r = m.times(op.var);
        if (prec && r.max_depth() > *prec) continue;
        out.add_term(r, c);
      }
      return out;
    }
    case PrimitiveOp::Kind::Deriv: {
      if (prec && op.var.depth > *prec)
        throw precision_error(op.var.depth, *prec, "apply_primitive(Deriv)");
      out.set_precision(prec);
      Scalar twist = space.twist();
      Scalar chain = -(Scalar(2) * twist);
      for (const auto& [m, c] : v.terms()) {
        if (auto rem = m.removed(op.var))
          out.add_term(rem->second, c * Scalar(rem->first));
        if (!twist.is_zero()) {
          Monomial r = m.times(op.var);
          if (!prec || r.max_depth() <= *prec)
            out.add_term(r, chain * c);
        }
      }
      return out;
    }
    case PrimitiveOp::Kind::PiT: {
      if (space.kind() != ModelSpace::TwistKind::GaussPi)
        throw model_error("pi_t requires the rho*c twisted model");
      if (prec && *prec < 1)
        throw precision_error(1, *prec, "apply_primitive(PiT)");
      if (prec) out.set_precision(*prec - 1);
      // Per-call moment cache indexed by exponent; exponent 0 gives sigma.
      std::vector<std::optional<Scalar>> moment_cache;
      auto moment_of = [&](int e) -> const Scalar& {
        if (e >= static_cast<int>(moment_cache.size()))
          moment_cache.resize(static_cast<std::size_t>(e) + 1);
        auto& slot = moment_cache[static_cast<std::size_t>(e)];
        if (!slot) slot = detail::gaussian_moment(e, space);
        return *slot;
      };
      for (const auto& [m, c] : v.terms()) {
        // Split off the depth-1 part and integrate it species by species;
        // species with no depth-1 variable contribute sigma each.
        Monomial deep;
        Scalar moment(1);
        std::vector<int> exps(static_cast<std::size_t>(space.species_count()), 0);
        bool zero = false;
        for (const auto& [var, e] : m.factors) {
          if (var.depth == 1) {
            exps[static_cast<std::size_t>(var.species - 1)] = e;
          } else {
            deep.factors.emplace_back(var, e);
          }
        }
        for (int s = 0; s < space.species_count(); ++s) {
          const Scalar& mom = moment_of(exps[static_cast<std::size_t>(s)]);
          if (mom.is_zero()) {
            zero = true;
            break;
          }
          moment *= mom;
        }
        if (zero) continue;
        Monomial shifted = deep.depth_down_shift();
        if (out.precision() && shifted.max_depth() > *out.precision()) continue;
        out.add_term(shifted, c * moment);
      }
      return out;
    }
  }
  return out;
}

/// Enumerate basis monomials with total degree <= max_degree and every depth
/// <= max_depth over the given model space, in canonical order.
inline std::vector<Monomial> enumerate_monomials(const ModelSpace& space, int max_degree,
                                                 int max_depth) {
  std::vector<VariableId> vars;
  for (int s = 1; s <= space.species_count(); ++s)
    for (int n = 1; n <= max_depth; ++n) vars.push_back({s, n});
  std::vector<Monomial> out;
  Monomial current;
  auto rec = [&](auto&& self, std::size_t idx, int remaining) -> void {
    out.push_back(current);
    for (std::size_t k = idx; k < vars.size(); ++k) {
      if (remaining == 0) break;
      current.factors.emplace_back(vars[k], 1);
      for (int e = 1; e <= remaining; ++e) {
        current.factors.back().second = e;
        self(self, k + 1, remaining - e);
      }
      current.factors.pop_back();
    }
  };
  rec(rec, 0, max_degree);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace vertop
