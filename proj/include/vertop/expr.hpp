#pragma once

// Field-expression language:
//   expr := atom | "nprod(" expr "," expr "," int ")" | "d(" expr ")" | "id"
//   atom := beta[i] | gamma[i] | sp[kind,i,j] | current[u,v] | cartan[u,v]
// with kind in {bb, bg, gg}. Parse errors carry a byte offset and the
// expected-token set; rendering is canonical and round-trips.

#include <string>
#include <vector>

#include "vertop/affine.hpp"
#include "vertop/betagamma.hpp"

namespace vertop {

struct FieldExpr {
  enum class Kind { Id, Beta, Gamma, Sp, Current, Cartan, Nprod, Deriv };

  Kind kind = Kind::Id;
  SpKind sp_kind = SpKind::BetaBeta;
  int i = 0;  // species / row index
  int j = 0;  // second species / column index
  int n = 0;  // normal-product index
  std::vector<FieldExpr> children;

  bool operator==(const FieldExpr&) const = default;

  static FieldExpr id() { return {}; }
  static FieldExpr beta(int i) {
    FieldExpr e;
    e.kind = Kind::Beta;
    e.i = i;
    return e;
  }
  static FieldExpr gamma(int i) {
    FieldExpr e;
    e.kind = Kind::Gamma;
    e.i = i;
    return e;
  }
  static FieldExpr sp(SpKind k, int i, int j) {
    FieldExpr e;
    e.kind = Kind::Sp;
    e.sp_kind = k;
    e.i = i;
    e.j = j;
    return e;
  }
  static FieldExpr current(int u, int v) {
    FieldExpr e;
    e.kind = Kind::Current;
    e.i = u;
    e.j = v;
    return e;
  }
  static FieldExpr cartan(int u, int v) {
    FieldExpr e;
    e.kind = Kind::Cartan;
    e.i = u;
    e.j = v;
    return e;
  }
  static FieldExpr nprod(FieldExpr a, FieldExpr b, int n) {
    FieldExpr e;
    e.kind = Kind::Nprod;
    e.n = n;
    e.children = {std::move(a), std::move(b)};
    return e;
  }
  static FieldExpr deriv(FieldExpr a) {
    FieldExpr e;
    e.kind = Kind::Deriv;
    e.children = {std::move(a)};
    return e;
  }
};

inline const char* sp_kind_tag(SpKind k) {
  switch (k) {
    case SpKind::BetaBeta: return "bb";
    case SpKind::BetaGamma: return "bg";
    case SpKind::GammaGamma: return "gg";
  }
  return "bb";
}

inline std::string render(const FieldExpr& e) {
  switch (e.kind) {
    case FieldExpr::Kind::Id: return "id";
    case FieldExpr::Kind::Beta: return "beta[" + std::to_string(e.i) + "]";
    case FieldExpr::Kind::Gamma: return "gamma[" + std::to_string(e.i) + "]";
    case FieldExpr::Kind::Sp:
      return std::string("sp[") + sp_kind_tag(e.sp_kind) + "," + std::to_string(e.i) +
             "," + std::to_string(e.j) + "]";
    case FieldExpr::Kind::Current:
      return "current[" + std::to_string(e.i) + "," + std::to_string(e.j) + "]";
    case FieldExpr::Kind::Cartan:
      return "cartan[" + std::to_string(e.i) + "," + std::to_string(e.j) + "]";
    case FieldExpr::Kind::Nprod:
      return "nprod(" + render(e.children[0]) + "," + render(e.children[1]) + "," +
             std::to_string(e.n) + ")";
    case FieldExpr::Kind::Deriv: return "d(" + render(e.children[0]) + ")";
  }
  return "id";
}

class FieldExprParser {
 public:
  explicit FieldExprParser(std::string src) : src_(std::move(src)) {}

  FieldExpr parse() {
    FieldExpr e = expr();
    skip_ws();
    if (pos_ != src_.size()) throw parse_error(pos_, "end of input");
    return e;
  }

 private:
  FieldExpr expr() {
    skip_ws();
    if (match_word("nprod")) {
      expect('(');
      FieldExpr a = expr();
      expect(',');
      FieldExpr b = expr();
      expect(',');
      int n = integer();
      expect(')');
      return FieldExpr::nprod(std::move(a), std::move(b), n);
    }
    if (match_word("d")) {
      expect('(');
      FieldExpr a = expr();
      expect(')');
      return FieldExpr::deriv(std::move(a));
    }
    if (match_word("id")) return FieldExpr::id();
    if (match_word("beta")) return FieldExpr::beta(one_index());
    if (match_word("gamma")) return FieldExpr::gamma(one_index());
    if (match_word("sp")) {
      expect('[');
      SpKind k = sp_kind();
      expect(',');
      int i = positive();
      expect(',');
      int j = positive();
      expect(']');
      return FieldExpr::sp(k, i, j);
    }
    if (match_word("current")) {
      auto [u, v] = two_indices();
      return FieldExpr::current(u, v);
    }
    if (match_word("cartan")) {
      auto [u, v] = two_indices();
      return FieldExpr::cartan(u, v);
    }
    throw parse_error(pos_,
                      "'nprod', 'd', 'id', 'beta', 'gamma', 'sp', 'current', or 'cartan'");
  }

  int one_index() {
    expect('[');
    int i = positive();
    expect(']');
    return i;
  }
  std::pair<int, int> two_indices() {
    expect('[');
    int u = positive();
    expect(',');
    int v = positive();
    expect(']');
    return {u, v};
  }
  SpKind sp_kind() {
    skip_ws();
    if (match_word("bb")) return SpKind::BetaBeta;
    if (match_word("bg")) return SpKind::BetaGamma;
    if (match_word("gg")) return SpKind::GammaGamma;
    throw parse_error(pos_, "'bb', 'bg', or 'gg'");
  }
  int integer() {
    skip_ws();
    std::size_t start = pos_;
    bool neg = accept('-');
    if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
      throw parse_error(pos_, "integer");
    long long v = 0;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      v = v * 10 + (src_[pos_++] - '0');
      if (v > 1'000'000) throw parse_error(start, "integer within range");
    }
    return static_cast<int>(neg ? -v : v);
  }
  int positive() {
    skip_ws();
    std::size_t start = pos_;
    int v = integer();
    if (v < 1) throw parse_error(start, "index >= 1");
    return v;
  }

  void expect(char c) {
    skip_ws();
    if (!accept(c)) throw parse_error(pos_, std::string("'") + c + "'");
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
    skip_ws();
    if (src_.compare(pos_, w.size(), w) != 0) return false;
    std::size_t end = pos_ + w.size();
    if (end < src_.size() && std::isalnum(static_cast<unsigned char>(src_[end])))
      return false;
    pos_ = end;
    return true;
  }

  std::string src_;
  std::size_t pos_ = 0;
};

inline FieldExpr parse_field_expr(const std::string& src) {
  return FieldExprParser(src).parse();
}

/// Which model an expression lives on: the symplectic one (beta/gamma/sp),
/// the current one (current/cartan), or either (pure id/d/nprod of id).
enum class ExprFamily { Neutral, Symplectic, Affine };

inline ExprFamily expr_family(const FieldExpr& e) {
  ExprFamily f = ExprFamily::Neutral;
  switch (e.kind) {
    case FieldExpr::Kind::Beta:
    case FieldExpr::Kind::Gamma:
    case FieldExpr::Kind::Sp: f = ExprFamily::Symplectic; break;
    case FieldExpr::Kind::Current:
    case FieldExpr::Kind::Cartan: f = ExprFamily::Affine; break;
    default: break;
  }
  for (const auto& c : e.children) {
    ExprFamily cf = expr_family(c);
    if (cf == ExprFamily::Neutral) continue;
    if (f == ExprFamily::Neutral) f = cf;
    if (f != cf) throw model_error("expression mixes beta/gamma and current atoms");
  }
  return f;
}

/// Realize the expression on the model its atoms select; a purely neutral
/// expression lands on the symplectic model.
inline Field build_field(const FieldExpr& e, const SymplecticConfig& sym,
                         const SlnConfig& sln) {
  ExprFamily fam = expr_family(e);
  const ModelSpace& space = fam == ExprFamily::Affine ? sln.model : sym.model;
  std::function<Field(const FieldExpr&)> go = [&](const FieldExpr& x) -> Field {
    switch (x.kind) {
      case FieldExpr::Kind::Id: return identity_field(space);
      case FieldExpr::Kind::Beta: return beta_field(sym, x.i);
      case FieldExpr::Kind::Gamma: return gamma_field(sym, x.i);
      case FieldExpr::Kind::Sp: return sp_quadratic_field(sym, x.sp_kind, x.i, x.j);
      case FieldExpr::Kind::Current:
        if (x.i == x.j || x.i > sln.n || x.j > sln.n)
          throw model_error("current[" + std::to_string(x.i) + "," + std::to_string(x.j) +
                            "]: need distinct indices in 1.." + std::to_string(sln.n));
        return current_field(sln, SlnElement::E(sln.n, x.i, x.j));
      case FieldExpr::Kind::Cartan:
        if (x.i == x.j || x.i > sln.n || x.j > sln.n)
          throw model_error("cartan[" + std::to_string(x.i) + "," + std::to_string(x.j) +
                            "]: need distinct indices in 1.." + std::to_string(sln.n));
        return current_field(sln, SlnElement::cartan(sln.n, x.i, x.j));
      case FieldExpr::Kind::Nprod:
        return nproduct(go(x.children[0]), go(x.children[1]), x.n);
      case FieldExpr::Kind::Deriv: return derivative(go(x.children[0]));
    }
    return identity_field(space);
  };
  return go(e);
}

}  // namespace vertop
