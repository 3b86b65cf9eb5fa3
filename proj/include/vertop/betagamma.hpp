#pragma once

// The Heisenberg / beta-gamma realization: mode tables on the polynomial
// model of C^inf(W[t^-1]t^-1) and the Gaussian-twisted Schwartz model,
// commutation-relation checks, and the quadratic sp_{2g} fields.

#include <boost/functional/hash.hpp>

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vertop/field.hpp"
#include "vertop/report.hpp"

namespace vertop {

/// 2g species with the fixed pairing <e_i, e_{g+i}> = 1 = -<e_{g+i}, e_i>.
struct SymplecticConfig {
  int g = 1;
  ModelSpace model = ModelSpace::plain(2);

  static SymplecticConfig plain(int g) { return {g, ModelSpace::plain(2 * g)}; }
  static SymplecticConfig schwartz(int g) { return {g, ModelSpace::gaussian_half(2 * g)}; }
};

namespace detail {

inline void check_species(const SymplecticConfig& cfg, int i, const char* what) {
  if (i < 1 || i > cfg.g)
    throw model_error(std::string(what) + ": index " + std::to_string(i) +
                      " out of range 1.." + std::to_string(cfg.g));
}

inline Field mode_table_field(const SymplecticConfig& cfg, std::string name,
                              int deriv_species, int mult_species, const Scalar& mult_coeff) {
  Field f;
  f.name = std::move(name);
  f.space = cfg.model;
  ModelSpace space = cfg.model;
  f.mode = [space, deriv_species, mult_species, mult_coeff](int k) {
    OpTerm t;
    if (k >= 0) {
      t.coeff = Scalar(1);
      t.ops = {PrimitiveOp::deriv(deriv_species, k + 1)};
    } else {
      t.coeff = mult_coeff;
      t.ops = {PrimitiveOp::mult(mult_species, -k)};
    }
    return ModeOp::from_series(OperatorSeries::single(std::move(t)), space);
  };
  // Mode -k multiplies by a depth-k variable, so its image lies in U_{k-1}.
  f.deep_K = [](int N) { return N + 1; };
  return f;
}

}  // namespace detail

/// beta_i: nonnegative mode k is d/dx_{i+g,-(k+1)}, mode -n is -tau*x_{i,-n}.
inline Field beta_field(const SymplecticConfig& cfg, int i) {
  detail::check_species(cfg, i, "beta_field");
  return detail::mode_table_field(cfg, "beta[" + std::to_string(i) + "]", i + cfg.g, i,
                                  -Scalar::tau());
}

/// gamma_i: nonnegative mode k is d/dx_{i,-(k+1)}, mode -n is tau*x_{i+g,-n}.
inline Field gamma_field(const SymplecticConfig& cfg, int i) {
  detail::check_species(cfg, i, "gamma_field");
  return detail::mode_table_field(cfg, "gamma[" + std::to_string(i) + "]", i, i + cfg.g,
                                  Scalar::tau());
}

// ---------------------------------------------------------------------------
// Heisenberg Lie algebra elements e_j t^m plus center.
// ---------------------------------------------------------------------------

struct HeisenbergElement {
  // (coefficient, species j in 1..2g, power m of t)
  std::vector<std::tuple<Scalar, int, int>> terms;
  Scalar central{0};

  static HeisenbergElement basis(int species, int tpow) {
    HeisenbergElement h;
    h.terms.emplace_back(Scalar(1), species, tpow);
    return h;
  }
  static HeisenbergElement center(Scalar c) {
    HeisenbergElement h;
    h.central = std::move(c);
    return h;
  }
};

/// The Lie-algebra action: e_j t^{-n} acts as d/dx_{j,-n}; for m >= 0,
/// e_j t^m acts as -tau*x_{g+j,-m-1} (j <= g) or tau*x_{j-g,-m-1} (j > g);
/// the center c acts as tau*c*Id.
inline OperatorSeries heisenberg_action(const SymplecticConfig& cfg, const HeisenbergElement& h) {
  OperatorSeries s;
  for (const auto& [coeff, j, m] : h.terms) {
    if (j < 1 || j > 2 * cfg.g)
      throw model_error("heisenberg_action: species out of range");
    OpTerm t;
    if (m < 0) {
      t.coeff = coeff;
      t.ops = {PrimitiveOp::deriv(j, -m)};
    } else if (j <= cfg.g) {
      t.coeff = -Scalar::tau() * coeff;
      t.ops = {PrimitiveOp::mult(cfg.g + j, m + 1)};
    } else {
      t.coeff = Scalar::tau() * coeff;
      t.ops = {PrimitiveOp::mult(j - cfg.g, m + 1)};
    }
    s += OperatorSeries::single(std::move(t));
  }
  if (!h.central.is_zero())
    s += OperatorSeries::scalar_identity(Scalar::tau() * h.central);
  return s;
}

// ---------------------------------------------------------------------------
// Commutation-relation suite.
// ---------------------------------------------------------------------------

/// [beta,beta] = [gamma,gamma] = 0 and [beta_k(m), gamma_j(n)] =
/// tau delta_{kj} delta_{m+n+1,0}, on all probes mod U_N.
inline ReportEntry check_heisenberg_relations(const SymplecticConfig& cfg, int mode_window,
                                              const std::vector<FilteredVector>& probes,
                                              int N) {
  ReportEntry entry;
  entry.name = "heisenberg_relations";
  entry.params = {{"g", std::to_string(cfg.g)},
                  {"twist", cfg.model.twist().str()},
                  {"window", std::to_string(mode_window)},
                  {"N", std::to_string(N)}};
  std::vector<Field> fields;  // beta_1..beta_g then gamma_1..gamma_g
  for (int i = 1; i <= cfg.g; ++i) fields.push_back(beta_field(cfg, i));
  for (int i = 1; i <= cfg.g; ++i) fields.push_back(gamma_field(cfg, i));
  const int W = 2 * mode_window + 1;
  const int F = 2 * cfg.g;

  // Mode ops hoisted out of the probe loops. The modes are linear and the
  // one-step images share most of their monomials, so applications are
  // memoised per (mode, basis monomial) at a precision covering any outer
  // mode's requirement.
  const int NP = N + mode_window + 1;
  std::vector<ModeOp> ops(static_cast<std::size_t>(F * W));
  for (int f = 0; f < F; ++f)
    for (int m = -mode_window; m <= mode_window; ++m)
      ops[static_cast<std::size_t>(f * W + m + mode_window)] =
          fields[static_cast<std::size_t>(f)].mode(m);
  // The coefficients repeat from a small value set, so they are interned to
  // integer ids and products/sums of ids are memoised: the coefficient
  // arithmetic in the hot loop reduces to integer table lookups.
  struct ScalarHash {
    std::size_t operator()(const Scalar& s) const {
      std::size_t h = 0;
      auto poly = [&h](const RhoPoly& p) {
        boost::hash_combine(h, p.c.size());
        for (const auto& g : p.c) {
          boost::hash_combine(h, g.re);
          boost::hash_combine(h, g.im);
        }
      };
      poly(s.num());
      poly(s.den());
      return h;
    }
  };
  std::vector<Scalar> pool;
  std::unordered_map<Scalar, int, ScalarHash> ids;
  auto intern = [&](const Scalar& s) {
    auto it = ids.find(s);
    if (it == ids.end()) {
      pool.push_back(s);
      it = ids.emplace(s, static_cast<int>(pool.size()) - 1).first;
    }
    return it->second;
  };
  const int kOne = intern(Scalar(1));
  const int kZero = intern(Scalar(0));
  struct IntPairHash {
    std::size_t operator()(const std::pair<int, int>& k) const {
      return std::hash<long long>()((static_cast<long long>(k.first) << 32) ^
                                    static_cast<unsigned int>(k.second));
    }
  };
  std::unordered_map<std::pair<int, int>, int, IntPairHash> prod_ids, sum_ids;
  auto product = [&](int a, int b) {
    if (a == kOne) return b;
    if (b == kOne) return a;
    auto it = prod_ids.find({a, b});
    if (it == prod_ids.end()) {
      Scalar p = pool[static_cast<std::size_t>(a)] * pool[static_cast<std::size_t>(b)];
      it = prod_ids.emplace(std::make_pair(a, b), intern(p)).first;
    }
    return it->second;
  };
  auto sum = [&](int a, int b) {
    auto it = sum_ids.find({a, b});
    if (it == sum_ids.end()) {
      Scalar s = pool[static_cast<std::size_t>(a)] + pool[static_cast<std::size_t>(b)];
      it = sum_ids.emplace(std::make_pair(a, b), intern(s)).first;
    }
    return it->second;
  };

  // Per (mode, basis monomial) images, memoised; the modes are linear and
  // the probe images share most of their monomials.
  using Image = std::vector<std::pair<Monomial, int>>;
  std::vector<std::map<Monomial, Image>> memo(ops.size());
  auto cached_image = [&](int f, int m, const Monomial& mono) -> const Image& {
    std::size_t oi = static_cast<std::size_t>(f * W + m + mode_window);
    auto& table = memo[oi];
    auto it = table.find(mono);
    if (it == table.end()) {
      FilteredVector out = ops[oi].apply(FilteredVector::basis(mono), NP);
      Image img;
      for (const auto& [m2, c2] : out.terms()) img.emplace_back(m2, intern(c2));
      it = table.emplace(mono, std::move(img)).first;
    }
    return it->second;
  };
  // mode f,m applied to a flat term list, mod U_prec.
  auto compose = [&](int f, int m, const Image& in, int prec, Image& out) {
    int req = ops[static_cast<std::size_t>(f * W + m + mode_window)].required(prec);
    for (const auto& [mono, cid] : in) {
      if (mono.max_depth() > req) continue;
      for (const auto& [m2, c2id] : cached_image(f, m, mono)) {
        if (m2.max_depth() > prec) continue;
        int pid = product(cid, c2id);
        bool merged = false;
        for (auto& u : out)
          if (u.first == m2) {
            u.second = sum(u.second, pid);
            merged = true;
            break;
          }
        if (!merged) out.emplace_back(m2, pid);
      }
    }
    std::erase_if(out, [&](const auto& t) { return t.second == kZero; });
  };
  // First-step images of every probe under every mode in the window.
  std::vector<std::vector<Image>> image(static_cast<std::size_t>(F * W));
  for (int f = 0; f < F; ++f)
    for (int m = -mode_window; m <= mode_window; ++m) {
      auto& row = image[static_cast<std::size_t>(f * W + m + mode_window)];
      for (const auto& v : probes) {
        Image pv;
        for (const auto& [mono, coeff] : v.terms()) pv.emplace_back(mono, intern(coeff));
        Image iv;
        compose(f, m, pv, NP, iv);
        row.push_back(std::move(iv));
      }
    }

  auto fail = [&](const std::string& what, int m, int n, const FilteredVector& v,
                  const FilteredVector& got) {
    entry.status = CheckStatus::Fail;
    entry.witness = what + " at modes (" + std::to_string(m) + "," + std::to_string(n) +
                    ") on probe " + v.str() + ": got " + got.str();
  };
  Image lhs, rhs;
  auto commutator = [&](int fa, int m, int fb, int n, std::size_t p) {
    lhs.clear();
    rhs.clear();
    compose(fa, m, image[static_cast<std::size_t>(fb * W + n + mode_window)][p], N, lhs);
    compose(fb, n, image[static_cast<std::size_t>(fa * W + m + mode_window)][p], N, rhs);
    FilteredVector comm;
    comm.set_precision(N);
    for (const auto& [mono, cid] : lhs) comm.add_term(mono, pool[static_cast<std::size_t>(cid)]);
    for (const auto& [mono, cid] : rhs) comm.add_term(mono, -pool[static_cast<std::size_t>(cid)]);
    return comm;
  };
  // Testing a commutator against zero compares the two composed images for
  // equality instead; identical values share an id, so no coefficient
  // arithmetic is needed.
  auto commutes = [&](int fa, int m, int fb, int n, std::size_t p) {
    const Image& bv = image[static_cast<std::size_t>(fb * W + n + mode_window)][p];
    const Image& av = image[static_cast<std::size_t>(fa * W + m + mode_window)][p];
    if (bv.empty() && av.empty()) return true;
    lhs.clear();
    rhs.clear();
    compose(fa, m, bv, N, lhs);
    compose(fb, n, av, N, rhs);
    if (lhs.size() != rhs.size()) return false;
    for (const auto& t : lhs) {
      bool found = false;
      for (const auto& u : rhs)
        if (u.first == t.first) {
          if (u.second != t.second) return false;
          found = true;
          break;
        }
      if (!found) return false;
    }
    return true;
  };
  // Same-species commutators: [a_k(m), a_j(n)] and [a_j(n), a_k(m)] are the
  // same two compositions with opposite signs, so only one orientation of
  // each (k,m),(j,n) pair is evaluated.
  for (int k = 1; k <= cfg.g; ++k) {
    for (int j = k; j <= cfg.g; ++j) {
      for (int m = -mode_window; m <= mode_window; ++m) {
        for (int n = (k == j ? m : -mode_window); n <= mode_window; ++n) {
          for (std::size_t p = 0; p < probes.size(); ++p) {
            const FilteredVector& v = probes[p];
            if (!commutes(k - 1, m, j - 1, n, p)) {
              fail("[beta_" + std::to_string(k) + ",beta_" + std::to_string(j) + "] != 0",
                   m, n, v, commutator(k - 1, m, j - 1, n, p));
              return entry;
            }
            if (!commutes(cfg.g + k - 1, m, cfg.g + j - 1, n, p)) {
              fail("[gamma_" + std::to_string(k) + ",gamma_" + std::to_string(j) + "] != 0",
                   m, n, v, commutator(cfg.g + k - 1, m, cfg.g + j - 1, n, p));
              return entry;
            }
          }
        }
      }
    }
  }
  for (int k = 1; k <= cfg.g; ++k) {
    for (int j = 1; j <= cfg.g; ++j) {
      for (int m = -mode_window; m <= mode_window; ++m) {
        for (int n = -mode_window; n <= mode_window; ++n) {
          bool delta = (k == j && m + n + 1 == 0);
          for (std::size_t p = 0; p < probes.size(); ++p) {
            const FilteredVector& v = probes[p];
            bool ok;
            if (delta) {
              FilteredVector diff = commutator(k - 1, m, cfg.g + j - 1, n, p);
              for (const auto& [mono, coeff] : v.terms())
                if (mono.max_depth() <= N) diff.add_term(mono, -Scalar::tau() * coeff);
              ok = diff.is_zero();
            } else {
              ok = commutes(k - 1, m, cfg.g + j - 1, n, p);
            }
            if (!ok) {
              fail("[beta_" + std::to_string(k) + ",gamma_" + std::to_string(j) +
                       "] != tau*delta",
                   m, n, v, commutator(k - 1, m, cfg.g + j - 1, n, p));
              return entry;
            }
          }
        }
      }
    }
  }
  entry.status = CheckStatus::Pass;
  return entry;
}

// ---------------------------------------------------------------------------
// Quadratic sp_{2g} fields.
// ---------------------------------------------------------------------------

enum class SpKind { BetaBeta, GammaGamma, BetaGamma };

/// tau^{-1} :a_i(z) b_j(z): — normalised so the bracket structure constants
/// are tau-free.
inline Field sp_quadratic_field(const SymplecticConfig& cfg, SpKind kind, int i, int j) {
  detail::check_species(cfg, i, "sp_quadratic_field");
  detail::check_species(cfg, j, "sp_quadratic_field");
  Field a, b;
  std::string tag;
  switch (kind) {
    case SpKind::BetaBeta:
      a = beta_field(cfg, i);
      b = beta_field(cfg, j);
      tag = "bb";
      break;
    case SpKind::GammaGamma:
      a = gamma_field(cfg, i);
      b = gamma_field(cfg, j);
      tag = "gg";
      break;
    case SpKind::BetaGamma:
      a = beta_field(cfg, i);
      b = gamma_field(cfg, j);
      tag = "bg";
      break;
  }
  Field f = scaled_field(Scalar::tau().inverse(), nproduct(a, b, -1));
  f.name = "sp[" + tag + "," + std::to_string(i) + "," + std::to_string(j) + "]";
  return f;
}

}  // namespace vertop
