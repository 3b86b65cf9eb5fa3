#pragma once

// Suite runner behind the CLI: a shared configuration record, the named check
// suites, and the OPE presentation of a field expression over the generator
// dictionary.

#include <chrono>
#include <random>
#include <string>
#include <vector>

#include "vertop/expr.hpp"
#include "vertop/induced.hpp"
#include "vertop/sp.hpp"

namespace vertop {

struct CheckConfig {
  std::string suite;
  int N = 5;
  int degree = 3;
  int window_lo = -3;
  int window_hi = 3;
  int generation = 1;
  int g = 1;
  int n = 2;
  Rational c{1};
  Scalar level{1};
  unsigned int seed = 0;
  int max_word_len = 3;
  std::string algebra = "sl2";  // sl2 | sl3 | heisenberg
  std::string spec_kind = "vacuum";  // vacuum | gaussian
  std::string format = "json";
  bool timing = false;

  /// Half-width of the symmetric mode window.
  int window() const { return std::max(std::abs(window_lo), std::abs(window_hi)); }

  void validate() const {
    if (N < 1) throw model_error("config: N must be >= 1");
    if (window_lo > window_hi) throw model_error("config: empty mode window");
    if (degree < 0) throw model_error("config: negative degree bound");
    if (g < 1) throw model_error("config: g must be >= 1");
    if (n < 2) throw model_error("config: n must be >= 2");
    if (c <= 0 || !rational_sqrt(c))
      throw model_error("config: c must be a positive rational square");
    if (format != "json" && format != "text")
      throw model_error("config: format must be json or text");
    if (max_word_len < 1) throw model_error("config: max-word-len must be >= 1");
  }

  std::map<std::string, std::string> echo() const {
    return {{"N", std::to_string(N)},
            {"degree", std::to_string(degree)},
            {"window", std::to_string(window_lo) + ".." + std::to_string(window_hi)},
            {"generation", std::to_string(generation)},
            {"g", std::to_string(g)},
            {"n", std::to_string(n)},
            {"c", rational_str(c)},
            {"level", level.str()},
            {"seed", std::to_string(seed)},
            {"max_word_len", std::to_string(max_word_len)},
            {"algebra", algebra},
            {"spec", spec_kind}};
  }
};

inline std::vector<FilteredVector> basis_probes(const ModelSpace& space, int degree,
                                                int depth) {
  std::vector<FilteredVector> out;
  for (const auto& m : enumerate_monomials(space, degree, depth))
    out.push_back(FilteredVector::basis(m));
  return out;
}

// ---------------------------------------------------------------------------
// pi_t checks.
// ---------------------------------------------------------------------------

/// pi_t phi_c = c^{-n/2} phi_c on the n-species rho*c model.
inline ReportEntry check_pi_t_eigenvalue(int n, const Rational& c) {
  ReportEntry entry;
  entry.name = "pi_t_eigenvalue";
  entry.params = {{"n", std::to_string(n)}, {"c", rational_str(c)}};
  ModelSpace space = ModelSpace::gauss_pi(n, c);
  FilteredVector got = apply_primitive(PrimitiveOp::pi_t(), FilteredVector::one(), space);
  FilteredVector want = FilteredVector::one().scaled(Scalar(space.sigma()).pow(n));
  if (!(got == want)) {
    entry.status = CheckStatus::Fail;
    entry.witness = "pi_t 1 = " + got.str() + ", want " + want.str();
    return entry;
  }
  entry.status = CheckStatus::Pass;
  return entry;
}

/// x_{-i} pi_t = pi_t x_{-i-1}, d_{-i} pi_t = pi_t d_{-i-1}, and
/// pi_t^j d_{-i} = 0 for i <= j, exhaustively on basis monomials.
inline ReportEntry check_pi_t_relations(int n, const Rational& c, int degree, int depth) {
  ReportEntry entry;
  entry.name = "pi_t_relations";
  entry.params = {{"n", std::to_string(n)},
                  {"c", rational_str(c)},
                  {"degree", std::to_string(degree)},
                  {"depth", std::to_string(depth)}};
  ModelSpace space = ModelSpace::gauss_pi(n, c);
  auto fail = [&](const std::string& what, const FilteredVector& v) {
    entry.status = CheckStatus::Fail;
    entry.witness = what + " deviates on " + v.str();
  };
  for (const auto& m : enumerate_monomials(space, degree, depth)) {
    FilteredVector v = FilteredVector::basis(m);
    FilteredVector pv = apply_primitive(PrimitiveOp::pi_t(), v, space);
    for (int s = 1; s <= n; ++s) {
      for (int i = 1; i <= depth - 1; ++i) {
        FilteredVector lhs = apply_primitive(PrimitiveOp::mult(s, i), pv, space);
        FilteredVector rhs = apply_primitive(
            PrimitiveOp::pi_t(), apply_primitive(PrimitiveOp::mult(s, i + 1), v, space),
            space);
        if (!(lhs == rhs)) {
          fail("x shift", v);
          return entry;
        }
        lhs = apply_primitive(PrimitiveOp::deriv(s, i), pv, space);
        rhs = apply_primitive(
            PrimitiveOp::pi_t(), apply_primitive(PrimitiveOp::deriv(s, i + 1), v, space),
            space);
        if (!(lhs == rhs)) {
          fail("d shift", v);
          return entry;
        }
      }
      for (int j = 1; j <= 3; ++j) {
        for (int i = 1; i <= j; ++i) {
          FilteredVector w = apply_primitive(PrimitiveOp::deriv(s, i), v, space);
          for (int t = 0; t < j; ++t) w = apply_primitive(PrimitiveOp::pi_t(), w, space);
          if (!w.is_zero()) {
            fail("pi_t^" + std::to_string(j) + " d_{-" + std::to_string(i) + "}", v);
            return entry;
          }
        }
      }
    }
  }
  entry.status = CheckStatus::Pass;
  return entry;
}

// ---------------------------------------------------------------------------
// Dual-field functionals.
// ---------------------------------------------------------------------------

/// Deterministic functionals: random support drawn from monomials shallower
/// than the vanishing depth, with small integer coefficients.
inline std::vector<DualFunctional> random_functionals(const ModelSpace& space, int count,
                                                      int max_vanishing_depth,
                                                      unsigned int seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> depth_dist(1, max_vanishing_depth);
  std::uniform_int_distribution<int> coeff_dist(-3, 3);
  std::vector<DualFunctional> out;
  while (static_cast<int>(out.size()) < count) {
    DualFunctional phi;
    phi.vanishing_depth = depth_dist(rng);
    auto monos = enumerate_monomials(space, 2, phi.vanishing_depth - 1);
    std::uniform_int_distribution<std::size_t> pick(0, monos.size() - 1);
    int support = 1 + static_cast<int>(rng() % 3);
    for (int s = 0; s < support; ++s) {
      int c = coeff_dist(rng);
      if (c == 0) c = 1;
      Monomial m = monos[pick(rng)];
      if (filtration_degree(m) >= phi.vanishing_depth) continue;
      phi.support[m] += Scalar(c);
    }
    if (!phi.is_zero()) out.push_back(std::move(phi));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Suites.
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<Field> symplectic_generators(const SymplecticConfig& cfg) {
  std::vector<Field> out;
  for (int i = 1; i <= cfg.g; ++i) out.push_back(beta_field(cfg, i));
  for (int i = 1; i <= cfg.g; ++i) out.push_back(gamma_field(cfg, i));
  return out;
}

inline std::vector<Field> sp_fields(const SymplecticConfig& cfg) {
  std::vector<Field> out;
  for (SpKind k : {SpKind::BetaBeta, SpKind::BetaGamma, SpKind::GammaGamma})
    for (int i = 1; i <= cfg.g; ++i)
      for (int j = 1; j <= cfg.g; ++j) out.push_back(sp_quadratic_field(cfg, k, i, j));
  return out;
}

}  // namespace detail

inline Report run_suite(const CheckConfig& cfg) {
  cfg.validate();
  Report rep;
  rep.suite = cfg.suite;
  rep.config = cfg.echo();
  const int w = cfg.window();
  auto timed = [&](auto&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    ReportEntry e = fn();
    auto t1 = std::chrono::steady_clock::now();
    e.millis = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    rep.entries.push_back(std::move(e));
  };

  if (cfg.suite == "heisenberg") {
    for (bool twisted : {false, true}) {
      SymplecticConfig sc =
          twisted ? SymplecticConfig::schwartz(cfg.g) : SymplecticConfig::plain(cfg.g);
      auto probes = basis_probes(sc.model, cfg.degree, cfg.N);
      timed([&] { return check_heisenberg_relations(sc, w, probes, cfg.N); });
    }
  } else if (cfg.suite == "betagamma-axioms") {
    for (bool twisted : {false, true}) {
      SymplecticConfig sc =
          twisted ? SymplecticConfig::schwartz(cfg.g) : SymplecticConfig::plain(cfg.g);
      auto probes = basis_probes(sc.model, 2, cfg.N);
      std::vector<Field> fields = detail::symplectic_generators(sc);
      for (auto& f : detail::sp_fields(sc)) fields.push_back(std::move(f));
      for (const Field& f : fields) {
        timed([&] {
          ReportEntry e = check_field_axioms(f, probes, std::min(cfg.N, 3), 3, w);
          e.params["twist"] = sc.model.twist().str();
          return e;
        });
      }
    }
  } else if (cfg.suite == "sp") {
    SymplecticConfig sc = SymplecticConfig::plain(1);
    auto probes = basis_probes(sc.model, 2, 3);
    timed([&] {
      SpBracketReport r = check_sp_bracket_closure(sc, std::min(w, 2), probes, 3);
      r.entry.params["level"] = r.level.str();
      return r.entry;
    });
  } else if (cfg.suite == "sln") {
    SlnConfig ac = SlnConfig::make(cfg.n, cfg.c);
    auto probes = eigen_probes(ac, cfg.generation, cfg.N + 4 * w);
    timed([&] { return check_eigen_relation(ac, probes, cfg.N); });
    timed([&] { return check_affine_bracket(ac, w, cfg.generation, cfg.N); });
  } else if (cfg.suite == "pi-t") {
    for (int n : {1, 2, 3}) {
      for (int c : {1, 4}) {
        timed([&] { return check_pi_t_eigenvalue(n, Rational(c)); });
        timed([&] { return check_pi_t_relations(n, Rational(c), std::min(cfg.degree, 3), 4); });
      }
    }
  } else if (cfg.suite == "borcherds") {
    SymplecticConfig sc = SymplecticConfig::plain(1);
    ModeAlgebra heis = ModeAlgebra::heisenberg(1);
    InducedModule V = InducedModule::make(heis, SubalgebraSpec::vacuum(heis, Scalar(1)));
    std::vector<Field> gens = {memoized_field(beta_field(sc, 1)),
                               memoized_field(gamma_field(sc, 1))};
    auto probes = basis_probes(sc.model, 2, 3);
    std::vector<PBWState> states;
    for (int e = 0; e < 2; ++e)
      for (int m : {-1, -2}) {
        PBWState st;
        st.add({ModeLetter{e, m}}, Scalar(1));
        states.push_back(std::move(st));
      }
    for (const auto& a : states)
      for (const auto& b : states)
        for (int l = -2; l <= 2; ++l)
          timed([&] { return borcherds_check(V, a, b, l, gens, sc.model, probes, 2, 4); });

    SlnConfig ac = SlnConfig::make(2, Rational(1));
    ModeAlgebra sl2 = ModeAlgebra::sln(2);
    InducedModule W2 = InducedModule::make(sl2, SubalgebraSpec::vacuum(sl2, Scalar(1)));
    std::vector<Field> cur;
    for (const auto& a : sln_basis(2))
      cur.push_back(memoized_field(current_field(ac, a, 2)));
    auto all = eigen_probes(ac, 1, 130);
    std::vector<FilteredVector> eprobes(all.begin(),
                                        all.begin() + std::min<std::size_t>(all.size(), 4));
    PBWState evac, fvac;
    evac.add({ModeLetter{0, -1}}, Scalar(1));
    fvac.add({ModeLetter{1, -1}}, Scalar(1));
    timed([&] { return borcherds_check(W2, evac, fvac, 0, cur, ac.model, eprobes, 2, 4); });
  } else if (cfg.suite == "dual") {
    SymplecticConfig sc = SymplecticConfig::plain(cfg.g);
    auto functionals = random_functionals(sc.model, 20, 4, cfg.seed);
    std::vector<Field> fields = detail::symplectic_generators(sc);
    for (auto& f : detail::sp_fields(sc)) fields.push_back(std::move(f));
    for (const Field& f : fields)
      timed([&] { return check_dual_field(f, functionals, 3, cfg.degree); });
  } else if (cfg.suite == "induced-heisenberg") {
    ModeAlgebra heis = ModeAlgebra::heisenberg(cfg.g);
    InducedModule mod = InducedModule::make(heis, SubalgebraSpec::gaussian(cfg.g));
    timed([&] { return check_straighten_confluence(mod, 200, 4, 4, cfg.seed); });
    timed([&] {
      return compare_induced_heisenberg(cfg.g, std::min(cfg.N, 4), cfg.max_word_len, 2);
    });
  } else {
    throw model_error("unknown suite '" + cfg.suite + "'");
  }

  rep.sort_entries();
  return rep;
}

// ---------------------------------------------------------------------------
// OPE presentation over the generator dictionary.
// ---------------------------------------------------------------------------

/// Present the expression's field as an exact combination of dictionary
/// fields (identity, generators, their derivatives, quadratics), solved from
/// the action on basis probes over the mode window.
inline std::string ope_render(const FieldExpr& ast, const CheckConfig& cfg) {
  cfg.validate();
  SymplecticConfig sym = SymplecticConfig::plain(cfg.g);
  SlnConfig sln = SlnConfig::make(cfg.n, cfg.c);
  ExprFamily fam = expr_family(ast);
  Field F = build_field(ast, sym, sln);

  std::vector<Field> dict;
  if (fam == ExprFamily::Affine) {
    dict.push_back(identity_field(sln.model));
    for (const auto& a : sln_basis(sln.n)) {
      dict.push_back(current_field(sln, a));
      dict.push_back(derivative(dict.back()));
    }
  } else {
    dict.push_back(identity_field(sym.model));
    for (Field& f : detail::symplectic_generators(sym)) {
      dict.push_back(f);
      dict.push_back(derivative(f));
    }
    for (Field& f : detail::sp_fields(sym)) dict.push_back(std::move(f));
  }

  auto probes = basis_probes(F.space, 2, std::min(cfg.N, 3));
  const int cols = static_cast<int>(dict.size());
  std::vector<std::vector<Scalar>> rows;
  for (int k = -2; k <= 2; ++k) {
    ModeOp fm = F.mode(k);
    std::vector<ModeOp> dm;
    for (const auto& d : dict) dm.push_back(d.mode(k));
    for (const auto& v : probes) {
      FilteredVector target = fm.apply(v, cfg.N);
      std::vector<FilteredVector> cols_v;
      for (const auto& op : dm) cols_v.push_back(op.apply(v, cfg.N));
      std::map<Monomial, char> coords;
      for (const auto& [m, c] : target.terms()) coords.emplace(m, 0);
      for (const auto& cv : cols_v)
        for (const auto& [m, c] : cv.terms()) coords.emplace(m, 0);
      for (const auto& [m, unused] : coords) {
        std::vector<Scalar> row;
        for (const auto& cv : cols_v) row.push_back(cv.coefficient(m));
        row.push_back(target.coefficient(m));
        rows.push_back(std::move(row));
      }
    }
  }
  LinearSolution sol = solve_linear_system(std::move(rows), cols);
  if (!sol.consistent) return "no closed form over the generator dictionary";
  std::string out;
  for (int i = 0; i < cols; ++i) {
    if (sol.values[i].is_zero()) continue;
    if (!sol.determined[i]) return "underdetermined over the generator dictionary";
    std::string term = sol.values[i] == Scalar(1)
                           ? dict[static_cast<std::size_t>(i)].name
                           : sol.values[i].str() + " * " + dict[static_cast<std::size_t>(i)].name;
    out += out.empty() ? term : " + " + term;
  }
  return out.empty() ? "0" : out;
}

}  // namespace vertop
