#pragma once

// Bracket closure of the quadratic fields E = tau^{-1}:bb:, H = tau^{-1}:bg:,
// F = tau^{-1}:gg: for g = 1: every mode commutator [P(m), Q(n)] is solved
// exactly as alpha_E E(m+n) + alpha_H H(m+n) + alpha_F F(m+n) + kappa m
// delta_{m+n,0} Id, with constants shared across the whole mode window. The
// two central constants must report the same level.

#include <array>
#include <string>
#include <vector>

#include "vertop/betagamma.hpp"
#include "vertop/checks.hpp"
#include "vertop/linalg.hpp"

namespace vertop {

struct SpBracketConstants {
  // alpha[pair][basis] with pair/basis order E, H, F; kappa[pair] central.
  std::array<std::array<Scalar, 3>, 9> alpha;
  std::array<Scalar, 9> kappa;

  static int pair_index(int p, int q) { return 3 * p + q; }
};

struct SpBracketReport {
  ReportEntry entry;
  SpBracketConstants constants;
  Scalar level{0};
};

/// Solve the closure system on the probes and mode window [-w, w] mod U_N.
inline SpBracketReport check_sp_bracket_closure(const SymplecticConfig& cfg, int window,
                                                const std::vector<FilteredVector>& probes,
                                                int N) {
  SpBracketReport rep;
  rep.entry.name = "sp_bracket_closure";
  rep.entry.params = {{"g", std::to_string(cfg.g)},
                      {"twist", cfg.model.twist().str()},
                      {"window", std::to_string(window)},
                      {"N", std::to_string(N)}};
  if (cfg.g != 1) throw model_error("check_sp_bracket_closure: implemented for g = 1");

  std::array<Field, 3> basis = {sp_quadratic_field(cfg, SpKind::BetaBeta, 1, 1),
                                sp_quadratic_field(cfg, SpKind::BetaGamma, 1, 1),
                                sp_quadratic_field(cfg, SpKind::GammaGamma, 1, 1)};
  const char* names[3] = {"E", "H", "F"};

  for (int p = 0; p < 3; ++p) {
    for (int q = 0; q < 3; ++q) {
      // Unknowns: alpha_E, alpha_H, alpha_F, kappa.
      std::vector<std::vector<Scalar>> rows;
      for (int m = -window; m <= window; ++m) {
        for (int n = -window; n <= window; ++n) {
          for (const auto& v : probes) {
            FilteredVector lhs = mode_commutator(basis[p], m, basis[q], n, v, N);
            std::array<FilteredVector, 3> cols;
            for (int c = 0; c < 3; ++c) cols[c] = apply_mode(basis[c], m + n, v, N);
            Scalar central = (m + n == 0) ? Scalar(m) : Scalar(0);
            std::map<Monomial, char> coords;
            for (const auto& [mm, cc] : lhs.terms()) coords.emplace(mm, 0);
            for (const auto& col : cols)
              for (const auto& [mm, cc] : col.terms()) coords.emplace(mm, 0);
            if (!central.is_zero())
              for (const auto& [mm, cc] : v.terms())
                if (filtration_degree(mm) < N) coords.emplace(mm, 0);
            for (const auto& [mm, unused] : coords) {
              std::vector<Scalar> row;
              for (int c = 0; c < 3; ++c) row.push_back(cols[c].coefficient(mm));
              row.push_back(central * v.coefficient(mm));
              row.push_back(lhs.coefficient(mm));
              rows.push_back(std::move(row));
            }
          }
        }
      }
      LinearSolution sol = solve_linear_system(std::move(rows), 4);
      std::string tag = std::string("[") + names[p] + "," + names[q] + "]";
      if (!sol.consistent) {
        rep.entry.status = CheckStatus::Fail;
        rep.entry.witness = tag + " does not close over {E, H, F, center}";
        return rep;
      }
      for (int c = 0; c < 4; ++c) {
        if (!sol.determined[c] && !sol.values[c].is_zero()) {
          rep.entry.status = CheckStatus::Fail;
          rep.entry.witness = tag + ": underdetermined structure constant";
          return rep;
        }
      }
      int idx = SpBracketConstants::pair_index(p, q);
      for (int c = 0; c < 3; ++c) rep.constants.alpha[idx][c] = sol.values[c];
      rep.constants.kappa[idx] = sol.values[3];
    }
  }

  // Antisymmetry of the solved table. In the m delta_{m+n,0} parametrization
  // the central constant is symmetric: swapping the pair replaces m by n = -m.
  for (int p = 0; p < 3; ++p) {
    for (int q = 0; q < 3; ++q) {
      int pq = SpBracketConstants::pair_index(p, q);
      int qp = SpBracketConstants::pair_index(q, p);
      bool ok = rep.constants.kappa[pq] == rep.constants.kappa[qp];
      for (int c = 0; c < 3; ++c)
        ok = ok && rep.constants.alpha[pq][c] == -rep.constants.alpha[qp][c];
      if (!ok) {
        rep.entry.status = CheckStatus::Fail;
        rep.entry.witness = std::string("bracket table not antisymmetric at [") +
                            names[p] + "," + names[q] + "]";
        return rep;
      }
    }
  }

  // Level: under e = E, h = -H, f = -F/4 the central constants give
  // kappa_EF = -4 level and kappa_HH = 2 level; the two must agree.
  Scalar from_ef = rep.constants.kappa[SpBracketConstants::pair_index(0, 2)] *
                   Scalar(Rational(-1, 4));
  Scalar from_hh = rep.constants.kappa[SpBracketConstants::pair_index(1, 1)] *
                   Scalar(Rational(1, 2));
  if (!(from_ef == from_hh)) {
    rep.entry.status = CheckStatus::Fail;
    rep.entry.witness = "central terms disagree on the level: " + from_ef.str() +
                        " vs " + from_hh.str();
    return rep;
  }
  rep.level = from_ef;
  rep.entry.status = CheckStatus::Pass;
  return rep;
}

}  // namespace vertop
