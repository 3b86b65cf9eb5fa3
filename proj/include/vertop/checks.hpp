#pragma once

// Field-level verification: locality as vanishing of binomial-weighted mode
// commutators, the two field conditions of a mode family (continuity by
// two-precision recomputation, deep images on probe families), and the
// restricted-dual construction.

#include <string>
#include <vector>

#include "vertop/field.hpp"
#include "vertop/report.hpp"

namespace vertop {

/// [a_(m), b_(n)] v exactly mod U_N.
inline FilteredVector mode_commutator(const Field& a, int m, const Field& b, int n,
                                      const FilteredVector& v, int N) {
  ModeOp am = a.mode(m), bn = b.mode(n);
  FilteredVector ab = am.apply(bn.apply(v, am.required(N)), N);
  FilteredVector ba = bn.apply(am.apply(v, bn.required(N)), N);
  return linear_combine({{Scalar(1), ab}, {Scalar(-1), ba}});
}

/// sum_s (-1)^s C(order,s) [a_(m-s), b_(k+s)] v — zero for all (m,k) iff the
/// fields are local of the given order on v.
inline FilteredVector locality_defect(const Field& a, const Field& b, int order, int m,
                                      int k, const FilteredVector& v, int N) {
  std::vector<std::pair<Scalar, FilteredVector>> parts;
  for (int s = 0; s <= order; ++s) {
    Scalar c = binomial(order, s) * Scalar(s % 2 == 0 ? 1 : -1);
    parts.emplace_back(c, mode_commutator(a, m - s, b, k + s, v, N));
  }
  return linear_combine(parts);
}

inline ReportEntry check_locality(const Field& a, const Field& b, int order,
                                  const std::vector<FilteredVector>& probes, int window,
                                  int N) {
  ReportEntry entry;
  entry.name = "locality";
  entry.params = {{"a", a.name}, {"b", b.name}, {"order", std::to_string(order)},
                  {"window", std::to_string(window)}, {"N", std::to_string(N)}};
  for (int m = -window; m <= window; ++m) {
    for (int k = -window; k <= window; ++k) {
      for (const auto& v : probes) {
        FilteredVector defect = locality_defect(a, b, order, m, k, v, N);
        if (!defect.is_zero()) {
          entry.status = CheckStatus::Fail;
          entry.witness = "modes (" + std::to_string(m) + "," + std::to_string(k) +
                          ") probe " + v.str() + ": defect " + defect.str();
          return entry;
        }
      }
    }
  }
  entry.status = CheckStatus::Pass;
  return entry;
}

/// Smallest order in 0..max_order at which (a, b) pass locality on the
/// probes, or nullopt.
inline std::optional<int> locality_order(const Field& a, const Field& b,
                                         const std::vector<FilteredVector>& probes,
                                         int window, int N, int max_order) {
  for (int order = 0; order <= max_order; ++order) {
    if (check_locality(a, b, order, probes, window, N).status == CheckStatus::Pass)
      return order;
  }
  return std::nullopt;
}

/// Field conditions on probe families: condition (2) via the deep-image certificate
/// (modes -k for k in [K(N), K(N)+margin] land in U_N), condition (1) via
/// two-precision recomputation of sampled modes.
inline ReportEntry check_field_axioms(const Field& f, const std::vector<FilteredVector>& probes,
                                      int N_max, int margin, int mode_window = 3) {
  ReportEntry entry;
  entry.name = "field_axioms";
  entry.params = {{"field", f.name}, {"N_max", std::to_string(N_max)},
                  {"margin", std::to_string(margin)}};
  for (int N = 1; N <= N_max; ++N) {
    int K = f.deep_K(N);
    for (int k = K; k <= K + margin; ++k) {
      ModeOp op = f.mode(-k);
      for (const auto& v : probes) {
        if (precision_of(v) < op.required(N)) continue;
        // The image mod U_N only depends on the input mod the op's required
        // precision; truncating first keeps deep probes cheap.
        FilteredVector image = op.apply(v.truncated(op.required(N)), N);
        if (!image.is_zero()) {
          entry.status = CheckStatus::Fail;
          entry.witness = "condition (2): mode " + std::to_string(-k) + " at N=" +
                          std::to_string(N) + " probe " + v.str() + ": image " +
                          image.str();
          return entry;
        }
      }
    }
  }
  // Condition (1): recomputing through two input truncations and the exact
  // input agrees mod U_N.
  for (int k = -mode_window; k <= mode_window; ++k) {
    ModeOp op = f.mode(k);
    int N = N_max;
    int M = op.required(N);
    for (const auto& v : probes) {
      if (!v.is_exact() && *v.precision() < M + 2) continue;
      FilteredVector r1 = op.apply(v.truncated(M), N);
      FilteredVector r2 = op.apply(v.truncated(M + 2), N);
      FilteredVector r3 = v.is_exact() ? op.apply(v, N) : r2;
      if (!(r1 == r2) || !(r2 == r3)) {
        entry.status = CheckStatus::Fail;
        entry.witness = "condition (1): mode " + std::to_string(k) + " probe " + v.str() +
                        ": truncation-dependent result";
        return entry;
      }
    }
  }
  entry.status = CheckStatus::Pass;
  return entry;
}

// ---------------------------------------------------------------------------
// Restricted dual.
// ---------------------------------------------------------------------------

/// Continuous functional: finite support, kills U_{vanishing_depth}.
struct DualFunctional {
  std::map<Monomial, Scalar> support;
  int vanishing_depth = 1;

  Scalar pair(const FilteredVector& v) const {
    if (precision_of(v) < vanishing_depth)
      throw precision_error(vanishing_depth, precision_of(v), "DualFunctional::pair");
    Scalar out(0);
    for (const auto& [m, c] : support) out += c * v.coefficient(m);
    return out;
  }

  bool is_zero() const { return support.empty(); }
};

/// phi . a_(n), restricted to monomials of degree <= degree_bound. The result
/// kills U_D with D the continuity modulus of a_(n) at phi's vanishing depth.
inline DualFunctional dual_mode(const Field& a, int n, const DualFunctional& phi,
                                int degree_bound) {
  ModeOp op = a.mode(n);
  DualFunctional out;
  out.vanishing_depth = op.continuity(phi.vanishing_depth);
  for (const auto& m : enumerate_monomials(a.space, degree_bound, out.vanishing_depth)) {
    Scalar val = phi.pair(op.apply(FilteredVector::basis(m), phi.vanishing_depth));
    if (!val.is_zero()) out.support.emplace(m, val);
  }
  return out;
}

/// Dual-field statement at probe level: for every functional, the duals of deep
/// creation modes vanish from the certificate bound onwards.
inline ReportEntry check_dual_field(const Field& f, const std::vector<DualFunctional>& functionals,
                                    int margin, int degree_bound) {
  ReportEntry entry;
  entry.name = "dual_field";
  entry.params = {{"field", f.name}, {"margin", std::to_string(margin)}};
  for (const auto& phi : functionals) {
    int bound = f.deep_K(phi.vanishing_depth);
    for (int k = bound; k <= bound + margin; ++k) {
      DualFunctional d = dual_mode(f, -k, phi, degree_bound);
      if (!d.is_zero()) {
        entry.status = CheckStatus::Fail;
        entry.witness = "dual of mode " + std::to_string(-k) +
                        " nonzero for functional with vanishing depth " +
                        std::to_string(phi.vanishing_depth);
        return entry;
      }
    }
  }
  entry.status = CheckStatus::Pass;
  return entry;
}

}  // namespace vertop
