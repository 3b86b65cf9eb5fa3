#pragma once

// Operator series: possibly infinite sums of scalar-weighted compositions of
// primitive operators, with certificates making truncation sound:
//  - cutoff(N, M): term index bound past which terms only contribute in U_N,
//  - required(N): input precision needed for output exact mod U_N,
//  - continuity(N): modulus P with series(U_P) contained in U_N.

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "vertop/model.hpp"

namespace vertop {

constexpr int kExactPrecision = std::numeric_limits<int>::max() / 4;

inline int precision_of(const FilteredVector& v) {
  return v.precision() ? *v.precision() : kExactPrecision;
}

/// One summand: coeff * ops[0] . ops[1] . ... (rightmost acts first).
struct OpTerm {
  Scalar coeff;
  std::vector<PrimitiveOp> ops;

  FilteredVector apply(const FilteredVector& v, const ModelSpace& space) const {
    FilteredVector r = v;
    for (auto it = ops.rbegin(); it != ops.rend(); ++it)
      r = apply_primitive(*it, r, space);
    return r.scaled(coeff);
  }

  int pi_t_count() const {
    int n = 0;
    for (const auto& op : ops) n += op.kind == PrimitiveOp::Kind::PiT;
    return n;
  }

  /// Continuity modulus of the composition: input in U_P maps into U_N.
  int continuity(int N) const {
    int p = N;
    for (const auto& op : ops) {
      switch (op.kind) {
        case PrimitiveOp::Kind::Mult: break;
        case PrimitiveOp::Kind::Deriv: p = std::max(p, op.var.depth); break;
        case PrimitiveOp::Kind::PiT: p += 1; break;
      }
    }
    return p;
  }
};

/// One indexed family of terms with its own certificates. A shared pi_t
/// prefix common to all terms goes into `outer_shift`: the termwise sum is
/// formed mod U_{N+outer_shift} and pi_t is applied that many times once,
/// instead of once per term.
struct SeriesComponent {
  std::function<std::optional<OpTerm>(int)> term;  // index 0, 1, 2, ...
  std::function<int(int N, int M)> cutoff;         // term-count bound
  std::function<int(int N)> required;              // input precision for output N
  std::function<int(int N)> continuity;
  int outer_shift = 0;                             // shared pi_t applications

  static SeriesComponent finite(std::vector<OpTerm> terms) {
    auto data = std::make_shared<std::vector<OpTerm>>(std::move(terms));
    SeriesComponent c;
    c.term = [data](int i) -> std::optional<OpTerm> {
      if (i < 0 || i >= static_cast<int>(data->size())) return std::nullopt;
      return (*data)[static_cast<std::size_t>(i)];
    };
    c.cutoff = [data](int, int) { return static_cast<int>(data->size()); };
    c.required = [data](int N) {
      int r = N;
      for (const auto& t : *data) {
        int need = N + t.pi_t_count();
        for (const auto& op : t.ops)
          if (op.kind == PrimitiveOp::Kind::Deriv) need = std::max(need, op.var.depth);
        r = std::max(r, need);
      }
      return r;
    };
    c.continuity = [data](int N) {
      int p = N;
      for (const auto& t : *data) p = std::max(p, t.continuity(N));
      return p;
    };
    return c;
  }
};

/// Sum of components; houses both the finite primitive-mode operators and the
/// infinite sums appearing in the current actions.
struct OperatorSeries {
  std::vector<SeriesComponent> components;

  static OperatorSeries single(OpTerm t) {
    OperatorSeries s;
    s.components.push_back(SeriesComponent::finite({std::move(t)}));
    return s;
  }
  static OperatorSeries zero() { return {}; }
  static OperatorSeries identity() {
    return single(OpTerm{Scalar(1), {}});
  }
  static OperatorSeries scalar_identity(const Scalar& c) {
    return single(OpTerm{c, {}});
  }

  OperatorSeries& operator+=(const OperatorSeries& o) {
    components.insert(components.end(), o.components.begin(), o.components.end());
    return *this;
  }

  int required(int N) const {
    int r = N;
    for (const auto& c : components) r = std::max(r, c.required(N));
    return r;
  }
  int continuity(int N) const {
    int p = N;
    for (const auto& c : components) p = std::max(p, c.continuity(N));
    return p;
  }

  /// Apply exactly mod U_N. `extra_cutoff` extends every component's term
  /// bound; used by the cutoff-soundness property tests.
  FilteredVector apply(const FilteredVector& v, const ModelSpace& space, int N,
                       int extra_cutoff = 0) const {
    int M = precision_of(v);
    int need = required(N);
    if (M < need) throw precision_error(need, M, "OperatorSeries::apply");
    FilteredVector out;
    out.set_precision(N);
    for (const auto& comp : components) {
      int bound = comp.cutoff(N, M) + extra_cutoff;
      int target = N + comp.outer_shift;
      FilteredVector acc;
      acc.set_precision(target);
      for (int i = 0; i < bound; ++i) {
        auto t = comp.term(i);
        if (!t) break;
        FilteredVector piece = t->apply(v, space);
        for (const auto& [m, c] : piece.terms()) {
          if (m.max_depth() > target) continue;
          acc.add_term(m, c);
        }
      }
      for (int s = 0; s < comp.outer_shift; ++s)
        acc = apply_primitive(PrimitiveOp::pi_t(), acc, space);
      for (const auto& [m, c] : acc.terms()) {
        if (m.max_depth() > N) continue;
        out.add_term(m, c);
      }
    }
    return out;
  }
};

}  // namespace vertop
