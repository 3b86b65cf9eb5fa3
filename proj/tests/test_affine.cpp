#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vertop/affine.hpp"

using namespace vertop;

namespace {

Monomial mono(std::initializer_list<std::pair<VariableId, int>> fs) {
  Monomial m;
  for (const auto& f : fs) m = m.times(f.first, f.second);
  return m;
}

// Independent route for pi(a t^k): sum the quadratic terms up to a generous
// fixed bound instead of the certificate cutoff.
FilteredVector brute_mode(const SlnConfig& cfg, const SlnElement& a, int k,
                          const FilteredVector& v, int N, int terms) {
  FilteredVector out;
  out.set_precision(N);
  for (int u = 1; u <= cfg.n; ++u) {
    for (int w = 1; w <= cfg.n; ++w) {
      Scalar alpha = a.at(u, w);
      if (alpha.is_zero()) continue;
      for (int i = 1; i <= terms; ++i) {
        FilteredVector piece;
        if (k >= 0) {
          piece = apply_primitive(PrimitiveOp::mult(w, i + k),
                                  apply_primitive(PrimitiveOp::deriv(u, i), v, cfg.model),
                                  cfg.model)
                      .scaled(-alpha);
        } else {
          int j = -k;
          piece = apply_primitive(PrimitiveOp::mult(w, i),
                                  apply_primitive(PrimitiveOp::deriv(u, i + j), v, cfg.model),
                                  cfg.model);
          for (int r = 0; r < j; ++r)
            piece = apply_primitive(PrimitiveOp::pi_t(), piece, cfg.model);
          piece = piece.scaled(-alpha * cfg.lambda.pow(-j));
        }
        for (const auto& [m, c] : piece.terms()) {
          if (m.max_depth() > N) continue;
          out.add_term(m, c);
        }
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("config eigenvalue") {
  CHECK(SlnConfig::make(2, Rational(1)).lambda == Scalar(1));
  CHECK(SlnConfig::make(3, Rational(4)).lambda == Scalar(Rational(1, 8)));
  CHECK(SlnConfig::make(2, Rational(4)).lambda == Scalar(Rational(1, 4)));
  CHECK_THROWS_AS(SlnConfig::make(2, Rational(2)), model_error);
  CHECK_THROWS_AS(SlnConfig::make(1, Rational(1)), model_error);
}

TEST_CASE("matrix algebra") {
  SlnElement e = SlnElement::E(2, 1, 2), f = SlnElement::E(2, 2, 1);
  SlnElement h = SlnElement::cartan(2, 1, 2);
  SlnElement ef = matrix_bracket(e, f);
  CHECK(ef.at(1, 1) == Scalar(1));
  CHECK(ef.at(2, 2) == Scalar(-1));
  CHECK(matrix_bracket(h, e).at(1, 2) == Scalar(2));
  CHECK(trace_form(e, f) == Scalar(1));
  CHECK(trace_form(h, h) == Scalar(2));
  CHECK(trace_form(e, e) == Scalar(0));
  CHECK_THROWS_AS(SlnElement::E(2, 1, 1), model_error);
}

TEST_CASE("nonnegative mode on the Gaussian") {
  SlnConfig cfg = SlnConfig::make(2, Rational(1));
  // pi(E12 t^0) phi = 2 rho c sum_i x^2_{-i} x^1_{-i} phi, truncated at depth 3
  FilteredVector r = sln_mode(cfg, SlnElement::E(2, 1, 2), 0)
                         .apply(FilteredVector::one(), cfg.model, 3);
  Scalar coef = Scalar(2) * Scalar::rho() * Scalar(cfg.c);
  FilteredVector expect = FilteredVector::exact({{mono({{{1, 1}, 1}, {{2, 1}, 1}}), coef},
                                                 {mono({{{1, 2}, 1}, {{2, 2}, 1}}), coef},
                                                 {mono({{{1, 3}, 1}, {{2, 3}, 1}}), coef}});
  CHECK(r == expect.truncated(3));

  // same action with a depth offset of 2 for t^2
  FilteredVector r2 = sln_mode(cfg, SlnElement::E(2, 1, 2), 2)
                          .apply(FilteredVector::one(), cfg.model, 3);
  CHECK(r2 == FilteredVector::exact({{mono({{{1, 1}, 1}, {{2, 3}, 1}}), coef}}).truncated(3));

  // cartan at j = 0: 2 rho c sum_i ((x^1_{-i})^2 - (x^2_{-i})^2)
  FilteredVector rh = sln_mode(cfg, SlnElement::cartan(2, 1, 2), 0)
                          .apply(FilteredVector::one(), cfg.model, 2);
  FilteredVector expect_h = FilteredVector::exact({{mono({{{1, 1}, 2}}), coef},
                                                   {mono({{{2, 1}, 2}}), -coef},
                                                   {mono({{{1, 2}, 2}}), coef},
                                                   {mono({{{2, 2}, 2}}), -coef}});
  CHECK(rh == expect_h.truncated(2));
}

TEST_CASE("modes agree with the wide brute-force expansion") {
  for (const Rational& c : {Rational(1), Rational(4)}) {
    SlnConfig cfg = SlnConfig::make(2, c);
    std::vector<FilteredVector> probes = eigen_probes(cfg, 1, 12);
    std::vector<SlnElement> basis = sln_basis(2);
    for (const auto& a : basis) {
      for (int k = -2; k <= 2; ++k) {
        OperatorSeries s = sln_mode(cfg, a, k);
        for (const auto& v : probes) {
          if (precision_of(v) < std::max(s.required(3), 3 + 12)) continue;
          CHECK(s.apply(v, cfg.model, 3) == brute_mode(cfg, a, k, v, 3, 12));
        }
      }
    }
    // The exact Gaussian is always usable.
    for (const auto& a : basis) {
      for (int k = -2; k <= 2; ++k) {
        CHECK(sln_mode(cfg, a, k).apply(FilteredVector::one(), cfg.model, 4) ==
              brute_mode(cfg, a, k, FilteredVector::one(), 4, 14));
      }
    }
  }
}

TEST_CASE("two-precision soundness of pi_t-composed modes") {
  SlnConfig cfg = SlnConfig::make(2, Rational(4));
  std::vector<FilteredVector> probes = eigen_probes(cfg, 1, 14);
  for (const auto& a : sln_basis(2)) {
    for (int k : {-2, -1}) {
      OperatorSeries s = sln_mode(cfg, a, k);
      int N = 3;
      int M = s.required(N);
      for (const auto& v : probes) {
        if (precision_of(v) < M + 2) continue;
        CHECK(s.apply(v.truncated(M), cfg.model, N) ==
              s.apply(v.truncated(M + 2), cfg.model, N));
      }
    }
  }
}

TEST_CASE("linearity of the action") {
  SlnConfig cfg = SlnConfig::make(2, Rational(1));
  SlnElement e = SlnElement::E(2, 1, 2), h = SlnElement::cartan(2, 1, 2);
  SlnElement combo = e.scaled(Scalar(3)).plus(h.scaled(Scalar(Rational(-1, 2))));
  std::vector<FilteredVector> probes = eigen_probes(cfg, 1, 10);
  for (int k = -2; k <= 2; ++k) {
    OperatorSeries sc = sln_mode(cfg, combo, k);
    OperatorSeries se = sln_mode(cfg, e, k), sh = sln_mode(cfg, h, k);
    for (const auto& v : probes) {
      if (precision_of(v) < sc.required(3)) continue;
      FilteredVector lhs = sc.apply(v, cfg.model, 3);
      FilteredVector rhs = linear_combine({{Scalar(3), se.apply(v, cfg.model, 3)},
                                           {Scalar(Rational(-1, 2)), sh.apply(v, cfg.model, 3)}});
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("eigen-probes stay in the eigenspace") {
  for (int n : {2, 3}) {
    SlnConfig cfg = SlnConfig::make(n, Rational(4));
    std::vector<FilteredVector> probes = eigen_probes(cfg, 1, 6);
    CHECK(probes.size() > 1);
    ReportEntry e = check_eigen_relation(cfg, probes, 6);
    INFO(e.witness.value_or(""));
    CHECK(e.status == CheckStatus::Pass);
  }
}

TEST_CASE("bracket examples") {
  SlnConfig cfg = SlnConfig::make(2, Rational(1));
  SlnElement e = SlnElement::E(2, 1, 2), f = SlnElement::E(2, 2, 1);
  SlnElement h = SlnElement::cartan(2, 1, 2);
  FilteredVector phi = FilteredVector::one();
  int N = 4;

  // [pi(e t^1), pi(f t^-1)] phi = pi(h t^0) phi + phi (level term tr(ef) = 1)
  OperatorSeries e1 = sln_mode(cfg, e, 1), fm1 = sln_mode(cfg, f, -1);
  FilteredVector lhs = linear_combine(
      {{Scalar(1), e1.apply(fm1.apply(phi, cfg.model, e1.required(N)), cfg.model, N)},
       {Scalar(-1), fm1.apply(e1.apply(phi, cfg.model, fm1.required(N)), cfg.model, N)}});
  FilteredVector rhs = linear_combine(
      {{Scalar(1), sln_mode(cfg, h, 0).apply(phi, cfg.model, N)},
       {Scalar(1), phi.truncated(N)}});
  CHECK(lhs == rhs);

  // m = 0: no central term
  OperatorSeries e0 = sln_mode(cfg, e, 0), f0 = sln_mode(cfg, f, 0);
  FilteredVector lhs0 = linear_combine(
      {{Scalar(1), e0.apply(f0.apply(phi, cfg.model, e0.required(N)), cfg.model, N)},
       {Scalar(-1), f0.apply(e0.apply(phi, cfg.model, f0.required(N)), cfg.model, N)}});
  CHECK(lhs0 == sln_mode(cfg, h, 0).apply(phi, cfg.model, N));

  // m + k != 0: central term absent
  OperatorSeries e2 = sln_mode(cfg, e, 2), f3 = sln_mode(cfg, f, 3);
  FilteredVector lhs5 = linear_combine(
      {{Scalar(1), e2.apply(f3.apply(phi, cfg.model, e2.required(N)), cfg.model, N)},
       {Scalar(-1), f3.apply(e2.apply(phi, cfg.model, f3.required(N)), cfg.model, N)}});
  CHECK(lhs5 == sln_mode(cfg, h, 5).apply(phi, cfg.model, N));
}

TEST_CASE("bracket suite, sl2") {
  SlnConfig cfg = SlnConfig::make(2, Rational(1));
  ReportEntry entry = check_affine_bracket(cfg, 2, 1, 4);
  INFO(entry.witness.value_or(""));
  CHECK(entry.status == CheckStatus::Pass);
}

TEST_CASE("bracket suite, sl3 nontrivial lambda") {
  SlnConfig cfg = SlnConfig::make(3, Rational(4));
  ReportEntry entry = check_affine_bracket(cfg, 1, 0, 3);
  INFO(entry.witness.value_or(""));
  CHECK(entry.status == CheckStatus::Pass);
}

TEST_CASE("exploratory run reports without failing") {
  SlnConfig cfg = SlnConfig::make(2, Rational(1));
  ReportEntry entry = explore_affine_bracket(cfg, 1, 1, 2, 2);
  CHECK(entry.status == CheckStatus::Pass);
  CHECK(entry.witness.has_value());
}

TEST_CASE("current fields satisfy the probe-level field conditions") {
  SlnConfig cfg = SlnConfig::make(2, Rational(1));
  // Generation-1 probes need K(N) = N + 5; deep modes down to -(K(3)+2) ask
  // for input precision 3 + 2*10, so generate the orbit well above that.
  std::vector<FilteredVector> probes = eigen_probes(cfg, 1, 25);
  Field f = current_field(cfg, SlnElement::E(2, 1, 2), 1);
  ReportEntry entry = check_field_axioms(f, probes, 3, 2);
  INFO(entry.witness.value_or(""));
  CHECK(entry.status == CheckStatus::Pass);
}

TEST_CASE("the generation-0 certificate fails one generation up") {
  // Sharpness evidence for the generation-dependent certificate: mode -2 of
  // the E12 current is not deep on the image of the Gaussian under t^2.
  SlnConfig cfg = SlnConfig::make(2, Rational(1));
  OperatorSeries gen = sln_mode(cfg, SlnElement::E(2, 2, 1), 2);
  FilteredVector probe = gen.apply(FilteredVector::one(), cfg.model, 9);
  OperatorSeries deep = sln_mode(cfg, SlnElement::E(2, 1, 2), -2);
  FilteredVector image = deep.apply(probe, cfg.model, 1);
  CHECK(image.coefficient(Monomial{}) == Scalar(-2));
}
