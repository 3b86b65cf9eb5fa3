#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "vertop/model.hpp"

using namespace vertop;

namespace {

Monomial mono(std::initializer_list<std::pair<VariableId, int>> fs) {
  Monomial m;
  for (const auto& f : fs) m = m.times(f.first, f.second);
  return m;
}

// Independent oracle for the Gaussian moments: integration by parts gives
// M(2k) = (2k-1)/(2 pi c) * M(2k-2), M(0) = sigma. Frozen against the
// double-factorial closed form used by the engine.
Scalar moment_oracle(int e, const ModelSpace& space) {
  if (e % 2 != 0) return Scalar(0);
  Scalar m = Scalar(space.sigma());
  Scalar twopic = Scalar(2) * Scalar::rho() * Scalar(space.gauss_c());
  for (int j = 2; j <= e; j += 2) m = m * Scalar(j - 1) / twopic;
  return m;
}

}  // namespace

TEST_CASE("filtration degree") {
  CHECK(filtration_degree(mono({{{1, 5}, 1}, {{2, 1}, 1}})) == 4);
  CHECK(filtration_degree(Monomial{}) == 0);
  CHECK(filtration_degree(mono({{{1, 1}, 1}})) == 0);
}

TEST_CASE("truncate") {
  FilteredVector v = FilteredVector::exact(
      {{mono({{{1, 1}, 1}}), Scalar(1)}, {mono({{{1, 4}, 1}}), Scalar(1)}});
  FilteredVector t = v.truncated(3);
  CHECK(t.terms().size() == 1);
  CHECK(t.precision() == 3);
  CHECK(t.coefficient(mono({{{1, 1}, 1}})) == Scalar(1));
  CHECK(t.truncated(3) == t);                    // idempotent
  CHECK(FilteredVector().truncated(5).is_zero());  // 0 @ 5
  CHECK_THROWS_AS(t.truncated(4), precision_error);
}

TEST_CASE("linear combine") {
  FilteredVector v = FilteredVector::basis(mono({{{1, 1}, 1}}));
  FilteredVector zero = linear_combine({{Scalar(1), v}, {Scalar(-1), v}});
  CHECK(zero.is_zero());
  CHECK(zero.is_exact());

  FilteredVector a = v.truncated(3), b = v.truncated(5);
  CHECK(linear_combine({{Scalar(1), a}, {Scalar(1), b}}).precision() == 3);

  FilteredVector sum = linear_combine({{Scalar::tau(), v}, {Scalar::tau(), v}});
  CHECK(sum.coefficient(mono({{{1, 1}, 1}})) == Scalar(2) * Scalar::tau());
}

TEST_CASE("derivative in the plain model") {
  ModelSpace plain = ModelSpace::plain(2);
  FilteredVector sq = FilteredVector::basis(mono({{{1, 1}, 2}}));
  FilteredVector d = apply_primitive(PrimitiveOp::deriv(1, 1), sq, plain);
  CHECK(d == FilteredVector::exact({{mono({{{1, 1}, 1}}), Scalar(2)}}));

  // derivative of an absent variable
  CHECK(apply_primitive(PrimitiveOp::deriv(2, 1), sq, plain).is_zero());
}

TEST_CASE("derivative chain rule in twisted models") {
  ModelSpace half = ModelSpace::gaussian_half(2);
  FilteredVector one = FilteredVector::one();
  FilteredVector d = apply_primitive(PrimitiveOp::deriv(1, 1), one, half);
  // (d/dx)(e^{-x^2/2}) = -x * e^{-x^2/2}
  CHECK(d == FilteredVector::exact({{mono({{{1, 1}, 1}}), Scalar(-1)}}));

  ModelSpace gp = ModelSpace::gauss_pi(1, Rational(4));
  FilteredVector dg = apply_primitive(PrimitiveOp::deriv(1, 2), one, gp);
  CHECK(dg == FilteredVector::exact(
                  {{mono({{{1, 2}, 1}}), Scalar(-8) * Scalar::rho()}}));
}

TEST_CASE("pi_t eigenvalue on the Gaussian") {
  // pi_t phi_c = c^{-n/2} phi_c
  for (int n : {1, 2, 3}) {
    for (int c : {1, 4}) {
      ModelSpace space = ModelSpace::gauss_pi(n, Rational(c));
      FilteredVector r = apply_primitive(PrimitiveOp::pi_t(), FilteredVector::one(), space);
      Scalar lambda = Scalar(space.sigma()).pow(n);
      CHECK(r.coefficient(Monomial{}) == lambda);
      CHECK(r.terms().size() == 1);
    }
  }
}

TEST_CASE("pi_t second moment") {
  // pi_t (x^2 phi_c) = (2 rho c)^{-1} sigma phi_c for n = 1
  ModelSpace space = ModelSpace::gauss_pi(1, Rational(4));
  FilteredVector v = FilteredVector::basis(mono({{{1, 1}, 2}}));
  FilteredVector r = apply_primitive(PrimitiveOp::pi_t(), v, space);
  Scalar expect = (Scalar(2) * Scalar::rho() * Scalar(4)).inverse() * Scalar(space.sigma());
  CHECK(r == FilteredVector::exact({{Monomial{}, expect}}));
}

TEST_CASE("pi_t depth shift") {
  // pi_t (x_{-2} phi_c) = sigma * x_{-1} phi_c; with c = 4 this is (1/2) x_{-1}
  ModelSpace space = ModelSpace::gauss_pi(1, Rational(4));
  FilteredVector v = FilteredVector::basis(mono({{{1, 2}, 1}}));
  FilteredVector r = apply_primitive(PrimitiveOp::pi_t(), v, space);
  CHECK(r == FilteredVector::exact({{mono({{{1, 1}, 1}}), Scalar(Rational(1, 2))}}));
}

TEST_CASE("pi_t moments against the recurrence oracle") {
  ModelSpace space = ModelSpace::gauss_pi(1, Rational(9, 4));
  for (int e = 0; e <= 8; ++e) {
    Monomial m;
    if (e > 0) m = m.times(VariableId{1, 1}, e);
    FilteredVector r = apply_primitive(PrimitiveOp::pi_t(), FilteredVector::basis(m), space);
    CHECK(r.coefficient(Monomial{}) == moment_oracle(e, space));
  }
}

TEST_CASE("pi_t rejects untwisted models") {
  CHECK_THROWS_AS(
      apply_primitive(PrimitiveOp::pi_t(), FilteredVector::one(), ModelSpace::plain(1)),
      model_error);
  CHECK_THROWS_AS(
      apply_primitive(PrimitiveOp::pi_t(), FilteredVector::one(), ModelSpace::gaussian_half(1)),
      model_error);
}

TEST_CASE("pi_t needs positive precision") {
  ModelSpace space = ModelSpace::gauss_pi(1, Rational(1));
  FilteredVector v = FilteredVector::one().truncated(0);
  CHECK_THROWS_AS(apply_primitive(PrimitiveOp::pi_t(), v, space), precision_error);
}

TEST_CASE("gauss_pi model rejects non-squares") {
  CHECK_THROWS_AS(ModelSpace::gauss_pi(1, Rational(2)), model_error);
  CHECK_THROWS_AS(ModelSpace::gauss_pi(1, Rational(-4)), model_error);
}

TEST_CASE("mult image bound is sharp") {
  // multiplying by x_{s,-n} lands in U_{n-1} but not U_n in general
  ModelSpace plain = ModelSpace::plain(1);
  for (int n : {1, 3, 5}) {
    FilteredVector r =
        apply_primitive(PrimitiveOp::mult(1, n), FilteredVector::one(), plain);
    for (const auto& [m, c] : r.terms()) CHECK(m.max_depth() >= n);
    CHECK(filtration_degree(r.terms().begin()->first) == n - 1);
  }
}

TEST_CASE("pi_t relations on the monomial basis") {
  // x_{-i} pi_t = pi_t x_{-i-1},  d_{-i} pi_t = pi_t d_{-i-1},
  // pi_t^j d_{-i} = 0 for i <= j; exhaustive over degree <= 3, depth <= 4.
  ModelSpace space = ModelSpace::gauss_pi(2, Rational(4));
  auto monos = enumerate_monomials(space, 3, 4);
  for (const auto& m : monos) {
    FilteredVector v = FilteredVector::basis(m);
    for (int s = 1; s <= 2; ++s) {
      for (int i = 1; i <= 3; ++i) {
        FilteredVector lhs = apply_primitive(
            PrimitiveOp::mult(s, i), apply_primitive(PrimitiveOp::pi_t(), v, space), space);
        FilteredVector rhs = apply_primitive(
            PrimitiveOp::pi_t(), apply_primitive(PrimitiveOp::mult(s, i + 1), v, space),
            space);
        CHECK(lhs == rhs);

        FilteredVector lhs_d = apply_primitive(
            PrimitiveOp::deriv(s, i), apply_primitive(PrimitiveOp::pi_t(), v, space), space);
        FilteredVector rhs_d = apply_primitive(
            PrimitiveOp::pi_t(), apply_primitive(PrimitiveOp::deriv(s, i + 1), v, space),
            space);
        CHECK(lhs_d == rhs_d);
      }
      // pi_t^j d_{-i} = 0 for i <= j
      for (int j = 1; j <= 3; ++j) {
        for (int i = 1; i <= j; ++i) {
          FilteredVector w = apply_primitive(PrimitiveOp::deriv(s, i), v, space);
          for (int rep = 0; rep < j; ++rep)
            w = apply_primitive(PrimitiveOp::pi_t(), w, space);
          CHECK(w.is_zero());
        }
      }
    }
  }
}

TEST_CASE("precision soundness under two-precision recomputation") {
  ModelSpace space = ModelSpace::gauss_pi(1, Rational(4));
  std::mt19937 rng(7);
  auto monos = enumerate_monomials(space, 3, 6);
  std::uniform_int_distribution<std::size_t> pick(0, monos.size() - 1);
  for (int trial = 0; trial < 50; ++trial) {
    FilteredVector v = linear_combine({{Scalar(2), FilteredVector::basis(monos[pick(rng)])},
                                       {Scalar(-3), FilteredVector::basis(monos[pick(rng)])}});
    // pipeline: mult(1,2) then pi_t; transfer says input precision M gives
    // output precision M-1.
    auto pipeline = [&](const FilteredVector& in) {
      return apply_primitive(PrimitiveOp::pi_t(),
                             apply_primitive(PrimitiveOp::mult(1, 2), in, space), space);
    };
    int N = 3;
    FilteredVector from_m1 = pipeline(v.truncated(N + 1)).truncated(N);
    FilteredVector from_m2 = pipeline(v.truncated(N + 3)).truncated(N);
    FilteredVector from_exact = pipeline(v).truncated(N);
    CHECK(from_m1 == from_m2);
    CHECK(from_m1 == from_exact);
  }
}

TEST_CASE("rendering") {
  Monomial m = mono({{{1, 2}, 3}, {{2, 1}, 1}});
  CHECK(m.str() == "x[1,-2]^3*x[2,-1]");
  FilteredVector v = FilteredVector::basis(m).truncated(4);
  CHECK(v.str() == "x[1,-2]^3*x[2,-1] @ precision 4");
}
