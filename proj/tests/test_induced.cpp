#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vertop/induced.hpp"

using namespace vertop;

namespace {

// sln_basis(2) order: e = E[1,2], f = E[2,1], h = H[1,2].
constexpr int kE = 0, kF = 1, kH = 2;

PBWState normal(std::initializer_list<ModeLetter> letters, Scalar c = Scalar(1)) {
  PBWState st;
  st.add(Word(letters), c);
  return st;
}

std::vector<FilteredVector> basis_probes(const ModelSpace& space, int degree, int depth) {
  std::vector<FilteredVector> out;
  for (const auto& m : enumerate_monomials(space, degree, depth))
    out.push_back(FilteredVector::basis(m));
  return out;
}

}  // namespace

TEST_CASE("sl2 mode algebra structure constants") {
  ModeAlgebra alg = ModeAlgebra::sln(2);
  REQUIRE(alg.dim == 3);

  // [e(1), f(-1)] = h(0) + 1*tr(ef) K
  AlgElement b = alg.bracket(kE, 1, kF, -1);
  auto terms = b.collected();
  REQUIRE(terms.size() == 1);
  CHECK(terms.at({kH, 0}) == Scalar(1));
  CHECK(b.central == Scalar(1));

  // [h(0), e(2)] = 2 e(2), no central part
  AlgElement he = alg.bracket(kH, 0, kE, 2);
  CHECK(he.collected().at({kE, 2}) == Scalar(2));
  CHECK(he.central.is_zero());

  // [e(2), f(-2)] central term is 2
  CHECK(alg.bracket(kE, 2, kF, -2).central == Scalar(2));
  // off-diagonal mode sum: no central term
  CHECK(alg.bracket(kE, 2, kF, -1).central.is_zero());
}

TEST_CASE("sl3 mode algebra passes its construction checks") {
  ModeAlgebra alg = ModeAlgebra::sln(3);
  CHECK(alg.dim == 8);
  // [E12, E23] = E13
  int e12 = -1, e23 = -1, e13 = -1;
  for (int i = 0; i < alg.dim; ++i) {
    if (alg.names[static_cast<std::size_t>(i)] == "E[1,2]") e12 = i;
    if (alg.names[static_cast<std::size_t>(i)] == "E[2,3]") e23 = i;
    if (alg.names[static_cast<std::size_t>(i)] == "E[1,3]") e13 = i;
  }
  AlgElement b = alg.bracket(e12, 0, e23, 0);
  CHECK(b.collected().at({e13, 0}) == Scalar(1));
}

TEST_CASE("heisenberg mode algebra pairing") {
  ModeAlgebra alg = ModeAlgebra::heisenberg(2);
  REQUIRE(alg.dim == 4);
  // [b_1(m), c_1(-m-1)] = tau K
  CHECK(alg.bracket(0, 3, 2, -4).central == Scalar::tau());
  CHECK(alg.bracket(2, -4, 0, 3).central == -Scalar::tau());
  // species mismatch and wrong mode sum vanish
  CHECK(alg.bracket(0, 3, 3, -4).central.is_zero());
  CHECK(alg.bracket(0, 3, 2, -3).central.is_zero());
  CHECK(alg.bracket(0, 3, 1, -4).central.is_zero());
}

TEST_CASE("tampered structure constants fail validation") {
  ModeAlgebra alg = ModeAlgebra::sln(2);
  alg.structure[kE][kF][kH] = Scalar(2);  // breaks antisymmetry against [f,e]
  CHECK_THROWS_AS(alg.validate(1), model_error);
}

TEST_CASE("vacuum straightening") {
  ModeAlgebra alg = ModeAlgebra::sln(2);

  SUBCASE("e(1) f(-1) vac = k vac") {
    for (Scalar k : {Scalar(1), Scalar(Rational(5, 2))}) {
      SubalgebraSpec spec = SubalgebraSpec::vacuum(alg, k);
      PBWState st = straighten(alg, spec, {{kE, 1}, {kF, -1}});
      CHECK(st == normal({}, k));
    }
  }

  SUBCASE("annihilators act as zero") {
    SubalgebraSpec spec = SubalgebraSpec::vacuum(alg, Scalar(1));
    CHECK(straighten(alg, spec, {{kE, 0}}).is_zero());
    CHECK(straighten(alg, spec, {{kH, 3}}).is_zero());
    CHECK(straighten(alg, spec, {{kE, -1}, {kH, -1}, {kF, 2}}).is_zero());
  }

  SUBCASE("one transposition with bracket correction") {
    SubalgebraSpec spec = SubalgebraSpec::vacuum(alg, Scalar(1));
    // f(-1) e(-2) vac = e(-2) f(-1) vac + [f,e](-3) vac
    PBWState st = straighten(alg, spec, {{kF, -1}, {kE, -2}});
    CHECK(st.coefficient({{kE, -2}, {kF, -1}}) == Scalar(1));
    CHECK(st.coefficient({{kH, -3}}) == Scalar(-1));
    CHECK(st.terms.size() == 2);
  }

  SUBCASE("truncation drops words beyond the target depth") {
    SubalgebraSpec spec = SubalgebraSpec::vacuum(alg, Scalar(1));
    PBWState st = straighten(alg, spec, {{kF, -1}, {kE, -2}}, Scalar(1), 2);
    CHECK(st.coefficient({{kE, -2}, {kF, -1}}) == Scalar(1));
    CHECK(st.terms.size() == 1);
    CHECK(st.precision == 2);
  }
}

TEST_CASE("gaussian spec rewrites nonnegative modes to creation modes") {
  ModeAlgebra alg = ModeAlgebra::heisenberg(1);
  SubalgebraSpec spec = SubalgebraSpec::gaussian(1);
  Scalar ti = Scalar::tau().inverse();
  // c(0) vac = tau^{-1} b(-1) vac, b(0) vac = -tau^{-1} c(-1) vac
  CHECK(straighten(alg, spec, {{1, 0}}) == normal({{0, -1}}, ti));
  CHECK(straighten(alg, spec, {{0, 0}}) == normal({{1, -1}}, -ti));
  // b(2) vac = -tau^{-1} c(-3) vac
  CHECK(straighten(alg, spec, {{0, 2}}) == normal({{1, -3}}, -ti));
  // annihilator combination dies
  PBWState a = straighten(alg, spec, {{0, -1}}, -ti);
  PBWState b = straighten(alg, spec, {{1, 0}});
  for (const auto& [w, c] : b.terms) a.add(w, c);
  CHECK(a.is_zero());
}

TEST_CASE("induce runs sanity checks") {
  ModeAlgebra alg = ModeAlgebra::sln(2);
  CHECK_NOTHROW(InducedModule::make(alg, SubalgebraSpec::vacuum(alg, Scalar(1))));
  CHECK_NOTHROW(InducedModule::make(ModeAlgebra::heisenberg(1), SubalgebraSpec::gaussian(1)));

  // An annihilator inside g[t^-1]t^-1 violates the depth gap.
  SubalgebraSpec bad = SubalgebraSpec::vacuum(alg, Scalar(1));
  bad.annihilators = [](int) {
    return std::vector<AlgElement>{AlgElement::single(Scalar(1), kE, -1)};
  };
  CHECK_THROWS_AS(InducedModule::make(alg, bad), model_error);

  // A nonzero character on a nonneg mode is inconsistent with the bracket.
  SubalgebraSpec off = SubalgebraSpec::vacuum(alg, Scalar(1));
  off.vacuum_image = [](int elem, int mode) {
    AlgElement out;
    if (elem == kE && mode == 0) out.central = Scalar(1);
    return out;
  };
  CHECK_THROWS_AS(InducedModule::make(alg, off), model_error);
}

TEST_CASE("module apply tracks precision across nonnegative modes") {
  ModeAlgebra alg = ModeAlgebra::sln(2);
  InducedModule mod = InducedModule::make(alg, SubalgebraSpec::vacuum(alg, Scalar(1)));
  PBWState st = straighten(alg, mod.spec, {{kE, -1}, {kF, -2}}, Scalar(1), 4);
  PBWState up = mod.apply(kH, 2, st);
  CHECK(up.precision == 2);
  PBWState down = mod.apply(kE, -1, st);
  CHECK(down.precision == 4);
}

TEST_CASE("straightening is confluent") {
  ModeAlgebra sl2 = ModeAlgebra::sln(2);
  InducedModule vac = InducedModule::make(sl2, SubalgebraSpec::vacuum(sl2, Scalar(1)));
  CHECK(check_straighten_confluence(vac, 200, 4, 4, 7).status == CheckStatus::Pass);

  InducedModule gauss =
      InducedModule::make(ModeAlgebra::heisenberg(1), SubalgebraSpec::gaussian(1));
  CHECK(check_straighten_confluence(gauss, 200, 4, 4, 11).status == CheckStatus::Pass);
}

TEST_CASE("pbw independence and filtration structure") {
  ModeAlgebra sl2 = ModeAlgebra::sln(2);
  InducedModule vac = InducedModule::make(sl2, SubalgebraSpec::vacuum(sl2, Scalar(1)));
  CHECK(check_pbw_independence(vac, 2, 2).status == CheckStatus::Pass);
  CHECK(check_depth_filtration(vac, 3, 3, 13).status == CheckStatus::Pass);

  InducedModule gauss =
      InducedModule::make(ModeAlgebra::heisenberg(1), SubalgebraSpec::gaussian(1));
  CHECK(check_pbw_independence(gauss, 2, 2).status == CheckStatus::Pass);
  CHECK(check_depth_filtration(gauss, 3, 3, 17).status == CheckStatus::Pass);
}

TEST_CASE("state normal products in the vacuum module") {
  ModeAlgebra alg = ModeAlgebra::sln(2);
  InducedModule V = InducedModule::make(alg, SubalgebraSpec::vacuum(alg, Scalar(1)));
  PBWState evac = normal({{kE, -1}});
  PBWState fvac = normal({{kF, -1}});

  // e_{(-1)}vac (0) f_{(-1)}vac = h_{(-1)}vac
  CHECK(state_nproduct(V, evac, fvac, 0) == normal({{kH, -1}}));
  // l = 1 picks up the central term: k vac
  CHECK(state_nproduct(V, evac, fvac, 1) == normal({}, Scalar(1)));
  // a_(l) vac = 0 for l >= 0
  for (int l = 0; l <= 2; ++l)
    CHECK(state_nproduct(V, evac, PBWState::vacuum(), l).is_zero());
  // a_(-1) vac = a
  PBWState word = straighten(alg, V.spec, {{kE, -2}, {kF, -1}});
  CHECK(state_nproduct(V, word, PBWState::vacuum(), -1) == word);
  // vac is the unit: vac_(-1) b = b, vac_(l != -1) b = 0
  CHECK(state_nproduct(V, PBWState::vacuum(), word, -1) == word);
  CHECK(state_nproduct(V, PBWState::vacuum(), word, 1).is_zero());
}

TEST_CASE("reconstruction maps states to fields") {
  SlnConfig cfg = SlnConfig::make(2, Rational(1));
  ModeAlgebra alg = ModeAlgebra::sln(2);
  InducedModule V = InducedModule::make(alg, SubalgebraSpec::vacuum(alg, Scalar(1)));
  std::vector<Field> gens;
  for (const auto& a : sln_basis(2)) gens.push_back(current_field(cfg, a, 2));

  const int N = 3;
  std::vector<FilteredVector> probes = eigen_probes(cfg, 1, 40);

  SUBCASE("vacuum reconstructs to the identity field") {
    Field id = reconstruct_field(PBWState::vacuum(), gens, cfg.model);
    for (const auto& v : probes) {
      CHECK(id.mode(-1).apply(v, N) == v.truncated(N));
      CHECK(id.mode(0).apply(v, N).is_zero());
      CHECK(id.mode(-2).apply(v, N).is_zero());
    }
  }

  SUBCASE("generator state reconstructs to the generator field") {
    Field rec = reconstruct_field(normal({{kE, -1}}), gens, cfg.model);
    for (int k = -2; k <= 2; ++k) {
      ModeOp rm = rec.mode(k), cm = gens[kE].mode(k);
      for (const auto& v : probes) {
        if (precision_of(v) < std::max(rm.required(N), cm.required(N))) continue;
        CHECK(rm.apply(v, N) == cm.apply(v, N));
      }
    }
  }

  SUBCASE("translation compatibility: e_{(-2)}vac is the field derivative") {
    Field rec = reconstruct_field(normal({{kE, -2}}), gens, cfg.model);
    Field der = derivative(gens[kE]);
    for (int k = -2; k <= 2; ++k) {
      ModeOp rm = rec.mode(k), dm = der.mode(k);
      for (const auto& v : probes) {
        if (precision_of(v) < std::max(rm.required(N), dm.required(N))) continue;
        CHECK(rm.apply(v, N) == dm.apply(v, N));
      }
    }
  }

  SUBCASE("nonnegative letters are not reconstructible") {
    CHECK_THROWS_AS(reconstruct_field(normal({{kE, 1}}), gens, cfg.model), model_error);
  }
}

TEST_CASE("borcherds identity for the beta-gamma realization") {
  SymplecticConfig cfg = SymplecticConfig::plain(1);
  ModeAlgebra alg = ModeAlgebra::heisenberg(1);
  InducedModule V = InducedModule::make(alg, SubalgebraSpec::vacuum(alg, Scalar(1)));
  std::vector<Field> gens = {beta_field(cfg, 1), gamma_field(cfg, 1)};
  std::vector<FilteredVector> probes = basis_probes(cfg.model, 2, 3);

  PBWState bvac = normal({{0, -1}});
  PBWState cvac = normal({{1, -1}});
  for (int l : {-2, -1, 0, 1}) {
    ReportEntry e = borcherds_check(V, bvac, cvac, l, gens, cfg.model, probes, 2, 4);
    INFO(e.witness.value_or(""));
    CHECK(e.status == CheckStatus::Pass);
  }
  // vacuum as the left state: both sides reduce to the field of b
  ReportEntry e =
      borcherds_check(V, PBWState::vacuum(), bvac, -1, gens, cfg.model, probes, 2, 4);
  CHECK(e.status == CheckStatus::Pass);
  // a depth-2 state
  ReportEntry e2 = borcherds_check(V, normal({{0, -2}}), cvac, -1, gens, cfg.model,
                                   probes, 2, 4);
  CHECK(e2.status == CheckStatus::Pass);
}

TEST_CASE("borcherds identity for level-1 sl2 currents") {
  SlnConfig cfg = SlnConfig::make(2, Rational(1));
  ModeAlgebra alg = ModeAlgebra::sln(2);
  InducedModule V = InducedModule::make(alg, SubalgebraSpec::vacuum(alg, Scalar(1)));
  std::vector<Field> gens;
  for (const auto& a : sln_basis(2)) gens.push_back(current_field(cfg, a, 2));

  std::vector<FilteredVector> all = eigen_probes(cfg, 1, 130);
  std::vector<FilteredVector> probes(all.begin(), all.begin() + std::min<std::size_t>(all.size(), 4));

  ReportEntry e = borcherds_check(V, normal({{kE, -1}}), normal({{kF, -1}}), 0, gens,
                                  cfg.model, probes, 2, 4);
  INFO(e.witness.value_or(""));
  CHECK(e.status == CheckStatus::Pass);
}

TEST_CASE("induced gaussian module matches the twist-1/2 model") {
  ReportEntry e = compare_induced_heisenberg(1, 4);
  INFO(e.witness.value_or(""));
  CHECK(e.status == CheckStatus::Pass);
  CHECK(e.params.at("measured_level") == "1");

  ReportEntry e2 = compare_induced_heisenberg(2, 3, 2);
  CHECK(e2.status == CheckStatus::Pass);
}
