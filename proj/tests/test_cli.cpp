#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "vertop/suites.hpp"

using namespace vertop;

namespace {

FieldExpr random_expr(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> kind(0, depth > 0 ? 7 : 5);
  std::uniform_int_distribution<int> idx(1, 3);
  std::uniform_int_distribution<int> nn(-3, 3);
  switch (kind(rng)) {
    case 0: return FieldExpr::id();
    case 1: return FieldExpr::beta(idx(rng));
    case 2: return FieldExpr::gamma(idx(rng));
    case 3: {
      SpKind kinds[3] = {SpKind::BetaBeta, SpKind::BetaGamma, SpKind::GammaGamma};
      return FieldExpr::sp(kinds[rng() % 3], idx(rng), idx(rng));
    }
    case 4: return FieldExpr::current(idx(rng), idx(rng));
    case 5: return FieldExpr::cartan(idx(rng), idx(rng));
    case 6: return FieldExpr::deriv(random_expr(rng, depth - 1));
    default:
      return FieldExpr::nprod(random_expr(rng, depth - 1), random_expr(rng, depth - 1),
                              nn(rng));
  }
}

}  // namespace

TEST_CASE("expression parse examples") {
  FieldExpr e = parse_field_expr("nprod(beta[1],gamma[1],-1)");
  CHECK(e == FieldExpr::nprod(FieldExpr::beta(1), FieldExpr::gamma(1), -1));
  CHECK(parse_field_expr("d(id)") == FieldExpr::deriv(FieldExpr::id()));
  CHECK(parse_field_expr("sp[bg,1,2]") == FieldExpr::sp(SpKind::BetaGamma, 1, 2));
  CHECK(parse_field_expr("current[2,1]") == FieldExpr::current(2, 1));
  CHECK(parse_field_expr(" nprod( beta[1] , gamma[1] , 0 ) ") ==
        FieldExpr::nprod(FieldExpr::beta(1), FieldExpr::gamma(1), 0));
}

TEST_CASE("parse errors carry byte offsets") {
  CHECK_THROWS_AS(parse_field_expr("beta[0]"), parse_error);
  try {
    parse_field_expr("beta[0]");
  } catch (const parse_error& e) {
    CHECK(e.offset == 5);
    CHECK(e.expected == "index >= 1");
  }
  CHECK_THROWS_AS(parse_field_expr("delta[1]"), parse_error);
  CHECK_THROWS_AS(parse_field_expr("nprod(beta[1],gamma[1]"), parse_error);
  CHECK_THROWS_AS(parse_field_expr("id id"), parse_error);
  CHECK_THROWS_AS(parse_field_expr("sp[bx,1,1]"), parse_error);
  CHECK_THROWS_AS(parse_field_expr(""), parse_error);
}

TEST_CASE("render round-trips") {
  std::mt19937 rng(5);
  for (int t = 0; t < 200; ++t) {
    FieldExpr e = random_expr(rng, 3);
    CHECK(parse_field_expr(render(e)) == e);
  }
}

TEST_CASE("expression families and realization") {
  CHECK(expr_family(parse_field_expr("d(id)")) == ExprFamily::Neutral);
  CHECK(expr_family(parse_field_expr("nprod(beta[1],gamma[1],0)")) ==
        ExprFamily::Symplectic);
  CHECK(expr_family(parse_field_expr("d(cartan[1,2])")) == ExprFamily::Affine);
  CHECK_THROWS_AS(expr_family(parse_field_expr("nprod(beta[1],current[1,2],0)")),
                  model_error);

  SymplecticConfig sym = SymplecticConfig::plain(1);
  SlnConfig sln = SlnConfig::make(2, Rational(1));
  CHECK_THROWS_AS(build_field(parse_field_expr("beta[2]"), sym, sln), model_error);
  CHECK_THROWS_AS(build_field(parse_field_expr("current[1,3]"), sym, sln), model_error);
  CHECK_THROWS_AS(build_field(parse_field_expr("cartan[2,2]"), sym, sln), model_error);
  Field f = build_field(parse_field_expr("nprod(beta[1],gamma[1],0)"), sym, sln);
  CHECK(f.space == sym.model);
}

TEST_CASE("ope presentation") {
  CheckConfig cfg;
  cfg.N = 4;
  CHECK(ope_render(parse_field_expr("nprod(beta[1],gamma[1],0)"), cfg) == "tau * id");
  CHECK(ope_render(parse_field_expr("nprod(beta[1],beta[1],0)"), cfg) == "0");
  CHECK(ope_render(parse_field_expr("beta[1]"), cfg) == "beta[1]");
  CHECK(ope_render(parse_field_expr("d(beta[1])"), cfg) == "d(beta[1])");
  CHECK(ope_render(parse_field_expr("d(id)"), cfg) == "0");
  CHECK(ope_render(parse_field_expr("nprod(beta[1],beta[1],-1)"), cfg) ==
        "tau * sp[bb,1,1]");
  CHECK(ope_render(parse_field_expr("current[1,2]"), cfg) == "E[1,2]");
}

TEST_CASE("config validation") {
  CheckConfig cfg;
  cfg.suite = "pi-t";
  CHECK_NOTHROW(cfg.validate());
  CheckConfig bad = cfg;
  bad.N = 0;
  CHECK_THROWS_AS(bad.validate(), model_error);
  bad = cfg;
  bad.c = Rational(2);  // not a rational square
  CHECK_THROWS_AS(bad.validate(), model_error);
  bad = cfg;
  bad.window_lo = 1;
  bad.window_hi = -1;
  CHECK_THROWS_AS(bad.validate(), model_error);
  bad = cfg;
  bad.format = "xml";
  CHECK_THROWS_AS(bad.validate(), model_error);
  CheckConfig unknown;
  unknown.suite = "nonsense";
  CHECK_THROWS_AS(run_suite(unknown), model_error);
}

TEST_CASE("pi-t suite passes and reports deterministically") {
  CheckConfig cfg;
  cfg.suite = "pi-t";
  cfg.degree = 2;
  Report r1 = run_suite(cfg);
  CHECK(r1.all_pass());
  Report r2 = run_suite(cfg);
  std::string j1 = emit_json(r1), j2 = emit_json(r2);
  CHECK(j1 == j2);
  CHECK(j1.find("millis") == std::string::npos);
  std::string timed = emit_json(r1, true);
  CHECK(timed.find("millis") != std::string::npos);
}

TEST_CASE("sp suite pins the measured level") {
  CheckConfig cfg;
  cfg.suite = "sp";
  Report r = run_suite(cfg);
  REQUIRE(r.all_pass());
  REQUIRE(r.entries.size() == 1);
  CHECK(r.entries[0].params.at("level") == "-1/2");
}

TEST_CASE("json report round-trips") {
  CheckConfig cfg;
  cfg.suite = "sp";
  Report r = run_suite(cfg);
  nlohmann::json j = to_json(r, true);
  Report back = parse_report(j);
  CHECK(emit_json(back, true) == emit_json(r, true));
  CHECK(emit_json(back) == emit_json(r));
  nlohmann::json bad;
  bad["schema_version"] = 2;
  CHECK_THROWS_AS(parse_report(bad), model_error);
}

TEST_CASE("dual suite is deterministic per seed") {
  CheckConfig cfg;
  cfg.suite = "dual";
  cfg.degree = 2;
  Report r1 = run_suite(cfg);
  CHECK(r1.all_pass());
  Report r2 = run_suite(cfg);
  CHECK(emit_json(r1) == emit_json(r2));
  cfg.seed = 1;
  Report r3 = run_suite(cfg);
  CHECK(r3.all_pass());
}
