#include <doctest.h>

#include <cmath>
#include <string>

#include "solitonjet/error.hpp"
#include "solitonjet/profile.hpp"

using namespace solitonjet;

TEST_CASE("grid and mode flags parse") {
  const GridSpec g = parse_grid_spec("a=-3:3:601,b=-1:2:4");
  CHECK(g.n_a == 601);
  CHECK(g.a_at(300) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(g.b_at(3) == 2.0);
  const Mode m = parse_mode("k=2,x0=-1.5");
  CHECK(m.k == 2.0);
  CHECK(m.x0 == -1.5);
  CHECK(parse_mode("a=3").k == 3.0);
  CHECK_THROWS_AS(parse_grid_spec("a=3:-3:10"), Error);
  CHECK_THROWS_AS(parse_grid_spec("a=-3:3:1"), Error);
  CHECK_THROWS_AS(parse_grid_spec("z=-3:3:10"), Error);
  CHECK_THROWS_AS(parse_mode("x0=1"), Error);
  CHECK_THROWS_AS(parse_mode("k=abc"), Error);
}

TEST_CASE("CSV layout is fixed and repeatable") {
  const GridSpec g = parse_grid_spec("a=0:1:2,b=0:2:3");
  const GridOutput out = sample_grid(x_coord() + 10.0 * second_coord(), g);
  CHECK(to_csv(out) == "a,b,value\n0,0,0\n0,1,10\n0,2,20\n1,0,1\n1,1,11\n1,2,21\n");
  const FieldExpr f = soliton_field({Family::Akns, 0.5, {{1.0, 0.0}, {2.0, 0.0}}}, ProfileField::Mx);
  const GridSpec big = parse_grid_spec("a=-3:3:40,b=-3:3:40");
  CHECK(to_csv(sample_grid(f, big, 1)) == to_csv(sample_grid(f, big, 4)));
}

TEST_CASE("one-soliton M_x has a single crest of the predicted height on the wave line") {
  struct Case {
    Family family;
    double a0;
    Mode mode;
  };
  for (const Case& c : {Case{Family::Akns, 0.5, {1.0, 0.0}}, Case{Family::Akns, 0.5, {2.0, 0.7}},
                        Case{Family::Nlbq, 1.0, {2.0, 0.0}}}) {
    const FieldExpr mx = soliton_field({c.family, c.a0, {c.mode}}, ProfileField::Mx);
    const double height = predicted_crest_height(c.family, c.a0, c.mode);
    for (double b : {-0.4, 0.0, 0.3}) {
      const auto crests = row_crests(mx, b, -3.0, 3.0, 601);
      REQUIRE(crests.size() == 1);
      CHECK(std::abs(crests[0].height - height) <= 1e-6);
      CHECK(std::abs(crests[0].grid_a - predicted_crest_location(c.family, c.a0, c.mode, b)) <= 0.01);
    }
  }
  // Crest on a grid node: the sampled maximum itself is k^2.
  const FieldExpr mx = soliton_field({Family::Akns, 0.5, {{1.0, 0.0}}}, ProfileField::Mx);
  const GridOutput g = sample_grid(mx, parse_grid_spec("a=-3:3:601,b=0:1:2"));
  double top = 0.0;
  for (int i = 0; i < g.grid.n_a; ++i) top = std::max(top, g.at(i, 0));
  CHECK(std::abs(top - 1.0) <= 1e-6);
}

TEST_CASE("two-soliton M_x shows two crests when the offsets are far apart") {
  const FieldExpr akns = soliton_field({Family::Akns, 0.5, {{1.0, -2.5}, {2.0, 2.5}}}, ProfileField::Mx);
  CHECK(row_crests(akns, 0.0, -8.0, 8.0, 1601).size() == 2);
  const FieldExpr nlbq = soliton_field({Family::Nlbq, 1.0, {{2.0, -2.5}, {3.0, 2.5}}}, ProfileField::Mx);
  CHECK(row_crests(nlbq, 0.0, -8.0, 8.0, 1601).size() == 2);
}

TEST_CASE("NLBq two-soliton samples the default box without poles") {
  const FieldExpr M = soliton_field({Family::Nlbq, 1.0, {{2.0, 0.0}, {3.0, 0.0}}}, ProfileField::M);
  const GridOutput g = sample_grid(M, GridSpec{});
  for (double v : g.values) CHECK(std::isfinite(v));
}
