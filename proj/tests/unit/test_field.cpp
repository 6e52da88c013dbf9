#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>
#include <string>

#include "solitonjet/error.hpp"
#include "solitonjet/field.hpp"
#include "solitonjet/parser.hpp"

using namespace solitonjet;

namespace {

std::string strip_spaces(std::string s) {
  std::erase(s, ' ');
  return s;
}

// Central difference with one Richardson step; accurate to about 1e-9 for smooth f.
double fd_partial_a(const std::function<double(double, double)>& f, double a, double b) {
  auto d = [&](double h) { return (f(a + h, b) - f(a - h, b)) / (2 * h); };
  const double h = 1e-3;
  return (4 * d(h / 2) - d(h)) / 3;
}

double fd_partial_b(const std::function<double(double, double)>& f, double a, double b) {
  auto d = [&](double h) { return (f(a, b + h) - f(a, b - h)) / (2 * h); };
  const double h = 1e-3;
  return (4 * d(h / 2) - d(h)) / 3;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidArgument;
}

std::vector<Point2> random_points(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<Point2> pts;
  for (int i = 0; i < n; ++i) pts.push_back({u(rng), u(rng)});
  return pts;
}

}  // namespace

TEST_CASE("parser builds the expected trees") {
  CHECK(strip_spaces(tree_string(parse_field("exp(2*x - y)"))) == "Exp(Sub(Mul(2,x),y))");
  // t is the second coordinate and prints as y.
  CHECK(strip_spaces(tree_string(parse_field("x^2 * t + 1"))) == "Add(Mul(PowInt(x,2),y),1)");
  CHECK(strip_spaces(tree_string(parse_field("-2*x"))) == "Mul(-2,x)");
  CHECK(strip_spaces(tree_string(parse_field("-x"))) == "Mul(-1,x)");
  CHECK(strip_spaces(tree_string(parse_field("x^-2"))) == "PowInt(x,-2)");
  CHECK(strip_spaces(tree_string(parse_field("1.5e-3"))) == "0.0015");
  CHECK(strip_spaces(tree_string(parse_field("diff(x^3, x, t)"))) == "Derivative(PowInt(x,3),1,1)");
}

TEST_CASE("parser reports offsets") {
  try {
    (void)parse_field("exp(x");
    FAIL("expected throw");
  } catch (const SyntaxError& e) {
    CHECK(e.kind() == ErrorKind::Syntax);
    CHECK(e.offset() == 5);
  }
  try {
    (void)parse_field("x +");
    FAIL("expected throw");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() == 3);
  }
  try {
    (void)parse_field("x + sin(y)");
    FAIL("expected throw");
  } catch (const SyntaxError& e) {
    CHECK(e.kind() == ErrorKind::UnknownIdentifier);
    CHECK(e.offset() == 4);
  }
  CHECK(kind_of([] { (void)parse_field("x ^ 1.5"); }) == ErrorKind::Syntax);
  CHECK(kind_of([] { (void)parse_field("diff(x, z)"); }) == ErrorKind::Syntax);
  CHECK(kind_of([] { (void)parse_field("(x))"); }) == ErrorKind::Syntax);
}

TEST_CASE("parsed formula matches the hand-built tree") {
  FieldExpr x = x_coord(), y = second_coord();
  FieldExpr hand = exp(2.0 * x - y) / (1.0 + powi(x, 2) * y);
  FieldExpr parsed = parse_field("exp(2*x - y) / (1 + x^2*t)");
  for (Point2 p : random_points(100, 1)) {
    if (std::abs(1.0 + p.a * p.a * p.b) < 1e-6) continue;
    CHECK(value_at(parsed, p) == doctest::Approx(value_at(hand, p)).epsilon(1e-14));
  }
}

TEST_CASE("print then parse evaluates identically") {
  const char* corpus[] = {
      "exp(2*x - y)",
      "x^2 * t + 1",
      "-(x - 3*y)^3 / (2 + exp(-x))",
      "((x^2)^3 - y^-2) * 0.1",
      "1 / (1 + exp(1.7*x - 0.3*t + 0.25)) - -4.5e-3",
      "diff(exp(x*y), x, x, y) + diff(x^4, x)",
  };
  for (const char* text : corpus) {
    FieldExpr e = parse_field(text);
    FieldExpr back = parse_field(to_string(e));
    for (Point2 p : random_points(100, 2)) {
      double v1 = 0, v2 = 0;
      try {
        v1 = value_at(e, p);
      } catch (const Error&) {
        continue;
      }
      v2 = value_at(back, p);
      CHECK(v2 == doctest::Approx(v1).epsilon(1e-12));
    }
  }
}

TEST_CASE("structural helpers do not simplify but evaluate as expected") {
  FieldExpr f = parse_field("exp(x) * (y - 0.5)");
  CHECK(node_count(FieldExpr::constant(0.0) + f) == node_count(f) + 2);
  for (Point2 p : random_points(20, 3)) {
    CHECK(value_at(FieldExpr::constant(0.0) + f, p) == value_at(f, p));
    CHECK(value_at(powi(f, 1), p) == value_at(f, p));
    if (std::abs(value_at(f, p)) > 1e-8) CHECK(value_at(f / f, p) == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("jet partials match finite differences") {
  FieldExpr e = parse_field("exp(0.7*x - 0.2*y) / (1 + exp(0.7*x - 0.2*y)) + x^3*y");
  auto f = [&](double a, double b) { return value_at(e, {a, b}); };
  for (Point2 p : random_points(20, 4)) {
    Jet2 j = evaluate(e, p);
    CHECK(j.partial(1, 0) == doctest::Approx(fd_partial_a(f, p.a, p.b)).epsilon(1e-8));
    CHECK(j.partial(0, 1) == doctest::Approx(fd_partial_b(f, p.a, p.b)).epsilon(1e-8));
    auto fa = [&](double a, double b) { return evaluate(e, {a, b}, 1, 0).partial(1, 0); };
    CHECK(j.partial(1, 1) == doctest::Approx(fd_partial_b(fa, p.a, p.b)).epsilon(1e-7));
  }
}

TEST_CASE("derivative nodes agree with jet partials") {
  FieldExpr e = parse_field("exp(x*y) / (2 + x^2)");
  for (Point2 p : random_points(20, 5)) {
    Jet2 j = evaluate(e, p, 7, 3);
    CHECK(value_at(partial(e, 2, 1), p) == doctest::Approx(j.partial(2, 1)).epsilon(1e-12));
    // Nested derivatives compose.
    CHECK(value_at(dx(dx(dsecond(e))), p) == doctest::Approx(j.partial(2, 1)).epsilon(1e-12));
    Jet2 jd = evaluate(dx(e), p, 3, 2);
    CHECK(jd.partial(1, 2) == doctest::Approx(j.partial(2, 2)).epsilon(1e-12));
  }
}

TEST_CASE("larger truncation never changes lower coefficients") {
  FieldExpr x = x_coord(), y = second_coord();
  FieldExpr e = exp(x * y - 0.3) / (3.0 + powi(x - y, 2)) + dx(exp(x) * y);
  for (Point2 p : random_points(30, 6)) {
    Jet2 small = evaluate(e, p, 3, 2);
    Jet2 big = evaluate(e, p, 9, 5);
    for (int i = 0; i <= 3; ++i)
      for (int k = 0; k <= 2; ++k) CHECK(big.coeff(i, k) == small.coeff(i, k));
    // Same through a single evaluator whose cache was filled at a lower order first.
    Evaluator ev(p);
    Jet2 lo = ev.evaluate(e, 2, 1);
    Jet2 hi = ev.evaluate(e, 6, 4);
    for (int i = 0; i <= 2; ++i)
      for (int k = 0; k <= 1; ++k) CHECK(hi.coeff(i, k) == lo.coeff(i, k));
    CHECK(hi.coeff(6, 4) == big.coeff(6, 4));
  }
}

TEST_CASE("shared subexpressions are evaluated once per point") {
  FieldExpr s = exp(x_coord());
  FieldExpr e = s;
  for (int i = 0; i < 60; ++i) e = e * s + s;
  CHECK(node_count(e) < 200);
  Jet2 j = evaluate(e, {0.0, 0.0}, 4, 1);
  CHECK(std::isfinite(j.value()));
}

TEST_CASE("exp overflow names the node path") {
  FieldExpr e = FieldExpr::constant(1.0) + exp(800.0 * x_coord());
  try {
    (void)value_at(e, {1.0, 0.0});
    FAIL("expected throw");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::Overflow);
    CHECK(std::string(err.what()).find("/1") != std::string::npos);
  }
  CHECK_NOTHROW((void)value_at(e, {0.5, 0.0}));
}

TEST_CASE("zero denominator is a pole and near-zero is recorded") {
  FieldExpr e = 1.0 / x_coord();
  CHECK(kind_of([&] { (void)value_at(e, {0.0, 1.0}); }) == ErrorKind::PoleAtPoint);
  Evaluator ev({1e-12, 0.0});
  (void)ev.evaluate(e, 2, 2);
  CHECK(ev.min_divisor_ratio() == doctest::Approx(0.5e-12));
}

TEST_CASE("reflection evaluates at the mirrored point") {
  FieldExpr e = parse_field("exp(0.3*x - 1.1*y) * x + diff(x^3*y^2, x) + diff(exp(x-y), x, y)");
  FieldExpr r = reflect(e);
  for (Point2 p : random_points(20, 8)) {
    CHECK(value_at(r, p) == doctest::Approx(value_at(e, {-p.a, -p.b})).epsilon(1e-13));
    CHECK(evaluate(r, p, 2, 2).partial(1, 1) ==
          doctest::Approx(evaluate(e, {-p.a, -p.b}, 2, 2).partial(1, 1)).epsilon(1e-12));
  }
}

TEST_CASE("shortest round-trip number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(-1.5e-20) == "-1.5e-20");
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 200; ++i) {
    const double v = u(rng);
    CHECK(std::stod(format_number(v)) == v);
  }
}
