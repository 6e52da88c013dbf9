#include <doctest.h>

#include <cmath>
#include <random>

#include "solitonjet/error.hpp"
#include "solitonjet/jet.hpp"

using namespace solitonjet;

namespace {

double fact(int n) { return n <= 1 ? 1.0 : n * fact(n - 1); }

Jet2 random_jet(std::mt19937_64& rng, int na, int nb) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Jet2 j(na, nb);
  for (int i = 0; i <= na; ++i)
    for (int k = 0; k <= nb; ++k) j.coeff(i, k) = u(rng);
  return j;
}

// Polynomial product by summing every pair of monomials, then truncating.
Jet2 brute_product(const Jet2& p, const Jet2& q) {
  Jet2 r(p.order_a(), p.order_b());
  for (int i1 = 0; i1 <= p.order_a(); ++i1)
    for (int k1 = 0; k1 <= p.order_b(); ++k1)
      for (int i2 = 0; i2 <= q.order_a(); ++i2)
        for (int k2 = 0; k2 <= q.order_b(); ++k2)
          if (i1 + i2 <= r.order_a() && k1 + k2 <= r.order_b())
            r.coeff(i1 + i2, k1 + k2) += p.coeff(i1, k1) * q.coeff(i2, k2);
  return r;
}

}  // namespace

TEST_CASE("coordinate jet of x at 2 is 2 + da") {
  Jet2 x = Jet2::coordinate(Axis::First, 2.0, 3, 2);
  CHECK(x.coeff(0, 0) == 2.0);
  CHECK(x.coeff(1, 0) == 1.0);
  CHECK(x.coeff(0, 1) == 0.0);
  CHECK(x.coeff(2, 0) == 0.0);
}

TEST_CASE("coordinate needs order at least one in its axis") {
  CHECK_THROWS_AS(Jet2::coordinate(Axis::Second, 0.0, 3, 0), Error);
  try {
    (void)Jet2::coordinate(Axis::Second, 0.0, 3, 0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TruncationTooSmall);
  }
}

TEST_CASE("partial beyond truncation is rejected") {
  Jet2 j(2, 1);
  CHECK_THROWS_AS((void)j.partial(3, 0), Error);
  CHECK_THROWS_AS((void)j.partial(0, 2), Error);
}

TEST_CASE("mismatched orders are rejected") {
  Jet2 a(2, 2), b(2, 3);
  try {
    (void)(a + b);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OrderMismatch);
  }
  CHECK_THROWS_AS((void)(a * b), Error);
}

TEST_CASE("cauchy product matches brute force polynomial product") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int na = static_cast<int>(rng() % 6);
    const int nb = static_cast<int>(rng() % 4);
    Jet2 p = random_jet(rng, na, nb);
    Jet2 q = random_jet(rng, na, nb);
    Jet2 fast = p * q;
    Jet2 slow = brute_product(p, q);
    for (int i = 0; i <= na; ++i)
      for (int k = 0; k <= nb; ++k) CHECK(fast.coeff(i, k) == doctest::Approx(slow.coeff(i, k)).epsilon(1e-14));
  }
}

TEST_CASE("division inverts multiplication") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Jet2 p = random_jet(rng, 5, 3);
    Jet2 q = random_jet(rng, 5, 3);
    q.coeff(0, 0) = 1.5 + std::abs(q.coeff(0, 0));
    Jet2 back = (p / q) * q;
    for (int i = 0; i <= 5; ++i)
      for (int k = 0; k <= 3; ++k) CHECK(back.coeff(i, k) == doctest::Approx(p.coeff(i, k)).epsilon(1e-12));
  }
}

TEST_CASE("division by exact zero is a pole") {
  Jet2 one = Jet2::constant(1.0, 2, 2);
  Jet2 x = Jet2::coordinate(Axis::First, 0.0, 2, 2);
  try {
    (void)(one / x);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PoleAtPoint);
  }
}

TEST_CASE("exp of linear form has closed-form coefficients") {
  // exp(2a - b) at (0.3, 0.1): coefficient (i,k) is e^{0.5} 2^i (-1)^k / i! k!.
  const int na = 7, nb = 3;
  Jet2 arg = 2.0 * Jet2::coordinate(Axis::First, 0.3, na, nb) - Jet2::coordinate(Axis::Second, 0.1, na, nb);
  Jet2 e = exp(arg);
  for (int i = 0; i <= na; ++i)
    for (int k = 0; k <= nb; ++k) {
      const double want = std::exp(0.5) * std::pow(2.0, i) * std::pow(-1.0, k) / (fact(i) * fact(k));
      CHECK(e.coeff(i, k) == doctest::Approx(want).epsilon(1e-14));
    }
}

TEST_CASE("exp of a sum is the product of exps") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Jet2 p = random_jet(rng, 4, 4);
    Jet2 q = random_jet(rng, 4, 4);
    Jet2 lhs = exp(p + q);
    Jet2 rhs = exp(p) * exp(q);
    for (int i = 0; i <= 4; ++i)
      for (int k = 0; k <= 4; ++k) CHECK(lhs.coeff(i, k) == doctest::Approx(rhs.coeff(i, k)).epsilon(1e-12));
  }
}

TEST_CASE("powi agrees with repeated multiplication and reciprocal") {
  std::mt19937_64 rng(5);
  Jet2 p = random_jet(rng, 5, 2);
  p.coeff(0, 0) = 1.2;
  Jet2 rep = Jet2::constant(1.0, 5, 2);
  for (int n = 0; n <= 6; ++n) {
    Jet2 fast = powi(p, n);
    for (int i = 0; i <= 5; ++i)
      for (int k = 0; k <= 2; ++k) CHECK(fast.coeff(i, k) == doctest::Approx(rep.coeff(i, k)).epsilon(1e-13));
    rep = rep * p;
  }
  Jet2 inv3 = powi(p, -3) * powi(p, 3);
  CHECK(inv3.coeff(0, 0) == doctest::Approx(1.0));
  for (int i = 0; i <= 5; ++i)
    for (int k = 0; k <= 2; ++k)
      if (i + k > 0) CHECK(std::abs(inv3.coeff(i, k)) < 1e-12);
}

TEST_CASE("derivative shifts coefficients and lowers order") {
  // f = a^3 b^2 at (1, 2): d/da f = 3 a^2 b^2 = 12 at the point.
  Jet2 a = Jet2::coordinate(Axis::First, 1.0, 5, 3);
  Jet2 b = Jet2::coordinate(Axis::Second, 2.0, 5, 3);
  Jet2 f = powi(a, 3) * powi(b, 2);
  Jet2 fa = f.derivative(Axis::First);
  CHECK(fa.order_a() == 4);
  CHECK(fa.value() == doctest::Approx(12.0));
  CHECK(f.partial(1, 1) == doctest::Approx(12.0));  // 6 a^2 b
  CHECK(f.partial(3, 2) == doctest::Approx(12.0));
  CHECK(f.derivative(Axis::Second, 2).value() == doctest::Approx(2.0));
}

TEST_CASE("truncation keeps leading coefficients exactly") {
  std::mt19937_64 rng(9);
  Jet2 p = random_jet(rng, 6, 4);
  Jet2 t = p.truncated(3, 2);
  for (int i = 0; i <= 3; ++i)
    for (int k = 0; k <= 2; ++k) CHECK(t.coeff(i, k) == p.coeff(i, k));
  CHECK_THROWS_AS((void)p.truncated(7, 1), Error);
}
