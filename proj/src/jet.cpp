#include "solitonjet/jet.hpp"

#include <cmath>
#include <string>

#include "solitonjet/error.hpp"

namespace solitonjet {

namespace {

void check_orders(int order_a, int order_b) {
  if (order_a < 0 || order_b < 0 || order_a > Jet2::kMaxOrder ||
      order_b > Jet2::kMaxOrder) {
    throw Error(ErrorKind::InvalidArgument,
                "jet orders (" + std::to_string(order_a) + ", " +
                    std::to_string(order_b) + ") outside [0, " +
                    std::to_string(Jet2::kMaxOrder) + "]");
  }
}

void require_same_orders(const Jet2& a, const Jet2& b) {
  if (a.order_a() != b.order_a() || a.order_b() != b.order_b()) {
    throw Error(ErrorKind::OrderMismatch,
                "jet orders differ: (" + std::to_string(a.order_a()) + ", " +
                    std::to_string(a.order_b()) + ") vs (" +
                    std::to_string(b.order_a()) + ", " +
                    std::to_string(b.order_b()) + ")");
  }
}

double factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

}  // namespace

Jet2::Jet2(int order_a, int order_b) : order_a_(order_a), order_b_(order_b) {
  check_orders(order_a, order_b);
  coeffs_.assign(static_cast<std::size_t>(order_a + 1) *
                     static_cast<std::size_t>(order_b + 1),
                 0.0);
}

Jet2 Jet2::constant(double c, int order_a, int order_b) {
  Jet2 j(order_a, order_b);
  j.coeffs_[0] = c;
  return j;
}

Jet2 Jet2::coordinate(Axis which, double value, int order_a, int order_b) {
  const int order = which == Axis::First ? order_a : order_b;
  if (order < 1) {
    throw Error(ErrorKind::TruncationTooSmall,
                "coordinate jet needs order >= 1 in its own direction");
  }
  Jet2 j = constant(value, order_a, order_b);
  if (which == Axis::First) {
    j.coeff(1, 0) = 1.0;
  } else {
    j.coeff(0, 1) = 1.0;
  }
  return j;
}

double Jet2::partial(int i, int k) const {
  if (i < 0 || k < 0 || i > order_a_ || k > order_b_) {
    throw Error(ErrorKind::TruncationTooSmall,
                "partial (" + std::to_string(i) + ", " + std::to_string(k) +
                    ") exceeds jet orders (" + std::to_string(order_a_) + ", " +
                    std::to_string(order_b_) + ")");
  }
  return factorial(i) * factorial(k) * coeff(i, k);
}

Jet2 Jet2::derivative(Axis which, int times) const {
  if (times < 0) {
    throw Error(ErrorKind::InvalidArgument, "negative derivative count");
  }
  Jet2 out = *this;
  for (int t = 0; t < times; ++t) {
    const bool first = which == Axis::First;
    const int na = out.order_a_ - (first ? 1 : 0);
    const int nb = out.order_b_ - (first ? 0 : 1);
    if (na < 0 || nb < 0) {
      throw Error(ErrorKind::TruncationTooSmall,
                  "cannot differentiate a jet of order 0 in that direction");
    }
    Jet2 d(na, nb);
    for (int i = 0; i <= na; ++i) {
      for (int j = 0; j <= nb; ++j) {
        d.coeff(i, j) = first ? (i + 1) * out.coeff(i + 1, j)
                              : (j + 1) * out.coeff(i, j + 1);
      }
    }
    out = std::move(d);
  }
  return out;
}

Jet2 Jet2::truncated(int order_a, int order_b) const {
  if (order_a > order_a_ || order_b > order_b_) {
    throw Error(ErrorKind::TruncationTooSmall,
                "cannot raise jet orders by truncation");
  }
  Jet2 out(order_a, order_b);
  for (int i = 0; i <= order_a; ++i) {
    for (int j = 0; j <= order_b; ++j) out.coeff(i, j) = coeff(i, j);
  }
  return out;
}

bool Jet2::all_finite() const noexcept {
  for (double c : coeffs_) {
    if (!std::isfinite(c)) return false;
  }
  return true;
}

Jet2& Jet2::operator+=(const Jet2& other) {
  require_same_orders(*this, other);
  for (std::size_t n = 0; n < coeffs_.size(); ++n) coeffs_[n] += other.coeffs_[n];
  return *this;
}

Jet2& Jet2::operator-=(const Jet2& other) {
  require_same_orders(*this, other);
  for (std::size_t n = 0; n < coeffs_.size(); ++n) coeffs_[n] -= other.coeffs_[n];
  return *this;
}

Jet2& Jet2::operator*=(double s) noexcept {
  for (double& c : coeffs_) c *= s;
  return *this;
}

Jet2 operator+(Jet2 lhs, const Jet2& rhs) { return lhs += rhs; }
Jet2 operator-(Jet2 lhs, const Jet2& rhs) { return lhs -= rhs; }
Jet2 operator-(Jet2 j) { return j *= -1.0; }
Jet2 operator*(double s, Jet2 j) { return j *= s; }
Jet2 operator*(Jet2 j, double s) { return j *= s; }

Jet2 operator*(const Jet2& lhs, const Jet2& rhs) {
  require_same_orders(lhs, rhs);
  const int na = lhs.order_a();
  const int nb = lhs.order_b();
  Jet2 out(na, nb);
  for (int i = 0; i <= na; ++i) {
    for (int j = 0; j <= nb; ++j) {
      double acc = 0.0;
      for (int p = 0; p <= i; ++p) {
        for (int r = 0; r <= j; ++r) acc += lhs.coeff(p, r) * rhs.coeff(i - p, j - r);
      }
      out.coeff(i, j) = acc;
    }
  }
  return out;
}

Jet2 operator/(const Jet2& lhs, const Jet2& rhs) {
  require_same_orders(lhs, rhs);
  const double g0 = rhs.value();
  if (g0 == 0.0) {
    throw Error(ErrorKind::PoleAtPoint, "division by a jet with zero value");
  }
  const int na = lhs.order_a();
  const int nb = lhs.order_b();
  Jet2 q(na, nb);
  // Lexicographic order guarantees every q(i-p, j-r) on the right is known.
  for (int i = 0; i <= na; ++i) {
    for (int j = 0; j <= nb; ++j) {
      double acc = lhs.coeff(i, j);
      for (int p = 0; p <= i; ++p) {
        for (int r = 0; r <= j; ++r) {
          if (p == 0 && r == 0) continue;
          acc -= rhs.coeff(p, r) * q.coeff(i - p, j - r);
        }
      }
      q.coeff(i, j) = acc / g0;
    }
  }
  return q;
}

Jet2 powi(const Jet2& base, int exponent) {
  if (exponent < 0) {
    return Jet2::constant(1.0, base.order_a(), base.order_b()) /
           powi(base, -exponent);
  }
  Jet2 result = Jet2::constant(1.0, base.order_a(), base.order_b());
  Jet2 square = base;
  unsigned n = static_cast<unsigned>(exponent);
  while (n != 0) {
    if (n & 1u) result = result * square;
    n >>= 1u;
    if (n != 0) square = square * square;
  }
  return result;
}

Jet2 exp(const Jet2& arg) {
  // h = exp(f) satisfies h_a = f_a h and h_b = f_b h; match coefficients.
  const int na = arg.order_a();
  const int nb = arg.order_b();
  Jet2 h(na, nb);
  h.coeff(0, 0) = std::exp(arg.value());
  for (int j = 1; j <= nb; ++j) {
    double acc = 0.0;
    for (int r = 1; r <= j; ++r) acc += r * arg.coeff(0, r) * h.coeff(0, j - r);
    h.coeff(0, j) = acc / j;
  }
  for (int i = 1; i <= na; ++i) {
    for (int j = 0; j <= nb; ++j) {
      double acc = 0.0;
      for (int p = 1; p <= i; ++p) {
        for (int r = 0; r <= j; ++r) acc += p * arg.coeff(p, r) * h.coeff(i - p, j - r);
      }
      h.coeff(i, j) = acc / i;
    }
  }
  return h;
}

}  // namespace solitonjet
