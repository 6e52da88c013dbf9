#pragma once

#include <span>
#include <vector>

namespace solitonjet {

enum class Axis { First, Second };

/// Truncated bivariate Taylor expansion about a point.
///
/// Entry (i, j) holds d^{i+j} f / da^i db^j divided by i! j!, for
/// 0 <= i <= order_a and 0 <= j <= order_b. Storage is dense and row-major
/// in the first index. Binary arithmetic requires identical orders; the
/// kernel never truncates silently.
class Jet2 {
 public:
  static constexpr int kMaxOrder = 40;

  Jet2() : Jet2(0, 0) {}
  Jet2(int order_a, int order_b);

  static Jet2 constant(double c, int order_a, int order_b);
  static Jet2 coordinate(Axis which, double value, int order_a, int order_b);

  int order_a() const noexcept { return order_a_; }
  int order_b() const noexcept { return order_b_; }

  double coeff(int i, int j) const { return coeffs_[index(i, j)]; }
  double& coeff(int i, int j) { return coeffs_[index(i, j)]; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }

  double value() const noexcept { return coeffs_[0]; }

  /// Raw mixed partial i! k! coeff(i, k).
  double partial(int i, int k) const;

  /// Jet of the derivative; the order in `which` drops by `times`.
  Jet2 derivative(Axis which, int times = 1) const;

  Jet2 truncated(int order_a, int order_b) const;

  bool all_finite() const noexcept;

  Jet2& operator+=(const Jet2& other);
  Jet2& operator-=(const Jet2& other);
  Jet2& operator*=(double s) noexcept;

 private:
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(order_b_ + 1) +
           static_cast<std::size_t>(j);
  }

  int order_a_;
  int order_b_;
  std::vector<double> coeffs_;
};

Jet2 operator+(Jet2 lhs, const Jet2& rhs);
Jet2 operator-(Jet2 lhs, const Jet2& rhs);
Jet2 operator-(Jet2 j);
Jet2 operator*(const Jet2& lhs, const Jet2& rhs);
Jet2 operator*(double s, Jet2 j);
Jet2 operator*(Jet2 j, double s);

/// Truncated quotient; throws PoleAtPoint when rhs.value() == 0 exactly.
Jet2 operator/(const Jet2& lhs, const Jet2& rhs);

Jet2 powi(const Jet2& base, int exponent);
Jet2 exp(const Jet2& arg);

}  // namespace solitonjet
