#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "solitonjet/jet.hpp"

namespace solitonjet {

/// Evaluation point. `a` is x; `b` is y or t depending on the family.
struct Point2 {
  double a = 0.0;
  double b = 0.0;
};

/// Immutable closed-form field over two coordinates.
///
/// Nodes are shared, so expressions built by the Darboux and Miura machinery
/// form DAGs; evaluation memoizes per node. A Derivative node asks for the
/// mixed partial of its child; the partial is read off a higher-order jet, so
/// no symbolic differentiation happens anywhere.
class FieldExpr {
 public:
  enum class Kind { Constant, Coordinate, Add, Sub, Mul, Div, PowInt, Exp, Derivative };

  struct Node;

  /// The zero constant.
  FieldExpr();

  static FieldExpr constant(double value);
  static FieldExpr coordinate(Axis which);
  static FieldExpr add(FieldExpr lhs, FieldExpr rhs);
  static FieldExpr sub(FieldExpr lhs, FieldExpr rhs);
  static FieldExpr mul(FieldExpr lhs, FieldExpr rhs);
  static FieldExpr div(FieldExpr lhs, FieldExpr rhs);
  static FieldExpr pow_int(FieldExpr base, int exponent);
  static FieldExpr exp(FieldExpr arg);
  static FieldExpr derivative(FieldExpr arg, int order_a, int order_b);

  Kind kind() const noexcept;
  double constant_value() const noexcept;
  Axis axis() const noexcept;
  int exponent() const noexcept;
  int derivative_a() const noexcept;
  int derivative_b() const noexcept;
  /// Children: 1 for PowInt/Exp/Derivative, 2 for binary nodes, else 0.
  std::size_t arity() const noexcept;
  FieldExpr child(std::size_t index) const;

  const Node* node() const noexcept { return node_.get(); }

 private:
  explicit FieldExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

struct FieldExpr::Node {
  Kind kind = Kind::Constant;
  double value = 0.0;
  Axis axis = Axis::First;
  int exponent = 0;
  int da = 0;
  int db = 0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

FieldExpr operator+(const FieldExpr& lhs, const FieldExpr& rhs);
FieldExpr operator-(const FieldExpr& lhs, const FieldExpr& rhs);
FieldExpr operator*(const FieldExpr& lhs, const FieldExpr& rhs);
FieldExpr operator/(const FieldExpr& lhs, const FieldExpr& rhs);
FieldExpr operator+(const FieldExpr& lhs, double rhs);
FieldExpr operator+(double lhs, const FieldExpr& rhs);
FieldExpr operator-(const FieldExpr& lhs, double rhs);
FieldExpr operator-(double lhs, const FieldExpr& rhs);
FieldExpr operator*(double lhs, const FieldExpr& rhs);
FieldExpr operator*(const FieldExpr& lhs, double rhs);
FieldExpr operator/(const FieldExpr& lhs, double rhs);
FieldExpr operator/(double lhs, const FieldExpr& rhs);
/// Multiplies by the constant -1.
FieldExpr operator-(const FieldExpr& f);

FieldExpr powi(const FieldExpr& base, int exponent);
FieldExpr exp(const FieldExpr& arg);

inline FieldExpr x_coord() { return FieldExpr::coordinate(Axis::First); }
inline FieldExpr second_coord() { return FieldExpr::coordinate(Axis::Second); }

/// d^{i+k} f / da^i db^k as a Derivative node.
FieldExpr partial(const FieldExpr& f, int i, int k);
inline FieldExpr dx(const FieldExpr& f) { return partial(f, 1, 0); }
inline FieldExpr dsecond(const FieldExpr& f) { return partial(f, 0, 1); }

/// g(a, b) = f(-a, -b).
FieldExpr reflect(const FieldExpr& f);

/// Parseable infix rendering; constants in shortest round-trip form.
std::string to_string(const FieldExpr& f);
/// Structural rendering, e.g. Exp(Sub(Mul(2, x), y)).
std::string tree_string(const FieldExpr& f);
/// Number of distinct nodes in the DAG.
std::size_t node_count(const FieldExpr& f);

/// Shortest decimal that round-trips to the same double.
std::string format_number(double value);

/// Evaluates fields to jets at one point, memoizing shared subexpressions.
///
/// Also records the smallest divisor ratio |den| / (1 + |num|) met by any
/// division, so callers can flag near-pole points without the kernel having
/// an opinion about thresholds.
class Evaluator {
 public:
  static constexpr double kExpOverflowArgument = 700.0;

  explicit Evaluator(Point2 point);

  Point2 point() const noexcept { return point_; }

  Jet2 evaluate(const FieldExpr& f, int order_a, int order_b);

  /// Jet division that participates in divisor-ratio bookkeeping.
  Jet2 divide(const Jet2& num, const Jet2& den);

  double min_divisor_ratio() const noexcept { return min_ratio_; }

 private:
  Jet2 eval_node(const FieldExpr& f, int order_a, int order_b,
                 std::vector<int>& path);

  Point2 point_;
  double min_ratio_;
  std::vector<FieldExpr> roots_;
  std::unordered_map<const FieldExpr::Node*, Jet2> memo_;
};

Jet2 evaluate(const FieldExpr& f, Point2 p, int order_a = 7, int order_b = 3);
double value_at(const FieldExpr& f, Point2 p);

}  // namespace solitonjet
