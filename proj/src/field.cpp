#include "solitonjet/field.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <system_error>
#include <unordered_set>

#include "solitonjet/error.hpp"

namespace solitonjet {

namespace {

using NodePtr = std::shared_ptr<const FieldExpr::Node>;

NodePtr make_node(FieldExpr::Node n) {
  return std::make_shared<const FieldExpr::Node>(std::move(n));
}

std::string path_string(const std::vector<int>& path) {
  std::string s;
  for (int idx : path) s += "/" + std::to_string(idx);
  return s.empty() ? "/" : s;
}

}  // namespace

FieldExpr::FieldExpr() {
  static const NodePtr zero = make_node(Node{});
  node_ = zero;
}

FieldExpr FieldExpr::constant(double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::InvalidArgument, "constant must be finite");
  }
  Node n;
  n.kind = Kind::Constant;
  n.value = value;
  return FieldExpr(make_node(std::move(n)));
}

FieldExpr FieldExpr::coordinate(Axis which) {
  Node n;
  n.kind = Kind::Coordinate;
  n.axis = which;
  return FieldExpr(make_node(std::move(n)));
}

FieldExpr FieldExpr::add(FieldExpr lhs, FieldExpr rhs) {
  Node n;
  n.kind = Kind::Add;
  n.lhs = std::move(lhs.node_);
  n.rhs = std::move(rhs.node_);
  return FieldExpr(make_node(std::move(n)));
}

FieldExpr FieldExpr::sub(FieldExpr lhs, FieldExpr rhs) {
  Node n;
  n.kind = Kind::Sub;
  n.lhs = std::move(lhs.node_);
  n.rhs = std::move(rhs.node_);
  return FieldExpr(make_node(std::move(n)));
}

FieldExpr FieldExpr::mul(FieldExpr lhs, FieldExpr rhs) {
  Node n;
  n.kind = Kind::Mul;
  n.lhs = std::move(lhs.node_);
  n.rhs = std::move(rhs.node_);
  return FieldExpr(make_node(std::move(n)));
}

FieldExpr FieldExpr::div(FieldExpr lhs, FieldExpr rhs) {
  Node n;
  n.kind = Kind::Div;
  n.lhs = std::move(lhs.node_);
  n.rhs = std::move(rhs.node_);
  return FieldExpr(make_node(std::move(n)));
}

FieldExpr FieldExpr::pow_int(FieldExpr base, int exponent) {
  Node n;
  n.kind = Kind::PowInt;
  n.exponent = exponent;
  n.lhs = std::move(base.node_);
  return FieldExpr(make_node(std::move(n)));
}

FieldExpr FieldExpr::exp(FieldExpr arg) {
  Node n;
  n.kind = Kind::Exp;
  n.lhs = std::move(arg.node_);
  return FieldExpr(make_node(std::move(n)));
}

FieldExpr FieldExpr::derivative(FieldExpr arg, int order_a, int order_b) {
  if (order_a < 0 || order_b < 0 || order_a + order_b == 0) {
    throw Error(ErrorKind::InvalidArgument,
                "derivative orders must be non-negative and not both zero");
  }
  Node n;
  n.kind = Kind::Derivative;
  n.da = order_a;
  n.db = order_b;
  n.lhs = std::move(arg.node_);
  return FieldExpr(make_node(std::move(n)));
}

FieldExpr::Kind FieldExpr::kind() const noexcept { return node_->kind; }
double FieldExpr::constant_value() const noexcept { return node_->value; }
Axis FieldExpr::axis() const noexcept { return node_->axis; }
int FieldExpr::exponent() const noexcept { return node_->exponent; }
int FieldExpr::derivative_a() const noexcept { return node_->da; }
int FieldExpr::derivative_b() const noexcept { return node_->db; }

std::size_t FieldExpr::arity() const noexcept {
  switch (node_->kind) {
    case Kind::Constant:
    case Kind::Coordinate:
      return 0;
    case Kind::PowInt:
    case Kind::Exp:
    case Kind::Derivative:
      return 1;
    default:
      return 2;
  }
}

FieldExpr FieldExpr::child(std::size_t index) const {
  if (index >= arity()) {
    throw Error(ErrorKind::InvalidArgument, "child index out of range");
  }
  return FieldExpr(index == 0 ? node_->lhs : node_->rhs);
}

FieldExpr operator+(const FieldExpr& lhs, const FieldExpr& rhs) { return FieldExpr::add(lhs, rhs); }
FieldExpr operator-(const FieldExpr& lhs, const FieldExpr& rhs) { return FieldExpr::sub(lhs, rhs); }
FieldExpr operator*(const FieldExpr& lhs, const FieldExpr& rhs) { return FieldExpr::mul(lhs, rhs); }
FieldExpr operator/(const FieldExpr& lhs, const FieldExpr& rhs) { return FieldExpr::div(lhs, rhs); }
FieldExpr operator+(const FieldExpr& lhs, double rhs) { return lhs + FieldExpr::constant(rhs); }
FieldExpr operator+(double lhs, const FieldExpr& rhs) { return FieldExpr::constant(lhs) + rhs; }
FieldExpr operator-(const FieldExpr& lhs, double rhs) { return lhs - FieldExpr::constant(rhs); }
FieldExpr operator-(double lhs, const FieldExpr& rhs) { return FieldExpr::constant(lhs) - rhs; }
FieldExpr operator*(double lhs, const FieldExpr& rhs) { return FieldExpr::constant(lhs) * rhs; }
FieldExpr operator*(const FieldExpr& lhs, double rhs) { return lhs * FieldExpr::constant(rhs); }
FieldExpr operator/(const FieldExpr& lhs, double rhs) { return lhs / FieldExpr::constant(rhs); }
FieldExpr operator/(double lhs, const FieldExpr& rhs) { return FieldExpr::constant(lhs) / rhs; }
FieldExpr operator-(const FieldExpr& f) { return FieldExpr::constant(-1.0) * f; }

FieldExpr powi(const FieldExpr& base, int exponent) { return FieldExpr::pow_int(base, exponent); }
FieldExpr exp(const FieldExpr& arg) { return FieldExpr::exp(arg); }

FieldExpr partial(const FieldExpr& f, int i, int k) { return FieldExpr::derivative(f, i, k); }

FieldExpr reflect(const FieldExpr& f) {
  std::unordered_map<const FieldExpr::Node*, FieldExpr> done;
  std::function<FieldExpr(const FieldExpr&)> go = [&](const FieldExpr& e) -> FieldExpr {
    if (auto it = done.find(e.node()); it != done.end()) return it->second;
    FieldExpr out;
    switch (e.kind()) {
      case FieldExpr::Kind::Constant:
        out = e;
        break;
      case FieldExpr::Kind::Coordinate:
        out = -e;
        break;
      case FieldExpr::Kind::Add: out = go(e.child(0)) + go(e.child(1)); break;
      case FieldExpr::Kind::Sub: out = go(e.child(0)) - go(e.child(1)); break;
      case FieldExpr::Kind::Mul: out = go(e.child(0)) * go(e.child(1)); break;
      case FieldExpr::Kind::Div: out = go(e.child(0)) / go(e.child(1)); break;
      case FieldExpr::Kind::PowInt: out = powi(go(e.child(0)), e.exponent()); break;
      case FieldExpr::Kind::Exp: out = exp(go(e.child(0))); break;
      case FieldExpr::Kind::Derivative: {
        // d/da [f(-a)] = -f'(-a), so each derivative order flips the sign.
        const int order = e.derivative_a() + e.derivative_b();
        const double sign = order % 2 == 0 ? 1.0 : -1.0;
        out = sign * partial(go(e.child(0)), e.derivative_a(), e.derivative_b());
        break;
      }
    }
    done.emplace(e.node(), out);
    return out;
  };
  return go(f);
}

std::string format_number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) {
    throw Error(ErrorKind::InvalidArgument, "number formatting failed");
  }
  return std::string(buf, end);
}

std::string to_string(const FieldExpr& f) {
  using K = FieldExpr::Kind;
  switch (f.kind()) {
    case K::Constant: {
      const std::string s = format_number(f.constant_value());
      return f.constant_value() < 0 || std::signbit(f.constant_value()) ? "(" + s + ")" : s;
    }
    case K::Coordinate:
      return f.axis() == Axis::First ? "x" : "y";
    case K::Add: return "(" + to_string(f.child(0)) + " + " + to_string(f.child(1)) + ")";
    case K::Sub: return "(" + to_string(f.child(0)) + " - " + to_string(f.child(1)) + ")";
    case K::Mul: return "(" + to_string(f.child(0)) + " * " + to_string(f.child(1)) + ")";
    case K::Div: return "(" + to_string(f.child(0)) + " / " + to_string(f.child(1)) + ")";
    case K::PowInt: {
      std::string base = to_string(f.child(0));
      if (f.child(0).kind() == K::PowInt) base = "(" + base + ")";
      return base + "^" + std::to_string(f.exponent());
    }
    case K::Exp:
      return "exp(" + to_string(f.child(0)) + ")";
    case K::Derivative: {
      std::string s = "diff(" + to_string(f.child(0));
      for (int i = 0; i < f.derivative_a(); ++i) s += ", x";
      for (int k = 0; k < f.derivative_b(); ++k) s += ", y";
      return s + ")";
    }
  }
  return {};
}

std::string tree_string(const FieldExpr& f) {
  using K = FieldExpr::Kind;
  switch (f.kind()) {
    case K::Constant: return format_number(f.constant_value());
    case K::Coordinate: return f.axis() == Axis::First ? "x" : "y";
    case K::Add: return "Add(" + tree_string(f.child(0)) + ", " + tree_string(f.child(1)) + ")";
    case K::Sub: return "Sub(" + tree_string(f.child(0)) + ", " + tree_string(f.child(1)) + ")";
    case K::Mul: return "Mul(" + tree_string(f.child(0)) + ", " + tree_string(f.child(1)) + ")";
    case K::Div: return "Div(" + tree_string(f.child(0)) + ", " + tree_string(f.child(1)) + ")";
    case K::PowInt:
      return "PowInt(" + tree_string(f.child(0)) + ", " + std::to_string(f.exponent()) + ")";
    case K::Exp: return "Exp(" + tree_string(f.child(0)) + ")";
    case K::Derivative:
      return "Derivative(" + tree_string(f.child(0)) + ", " + std::to_string(f.derivative_a()) +
             ", " + std::to_string(f.derivative_b()) + ")";
  }
  return {};
}

std::size_t node_count(const FieldExpr& f) {
  std::unordered_set<const FieldExpr::Node*> seen;
  std::vector<FieldExpr> stack{f};
  while (!stack.empty()) {
    FieldExpr e = stack.back();
    stack.pop_back();
    if (!seen.insert(e.node()).second) continue;
    for (std::size_t i = 0; i < e.arity(); ++i) stack.push_back(e.child(i));
  }
  return seen.size();
}

Evaluator::Evaluator(Point2 point)
    : point_(point), min_ratio_(std::numeric_limits<double>::infinity()) {}

Jet2 Evaluator::evaluate(const FieldExpr& f, int order_a, int order_b) {
  roots_.push_back(f);
  std::vector<int> path;
  return eval_node(f, order_a, order_b, path);
}

Jet2 Evaluator::divide(const Jet2& num, const Jet2& den) {
  const double ratio = std::abs(den.value()) / (1.0 + std::abs(num.value()));
  if (ratio < min_ratio_) min_ratio_ = ratio;
  return num / den;
}

Jet2 Evaluator::eval_node(const FieldExpr& f, int order_a, int order_b,
                          std::vector<int>& path) {
  const int want_a = order_a;
  const int want_b = order_b;
  if (auto it = memo_.find(f.node()); it != memo_.end()) {
    const Jet2& cached = it->second;
    if (cached.order_a() >= order_a && cached.order_b() >= order_b) {
      return cached.order_a() == order_a && cached.order_b() == order_b
                 ? cached
                 : cached.truncated(order_a, order_b);
    }
    // Recompute at the componentwise maximum so later requests hit the cache.
    order_a = std::max(order_a, cached.order_a());
    order_b = std::max(order_b, cached.order_b());
  }
  auto child = [&](std::size_t idx, int na, int nb) {
    path.push_back(static_cast<int>(idx));
    Jet2 j = eval_node(f.child(idx), na, nb, path);
    path.pop_back();
    return j;
  };

  using K = FieldExpr::Kind;
  Jet2 out;
  switch (f.kind()) {
    case K::Constant:
      out = Jet2::constant(f.constant_value(), order_a, order_b);
      break;
    case K::Coordinate: {
      const double v = f.axis() == Axis::First ? point_.a : point_.b;
      out = Jet2::constant(v, order_a, order_b);
      if (f.axis() == Axis::First && order_a >= 1) out.coeff(1, 0) = 1.0;
      if (f.axis() == Axis::Second && order_b >= 1) out.coeff(0, 1) = 1.0;
      break;
    }
    case K::Add: out = child(0, order_a, order_b) + child(1, order_a, order_b); break;
    case K::Sub: out = child(0, order_a, order_b) - child(1, order_a, order_b); break;
    case K::Mul: out = child(0, order_a, order_b) * child(1, order_a, order_b); break;
    case K::Div: {
      Jet2 num = child(0, order_a, order_b);
      Jet2 den = child(1, order_a, order_b);
      if (den.value() == 0.0) {
        throw Error(ErrorKind::PoleAtPoint,
                    "zero denominator at node path " + path_string(path));
      }
      out = divide(num, den);
      break;
    }
    case K::PowInt: {
      Jet2 base = child(0, order_a, order_b);
      if (f.exponent() < 0) {
        if (base.value() == 0.0) {
          throw Error(ErrorKind::PoleAtPoint,
                      "negative power of zero at node path " + path_string(path));
        }
        Jet2 one = Jet2::constant(1.0, order_a, order_b);
        out = divide(one, powi(base, -f.exponent()));
      } else {
        out = powi(base, f.exponent());
      }
      break;
    }
    case K::Exp: {
      Jet2 arg = child(0, order_a, order_b);
      if (arg.value() > kExpOverflowArgument) {
        throw Error(ErrorKind::Overflow, "exp argument " + format_number(arg.value()) +
                                             " exceeds " +
                                             format_number(kExpOverflowArgument) +
                                             " at node path " + path_string(path));
      }
      out = solitonjet::exp(arg);
      break;
    }
    case K::Derivative: {
      Jet2 inner = child(0, order_a + f.derivative_a(), order_b + f.derivative_b());
      out = inner.derivative(Axis::First, f.derivative_a())
                .derivative(Axis::Second, f.derivative_b());
      break;
    }
  }
  if (!out.all_finite()) {
    throw Error(ErrorKind::Overflow, "non-finite value at node path " + path_string(path));
  }
  memo_.insert_or_assign(f.node(), out);
  if (want_a != order_a || want_b != order_b) return out.truncated(want_a, want_b);
  return out;
}

Jet2 evaluate(const FieldExpr& f, Point2 p, int order_a, int order_b) {
  Evaluator ev(p);
  return ev.evaluate(f, order_a, order_b);
}

double value_at(const FieldExpr& f, Point2 p) { return evaluate(f, p, 0, 0).value(); }

}  // namespace solitonjet
