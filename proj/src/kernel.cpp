#include "solitonjet/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "solitonjet/parser.hpp"

namespace solitonjet {

const std::vector<std::string>& kernel_corpus() {
  static const std::vector<std::string> corpus = {
      "x",
      "x*y",
      "x^3*y^2 - 2*x*y + 1",
      "exp(x)",
      "exp(-y)",
      "exp(0.7*x - 0.3*y)",
      "exp(x*y)",
      "exp(-x^2 - y^2)",
      "1/(2 + x^2)",
      "1/(3 + x*x + y*y)",
      "x/(1 + y^2)",
      "exp(x)/(1 + exp(x))",
      "exp(2*x - y)/(1 + exp(2*x - y))^2",
      "(1 + exp(x - y))^-2",
      "exp(exp(0.3*x))",
      "exp(0.5*x)*exp(-0.25*y) + y^4",
      "(x^2 + y^2 + 1)^-1 * exp(0.2*x*y)",
      "x^5 - 3*x^2*y^3",
      "(x - y)^4 / (5 + (x + y)^2)",
      "exp(x/(2 + y^2))",
      "0.5*y + exp(2*x - y)/(1 + exp(2*x - y))",
      "1 + exp(2*x - 0.5*y) + exp(4*x - 0.25*y) + 0.1*exp(6*x - 0.75*y)",
      "x + exp(1.5*x - 2.25*y)/(0.5 + exp(1.5*x - 2.25*y))",
      "diff(exp(x*y), x)",
      "diff(x^3*exp(y), x, y)",
      "diff(1/(2 + x^2), x, x)",
      "exp(-(x - 1)^2) * (y + 2)",
      "(exp(x) + exp(-x))^-1",
      "(2 + x^2)^-3 + (4 + y^2)^2",
      "exp(0.3*x)*(1 + x*y)/(6 + y^2)",
  };
  return corpus;
}

namespace {

double component(const FieldExpr& f, Point2 p, int i, int k) {
  return evaluate(f, p, std::max(i, 1), std::max(k, 1)).partial(i, k);
}

double relative(double approx, double exact) { return std::abs(approx - exact) / std::max(std::abs(exact), 1.0); }

std::vector<Point2> sample(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<Point2> pts;
  for (int j = 0; j < n; ++j) {
    const double a = u(rng);
    pts.push_back({a, u(rng)});
  }
  return pts;
}

void record(KernelCheck& c, double err, const std::string& expr, Point2 p) {
  ++c.comparisons;
  if (c.comparisons == 1 || err > c.max_error) {
    c.max_error = err;
    c.worst_expression = expr;
    c.worst_point = p;
  }
}

double binom(int n, int r) {
  double out = 1.0;
  for (int j = 1; j <= r; ++j) out = out * (n - r + j) / j;
  return out;
}

}  // namespace

double richardson_partial(const FieldExpr& f, Point2 p, int i, int k, double h) {
  const bool along_a = i > 0;
  const int bi = along_a ? i - 1 : i;
  const int bk = along_a ? k : k - 1;
  auto g = [&](double s) {
    const Point2 q = along_a ? Point2{p.a + s, p.b} : Point2{p.a, p.b + s};
    return bi + bk == 0 ? value_at(f, q) : component(f, q, bi, bk);
  };
  auto central = [&](double step) { return (g(step) - g(-step)) / (2.0 * step); };
  return (4.0 * central(h / 2.0) - central(h)) / 3.0;
}

KernelReport kernel_self_test(int points, std::uint64_t seed, double fd_tolerance, double identity_tolerance) {
  KernelReport r;
  KernelCheck fd{"jet partials vs Richardson finite differences", 0, fd_tolerance, {}, {}, 0, false};
  KernelCheck leibniz{"Leibniz rule for products", 0, identity_tolerance, {}, {}, 0, false};
  KernelCheck expo{"exp(f + g) = exp(f) exp(g)", 0, identity_tolerance, {}, {}, 0, false};

  const auto& corpus = kernel_corpus();
  std::vector<FieldExpr> fields;
  for (const auto& s : corpus) fields.push_back(parse_field(s));
  const std::vector<Point2> pts = sample(points, seed);

  for (std::size_t n = 0; n < fields.size(); ++n) {
    for (Point2 p : pts) {
      const Jet2 j = evaluate(fields[n], p, 3, 3);
      for (int order = 1; order <= 3; ++order) {
        for (int i = 0; i <= order; ++i) {
          const int k = order - i;
          record(fd, relative(richardson_partial(fields[n], p, i, k), j.partial(i, k)), corpus[n], p);
        }
      }
    }
  }

  for (std::size_t n = 0; n < fields.size(); ++n) {
    const std::size_t m = (n * 7 + 3) % fields.size();
    const FieldExpr& f = fields[n];
    const FieldExpr& g = fields[m];
    const std::string label = corpus[n] + " ; " + corpus[m];
    for (Point2 p : pts) {
      const Jet2 jf = evaluate(f, p, 4, 4), jg = evaluate(g, p, 4, 4);
      const Jet2 jfg = evaluate(f * g, p, 4, 4);
      for (int i = 0; i <= 4; ++i) {
        for (int k = 0; k <= 4; ++k) {
          double sum = 0.0, scale = 1.0;
          for (int s = 0; s <= i; ++s) {
            for (int t = 0; t <= k; ++t) {
              const double term = binom(i, s) * binom(k, t) * jf.partial(s, t) * jg.partial(i - s, k - t);
              sum += term;
              scale += std::abs(term);
            }
          }
          record(leibniz, std::abs(jfg.partial(i, k) - sum) / scale, label, p);
        }
      }
      // Squashed exponents keep exp in range for every corpus pair.
      const FieldExpr sf = f / (1.0 + f * f), sg = g / (1.0 + g * g);
      const Jet2 lhs = evaluate(exp(sf + sg), p, 4, 4);
      const Jet2 ef = evaluate(exp(sf), p, 4, 4), eg = evaluate(exp(sg), p, 4, 4);
      const Jet2 rhs = ef * eg;
      for (int i = 0; i <= 4; ++i) {
        for (int k = 0; k <= 4; ++k) {
          const double a = lhs.partial(i, k), b = rhs.partial(i, k);
          record(expo, std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b))), label, p);
        }
      }
    }
  }

  for (KernelCheck* c : {&fd, &leibniz, &expo}) {
    c->pass = c->max_error <= c->tolerance;
    r.checks.push_back(*c);
  }
  r.pass = fd.pass && leibniz.pass && expo.pass;
  return r;
}

}  // namespace solitonjet
