#pragma once

#include <string>
#include <vector>

#include "solitonjet/field.hpp"

namespace solitonjet {

struct KernelCheck {
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
  std::string worst_expression;
  Point2 worst_point;
  int comparisons = 0;
  bool pass = false;
};

struct KernelReport {
  std::vector<KernelCheck> checks;  // finite differences, Leibniz, exp homomorphism
  bool pass = false;
};

/// Thirty smooth, pole-free expressions over [-2, 2]^2.
const std::vector<std::string>& kernel_corpus();

/// Partial (i, k) by a central difference of step h with one Richardson step.
/// Order one differences the values; higher orders difference the jet's
/// (i-1, k) or (i, k-1) partial, so each order is checked against the one below.
double richardson_partial(const FieldExpr& f, Point2 p, int i, int k, double h = 1e-4);

/// Runs the three kernel checks over the corpus at `points` random points.
KernelReport kernel_self_test(int points = 8, std::uint64_t seed = 20240611, double fd_tolerance = 1e-6,
                              double identity_tolerance = 1e-12);

}  // namespace solitonjet
