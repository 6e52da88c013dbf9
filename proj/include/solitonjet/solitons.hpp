#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "solitonjet/field.hpp"

namespace solitonjet {

enum class Family { Akns, Nlbq };

std::string_view to_string(Family f);

/// One soliton mode: wavenumber k (AKNS) or a (NLBq), and offset x0.
struct Mode {
  double k = 1.0;
  double x0 = 0.0;
};

struct SolitonSpec {
  Family family = Family::Akns;
  double a0 = 0.0;
  std::vector<Mode> modes;  // one or two
};

/// Throws SingularSpec / InvalidMode naming the violated inequality.
void validate(const SolitonSpec& spec);

/// Eigenfunction data. For NLBq `psi` is the plus branch and `psi_minus` is set.
struct EigenData {
  FieldExpr psi;
  std::optional<FieldExpr> psi_minus;
  double lambda = 0.0;
  std::optional<FieldExpr> manifold;
};

/// NLBq solution: M and its partner N with N_x = M_t.
struct NlbqSolution {
  FieldExpr M;
  FieldExpr N;
};

// AKNS, coordinates (x, y).

/// M = a0 y.
FieldExpr akns_seed(double a0);
/// psi = exp(k x - (a0/k) y), lambda = -k^2, phi = (exp(2 k x0) + psi^2)/(2k).
EigenData akns_eigen(double k, double a0, double x0 = 0.0);
/// F = exp(2k (x - a0 y / k^2 - x0)).
FieldExpr akns_wave(const Mode& mode, double a0);
/// ((k1 - k2)/(k1 + k2))^2.
double akns_interaction(double k1, double k2);
/// Omega of two seed eigenfunctions: psi1 psi2 / (k1 + k2).
FieldExpr akns_seed_omega(const Mode& m1, const Mode& m2, double a0);
/// tau as the product-minus-square form built from seed eigenfunctions.
FieldExpr akns_tau_product(const Mode& m1, const Mode& m2, double a0);
/// tau as alpha1 alpha2 / (4 k1 k2) (1 + F1 + F2 + A12 F1 F2).
FieldExpr akns_tau_closed(const Mode& m1, const Mode& m2, double a0);
/// phi1 = alpha/(2k) (1 + F).
FieldExpr akns_manifold_closed(const Mode& mode, double a0);
/// a0 y + phi1_x/phi1 or a0 y + tau_x/tau.
FieldExpr akns_soliton(const SolitonSpec& spec);

// NLBq, coordinates (x, t).

/// M = a0 x, N = 2 a0^2 t.
NlbqSolution nlbq_seed(double a0);
/// psi+ = exp(a (x - a t)), psi- = exp(-(a0/a)(x - (a0/a) t)), lambda = a + a0/a,
/// phi = a/(a^2 - a0) (alpha + psi+ psi-), alpha = exp((a - a0/a) x0).
EigenData nlbq_eigen(double a, double a0, double x0 = 0.0);
/// F = psi+ psi- / alpha.
FieldExpr nlbq_wave(const Mode& mode, double a0);
/// a0 ((a2 - a1)/(a1 a2 - a0))^2.
double nlbq_interaction(double a1, double a2, double a0);
/// Omega+ and Omega- for two seed eigenfunction pairs.
std::pair<FieldExpr, FieldExpr> nlbq_seed_omega(const Mode& m1, const Mode& m2, double a0);
FieldExpr nlbq_tau_product(const Mode& m1, const Mode& m2, double a0);
FieldExpr nlbq_tau_closed(const Mode& m1, const Mode& m2, double a0);
FieldExpr nlbq_manifold_closed(const Mode& mode, double a0);
NlbqSolution nlbq_soliton(const SolitonSpec& spec);

}  // namespace solitonjet
