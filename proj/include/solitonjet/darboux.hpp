#pragma once

#include <utility>

#include "solitonjet/residuals.hpp"
#include "solitonjet/solitons.hpp"

namespace solitonjet {

/// Validation settings for eigenfunction pairs.
struct PairValidation {
  Box box;
  int points = kValidationPoints;
  std::uint64_t seed = kValidationSeed;
  double tolerance = 1e-8;
};

/// Two AKNS eigenfunctions of one potential M with distinct spectral parameters.
class DarbouxPairAkns {
 public:
  /// Checks lambda1 != lambda2, both Lax pairs and any manifolds at validation
  /// points. Throws DegeneratePair or NotEigenfunction.
  static DarbouxPairAkns make(EigenData e1, EigenData e2, FieldExpr potential,
                              const PairValidation& validation = {});

  const EigenData& first() const noexcept { return e1_; }
  const EigenData& second() const noexcept { return e2_; }
  const FieldExpr& potential() const noexcept { return potential_; }

 private:
  DarbouxPairAkns(EigenData e1, EigenData e2, FieldExpr potential)
      : e1_(std::move(e1)), e2_(std::move(e2)), potential_(std::move(potential)) {}

  EigenData e1_, e2_;
  FieldExpr potential_;
};

/// Two NLBq eigenfunction pairs (psi+, psi-) of one potential M.
class DarbouxPairNlbq {
 public:
  static DarbouxPairNlbq make(EigenData e1, EigenData e2, FieldExpr potential,
                              const PairValidation& validation = {});

  const EigenData& first() const noexcept { return e1_; }
  const EigenData& second() const noexcept { return e2_; }
  const FieldExpr& potential() const noexcept { return potential_; }

 private:
  DarbouxPairNlbq(EigenData e1, EigenData e2, FieldExpr potential)
      : e1_(std::move(e1)), e2_(std::move(e2)), potential_(std::move(potential)) {}

  EigenData e1_, e2_;
  FieldExpr potential_;
};

/// Omega = (psi1 psi2_x - psi2 psi1_x) / (lambda1 - lambda2).
FieldExpr omega_akns(const DarbouxPairAkns& p);
/// psi2' = psi2 - psi1 Omega / phi1, with lambda2 and the iterated manifold
/// attached when phi2 is known. Needs phi1.
EigenData darboux_eigen_akns(const DarbouxPairAkns& p);
/// psi2 - Omega, the variant that divides Theta by psi1 instead of phi1.
/// It is not covariant in general; kept for comparison reports.
FieldExpr darboux_eigen_akns_psi_divisor(const DarbouxPairAkns& p);
/// phi2' = phi2 - Omega^2 / phi1.
FieldExpr darboux_manifold_akns(const DarbouxPairAkns& p);
/// tau12 = phi2 phi1 - Omega^2.
FieldExpr tau_akns(const DarbouxPairAkns& p);
/// M + phi_x / phi.
FieldExpr iterate_akns(const FieldExpr& M, const FieldExpr& manifold);

/// (Omega+, Omega-).
std::pair<FieldExpr, FieldExpr> omega_pm_nlbq(const DarbouxPairNlbq& p);
/// psi2'(+/-) = psi2(+/-) - psi1(+/-) Omega(+/-) / phi1.
EigenData darboux_eigen_nlbq(const DarbouxPairNlbq& p);
/// phi2' = phi2 - Omega+ Omega- / phi1.
FieldExpr darboux_manifold_nlbq(const DarbouxPairNlbq& p);
/// tau12 = phi2 phi1 - Omega+ Omega-.
FieldExpr tau_nlbq(const DarbouxPairNlbq& p);
/// (M + phi_x/phi, N + phi_t/phi).
NlbqSolution iterate_nlbq(const NlbqSolution& s, const FieldExpr& manifold);

}  // namespace solitonjet
