#pragma once

#include "solitonjet/residuals.hpp"

namespace solitonjet {

enum class MiuraFamily { SinhGordon, Kaup };

/// Two related solutions m, m_hat and the fields u = m - m_hat, eta = m + m_hat.
struct MiuraPair {
  MiuraFamily family = MiuraFamily::SinhGordon;
  FieldExpr m;
  FieldExpr m_hat;
  FieldExpr u;
  FieldExpr eta;
};

/// Two-component eigenfunction (psi, psi_hat) induced by the Miura map.
struct CoupledEigen {
  FieldExpr psi;
  FieldExpr psi_hat;
  double a = 1.0;
  double a_hat = 1.0;
  double lambda = 0.0;
};

struct MiuraValidation {
  Box box;
  int points = kValidationPoints;
  std::uint64_t seed = kValidationSeed;
  double tolerance = 1e-8;
};

/// m_hat = m + m_xy / (2 m_y). When m_xy vanishes identically on probe points
/// the partner is m itself; a vanishing m_y with nonzero m_xy is a pole.
FieldExpr backlund_partner_akns(const FieldExpr& m, const MiuraValidation& probe = {});
/// m_hat = m + (m_xx - m_t) / (2 m_x), with the same degenerate-case rule.
FieldExpr backlund_partner_nlbq(const FieldExpr& m, const MiuraValidation& probe = {});

/// Validates the coupled pair equations for m, m_hat; throws NotBacklundPair.
MiuraPair shg_from_pair(const FieldExpr& m, const FieldExpr& m_hat, const MiuraValidation& v = {});
MiuraPair kaup_from_pair(const FieldExpr& m, const FieldExpr& m_hat, const MiuraValidation& v = {});

/// psi_hat = (psi_x + u psi) / a, a_hat = -lambda / a. Checks the first-order
/// system; throws NotEigenfunction.
CoupledEigen shg_coupled_eigen(const FieldExpr& psi, const FieldExpr& u, double a, double lambda,
                               const MiuraValidation& v = {});

/// Minus branch: psi_hat- = (psi-_x + (u + lambda) psi-) / a.
CoupledEigen kaup_coupled_eigen_minus(const FieldExpr& psi_minus, const FieldExpr& u, const FieldExpr& eta,
                                      double a, double lambda, const MiuraValidation& v = {});
/// Plus branch: psi_hat+ = -2 a_hat psi+_x / (u_x + eta_x). Result has a = 0
/// unset in the sense that only a_hat is meaningful.
CoupledEigen kaup_coupled_eigen_plus(const FieldExpr& psi_plus, const FieldExpr& u, const FieldExpr& eta,
                                     double a_hat, double lambda, const MiuraValidation& v = {});

/// phi_hat = (psi psi_hat - a_hat phi) / a, the manifold of m_hat coupled to phi.
FieldExpr shg_hat_manifold(const CoupledEigen& e, const FieldExpr& phi);
/// phi_hat = (psi- psi_hat+ - a_hat phi) / a.
FieldExpr kaup_hat_manifold(const FieldExpr& psi_minus, const FieldExpr& psi_hat_plus, double a, double a_hat,
                            const FieldExpr& phi);

/// Worst residual over the sinh-Gordon coupling relations for the manifolds.
ReportEntry shg_coupling_check(const MiuraPair& pair, const CoupledEigen& eigen, const FieldExpr& phi,
                               const FieldExpr& phi_hat, const MiuraValidation& v = {});
/// Worst residual over the Kaup coupling relations.
ReportEntry kaup_coupling_check(const MiuraPair& pair, const CoupledEigen& minus, const CoupledEigen& plus,
                                const FieldExpr& phi, const FieldExpr& phi_hat, const MiuraValidation& v = {});

}  // namespace solitonjet
