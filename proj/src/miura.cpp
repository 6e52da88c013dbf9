#include "solitonjet/miura.hpp"

#include <cmath>
#include <string>

#include "solitonjet/error.hpp"

namespace solitonjet {

namespace {

using F = FieldExpr;

std::string where(const ScanEntry& s) {
  return " at (" + format_number(s.worst_point.a) + ", " + format_number(s.worst_point.b) + ")";
}

/// Numerator and denominator of a partner formula, probed at raw random points.
F partner(const F& m, const F& numerator, const F& denominator, const MiuraValidation& probe) {
  bool numerator_zero = true;
  bool denominator_zero = true;
  for (const Point2& p : random_points(probe.box, probe.points, probe.seed)) {
    Evaluator ev(p);
    if (ev.evaluate(numerator, 0, 0).value() != 0.0) numerator_zero = false;
    if (ev.evaluate(denominator, 0, 0).value() != 0.0) denominator_zero = false;
  }
  if (numerator_zero) return m;
  if (denominator_zero) {
    throw Error(ErrorKind::PoleAtPoint, "Backlund partner denominator vanishes identically with nonzero numerator");
  }
  return m + numerator / denominator;
}

ScanEntry scan_validation(EquationId id, const Bindings& b, const std::vector<F>& fields, const MiuraValidation& v) {
  const std::vector<Point2> pts = usable_points(fields, v.box, v.points, v.seed);
  return scan_points(id, b, pts);
}

void require_nonzero(double value, const char* name) {
  if (value == 0.0 || !std::isfinite(value)) {
    throw Error(ErrorKind::InvalidArgument, std::string(name) + " must be finite and nonzero");
  }
}

}  // namespace

FieldExpr backlund_partner_akns(const FieldExpr& m, const MiuraValidation& probe) {
  return partner(m, partial(m, 1, 1), 2.0 * partial(m, 0, 1), probe);
}

FieldExpr backlund_partner_nlbq(const FieldExpr& m, const MiuraValidation& probe) {
  return partner(m, partial(m, 2, 0) - partial(m, 0, 1), 2.0 * partial(m, 1, 0), probe);
}

MiuraPair shg_from_pair(const FieldExpr& m, const FieldExpr& m_hat, const MiuraValidation& v) {
  Bindings b;
  b.set(Role::m, m).set(Role::m_hat, m_hat);
  const ScanEntry s = scan_validation(EquationId::ShgMm, b, {m, m_hat}, v);
  if (s.max_relative_residual > v.tolerance) {
    throw Error(ErrorKind::NotBacklundPair,
                "sinh-Gordon pair residual " + format_number(s.max_relative_residual) + where(s));
  }
  return {MiuraFamily::SinhGordon, m, m_hat, m - m_hat, m + m_hat};
}

MiuraPair kaup_from_pair(const FieldExpr& m, const FieldExpr& m_hat, const MiuraValidation& v) {
  Bindings b;
  b.set(Role::m, m).set(Role::m_hat, m_hat);
  const ScanEntry s = scan_validation(EquationId::KaupMm, b, {m, m_hat}, v);
  if (s.max_relative_residual > v.tolerance) {
    throw Error(ErrorKind::NotBacklundPair, "Kaup pair residual " + format_number(s.max_relative_residual) + where(s));
  }
  return {MiuraFamily::Kaup, m, m_hat, m - m_hat, m + m_hat};
}

CoupledEigen shg_coupled_eigen(const FieldExpr& psi, const FieldExpr& u, double a, double lambda,
                               const MiuraValidation& v) {
  require_nonzero(a, "a");
  CoupledEigen e;
  e.psi = psi;
  e.psi_hat = (dx(psi) + u * psi) / a;
  e.a = a;
  e.a_hat = -lambda / a;
  e.lambda = lambda;
  Bindings b;
  b.set(Role::u, u).set(Role::psi, e.psi).set(Role::psi_hat, e.psi_hat);
  b.set(Scalar::a, e.a).set(Scalar::a_hat, e.a_hat);
  const ScanEntry s = scan_validation(EquationId::ShgFirstOrder, b, {psi, e.psi_hat, u}, v);
  if (s.max_relative_residual > v.tolerance) {
    throw Error(ErrorKind::NotEigenfunction,
                "psi does not generate a sinh-Gordon eigenfunction: residual " +
                    format_number(s.max_relative_residual) + where(s));
  }
  return e;
}

CoupledEigen kaup_coupled_eigen_minus(const FieldExpr& psi_minus, const FieldExpr& u, const FieldExpr& eta, double a,
                                      double lambda, const MiuraValidation& v) {
  require_nonzero(a, "a");
  CoupledEigen e;
  e.psi = psi_minus;
  e.psi_hat = (dx(psi_minus) + (u + lambda) * psi_minus) / a;
  e.a = a;
  e.a_hat = 0.0;
  e.lambda = lambda;
  // a psih-_x = (u_x - eta_x) psi- / 2
  Bindings b;
  b.set(Role::lhs, a * dx(e.psi_hat)).set(Role::rhs, 0.5 * (dx(u) - dx(eta)) * psi_minus);
  const ScanEntry s = scan_validation(EquationId::FieldEqual, b, {psi_minus, e.psi_hat, u, eta}, v);
  if (s.max_relative_residual > v.tolerance) {
    throw Error(ErrorKind::NotEigenfunction,
                "psi- does not generate a Kaup minus eigenfunction: residual " +
                    format_number(s.max_relative_residual) + where(s));
  }
  return e;
}

CoupledEigen kaup_coupled_eigen_plus(const FieldExpr& psi_plus, const FieldExpr& u, const FieldExpr& eta,
                                     double a_hat, double lambda, const MiuraValidation& v) {
  require_nonzero(a_hat, "a_hat");
  CoupledEigen e;
  e.psi = psi_plus;
  e.psi_hat = -2.0 * a_hat * dx(psi_plus) / (dx(u) + dx(eta));
  e.a = 0.0;
  e.a_hat = a_hat;
  e.lambda = lambda;
  // psih+_x = a_hat psi+ + (u + lambda) psih+
  Bindings b;
  b.set(Role::lhs, dx(e.psi_hat)).set(Role::rhs, a_hat * psi_plus + (u + lambda) * e.psi_hat);
  const ScanEntry s = scan_validation(EquationId::FieldEqual, b, {psi_plus, e.psi_hat, u, eta}, v);
  if (s.max_relative_residual > v.tolerance) {
    throw Error(ErrorKind::NotEigenfunction,
                "psi+ does not generate a Kaup plus eigenfunction: residual " +
                    format_number(s.max_relative_residual) + where(s));
  }
  return e;
}

FieldExpr shg_hat_manifold(const CoupledEigen& e, const FieldExpr& phi) {
  require_nonzero(e.a, "a");
  return (e.psi * e.psi_hat - e.a_hat * phi) / e.a;
}

FieldExpr kaup_hat_manifold(const FieldExpr& psi_minus, const FieldExpr& psi_hat_plus, double a, double a_hat,
                            const FieldExpr& phi) {
  require_nonzero(a, "a");
  return (psi_minus * psi_hat_plus - a_hat * phi) / a;
}

namespace {

ReportEntry worst_of(const std::string& label, std::initializer_list<EquationId> ids, const Bindings& b,
                     const std::vector<F>& fields, const MiuraValidation& v) {
  const std::vector<Point2> pts = usable_points(fields, v.box, v.points, v.seed);
  ScanEntry worst;
  bool first = true;
  std::string which;
  for (EquationId id : ids) {
    const ScanEntry s = scan_points(id, b, pts);
    if (first || s.max_relative_residual > worst.max_relative_residual) {
      worst = s;
      first = false;
    }
  }
  ReportEntry e = make_entry(label, worst, v.tolerance);
  e.note = "worst of " + std::to_string(ids.size()) + " relations, attained by " + e.equation;
  return e;
}

}  // namespace

ReportEntry shg_coupling_check(const MiuraPair& pair, const CoupledEigen& eigen, const FieldExpr& phi,
                               const FieldExpr& phi_hat, const MiuraValidation& v) {
  Bindings b;
  b.set(Role::u, pair.u).set(Role::phi, phi).set(Role::phi_hat, phi_hat);
  b.set(Role::psi, eigen.psi).set(Role::psi_hat, eigen.psi_hat);
  b.set(Scalar::a, eigen.a).set(Scalar::a_hat, eigen.a_hat);
  return worst_of("sinh-Gordon coupling",
                  {EquationId::ShgCoupling, EquationId::ShgCouplingDx, EquationId::ShgCouplingAmplitudes,
                   EquationId::ShgCouplingInt, EquationId::ShgCouplingIntDx},
                  b, {pair.u, phi, phi_hat, eigen.psi, eigen.psi_hat}, v);
}

ReportEntry kaup_coupling_check(const MiuraPair& pair, const CoupledEigen& minus, const CoupledEigen& plus,
                                const FieldExpr& phi, const FieldExpr& phi_hat, const MiuraValidation& v) {
  Bindings b;
  b.set(Role::u, pair.u).set(Role::eta, pair.eta).set(Role::phi, phi).set(Role::phi_hat, phi_hat);
  b.set(Role::psi_minus, minus.psi).set(Role::psi_hat_minus, minus.psi_hat);
  b.set(Role::psi_plus, plus.psi).set(Role::psi_hat_plus, plus.psi_hat);
  b.set(Scalar::a, minus.a).set(Scalar::a_hat, plus.a_hat).set(Scalar::lambda, minus.lambda);
  return worst_of("Kaup coupling",
                  {EquationId::KaupCoupling, EquationId::KaupCouplingDx, EquationId::KaupCouplingAmplitudes},
                  b, {pair.u, phi, phi_hat, minus.psi, minus.psi_hat, plus.psi, plus.psi_hat}, v);
}

}  // namespace solitonjet
