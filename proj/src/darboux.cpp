#include "solitonjet/darboux.hpp"

#include <algorithm>
#include <string>

#include "solitonjet/error.hpp"

namespace solitonjet {

namespace {

using F = FieldExpr;

void require_distinct(double l1, double l2) {
  if (l1 == l2) {
    throw Error(ErrorKind::DegeneratePair,
                "eigenfunction pair needs distinct spectral parameters, both are " + format_number(l1));
  }
}

const F& manifold_of(const EigenData& e, const char* which) {
  if (!e.manifold) {
    throw Error(ErrorKind::MissingManifold, std::string(which) + " eigenfunction has no singular manifold");
  }
  return *e.manifold;
}

const F& minus_of(const EigenData& e, const char* which) {
  if (!e.psi_minus) {
    throw Error(ErrorKind::InvalidArgument, std::string(which) + " eigenfunction lacks its minus branch");
  }
  return *e.psi_minus;
}

void check(EquationId id, const Bindings& b, std::span<const Point2> pts, double tol, const std::string& what) {
  const ScanEntry s = scan_points(id, b, pts);
  if (s.max_relative_residual > tol) {
    throw Error(ErrorKind::NotEigenfunction,
                what + ": " + std::string(to_string(id)) + " residual " + format_number(s.max_relative_residual) +
                    " at (" + format_number(s.worst_point.a) + ", " + format_number(s.worst_point.b) +
                    ") exceeds " + format_number(tol));
  }
}

std::vector<F> fields_of(const EigenData& e) {
  std::vector<F> out{e.psi};
  if (e.psi_minus) out.push_back(*e.psi_minus);
  if (e.manifold) out.push_back(*e.manifold);
  return out;
}

}  // namespace

DarbouxPairAkns DarbouxPairAkns::make(EigenData e1, EigenData e2, FieldExpr potential,
                                      const PairValidation& validation) {
  require_distinct(e1.lambda, e2.lambda);
  std::vector<F> fields = fields_of(e1);
  for (F& f : fields_of(e2)) fields.push_back(std::move(f));
  fields.push_back(potential);
  const std::vector<Point2> pts =
      usable_points(fields, validation.box, validation.points, validation.seed);
  int index = 1;
  for (const EigenData* e : {&e1, &e2}) {
    const std::string what = "AKNS eigenfunction " + std::to_string(index++);
    Bindings b;
    b.set(Role::M, potential).set(Role::psi, e->psi).set(Scalar::lambda, e->lambda);
    check(EquationId::AknsLaxX, b, pts, validation.tolerance, what);
    check(EquationId::AknsLaxY, b, pts, validation.tolerance, what);
    if (e->manifold) {
      b.set(Role::phi, *e->manifold);
      check(EquationId::AknsManifold, b, pts, validation.tolerance, what);
    }
  }
  return DarbouxPairAkns(std::move(e1), std::move(e2), std::move(potential));
}

DarbouxPairNlbq DarbouxPairNlbq::make(EigenData e1, EigenData e2, FieldExpr potential,
                                      const PairValidation& validation) {
  require_distinct(e1.lambda, e2.lambda);
  (void)minus_of(e1, "first");
  (void)minus_of(e2, "second");
  std::vector<F> fields = fields_of(e1);
  for (F& f : fields_of(e2)) fields.push_back(std::move(f));
  fields.push_back(potential);
  const std::vector<Point2> pts =
      usable_points(fields, validation.box, validation.points, validation.seed);
  int index = 1;
  for (const EigenData* e : {&e1, &e2}) {
    const std::string what = "NLBq eigenfunction " + std::to_string(index++);
    Bindings b;
    b.set(Role::M, potential)
        .set(Role::psi_plus, e->psi)
        .set(Role::psi_minus, *e->psi_minus)
        .set(Scalar::lambda, e->lambda);
    check(EquationId::NlbqLaxPlus, b, pts, validation.tolerance, what);
    check(EquationId::NlbqLaxMinus, b, pts, validation.tolerance, what);
    if (e->manifold) {
      b.set(Role::phi, *e->manifold);
      check(EquationId::NlbqManifold, b, pts, validation.tolerance, what);
    }
  }
  return DarbouxPairNlbq(std::move(e1), std::move(e2), std::move(potential));
}

FieldExpr omega_akns(const DarbouxPairAkns& p) {
  const EigenData &e1 = p.first(), &e2 = p.second();
  require_distinct(e1.lambda, e2.lambda);
  return (e1.psi * dx(e2.psi) - e2.psi * dx(e1.psi)) / (e1.lambda - e2.lambda);
}

EigenData darboux_eigen_akns(const DarbouxPairAkns& p) {
  const F& phi1 = manifold_of(p.first(), "first");
  EigenData out;
  out.psi = p.second().psi - p.first().psi * omega_akns(p) / phi1;
  out.lambda = p.second().lambda;
  if (p.second().manifold) out.manifold = darboux_manifold_akns(p);
  return out;
}

FieldExpr darboux_eigen_akns_psi_divisor(const DarbouxPairAkns& p) { return p.second().psi - omega_akns(p); }

FieldExpr darboux_manifold_akns(const DarbouxPairAkns& p) {
  const F& phi1 = manifold_of(p.first(), "first");
  const F& phi2 = manifold_of(p.second(), "second");
  const F omega = omega_akns(p);
  return phi2 - omega * omega / phi1;
}

FieldExpr tau_akns(const DarbouxPairAkns& p) {
  const F& phi1 = manifold_of(p.first(), "first");
  const F& phi2 = manifold_of(p.second(), "second");
  const F omega = omega_akns(p);
  return phi2 * phi1 - omega * omega;
}

FieldExpr iterate_akns(const FieldExpr& M, const FieldExpr& manifold) { return M + dx(manifold) / manifold; }

std::pair<FieldExpr, FieldExpr> omega_pm_nlbq(const DarbouxPairNlbq& p) {
  const EigenData &e1 = p.first(), &e2 = p.second();
  require_distinct(e1.lambda, e2.lambda);
  const F &p1 = e1.psi, &p2 = e2.psi;
  const F p1x = dx(p1), p2x = dx(p2);
  const F bracket = (p1 * p2x - p2 * p1x) / (e2.lambda - e1.lambda);
  return {minus_of(e1, "first") / p1x * bracket, minus_of(e2, "second") / p2x * bracket};
}

EigenData darboux_eigen_nlbq(const DarbouxPairNlbq& p) {
  const F& phi1 = manifold_of(p.first(), "first");
  const auto [op, om] = omega_pm_nlbq(p);
  EigenData out;
  out.psi = p.second().psi - p.first().psi * op / phi1;
  out.psi_minus = minus_of(p.second(), "second") - minus_of(p.first(), "first") * om / phi1;
  out.lambda = p.second().lambda;
  if (p.second().manifold) out.manifold = darboux_manifold_nlbq(p);
  return out;
}

FieldExpr darboux_manifold_nlbq(const DarbouxPairNlbq& p) {
  const F& phi1 = manifold_of(p.first(), "first");
  const F& phi2 = manifold_of(p.second(), "second");
  const auto [op, om] = omega_pm_nlbq(p);
  return phi2 - op * om / phi1;
}

FieldExpr tau_nlbq(const DarbouxPairNlbq& p) {
  const F& phi1 = manifold_of(p.first(), "first");
  const F& phi2 = manifold_of(p.second(), "second");
  const auto [op, om] = omega_pm_nlbq(p);
  return phi2 * phi1 - op * om;
}

NlbqSolution iterate_nlbq(const NlbqSolution& s, const FieldExpr& manifold) {
  return {s.M + dx(manifold) / manifold, s.N + dsecond(manifold) / manifold};
}

}  // namespace solitonjet
