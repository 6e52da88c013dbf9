#include "solitonjet/solitons.hpp"

#include <cmath>
#include <string>

#include "solitonjet/error.hpp"

namespace solitonjet {

namespace {

using F = FieldExpr;

[[noreturn]] void singular(const std::string& what) { throw Error(ErrorKind::SingularSpec, what); }

void require_family(const SolitonSpec& spec, Family f) {
  if (spec.family != f) {
    throw Error(ErrorKind::InvalidArgument,
                "expected a " + std::string(to_string(f)) + " spec, got " + std::string(to_string(spec.family)));
  }
}

void check_akns_mode(double k) {
  if (k == 0.0) throw Error(ErrorKind::InvalidMode, "AKNS mode requires k != 0");
}

void check_nlbq_mode(double a, double a0) {
  if (a == 0.0) throw Error(ErrorKind::InvalidMode, "NLBq mode requires a != 0");
  if (a * a == a0) singular("NLBq mode requires a^2 != a0");
}

F y() { return second_coord(); }
F x() { return x_coord(); }

}  // namespace

std::string_view to_string(Family f) { return f == Family::Akns ? "akns" : "nlbq"; }

void validate(const SolitonSpec& spec) {
  if (spec.modes.empty() || spec.modes.size() > 2) {
    throw Error(ErrorKind::InvalidArgument, "soliton spec needs one or two modes");
  }
  if (!std::isfinite(spec.a0)) throw Error(ErrorKind::InvalidArgument, "a0 must be finite");
  for (const Mode& m : spec.modes) {
    if (!std::isfinite(m.k) || !std::isfinite(m.x0)) {
      throw Error(ErrorKind::InvalidArgument, "mode parameters must be finite");
    }
  }
  if (spec.family == Family::Akns) {
    for (const Mode& m : spec.modes) check_akns_mode(m.k);
    if (spec.modes.size() == 2) {
      const double k1 = spec.modes[0].k, k2 = spec.modes[1].k;
      if (k1 + k2 == 0.0) singular("AKNS two-soliton requires k1 + k2 != 0");
      if (k1 * k1 == k2 * k2) singular("AKNS two-soliton requires k1^2 != k2^2 (distinct lambda)");
    }
  } else {
    for (const Mode& m : spec.modes) check_nlbq_mode(m.k, spec.a0);
    if (spec.modes.size() == 2) {
      const double a1 = spec.modes[0].k, a2 = spec.modes[1].k;
      if (a1 * a2 == spec.a0) singular("NLBq two-soliton requires a1 a2 != a0");
      if (a1 + spec.a0 / a1 == a2 + spec.a0 / a2) singular("NLBq two-soliton requires lambda1 != lambda2");
    }
  }
}

FieldExpr akns_seed(double a0) { return a0 * y(); }

EigenData akns_eigen(double k, double a0, double x0) {
  check_akns_mode(k);
  EigenData e;
  e.psi = exp(k * x() - (a0 / k) * y());
  e.lambda = -k * k;
  e.manifold = (std::exp(2.0 * k * x0) + powi(e.psi, 2)) / (2.0 * k);
  return e;
}

FieldExpr akns_wave(const Mode& mode, double a0) {
  check_akns_mode(mode.k);
  const double k = mode.k;
  return exp(2.0 * k * x() - (2.0 * a0 / k) * y() - 2.0 * k * mode.x0);
}

double akns_interaction(double k1, double k2) {
  if (k1 + k2 == 0.0) singular("AKNS two-soliton requires k1 + k2 != 0");
  const double r = (k1 - k2) / (k1 + k2);
  return r * r;
}

FieldExpr akns_seed_omega(const Mode& m1, const Mode& m2, double a0) {
  if (m1.k + m2.k == 0.0) singular("AKNS two-soliton requires k1 + k2 != 0");
  return akns_eigen(m1.k, a0).psi * akns_eigen(m2.k, a0).psi / (m1.k + m2.k);
}

FieldExpr akns_tau_product(const Mode& m1, const Mode& m2, double a0) {
  const EigenData e1 = akns_eigen(m1.k, a0, m1.x0);
  const EigenData e2 = akns_eigen(m2.k, a0, m2.x0);
  const double alpha1 = std::exp(2.0 * m1.k * m1.x0), alpha2 = std::exp(2.0 * m2.k * m2.x0);
  const double s = m1.k + m2.k;
  if (s == 0.0) singular("AKNS two-soliton requires k1 + k2 != 0");
  return (alpha1 + powi(e1.psi, 2)) * (alpha2 + powi(e2.psi, 2)) / (4.0 * m1.k * m2.k) -
         powi(e1.psi, 2) * powi(e2.psi, 2) / (s * s);
}

FieldExpr akns_tau_closed(const Mode& m1, const Mode& m2, double a0) {
  const double alpha1 = std::exp(2.0 * m1.k * m1.x0), alpha2 = std::exp(2.0 * m2.k * m2.x0);
  const F f1 = akns_wave(m1, a0), f2 = akns_wave(m2, a0);
  const double a12 = akns_interaction(m1.k, m2.k);
  return (alpha1 * alpha2 / (4.0 * m1.k * m2.k)) * (1.0 + f1 + f2 + a12 * f1 * f2);
}

FieldExpr akns_manifold_closed(const Mode& mode, double a0) {
  const double alpha = std::exp(2.0 * mode.k * mode.x0);
  return (alpha / (2.0 * mode.k)) * (1.0 + akns_wave(mode, a0));
}

FieldExpr akns_soliton(const SolitonSpec& spec) {
  require_family(spec, Family::Akns);
  validate(spec);
  const F base = akns_seed(spec.a0);
  const F g = spec.modes.size() == 1 ? akns_manifold_closed(spec.modes[0], spec.a0)
                                     : akns_tau_closed(spec.modes[0], spec.modes[1], spec.a0);
  return base + dx(g) / g;
}

NlbqSolution nlbq_seed(double a0) { return {a0 * x(), (2.0 * a0 * a0) * second_coord()}; }

EigenData nlbq_eigen(double a, double a0, double x0) {
  check_nlbq_mode(a, a0);
  const double r = a0 / a;
  EigenData e;
  e.psi = exp(a * x() - (a * a) * second_coord());
  e.psi_minus = exp(-r * x() + (r * r) * second_coord());
  e.lambda = a + r;
  const double alpha = std::exp((a - r) * x0);
  e.manifold = (a / (a * a - a0)) * (alpha + e.psi * *e.psi_minus);
  return e;
}

FieldExpr nlbq_wave(const Mode& mode, double a0) {
  check_nlbq_mode(mode.k, a0);
  const double a = mode.k, r = a0 / a;
  return exp((a - r) * x() - (a * a - r * r) * second_coord() - (a - r) * mode.x0);
}

double nlbq_interaction(double a1, double a2, double a0) {
  if (a1 * a2 == a0) singular("NLBq two-soliton requires a1 a2 != a0");
  const double r = (a2 - a1) / (a1 * a2 - a0);
  return a0 * r * r;
}

std::pair<FieldExpr, FieldExpr> nlbq_seed_omega(const Mode& m1, const Mode& m2, double a0) {
  const double a1 = m1.k, a2 = m2.k;
  if (a1 * a2 == a0) singular("NLBq two-soliton requires a1 a2 != a0");
  const EigenData e1 = nlbq_eigen(a1, a0), e2 = nlbq_eigen(a2, a0);
  const double d = a2 * a1 - a0;
  return {(a2 / d) * *e1.psi_minus * e2.psi, (a1 / d) * e1.psi * *e2.psi_minus};
}

FieldExpr nlbq_tau_product(const Mode& m1, const Mode& m2, double a0) {
  const double a1 = m1.k, a2 = m2.k;
  if (a1 * a2 == a0) singular("NLBq two-soliton requires a1 a2 != a0");
  const EigenData e1 = nlbq_eigen(a1, a0), e2 = nlbq_eigen(a2, a0);
  const double alpha1 = std::exp((a1 - a0 / a1) * m1.x0), alpha2 = std::exp((a2 - a0 / a2) * m2.x0);
  const F p1 = e1.psi * *e1.psi_minus, p2 = e2.psi * *e2.psi_minus;
  const double d = a2 * a1 - a0;
  return (a1 * a2 / ((a1 * a1 - a0) * (a2 * a2 - a0))) * (alpha1 + p1) * (alpha2 + p2) -
         (a1 * a2 / (d * d)) * (*e1.psi_minus * e2.psi * e1.psi * *e2.psi_minus);
}

FieldExpr nlbq_tau_closed(const Mode& m1, const Mode& m2, double a0) {
  const double a1 = m1.k, a2 = m2.k;
  const double alpha1 = std::exp((a1 - a0 / a1) * m1.x0), alpha2 = std::exp((a2 - a0 / a2) * m2.x0);
  const F f1 = nlbq_wave(m1, a0), f2 = nlbq_wave(m2, a0);
  const double a12 = nlbq_interaction(a1, a2, a0);
  const double c = a1 * a2 * alpha1 * alpha2 / ((a1 * a1 - a0) * (a2 * a2 - a0));
  return c * (1.0 + f1 + f2 + a12 * f1 * f2);
}

FieldExpr nlbq_manifold_closed(const Mode& mode, double a0) {
  const double a = mode.k;
  check_nlbq_mode(a, a0);
  const double alpha = std::exp((a - a0 / a) * mode.x0);
  return (alpha * a / (a * a - a0)) * (1.0 + nlbq_wave(mode, a0));
}

NlbqSolution nlbq_soliton(const SolitonSpec& spec) {
  require_family(spec, Family::Nlbq);
  validate(spec);
  const NlbqSolution seed = nlbq_seed(spec.a0);
  const F g = spec.modes.size() == 1 ? nlbq_manifold_closed(spec.modes[0], spec.a0)
                                     : nlbq_tau_closed(spec.modes[0], spec.modes[1], spec.a0);
  return {seed.M + dx(g) / g, seed.N + dsecond(g) / g};
}

}  // namespace solitonjet
