#include <doctest.h>

#include <cmath>
#include <map>
#include <string>

#include "solitonjet/darboux.hpp"
#include "solitonjet/error.hpp"
#include "solitonjet/miura.hpp"
#include "solitonjet/parser.hpp"

using namespace solitonjet;

namespace {

double grid(EquationId id, const Bindings& b) {
  return scan_grid(id, b, Box{}, kDefaultGridSize, kDefaultGridSize).max_relative_residual;
}

// One complete binding set per family, built from the one-soliton chains.
std::map<std::string, Bindings> fixtures() {
  std::map<std::string, Bindings> out;

  const FieldExpr akns_seed_m = akns_seed(0.5);
  const auto ap = DarbouxPairAkns::make(akns_eigen(1.0, 0.5), akns_eigen(2.0, 0.5), akns_seed_m);
  const EigenData am = darboux_eigen_akns(ap);
  const FieldExpr M1 = iterate_akns(akns_seed_m, *ap.first().manifold);
  Bindings akns;
  akns.set(Role::M, M1).set(Role::psi, am.psi).set(Role::phi, *am.manifold).set(Scalar::lambda, am.lambda);
  out["AKNS"] = akns;

  const NlbqSolution ns = nlbq_seed(1.0);
  const auto np = DarbouxPairNlbq::make(nlbq_eigen(2.0, 1.0), nlbq_eigen(3.0, 1.0), ns.M);
  const EigenData nm = darboux_eigen_nlbq(np);
  const NlbqSolution S1 = iterate_nlbq(ns, *np.first().manifold);
  Bindings nlbq;
  nlbq.set(Role::M, S1.M).set(Role::N, S1.N).set(Role::psi_plus, nm.psi).set(Role::psi_minus, *nm.psi_minus);
  nlbq.set(Role::phi, *nm.manifold).set(Scalar::lambda, nm.lambda);
  out["NLBQ"] = nlbq;
  out["APPD"] = nlbq;

  const MiuraPair sp = shg_from_pair(M1, backlund_partner_akns(M1));
  const CoupledEigen se = shg_coupled_eigen(am.psi, sp.u, 0.7, am.lambda);
  Bindings shg;
  shg.set(Role::m, sp.m).set(Role::m_hat, sp.m_hat).set(Role::u, sp.u).set(Role::eta, sp.eta);
  shg.set(Role::psi, se.psi).set(Role::psi_hat, se.psi_hat).set(Role::phi, *am.manifold);
  shg.set(Role::phi_hat, shg_hat_manifold(se, *am.manifold));
  shg.set(Scalar::a, se.a).set(Scalar::a_hat, se.a_hat).set(Scalar::lambda, se.lambda);
  out["SHG"] = shg;

  const MiuraPair kp = kaup_from_pair(S1.M, backlund_partner_nlbq(S1.M));
  const CoupledEigen km = kaup_coupled_eigen_minus(*nm.psi_minus, kp.u, kp.eta, 0.7, nm.lambda);
  const CoupledEigen kpl = kaup_coupled_eigen_plus(nm.psi, kp.u, kp.eta, -1.3, nm.lambda);
  Bindings kaup;
  kaup.set(Role::m, kp.m).set(Role::m_hat, kp.m_hat).set(Role::u, kp.u).set(Role::eta, kp.eta);
  kaup.set(Role::psi_minus, km.psi).set(Role::psi_hat_minus, km.psi_hat);
  kaup.set(Role::psi_plus, kpl.psi).set(Role::psi_hat_plus, kpl.psi_hat).set(Role::phi, *nm.manifold);
  kaup.set(Role::phi_hat, kaup_hat_manifold(km.psi, kpl.psi_hat, 0.7, -1.3, *nm.manifold));
  kaup.set(Scalar::a, 0.7).set(Scalar::a_hat, -1.3).set(Scalar::lambda, nm.lambda);
  out["KAUP"] = kaup;

  const FieldExpr f = parse_field("exp(x - y) / (2 + x*x)");
  Bindings eq;
  eq.set(Role::lhs, f).set(Role::rhs, f);
  out["FIELD"] = eq;
  return out;
}

std::string family_of(std::string_view name) {
  return std::string(name.substr(0, name.find('_')));
}

// Identities in their inputs: v, q, w are built from phi, and the reflection
// maps the plus-branch operator onto the minus-branch one for any M and psi.
bool holds_identically(EquationId id) {
  return id == EquationId::AknsSmCompat || id == EquationId::NlbqSm1 || id == EquationId::NlbqSymmetry;
}

}  // namespace

TEST_CASE("every equation vanishes on its construction and detects a corrupted input") {
  const auto fx = fixtures();
  const FieldExpr bump = 1.0 + 0.3 * x_coord() * second_coord();
  for (const EquationInfo& info : equation_catalog()) {
    CAPTURE(info.name);
    const Bindings& good = fx.at(family_of(info.name));
    CHECK(grid(info.id, good) <= 1e-8);

    double worst = 0.0;
    for (Role r : info.roles) {
      Bindings bad = good;
      bad.set(r, good.field(r) * bump);
      worst = std::max(worst, grid(info.id, bad));
    }
    for (Scalar s : info.scalars) {
      Bindings bad = good;
      bad.set(s, good.scalar(s) + 0.1);
      worst = std::max(worst, grid(info.id, bad));
    }
    if (holds_identically(info.id)) {
      CHECK(worst <= 1e-8);
    } else {
      CHECK(worst >= 1e-3);
    }
  }
}

TEST_CASE("compatibility and symmetry relations hold for arbitrary inputs") {
  const FieldExpr phi = parse_field("2 + x*y + exp(0.3*x - 0.2*y) + x^3");
  const FieldExpr M = parse_field("x^2*y - exp(0.5*y) / (3 + x^2)");
  Bindings b;
  b.set(Role::phi, phi).set(Role::M, M).set(Role::psi_plus, parse_field("exp(x*y/4) + x")).set(Scalar::lambda, 0.37);
  CHECK(grid(EquationId::AknsSmCompat, b) <= 1e-8);
  CHECK(grid(EquationId::NlbqSm1, b) <= 1e-8);
  CHECK(grid(EquationId::NlbqSymmetry, b) <= 1e-10);
}

TEST_CASE("non-solution gives a large AKNS residual, seed gives exact zero") {
  Bindings b;
  b.set(Role::M, parse_field("x^2*y"));
  CHECK(evaluate_residual(EquationId::AknsPde, b, {1.0, 1.0}) >= 1e-2);
  b.set(Role::M, akns_seed(0.5));
  CHECK(evaluate_residual(EquationId::AknsPde, b, {0.3, -0.7}) == 0.0);
  b.set(Role::M, akns_soliton({Family::Akns, 0.5, {{1.0, 0.0}}}));
  CHECK(evaluate_residual(EquationId::AknsPde, b, {0.3, -0.7}) <= 1e-9);
}

TEST_CASE("manifold-derived residuals are invariant under phi -> c phi") {
  const auto fx = fixtures();
  for (const char* family : {"AKNS", "NLBQ"}) {
    const Bindings& good = fx.at(family);
    for (const EquationInfo& info : equation_catalog()) {
      if (family_of(info.name) != family) continue;
      bool uses_phi = false;
      for (Role r : info.roles) uses_phi |= (r == Role::phi);
      if (!uses_phi || info.id == EquationId::AknsManifold || info.id == EquationId::NlbqManifold) continue;
      CAPTURE(info.name);
      Bindings scaled = good;
      scaled.set(Role::phi, -3.7 * good.field(Role::phi));
      for (const Point2& p : random_points(Box{}, 10, 3)) {
        CHECK(std::abs(evaluate_residual(info.id, scaled, p) - evaluate_residual(info.id, good, p)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("single-field Kaup equation with m_t m_xx in place of m_t m_tx is not satisfied") {
  const auto fx = fixtures();
  const FieldExpr m = fx.at("KAUP").field(Role::m);
  const FieldExpr mx = dx(m), mxx = partial(m, 2, 0), mt = partial(m, 0, 1);
  Bindings b;
  b.set(Role::lhs, mx * mx * (partial(m, 0, 2) - partial(m, 4, 0)));
  b.set(Role::rhs, 4.0 * mx * mx * mx * mxx + 2.0 * mx * (mt * mxx - mxx * partial(m, 3, 0)) -
                       mxx * (mt * mt - mxx * mxx));
  CHECK(grid(EquationId::FieldEqual, b) >= 1e-3);
}

TEST_CASE("pole guard skips points near a manifold zero and the scan still passes") {
  // phi = x vanishes on the grid column x = 0 only if it is sampled; use 21 points.
  Bindings b;
  const FieldExpr f = 1.0 / x_coord();
  b.set(Role::lhs, f * x_coord()).set(Role::rhs, FieldExpr::constant(1.0));
  const ScanEntry s = scan_grid(EquationId::FieldEqual, b, Box{}, 21, 21);
  CHECK(s.points_skipped_near_pole > 0);
  CHECK(s.max_relative_residual <= 1e-12);
}

TEST_CASE("scan result is independent of thread count") {
  const auto fx = fixtures();
  const Bindings& b = fx.at("KAUP");
  const ScanEntry one = scan_grid(EquationId::KaupMatrixT, b, Box{}, 20, 20, {kDefaultPoleGuard, 1});
  const ScanEntry many = scan_grid(EquationId::KaupMatrixT, b, Box{}, 20, 20, {kDefaultPoleGuard, 4});
  CHECK(one.max_relative_residual == many.max_relative_residual);
  CHECK(one.worst_point.a == many.worst_point.a);
  CHECK(one.worst_point.b == many.worst_point.b);
}

TEST_CASE("missing bindings and empty scans are reported") {
  Bindings b;
  CHECK_THROWS_AS(build_equation(EquationId::AknsLaxX, b), Error);
  b.set(Role::lhs, 1.0 / (x_coord() - x_coord())).set(Role::rhs, x_coord());
  CHECK_THROWS_AS(scan_grid(EquationId::FieldEqual, b, Box{}, 4, 4), Error);
}
