#include "solitonjet/residuals.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <thread>

#include "solitonjet/error.hpp"

namespace solitonjet {

namespace {

using F = FieldExpr;

F D(const F& f, int i, int k) { return partial(f, i, k); }
F C(double c) { return F::constant(c); }
F sq(const F& f) { return f * f; }

SubEquation sub(std::string label, std::vector<F> terms) {
  return SubEquation{std::move(label), std::move(terms)};
}

/// Ratios of manifold derivatives: v = phi_xx/phi_x, q (or w) = phi_b/phi_x,
/// s = v_x - v^2/2, L = phi_x/phi.
struct Geometry {
  F v, q, s, log_x;
};

Geometry geometry(const F& phi) {
  Geometry g;
  const F px = D(phi, 1, 0);
  g.v = D(phi, 2, 0) / px;
  g.q = D(phi, 0, 1) / px;
  g.s = D(g.v, 1, 0) - 0.5 * sq(g.v);
  g.log_x = px / phi;
  return g;
}

std::vector<SubEquation> akns_lax(const F& M, const F& psi, double lambda) {
  return {
      sub("x-part", {D(psi, 2, 0), 2.0 * D(M, 1, 0) * psi, lambda * psi}),
      sub("y-part", {2.0 * lambda * D(psi, 0, 1), D(M, 1, 1) * psi, -2.0 * D(M, 0, 1) * D(psi, 1, 0)}),
  };
}

std::vector<F> nlbq_single_terms(const F& M) {
  const F Mx = D(M, 1, 0), Mxx = D(M, 2, 0), Mt = D(M, 0, 1);
  return {sq(Mx) * D(M, 0, 2),
          -(sq(Mx) * D(M, 4, 0)),
          -4.0 * powi(Mx, 3) * Mxx,
          -2.0 * Mx * Mt * D(M, 1, 1),
          2.0 * Mx * Mxx * D(M, 3, 0),
          Mxx * sq(Mt),
          -powi(Mxx, 3)};
}

std::vector<F> lax_plus_x(const F& M, const F& psi, double lambda) {
  const F Mx = D(M, 1, 0), px = D(psi, 1, 0);
  return {2.0 * Mx * D(psi, 2, 0), 2.0 * sq(Mx) * psi, -(D(M, 0, 1) * px), -(D(M, 2, 0) * px),
          -2.0 * lambda * Mx * px};
}

std::vector<F> lax_plus_t(const F& M, const F& psi, double lambda) {
  return {D(psi, 0, 1), -D(psi, 2, 0), 2.0 * lambda * D(psi, 1, 0), -2.0 * D(M, 1, 0) * psi};
}

std::vector<F> lax_minus_x(const F& M, const F& psi, double lambda) {
  const F Mx = D(M, 1, 0), px = D(psi, 1, 0);
  return {2.0 * Mx * D(psi, 2, 0), 2.0 * sq(Mx) * psi, D(M, 0, 1) * px, -(D(M, 2, 0) * px),
          2.0 * lambda * Mx * px};
}

std::vector<F> lax_minus_t(const F& M, const F& psi, double lambda) {
  return {D(psi, 0, 1), D(psi, 2, 0), 2.0 * lambda * D(psi, 1, 0), 2.0 * D(M, 1, 0) * psi};
}

std::vector<F> concat_reflected(std::vector<F> lhs, const std::vector<F>& rhs, double sign) {
  for (const F& t : rhs) lhs.push_back(-sign * reflect(t));
  return lhs;
}

const std::vector<EquationInfo>& catalog() {
  using R = Role;
  using S = Scalar;
  using E = EquationId;
  static const std::vector<EquationInfo> table = {
      {E::AknsPde, "AKNS_PDE", "M_yxxx + 4 M_y M_xx + 8 M_x M_xy = 0", {R::M}, {}},
      {E::AknsIntegrated, "AKNS_INTEGRATED", "2 M_y M_xxy + 8 M_x M_y^2 - M_xy^2 = 0", {R::M}, {}},
      {E::AknsLaxX, "AKNS_LAX_X", "psi_xx + (2 M_x + lambda) psi = 0", {R::M, R::psi}, {S::lambda}},
      {E::AknsLaxY, "AKNS_LAX_Y", "2 lambda psi_y + M_xy psi - 2 M_y psi_x = 0", {R::M, R::psi}, {S::lambda}},
      {E::AknsTruncMx, "AKNS_TRUNC_MX", "M_x = -(v_x + v^2/2 + 2 lambda)/4", {R::M, R::phi}, {S::lambda}},
      {E::AknsTruncMy, "AKNS_TRUNC_MY", "M_y = (-v_y + 2 lambda q)/2", {R::M, R::phi}, {S::lambda}},
      {E::AknsSmS, "AKNS_SM_S", "s_y = 4 lambda q_x", {R::phi}, {S::lambda}},
      {E::AknsSmCompat, "AKNS_SM_COMPAT", "v_y = (q_x + q v)_x and s_y = q_xxx + 2 s q_x + q s_x", {R::phi}, {}},
      {E::AknsSmIsAkns, "AKNS_SM_IS_AKNS",
       "p from s = 4 p_x + 2 lambda, q = p_y/lambda solves p_yxxx + 4 p_y p_xx + 8 p_x p_xy = 0",
       {R::phi}, {S::lambda}},
      {E::AknsManifold, "AKNS_MANIFOLD", "phi_x = psi^2", {R::phi, R::psi}, {}},
      {E::ShgSys1, "SHG_SYS_1", "u_xy + 2 u eta_y = 0", {R::u, R::eta}, {}},
      {E::ShgSys2, "SHG_SYS_2", "eta_x + u^2 = 0", {R::u, R::eta}, {}},
      {E::ShgMm, "SHG_MM", "m_xy + 2 (m - mh) m_y = 0 and mh_xy - 2 (m - mh) mh_y = 0", {R::m, R::m_hat}, {}},
      {E::ShgMiura, "SHG_MIURA", "2 m_x = u_x - u^2 and 2 mh_x = -u_x - u^2", {R::m, R::m_hat, R::u}, {}},
      {E::ShgBt, "SHG_BT", "mh = m + m_xy/(2 m_y) and m = mh + mh_xy/(2 mh_y)", {R::m, R::m_hat}, {}},
      {E::ShgBtProduct, "SHG_BT_PRODUCT", "(m_y mh_y)_x = 0", {R::m, R::m_hat}, {}},
      {E::ShgCoupling, "SHG_COUPLING", "L Lh = A L + Ah Lh with A = v/2 + u, Ah = vh/2 - u",
       {R::u, R::phi, R::phi_hat}, {}},
      {E::ShgCouplingDx, "SHG_COUPLING_DX", "A_x = A (vh - A - Ah) = A (vh - v)/2, likewise Ah_x",
       {R::u, R::phi, R::phi_hat}, {}},
      {E::ShgCouplingAmplitudes, "SHG_COUPLING_AMPLITUDES", "A = a psih/psi and Ah = ah psi/psih",
       {R::u, R::phi, R::phi_hat, R::psi, R::psi_hat}, {S::a, S::a_hat}},
      {E::ShgFirstOrder, "SHG_FIRST_ORDER", "psi_x = a psih - u psi and psih_x = ah psi + u psih",
       {R::u, R::psi, R::psi_hat}, {S::a, S::a_hat}},
      {E::ShgLaxHat, "SHG_LAX_HAT", "psih solves the AKNS Lax pair of mh", {R::m_hat, R::psi_hat}, {S::lambda}},
      {E::ShgYPair, "SHG_Y_PAIR", "2 ah psi_y = -(u_y + eta_y) psih and 2 a psih_y = (u_y - eta_y) psi",
       {R::u, R::eta, R::psi, R::psi_hat}, {S::a, S::a_hat}},
      {E::ShgMatrix, "SHG_MATRIX", "two-component x and y Lax matrices, lambda = -a ah",
       {R::u, R::eta, R::psi, R::psi_hat}, {S::a, S::a_hat, S::lambda}},
      {E::ShgCouplingInt, "SHG_COUPLING_INT", "a phih + ah phi = psi psih",
       {R::psi, R::psi_hat, R::phi, R::phi_hat}, {S::a, S::a_hat}},
      {E::ShgCouplingIntDx, "SHG_COUPLING_INT_DX", "a psih^2 + ah psi^2 = (psi psih)_x",
       {R::psi, R::psi_hat}, {S::a, S::a_hat}},
      {E::NlbqSys, "NLBQ_SYS", "N_x = M_t and M_x N_t = M_x M_xxx + 2 M_x^3 + M_t^2 - M_xx^2", {R::M, R::N}, {}},
      {E::NlbqSingle, "NLBQ_SINGLE",
       "M_x^2 (M_tt - M_xxxx) = 4 M_x^3 M_xx + 2 M_x (M_t M_tx - M_xx M_xxx) - M_xx (M_t^2 - M_xx^2)", {R::M}, {}},
      {E::NlbqTruncMx, "NLBQ_TRUNC_MX", "M_x = ((w + 2 lambda)^2 - v^2)/4", {R::M, R::phi}, {S::lambda}},
      {E::NlbqTruncMt, "NLBQ_TRUNC_MT",
       "M_t = ((w + 2 lambda) v_x - v w_x + (w + lambda) ((w + 2 lambda)^2 - v^2))/2", {R::M, R::phi}, {S::lambda}},
      {E::NlbqSm1, "NLBQ_SM_1", "v_t = (w_x + w v)_x", {R::phi}, {}},
      {E::NlbqSm2, "NLBQ_SM_2", "w_t = (v_x - v^2/2 + 3/2 (w + 2 lambda)^2 - 2 lambda (w + 2 lambda))_x",
       {R::phi}, {S::lambda}},
      {E::NlbqLaxPlus, "NLBQ_LAX_PLUS", "plus-branch Lax pair for M", {R::M, R::psi_plus}, {S::lambda}},
      {E::NlbqLaxMinus, "NLBQ_LAX_MINUS", "minus-branch Lax pair for M", {R::M, R::psi_minus}, {S::lambda}},
      {E::NlbqManifold, "NLBQ_MANIFOLD", "phi_x = psi+ psi-", {R::phi, R::psi_plus, R::psi_minus}, {}},
      {E::NlbqSymmetry, "NLBQ_SYMMETRY",
       "minus pair on (-M(-x,-t), psi(-x,-t)) equals the plus pair on (M, psi) at (-x,-t)",
       {R::M, R::psi_plus}, {S::lambda}},
      {E::KaupSys1, "KAUP_SYS_1", "u_t = eta_xx + 2 u u_x", {R::u, R::eta}, {}},
      {E::KaupSys2, "KAUP_SYS_2", "eta_t = u_xx + 2 u eta_x", {R::u, R::eta}, {}},
      {E::KaupMm, "KAUP_MM", "m_t = m_xx + 2 (m - mh) m_x and mh_t = -mh_xx + 2 (m - mh) mh_x",
       {R::m, R::m_hat}, {}},
      {E::KaupNlbqM, "KAUP_NLBQ_M", "m solves the single-field nonlocal Boussinesq equation", {R::m}, {}},
      {E::KaupNlbqMhat, "KAUP_NLBQ_MHAT", "mh solves the single-field nonlocal Boussinesq equation",
       {R::m_hat}, {}},
      {E::KaupBt, "KAUP_BT", "m = mh + (mh_t + mh_xx)/(2 mh_x) and mh = m + (m_xx - m_t)/(2 m_x)",
       {R::m, R::m_hat}, {}},
      {E::KaupMiuraDx, "KAUP_MIURA_DX",
       "2 m_xx = u_xx - 2 u u_x + u_t and 2 mh_xx = -u_xx - 2 u u_x + u_t", {R::m, R::m_hat, R::u}, {}},
      {E::KaupCoupling, "KAUP_COUPLING",
       "L Lh = A L + Ah Lh with A = (v - w)/2 + u, Ah = (vh + wh)/2 - u; u = lambda + (vh + wh - v + w)/2",
       {R::u, R::phi, R::phi_hat}, {S::lambda}},
      {E::KaupCouplingDx, "KAUP_COUPLING_DX",
       "A_x = A (vh - A - Ah) = A (vh - wh - v + w)/2, likewise Ah_x", {R::u, R::phi, R::phi_hat}, {}},
      {E::KaupCouplingAmplitudes, "KAUP_COUPLING_AMPLITUDES",
       "A, Ah and u + lambda in terms of the four eigenfunctions; A = a psih-/psi-, Ah = ah psi+/psih+",
       {R::u, R::phi, R::phi_hat, R::psi_plus, R::psi_minus, R::psi_hat_plus, R::psi_hat_minus},
       {S::a, S::a_hat, S::lambda}},
      {E::KaupFirstOrder, "KAUP_FIRST_ORDER", "first-order relations between psi-/psih- and psi+/psih+",
       {R::u, R::eta, R::psi_plus, R::psi_minus, R::psi_hat_plus, R::psi_hat_minus},
       {S::a, S::a_hat, S::lambda}},
      {E::KaupMatrixX, "KAUP_MATRIX_X", "two-component x Lax matrices",
       {R::u, R::eta, R::psi_plus, R::psi_minus, R::psi_hat_plus, R::psi_hat_minus},
       {S::a, S::a_hat, S::lambda}},
      {E::KaupMatrixT, "KAUP_MATRIX_T", "two-component t Lax matrices",
       {R::u, R::eta, R::psi_plus, R::psi_minus, R::psi_hat_plus, R::psi_hat_minus},
       {S::a, S::a_hat, S::lambda}},
      {E::AppdIdentity, "APPD_IDENTITY", "psi+_x psi-_x + M_x psi+ psi- = 0", {R::M, R::psi_plus, R::psi_minus}, {}},
      {E::FieldEqual, "FIELD_EQUAL", "lhs = rhs", {R::lhs, R::rhs}, {}},
  };
  return table;
}

}  // namespace

std::string_view to_string(Role role) {
  switch (role) {
    case Role::M: return "M";
    case Role::N: return "N";
    case Role::m: return "m";
    case Role::m_hat: return "m_hat";
    case Role::u: return "u";
    case Role::eta: return "eta";
    case Role::psi: return "psi";
    case Role::psi_hat: return "psi_hat";
    case Role::psi_plus: return "psi_plus";
    case Role::psi_minus: return "psi_minus";
    case Role::psi_hat_plus: return "psi_hat_plus";
    case Role::psi_hat_minus: return "psi_hat_minus";
    case Role::phi: return "phi";
    case Role::phi_hat: return "phi_hat";
    case Role::tau: return "tau";
    case Role::lhs: return "lhs";
    case Role::rhs: return "rhs";
  }
  return "?";
}

std::string_view to_string(Scalar scalar) {
  switch (scalar) {
    case Scalar::lambda: return "lambda";
    case Scalar::a: return "a";
    case Scalar::a_hat: return "a_hat";
    case Scalar::a0: return "a0";
  }
  return "?";
}

std::optional<Role> role_from_name(std::string_view name) {
  for (int r = 0; r <= static_cast<int>(Role::rhs); ++r) {
    if (to_string(static_cast<Role>(r)) == name) return static_cast<Role>(r);
  }
  return std::nullopt;
}

std::optional<Scalar> scalar_from_name(std::string_view name) {
  for (int s = 0; s <= static_cast<int>(Scalar::a0); ++s) {
    if (to_string(static_cast<Scalar>(s)) == name) return static_cast<Scalar>(s);
  }
  return std::nullopt;
}

Bindings& Bindings::set(Role role, FieldExpr f) {
  fields_.insert_or_assign(role, std::move(f));
  return *this;
}

Bindings& Bindings::set(Scalar s, double value) {
  scalars_.insert_or_assign(s, value);
  return *this;
}

const FieldExpr& Bindings::field(Role role) const {
  auto it = fields_.find(role);
  if (it == fields_.end()) {
    throw Error(ErrorKind::MissingBinding, "missing field binding '" + std::string(to_string(role)) + "'");
  }
  return it->second;
}

double Bindings::scalar(Scalar s) const {
  auto it = scalars_.find(s);
  if (it == scalars_.end()) {
    throw Error(ErrorKind::MissingBinding, "missing scalar binding '" + std::string(to_string(s)) + "'");
  }
  return it->second;
}

std::span<const EquationInfo> equation_catalog() { return catalog(); }

const EquationInfo& equation_info(EquationId id) {
  for (const auto& info : catalog()) {
    if (info.id == id) return info;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown equation id");
}

std::string_view to_string(EquationId id) { return equation_info(id).name; }

std::optional<EquationId> equation_from_name(std::string_view name) {
  for (const auto& info : catalog()) {
    if (info.name == name) return info.id;
  }
  return std::nullopt;
}

std::vector<SubEquation> build_equation(EquationId id, const Bindings& b) {
  const EquationInfo& info = equation_info(id);
  for (Role r : info.roles) (void)b.field(r);
  for (Scalar s : info.scalars) (void)b.scalar(s);

  using E = EquationId;
  switch (id) {
    case E::AknsPde: {
      const F& M = b.field(Role::M);
      return {sub("pde", {D(M, 3, 1), 4.0 * D(M, 0, 1) * D(M, 2, 0), 8.0 * D(M, 1, 0) * D(M, 1, 1)})};
    }
    case E::AknsIntegrated: {
      const F& M = b.field(Role::M);
      const F My = D(M, 0, 1);
      return {sub("integrated", {2.0 * My * D(M, 2, 1), 8.0 * D(M, 1, 0) * sq(My), -sq(D(M, 1, 1))})};
    }
    case E::AknsLaxX:
      return {akns_lax(b.field(Role::M), b.field(Role::psi), b.scalar(Scalar::lambda))[0]};
    case E::AknsLaxY:
      return {akns_lax(b.field(Role::M), b.field(Role::psi), b.scalar(Scalar::lambda))[1]};
    case E::AknsTruncMx: {
      const Geometry g = geometry(b.field(Role::phi));
      const double lambda = b.scalar(Scalar::lambda);
      return {sub("M_x", {D(b.field(Role::M), 1, 0), 0.25 * D(g.v, 1, 0), 0.125 * sq(g.v), C(0.5 * lambda)})};
    }
    case E::AknsTruncMy: {
      const Geometry g = geometry(b.field(Role::phi));
      const double lambda = b.scalar(Scalar::lambda);
      return {sub("M_y", {D(b.field(Role::M), 0, 1), 0.5 * D(g.v, 0, 1), -lambda * g.q})};
    }
    case E::AknsSmS: {
      const Geometry g = geometry(b.field(Role::phi));
      return {sub("s_y", {D(g.s, 0, 1), -4.0 * b.scalar(Scalar::lambda) * D(g.q, 1, 0)})};
    }
    case E::AknsSmCompat: {
      const Geometry g = geometry(b.field(Role::phi));
      const F qx = D(g.q, 1, 0);
      return {sub("v_y", {D(g.v, 0, 1), -D(g.q, 2, 0), -D(g.q * g.v, 1, 0)}),
              sub("s_y", {D(g.s, 0, 1), -D(g.q, 3, 0), -2.0 * g.s * qx, -(g.q * D(g.s, 1, 0))})};
    }
    case E::AknsSmIsAkns: {
      const Geometry g = geometry(b.field(Role::phi));
      const double lambda = b.scalar(Scalar::lambda);
      const F px = 0.25 * (g.s - 2.0 * lambda);
      const F py = lambda * g.q;
      return {sub("akns", {D(py, 3, 0), 4.0 * py * D(px, 1, 0), 8.0 * px * D(py, 1, 0)}),
              sub("p_xy", {D(px, 0, 1), -D(py, 1, 0)})};
    }
    case E::AknsManifold:
      return {sub("phi_x", {D(b.field(Role::phi), 1, 0), -sq(b.field(Role::psi))})};
    case E::ShgSys1: {
      const F &u = b.field(Role::u), &eta = b.field(Role::eta);
      return {sub("sys1", {D(u, 1, 1), 2.0 * u * D(eta, 0, 1)})};
    }
    case E::ShgSys2: {
      const F &u = b.field(Role::u), &eta = b.field(Role::eta);
      return {sub("sys2", {D(eta, 1, 0), sq(u)})};
    }
    case E::ShgMm: {
      const F &m = b.field(Role::m), &mh = b.field(Role::m_hat);
      const F u = m - mh;
      return {sub("m", {D(m, 1, 1), 2.0 * u * D(m, 0, 1)}), sub("m_hat", {D(mh, 1, 1), -2.0 * u * D(mh, 0, 1)})};
    }
    case E::ShgMiura: {
      const F &m = b.field(Role::m), &mh = b.field(Role::m_hat), &u = b.field(Role::u);
      return {sub("m", {2.0 * D(m, 1, 0), -D(u, 1, 0), sq(u)}), sub("m_hat", {2.0 * D(mh, 1, 0), D(u, 1, 0), sq(u)})};
    }
    case E::ShgBt: {
      const F &m = b.field(Role::m), &mh = b.field(Role::m_hat);
      return {sub("forward", {mh, -m, -(D(m, 1, 1) / (2.0 * D(m, 0, 1)))}),
              sub("inverse", {m, -mh, -(D(mh, 1, 1) / (2.0 * D(mh, 0, 1)))})};
    }
    case E::ShgBtProduct: {
      const F &m = b.field(Role::m), &mh = b.field(Role::m_hat);
      return {sub("product", {D(m, 1, 1) * D(mh, 0, 1), D(m, 0, 1) * D(mh, 1, 1)})};
    }
    case E::ShgCoupling:
    case E::ShgCouplingDx:
    case E::ShgCouplingAmplitudes: {
      const F& u = b.field(Role::u);
      const Geometry g = geometry(b.field(Role::phi));
      const Geometry gh = geometry(b.field(Role::phi_hat));
      const F A = 0.5 * g.v + u;
      const F Ah = 0.5 * gh.v - u;
      if (id == E::ShgCoupling) {
        return {sub("coupling", {g.log_x * gh.log_x, -(A * g.log_x), -(Ah * gh.log_x)})};
      }
      if (id == E::ShgCouplingDx) {
        const F Ax = D(A, 1, 0), Ahx = D(Ah, 1, 0);
        return {sub("A_x", {Ax, -(A * (gh.v - A - Ah))}), sub("A_x reduced", {Ax, -(0.5 * A * (gh.v - g.v))}),
                sub("Ah_x", {Ahx, -(Ah * (g.v - A - Ah))}),
                sub("Ah_x reduced", {Ahx, -(0.5 * Ah * (g.v - gh.v))})};
      }
      const F &psi = b.field(Role::psi), &psih = b.field(Role::psi_hat);
      return {sub("A", {A, -(b.scalar(Scalar::a) * psih / psi)}),
              sub("Ah", {Ah, -(b.scalar(Scalar::a_hat) * psi / psih)})};
    }
    case E::ShgFirstOrder: {
      const F &u = b.field(Role::u), &psi = b.field(Role::psi), &psih = b.field(Role::psi_hat);
      const double a = b.scalar(Scalar::a), ah = b.scalar(Scalar::a_hat);
      return {sub("psi_x", {D(psi, 1, 0), -a * psih, u * psi}), sub("psih_x", {D(psih, 1, 0), -ah * psi, -(u * psih)})};
    }
    case E::ShgLaxHat:
      return akns_lax(b.field(Role::m_hat), b.field(Role::psi_hat), b.scalar(Scalar::lambda));
    case E::ShgYPair:
    case E::ShgMatrix: {
      const F &u = b.field(Role::u), &eta = b.field(Role::eta);
      const F &psi = b.field(Role::psi), &psih = b.field(Role::psi_hat);
      const double a = b.scalar(Scalar::a), ah = b.scalar(Scalar::a_hat);
      const F uy = D(u, 0, 1), ey = D(eta, 0, 1);
      if (id == E::ShgYPair) {
        return {sub("psi_y", {2.0 * ah * D(psi, 0, 1), (uy + ey) * psih}),
                sub("psih_y", {2.0 * a * D(psih, 0, 1), -((uy - ey) * psi)})};
      }
      const double lambda = b.scalar(Scalar::lambda);
      return {sub("x row 1", {D(psi, 1, 0), u * psi, -a * psih}),
              sub("x row 2", {D(psih, 1, 0), -ah * psi, -(u * psih)}),
              sub("y row 1", {D(2.0 * ah * psi, 0, 1), (uy + ey) * psih}),
              sub("y row 2", {D(2.0 * a * psih, 0, 1), -((uy - ey) * psi)}),
              sub("lambda = -a ah", {C(lambda), C(a * ah)})};
    }
    case E::ShgCouplingInt: {
      const double a = b.scalar(Scalar::a), ah = b.scalar(Scalar::a_hat);
      return {sub("coupling", {a * b.field(Role::phi_hat), ah * b.field(Role::phi),
                               -(b.field(Role::psi) * b.field(Role::psi_hat))})};
    }
    case E::ShgCouplingIntDx: {
      const F &psi = b.field(Role::psi), &psih = b.field(Role::psi_hat);
      const double a = b.scalar(Scalar::a), ah = b.scalar(Scalar::a_hat);
      return {sub("coupling_x", {a * sq(psih), ah * sq(psi), -(D(psi, 1, 0) * psih), -(psi * D(psih, 1, 0))})};
    }
    case E::NlbqSys: {
      const F &M = b.field(Role::M), &N = b.field(Role::N);
      const F Mx = D(M, 1, 0), Mt = D(M, 0, 1), Mxx = D(M, 2, 0);
      return {sub("N_x", {D(N, 1, 0), -Mt}),
              sub("N_t", {Mx * D(N, 0, 1), -(Mx * D(M, 3, 0)), -2.0 * powi(Mx, 3), -sq(Mt), sq(Mxx)})};
    }
    case E::NlbqSingle:
      return {sub("single", nlbq_single_terms(b.field(Role::M)))};
    case E::NlbqTruncMx:
    case E::NlbqTruncMt:
    case E::NlbqSm1:
    case E::NlbqSm2: {
      const Geometry g = geometry(b.field(Role::phi));
      const F& v = g.v;
      const F& w = g.q;
      if (id == E::NlbqSm1) return {sub("v_t", {D(v, 0, 1), -D(w, 2, 0), -D(w * v, 1, 0)})};
      const double lambda = b.scalar(Scalar::lambda);
      const F W = w + 2.0 * lambda;
      if (id == E::NlbqSm2) {
        return {sub("w_t", {D(w, 0, 1), -D(v, 2, 0), D(0.5 * sq(v), 1, 0), -1.5 * D(sq(W), 1, 0),
                            2.0 * lambda * D(w, 1, 0)})};
      }
      const F& M = b.field(Role::M);
      if (id == E::NlbqTruncMx) return {sub("M_x", {D(M, 1, 0), -0.25 * sq(W), 0.25 * sq(v)})};
      const F wl = w + lambda;
      return {sub("M_t", {D(M, 0, 1), -0.5 * W * D(v, 1, 0), 0.5 * v * D(w, 1, 0), -0.5 * wl * sq(W),
                          0.5 * wl * sq(v)})};
    }
    case E::NlbqLaxPlus: {
      const F &M = b.field(Role::M), &psi = b.field(Role::psi_plus);
      const double lambda = b.scalar(Scalar::lambda);
      return {sub("x-part", lax_plus_x(M, psi, lambda)), sub("t-part", lax_plus_t(M, psi, lambda))};
    }
    case E::NlbqLaxMinus: {
      const F &M = b.field(Role::M), &psi = b.field(Role::psi_minus);
      const double lambda = b.scalar(Scalar::lambda);
      return {sub("x-part", lax_minus_x(M, psi, lambda)), sub("t-part", lax_minus_t(M, psi, lambda))};
    }
    case E::NlbqManifold:
      return {sub("phi_x", {D(b.field(Role::phi), 1, 0), -(b.field(Role::psi_plus) * b.field(Role::psi_minus))})};
    case E::NlbqSymmetry: {
      const F &M = b.field(Role::M), &psi = b.field(Role::psi_plus);
      const double lambda = b.scalar(Scalar::lambda);
      const F Mt = -reflect(M);
      const F pt = reflect(psi);
      return {sub("x-part", concat_reflected(lax_minus_x(Mt, pt, lambda), lax_plus_x(M, psi, lambda), 1.0)),
              sub("t-part", concat_reflected(lax_minus_t(Mt, pt, lambda), lax_plus_t(M, psi, lambda), -1.0))};
    }
    case E::KaupSys1: {
      const F &u = b.field(Role::u), &eta = b.field(Role::eta);
      return {sub("sys1", {D(u, 0, 1), -D(eta, 2, 0), -2.0 * u * D(u, 1, 0)})};
    }
    case E::KaupSys2: {
      const F &u = b.field(Role::u), &eta = b.field(Role::eta);
      return {sub("sys2", {D(eta, 0, 1), -D(u, 2, 0), -2.0 * u * D(eta, 1, 0)})};
    }
    case E::KaupMm: {
      const F &m = b.field(Role::m), &mh = b.field(Role::m_hat);
      const F u = m - mh;
      return {sub("m", {D(m, 0, 1), -D(m, 2, 0), -2.0 * u * D(m, 1, 0)}),
              sub("m_hat", {D(mh, 0, 1), D(mh, 2, 0), -2.0 * u * D(mh, 1, 0)})};
    }
    case E::KaupNlbqM:
      return {sub("single", nlbq_single_terms(b.field(Role::m)))};
    case E::KaupNlbqMhat:
      return {sub("single", nlbq_single_terms(b.field(Role::m_hat)))};
    case E::KaupBt: {
      const F &m = b.field(Role::m), &mh = b.field(Role::m_hat);
      return {sub("inverse", {m, -mh, -((D(mh, 0, 1) + D(mh, 2, 0)) / (2.0 * D(mh, 1, 0)))}),
              sub("forward", {mh, -m, -((D(m, 2, 0) - D(m, 0, 1)) / (2.0 * D(m, 1, 0)))})};
    }
    case E::KaupMiuraDx: {
      const F &m = b.field(Role::m), &mh = b.field(Role::m_hat), &u = b.field(Role::u);
      const F uxx = D(u, 2, 0), uux = 2.0 * u * D(u, 1, 0), ut = D(u, 0, 1);
      return {sub("m", {2.0 * D(m, 2, 0), -uxx, uux, -ut}), sub("m_hat", {2.0 * D(mh, 2, 0), uxx, uux, -ut})};
    }
    case E::KaupCoupling:
    case E::KaupCouplingDx:
    case E::KaupCouplingAmplitudes: {
      const F& u = b.field(Role::u);
      const Geometry g = geometry(b.field(Role::phi));
      const Geometry gh = geometry(b.field(Role::phi_hat));
      const F &v = g.v, &w = g.q, &vh = gh.v, &wh = gh.q;
      const F A = 0.5 * (v - w) + u;
      const F Ah = 0.5 * (vh + wh) - u;
      if (id == E::KaupCoupling) {
        const double lambda = b.scalar(Scalar::lambda);
        return {sub("coupling", {g.log_x * gh.log_x, -(A * g.log_x), -(Ah * gh.log_x)}),
                sub("u", {u, C(-lambda), -0.5 * (vh + wh - v + w)})};
      }
      const F Ax = D(A, 1, 0), Ahx = D(Ah, 1, 0);
      if (id == E::KaupCouplingDx) {
        return {sub("A_x", {Ax, -(A * (vh - A - Ah))}), sub("A_x reduced", {Ax, -(0.5 * A * (vh - wh - v + w))}),
                sub("Ah_x", {Ahx, -(Ah * (v - A - Ah))}),
                sub("Ah_x reduced", {Ahx, -(0.5 * Ah * (v + w - vh - wh))})};
      }
      const F &pp = b.field(Role::psi_plus), &pm = b.field(Role::psi_minus);
      const F &hp = b.field(Role::psi_hat_plus), &hm = b.field(Role::psi_hat_minus);
      const double a = b.scalar(Scalar::a), ah = b.scalar(Scalar::a_hat), lambda = b.scalar(Scalar::lambda);
      const F ul = u + lambda;
      const F lpm = D(pm, 1, 0) / pm, lpp = D(pp, 1, 0) / pp;
      const F lhp = D(hp, 1, 0) / hp, lhm = D(hm, 1, 0) / hm;
      return {sub("A", {A, -ul, -lpm}),
              sub("Ah", {Ah, ul, -lhp}),
              sub("u + lambda", {ul, -lhp, lpm}),
              sub("A_x", {Ax, -(A * (lhm - lpm))}),
              sub("Ah_x", {Ahx, -(Ah * (lpp - lhp))}),
              sub("A integrated", {A, -(a * hm / pm)}),
              sub("Ah integrated", {Ah, -(ah * pp / hp)})};
    }
    case E::KaupFirstOrder:
    case E::KaupMatrixX:
    case E::KaupMatrixT: {
      const F &u = b.field(Role::u), &eta = b.field(Role::eta);
      const F &pp = b.field(Role::psi_plus), &pm = b.field(Role::psi_minus);
      const F &hp = b.field(Role::psi_hat_plus), &hm = b.field(Role::psi_hat_minus);
      const double a = b.scalar(Scalar::a), ah = b.scalar(Scalar::a_hat), lambda = b.scalar(Scalar::lambda);
      const F ux = D(u, 1, 0), ex = D(eta, 1, 0);
      const F ul = u + lambda;
      if (id == E::KaupFirstOrder) {
        return {sub("psi-_x", {D(pm, 1, 0), -a * hm, ul * pm}),
                sub("psih+_x", {D(hp, 1, 0), -ah * pp, -(ul * hp)}),
                sub("a psih-_x", {a * D(hm, 1, 0), -(0.5 * (ux - ex) * pm)}),
                sub("ah psi+_x", {ah * D(pp, 1, 0), 0.5 * (ux + ex) * hp})};
      }
      if (id == E::KaupMatrixX) {
        return {sub("minus row 1", {D(pm, 1, 0), ul * pm, -a * hm}),
                sub("minus row 2", {D(hm, 1, 0), -((ux - ex) / (2.0 * a) * pm)}),
                sub("plus row 1", {D(pp, 1, 0), (ux + ex) / (2.0 * ah) * hp}),
                sub("plus row 2", {D(hp, 1, 0), -ah * pp, -(ul * hp)})};
      }
      const F uxx = D(u, 2, 0), exx = D(eta, 2, 0);
      const F uml = u - lambda;
      const F t11 = (exx - uxx - uml * (ex - ux)) / (2.0 * a);
      const F t12 = 0.5 * (ux - ex);
      const F t21 = -(0.5 * (ex + ux) + sq(u) - lambda * lambda);
      const F t22 = a * uml;
      const F s11 = 0.5 * (ux + ex);
      const F s12 = (-exx - uxx - uml * (ex + ux)) / (2.0 * ah);
      const F s21 = ah * uml;
      const F s22 = 0.5 * (ex - ux) + sq(u) - lambda * lambda;
      return {sub("minus psih-_t", {D(hm, 0, 1), -(t11 * pm), -(t12 * hm)}),
              sub("minus psi-_t", {D(pm, 0, 1), -(t21 * pm), -(t22 * hm)}),
              sub("plus psi+_t", {D(pp, 0, 1), -(s11 * pp), -(s12 * hp)}),
              sub("plus psih+_t", {D(hp, 0, 1), -(s21 * pp), -(s22 * hp)})};
    }
    case E::AppdIdentity: {
      const F &M = b.field(Role::M), &pp = b.field(Role::psi_plus), &pm = b.field(Role::psi_minus);
      return {sub("identity", {D(pp, 1, 0) * D(pm, 1, 0), D(M, 1, 0) * pp * pm})};
    }
    case E::FieldEqual:
      return {sub("equal", {b.field(Role::lhs), -b.field(Role::rhs)})};
  }
  throw Error(ErrorKind::InvalidArgument, "unhandled equation id");
}

double normalized_residual(std::span<const double> terms) {
  double sum = 0.0;
  double scale = 1.0;
  for (double t : terms) {
    sum += t;
    scale += std::abs(t);
  }
  return std::abs(sum) / scale;
}

CompiledEquation::CompiledEquation(EquationId id, const Bindings& b)
    : id_(id), parts_(build_equation(id, b)) {}

PointResidual CompiledEquation::evaluate(Point2 p) const {
  Evaluator ev(p);
  PointResidual out;
  std::vector<double> values;
  for (const SubEquation& part : parts_) {
    values.clear();
    for (const F& term : part.terms) values.push_back(ev.evaluate(term, 0, 0).value());
    const double r = normalized_residual(values);
    if (!std::isfinite(r)) {
      throw Error(ErrorKind::Overflow, "non-finite residual in '" + part.label + "'");
    }
    if (r > out.residual || out.worst_label.empty()) {
      if (r > out.residual) out.residual = r;
      out.worst_label = part.label;
    }
  }
  out.min_divisor_ratio = ev.min_divisor_ratio();
  return out;
}

double evaluate_residual(EquationId id, const Bindings& b, Point2 p) {
  return CompiledEquation(id, b).evaluate(p).residual;
}

std::vector<Point2> grid_points(const Box& box, int n_a, int n_b) {
  if (n_a < 2 || n_b < 2) {
    throw Error(ErrorKind::InvalidArgument, "grid needs at least 2 points per axis");
  }
  std::vector<Point2> pts;
  pts.reserve(static_cast<std::size_t>(n_a) * static_cast<std::size_t>(n_b));
  for (int i = 0; i < n_a; ++i) {
    const double a = box.a_min + (box.a_max - box.a_min) * i / (n_a - 1);
    for (int j = 0; j < n_b; ++j) {
      const double bb = box.b_min + (box.b_max - box.b_min) * j / (n_b - 1);
      pts.push_back({a, bb});
    }
  }
  return pts;
}

std::vector<Point2> random_points(const Box& box, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ua(box.a_min, box.a_max);
  std::uniform_real_distribution<double> ub(box.b_min, box.b_max);
  std::vector<Point2> pts;
  pts.reserve(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i < n; ++i) {
    const double a = ua(rng);
    pts.push_back({a, ub(rng)});
  }
  return pts;
}

std::vector<Point2> usable_points(std::span<const FieldExpr> fields, const Box& box, int n,
                                  std::uint64_t seed, double pole_guard) {
  std::vector<Point2> out;
  const int max_tries = 100 * std::max(n, 1);
  std::vector<Point2> candidates = random_points(box, max_tries, seed);
  for (const Point2& p : candidates) {
    if (static_cast<int>(out.size()) == n) break;
    try {
      Evaluator ev(p);
      for (const F& f : fields) (void)ev.evaluate(f, 0, 0);
      if (ev.min_divisor_ratio() < pole_guard) continue;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::PoleAtPoint) continue;
      throw;
    }
    out.push_back(p);
  }
  if (static_cast<int>(out.size()) < n) {
    throw Error(ErrorKind::EmptyScan, "could not find " + std::to_string(n) + " pole-free sample points");
  }
  return out;
}

ScanEntry scan_points(EquationId id, const Bindings& b, std::span<const Point2> points,
                      const ScanOptions& options) {
  const CompiledEquation eq(id, b);
  const std::size_t n = points.size();
  // NaN marks a skipped point.
  std::vector<double> residuals(n, 0.0);
  std::vector<std::exception_ptr> errors(n);

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        const PointResidual r = eq.evaluate(points[i]);
        residuals[i] = r.min_divisor_ratio < options.pole_guard ? std::nan("") : r.residual;
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::PoleAtPoint) {
          residuals[i] = std::nan("");
        } else {
          errors[i] = std::current_exception();
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  int threads = options.threads;
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(threads), std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    work(0, n);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + static_cast<std::size_t>(threads) - 1) / static_cast<std::size_t>(threads);
    for (int t = 0; t < threads; ++t) {
      const std::size_t begin = std::min(n, chunk * static_cast<std::size_t>(t));
      const std::size_t end = std::min(n, begin + chunk);
      pool.emplace_back(work, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  ScanEntry entry;
  entry.equation = id;
  bool have = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    if (std::isnan(residuals[i])) {
      ++entry.points_skipped_near_pole;
      continue;
    }
    ++entry.points_evaluated;
    if (!have || residuals[i] > entry.max_relative_residual) {
      entry.max_relative_residual = residuals[i];
      entry.worst_point = points[i];
      have = true;
    }
  }
  if (!have) {
    throw Error(ErrorKind::EmptyScan, std::string(to_string(id)) + ": every sample point was skipped near a pole");
  }
  return entry;
}

ScanEntry scan_grid(EquationId id, const Bindings& b, const Box& box, int n_a, int n_b,
                    const ScanOptions& options) {
  if (!(options.pole_guard > 0.0)) throw Error(ErrorKind::InvalidArgument, "pole_guard must be positive");
  const std::vector<Point2> pts = grid_points(box, n_a, n_b);
  return scan_points(id, b, pts, options);
}

std::string_view to_string(Expectation e) {
  switch (e) {
    case Expectation::Zero: return "zero";
    case Expectation::Nonzero: return "nonzero";
    case Expectation::Info: return "info";
  }
  return "?";
}

std::optional<Expectation> expectation_from_name(std::string_view name) {
  if (name == "zero") return Expectation::Zero;
  if (name == "nonzero") return Expectation::Nonzero;
  if (name == "info") return Expectation::Info;
  return std::nullopt;
}

ReportEntry make_entry(std::string label, const ScanEntry& scan, double tolerance, Expectation expect) {
  ReportEntry e;
  e.label = std::move(label);
  e.equation = std::string(to_string(scan.equation));
  e.max_relative_residual = scan.max_relative_residual;
  e.worst_point = scan.worst_point;
  e.points_evaluated = scan.points_evaluated;
  e.points_skipped_near_pole = scan.points_skipped_near_pole;
  e.tolerance = tolerance;
  e.expect = expect;
  switch (expect) {
    case Expectation::Zero: e.pass = scan.max_relative_residual <= tolerance; break;
    case Expectation::Nonzero: e.pass = scan.max_relative_residual >= tolerance; break;
    case Expectation::Info: e.pass = true; break;
  }
  return e;
}

void ResidualReport::add(ReportEntry entry) {
  pass = pass && entry.pass;
  entries.push_back(std::move(entry));
}

}  // namespace solitonjet
