#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "solitonjet/field.hpp"

namespace solitonjet {

/// Named field slots an equation can consume.
enum class Role {
  M,
  N,
  m,
  m_hat,
  u,
  eta,
  psi,
  psi_hat,
  psi_plus,
  psi_minus,
  psi_hat_plus,
  psi_hat_minus,
  phi,
  phi_hat,
  tau,
  lhs,
  rhs,
};

/// Named scalar parameters.
enum class Scalar { lambda, a, a_hat, a0 };

std::string_view to_string(Role role);
std::string_view to_string(Scalar scalar);
std::optional<Role> role_from_name(std::string_view name);
std::optional<Scalar> scalar_from_name(std::string_view name);

class Bindings {
 public:
  Bindings& set(Role role, FieldExpr f);
  Bindings& set(Scalar s, double value);

  bool has(Role role) const { return fields_.count(role) != 0; }
  bool has(Scalar s) const { return scalars_.count(s) != 0; }
  /// Throws Error(MissingBinding) when absent.
  const FieldExpr& field(Role role) const;
  double scalar(Scalar s) const;

 private:
  std::map<Role, FieldExpr> fields_;
  std::map<Scalar, double> scalars_;
};

enum class EquationId {
  AknsPde,
  AknsIntegrated,
  AknsLaxX,
  AknsLaxY,
  AknsTruncMx,
  AknsTruncMy,
  AknsSmS,
  AknsSmCompat,
  AknsSmIsAkns,
  AknsManifold,
  ShgSys1,
  ShgSys2,
  ShgMm,
  ShgMiura,
  ShgBt,
  ShgBtProduct,
  ShgCoupling,
  ShgCouplingDx,
  ShgCouplingAmplitudes,
  ShgFirstOrder,
  ShgLaxHat,
  ShgYPair,
  ShgMatrix,
  ShgCouplingInt,
  ShgCouplingIntDx,
  NlbqSys,
  NlbqSingle,
  NlbqTruncMx,
  NlbqTruncMt,
  NlbqSm1,
  NlbqSm2,
  NlbqLaxPlus,
  NlbqLaxMinus,
  NlbqManifold,
  NlbqSymmetry,
  KaupSys1,
  KaupSys2,
  KaupMm,
  KaupNlbqM,
  KaupNlbqMhat,
  KaupBt,
  KaupMiuraDx,
  KaupCoupling,
  KaupCouplingDx,
  KaupCouplingAmplitudes,
  KaupFirstOrder,
  KaupMatrixX,
  KaupMatrixT,
  AppdIdentity,
  FieldEqual,
};

struct EquationInfo {
  EquationId id;
  std::string_view name;     // e.g. "AKNS_PDE"
  std::string_view formula;  // human-readable statement
  std::vector<Role> roles;
  std::vector<Scalar> scalars;
};

std::span<const EquationInfo> equation_catalog();
const EquationInfo& equation_info(EquationId id);
std::string_view to_string(EquationId id);
std::optional<EquationId> equation_from_name(std::string_view name);

/// One scalar relation written as sum(terms) = 0.
struct SubEquation {
  std::string label;
  std::vector<FieldExpr> terms;
};

/// Builds the term lists for `id`; throws Error(MissingBinding).
std::vector<SubEquation> build_equation(EquationId id, const Bindings& b);

/// |sum| / (1 + sum |term|) for one sub-equation's evaluated terms.
double normalized_residual(std::span<const double> terms);

struct PointResidual {
  double residual = 0.0;         // max over sub-equations
  double min_divisor_ratio = 0;  // smallest |den| / (1 + |num|) seen
  std::string worst_label;
};

/// Equation compiled once against its bindings, evaluated at many points.
class CompiledEquation {
 public:
  CompiledEquation(EquationId id, const Bindings& b);

  EquationId id() const noexcept { return id_; }
  const std::vector<SubEquation>& parts() const noexcept { return parts_; }

  /// Throws PoleAtPoint / Overflow from the evaluator.
  PointResidual evaluate(Point2 p) const;

 private:
  EquationId id_;
  std::vector<SubEquation> parts_;
};

double evaluate_residual(EquationId id, const Bindings& b, Point2 p);

struct Box {
  double a_min = -3.0;
  double a_max = 3.0;
  double b_min = -3.0;
  double b_max = 3.0;
};

struct ScanEntry {
  EquationId equation = EquationId::FieldEqual;
  double max_relative_residual = 0.0;
  Point2 worst_point;
  int points_evaluated = 0;
  int points_skipped_near_pole = 0;
};

inline constexpr double kDefaultPoleGuard = 1e-9;
inline constexpr int kDefaultGridSize = 20;

struct ScanOptions {
  double pole_guard = kDefaultPoleGuard;
  /// 0 picks hardware concurrency; 1 runs inline.
  int threads = 1;
};

/// Regular n_a x n_b grid including the box corners; the worst point is the
/// first maximum in (i, j) order, so the result is independent of threading.
ScanEntry scan_grid(EquationId id, const Bindings& b, const Box& box, int n_a, int n_b,
                    const ScanOptions& options = {});

ScanEntry scan_points(EquationId id, const Bindings& b, std::span<const Point2> points,
                      const ScanOptions& options = {});

std::vector<Point2> grid_points(const Box& box, int n_a, int n_b);

/// Uniform points in the box from a fixed-seed generator.
std::vector<Point2> random_points(const Box& box, int n, std::uint64_t seed);

/// `n` random points at which every field evaluates without a pole or a
/// divisor ratio below `pole_guard`. Throws EmptyScan if they cannot be found.
std::vector<Point2> usable_points(std::span<const FieldExpr> fields, const Box& box, int n,
                                  std::uint64_t seed, double pole_guard = kDefaultPoleGuard);

inline constexpr std::uint64_t kValidationSeed = 20240611;
inline constexpr int kValidationPoints = 20;

enum class Expectation {
  Zero,     // passes when max residual <= tolerance
  Nonzero,  // negative control: passes when max residual >= threshold
  Info,     // reported, never fails
};

std::string_view to_string(Expectation e);
std::optional<Expectation> expectation_from_name(std::string_view name);

struct ReportEntry {
  std::string label;
  std::string equation;  // EquationId name or a check name
  double max_relative_residual = 0.0;
  Point2 worst_point;
  int points_evaluated = 0;
  int points_skipped_near_pole = 0;
  double tolerance = 1e-8;
  Expectation expect = Expectation::Zero;
  bool pass = false;
  std::string note;
};

ReportEntry make_entry(std::string label, const ScanEntry& scan, double tolerance,
                       Expectation expect = Expectation::Zero);

struct ResidualReport {
  std::string name;
  std::vector<ReportEntry> entries;
  bool pass = true;

  void add(ReportEntry entry);
};

}  // namespace solitonjet
