#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "solitonjet/solitons.hpp"

namespace solitonjet {

/// Regular sampling grid; both ends included, n >= 2 points per axis.
struct GridSpec {
  double a_min = -3.0, a_max = 3.0;
  int n_a = 20;
  double b_min = -3.0, b_max = 3.0;
  int n_b = 20;

  double step_a() const { return (a_max - a_min) / (n_a - 1); }
  double step_b() const { return (b_max - b_min) / (n_b - 1); }
  double a_at(int i) const { return i == n_a - 1 ? a_max : a_min + i * step_a(); }
  double b_at(int j) const { return j == n_b - 1 ? b_max : b_min + j * step_b(); }
};

/// "a=min:max:n,b=min:max:n"; either part may be omitted. Throws InvalidArgument.
GridSpec parse_grid_spec(std::string_view text);
/// "k=R,x0=R" ("a" is accepted for k). Throws InvalidArgument.
Mode parse_mode(std::string_view text);

enum class ProfileField { M, Mx };

/// M or M_x of the closed-form soliton; for NLBq this is the M component.
FieldExpr soliton_field(const SolitonSpec& spec, ProfileField field);

/// Row-major samples, outer loop over a.
struct GridOutput {
  GridSpec grid;
  std::vector<double> values;  // values[i * n_b + j] at (a_i, b_j)

  double at(int i, int j) const { return values[static_cast<std::size_t>(i) * grid.n_b + j]; }
};

/// Throws PoleAtPoint / Overflow naming the grid point.
GridOutput sample_grid(const FieldExpr& f, const GridSpec& grid, int threads = 1);

/// Header `a,b,value`, LF line endings, shortest round-trip numbers.
void write_csv(std::ostream& out, const GridOutput& g);
std::string to_csv(const GridOutput& g);

struct Crest {
  double a = 0.0;       // refined location along a
  double height = 0.0;  // f at the refined location
  double grid_a = 0.0;  // location of the sampled maximum
  double grid_height = 0.0;
};

/// Local maxima of f(., b) over [a_min, a_max] sampled with n points whose
/// height exceeds `prominence` times the row maximum. Each is refined by
/// Newton's method on f_a = 0 using jets.
std::vector<Crest> row_crests(const FieldExpr& f, double b, double a_min, double a_max, int n,
                              double prominence = 0.05);

/// Expected crest height of M_x for a one-soliton: k^2 (AKNS) or
/// a0 + (a - a0/a)^2 / 4 (NLBq).
double predicted_crest_height(Family family, double a0, const Mode& mode);

/// Where the one-soliton wave variable equals one at coordinate b.
double predicted_crest_location(Family family, double a0, const Mode& mode, double b);

}  // namespace solitonjet
