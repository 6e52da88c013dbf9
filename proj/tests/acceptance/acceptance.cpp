// One PASS/FAIL line per acceptance criterion. Exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "solitonjet/error.hpp"
#include "solitonjet/profile.hpp"
#include "solitonjet/scenario.hpp"

namespace sj = solitonjet;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

Outcome run_builtins(std::initializer_list<const char*> names) {
  Outcome o;
  int entries = 0;
  double worst_zero = 0.0;
  for (const char* name : names) {
    try {
      const sj::ResidualReport r = sj::run_suite(sj::builtin_scenario(name));
      for (const auto& e : r.entries) {
        ++entries;
        if (e.expect == sj::Expectation::Zero && e.equation != "CREST") {
          worst_zero = std::max(worst_zero, e.max_relative_residual / e.tolerance);
        }
        if (!e.pass) {
          o.pass = false;
          o.detail += " [" + std::string(name) + ": " + e.label + " = " + sj::format_number(e.max_relative_residual) + "]";
        }
      }
    } catch (const sj::Error& e) {
      o.pass = false;
      o.detail += " [" + std::string(name) + ": " + e.what() + "]";
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d entries, worst residual/tolerance %.2e", entries, worst_zero);
  o.detail = buf + o.detail;
  return o;
}

// The CSV grids the soliton command writes: AKNS one-soliton M_x peaks at k^2
// on a 0.01 grid, and the NLBq two-soliton samples [-3,3]^2 without a pole.
Outcome soliton_grids() {
  Outcome o = run_builtins({"akns-soliton-profiles", "nlbq-soliton-profiles"});
  try {
    const sj::FieldExpr mx = sj::soliton_field({sj::Family::Akns, 0.5, {{1.0, 0.0}}}, sj::ProfileField::Mx);
    const sj::GridOutput g = sj::sample_grid(mx, sj::parse_grid_spec("a=-3:3:601,b=-3:3:61"), 0);
    double top = 0.0;
    for (double v : g.values) top = std::max(top, v);
    if (std::abs(top - 1.0) > 1e-6) {
      o.pass = false;
      o.detail += " [grid max " + sj::format_number(top) + " != 1]";
    }
    const sj::FieldExpr two = sj::soliton_field({sj::Family::Nlbq, 1.0, {{2.0, 0.0}, {3.0, 0.0}}}, sj::ProfileField::M);
    for (double v : sj::sample_grid(two, sj::GridSpec{}, 0).values) {
      if (!std::isfinite(v)) {
        o.pass = false;
        o.detail += " [NLBq two-soliton grid not finite]";
        break;
      }
    }
  } catch (const sj::Error& e) {
    o.pass = false;
    o.detail += std::string(" [") + e.what() + "]";
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* what;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "AKNS one-soliton solves AKNS on 20x20 [-3,3]^2 <= 1e-8", [] { return run_builtins({"akns-one-soliton"}); }},
      {2, "AKNS two-soliton <= 1e-8; closed form = M + tau_x/tau to 1e-9",
       [] { return run_builtins({"akns-two-soliton"}); }},
      {3, "Darboux covariance <= 1e-8; lambda2 + 0.1 control >= 1e-3",
       [] { return run_builtins({"akns-darboux-covariance"}); }},
      {4, "tau generic = seed forms to 1e-10; tau12 = phi2' phi1 to 1e-12",
       [] { return run_builtins({"akns-tau-consistency"}); }},
      {5, "singular manifold relations <= 1e-9; derived p solves AKNS <= 1e-8",
       [] { return run_builtins({"akns-singular-manifold"}); }},
      {6, "NLBq mirror of 1-4 and the reflection symmetry <= 1e-10", [] { return run_builtins({"nlbq-mirror"}); }},
      {7, "sinh-Gordon Miura chain from the AKNS one-soliton", [] { return run_builtins({"shg-miura"}); }},
      {8, "Kaup Miura chain from the NLBq one-soliton", [] { return run_builtins({"kaup-miura"}); }},
      {9, "soliton grids: single crest k^2 on F = 1, two crests when separated", soliton_grids},
      {10, "kernel: Richardson FD <= 1e-6, Leibniz and exp identities <= 1e-12",
       [] { return run_builtins({"kernel-soundness"}); }},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    const Outcome o = c.run();
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d: %s (%s; %.0f ms)\n", o.pass ? "PASS" : "FAIL", c.id, c.what, o.detail.c_str(), ms);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
