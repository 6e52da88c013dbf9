#include "solitonjet/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "solitonjet/darboux.hpp"
#include "solitonjet/error.hpp"
#include "solitonjet/kernel.hpp"
#include "solitonjet/miura.hpp"
#include "solitonjet/parser.hpp"

namespace solitonjet {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorKind::Scenario, msg); }

// Allowed keys per chain op, beyond "op" and "as".
const std::map<std::string, std::set<std::string>>& op_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"seed", {}},
      {"eigen", {"mode"}},
      {"soliton", {"modes"}},
      {"closed_form", {"form", "modes"}},
      {"darboux", {"potential", "first", "second"}},
      {"iterate", {"solution", "manifold"}},
      {"backlund", {"m"}},
      {"coupled_eigen", {"pair", "eigen", "a", "a_hat"}},
      {"hat_manifold", {"coupled", "phi"}},
      {"expr", {"expr"}},
      {"derive", {"of", "x", "y"}},
      {"combine", {"a", "b", "with"}},
      {"shift", {"from", "scalar", "by"}},
  };
  return keys;
}

// Keys whose string values name a stage, and keys that name a field "stage.part".
const std::set<std::string> kStageKeys = {"first", "second", "solution", "pair", "eigen", "coupled", "from"};
const std::set<std::string> kFieldKeys = {"potential", "manifold", "m", "phi", "of", "a", "b"};

std::string stage_of(const std::string& ref) { return ref.substr(0, ref.find('.')); }

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) fail(where + ": unknown key '" + it.key() + "'");
  }
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where + ": expected a number");
  return v.get<double>();
}

Mode mode_from_json(const json& v, const std::string& where) {
  if (!v.is_object()) fail(where + ": a mode is an object {\"k\": R, \"x0\": R}");
  check_keys(v, {"k", "a", "x0"}, where);
  Mode m;
  if (v.contains("k")) {
    m.k = number(v["k"], where + ".k");
  } else if (v.contains("a")) {
    m.k = number(v["a"], where + ".a");
  } else {
    fail(where + ": mode needs k");
  }
  if (v.contains("x0")) m.x0 = number(v["x0"], where + ".x0");
  return m;
}

GridSpec grid_from_json(const json& v) {
  if (v.is_string()) return parse_grid_spec(v.get<std::string>());
  if (!v.is_object()) fail("grid: expected an object or an \"a=min:max:n,b=min:max:n\" string");
  check_keys(v, {"a", "b"}, "grid");
  GridSpec g;
  auto axis = [&](const char* key, double& lo, double& hi, int& n) {
    if (!v.contains(key)) return;
    const json& a = v[key];
    if (!a.is_array() || a.size() != 3) fail(std::string("grid.") + key + ": expected [min, max, n]");
    lo = number(a[0], "grid"), hi = number(a[1], "grid");
    if (!a[2].is_number_integer() || a[2].get<int>() < 2) fail(std::string("grid.") + key + ": n must be an integer >= 2");
    n = a[2].get<int>();
    if (!(hi > lo)) fail(std::string("grid.") + key + ": min must be below max");
  };
  axis("a", g.a_min, g.a_max, g.n_a);
  axis("b", g.b_min, g.b_max, g.n_b);
  return g;
}

void check_ref(const std::string& ref, const std::set<std::string>& defined, const std::string& where) {
  if (!defined.count(stage_of(ref))) fail(where + ": '" + ref + "' refers to a stage not built before this point");
}

// Bind values: "stage.part", a number, or {"ref": "stage.part", "shift": R}.
void check_bind_value(const json& v, const std::set<std::string>& defined, const std::string& where) {
  if (v.is_string()) {
    check_ref(v.get<std::string>(), defined, where);
  } else if (v.is_object()) {
    check_keys(v, {"ref", "shift"}, where);
    if (!v.contains("ref") || !v["ref"].is_string()) fail(where + ": needs \"ref\"");
    check_ref(v["ref"].get<std::string>(), defined, where);
    if (v.contains("shift")) number(v["shift"], where + ".shift");
  } else if (!v.is_number()) {
    fail(where + ": bind value must be a reference, a number or {ref, shift}");
  }
}

// ---------------------------------------------------------------------------
// Field environment: "stage.part" -> field or scalar.

struct Env {
  std::map<std::string, FieldExpr> fields;
  std::map<std::string, double> scalars;

  const FieldExpr& field(const std::string& ref) const {
    const auto it = fields.find(ref);
    if (it == fields.end()) fail("no field '" + ref + "'");
    return it->second;
  }
  bool has_field(const std::string& ref) const { return fields.count(ref) != 0; }
  double scalar(const std::string& ref) const {
    const auto it = scalars.find(ref);
    if (it == scalars.end()) fail("no scalar '" + ref + "'");
    return it->second;
  }
  void put(const std::string& stage, const std::string& part, FieldExpr f) { fields[stage + "." + part] = std::move(f); }
  void put(const std::string& stage, const std::string& part, double v) { scalars[stage + "." + part] = v; }
};

double scalar_value(const Env& env, const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return env.scalar(v.get<std::string>());
  return env.scalar(v["ref"].get<std::string>()) + v.value("shift", 0.0);
}

FieldExpr field_value(const Env& env, const json& v) {
  if (v.is_string()) return env.field(v.get<std::string>());
  if (v.is_number()) return FieldExpr::constant(v.get<double>());
  fail("a field binding cannot carry a shift");
}

Mode step_mode(const Scenario& s, const json& v, const std::string& where) {
  if (v.is_number_integer()) {
    const int i = v.get<int>();
    if (i < 0 || i >= static_cast<int>(s.modes.size())) fail(where + ": mode index out of range");
    return s.modes[i];
  }
  return mode_from_json(v, where);
}

std::vector<Mode> step_modes(const Scenario& s, const json& step, const std::string& where) {
  if (!step.contains("modes")) return s.modes;
  std::vector<Mode> out;
  for (const json& m : step["modes"]) out.push_back(step_mode(s, m, where));
  return out;
}

EigenData eigen_from(const Env& env, const std::string& stage, Family family) {
  EigenData e;
  if (family == Family::Akns) {
    e.psi = env.field(stage + ".psi");
  } else {
    e.psi = env.field(stage + ".psi_plus");
    e.psi_minus = env.field(stage + ".psi_minus");
  }
  e.lambda = env.scalar(stage + ".lambda");
  if (env.has_field(stage + ".phi")) e.manifold = env.field(stage + ".phi");
  return e;
}

void put_eigen(Env& env, const std::string& stage, const EigenData& e, Family family) {
  if (family == Family::Akns) {
    env.put(stage, "psi", e.psi);
  } else {
    env.put(stage, "psi_plus", e.psi);
    env.put(stage, "psi_minus", *e.psi_minus);
  }
  env.put(stage, "lambda", e.lambda);
  if (e.manifold) env.put(stage, "phi", *e.manifold);
}

void put_solution(Env& env, const std::string& stage, const FieldExpr& M, const FieldExpr* N) {
  env.put(stage, "M", M);
  env.put(stage, "Mx", dx(M));
  if (N) env.put(stage, "N", *N);
}

PairValidation validation_box(const Scenario& s) {
  PairValidation v;
  v.box = {s.grid.a_min, s.grid.a_max, s.grid.b_min, s.grid.b_max};
  return v;
}

MiuraValidation miura_box(const Scenario& s) {
  MiuraValidation v;
  v.box = {s.grid.a_min, s.grid.a_max, s.grid.b_min, s.grid.b_max};
  return v;
}

void apply_step(const Scenario& s, const json& step, Env& env) {
  const std::string op = step["op"].get<std::string>();
  const std::string as = step["as"].get<std::string>();
  const bool akns = s.family == Family::Akns;

  if (op == "seed") {
    if (akns) {
      put_solution(env, as, akns_seed(s.a0), nullptr);
    } else {
      const NlbqSolution seed = nlbq_seed(s.a0);
      put_solution(env, as, seed.M, &seed.N);
    }
  } else if (op == "eigen") {
    const Mode m = step_mode(s, step.value("mode", json(0)), as);
    put_eigen(env, as, akns ? akns_eigen(m.k, s.a0, m.x0) : nlbq_eigen(m.k, s.a0, m.x0), s.family);
  } else if (op == "soliton") {
    const SolitonSpec spec{s.family, s.a0, step_modes(s, step, as)};
    if (akns) {
      put_solution(env, as, akns_soliton(spec), nullptr);
    } else {
      const NlbqSolution sol = nlbq_soliton(spec);
      put_solution(env, as, sol.M, &sol.N);
    }
  } else if (op == "closed_form") {
    const std::string form = step.value("form", "");
    const std::vector<Mode> modes = step_modes(s, step, as);
    const auto need = [&](std::size_t n) {
      if (modes.size() < n) fail(as + ": form '" + form + "' needs " + std::to_string(n) + " modes");
    };
    FieldExpr value;
    if (form == "tau_product") {
      need(2);
      value = akns ? akns_tau_product(modes[0], modes[1], s.a0) : nlbq_tau_product(modes[0], modes[1], s.a0);
    } else if (form == "tau_closed") {
      need(2);
      value = akns ? akns_tau_closed(modes[0], modes[1], s.a0) : nlbq_tau_closed(modes[0], modes[1], s.a0);
    } else if (form == "manifold") {
      need(1);
      value = akns ? akns_manifold_closed(modes[0], s.a0) : nlbq_manifold_closed(modes[0], s.a0);
    } else if (form == "wave") {
      need(1);
      value = akns ? akns_wave(modes[0], s.a0) : nlbq_wave(modes[0], s.a0);
    } else {
      fail(as + ": unknown closed form '" + form + "'");
    }
    env.put(as, "value", value);
  } else if (op == "darboux") {
    const FieldExpr potential = env.field(step["potential"].get<std::string>());
    const EigenData e1 = eigen_from(env, step["first"].get<std::string>(), s.family);
    const EigenData e2 = eigen_from(env, step["second"].get<std::string>(), s.family);
    if (akns) {
      const auto pair = DarbouxPairAkns::make(e1, e2, potential, validation_box(s));
      put_eigen(env, as, darboux_eigen_akns(pair), s.family);
      env.put(as, "omega", omega_akns(pair));
      env.put(as, "tau", tau_akns(pair));
      env.put(as, "psi_div", darboux_eigen_akns_psi_divisor(pair));
    } else {
      const auto pair = DarbouxPairNlbq::make(e1, e2, potential, validation_box(s));
      put_eigen(env, as, darboux_eigen_nlbq(pair), s.family);
      const auto [plus, minus] = omega_pm_nlbq(pair);
      env.put(as, "omega_plus", plus);
      env.put(as, "omega_minus", minus);
      env.put(as, "tau", tau_nlbq(pair));
    }
  } else if (op == "iterate") {
    const std::string sol = step["solution"].get<std::string>();
    const FieldExpr manifold = env.field(step["manifold"].get<std::string>());
    if (akns) {
      put_solution(env, as, iterate_akns(env.field(sol + ".M"), manifold), nullptr);
    } else {
      const NlbqSolution next = iterate_nlbq({env.field(sol + ".M"), env.field(sol + ".N")}, manifold);
      put_solution(env, as, next.M, &next.N);
    }
  } else if (op == "backlund") {
    const FieldExpr m = env.field(step["m"].get<std::string>());
    const MiuraValidation v = miura_box(s);
    const MiuraPair p = akns ? shg_from_pair(m, backlund_partner_akns(m, v), v)
                             : kaup_from_pair(m, backlund_partner_nlbq(m, v), v);
    env.put(as, "m", p.m);
    env.put(as, "m_hat", p.m_hat);
    env.put(as, "u", p.u);
    env.put(as, "eta", p.eta);
  } else if (op == "coupled_eigen") {
    const std::string pair = step["pair"].get<std::string>();
    const EigenData e = eigen_from(env, step["eigen"].get<std::string>(), s.family);
    const FieldExpr u = env.field(pair + ".u"), eta = env.field(pair + ".eta");
    const double a = scalar_value(env, step.value("a", json(1.0)));
    const MiuraValidation v = miura_box(s);
    if (akns) {
      const CoupledEigen c = shg_coupled_eigen(e.psi, u, a, e.lambda, v);
      env.put(as, "psi", c.psi);
      env.put(as, "psi_hat", c.psi_hat);
      env.put(as, "a", c.a);
      env.put(as, "a_hat", c.a_hat);
      env.put(as, "lambda", c.lambda);
    } else {
      if (!step.contains("a_hat")) fail(as + ": the Kaup coupled eigenfunction needs a_hat");
      const double a_hat = scalar_value(env, step["a_hat"]);
      const CoupledEigen minus = kaup_coupled_eigen_minus(*e.psi_minus, u, eta, a, e.lambda, v);
      const CoupledEigen plus = kaup_coupled_eigen_plus(e.psi, u, eta, a_hat, e.lambda, v);
      env.put(as, "psi_minus", minus.psi);
      env.put(as, "psi_hat_minus", minus.psi_hat);
      env.put(as, "psi_plus", plus.psi);
      env.put(as, "psi_hat_plus", plus.psi_hat);
      env.put(as, "a", a);
      env.put(as, "a_hat", a_hat);
      env.put(as, "lambda", e.lambda);
    }
  } else if (op == "hat_manifold") {
    const std::string c = step["coupled"].get<std::string>();
    const FieldExpr phi = env.field(step["phi"].get<std::string>());
    const double a = env.scalar(c + ".a"), a_hat = env.scalar(c + ".a_hat");
    if (akns) {
      CoupledEigen e;
      e.psi = env.field(c + ".psi");
      e.psi_hat = env.field(c + ".psi_hat");
      e.a = a;
      e.a_hat = a_hat;
      env.put(as, "phi_hat", shg_hat_manifold(e, phi));
    } else {
      env.put(as, "phi_hat", kaup_hat_manifold(env.field(c + ".psi_minus"), env.field(c + ".psi_hat_plus"), a, a_hat, phi));
    }
  } else if (op == "expr") {
    if (!step.contains("expr") || !step["expr"].is_string()) fail(as + ": needs \"expr\"");
    env.put(as, "value", parse_field(step["expr"].get<std::string>()));
  } else if (op == "derive") {
    env.put(as, "value", partial(env.field(step["of"].get<std::string>()), step.value("x", 0), step.value("y", 0)));
  } else if (op == "combine") {
    const FieldExpr a = env.field(step["a"].get<std::string>()), b = env.field(step["b"].get<std::string>());
    const std::string with = step.value("with", "mul");
    if (with == "mul") {
      env.put(as, "value", a * b);
    } else if (with == "add") {
      env.put(as, "value", a + b);
    } else if (with == "sub") {
      env.put(as, "value", a - b);
    } else if (with == "div") {
      env.put(as, "value", a / b);
    } else {
      fail(as + ": unknown combination '" + with + "'");
    }
  } else if (op == "shift") {
    const std::string from = step["from"].get<std::string>() + ".";
    const std::string which = step.value("scalar", "lambda");
    const double by = number(step.value("by", json(0.0)), as + ".by");
    for (const auto& [k, f] : std::map<std::string, FieldExpr>(env.fields)) {
      if (k.rfind(from, 0) == 0) env.fields[as + "." + k.substr(from.size())] = f;
    }
    bool shifted = false;
    for (const auto& [k, v] : std::map<std::string, double>(env.scalars)) {
      if (k.rfind(from, 0) != 0) continue;
      const std::string part = k.substr(from.size());
      shifted |= part == which;
      env.scalars[as + "." + part] = part == which ? v + by : v;
    }
    if (!shifted) fail(as + ": stage '" + step["from"].get<std::string>() + "' has no scalar '" + which + "'");
  }
}

// ---------------------------------------------------------------------------
// Entries

Bindings bindings_from(const Env& env, const json& bind, const std::string& where) {
  Bindings b;
  for (auto it = bind.begin(); it != bind.end(); ++it) {
    if (const auto role = role_from_name(it.key())) {
      b.set(*role, field_value(env, it.value()));
    } else if (const auto sc = scalar_from_name(it.key())) {
      b.set(*sc, scalar_value(env, it.value()));
    } else {
      fail(where + ": unknown binding name '" + it.key() + "'");
    }
  }
  return b;
}

// "NAME [role=ref, ...]" so repeated equations stay distinguishable.
std::string default_label(const json& e) {
  std::string out = e["equation"].get<std::string>();
  const json bind = e.value("bind", json::object());
  if (bind.empty()) return out;
  out += " [";
  bool first = true;
  for (auto it = bind.begin(); it != bind.end(); ++it) {
    if (!first) out += ", ";
    first = false;
    out += it.key() + "=";
    const json& v = it.value();
    if (v.is_string()) {
      out += v.get<std::string>();
    } else if (v.is_number()) {
      out += format_number(v.get<double>());
    } else {
      out += v["ref"].get<std::string>() + (v.value("shift", 0.0) < 0 ? "" : "+") + format_number(v.value("shift", 0.0));
    }
  }
  return out + "]";
}

ReportEntry run_equation(const Scenario& s, const Env& env, const json& e, const ScanOptions& options) {
  const std::string name = e["equation"].get<std::string>();
  const auto id = equation_from_name(name);
  const std::string label = e.value("label", default_label(e));
  const Bindings b = bindings_from(env, e.value("bind", json::object()), label);
  const double tol = e.value("tolerance", s.tolerance);
  const Expectation expect = *expectation_from_name(e.value("expect", "zero"));
  const GridSpec grid = e.contains("grid") ? grid_from_json(e["grid"]) : s.grid;
  const Box box{grid.a_min, grid.a_max, grid.b_min, grid.b_max};

  ScanEntry scan;
  const json sample = e.value("sample", json("grid"));
  if (sample.is_object() && sample.contains("random")) {
    // Random points are drawn among those where every bound field is usable.
    std::vector<FieldExpr> fields;
    for (auto it = e["bind"].begin(); it != e["bind"].end(); ++it) {
      if (role_from_name(it.key())) fields.push_back(field_value(env, it.value()));
    }
    const auto pts = usable_points(fields, box, sample["random"].get<int>(), sample.value("seed", kValidationSeed),
                                   options.pole_guard);
    scan = scan_points(*id, b, pts, options);
  } else {
    scan = scan_grid(*id, b, box, grid.n_a, grid.n_b, options);
  }
  ReportEntry entry = make_entry(label, scan, tol, expect);
  if (e.contains("note")) entry.note = e["note"].get<std::string>();
  return entry;
}

std::vector<ReportEntry> run_crest(const Scenario& s, const Env& env, const json& c) {
  const std::string label = c.value("label", "crest");
  const FieldExpr mx = env.field(c["solution"].get<std::string>() + ".Mx");
  const json a = c.value("a", json::array({s.grid.a_min, s.grid.a_max, 601}));
  const double a_min = a[0].get<double>(), a_max = a[1].get<double>();
  const int n = a[2].get<int>();
  const double h = (a_max - a_min) / (n - 1);
  const int want = c.value("crests", 1);
  const double tol = c.value("tolerance", 1e-6);
  const std::vector<double> rows = c.value("rows", std::vector<double>{0.0});

  ReportEntry e;
  e.label = label;
  e.equation = "CREST";
  e.tolerance = tol;
  e.pass = true;
  std::ostringstream note;
  for (double b : rows) {
    const auto crests = row_crests(mx, b, a_min, a_max, n);
    e.points_evaluated += n;
    if (static_cast<int>(crests.size()) != want) {
      e.pass = false;
      note << "row b=" << format_number(b) << " has " << crests.size() << " crests, expected " << want << "; ";
      continue;
    }
    if (want != 1) continue;
    const Mode mode = step_mode(s, c.value("mode", json(0)), label);
    const double height = predicted_crest_height(s.family, s.a0, mode);
    const double err = std::abs(crests[0].height - height);
    const double where = predicted_crest_location(s.family, s.a0, mode, b);
    if (err >= e.max_relative_residual) {
      e.max_relative_residual = err;
      e.worst_point = {crests[0].a, b};
    }
    if (std::abs(crests[0].grid_a - where) > h) {
      e.pass = false;
      note << "row b=" << format_number(b) << " crest at " << format_number(crests[0].grid_a) << ", wave line at "
           << format_number(where) << "; ";
    }
  }
  if (e.max_relative_residual > tol) e.pass = false;
  e.note = note.str();
  if (e.note.empty()) {
    e.note = want == 1 ? "height error vs predicted crest; crest within one grid step of the wave line"
                       : std::to_string(want) + " crests found on every row";
  }
  return {e};
}

std::vector<ReportEntry> run_kernel(const json& c) {
  const KernelReport r = kernel_self_test(c.value("points", 8), c.value("seed", kValidationSeed),
                                          c.value("fd_tolerance", 1e-6), c.value("identity_tolerance", 1e-12));
  std::vector<ReportEntry> out;
  for (const KernelCheck& k : r.checks) {
    ReportEntry e;
    e.label = k.name;
    e.equation = "KERNEL";
    e.max_relative_residual = k.max_error;
    e.worst_point = k.worst_point;
    e.points_evaluated = k.comparisons;
    e.tolerance = k.tolerance;
    e.pass = k.pass;
    e.note = "worst expression: " + k.worst_expression;
    out.push_back(e);
  }
  return out;
}

}  // namespace

Scenario parse_scenario(const json& doc) {
  if (!doc.is_object()) fail("scenario must be a JSON object");
  check_keys(doc, {"name", "description", "family", "seed", "modes", "grid", "tolerance", "chain", "equations", "checks"},
             "scenario");
  Scenario s;
  if (!doc.contains("name") || !doc["name"].is_string()) fail("scenario needs a string \"name\"");
  s.name = doc["name"].get<std::string>();
  s.description = doc.value("description", "");
  const std::string family = doc.value("family", "akns");
  if (family == "akns") {
    s.family = Family::Akns;
  } else if (family == "nlbq") {
    s.family = Family::Nlbq;
  } else {
    fail("family must be \"akns\" or \"nlbq\"");
  }
  if (doc.contains("seed")) {
    const json& seed = doc["seed"];
    if (seed.is_object()) {
      check_keys(seed, {"a0"}, "seed");
      s.a0 = number(seed.value("a0", json(0.0)), "seed.a0");
    } else {
      s.a0 = number(seed, "seed");
    }
  }
  if (doc.contains("modes")) {
    if (!doc["modes"].is_array()) fail("modes must be an array");
    for (std::size_t i = 0; i < doc["modes"].size(); ++i) {
      s.modes.push_back(mode_from_json(doc["modes"][i], "modes[" + std::to_string(i) + "]"));
    }
  }
  if (doc.contains("grid")) s.grid = grid_from_json(doc["grid"]);
  if (doc.contains("tolerance")) {
    s.tolerance = number(doc["tolerance"], "tolerance");
    if (!(s.tolerance > 0.0)) fail("tolerance must be positive");
  }

  std::set<std::string> defined;
  for (const json& step : doc.value("chain", json::array())) {
    const std::string where = "chain[" + std::to_string(s.chain.size()) + "]";
    if (!step.is_object() || !step.contains("op") || !step.contains("as") || !step["op"].is_string() ||
        !step["as"].is_string()) {
      fail(where + ": every stage needs string \"op\" and \"as\"");
    }
    const std::string op = step["op"].get<std::string>();
    const std::string as = step["as"].get<std::string>();
    const auto keys = op_keys().find(op);
    if (keys == op_keys().end()) fail(where + ": unknown op '" + op + "'");
    std::set<std::string> allowed = keys->second;
    allowed.insert({"op", "as"});
    check_keys(step, allowed, where + " (" + op + ")");
    if (as.empty() || as.find('.') != std::string::npos) fail(where + ": stage name must be non-empty without '.'");
    if (defined.count(as)) fail(where + ": stage name '" + as + "' is already used");
    for (auto it = step.begin(); it != step.end(); ++it) {
      if (!it.value().is_string()) continue;
      const std::string v = it.value().get<std::string>();
      if (kStageKeys.count(it.key()) && !defined.count(v)) {
        fail(where + ": '" + v + "' refers to a stage not built before this point");
      }
      if (kFieldKeys.count(it.key())) check_ref(v, defined, where);
    }
    defined.insert(as);
    s.chain.push_back(step);
  }

  for (const json& e : doc.value("equations", json::array())) {
    const std::string where = "equations[" + std::to_string(s.equations.size()) + "]";
    if (!e.is_object()) fail(where + ": expected an object");
    check_keys(e, {"equation", "bind", "sample", "grid", "tolerance", "expect", "label", "note"}, where);
    if (e.contains("grid")) grid_from_json(e["grid"]);
    if (!e.contains("equation") || !e["equation"].is_string() ||
        !equation_from_name(e["equation"].get<std::string>())) {
      fail(where + ": unknown or missing equation name");
    }
    if (e.contains("expect") && !(e["expect"].is_string() && expectation_from_name(e["expect"].get<std::string>()))) {
      fail(where + ": expect must be zero, nonzero or info");
    }
    if (e.contains("tolerance") && !(number(e["tolerance"], where) > 0.0)) fail(where + ": tolerance must be positive");
    if (e.contains("sample")) {
      const json& smp = e["sample"];
      const bool grid = smp.is_string() && smp.get<std::string>() == "grid";
      const bool random = smp.is_object() && smp.contains("random") && smp["random"].is_number_integer() &&
                          smp["random"].get<int>() > 0;
      if (!grid && !random) fail(where + ": sample must be \"grid\" or {\"random\": n}");
    }
    const json bind = e.value("bind", json::object());
    if (!bind.is_object()) fail(where + ": bind must be an object");
    for (auto it = bind.begin(); it != bind.end(); ++it) {
      if (!role_from_name(it.key()) && !scalar_from_name(it.key())) {
        fail(where + ": unknown binding name '" + it.key() + "'");
      }
      check_bind_value(it.value(), defined, where + ".bind." + it.key());
    }
    s.equations.push_back(e);
  }

  for (const json& c : doc.value("checks", json::array())) {
    const std::string where = "checks[" + std::to_string(s.checks.size()) + "]";
    if (!c.is_object() || !c.contains("check")) fail(where + ": needs \"check\"");
    const std::string kind = c["check"].get<std::string>();
    if (kind == "crest") {
      check_keys(c, {"check", "label", "solution", "mode", "rows", "a", "crests", "tolerance"}, where);
      if (!c.contains("solution") || !defined.count(c["solution"].get<std::string>())) {
        fail(where + ": crest check needs a built \"solution\" stage");
      }
    } else if (kind == "kernel") {
      check_keys(c, {"check", "label", "points", "seed", "fd_tolerance", "identity_tolerance"}, where);
    } else {
      fail(where + ": unknown check '" + kind + "'");
    }
    s.checks.push_back(c);
  }
  return s;
}

Scenario parse_scenario_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("scenario is not valid JSON: ") + e.what());
  }
  return parse_scenario(doc);
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read scenario file '" + path.string() + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return parse_scenario_text(s.str());
}

ResidualReport run_suite(const Scenario& scenario, const ScanOptions& options) {
  Env env;
  for (std::size_t i = 0; i < scenario.chain.size(); ++i) {
    const json& step = scenario.chain[i];
    try {
      apply_step(scenario, step, env);
    } catch (const Error& e) {
      throw Error(e.kind(), "stage " + std::to_string(i + 1) + " '" + step["as"].get<std::string>() + "' (" +
                                step["op"].get<std::string>() + "): " + e.what());
    }
  }

  ResidualReport report;
  report.name = scenario.name;
  for (std::size_t i = 0; i < scenario.equations.size(); ++i) {
    const json& e = scenario.equations[i];
    try {
      report.add(run_equation(scenario, env, e, options));
    } catch (const Error& err) {
      throw Error(err.kind(), "equation " + std::to_string(i + 1) + " '" + e.value("label", e["equation"].get<std::string>()) +
                                  "': " + err.what());
    }
  }
  for (std::size_t i = 0; i < scenario.checks.size(); ++i) {
    const json& c = scenario.checks[i];
    try {
      const std::string kind = c["check"].get<std::string>();
      for (ReportEntry& e : kind == "crest" ? run_crest(scenario, env, c) : run_kernel(c)) report.add(std::move(e));
    } catch (const Error& err) {
      throw Error(err.kind(), "check " + std::to_string(i + 1) + " '" + c.value("label", c["check"].get<std::string>()) +
                                  "': " + err.what());
    }
  }
  return report;
}

Scenario builtin_scenario(std::string_view name) {
  for (const BuiltinScenario& b : builtin_scenarios()) {
    if (b.name == name) return parse_scenario_text(b.json);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown built-in scenario '" + std::string(name) + "'");
}

json report_to_json(const ResidualReport& report) {
  json entries = json::array();
  for (const ReportEntry& e : report.entries) {
    entries.push_back({{"label", e.label},
                       {"equation", e.equation},
                       {"max_relative_residual", e.max_relative_residual},
                       {"worst_point", {{"a", e.worst_point.a}, {"b", e.worst_point.b}}},
                       {"points_evaluated", e.points_evaluated},
                       {"points_skipped_near_pole", e.points_skipped_near_pole},
                       {"tolerance", e.tolerance},
                       {"expect", std::string(to_string(e.expect))},
                       {"pass", e.pass},
                       {"note", e.note}});
  }
  return {{"name", report.name}, {"pass", report.pass}, {"entries", entries}};
}

std::string report_to_text(const ResidualReport& report) {
  std::ostringstream out;
  for (const ReportEntry& e : report.entries) {
    out << (e.pass ? "PASS " : "FAIL ") << report.name << ": " << e.label << "  residual "
        << format_number(e.max_relative_residual) << (e.expect == Expectation::Nonzero ? " >= " : " <= ")
        << format_number(e.tolerance);
    if (e.expect == Expectation::Info) out << " (info)";
    if (e.points_skipped_near_pole > 0) out << "  skipped " << e.points_skipped_near_pole;
    out << '\n';
  }
  return out.str();
}

}  // namespace solitonjet
