#include "solitonjet/profile.hpp"

#include <charconv>
#include <cmath>
#include <exception>
#include <ostream>
#include <sstream>
#include <thread>

#include "solitonjet/error.hpp"

namespace solitonjet {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad(std::string_view what, std::string_view text) {
  throw Error(ErrorKind::InvalidArgument, std::string(what) + ": '" + std::string(text) + "'");
}

double to_double(std::string_view s, std::string_view context) {
  s = trim(s);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || !std::isfinite(v)) bad("expected a number", context);
  return v;
}

int to_int(std::string_view s, std::string_view context) {
  s = trim(s);
  int v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) bad("expected an integer", context);
  return v;
}

}  // namespace

GridSpec parse_grid_spec(std::string_view text) {
  GridSpec g;
  for (std::string_view part : split(text, ',')) {
    part = trim(part);
    const std::size_t eq = part.find('=');
    if (eq == std::string_view::npos) bad("grid part must look like a=min:max:n", part);
    const std::string_view key = trim(part.substr(0, eq));
    const auto fields = split(part.substr(eq + 1), ':');
    if (fields.size() != 3) bad("grid part must look like a=min:max:n", part);
    const double lo = to_double(fields[0], part), hi = to_double(fields[1], part);
    const int n = to_int(fields[2], part);
    if (n < 2) bad("grid needs at least 2 points per axis", part);
    if (!(hi > lo)) bad("grid needs min < max", part);
    if (key == "a" || key == "x") {
      g.a_min = lo, g.a_max = hi, g.n_a = n;
    } else if (key == "b" || key == "y" || key == "t") {
      g.b_min = lo, g.b_max = hi, g.n_b = n;
    } else {
      bad("unknown grid axis", key);
    }
  }
  return g;
}

Mode parse_mode(std::string_view text) {
  Mode m;
  bool have_k = false;
  for (std::string_view part : split(text, ',')) {
    part = trim(part);
    const std::size_t eq = part.find('=');
    if (eq == std::string_view::npos) bad("mode part must look like k=R", part);
    const std::string_view key = trim(part.substr(0, eq));
    const double v = to_double(part.substr(eq + 1), part);
    if (key == "k" || key == "a") {
      m.k = v;
      have_k = true;
    } else if (key == "x0") {
      m.x0 = v;
    } else {
      bad("unknown mode key", key);
    }
  }
  if (!have_k) bad("mode needs k=", text);
  return m;
}

FieldExpr soliton_field(const SolitonSpec& spec, ProfileField field) {
  const FieldExpr M = spec.family == Family::Akns ? akns_soliton(spec) : nlbq_soliton(spec).M;
  return field == ProfileField::M ? M : dx(M);
}

GridOutput sample_grid(const FieldExpr& f, const GridSpec& grid, int threads) {
  if (grid.n_a < 2 || grid.n_b < 2) throw Error(ErrorKind::InvalidArgument, "grid needs at least 2 points per axis");
  GridOutput out;
  out.grid = grid;
  out.values.assign(static_cast<std::size_t>(grid.n_a) * grid.n_b, 0.0);
  const int n_threads = std::max(1, std::min(threads <= 0 ? static_cast<int>(std::thread::hardware_concurrency())
                                                          : threads,
                                             grid.n_a));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(grid.n_a));
  auto work = [&](int first) {
    for (int i = first; i < grid.n_a; i += n_threads) {
      try {
        for (int j = 0; j < grid.n_b; ++j) {
          out.values[static_cast<std::size_t>(i) * grid.n_b + j] = value_at(f, {grid.a_at(i), grid.b_at(j)});
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (n_threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

void write_csv(std::ostream& out, const GridOutput& g) {
  out << "a,b,value\n";
  for (int i = 0; i < g.grid.n_a; ++i) {
    for (int j = 0; j < g.grid.n_b; ++j) {
      out << format_number(g.grid.a_at(i)) << ',' << format_number(g.grid.b_at(j)) << ','
          << format_number(g.at(i, j)) << '\n';
    }
  }
}

std::string to_csv(const GridOutput& g) {
  std::ostringstream s;
  write_csv(s, g);
  return s.str();
}

std::vector<Crest> row_crests(const FieldExpr& f, double b, double a_min, double a_max, int n, double prominence) {
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "crest search needs at least 3 samples");
  const double h = (a_max - a_min) / (n - 1);
  std::vector<double> v(static_cast<std::size_t>(n));
  double top = -INFINITY;
  for (int i = 0; i < n; ++i) {
    v[i] = value_at(f, {a_min + i * h, b});
    top = std::max(top, v[i]);
  }
  std::vector<Crest> crests;
  for (int i = 1; i + 1 < n; ++i) {
    if (!(v[i] > v[i - 1] && v[i] >= v[i + 1]) || v[i] < prominence * top) continue;
    Crest c;
    c.grid_a = a_min + i * h;
    c.grid_height = v[i];
    double a = c.grid_a;
    for (int it = 0; it < 50; ++it) {
      const Jet2 j = evaluate(f, {a, b}, 2, 0);
      const double step = j.partial(1, 0) / j.partial(2, 0);
      if (!std::isfinite(step) || j.partial(2, 0) >= 0.0) break;
      a -= step;
      if (std::abs(step) <= 1e-15 * (1.0 + std::abs(a))) break;
    }
    // Newton must stay inside the sampled bracket to count as the same crest.
    if (std::abs(a - c.grid_a) > h) a = c.grid_a;
    c.a = a;
    c.height = value_at(f, {a, b});
    crests.push_back(c);
  }
  return crests;
}

double predicted_crest_height(Family family, double a0, const Mode& mode) {
  if (family == Family::Akns) return mode.k * mode.k;
  const double kappa = mode.k - a0 / mode.k;
  return a0 + kappa * kappa / 4.0;
}

double predicted_crest_location(Family family, double a0, const Mode& mode, double b) {
  if (family == Family::Akns) return mode.x0 + a0 * b / (mode.k * mode.k);
  return mode.x0 + (mode.k + a0 / mode.k) * b;
}

}  // namespace solitonjet
