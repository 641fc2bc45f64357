#include "gwcut/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "gwcut/error.hpp"
#include "gwcut/local_search.hpp"
#include "gwcut/oracle.hpp"
#include "gwcut/parallel.hpp"

namespace gwcut {

std::string_view to_string(SolverKind solver) {
  switch (solver) {
    case SolverKind::Gw2: return "gw2";
    case SolverKind::TrGw2: return "tr_gw2";
    case SolverKind::SdpGw2: return "sdp_gw2";
    case SolverKind::Ls1: return "ls1";
    case SolverKind::Ls2: return "ls2";
    case SolverKind::Brute: return "brute";
  }
  return "?";
}

SolverKind parse_solver(std::string_view name) {
  for (SolverKind s : {SolverKind::Gw2, SolverKind::TrGw2, SolverKind::SdpGw2, SolverKind::Ls1, SolverKind::Ls2,
                       SolverKind::Brute}) {
    if (to_string(s) == name) return s;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown solver '" + std::string(name) + "'");
}

SolveOutcome run_solver(const Graph& g, SolverKind solver, const SolverOptions& options, std::uint64_t seed) {
  const Schedule schedule = options.fit_schedule ? options.schedule.fitted_to(g) : options.schedule;
  SolveOutcome out;
  auto from_run = [&](RunResult r) {
    out.sigma = std::move(r.sigma);
    out.cut = r.cut;
    out.steps = r.steps;
    out.restarts = r.restarts;
  };
  auto from_ls = [&](LsResult r) {
    out.sigma = std::move(r.sigma);
    out.cut = r.cut;
    out.steps = r.flips;
    out.restarts = static_cast<int>(r.restarts_used);
  };
  switch (solver) {
    case SolverKind::Gw2:
      from_run(gw2_solve(g, schedule, seed));
      break;
    case SolverKind::TrGw2:
    case SolverKind::SdpGw2: {
      HeteroConfig config;
      config.first_stage = solver == SolverKind::TrGw2 ? ModelKind::Triangular : ModelKind::Sdp;
      config.relax_steps = options.relax_steps;
      config.schedule = schedule;
      from_run(hetero_run(g, config, seed));
      break;
    }
    case SolverKind::Ls1:
      from_ls(multistart(g, LsVariant::OneOpt, options.ls_tries, seed, options.threads));
      break;
    case SolverKind::Ls2:
      from_ls(multistart(g, LsVariant::TwoOpt, options.ls_tries, seed, options.threads));
      break;
    case SolverKind::Brute: {
      MaxCut best = brute_force_maxcut(g, options.threads);
      out.sigma = std::move(best.sigma);
      out.cut = best.cut;
      out.steps = std::size_t{1} << (g.num_nodes() > 0 ? g.num_nodes() - 1 : 0);
      out.restarts = 1;
      out.exact = true;
      break;
    }
  }
  return out;
}

// --- CSV ----------------------------------------------------------------------

namespace {

std::string format_double(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view text, std::size_t line, std::string_view column) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": bad " + std::string(column) + " '" +
                                           std::string(text) + "'");
  }
  return value;
}

std::optional<double> parse_optional(std::string_view text, std::size_t line, std::string_view column) {
  if (text.empty()) return std::nullopt;
  return parse_number<double>(text, line, column);
}

}  // namespace

std::string format_bench_csv(const std::vector<BenchRecord>& records, bool include_timing) {
  std::ostringstream out;
  out << kBenchCsvHeader << '\n';
  for (const BenchRecord& r : records) {
    out << sanitize(r.graph_id) << ',' << r.n << ',' << r.m << ',' << sanitize(r.family) << ',' << sanitize(r.param)
        << ',' << r.seed << ',' << sanitize(r.solver) << ',' << format_double(r.cut, 17) << ','
        << (r.best_known ? format_double(*r.best_known, 17) : "") << ','
        << (r.delta_pct ? format_double(*r.delta_pct, 12) : "") << ','
        << (include_timing ? format_double(r.time_ms, 6) : "") << ',' << r.steps << ',' << r.restarts << ','
        << sanitize(r.status) << '\n';
  }
  return out.str();
}

std::vector<BenchRecord> parse_bench_csv(std::string_view text) {
  std::vector<BenchRecord> records;
  std::size_t line_no = 0;
  bool header_seen = false;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kBenchCsvHeader) throw Error(ErrorCode::ParseError, "unexpected CSV header");
      header_seen = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 14) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected 14 columns, found " +
                                             std::to_string(f.size()));
    }
    BenchRecord r;
    r.graph_id = f[0];
    r.n = parse_number<std::size_t>(f[1], line_no, "n");
    r.m = parse_number<std::size_t>(f[2], line_no, "m");
    r.family = f[3];
    r.param = f[4];
    r.seed = parse_number<std::uint64_t>(f[5], line_no, "seed");
    r.solver = f[6];
    r.cut = parse_number<double>(f[7], line_no, "cut");
    r.best_known = parse_optional(f[8], line_no, "best_known");
    r.delta_pct = parse_optional(f[9], line_no, "delta_pct");
    r.time_ms = f[10].empty() ? 0.0 : parse_number<double>(f[10], line_no, "time_ms");
    r.steps = parse_number<std::size_t>(f[11], line_no, "steps");
    r.restarts = parse_number<int>(f[12], line_no, "restarts");
    r.status = f[13];
    records.push_back(std::move(r));
  }
  if (!header_seen) throw Error(ErrorCode::ParseError, "empty CSV");
  return records;
}

// --- sweep --------------------------------------------------------------------

FamilySpec parse_family(std::string_view text) {
  FamilySpec spec;
  const std::size_t colon = text.find(':');
  spec.family = std::string(text.substr(0, colon));
  if (spec.family == "er") {
    if (colon != std::string_view::npos) {
      const std::string_view p = text.substr(colon + 1);
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), value);
      if (ec != std::errc{} || ptr != p.data() + p.size() || !(value > 0.0 && value <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "er edge probability must lie in (0, 1]");
      }
      spec.p = value;
    }
    return spec;
  }
  if ((spec.family == "reg3" || spec.family == "reg4") && colon == std::string_view::npos) return spec;
  throw Error(ErrorCode::InvalidArgument, "unknown graph family '" + std::string(text) + "'");
}

Graph generate_instance(const FamilySpec& family, std::size_t n, std::uint64_t seed) {
  if (family.family == "er") return gen_erdos_renyi(n, family.p, seed);
  if (family.family == "reg3") return gen_d_regular(n, 3, seed);
  if (family.family == "reg4") return gen_d_regular(n, 4, seed);
  throw Error(ErrorCode::InvalidArgument, "unknown graph family '" + family.family + "'");
}

namespace {

std::string family_param(const FamilySpec& family) {
  if (family.family == "er") return format_double(family.p, 6);
  if (family.family == "reg3") return "3";
  if (family.family == "reg4") return "4";
  return "-";
}

}  // namespace

std::string graph_id(const FamilySpec& family, std::size_t n, std::uint64_t seed) {
  return family.family + "_n" + std::to_string(n) + "_" + family_param(family) + "_s" + std::to_string(seed);
}

std::optional<SolverKind> reference_solver(const std::vector<SolverKind>& solvers) {
  for (SolverKind s : {SolverKind::Ls2, SolverKind::Ls1, SolverKind::Brute}) {
    if (std::find(solvers.begin(), solvers.end(), s) != solvers.end()) return s;
  }
  return std::nullopt;
}

std::vector<BenchRecord> run_sweep(const SweepSpec& spec) {
  if (spec.cell_count() == 0) throw Error(ErrorCode::InvalidArgument, "empty sweep");
  const std::size_t per_graph = spec.solvers.size();
  const std::size_t graphs = spec.cell_count() / per_graph;
  std::vector<BenchRecord> rows(spec.cell_count());

  SolverOptions options = spec.options;
  options.threads = 1;  // parallelism lives at the cell level
  parallel_for(graphs, spec.threads, [&](std::size_t gi) {
    const std::size_t seed_idx = gi % spec.seeds.size();
    const std::size_t size_idx = (gi / spec.seeds.size()) % spec.sizes.size();
    const std::size_t fam_idx = gi / (spec.seeds.size() * spec.sizes.size());
    const FamilySpec& family = spec.families[fam_idx];
    const std::size_t n = spec.sizes[size_idx];
    const std::uint64_t seed = spec.seeds[seed_idx];

    BenchRecord base;
    base.graph_id = graph_id(family, n, seed);
    base.n = n;
    base.family = family.family;
    base.param = family_param(family);
    base.seed = seed;

    std::optional<Graph> g;
    std::string generation_error;
    try {
      g = generate_instance(family, n, seed);
      base.m = g->num_edges();
    } catch (const std::exception& e) {
      generation_error = std::string("error: ") + e.what();
    }

    for (std::size_t si = 0; si < per_graph; ++si) {
      BenchRecord r = base;
      r.solver = std::string(to_string(spec.solvers[si]));
      if (!g) {
        r.status = generation_error;
      } else {
        try {
          const auto start = std::chrono::steady_clock::now();
          const SolveOutcome out = run_solver(*g, spec.solvers[si], options, seed);
          r.time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
          r.cut = out.cut;
          r.steps = out.steps;
          r.restarts = out.restarts;
        } catch (const std::exception& e) {
          r.status = std::string("error: ") + e.what();
        }
      }
      rows[gi * per_graph + si] = std::move(r);
    }

    // Best known cut and discrepancy against the reference solver.
    const auto slice = rows.begin() + static_cast<std::ptrdiff_t>(gi * per_graph);
    std::optional<double> best;
    for (std::size_t si = 0; si < per_graph; ++si) {
      const BenchRecord& r = slice[static_cast<std::ptrdiff_t>(si)];
      if (!r.ok()) continue;
      if (spec.solvers[si] == SolverKind::Brute) {
        best = r.cut;
        break;
      }
      best = best ? std::max(*best, r.cut) : r.cut;
    }
    std::optional<double> reference;
    if (const auto ref = reference_solver(spec.solvers)) {
      for (std::size_t si = 0; si < per_graph; ++si) {
        const BenchRecord& r = slice[static_cast<std::ptrdiff_t>(si)];
        if (spec.solvers[si] == *ref && r.ok()) reference = r.cut;
      }
    }
    for (std::size_t si = 0; si < per_graph; ++si) {
      BenchRecord& r = slice[static_cast<std::ptrdiff_t>(si)];
      if (!r.ok()) continue;
      r.best_known = best;
      if (reference && *reference + r.cut != 0.0) r.delta_pct = discrepancy_delta(*reference, r.cut);
    }
  });
  return rows;
}

std::optional<double> fit_time_exponent(const std::vector<BenchRecord>& records, std::string_view solver) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const BenchRecord& r : records) {
    if (!r.ok() || r.solver != solver || r.m == 0 || !(r.time_ms > 0.0)) continue;
    xs.push_back(std::log(static_cast<double>(r.m)));
    ys.push_back(std::log(r.time_ms));
  }
  if (xs.size() < 2 || std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs.front(); })) {
    return std::nullopt;
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

std::optional<double> median_abs_delta(const std::vector<BenchRecord>& records, std::string_view solver) {
  std::vector<double> values;
  for (const BenchRecord& r : records) {
    if (r.ok() && r.solver == solver && r.delta_pct) values.push_back(std::abs(*r.delta_pct));
  }
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

// --- SVG ----------------------------------------------------------------------

namespace {

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  double map(double v, double a, double b) const { return hi == lo ? 0.5 * (a + b) : a + (v - lo) / (hi - lo) * (b - a); }
};

Axis span_of(const std::vector<double>& v) {
  Axis a{*std::min_element(v.begin(), v.end()), *std::max_element(v.begin(), v.end())};
  const double pad = a.hi > a.lo ? 0.05 * (a.hi - a.lo) : 0.5;
  return {a.lo - pad, a.hi + pad};
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

}  // namespace

std::string render_svg(const std::vector<BenchRecord>& records) {
  std::vector<std::string> solvers;
  std::vector<double> lx;
  std::vector<double> ly;
  std::vector<double> dx;
  std::vector<double> dy;
  for (const BenchRecord& r : records) {
    if (!r.ok() || r.m == 0 || !(r.time_ms > 0.0)) continue;
    if (std::find(solvers.begin(), solvers.end(), r.solver) == solvers.end()) solvers.push_back(r.solver);
    lx.push_back(std::log10(static_cast<double>(r.m)));
    ly.push_back(std::log10(r.time_ms));
    if (r.delta_pct) {
      dx.push_back(lx.back());
      dy.push_back(*r.delta_pct);
    }
  }

  constexpr double W = 640;
  constexpr double H = 480;
  constexpr double L = 70;
  constexpr double R = 610;
  constexpr double T = 30;
  constexpr double B = 420;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << L << "\" y1=\"" << B << "\" x2=\"" << R << "\" y2=\"" << B << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << B << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << (L + R) / 2 << "\" y=\"" << H - 20 << "\" text-anchor=\"middle\">log10(edges)</text>\n";
  out << "<text x=\"18\" y=\"" << (T + B) / 2 << "\" transform=\"rotate(-90 18 " << (T + B) / 2
      << ")\" text-anchor=\"middle\">log10(time ms)</text>\n";
  if (lx.empty()) {
    out << "<text x=\"" << (L + R) / 2 << "\" y=\"" << (T + B) / 2 << "\" text-anchor=\"middle\">no data</text>\n";
    out << "</svg>\n";
    return out.str();
  }

  const Axis ax = span_of(lx);
  const Axis ay = span_of(ly);
  for (int tick = 0; tick <= 4; ++tick) {
    const double vx = ax.lo + (ax.hi - ax.lo) * tick / 4.0;
    const double vy = ay.lo + (ay.hi - ay.lo) * tick / 4.0;
    out << "<text x=\"" << ax.map(vx, L, R) << "\" y=\"" << B + 16 << "\" text-anchor=\"middle\">"
        << format_double(vx, 3) << "</text>\n";
    out << "<text x=\"" << L - 6 << "\" y=\"" << ay.map(vy, B, T) + 4 << "\" text-anchor=\"end\">"
        << format_double(vy, 3) << "</text>\n";
  }
  std::size_t i = 0;
  for (const BenchRecord& r : records) {
    if (!r.ok() || r.m == 0 || !(r.time_ms > 0.0)) continue;
    const auto idx = std::find(solvers.begin(), solvers.end(), r.solver) - solvers.begin();
    out << "<circle cx=\"" << ax.map(lx[i], L, R) << "\" cy=\"" << ay.map(ly[i], B, T) << "\" r=\"3\" fill=\""
        << kPalette[idx % 6] << "\"/>\n";
    ++i;
  }
  for (std::size_t s = 0; s < solvers.size(); ++s) {
    const double y = T + 14.0 * static_cast<double>(s);
    out << "<circle cx=\"" << L + 12 << "\" cy=\"" << y + 6 << "\" r=\"4\" fill=\"" << kPalette[s % 6] << "\"/>\n";
    out << "<text x=\"" << L + 22 << "\" y=\"" << y + 10 << "\">" << solvers[s] << "</text>\n";
  }

  if (!dx.empty()) {
    // Inset: discrepancy (%) against edge count.
    constexpr double IL = 420;
    constexpr double IR = 600;
    constexpr double IT = 250;
    constexpr double IB = 400;
    const Axis bx = span_of(dx);
    Axis by = span_of(dy);
    by.lo = std::min(by.lo, 0.0);
    by.hi = std::max(by.hi, 0.0);
    out << "<rect x=\"" << IL << "\" y=\"" << IT << "\" width=\"" << IR - IL << "\" height=\"" << IB - IT
        << "\" fill=\"white\" stroke=\"gray\"/>\n";
    out << "<line x1=\"" << IL << "\" y1=\"" << by.map(0.0, IB, IT) << "\" x2=\"" << IR << "\" y2=\""
        << by.map(0.0, IB, IT) << "\" stroke=\"gray\" stroke-dasharray=\"3,3\"/>\n";
    out << "<text x=\"" << IL + 4 << "\" y=\"" << IT + 12 << "\" font-size=\"10\">delta % vs log10(edges)</text>\n";
    for (std::size_t k = 0; k < dx.size(); ++k) {
      out << "<circle cx=\"" << bx.map(dx[k], IL, IR) << "\" cy=\"" << by.map(dy[k], IB, IT)
          << "\" r=\"2\" fill=\"black\"/>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace gwcut
