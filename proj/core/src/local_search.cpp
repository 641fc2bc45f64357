#include "gwcut/local_search.hpp"

#include <algorithm>
#include <vector>

#include "gwcut/error.hpp"
#include "gwcut/parallel.hpp"
#include "gwcut/rng.hpp"

namespace gwcut {

namespace {

// Improvement threshold: exact zero for integer weights, guards termination
// against rounding for real weights.
double move_tolerance(const Graph& g) { return 1e-12 * std::max(1.0, g.max_abs_weight()); }

struct SearchState {
  const Graph& g;
  SpinState sigma;
  std::vector<double> field;
  double cut;
  std::size_t flips = 0;

  SearchState(const Graph& graph, SpinState s)
      : g(graph), sigma(std::move(s)), field(node_fields(graph, sigma)), cut(cut_size(graph, sigma)) {}

  void flip(NodeId m) {
    cut += field[m];
    const int old = sigma[m];
    field[m] = -field[m];
    for (const Neighbor& nb : g.neighbors(m)) field[nb.node] -= 2.0 * nb.weight * sigma[nb.node] * old;
    sigma.flip(m);
    ++flips;
  }

  void run_one_opt(double tol) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (NodeId m = 0; m < g.num_nodes(); ++m) {
        if (field[m] > tol) {
          flip(m);
          improved = true;
        }
      }
    }
  }

  // Returns true if a pair move was applied.
  bool try_pair_move(double tol) {
    for (const Edge& e : g.edges()) {
      if (sigma[e.u] == sigma[e.v]) continue;
      if (field[e.u] + field[e.v] + 2.0 * e.w > tol) {
        flip(e.u);
        flip(e.v);
        return true;
      }
    }
    return false;
  }

  LsResult finish() && {
    const double exact = cut_size(g, sigma);
    return {std::move(sigma), exact, flips, 1};
  }
};

void check(const Graph& g, const SpinState& s) {
  if (s.size() != g.num_nodes()) throw Error(ErrorCode::LengthMismatch, "state length differs from graph");
}

}  // namespace

std::string_view to_string(LsVariant variant) { return variant == LsVariant::OneOpt ? "ls1" : "ls2"; }

LsResult one_opt(const Graph& g, SpinState s) {
  check(g, s);
  SearchState st(g, std::move(s));
  st.run_one_opt(move_tolerance(g));
  return std::move(st).finish();
}

LsResult two_opt(const Graph& g, SpinState s) {
  check(g, s);
  const double tol = move_tolerance(g);
  SearchState st(g, std::move(s));
  st.run_one_opt(tol);
  while (st.try_pair_move(tol)) st.run_one_opt(tol);
  return std::move(st).finish();
}

LsResult local_search(const Graph& g, LsVariant variant, SpinState s) {
  return variant == LsVariant::OneOpt ? one_opt(g, std::move(s)) : two_opt(g, std::move(s));
}

LsResult multistart(const Graph& g, LsVariant variant, std::size_t tries, std::uint64_t seed, int threads) {
  if (tries < 1) throw Error(ErrorCode::InvalidArgument, "multistart needs at least one try");
  std::vector<LsResult> results(tries);
  parallel_for(tries, threads, [&](std::size_t t) {
    Rng rng = Rng::derive(seed, t);
    results[t] = local_search(g, variant, SpinState::random(g.num_nodes(), rng));
  });
  std::size_t best = 0;
  std::size_t total_flips = 0;
  for (std::size_t t = 0; t < tries; ++t) {
    total_flips += results[t].flips;
    if (results[t].cut > results[best].cut) best = t;
  }
  LsResult out = std::move(results[best]);
  out.flips = total_flips;
  out.restarts_used = tries;
  return out;
}

bool is_one_opt_stable(const Graph& g, const SpinState& s) {
  const double tol = move_tolerance(g);
  const std::vector<double> f = node_fields(g, s);
  return std::all_of(f.begin(), f.end(), [&](double v) { return v <= tol; });
}

bool is_two_opt_stable(const Graph& g, const SpinState& s) {
  if (!is_one_opt_stable(g, s)) return false;
  const double tol = move_tolerance(g);
  const std::vector<double> f = node_fields(g, s);
  for (const Edge& e : g.edges()) {
    if (s[e.u] != s[e.v] && f[e.u] + f[e.v] > -2.0 * e.w + tol) return false;
  }
  return true;
}

}  // namespace gwcut
