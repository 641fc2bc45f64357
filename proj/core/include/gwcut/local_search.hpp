#pragma once

#include <cstdint>
#include <string_view>

#include "gwcut/graph.hpp"
#include "gwcut/objective.hpp"

namespace gwcut {

struct LsResult {
  SpinState sigma;
  double cut = 0.0;
  std::size_t flips = 0;
  std::size_t restarts_used = 1;
};

enum class LsVariant { OneOpt, TwoOpt };

std::string_view to_string(LsVariant variant);

// Flips any spin with F_m > 0, scanning nodes in ascending order, until every
// node has at least half of its incident weight cut.
LsResult one_opt(const Graph& g, SpinState s);

// one_opt, then repeatedly inverts both endpoints of the first cut edge with
// F_m + F_n > -2 w_mn (re-running one_opt after each improvement).
LsResult two_opt(const Graph& g, SpinState s);

LsResult local_search(const Graph& g, LsVariant variant, SpinState s);

// Best of `tries` runs from uniformly random spins; try t draws its start
// from Rng::derive(seed, t). Ties go to the lowest try index.
LsResult multistart(const Graph& g, LsVariant variant, std::size_t tries, std::uint64_t seed, int threads = 1);

// Audits the terminal conditions; returns true when they hold.
bool is_one_opt_stable(const Graph& g, const SpinState& s);
bool is_two_opt_stable(const Graph& g, const SpinState& s);

}  // namespace gwcut
