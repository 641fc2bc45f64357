#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "gwcut/graph.hpp"

namespace gwcut {

class Rng;

// Binary spin configuration, every entry exactly +1 or -1.
class SpinState {
 public:
  SpinState() = default;
  explicit SpinState(std::size_t n, std::int8_t value = 1);
  // Throws DomainViolation unless every entry is +1 or -1.
  explicit SpinState(std::vector<std::int8_t> spins);
  SpinState(std::initializer_list<int> spins);

  static SpinState random(std::size_t n, Rng& rng);

  std::size_t size() const { return spins_.size(); }
  int operator[](std::size_t m) const { return spins_[m]; }
  void flip(std::size_t m) { spins_[m] = static_cast<std::int8_t>(-spins_[m]); }
  SpinState negated() const;
  std::span<const std::int8_t> values() const { return spins_; }

  friend bool operator==(const SpinState&, const SpinState&) = default;

 private:
  std::vector<std::int8_t> spins_;
};

// Unconstrained real node variables; read modulo the period 4 where relevant.
using ContinuousState = std::vector<double>;

// Selects the core function scoring one edge from the difference of its
// endpoint variables.
enum class ModelKind { Ising, Sdp, Triangular, Gw };

inline constexpr double kPeriod = 4.0;

std::string_view to_string(ModelKind model);
ModelKind parse_model(std::string_view name);

// Hamiltonian: sum over edges of w * s_u * s_v.
double ising_energy(const Graph& g, const SpinState& s);
// Weight of edges joining the +1 and -1 parts, (W - H) / 2.
double cut_size(const Graph& g, const SpinState& s);
// F_m = sum_n A_mn s_m s_n; flipping m changes the cut by exactly F_m.
double node_field(const Graph& g, const SpinState& s, NodeId m);
std::vector<double> node_fields(const Graph& g, const SpinState& s);

// Period-4 core functions. Ising accepts integer arguments only.
double core_phi(ModelKind model, double x);
// Derivative of core_phi. For Gw this is sgn(x)/2 on (-2, 2] with sgn(0) = 0
// and value 0 at x = 2; the Triangular kink at |x| = 1 takes the common
// one-sided value.
double core_phi_deriv(ModelKind model, double x);

// Reduces x to the principal period (-2, 2].
double wrap_period(double x);

double relaxed_objective(const Graph& g, std::span<const double> xi, ModelKind model);

// C(s) + (1/2) sum_edges w s_u s_v |X_u - X_v|, X in (-1, 1].
double gw_objective_sx(const Graph& g, const SpinState& s, std::span<const double> x);
// The continuous part alone: (1/2) sum_edges w s_u s_v |X_u - X_v|. X is not
// domain-checked so that it can be evaluated on 0/1 difference indicators.
double gw_objective_tail(const Graph& g, const SpinState& s, std::span<const double> x);

// 2 (c_ref - c_other) / (c_ref + c_other) * 100.
double discrepancy_delta(double c_ref, double c_other);

}  // namespace gwcut
