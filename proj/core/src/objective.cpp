#include "gwcut/objective.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gwcut/error.hpp"
#include "gwcut/rng.hpp"

namespace gwcut {

SpinState::SpinState(std::size_t n, std::int8_t value) : spins_(n, value) {
  if (value != 1 && value != -1) throw Error(ErrorCode::DomainViolation, "spin must be +1 or -1");
}

SpinState::SpinState(std::vector<std::int8_t> spins) : spins_(std::move(spins)) {
  for (auto s : spins_) {
    if (s != 1 && s != -1) throw Error(ErrorCode::DomainViolation, "spin must be +1 or -1");
  }
}

SpinState::SpinState(std::initializer_list<int> spins) {
  spins_.reserve(spins.size());
  for (int s : spins) {
    if (s != 1 && s != -1) throw Error(ErrorCode::DomainViolation, "spin must be +1 or -1");
    spins_.push_back(static_cast<std::int8_t>(s));
  }
}

SpinState SpinState::random(std::size_t n, Rng& rng) {
  std::vector<std::int8_t> spins(n);
  for (auto& s : spins) s = rng.coin() ? 1 : -1;
  return SpinState(std::move(spins));
}

SpinState SpinState::negated() const {
  SpinState out = *this;
  for (auto& s : out.spins_) s = static_cast<std::int8_t>(-s);
  return out;
}

std::string_view to_string(ModelKind model) {
  switch (model) {
    case ModelKind::Ising: return "ising";
    case ModelKind::Sdp: return "sdp";
    case ModelKind::Triangular: return "tr";
    case ModelKind::Gw: return "gw";
  }
  return "?";
}

ModelKind parse_model(std::string_view name) {
  if (name == "ising") return ModelKind::Ising;
  if (name == "sdp") return ModelKind::Sdp;
  if (name == "tr" || name == "triangular") return ModelKind::Triangular;
  if (name == "gw") return ModelKind::Gw;
  throw Error(ErrorCode::InvalidModel, "unknown model '" + std::string(name) + "'");
}

namespace {

void check_length(const Graph& g, std::size_t len) {
  if (len != g.num_nodes()) {
    throw Error(ErrorCode::LengthMismatch, "state has " + std::to_string(len) + " entries, graph has " +
                                               std::to_string(g.num_nodes()) + " nodes");
  }
}

void check_x_domain(std::span<const double> x) {
  for (double v : x) {
    if (!(v > -1.0 && v <= 1.0)) {
      throw Error(ErrorCode::DomainViolation, "continuous component " + std::to_string(v) + " outside (-1, 1]");
    }
  }
}

}  // namespace

double ising_energy(const Graph& g, const SpinState& s) {
  check_length(g, s.size());
  double h = 0.0;
  for (const Edge& e : g.edges()) h += e.w * s[e.u] * s[e.v];
  return h;
}

double cut_size(const Graph& g, const SpinState& s) {
  return 0.5 * (g.total_weight() - ising_energy(g, s));
}

double node_field(const Graph& g, const SpinState& s, NodeId m) {
  check_length(g, s.size());
  if (m >= g.num_nodes()) throw Error(ErrorCode::IndexOutOfRange, "node " + std::to_string(m));
  double f = 0.0;
  for (const Neighbor& nb : g.neighbors(m)) f += nb.weight * s[nb.node];
  return f * s[m];
}

std::vector<double> node_fields(const Graph& g, const SpinState& s) {
  check_length(g, s.size());
  std::vector<double> f(g.num_nodes(), 0.0);
  for (const Edge& e : g.edges()) {
    const double c = e.w * s[e.u] * s[e.v];
    f[e.u] += c;
    f[e.v] += c;
  }
  return f;
}

double wrap_period(double x) { return x - kPeriod * std::ceil((x - 2.0) / kPeriod); }

double core_phi(ModelKind model, double x) {
  const double y = wrap_period(x);
  const double a = std::abs(y);
  switch (model) {
    case ModelKind::Ising:
      if (x != std::round(x)) throw Error(ErrorCode::InvalidModel, "Ising core function is defined on integers only");
      return y * y / 4.0;
    case ModelKind::Sdp: return 0.5 * (1.0 - std::cos(std::numbers::pi * y / 2.0));
    case ModelKind::Triangular: return a <= 1.0 ? y * y / 2.0 : 1.0 - (a - 2.0) * (a - 2.0) / 2.0;
    case ModelKind::Gw: return a / 2.0;
  }
  throw Error(ErrorCode::InvalidModel, "unknown model");
}

double core_phi_deriv(ModelKind model, double x) {
  const double y = wrap_period(x);
  const double a = std::abs(y);
  const double sgn = y > 0.0 ? 1.0 : (y < 0.0 ? -1.0 : 0.0);
  switch (model) {
    case ModelKind::Sdp: return std::numbers::pi / 4.0 * std::sin(std::numbers::pi * y / 2.0);
    case ModelKind::Triangular: return a <= 1.0 ? y : sgn * (2.0 - a);
    case ModelKind::Gw: return y == 2.0 ? 0.0 : sgn / 2.0;
    case ModelKind::Ising: break;
  }
  throw Error(ErrorCode::InvalidModel, "core function derivative needs a continuous model");
}

double relaxed_objective(const Graph& g, std::span<const double> xi, ModelKind model) {
  check_length(g, xi.size());
  double c = 0.0;
  for (const Edge& e : g.edges()) c += e.w * core_phi(model, xi[e.u] - xi[e.v]);
  return c;
}

double gw_objective_tail(const Graph& g, const SpinState& s, std::span<const double> x) {
  check_length(g, s.size());
  check_length(g, x.size());
  double tail = 0.0;
  for (const Edge& e : g.edges()) tail += e.w * s[e.u] * s[e.v] * std::abs(x[e.u] - x[e.v]);
  return 0.5 * tail;
}

double gw_objective_sx(const Graph& g, const SpinState& s, std::span<const double> x) {
  check_x_domain(x);
  return cut_size(g, s) + gw_objective_tail(g, s, x);
}

double discrepancy_delta(double c_ref, double c_other) {
  const double denom = c_ref + c_other;
  if (!(denom > 0.0)) throw Error(ErrorCode::DegenerateDenominator, "c_ref + c_other must be positive");
  return 2.0 * (c_ref - c_other) / denom * 100.0;
}

}  // namespace gwcut
