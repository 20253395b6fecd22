#include "riscomp/aris_env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "riscomp/error.hpp"
#include "riscomp/ris.hpp"

namespace riscomp {

Vec2 move_direction(Move m) {
  switch (m) {
    case Move::Left: return {-1.0, 0.0};
    case Move::Right: return {1.0, 0.0};
    case Move::Down: return {0.0, -1.0};
    case Move::Up: return {0.0, 1.0};
    case Move::Hover: return {0.0, 0.0};
  }
  throw DomainError("unknown move");
}

std::size_t AerialScenario::state_dim() const {
  return 2 + obstacles.size() + kAerialCells + kAerialUsers;
}

double AerialScenario::tx_power() const { return dbm_to_watts(tx_power_dbm); }

double AerialScenario::noise_power() const {
  return noise_power_watts(bandwidth_hz, noise_figure_db);
}

bool AerialScenario::inside_area(Vec2 xy) const {
  return std::abs(xy.x) <= half_width && std::abs(xy.y) <= half_width;
}

bool AerialScenario::in_forbidden_zone(Vec2 xy) const {
  const Vec3 p = uav_position(xy);
  for (const Vec3& o : obstacles)
    if (horizontal_distance(p, o) < d_min) return true;
  return false;
}

void AerialScenario::validate() const {
  if (!(half_width > 0.0)) throw InvariantError("aerial: area must have positive extent");
  if (!(d_min > 0.0)) throw InvariantError("aerial: d_min must be positive");
  if (!(step_m > 0.0)) throw InvariantError("aerial: step length must be positive");
  if (horizon < 1) throw InvariantError("aerial: need at least one slot per episode");
  const auto inside = [&](const Vec3& p) {
    return std::abs(p.x) <= half_width && std::abs(p.y) <= half_width;
  };
  for (const auto& p : bs)
    if (!inside(p)) throw InvariantError("aerial: BS outside the area");
  for (const auto& p : center_users)
    if (!inside(p)) throw InvariantError("aerial: user outside the area");
  if (!inside(edge_user)) throw InvariantError("aerial: user outside the area");
  for (const auto& p : obstacles)
    if (!inside(p)) throw InvariantError("aerial: obstacle outside the area");
  if (!is_safe(start)) throw InvariantError("aerial: start position is not safe");
  if (!(lambda_init > 0.5 && lambda_init < 1.0))
    throw InvariantError("aerial: initial edge share must lie in (0.5, 1)");
  if (!(rho_o > 0.0 && kappa >= 0.0 && bandwidth_hz > 0.0))
    throw InvariantError("aerial: invalid propagation parameters");
  if (!(k_viol >= 0.0)) throw InvariantError("aerial: penalty must be >= 0");
}

std::vector<double> MdpState::to_vector() const {
  std::vector<double> v{uav_xy.x, uav_xy.y};
  v.insert(v.end(), obstacle_dists.begin(), obstacle_dists.end());
  v.insert(v.end(), alloc_factors.begin(), alloc_factors.end());
  v.insert(v.end(), rates.begin(), rates.end());
  return v;
}

std::size_t action_dim(std::size_t k_elements) { return 2 + k_elements + kAerialCells; }

double squash_alloc(double u) {
  // Beyond |u| = 30 the sigmoid rounds to 0 or 1 and the share would hit the
  // open interval's ends.
  const double v = std::clamp(u, -30.0, 30.0);
  return 0.5 + 0.5 / (1.0 + std::exp(-v));
}

MdpAction decode_action(std::size_t move, const std::vector<double>& raw, std::size_t k_elements) {
  if (move >= kMoves) throw DomainError("action: move index out of range");
  if (raw.size() != k_elements + kAerialCells)
    throw ShapeError("action: expected K + I continuous outputs");
  MdpAction a;
  a.move = static_cast<Move>(move);
  a.phases.resize(k_elements);
  for (std::size_t k = 0; k < k_elements; ++k) a.phases[k] = wrap_phase(raw[k]);
  for (std::size_t i = 0; i < kAerialCells; ++i) a.alloc_factors[i] = squash_alloc(raw[k_elements + i]);
  return a;
}

SlotFading sample_slot_fading(std::size_t k, Rng& rng) {
  SlotFading f;
  for (auto& row : f.direct)
    for (auto& h : row) h = sample_rayleigh(rng);
  for (auto& v : f.bs_ris_nlos) {
    v.resize(k);
    for (auto& x : v) x = sample_rayleigh(rng);
  }
  for (auto& v : f.ris_user_nlos) {
    v.resize(k);
    for (auto& x : v) x = sample_rayleigh(rng);
  }
  return f;
}

namespace {

std::vector<Complex> rician(const std::vector<Complex>& nlos, double kappa, double aoa,
                            double amplitude) {
  std::vector<Complex> h = los_steering(nlos.size(), aoa);
  const double w_los = std::sqrt(kappa / (1.0 + kappa));
  const double w_nlos = std::sqrt(1.0 / (1.0 + kappa));
  for (std::size_t k = 0; k < h.size(); ++k) h[k] = amplitude * (w_los * h[k] + w_nlos * nlos[k]);
  return h;
}

Vec3 user_position(const AerialScenario& s, std::size_t u) {
  return u < kAerialCells ? s.center_users[u] : s.edge_user;
}

}  // namespace

SlotChannels build_channels(const AerialScenario& s, Vec2 xy, const SlotFading& f) {
  const Vec3 uav = s.uav_position(xy);
  SlotChannels ch;
  for (std::size_t i = 0; i < kAerialCells; ++i) {
    for (std::size_t u = 0; u < kAerialCells; ++u) {
      const double alpha = u == i ? s.alpha_direct : s.alpha_interference;
      const double g = path_gain({s.rho_o, alpha}, distance(s.bs[i], s.center_users[u]));
      ch.direct[i][u] = std::sqrt(g) * f.direct[i][u];
    }
    ch.direct[i][kAerialCells] = Complex(0.0, 0.0);  // blocked
    const double g = path_gain({s.rho_o, s.alpha_ris}, distance(s.bs[i], uav));
    ch.bs_ris[i] = rician(f.bs_ris_nlos[i], s.kappa, array_aoa(s.bs[i], uav), std::sqrt(g));
  }
  for (std::size_t u = 0; u < kAerialUsers; ++u) {
    const Vec3 p = user_position(s, u);
    const double g = path_gain({s.rho_o, s.alpha_ris}, distance(uav, p));
    ch.ris_user[u] = rician(f.ris_user_nlos[u], s.kappa, array_aoa(p, uav), std::sqrt(g));
  }
  return ch;
}

std::array<double, kAerialUsers> slot_rates(const AerialScenario& s, const SlotChannels& ch,
                                            const std::vector<double>& phases,
                                            const std::array<double, kAerialCells>& alloc) {
  if (phases.size() != ch.ris_user[0].size()) throw ShapeError("rates: one phase per element");
  for (double l : alloc)
    if (!(l > 0.5 && l < 1.0)) throw DomainError("rates: edge share outside (0.5, 1)");
  const double p = s.tx_power();
  const double n0 = s.noise_power();
  const PhaseMatrix theta = PhaseMatrix::unit(phases);
  const std::size_t f = kAerialCells;

  std::array<double, kAerialCells> h_edge{}, h_center{}, h_interf{};
  for (std::size_t i = 0; i < kAerialCells; ++i) {
    h_edge[i] = std::norm(effective_channel(ch.direct[i][f], ch.ris_user[f], theta, ch.bs_ris[i]));
    h_center[i] = std::norm(effective_channel(ch.direct[i][i], ch.ris_user[i], theta, ch.bs_ris[i]));
    h_interf[i] = std::norm(ch.direct[1 - i][i]);
  }

  std::array<double, kAerialUsers> r{};
  if (s.access == AerialAccess::Oma) {
    double sig = 0.0;
    for (std::size_t i = 0; i < kAerialCells; ++i) {
      r[i] = 0.5 * std::log2(1.0 + p * h_center[i] / (p * h_interf[i] + n0));
      sig += p * h_edge[i];
    }
    r[f] = 0.5 * std::log2(1.0 + sig / n0);
    return r;
  }
  double num = 0.0, den = n0;
  for (std::size_t i = 0; i < kAerialCells; ++i) {
    r[i] = std::log2(1.0 + (1.0 - alloc[i]) * p * h_center[i] / (p * h_interf[i] + n0));
    num += alloc[i] * p * h_edge[i];
    den += (1.0 - alloc[i]) * p * h_edge[i];
  }
  r[f] = std::log2(1.0 + num / den);
  return r;
}

std::array<std::uint8_t, kAerialUsers> qos_indicators(const std::array<double, kAerialUsers>& rates,
                                                      double r_center_min, double r_edge_min) {
  std::array<std::uint8_t, kAerialUsers> q{};
  for (std::size_t u = 0; u < kAerialUsers; ++u)
    q[u] = rates[u] <= (u < kAerialCells ? r_center_min : r_edge_min);
  return q;
}

double reward(const std::array<double, kAerialUsers>& rates,
              const std::array<std::uint8_t, kAerialUsers>& qos, bool safety_violation,
              double k_viol) {
  double sum = 0.0, viol = 0.0;
  for (std::size_t u = 0; u < kAerialUsers; ++u) {
    sum += rates[u];
    viol += qos[u];
  }
  return sum * (1.0 - viol / static_cast<double>(kAerialUsers)) -
         (safety_violation ? k_viol : 0.0);
}

Environment::Environment(AerialScenario s) : s_(std::move(s)), rng_(0) { s_.validate(); }

MdpState Environment::observe(Vec2 xy, const std::array<double, kAerialCells>& alloc,
                              const std::array<double, kAerialUsers>& rates) const {
  MdpState st;
  st.uav_xy = xy;
  const Vec3 p = s_.uav_position(xy);
  for (const Vec3& o : s_.obstacles) st.obstacle_dists.push_back(distance(p, o));
  st.alloc_factors = alloc;
  st.rates = rates;
  return st;
}

MdpState Environment::reset(std::uint64_t seed) {
  rng_ = Rng(seed);
  t_ = 0;
  const std::array<double, kAerialCells> alloc{s_.lambda_init, s_.lambda_init};
  const SlotChannels ch = build_channels(s_, s_.start, sample_slot_fading(s_.k_elements, rng_));
  state_ = observe(s_.start, alloc, slot_rates(s_, ch, std::vector<double>(s_.k_elements, 0.0), alloc));
  return state_;
}

StepResult Environment::step(const MdpAction& a) {
  if (done()) throw InvariantError("environment: episode already finished");
  if (a.phases.size() != s_.k_elements) throw ShapeError("environment: one phase per element");

  StepResult out;
  const Vec2 d = move_direction(a.move);
  Vec2 xy{state_.uav_xy.x + s_.step_m * d.x, state_.uav_xy.y + s_.step_m * d.y};
  if (!s_.is_safe(xy)) {
    out.safety_violation = true;
    xy = state_.uav_xy;
  }

  std::vector<double> phases(s_.k_elements);
  for (std::size_t k = 0; k < phases.size(); ++k)
    phases[k] = s_.random_phases ? rng_.uniform(-std::numbers::pi, std::numbers::pi)
                                 : wrap_phase(a.phases[k]);
  const SlotChannels ch = build_channels(s_, xy, sample_slot_fading(s_.k_elements, rng_));
  const auto rates = slot_rates(s_, ch, phases, a.alloc_factors);

  out.qos = qos_indicators(rates, s_.r_center_min, s_.r_edge_min);
  out.reward = reward(rates, out.qos, out.safety_violation, s_.k_viol);
  out.sum_rate = rates[0] + rates[1] + rates[2];
  ++t_;
  state_ = observe(xy, a.alloc_factors, rates);
  out.state = state_;
  out.done = done();
  return out;
}

void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows) {
  os << "t,x,y,reward,rate_center1,rate_center2,rate_edge,qos_center1,qos_center2,qos_edge,"
        "safety\n";
  const auto old = os.precision(12);
  for (const auto& r : rows) {
    os << r.t << ',' << r.uav_xy.x << ',' << r.uav_xy.y << ',' << r.reward;
    for (double x : r.rates) os << ',' << x;
    for (auto q : r.qos) os << ',' << static_cast<int>(q);
    os << ',' << (r.safety_violation ? 1 : 0) << '\n';
  }
  os.precision(old);
}

}  // namespace riscomp
