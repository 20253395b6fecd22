#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "riscomp/channel.hpp"
#include "riscomp/geometry.hpp"
#include "riscomp/rng.hpp"
#include "riscomp/units.hpp"

namespace riscomp {

inline constexpr std::size_t kAerialCells = 2;
inline constexpr std::size_t kAerialUsers = 3;  // center 1, center 2, edge
inline constexpr std::size_t kMoves = 5;

enum class Move : std::size_t { Left = 0, Right, Down, Up, Hover };

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// Unit displacement of a move: left, right, down, up, hover.
Vec2 move_direction(Move m);

enum class AerialAccess { Noma, Oma };

/// Two-cell network served through a UAV-mounted RIS. The area is the square
/// [-half_width, half_width]^2; each obstacle forbids the disk of radius
/// d_min around it in the UAV's plane.
struct AerialScenario {
  double half_width = 75.0;
  std::array<Vec3, kAerialCells> bs{Vec3{-35.0, -35.0, 25.0}, Vec3{35.0, 35.0, 25.0}};
  std::array<Vec3, kAerialCells> center_users{Vec3{-50.0, -10.0, 0.0}, Vec3{50.0, 10.0, 0.0}};
  Vec3 edge_user{40.0, -45.0, 0.0};
  std::vector<Vec3> obstacles{Vec3{15.0, 5.0, 50.0}, Vec3{35.0, -25.0, 50.0}};
  double ris_altitude = 50.0;
  Vec2 start{0.0, 35.0};
  double d_min = 10.0;
  double step_m = 5.0;

  std::size_t k_elements = 120;
  std::size_t horizon = 250;
  double r_center_min = 0.5;
  double r_edge_min = 0.2;
  double k_viol = 7.0;

  double tx_power_dbm = 20.0;
  double bandwidth_hz = 10e6;
  double noise_figure_db = 0.0;
  double rho_o = 1e-3;
  double alpha_direct = 3.0;
  double alpha_ris = 2.2;
  double alpha_interference = 3.5;
  double kappa = db_to_linear(3.0);

  double lambda_init = 0.75;
  AerialAccess access = AerialAccess::Noma;
  bool random_phases = false;   // ignore the agent's phases and draw them uniformly

  std::size_t num_obstacles() const { return obstacles.size(); }
  std::size_t state_dim() const;            // 2 + O + I + sum C_i + F
  std::size_t continuous_dim() const { return k_elements + kAerialCells; }
  double tx_power() const;
  double noise_power() const;
  Vec3 uav_position(Vec2 xy) const { return {xy.x, xy.y, ris_altitude}; }
  bool inside_area(Vec2 xy) const;
  bool in_forbidden_zone(Vec2 xy) const;
  bool is_safe(Vec2 xy) const { return inside_area(xy) && !in_forbidden_zone(xy); }
  void validate() const;
};

struct MdpState {
  Vec2 uav_xy;
  std::vector<double> obstacle_dists;
  std::array<double, kAerialCells> alloc_factors{};
  std::array<double, kAerialUsers> rates{};

  /// Flattened in the order position, obstacle distances, factors, rates.
  std::vector<double> to_vector() const;
};

struct MdpAction {
  Move move = Move::Hover;
  std::vector<double> phases;
  std::array<double, kAerialCells> alloc_factors{0.75, 0.75};
};

/// Paper accounting: the move counts as a 2-vector.
std::size_t action_dim(std::size_t k_elements);

/// Edge share from an unbounded output: 0.5 + 0.5 sigmoid(u), inside (0.5, 1).
double squash_alloc(double u);

/// Builds an action from a move index and K + I raw continuous outputs
/// (phases wrapped into [-pi, pi), factors squashed).
MdpAction decode_action(std::size_t move, const std::vector<double>& raw, std::size_t k_elements);

/// Position-independent small-scale fading of one slot.
struct SlotFading {
  std::array<std::array<Complex, kAerialUsers>, kAerialCells> direct{};   // CN(0,1)
  std::array<std::vector<Complex>, kAerialCells> bs_ris_nlos;
  std::array<std::vector<Complex>, kAerialUsers> ris_user_nlos;
};

SlotFading sample_slot_fading(std::size_t k, Rng& rng);

/// Channels of one slot with the UAV at `xy`. direct[i][u] is BS i to user u;
/// the edge user's direct links are blocked and stay 0.
struct SlotChannels {
  std::array<std::array<Complex, kAerialUsers>, kAerialCells> direct{};
  std::array<std::vector<Complex>, kAerialCells> bs_ris;
  std::array<std::vector<Complex>, kAerialUsers> ris_user;
};

SlotChannels build_channels(const AerialScenario& s, Vec2 xy, const SlotFading& f);

/// Rates of (center 1, center 2, edge) for the given phases and edge shares.
std::array<double, kAerialUsers> slot_rates(const AerialScenario& s, const SlotChannels& ch,
                                            const std::vector<double>& phases,
                                            const std::array<double, kAerialCells>& alloc);

/// zeta_u = 1 when rate <= threshold.
std::array<std::uint8_t, kAerialUsers> qos_indicators(const std::array<double, kAerialUsers>& rates,
                                                      double r_center_min, double r_edge_min);

/// R_sum (1 - violations/|U|) - safety * K_viol.
double reward(const std::array<double, kAerialUsers>& rates,
              const std::array<std::uint8_t, kAerialUsers>& qos, bool safety_violation,
              double k_viol);

struct StepResult {
  MdpState state;
  double reward = 0.0;
  bool done = false;
  bool safety_violation = false;
  std::array<std::uint8_t, kAerialUsers> qos{};
  double sum_rate = 0.0;
};

/// Single-threaded episode driver. Every slot redraws i.i.d. fading.
class Environment {
 public:
  explicit Environment(AerialScenario s);

  /// UAV back at the start, factors at lambda_init, phases zero for the
  /// initial draw whose rates populate the first state.
  MdpState reset(std::uint64_t seed);
  StepResult step(const MdpAction& a);

  const AerialScenario& scenario() const { return s_; }
  const MdpState& state() const { return state_; }
  std::size_t t() const { return t_; }
  bool done() const { return t_ >= s_.horizon; }

 private:
  MdpState observe(Vec2 xy, const std::array<double, kAerialCells>& alloc,
                   const std::array<double, kAerialUsers>& rates) const;

  AerialScenario s_;
  Rng rng_;
  MdpState state_;
  std::size_t t_ = 0;
};

struct TraceRow {
  std::size_t t = 0;
  Vec2 uav_xy;
  double reward = 0.0;
  std::array<double, kAerialUsers> rates{};
  std::array<std::uint8_t, kAerialUsers> qos{};
  bool safety_violation = false;
};

void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows);

}  // namespace riscomp
