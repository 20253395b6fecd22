#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "riscomp/aris_env.hpp"
#include "riscomp/nn.hpp"
#include "riscomp/rng.hpp"

namespace riscomp {

inline constexpr double kLogStdMin = -5.0;
inline constexpr double kLogStdMax = 2.0;

struct NetShape {
  std::size_t state_dim = 9;
  std::size_t cont_dim = 122;     // K + I
  std::size_t width = 64;
  std::size_t trunk_layers = 2;
  friend bool operator==(const NetShape&, const NetShape&) = default;
};

/// Shared tanh trunk feeding a 5-way softmax head and a Gaussian head (one
/// hidden layer each), a separate critic, and the Adam state.
struct PolicyParams {
  NetShape shape;
  Mlp trunk;
  Mlp discrete;
  Mlp continuous;                 // Gaussian means
  Mlp critic;
  std::vector<double> log_std;    // state independent, one per continuous dim

  std::vector<double> adam_m;
  std::vector<double> adam_v;
  std::uint64_t step = 0;

  /// Trainable tensors in a fixed order (each layer's W then b, trunk,
  /// discrete, continuous, critic, then log_std).
  std::vector<std::vector<double>*> tensors();
  std::vector<const std::vector<double>*> tensors() const;
  std::size_t num_params() const;
  std::vector<double> flat() const;
  void set_flat(const std::vector<double>& v);
};

/// Zero-initialized network of the given shape (used for gradients).
PolicyParams zero_policy(const NetShape& shape);

/// Orthogonal init: gain sqrt(2) on hidden layers, 0.01 on the policy
/// outputs, 1 on the critic output.
PolicyParams make_policy(const NetShape& shape, std::uint64_t seed, double log_std_init = -0.5);

struct PolicyOutput {
  std::array<double, kMoves> probs{};
  std::vector<double> mean;
  std::vector<double> std;
  double value = 0.0;
};

PolicyOutput forward(const PolicyParams& p, const std::vector<double>& state);

struct SampledAction {
  std::size_t move = 0;
  std::vector<double> raw;        // unsquashed Gaussian sample
  double logp_discrete = 0.0;
  double logp_continuous = 0.0;
};

/// Draws from both heads. `deterministic` takes the argmax move and the means.
SampledAction sample_action(const PolicyOutput& out, Rng& rng, bool deterministic = false);

double log_prob_discrete(const PolicyOutput& out, std::size_t move);
double log_prob_continuous(const PolicyOutput& out, const std::vector<double>& raw);

/// sum_{k<n} gamma^k r_k + gamma^n v_boot - v_t, with n = rewards.size().
double advantage(std::span<const double> rewards, double v_t, double v_boot, double gamma);

/// min(r A, clip(r, 1 - eps, 1 + eps) A).
double clipped_loss(double ratio, double adv, double eps);

struct TrainConfig {
  double learning_rate = 2.75e-4;
  double clip_eps = 0.1;
  double gamma = 0.98;
  std::size_t episodes = 750;
  std::size_t epochs = 20;
  std::size_t batch = 128;
  std::size_t rollout = 128;      // T-hat, the advantage window
  double k_viol = 7.0;            // overrides the scenario's penalty

  double value_coef = 0.5;
  double entropy_coef = 0.01;
  double max_grad_norm = 0.5;     // per network: actor, critic
  bool normalize_rewards = true;  // divide by the running std of the discounted return
  std::size_t hidden = 64;
  double log_std_init = -0.5;
  bool hover = false;             // discrete head off, UAV pinned

  // Update schedule. The defaults follow the paper: D holds one episode and
  // each epoch draws a single minibatch of `batch` transitions from it.
  std::size_t episodes_per_update = 1;
  bool full_pass = false;         // each epoch sweeps all of D in minibatches

  void validate() const;
};

struct Transition {
  std::vector<double> state;      // normalized observation
  std::size_t move = 0;
  std::vector<double> raw;
  double logp_discrete = 0.0;
  double logp_continuous = 0.0;
  double advantage = 0.0;
  double value_target = 0.0;
};

struct LossTerms {
  double total = 0.0;
  double surrogate_discrete = 0.0;
  double surrogate_continuous = 0.0;
  double value_mse = 0.0;
  double entropy_discrete = 0.0;
  double entropy_continuous = 0.0;
};

/// Minibatch objective -(L_d + L_c) + c_v MSE - c_e (H_d + H_c). When `grad`
/// is given it receives dLoss/dparams (overwritten).
LossTerms ppo_loss(const PolicyParams& p, std::span<const Transition> batch, const TrainConfig& cfg,
                   PolicyParams* grad = nullptr);

/// One Adam step with gradient-norm clipping (actor and critic separately). Throws NumericError on a
/// non-finite gradient.
LossTerms update(PolicyParams& p, std::span<const Transition> batch, const TrainConfig& cfg);

/// Scales the raw MDP state to O(1) network inputs.
std::vector<double> observe(const AerialScenario& s, const MdpState& st);

struct EpisodeLog {
  double cumulative_reward = 0.0;
  double mean_sum_rate = 0.0;
  std::size_t safety_violations = 0;
  std::size_t qos_violations = 0;   // slots with any user below target
};

struct TrainResult {
  std::vector<EpisodeLog> episodes;
  PolicyParams params;
};

NetShape policy_shape(const AerialScenario& s, const TrainConfig& cfg);

/// Full MO-PPO loop. Episode e resets the environment with a seed derived
/// from (seed, e); the run is deterministic in (scenario, cfg, seed).
/// Logged rewards are raw; the learner sees them divided by the running std
/// of the discounted return when `normalize_rewards` is set.
TrainResult train(const AerialScenario& s, const TrainConfig& cfg, std::uint64_t seed);

Vec2 user_centroid(const AerialScenario& s);

/// Same training with the UAV pinned at the users' centroid.
TrainResult hover_baseline(const AerialScenario& s, TrainConfig cfg, std::uint64_t seed);

struct Evaluation {
  double mean_reward = 0.0;       // per slot
  double mean_sum_rate = 0.0;
  std::vector<TraceRow> trace;    // first episode
};

/// Greedy rollouts (argmax move, mean continuous action).
Evaluation evaluate_policy(const PolicyParams& p, const AerialScenario& s, bool hover,
                           std::uint64_t seed, std::size_t episodes);

struct ExhaustiveGrid {
  Vec2 center{0.0, 35.0};
  double spacing = 10.0;
  std::size_t points_per_axis = 5;
  std::size_t phase_levels = 8;   // theta = -pi + 2 pi l / L
  std::size_t lambda_levels = 5;  // lambda = 0.5 + (l + 0.5) / (2 L)
  std::size_t draws = 200;
  std::uint64_t seed = 1;
};

inline constexpr double kExhaustiveCap = 1e7;

struct ExhaustiveResult {
  Vec2 xy;
  std::vector<double> phases;
  std::array<double, kAerialCells> alloc{};
  double mean_reward = 0.0;
  double mean_sum_rate = 0.0;
  std::size_t evaluations = 0;    // configurations x draws
};

/// Best static (position, phases, factors) by mean per-slot reward over a
/// fixed set of fading draws shared by every configuration. Unsafe grid
/// points are skipped.
ExhaustiveResult exhaustive_baseline(const AerialScenario& s, const ExhaustiveGrid& g);

/// Flat binary checkpoint: "RCMOPPO\0", u32 version, u32 state_dim,
/// cont_dim, width, trunk_layers, u32 tensor count, (u32 rows, u32 cols)
/// per tensor, f64 weights row-major in tensors() order, u64 Adam step,
/// f64 Adam m then v. Little endian.
void save_checkpoint(std::ostream& os, const PolicyParams& p);
PolicyParams load_checkpoint(std::istream& is);
void save_checkpoint(const std::string& path, const PolicyParams& p);
PolicyParams load_checkpoint(const std::string& path);

std::vector<double> moving_average(const std::vector<double>& v, std::size_t window);

/// episode,cumulative_reward,moving_average,mean_sum_rate,safety_violations,qos_violations
void write_learning_curve_csv(std::ostream& os, const std::vector<EpisodeLog>& log,
                              std::size_t window = 100);

}  // namespace riscomp
