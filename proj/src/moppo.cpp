#include "riscomp/moppo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include "riscomp/error.hpp"

namespace riscomp {

static_assert(std::endian::native == std::endian::little, "checkpoints assume a little-endian host");

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5 log(2 pi)

void push_mlp(Mlp& m, std::vector<std::vector<double>*>& out) {
  for (auto& d : m.layers()) {
    out.push_back(&d.w);
    out.push_back(&d.b);
  }
}

void push_mlp(const Mlp& m, std::vector<const std::vector<double>*>& out) {
  for (const auto& d : m.layers()) {
    out.push_back(&d.w);
    out.push_back(&d.b);
  }
}

std::vector<std::size_t> trunk_sizes(const NetShape& sh) {
  std::vector<std::size_t> v{sh.state_dim};
  for (std::size_t i = 0; i < sh.trunk_layers; ++i) v.push_back(sh.width);
  return v;
}

double clamp_log_std(double x) { return std::clamp(x, kLogStdMin, kLogStdMax); }

std::uint64_t episode_seed(std::uint64_t seed, std::size_t e) {
  return splitmix64(splitmix64(seed) + e);
}

}  // namespace

std::vector<std::vector<double>*> PolicyParams::tensors() {
  std::vector<std::vector<double>*> out;
  push_mlp(trunk, out);
  push_mlp(discrete, out);
  push_mlp(continuous, out);
  push_mlp(critic, out);
  out.push_back(&log_std);
  return out;
}

std::vector<const std::vector<double>*> PolicyParams::tensors() const {
  std::vector<const std::vector<double>*> out;
  push_mlp(trunk, out);
  push_mlp(discrete, out);
  push_mlp(continuous, out);
  push_mlp(critic, out);
  out.push_back(&log_std);
  return out;
}

std::size_t PolicyParams::num_params() const {
  std::size_t n = 0;
  for (const auto* t : tensors()) n += t->size();
  return n;
}

std::vector<double> PolicyParams::flat() const {
  std::vector<double> v;
  v.reserve(num_params());
  for (const auto* t : tensors()) v.insert(v.end(), t->begin(), t->end());
  return v;
}

void PolicyParams::set_flat(const std::vector<double>& v) {
  if (v.size() != num_params()) throw ShapeError("policy: flat parameter size mismatch");
  std::size_t off = 0;
  for (auto* t : tensors()) {
    std::copy_n(v.begin() + static_cast<std::ptrdiff_t>(off), t->size(), t->begin());
    off += t->size();
  }
}

PolicyParams zero_policy(const NetShape& sh) {
  if (sh.state_dim == 0 || sh.width == 0 || sh.trunk_layers == 0)
    throw ShapeError("policy: state_dim, width and trunk_layers must be positive");
  if (sh.cont_dim == 0) throw ShapeError("policy: continuous head needs at least one output");
  PolicyParams p;
  p.shape = sh;
  p.trunk = Mlp(trunk_sizes(sh), true);
  p.discrete = Mlp({sh.width, sh.width, kMoves});
  p.continuous = Mlp({sh.width, sh.width, sh.cont_dim});
  p.critic = Mlp({sh.state_dim, sh.width, sh.width, 1});
  p.log_std.assign(sh.cont_dim, 0.0);
  p.adam_m.assign(p.num_params(), 0.0);
  p.adam_v.assign(p.num_params(), 0.0);
  return p;
}

PolicyParams make_policy(const NetShape& sh, std::uint64_t seed, double log_std_init) {
  PolicyParams p = zero_policy(sh);
  Rng rng(seed);
  const double g = std::numbers::sqrt2;
  p.trunk.init_orthogonal(rng, g, g);
  p.discrete.init_orthogonal(rng, g, 0.01);
  p.continuous.init_orthogonal(rng, g, 0.01);
  p.critic.init_orthogonal(rng, g, 1.0);
  std::fill(p.log_std.begin(), p.log_std.end(), clamp_log_std(log_std_init));
  return p;
}

PolicyOutput forward(const PolicyParams& p, const std::vector<double>& state) {
  if (state.size() != p.shape.state_dim) throw ShapeError("policy: state dimension mismatch");
  PolicyOutput out;
  const std::vector<double> h = p.trunk.forward(state);
  const std::vector<double> logits = p.discrete.forward(h);
  const double mx = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (std::size_t a = 0; a < kMoves; ++a) z += (out.probs[a] = std::exp(logits[a] - mx));
  for (double& q : out.probs) q /= z;
  out.mean = p.continuous.forward(h);
  out.std.resize(p.log_std.size());
  for (std::size_t j = 0; j < p.log_std.size(); ++j) out.std[j] = std::exp(clamp_log_std(p.log_std[j]));
  out.value = p.critic.forward(state)[0];
  return out;
}

double log_prob_discrete(const PolicyOutput& out, std::size_t move) {
  if (move >= kMoves) throw DomainError("policy: move index out of range");
  return std::log(out.probs[move]);
}

double log_prob_continuous(const PolicyOutput& out, const std::vector<double>& raw) {
  if (raw.size() != out.mean.size()) throw ShapeError("policy: continuous action size mismatch");
  double lp = 0.0;
  for (std::size_t j = 0; j < raw.size(); ++j) {
    const double u = (raw[j] - out.mean[j]) / out.std[j];
    lp += -0.5 * u * u - std::log(out.std[j]) - kHalfLog2Pi;
  }
  return lp;
}

SampledAction sample_action(const PolicyOutput& out, Rng& rng, bool deterministic) {
  SampledAction a;
  if (deterministic) {
    a.move = static_cast<std::size_t>(
        std::max_element(out.probs.begin(), out.probs.end()) - out.probs.begin());
    a.raw = out.mean;
  } else {
    const double u = rng.uniform();
    double acc = 0.0;
    a.move = kMoves - 1;
    for (std::size_t m = 0; m < kMoves; ++m) {
      acc += out.probs[m];
      if (u < acc) {
        a.move = m;
        break;
      }
    }
    // Guard against rounding in the cumulative sum picking a zero-probability move.
    while (out.probs[a.move] == 0.0 && a.move > 0) --a.move;
    a.raw.resize(out.mean.size());
    for (std::size_t j = 0; j < a.raw.size(); ++j) a.raw[j] = out.mean[j] + out.std[j] * rng.normal();
  }
  a.logp_discrete = log_prob_discrete(out, a.move);
  a.logp_continuous = log_prob_continuous(out, a.raw);
  return a;
}

double advantage(std::span<const double> rewards, double v_t, double v_boot, double gamma) {
  double acc = 0.0, g = 1.0;
  for (double r : rewards) {
    acc += g * r;
    g *= gamma;
  }
  return acc + g * v_boot - v_t;
}

double clipped_loss(double ratio, double adv, double eps) {
  return std::min(ratio * adv, std::clamp(ratio, 1.0 - eps, 1.0 + eps) * adv);
}

void TrainConfig::validate() const {
  std::ostringstream err;
  if (!(learning_rate > 0.0)) err << "learning_rate must be > 0; ";
  if (!(clip_eps > 0.0 && clip_eps < 1.0)) err << "clip_eps must lie in (0, 1); ";
  if (!(gamma > 0.0 && gamma <= 1.0)) err << "gamma must lie in (0, 1]; ";
  if (episodes == 0 || epochs == 0 || batch == 0 || rollout == 0 || hidden == 0 ||
      episodes_per_update == 0)
    err << "episodes, epochs, batch, rollout, hidden and episodes_per_update must be >= 1; ";
  if (!(k_viol >= 0.0)) err << "k_viol must be >= 0; ";
  if (!(value_coef >= 0.0) || !(entropy_coef >= 0.0)) err << "loss coefficients must be >= 0; ";
  if (!(max_grad_norm > 0.0)) err << "max_grad_norm must be > 0; ";
  if (!std::isfinite(log_std_init)) err << "log_std_init must be finite; ";
  if (!err.str().empty()) throw ConfigError("train config: " + err.str());
}

LossTerms ppo_loss(const PolicyParams& p, std::span<const Transition> batch, const TrainConfig& cfg,
                   PolicyParams* grad) {
  if (batch.empty()) throw ShapeError("ppo: empty minibatch");
  if (grad) {
    *grad = zero_policy(p.shape);
  }
  const double inv_m = 1.0 / static_cast<double>(batch.size());
  const double eps = cfg.clip_eps;
  const bool use_discrete = !cfg.hover;
  const std::size_t nc = p.log_std.size();

  std::vector<double> sigma(nc);
  double h_cont = 0.0;
  for (std::size_t j = 0; j < nc; ++j) {
    sigma[j] = std::exp(clamp_log_std(p.log_std[j]));
    h_cont += clamp_log_std(p.log_std[j]) + kHalfLog2Pi + 0.5;
  }

  LossTerms lt;
  Mlp::Cache ct, cd, cc, cv;
  for (const Transition& tr : batch) {
    if (tr.state.size() != p.shape.state_dim || tr.raw.size() != nc)
      throw ShapeError("ppo: transition dimensions do not match the network");
    const std::vector<double> h = p.trunk.forward(tr.state, grad ? &ct : nullptr);
    const std::vector<double> logits = p.discrete.forward(h, grad ? &cd : nullptr);
    const std::vector<double> mu = p.continuous.forward(h, grad ? &cc : nullptr);
    const double v = p.critic.forward(tr.state, grad ? &cv : nullptr)[0];

    // Discrete head: log-softmax, ratio, entropy.
    const double mx = *std::max_element(logits.begin(), logits.end());
    double z = 0.0;
    for (double l : logits) z += std::exp(l - mx);
    const double lse = mx + std::log(z);
    std::array<double, kMoves> prob{}, logp{};
    double h_disc = 0.0;
    for (std::size_t a = 0; a < kMoves; ++a) {
      logp[a] = logits[a] - lse;
      prob[a] = std::exp(logp[a]);
      if (prob[a] > 0.0) h_disc -= prob[a] * logp[a];
    }
    const double adv = tr.advantage;
    const double r_d = std::exp(logp[tr.move] - tr.logp_discrete);
    const double s_d = clipped_loss(r_d, adv, eps);

    // Continuous head.
    double lp_c = 0.0;
    for (std::size_t j = 0; j < nc; ++j) {
      const double u = (tr.raw[j] - mu[j]) / sigma[j];
      lp_c += -0.5 * u * u - std::log(sigma[j]) - kHalfLog2Pi;
    }
    const double r_c = std::exp(lp_c - tr.logp_continuous);
    const double s_c = clipped_loss(r_c, adv, eps);

    const double verr = v - tr.value_target;
    if (use_discrete) {
      lt.surrogate_discrete += s_d * inv_m;
      lt.entropy_discrete += h_disc * inv_m;
    }
    lt.surrogate_continuous += s_c * inv_m;
    lt.value_mse += verr * verr * inv_m;

    if (!grad) continue;

    // The min() follows the unclipped branch unless the ratio has left the
    // trust region in the direction the advantage rewards.
    const auto active = [&](double r) { return !((adv > 0.0 && r > 1.0 + eps) || (adv < 0.0 && r < 1.0 - eps)); };

    std::vector<double> dlogits(kMoves, 0.0);
    if (use_discrete) {
      // loss = -s_d - c_e H_d, per sample scaled by 1/M.
      const double dlogp = active(r_d) ? -r_d * adv * inv_m : 0.0;
      for (std::size_t a = 0; a < kMoves; ++a) {
        const double onehot = a == tr.move ? 1.0 : 0.0;
        dlogits[a] += dlogp * (onehot - prob[a]);
        // dH/dz_a = -p_a (log p_a + H)
        const double dh = prob[a] > 0.0 ? -prob[a] * (logp[a] + h_disc) : 0.0;
        dlogits[a] += -cfg.entropy_coef * dh * inv_m;
      }
    }

    std::vector<double> dmu(nc, 0.0);
    const double dlpc = active(r_c) ? -r_c * adv * inv_m : 0.0;
    for (std::size_t j = 0; j < nc; ++j) {
      const double diff = tr.raw[j] - mu[j];
      const double s2 = sigma[j] * sigma[j];
      dmu[j] = dlpc * diff / s2;
      const double ls = p.log_std[j];
      if (ls >= kLogStdMin && ls <= kLogStdMax)
        grad->log_std[j] += dlpc * (diff * diff / s2 - 1.0);
    }

    std::vector<double> dh = p.discrete.backward(cd, dlogits, grad->discrete);
    const std::vector<double> dh_c = p.continuous.backward(cc, dmu, grad->continuous);
    for (std::size_t i = 0; i < dh.size(); ++i) dh[i] += dh_c[i];
    p.trunk.backward(ct, dh, grad->trunk);
    p.critic.backward(cv, {2.0 * cfg.value_coef * verr * inv_m}, grad->critic);
  }

  lt.entropy_continuous = h_cont;
  if (grad) {
    for (std::size_t j = 0; j < nc; ++j) {
      const double ls = p.log_std[j];
      if (ls >= kLogStdMin && ls <= kLogStdMax) grad->log_std[j] += -cfg.entropy_coef;
    }
  }
  lt.total = -(lt.surrogate_discrete + lt.surrogate_continuous) + cfg.value_coef * lt.value_mse -
             cfg.entropy_coef * (lt.entropy_discrete + lt.entropy_continuous);
  return lt;
}

LossTerms update(PolicyParams& p, std::span<const Transition> batch, const TrainConfig& cfg) {
  PolicyParams g;
  const LossTerms lt = ppo_loss(p, batch, cfg, &g);
  std::vector<double> gf = g.flat();

  for (std::size_t i = 0; i < gf.size(); ++i) {
    if (!std::isfinite(gf[i])) {
      std::ostringstream os;
      os << "ppo: non-finite gradient at flat index " << i << " (step " << p.step
         << ", loss " << lt.total << ", value mse " << lt.value_mse << ")";
      throw NumericError(os.str());
    }
  }
  // Actor and critic are clipped separately so the value loss cannot crowd
  // out the policy gradient. Flat order: trunk, heads, critic, log_std.
  std::size_t actor_end = 0;
  for (const Mlp* m : {&p.trunk, &p.discrete, &p.continuous})
    for (const auto& d : m->layers()) actor_end += d.w.size() + d.b.size();
  std::size_t critic_end = actor_end;
  for (const auto& d : p.critic.layers()) critic_end += d.w.size() + d.b.size();
  const auto clip = [&](bool critic) {
    double n2 = 0.0;
    for (std::size_t i = 0; i < gf.size(); ++i)
      if ((i >= actor_end && i < critic_end) == critic) n2 += gf[i] * gf[i];
    const double n = std::sqrt(n2);
    if (n > cfg.max_grad_norm)
      for (std::size_t i = 0; i < gf.size(); ++i)
        if ((i >= actor_end && i < critic_end) == critic) gf[i] *= cfg.max_grad_norm / n;
  };
  clip(false);
  clip(true);

  constexpr double b1 = 0.9, b2 = 0.999, adam_eps = 1e-8;
  ++p.step;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(p.step));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(p.step));
  std::vector<double> w = p.flat();
  for (std::size_t i = 0; i < w.size(); ++i) {
    p.adam_m[i] = b1 * p.adam_m[i] + (1.0 - b1) * gf[i];
    p.adam_v[i] = b2 * p.adam_v[i] + (1.0 - b2) * gf[i] * gf[i];
    w[i] -= cfg.learning_rate * (p.adam_m[i] / c1) / (std::sqrt(p.adam_v[i] / c2) + adam_eps);
  }
  p.set_flat(w);
  for (double& ls : p.log_std) ls = clamp_log_std(ls);
  return lt;
}

std::vector<double> observe(const AerialScenario& s, const MdpState& st) {
  std::vector<double> v;
  v.reserve(s.state_dim());
  v.push_back(st.uav_xy.x / s.half_width);
  v.push_back(st.uav_xy.y / s.half_width);
  for (double d : st.obstacle_dists) v.push_back(d / (2.0 * s.half_width));
  for (double l : st.alloc_factors) v.push_back(4.0 * (l - 0.75));
  for (double r : st.rates) v.push_back(r / 5.0);
  return v;
}

NetShape policy_shape(const AerialScenario& s, const TrainConfig& cfg) {
  return NetShape{s.state_dim(), s.continuous_dim(), cfg.hidden, 2};
}

Vec2 user_centroid(const AerialScenario& s) {
  Vec2 c{s.edge_user.x, s.edge_user.y};
  for (const Vec3& u : s.center_users) {
    c.x += u.x;
    c.y += u.y;
  }
  c.x /= kAerialUsers;
  c.y /= kAerialUsers;
  return c;
}

namespace {

void shuffle(std::vector<std::size_t>& idx, Rng& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng.index(i)]);
}

struct Pending {
  Transition tr;
  double value = 0.0;
  double reward = 0.0;
  bool last = false;   // final slot of its episode
};

// T-hat-step advantages over D. Windows stop at episode ends, where the
// bootstrap value is 0; otherwise they bootstrap with the stored V(s_{t+T-hat}).
void fill_advantages(std::vector<Pending>& d, const TrainConfig& cfg) {
  const std::size_t n = d.size();
  std::vector<double> window;
  for (std::size_t t = 0; t < n; ++t) {
    window.clear();
    std::size_t j = t;
    bool terminal = false;
    while (window.size() < cfg.rollout) {
      window.push_back(d[j].reward);
      if (d[j].last) {
        terminal = true;
        break;
      }
      ++j;
    }
    const double v_boot = terminal ? 0.0 : d[j].value;
    d[t].tr.advantage = advantage(window, d[t].value, v_boot, cfg.gamma);
    d[t].tr.value_target = d[t].tr.advantage + d[t].value;
  }
  double mean = 0.0;
  for (const auto& x : d) mean += x.tr.advantage;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (const auto& x : d) var += (x.tr.advantage - mean) * (x.tr.advantage - mean);
  const double sd = n > 1 ? std::sqrt(var / static_cast<double>(n - 1)) : 0.0;
  for (auto& x : d) x.tr.advantage = sd > 0.0 ? (x.tr.advantage - mean) / (sd + 1e-8) : 0.0;
}

// E epochs over D: one sampled minibatch each, or a full shuffled sweep.
void learn(PolicyParams& params, const std::vector<Pending>& d, const TrainConfig& cfg, Rng& rng) {
  std::vector<std::size_t> idx(d.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const std::size_t stop = cfg.full_pass ? d.size() : std::min(cfg.batch, d.size());
  std::vector<Transition> mb;
  for (std::size_t e = 0; e < cfg.epochs; ++e) {
    shuffle(idx, rng);
    for (std::size_t start = 0; start < stop; start += cfg.batch) {
      const std::size_t end = std::min(stop, start + cfg.batch);
      mb.clear();
      for (std::size_t i = start; i < end; ++i) mb.push_back(d[idx[i]].tr);
      update(params, mb, cfg);
    }
  }
}

}  // namespace

TrainResult train(const AerialScenario& scenario, const TrainConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  AerialScenario s = scenario;
  s.k_viol = cfg.k_viol;
  if (cfg.hover) s.start = user_centroid(s);
  Environment env(s);

  TrainResult res;
  res.params = make_policy(policy_shape(s, cfg), splitmix64(seed ^ 0x5EEDULL), cfg.log_std_init);
  Rng rng(splitmix64(seed ^ 0xAC7105ULL));
  std::vector<Pending> d;
  // Running variance of the discounted return, used to rescale rewards
  // before they reach the critic and the advantages.
  double ret_run = 0.0, ret_mean = 0.0, ret_m2 = 0.0;
  std::uint64_t ret_n = 0;

  for (std::size_t ep = 0; ep < cfg.episodes; ++ep) {
    MdpState st = env.reset(episode_seed(seed, ep));
    EpisodeLog log;
    bool done = false;
    while (!done) {
      Pending pd;
      pd.tr.state = observe(s, st);
      const PolicyOutput out = forward(res.params, pd.tr.state);
      SampledAction sa = sample_action(out, rng);
      if (cfg.hover) sa.move = static_cast<std::size_t>(Move::Hover);
      MdpAction act = decode_action(sa.move, sa.raw, s.k_elements);
      const StepResult r = env.step(act);

      pd.tr.move = sa.move;
      pd.tr.raw = std::move(sa.raw);
      pd.tr.logp_discrete = sa.logp_discrete;
      pd.tr.logp_continuous = sa.logp_continuous;
      pd.value = out.value;
      pd.reward = r.reward;
      pd.last = r.done;
      if (cfg.normalize_rewards) {
        ret_run = cfg.gamma * ret_run + r.reward;
        ++ret_n;
        const double dv = ret_run - ret_mean;
        ret_mean += dv / static_cast<double>(ret_n);
        ret_m2 += dv * (ret_run - ret_mean);
        const double var = ret_n > 1 ? ret_m2 / static_cast<double>(ret_n - 1) : 0.0;
        pd.reward = r.reward / std::sqrt(var + 1e-8);
      }
      d.push_back(std::move(pd));

      log.cumulative_reward += r.reward;
      log.mean_sum_rate += r.sum_rate;
      log.safety_violations += r.safety_violation ? 1 : 0;
      log.qos_violations += (r.qos[0] | r.qos[1] | r.qos[2]) ? 1 : 0;
      st = r.state;
      done = r.done;
    }
    log.mean_sum_rate /= static_cast<double>(s.horizon);
    res.episodes.push_back(log);
    ret_run = 0.0;

    if ((ep + 1) % cfg.episodes_per_update == 0 || ep + 1 == cfg.episodes) {
      fill_advantages(d, cfg);
      learn(res.params, d, cfg, rng);
      d.clear();
    }
  }
  return res;
}

TrainResult hover_baseline(const AerialScenario& s, TrainConfig cfg, std::uint64_t seed) {
  cfg.hover = true;
  return train(s, cfg, seed);
}

Evaluation evaluate_policy(const PolicyParams& p, const AerialScenario& scenario, bool hover,
                           std::uint64_t seed, std::size_t episodes) {
  if (episodes == 0) throw DomainError("evaluate: need at least one episode");
  AerialScenario s = scenario;
  if (hover) s.start = user_centroid(s);
  Environment env(s);
  Rng unused(0);
  Evaluation ev;
  for (std::size_t ep = 0; ep < episodes; ++ep) {
    MdpState st = env.reset(episode_seed(seed, ep));
    bool done = false;
    while (!done) {
      const PolicyOutput out = forward(p, observe(s, st));
      SampledAction sa = sample_action(out, unused, true);
      if (hover) sa.move = static_cast<std::size_t>(Move::Hover);
      const StepResult r = env.step(decode_action(sa.move, sa.raw, s.k_elements));
      ev.mean_reward += r.reward;
      ev.mean_sum_rate += r.sum_rate;
      if (ep == 0) {
        TraceRow row;
        row.t = env.t();
        row.uav_xy = r.state.uav_xy;
        row.reward = r.reward;
        row.rates = r.state.rates;
        row.qos = r.qos;
        row.safety_violation = r.safety_violation;
        ev.trace.push_back(row);
      }
      st = r.state;
      done = r.done;
    }
  }
  const double slots = static_cast<double>(episodes * s.horizon);
  ev.mean_reward /= slots;
  ev.mean_sum_rate /= slots;
  return ev;
}

ExhaustiveResult exhaustive_baseline(const AerialScenario& s, const ExhaustiveGrid& g) {
  s.validate();
  if (g.points_per_axis == 0 || g.phase_levels == 0 || g.lambda_levels == 0 || g.draws == 0)
    throw DomainError("exhaustive: every grid needs at least one level");
  const std::size_t k = s.k_elements;
  const double n_phase = std::pow(static_cast<double>(g.phase_levels), static_cast<double>(k));
  const double n_lambda = static_cast<double>(g.lambda_levels * g.lambda_levels);
  const double total = static_cast<double>(g.points_per_axis * g.points_per_axis) * n_phase *
                       n_lambda * static_cast<double>(g.draws);
  if (total > kExhaustiveCap) {
    std::ostringstream os;
    os << "exhaustive: " << total << " evaluations exceed the cap of " << kExhaustiveCap;
    throw DomainError(os.str());
  }
  const std::size_t np = static_cast<std::size_t>(n_phase);
  const std::size_t nl = g.lambda_levels;

  std::vector<double> phase_grid(g.phase_levels), lambda_grid(nl);
  for (std::size_t l = 0; l < g.phase_levels; ++l)
    phase_grid[l] = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(l) /
                                            static_cast<double>(g.phase_levels);
  for (std::size_t l = 0; l < nl; ++l)
    lambda_grid[l] = 0.5 + (static_cast<double>(l) + 0.5) / (2.0 * static_cast<double>(nl));
  const auto phases_of = [&](std::size_t code) {
    std::vector<double> th(k);
    for (std::size_t j = 0; j < k; ++j) {
      th[j] = phase_grid[code % g.phase_levels];
      code /= g.phase_levels;
    }
    return th;
  };

  // Common fading draws for every configuration.
  Rng rng(g.seed);
  std::vector<SlotFading> draws;
  draws.reserve(g.draws);
  for (std::size_t d = 0; d < g.draws; ++d) draws.push_back(sample_slot_fading(k, rng));

  ExhaustiveResult best;
  best.mean_reward = -std::numeric_limits<double>::infinity();
  const double off = 0.5 * static_cast<double>(g.points_per_axis - 1);
  std::vector<double> rew(np * nl * nl), rate(np * nl * nl);
  for (std::size_t ix = 0; ix < g.points_per_axis; ++ix) {
    for (std::size_t iy = 0; iy < g.points_per_axis; ++iy) {
      const Vec2 xy{g.center.x + (static_cast<double>(ix) - off) * g.spacing,
                    g.center.y + (static_cast<double>(iy) - off) * g.spacing};
      if (!s.is_safe(xy)) continue;
      std::fill(rew.begin(), rew.end(), 0.0);
      std::fill(rate.begin(), rate.end(), 0.0);
      for (const SlotFading& f : draws) {
        const SlotChannels ch = build_channels(s, xy, f);
        for (std::size_t pc = 0; pc < np; ++pc) {
          const std::vector<double> th = phases_of(pc);
          for (std::size_t a = 0; a < nl; ++a)
            for (std::size_t b = 0; b < nl; ++b) {
              const auto r = slot_rates(s, ch, th, {lambda_grid[a], lambda_grid[b]});
              const auto q = qos_indicators(r, s.r_center_min, s.r_edge_min);
              const std::size_t c = (pc * nl + a) * nl + b;
              rew[c] += reward(r, q, false, s.k_viol);
              rate[c] += r[0] + r[1] + r[2];
            }
        }
      }
      best.evaluations += rew.size() * g.draws;
      for (std::size_t c = 0; c < rew.size(); ++c) {
        const double mr = rew[c] / static_cast<double>(g.draws);
        if (mr > best.mean_reward) {
          best.mean_reward = mr;
          best.mean_sum_rate = rate[c] / static_cast<double>(g.draws);
          best.xy = xy;
          best.phases = phases_of(c / (nl * nl));
          best.alloc = {lambda_grid[(c / nl) % nl], lambda_grid[c % nl]};
        }
      }
    }
  }
  if (best.evaluations == 0) throw DomainError("exhaustive: no safe grid point");
  return best;
}

namespace {

constexpr char kMagic[8] = {'R', 'C', 'M', 'O', 'P', 'P', 'O', '\0'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& is) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof v)) throw Error("checkpoint: truncated file");
  return v;
}

void put_doubles(std::ostream& os, const std::vector<double>& v) {
  os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
}

void get_doubles(std::istream& is, std::vector<double>& v) {
  if (!is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double))))
    throw Error("checkpoint: truncated file");
}

// (rows, cols) per tensor; biases and log_std are single rows.
std::vector<std::pair<std::uint32_t, std::uint32_t>> shape_table(const PolicyParams& p) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> t;
  for (const Mlp* m : {&p.trunk, &p.discrete, &p.continuous, &p.critic})
    for (const auto& d : m->layers()) {
      t.emplace_back(static_cast<std::uint32_t>(d.out), static_cast<std::uint32_t>(d.in));
      t.emplace_back(1u, static_cast<std::uint32_t>(d.out));
    }
  t.emplace_back(1u, static_cast<std::uint32_t>(p.log_std.size()));
  return t;
}

}  // namespace

void save_checkpoint(std::ostream& os, const PolicyParams& p) {
  os.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(os, kVersion);
  for (std::size_t v : {p.shape.state_dim, p.shape.cont_dim, p.shape.width, p.shape.trunk_layers})
    put<std::uint32_t>(os, static_cast<std::uint32_t>(v));
  const auto table = shape_table(p);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(table.size()));
  for (auto [r, c] : table) {
    put(os, r);
    put(os, c);
  }
  for (const auto* t : p.tensors()) put_doubles(os, *t);
  put<std::uint64_t>(os, p.step);
  put_doubles(os, p.adam_m);
  put_doubles(os, p.adam_v);
  if (!os) throw Error("checkpoint: write failed");
}

PolicyParams load_checkpoint(std::istream& is) {
  char magic[8];
  if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw Error("checkpoint: bad magic");
  const auto version = get<std::uint32_t>(is);
  if (version != kVersion) throw Error("checkpoint: unsupported version " + std::to_string(version));
  NetShape sh;
  sh.state_dim = get<std::uint32_t>(is);
  sh.cont_dim = get<std::uint32_t>(is);
  sh.width = get<std::uint32_t>(is);
  sh.trunk_layers = get<std::uint32_t>(is);
  PolicyParams p = zero_policy(sh);
  const auto expect = shape_table(p);
  const auto n = get<std::uint32_t>(is);
  if (n != expect.size()) throw Error("checkpoint: tensor count does not match the header shape");
  for (const auto& [r, c] : expect) {
    const auto rr = get<std::uint32_t>(is);
    const auto cc = get<std::uint32_t>(is);
    if (rr != r || cc != c) throw Error("checkpoint: shape table does not match the header shape");
  }
  for (auto* t : p.tensors()) get_doubles(is, *t);
  p.step = get<std::uint64_t>(is);
  get_doubles(is, p.adam_m);
  get_doubles(is, p.adam_v);
  for (double x : p.flat())
    if (!std::isfinite(x)) throw Error("checkpoint: non-finite weight");
  return p;
}

void save_checkpoint(const std::string& path, const PolicyParams& p) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("checkpoint: cannot open " + path);
  save_checkpoint(os, p);
}

PolicyParams load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("checkpoint: cannot open " + path);
  return load_checkpoint(is);
}

std::vector<double> moving_average(const std::vector<double>& v, std::size_t window) {
  if (window == 0) throw DomainError("moving average: window must be >= 1");
  std::vector<double> out(v.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    acc += v[i];
    if (i >= window) acc -= v[i - window];
    out[i] = acc / static_cast<double>(std::min(i + 1, window));
  }
  return out;
}

void write_learning_curve_csv(std::ostream& os, const std::vector<EpisodeLog>& log,
                              std::size_t window) {
  std::vector<double> cum(log.size());
  for (std::size_t i = 0; i < log.size(); ++i) cum[i] = log[i].cumulative_reward;
  const auto ma = moving_average(cum, window);
  const auto old = os.precision(12);
  os << "episode,cumulative_reward,moving_average,mean_sum_rate,safety_violations,qos_violations\n";
  for (std::size_t i = 0; i < log.size(); ++i)
    os << i << ',' << log[i].cumulative_reward << ',' << ma[i] << ',' << log[i].mean_sum_rate << ','
       << log[i].safety_violations << ',' << log[i].qos_violations << '\n';
  os.precision(old);
}

}  // namespace riscomp
