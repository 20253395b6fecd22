#include "riscomp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "riscomp/analytic.hpp"
#include "riscomp/error.hpp"
#include "riscomp/montecarlo.hpp"
#include "riscomp/moppo.hpp"
#include "riscomp/units.hpp"

namespace riscomp {

namespace {

namespace fs = std::filesystem;

/// Collects artifacts of one run; every file is written in one go, in binary
/// mode, so the bytes only depend on the config.
class Artifacts {
 public:
  explicit Artifacts(fs::path dir) : dir_(std::move(dir)) {}

  void write(const std::string& name, const std::function<void(std::ostream&)>& fill) {
    std::ostringstream buf;
    fill(buf);
    std::ofstream f(dir_ / name, std::ios::binary | std::ios::trunc);
    f << buf.str();
    if (!f) throw Error("cannot write " + (dir_ / name).string());
    files_.push_back(name);
  }

  const std::vector<std::string>& files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

void say(std::ostream* log, const std::string& msg) {
  if (log) *log << msg << '\n' << std::flush;
}

std::string num(double v) { return format_value(ConfigValue{v}); }

std::size_t whole(double v) { return static_cast<std::size_t>(std::llround(v)); }

void set_star_elements(NetworkScenario& s, std::size_t k) {
  s.k_elements = k;
  s.assignment = {(k + 1) / 2, k / 2};
}

NetworkScenario star_point(const NetworkScenario& base, const std::string& axis, double x) {
  NetworkScenario s = base;
  if (axis == "tx_power_dbm")
    s.tx_power = dbm_to_watts(x);
  else
    set_star_elements(s, whole(x));
  return s;
}

// ---------------------------------------------------------------- chapter 3

void run_pdf_validation(const ExperimentConfig& cfg, Artifacts& art, std::ostream* log) {
  const NetworkScenario s = cfg.star();
  const TrialBatch b = run_trials(s, cfg.trials(), cfg.seed());
  struct Law {
    std::string user;
    BetaPrimeParams law;
    const std::vector<double>* samples;
  };
  std::vector<Law> laws;
  for (std::size_t i = 0; i < 2; ++i) {
    const auto m = s.center_model(i);
    const std::string u = "center" + std::to_string(i + 1);
    laws.push_back({u + "_own", sinr_dist_center_own(m), &b.center_own[i]});
    laws.push_back({u + "_decode_edge", sinr_dist_center_decode_edge(m), &b.center_decode_edge[i]});
  }
  laws.push_back({"edge", sinr_dist_edge(s.edge_model()), &b.edge});

  std::vector<KsResult> ks;
  for (const auto& l : laws) {
    ks.push_back(ks_statistic(*l.samples, [&](double x) { return beta_prime_cdf(l.law, x); }));
    say(log, "  KS " + l.user + ": D = " + num(ks.back().statistic));
  }
  art.write("ks_table.csv", [&](std::ostream& os) {
    os.precision(12);
    os << "user,samples,ks_statistic,critical_value,pass\n";
    for (std::size_t i = 0; i < laws.size(); ++i)
      os << laws[i].user << ',' << laws[i].samples->size() << ',' << ks[i].statistic << ','
         << ks[i].critical << ',' << (ks[i].pass ? 1 : 0) << '\n';
  });
  art.write("pdf_curves.csv", [&](std::ostream& os) {
    os.precision(12);
    os << "user,sinr,analytic_pdf,analytic_cdf,empirical_cdf\n";
    constexpr int kPoints = 100;
    for (const auto& l : laws) {
      const EmpiricalCdf emp(*l.samples);
      const double lo = beta_prime_quantile(l.law, 0.001);
      const double hi = beta_prime_quantile(l.law, 0.999);
      for (int j = 0; j < kPoints; ++j) {
        const double x = lo + (hi - lo) * j / (kPoints - 1);
        os << l.user << ',' << x << ',' << l.law.pdf(x) << ',' << beta_prime_cdf(l.law, x) << ','
           << emp(x) << '\n';
      }
    }
  });
}

void run_er_sweep(const ExperimentConfig& cfg, Artifacts& art, std::ostream* log) {
  const NetworkScenario base = cfg.star();
  const std::string axis = cfg.sweep_axes().at(0);
  std::ostringstream os;
  os.precision(12);
  os << axis
     << ",center1_analytic,center1_mc,center2_analytic,center2_mc,edge_analytic,edge_high_snr,"
        "edge_mc,edge_no_comp_mc\n";
  for (double x : cfg.reals("sweep." + axis)) {
    const NetworkScenario s = star_point(base, axis, x);
    const UserStats mc = estimate_ergodic_rate(run_trials(s, cfg.trials(), cfg.seed()));
    os << num(x);
    for (std::size_t i = 0; i < 2; ++i)
      os << ',' << ergodic_rate(sinr_dist_center_own(s.center_model(i))) << ',' << mc.center[i];
    const auto e = s.edge_model();
    os << ',' << ergodic_rate(sinr_dist_edge(e)) << ',' << ergodic_rate_high_snr(e) << ','
       << mc.edge << ',' << mc.edge_no_comp << '\n';
    say(log, "  " + axis + " = " + num(x));
  }
  art.write("er_sweep.csv", [&](std::ostream& o) { o << os.str(); });
}

void run_outage_sweep(const ExperimentConfig& cfg, Artifacts& art, std::ostream* log) {
  const NetworkScenario base = cfg.star();
  const std::string axis = cfg.sweep_axes().at(0);
  std::ostringstream os;
  os.precision(12);
  os << axis
     << ",center1_closed,center1_mc,center2_closed,center2_mc,edge_closed,edge_mc,"
        "edge_no_comp_mc\n";
  for (double x : cfg.reals("sweep." + axis)) {
    const NetworkScenario s = star_point(base, axis, x);
    const UserStats mc = estimate_outage(run_trials(s, cfg.trials(), cfg.seed()), s.thresholds());
    os << num(x);
    for (std::size_t i = 0; i < 2; ++i)
      os << ',' << outage_center_closed(s.center_model(i), s.lambda_edge, s.lambda_center) << ','
         << mc.center[i];
    os << ',' << outage_edge_closed(sinr_dist_edge(s.edge_model()), s.lambda_edge) << ','
       << mc.edge << ',' << mc.edge_no_comp << '\n';
    say(log, "  " + axis + " = " + num(x));
  }
  art.write("outage_sweep.csv", [&](std::ostream& o) { o << os.str(); });
}

void run_exhaustive_star(const ExperimentConfig& cfg, Artifacts& art, std::ostream* log) {
  const NetworkScenario base = cfg.star();
  std::ostringstream os;
  os.precision(12);
  os << "k_r1,k_r2,beta_t,beta_r,center1_er,center2_er,edge_er,sum_er,center1_mc,center2_mc,"
        "edge_mc,sum_mc\n";
  double best = -1.0;
  std::string best_at;
  for (double k1 : cfg.reals("sweep.k_r1")) {
    for (double bt : cfg.reals("sweep.beta_t")) {
      NetworkScenario s = base;
      s.assignment = {whole(k1), s.k_elements - whole(k1)};
      s.beta_t = bt;
      s.validate();
      const double c1 = ergodic_rate(sinr_dist_center_own(s.center_model(0)));
      const double c2 = ergodic_rate(sinr_dist_center_own(s.center_model(1)));
      const double e = ergodic_rate(sinr_dist_edge(s.edge_model()));
      const UserStats mc = estimate_ergodic_rate(run_trials(s, cfg.trials(), cfg.seed()));
      os << s.assignment[0] << ',' << s.assignment[1] << ',' << num(bt) << ',' << num(1.0 - bt)
         << ',' << c1 << ',' << c2 << ',' << e << ',' << c1 + c2 + e << ',' << mc.center[0] << ','
         << mc.center[1] << ',' << mc.edge << ',' << mc.center[0] + mc.center[1] + mc.edge
         << '\n';
      if (c1 + c2 + e > best) {
        best = c1 + c2 + e;
        best_at = "K_R1 = " + num(k1) + ", beta_t = " + num(bt);
      }
    }
    say(log, "  K_R1 = " + num(k1));
  }
  say(log, "  best analytic sum rate " + num(best) + " at " + best_at);
  art.write("exhaustive_star.csv", [&](std::ostream& o) { o << os.str(); });
}

// ---------------------------------------------------------------- chapter 4

SweepAxis multicell_axis(const std::string& a) {
  if (a == "cooperating") return SweepAxis::Cooperating;
  if (a == "k_elements") return SweepAxis::Elements;
  if (a == "tx_power_dbm") return SweepAxis::TxPowerDbm;
  if (a == "rate_threshold") return SweepAxis::RateThreshold;
  return SweepAxis::Split;
}

void run_multicell_sweep(const ExperimentConfig& cfg, Artifacts& art, std::ostream* log,
                         const std::string& file) {
  SweepSpec spec;
  for (const auto& a : cfg.sweep_axes()) {
    spec.axes.push_back(multicell_axis(a));
    spec.values.push_back(cfg.reals("sweep." + a));
  }
  spec.schemes = cfg.schemes();
  spec.n_trials = cfg.trials();
  spec.seed = cfg.seed();
  const SweepTable t = ee_sweep(cfg.multicell(), spec);
  say(log, "  " + std::to_string(t.rows.size()) + " rows");
  art.write(file, [&](std::ostream& os) { write_sweep_csv(os, t); });
}

// ---------------------------------------------------------------- chapter 5

std::uint64_t eval_seed(std::uint64_t seed) { return splitmix64(seed ^ 0xE7A1ULL); }

void write_evaluation(Artifacts& art, const std::string& tag, const Evaluation& ev) {
  art.write("trace" + tag + ".csv", [&](std::ostream& os) { write_trace_csv(os, ev.trace); });
}

void write_exhaustive(Artifacts& art, const std::string& axis, const std::vector<double>& xs,
                      const std::vector<ExhaustiveResult>& res) {
  art.write("exhaustive.csv", [&](std::ostream& os) {
    os.precision(12);
    if (!axis.empty()) os << axis << ',';
    os << "uav_x,uav_y,lambda1,lambda2,mean_reward,mean_sum_rate,evaluations\n";
    for (std::size_t i = 0; i < res.size(); ++i) {
      if (!axis.empty()) os << num(xs[i]) << ',';
      const auto& r = res[i];
      os << r.xy.x << ',' << r.xy.y << ',' << r.alloc[0] << ',' << r.alloc[1] << ','
         << r.mean_reward << ',' << r.mean_sum_rate << ',' << r.evaluations << '\n';
    }
  });
}

AerialScenario aerial_point(const AerialScenario& base, const std::string& axis, double x) {
  AerialScenario s = base;
  if (axis == "tx_power_dbm") s.tx_power_dbm = x;
  if (axis == "k_elements") s.k_elements = whole(x);
  return s;
}

double window_mean(const std::vector<EpisodeLog>& log, std::size_t window, bool last) {
  const std::size_t n = std::min(window, log.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    sum += log[last ? log.size() - n + i : i].cumulative_reward;
  return n ? sum / static_cast<double>(n) : 0.0;
}

void run_drl_train(const ExperimentConfig& cfg, Artifacts& art, std::ostream* log) {
  const auto axes = cfg.sweep_axes();
  const std::string axis = axes.empty() ? "" : axes[0];
  const std::vector<double> xs = axis.empty() ? std::vector<double>{0.0} : cfg.reals("sweep." + axis);
  const AerialScenario base = cfg.aerial();
  TrainConfig tc = cfg.train();
  tc.hover = false;
  const std::size_t window = cfg.count("drl.window");

  std::ostringstream summary;
  summary.precision(12);
  if (!axis.empty()) summary << axis << ',';
  summary << "variant,episodes,first_window_reward,last_window_reward,eval_mean_reward,"
             "eval_mean_sum_rate\n";
  std::vector<ExhaustiveResult> optimum;
  for (double x : xs) {
    const AerialScenario point = aerial_point(base, axis, x);
    for (const auto& v : cfg.words("drl.variants")) {
      AerialScenario s = point;
      if (v == "oma") s.access = AerialAccess::Oma;
      if (v == "random-phases") s.random_phases = true;
      const bool hover = v == "hover";
      const std::string tag = "_" + v + (axis.empty() ? "" : "_" + axis + "_" + num(x));
      say(log, "  training " + tag.substr(1));
      const TrainResult r = hover ? hover_baseline(s, tc, cfg.seed()) : train(s, tc, cfg.seed());
      art.write("learning_curve" + tag + ".csv",
                [&](std::ostream& os) { write_learning_curve_csv(os, r.episodes, window); });
      art.write("checkpoint" + tag + ".bin",
                [&](std::ostream& os) { save_checkpoint(os, r.params); });
      const Evaluation ev =
          evaluate_policy(r.params, s, hover, eval_seed(cfg.seed()), cfg.count("drl.eval_episodes"));
      write_evaluation(art, tag, ev);
      if (!axis.empty()) summary << num(x) << ',';
      summary << v << ',' << r.episodes.size() << ',' << window_mean(r.episodes, window, false)
              << ',' << window_mean(r.episodes, window, true) << ',' << ev.mean_reward << ','
              << ev.mean_sum_rate << '\n';
      say(log, "    greedy reward per slot " + num(ev.mean_reward));
    }
    if (cfg.flag("drl.exhaustive")) optimum.push_back(exhaustive_baseline(point, cfg.exhaustive_grid()));
  }
  art.write("summary.csv", [&](std::ostream& os) { os << summary.str(); });
  if (!optimum.empty()) write_exhaustive(art, axis, xs, optimum);
}

void run_drl_eval(const ExperimentConfig& cfg, Artifacts& art, std::ostream* log) {
  const AerialScenario s = cfg.aerial();
  const TrainConfig tc = cfg.train();
  const PolicyParams p = load_checkpoint(cfg.text("drl.checkpoint"));
  if (!(p.shape == policy_shape(s, tc)))
    throw ConfigError("checkpoint network shape does not match the aerial scenario and train.* "
                      "settings");
  const Evaluation ev =
      evaluate_policy(p, s, tc.hover, eval_seed(cfg.seed()), cfg.count("drl.eval_episodes"));
  say(log, "  greedy reward per slot " + num(ev.mean_reward));
  art.write("eval.csv", [&](std::ostream& os) {
    os.precision(12);
    os << "episodes,mean_reward,mean_sum_rate\n"
       << cfg.count("drl.eval_episodes") << ',' << ev.mean_reward << ',' << ev.mean_sum_rate
       << '\n';
  });
  write_evaluation(art, "", ev);
  if (cfg.flag("drl.exhaustive"))
    write_exhaustive(art, "", {0.0}, {exhaustive_baseline(s, cfg.exhaustive_grid())});
}

// ---------------------------------------------------------------- presets

const std::map<std::string, std::string>& presets() {
  static const std::map<std::string, std::string> p{
      {"fig3.2",
       "kind = pdf-validation\n"
       "trials = 10000\n"
       "star.k_elements = 34\n"
       "star.m_direct = 1\n"
       "star.m_ris = 2\n"},
      {"fig3.3",
       "kind = er-sweep\n"
       "star.tx_power_dbm = -10\n"
       "sweep.axes = k_elements\n"
       "sweep.k_elements = 0:10:100\n"},
      {"fig3.4",
       "kind = outage-sweep\n"
       "star.beta_t = 0.5\n"
       "star.lambda_center_db = 0\n"
       "star.lambda_edge_db = 0\n"
       "sweep.axes = tx_power_dbm\n"
       "sweep.tx_power_dbm = -20:5:20\n"},
      {"fig3.5",
       "kind = exhaustive-star\n"
       "star.tx_power_dbm = -10\n"
       "sweep.k_r1 = 0:2:34\n"
       "sweep.beta_t = 0.1:0.1:0.9\n"},
      {"fig4.2",
       "kind = ee-sweep\n"
       "mc.cells = 6\n"
       "mc.k_elements = 70\n"
       "mc.tx_power_dbm = 0\n"
       "sweep.axes = cooperating\n"
       "sweep.cooperating = 1:1:6\n"
       "sweep.schemes = no-ris, random, eo, ec\n"},
      {"fig4.3",
       "kind = osum-sweep\n"
       "mc.cooperating = 4\n"
       "mc.k_elements = 70\n"
       "sweep.axes = tx_power_dbm\n"
       "sweep.tx_power_dbm = -10:5:30\n"
       "sweep.schemes = no-ris, random, eo, ec, oma-ec\n"},
      {"fig4.4",
       "kind = ee-sweep\n"
       "mc.cooperating = 4\n"
       "mc.tx_power_dbm = 0\n"
       "sweep.axes = k_elements\n"
       "sweep.k_elements = 30:20:150\n"
       "sweep.schemes = random, eo, ec, nocomp-ec\n"},
      {"fig4.5",
       "kind = ee-sweep\n"
       "mc.cooperating = 4\n"
       "mc.k_elements = 70\n"
       "sweep.axes = tx_power_dbm, rate_threshold\n"
       "sweep.tx_power_dbm = -10:5:30\n"
       "sweep.rate_threshold = 0.5:0.5:3\n"
       "sweep.schemes = ec\n"},
      {"fig4.6",
       "kind = split-sweep\n"
       "mc.k_elements = 72\n"
       "mc.tx_power_dbm = 0\n"
       "sweep.axes = cooperating, split\n"
       "sweep.cooperating = 1, 3, 6\n"
       "sweep.split = 0:0.125:1\n"
       "sweep.schemes = ec\n"},
      {"fig5.2",
       "kind = drl-train\n"
       "aerial.tx_power_dbm = 20\n"
       "aerial.k_elements = 120\n"
       "drl.variants = noma, random-phases, oma\n"},
      {"fig5.3",
       "kind = drl-train\n"
       "aerial.k_elements = 120\n"
       "sweep.axes = tx_power_dbm\n"
       "sweep.tx_power_dbm = 0:10:30\n"
       "drl.variants = noma, random-phases, oma, hover\n"},
      {"fig5.4",
       "kind = drl-train\n"
       "aerial.tx_power_dbm = 10\n"
       "sweep.axes = k_elements\n"
       "sweep.k_elements = 40:40:160\n"
       "drl.variants = noma, random-phases\n"},
      {"fig5.5",
       "kind = drl-train\n"
       "aerial.tx_power_dbm = 20\n"
       "aerial.k_elements = 120\n"
       "drl.variants = noma\n"
       "drl.eval_episodes = 10\n"},
  };
  return p;
}

}  // namespace

std::string manifest_text(const ExperimentConfig& cfg, const std::vector<std::string>& outputs) {
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(cfg.hash()));
  std::string s = "# riscomp run manifest\n";
  s += "# version = " + std::string(kVersion) + "\n";
  s += "# config_hash = fnv1a64:" + std::string(hash) + "\n";
  s += "# outputs =";
  for (const auto& f : outputs) s += " " + f;
  s += "\n# rerun: riscomp run manifest.cfg --out <dir>\n";
  s += cfg.canonical();
  return s;
}

RunResult run_experiment(const ExperimentConfig& cfg, const fs::path& out_dir, std::ostream* log) {
  cfg.validate();
  fs::create_directories(out_dir);
  Artifacts art(out_dir);
  say(log, kind_name(cfg.kind()) + " -> " + out_dir.string());
  switch (cfg.kind()) {
    case ExperimentKind::PdfValidation: run_pdf_validation(cfg, art, log); break;
    case ExperimentKind::ErSweep: run_er_sweep(cfg, art, log); break;
    case ExperimentKind::OutageSweep: run_outage_sweep(cfg, art, log); break;
    case ExperimentKind::ExhaustiveStar: run_exhaustive_star(cfg, art, log); break;
    case ExperimentKind::EeSweep: run_multicell_sweep(cfg, art, log, "ee_sweep.csv"); break;
    case ExperimentKind::OsumSweep: run_multicell_sweep(cfg, art, log, "osum_sweep.csv"); break;
    case ExperimentKind::SplitSweep: run_multicell_sweep(cfg, art, log, "split_sweep.csv"); break;
    case ExperimentKind::DrlTrain: run_drl_train(cfg, art, log); break;
    case ExperimentKind::DrlEval: run_drl_eval(cfg, art, log); break;
  }
  const std::vector<std::string> outputs = art.files();
  art.write(kManifestName, [&](std::ostream& os) { os << manifest_text(cfg, outputs); });
  return {out_dir, art.files(), cfg.hash()};
}

std::vector<std::string> preset_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, _] : presets()) ids.push_back(id);
  return ids;
}

std::string preset_text(const std::string& id) {
  const auto it = presets().find(id);
  if (it == presets().end()) {
    std::string msg = "unknown figure id '" + id + "'; available presets:";
    for (const auto& p : preset_ids()) msg += " " + p;
    throw ConfigError(msg);
  }
  return it->second;
}

ExperimentConfig reproduce(const std::string& id) { return parse_config_text(preset_text(id), id); }

fs::path resolve_out_dir(const std::string& flag, const ExperimentConfig& cfg) {
  if (!flag.empty()) return flag;
  if (const std::string o = cfg.text("out"); !o.empty()) return o;
  if (const char* env = std::getenv(kOutEnv); env && *env) return env;
  return "riscomp-out";
}

}  // namespace riscomp
