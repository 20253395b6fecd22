#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "riscomp/config.hpp"
#include "riscomp/error.hpp"
#include "riscomp/experiments.hpp"
#include "riscomp/units.hpp"

using namespace riscomp;
namespace fs = std::filesystem;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config_text(text, "cfg");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

bool contains(const std::string& s, const std::string& needle) {
  return s.find(needle) != std::string::npos;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("riscomp_test_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("empty config gives the two-BS scenario defaults") {
  const ExperimentConfig c = parse_config_text("");
  CHECK(c.kind() == ExperimentKind::PdfValidation);
  const NetworkScenario s = c.star();
  const NetworkScenario d;
  CHECK(s.k_elements == 34);
  CHECK(s.assignment == d.assignment);
  CHECK(s.alpha_bs_center == 3.0);
  CHECK(s.alpha_bs_edge == 3.5);
  CHECK(s.alpha_bs_ris == 3.0);
  CHECK(s.alpha_ris_center == 2.7);
  CHECK(s.alpha_ris_edge == 2.3);
  CHECK(s.alpha_interference == 4.0);
  CHECK(s.kappa_ris_center == doctest::Approx(db_to_linear(3.0)));
  CHECK(s.kappa_ris_edge == doctest::Approx(db_to_linear(4.0)));
  CHECK(s.tx_power == doctest::Approx(d.tx_power).epsilon(1e-14));
  CHECK(s.noise_power == doctest::Approx(d.noise_power).epsilon(1e-14));
  CHECK(s.zeta_edge == 0.7);
  CHECK(s.zeta_center == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(s.beta_t == 0.5);
  CHECK(s.lambda_center == 1.0);
  CHECK(s.edge_user.y == 35.0);
  CHECK(c.trials() == 10000);

  const MultiCellScenario m = c.multicell();
  CHECK(m.cells == 6);
  CHECK(m.k_elements == 70);
  CHECK(m.static_power_dbm == 30.0);
  CHECK(m.thresholds.r_center_min == 1.0);
  CHECK(m.thresholds.r_edge_min == 0.5);

  const AerialScenario a = c.aerial();
  CHECK(a.k_elements == 120);
  CHECK(a.horizon == 250);
  CHECK(a.obstacles.size() == 2);
  CHECK(a.r_edge_min == 0.2);
  const TrainConfig t = c.train();
  CHECK(t.learning_rate == 2.75e-4);
  CHECK(t.clip_eps == 0.1);
  CHECK(t.gamma == 0.98);
  CHECK(t.episodes == 750);
  CHECK(t.k_viol == 7.0);
}

TEST_CASE("energy split violation names the invariant") {
  const std::string e = error_of("star.beta_t = 0.6\nstar.beta_r = 0.6\n");
  CHECK(contains(e, "beta_t + beta_r = 1"));
  // beta_r follows beta_t when omitted.
  const auto c = parse_config_text("star.beta_t = 0.7\n");
  CHECK(c.real("star.beta_r") == doctest::Approx(0.3));
  CHECK_NOTHROW(parse_config_text("star.beta_t = 0.25\nstar.beta_r = 0.75\n"));
}

TEST_CASE("unknown keys and syntax errors carry line numbers, all at once") {
  const std::string e = error_of("# comment\nfoo = 1\nstar.k_elements 3\ntrials = -4\nseed = 2\nseed = 3\n");
  CHECK(contains(e, "cfg:2: unknown key 'foo'"));
  CHECK(contains(e, "cfg:3: expected 'key = value'"));
  CHECK(contains(e, "cfg:4: trials:"));
  CHECK(contains(e, "cfg:6: 'seed' already set on line 5"));
}

TEST_CASE("constraint violations are listed exhaustively") {
  const std::string e = error_of(
      "star.beta_t = 0.6\nstar.beta_r = 0.6\nstar.assignment = 3, 3\nmc.cooperating = 9\n"
      "kind = drl-eval\n");
  CHECK(contains(e, "energy-splitting"));
  CHECK(contains(e, "star.assignment sums to 6"));
  CHECK(contains(e, "mc.cooperating exceeds mc.cells"));
  CHECK(contains(e, "drl-eval needs drl.checkpoint"));
  CHECK(contains(error_of("kind = er-sweep\nsweep.axes = cooperating\n"),
                 "'cooperating' is not a valid axis for er-sweep"));
  CHECK(contains(error_of("star.m_ris = 0.2\n"), "outside [0.5, 100]"));
}

TEST_CASE("value syntax: ranges, lists, booleans, units") {
  auto c = parse_config_text(
      "sweep.split = 0:0.25:1\nsweep.tx_power_dbm = -20:5:10, 12\ntrain.full_pass = yes\n"
      "star.tx_power_dbm = 0\nstar.k_elements = 7\nstar.lambda_edge_db = 10\n");
  CHECK(c.reals("sweep.split") == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
  CHECK(c.reals("sweep.tx_power_dbm") == std::vector<double>{-20, -15, -10, -5, 0, 5, 10, 12});
  CHECK(c.flag("train.full_pass"));
  CHECK(c.star().tx_power == doctest::Approx(1e-3));
  CHECK(c.star().lambda_edge == doctest::Approx(10.0));
  CHECK(c.star().assignment == std::array<std::size_t, 2>{4, 3});
  CHECK(parse_config_text("sweep.split = 0:0.1:1\n").reals("sweep.split").size() == 11);
  CHECK(contains(error_of("sweep.k_elements = 1.5\n"), "not a whole number"));
  CHECK(contains(error_of("sweep.split = 0:-1:1\n"), "does not reach"));
  CHECK(contains(error_of("train.hover = maybe\n"), "not a boolean"));
  CHECK(contains(error_of("sweep.schemes = ec, ec\n"), "listed twice"));
}

TEST_CASE("canonical form round trips and drives the hash") {
  auto c = parse_config_text("kind = ee-sweep\nsweep.split = 0:0.1:0.3\nstar.beta_t = 0.7\nout = x\n");
  const std::string canon = c.canonical();
  CHECK_FALSE(contains(canon, "\nout ="));
  const auto back = parse_config_text(canon);
  CHECK(back.canonical() == canon);
  CHECK(back.hash() == c.hash());
  c.set("seed", "2");
  CHECK(c.hash() != back.hash());
  CHECK(contains(canon, "sweep.axes = cooperating\n"));
}

TEST_CASE("fnv1a64 reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("scheme names") {
  const Scheme a = parse_scheme("oma-ec");
  CHECK(a.access == Access::Oma);
  CHECK(a.ris == NetworkMode::EC);
  const Scheme b = parse_scheme("nocomp-eo");
  CHECK_FALSE(b.comp);
  CHECK(b.ris == NetworkMode::EO);
  CHECK(parse_scheme("no-ris").ris == NetworkMode::NoRis);
  CHECK_THROWS_AS(parse_scheme("ec-oma"), ConfigError);
}

TEST_CASE("figure presets") {
  for (const auto& id : preset_ids()) CHECK_NOTHROW(reproduce(id));
  const auto f42 = reproduce("fig4.2");
  CHECK(f42.kind() == ExperimentKind::EeSweep);
  CHECK(f42.multicell().cells == 6);
  CHECK(f42.multicell().k_elements == 70);
  CHECK(f42.multicell().tx_power() == doctest::Approx(1e-3));
  const auto f34 = reproduce("fig3.4");
  CHECK(f34.star().lambda_center == 1.0);
  CHECK(f34.star().lambda_edge == 1.0);
  CHECK(reproduce("fig4.6").multicell().k_elements == 72);
  CHECK(reproduce("fig5.2").aerial().tx_power_dbm == 20.0);
  std::string msg;
  try {
    reproduce("fig9.9");
  } catch (const ConfigError& e) {
    msg = e.what();
  }
  CHECK(contains(msg, "fig3.2"));
  CHECK(contains(msg, "fig5.5"));
}

TEST_CASE("output directory precedence") {
  auto c = parse_config_text("");
  ::unsetenv(kOutEnv);
  CHECK(resolve_out_dir("", c) == "riscomp-out");
  ::setenv(kOutEnv, "from-env", 1);
  CHECK(resolve_out_dir("", c) == "from-env");
  c.set("out", "from-config");
  CHECK(resolve_out_dir("", c) == "from-config");
  CHECK(resolve_out_dir("from-flag", c) == "from-flag");
  ::unsetenv(kOutEnv);
}

TEST_CASE("runs write CSVs and a manifest that reproduces them byte for byte") {
  TempDir tmp;
  const char* configs[] = {
      "kind = pdf-validation\ntrials = 500\n",
      "kind = outage-sweep\ntrials = 300\nsweep.tx_power_dbm = -10, 0\n",
      "kind = ee-sweep\ntrials = 50\nsweep.cooperating = 1, 6\nsweep.schemes = eo, ec\n",
      "kind = drl-train\naerial.k_elements = 2\naerial.horizon = 12\ntrain.episodes = 2\n"
      "train.epochs = 1\ntrain.batch = 8\ntrain.rollout = 5\ntrain.hidden = 8\n"
      "drl.eval_episodes = 1\n",
  };
  int n = 0;
  for (const char* text : configs) {
    const auto cfg = parse_config_text(text);
    const fs::path a = tmp.path / ("a" + std::to_string(n));
    const fs::path b = tmp.path / ("b" + std::to_string(n++));
    const RunResult r1 = run_experiment(cfg, a);
    REQUIRE(r1.files.back() == kManifestName);
    const auto again = load_config((a / kManifestName).string());
    CHECK(again.hash() == cfg.hash());
    const RunResult r2 = run_experiment(again, b);
    REQUIRE(r1.files == r2.files);
    for (const auto& f : r1.files) CHECK(slurp(a / f) == slurp(b / f));
  }
  const std::string ks = slurp(tmp.path / "a0" / "ks_table.csv");
  CHECK(ks.rfind("user,samples,ks_statistic,critical_value,pass\n", 0) == 0);
  CHECK(std::count(ks.begin(), ks.end(), '\n') == 6);
  CHECK(fs::exists(tmp.path / "a3" / "checkpoint_noma.bin"));
  CHECK(fs::exists(tmp.path / "a3" / "learning_curve_noma.csv"));
}

TEST_CASE("drl-eval rejects a checkpoint of another shape") {
  TempDir tmp;
  const PolicyParams p = make_policy(NetShape{9, 4, 8, 2}, 1);
  const fs::path ck = tmp.path / "p.bin";
  save_checkpoint(ck.string(), p);
  auto cfg = parse_config_text("kind = drl-eval\ndrl.checkpoint = " + ck.string() + "\n");
  CHECK_THROWS_AS(run_experiment(cfg, tmp.path / "out"), ConfigError);
  cfg.set("aerial.k_elements", "2");
  cfg.set("train.hidden", "8");
  cfg.set("aerial.horizon", "5");
  cfg.set("drl.eval_episodes", "1");
  CHECK_NOTHROW(run_experiment(cfg, tmp.path / "out"));
}
