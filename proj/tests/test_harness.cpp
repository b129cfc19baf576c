#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "cfmimo/harness.hpp"
#include "cfmimo/rng.hpp"
#include "cfmimo/stats.hpp"

using namespace cfmimo;

namespace {

SystemConfig small_config() {
  SystemConfig cfg;
  cfg.num_aps = 24;
  cfg.num_users = 4;
  cfg.users_per_rb = 2;
  cfg.aps_per_user = 3;
  cfg.drops = 6;
  cfg.seed = 11;
  return cfg;
}

}  // namespace

TEST_SUITE_BEGIN("harness");

TEST_CASE("percentile uses linear interpolation between order statistics") {
  const std::vector<double> v = {30.0, 10.0, 40.0, 20.0};
  CHECK(percentile(v, 0.0) == 10.0);
  CHECK(percentile(v, 100.0) == 40.0);
  CHECK(percentile(v, 50.0) == doctest::Approx(25.0));
  CHECK(percentile(v, 25.0) == doctest::Approx(17.5));
  std::vector<double> big(100);
  for (int i = 0; i < 100; ++i) big[static_cast<size_t>(i)] = i + 1.0;
  const SummaryStats s = summarize(big);
  CHECK(s.count == 100);
  CHECK(s.mean == doctest::Approx(50.5));
  CHECK(s.median == doctest::Approx(50.5));
  CHECK(s.p5 == doctest::Approx(5.95));
  CHECK(s.p95 == doctest::Approx(95.05));
}

TEST_CASE("ecdf sorts values and ends at probability one") {
  const auto pts = ecdf({3.0, 1.0, 2.0});
  REQUIRE(pts.size() == 3);
  CHECK(pts[0].first == 1.0);
  CHECK(pts[1].first == 2.0);
  CHECK(pts[2].first == 3.0);
  CHECK(pts[0].second == doctest::Approx(1.0 / 3));
  CHECK(pts[2].second == 1.0);
}

TEST_CASE("one drop emits every approach, direction, and user exactly once") {
  const SystemConfig cfg = small_config();
  const auto rows = run_drop(cfg, 0);
  CHECK(rows.size() == 9u * 4u);  // 4 approaches x (ul+dl) + non-coherent dl, 4 users

  std::map<std::string, std::set<int>> users_by_key;
  for (const auto& r : rows) {
    CHECK(r.drop == 0);
    CHECK(std::isfinite(r.sinr));
    CHECK(r.sinr >= 0.0);
    CHECK(r.se == doctest::Approx(std::log2(1.0 + r.sinr)).epsilon(1e-12));
    users_by_key[r.approach + "/" + r.direction].insert(r.user);
  }
  CHECK(users_by_key.size() == canonical_keys().size());
  for (const auto& key : canonical_keys()) {
    REQUIRE(users_by_key.count(key) == 1);
    CHECK(users_by_key[key].size() == 4u);
  }
}

TEST_CASE("drops are deterministic in (seed, drop index) and differ across drops") {
  const SystemConfig cfg = small_config();
  const auto a = run_drop(cfg, 3);
  const auto b = run_drop(cfg, 3);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].sinr == b[i].sinr);
    CHECK(a[i].approach == b[i].approach);
  }
  const auto c = run_drop(cfg, 4);
  bool any_diff = false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i].sinr != c[i].sinr) any_diff = true;
  CHECK(any_diff);
}

TEST_CASE("approach filter restricts the rows") {
  const SystemConfig cfg = small_config();
  RunOptions opts;
  opts.approaches = {"cf"};
  const auto rows = run_drop(cfg, 0, opts);
  CHECK(rows.size() == 8u);  // 4 users x (ul + dl)
  for (const auto& r : rows) CHECK(r.approach == "cf");

  // filtered rows are identical to the corresponding rows of a full run
  const auto full = run_drop(cfg, 0);
  for (const auto& r : rows) {
    const auto it = std::find_if(full.begin(), full.end(), [&](const SeRow& f) {
      return f.approach == r.approach && f.direction == r.direction && f.user == r.user;
    });
    REQUIRE(it != full.end());
    CHECK(it->sinr == r.sinr);
  }
}

TEST_CASE("single-user scheduling equals multi-user scheduling with one user per RB") {
  SystemConfig cfg = small_config();
  cfg.users_per_rb = 1;
  const auto rows = run_drop(cfg, 2);
  std::map<std::string, std::map<int, double>> by_key;
  for (const auto& r : rows) by_key[r.approach + "/" + r.direction][r.user] = r.sinr;
  for (int k = 0; k < cfg.num_users; ++k) {
    CHECK(by_key["su-oas/ul"][k] == doctest::Approx(by_key["mu-oas/ul"][k]).epsilon(1e-12));
    CHECK(by_key["su-oas/dl"][k] == doctest::Approx(by_key["mu-oas/dl"][k]).epsilon(1e-12));
  }
}

TEST_CASE("user-centric with all APs per user equals cell-free") {
  SystemConfig cfg = small_config();
  cfg.aps_per_user = cfg.num_aps;
  const auto rows = run_drop(cfg, 1);
  std::map<std::string, std::map<int, double>> by_key;
  for (const auto& r : rows) by_key[r.approach + "/" + r.direction][r.user] = r.sinr;
  for (int k = 0; k < cfg.num_users; ++k) {
    CHECK(by_key["uc/ul"][k] == doctest::Approx(by_key["cf/ul"][k]).epsilon(1e-12));
    CHECK(by_key["uc/dl"][k] == doctest::Approx(by_key["cf/dl"][k]).epsilon(1e-12));
  }
}

TEST_CASE("threshold selection mode runs and keeps the row inventory") {
  SystemConfig cfg = small_config();
  cfg.threshold_coeff = 2.0;
  RunOptions opts;
  opts.selection = SelectionMode::Threshold;
  const auto rows = run_drop(cfg, 0, opts);
  CHECK(rows.size() == 36u);
  for (const auto& r : rows) CHECK(std::isfinite(r.sinr));
}

TEST_CASE("experiment output is byte-identical for any worker count") {
  const SystemConfig cfg = small_config();
  RunOptions serial;
  serial.workers = 1;
  RunOptions parallel;
  parallel.workers = 3;
  const SeReport a = run_experiment(cfg, serial);
  const SeReport b = run_experiment(cfg, parallel);
  CHECK(a.rows.size() == static_cast<size_t>(cfg.drops) * 36u);
  CHECK(samples_csv(a) == samples_csv(b));
}

TEST_CASE("samples csv carries one labelled row per sample") {
  SystemConfig cfg = small_config();
  cfg.drops = 2;
  const SeReport rep = run_experiment(cfg);
  const std::string csv = samples_csv(rep);
  const size_t lines = static_cast<size_t>(std::count(csv.begin(), csv.end(), '\n'));
  CHECK(lines == rep.rows.size() + 1);
  CHECK(csv.rfind("drop,user,approach,direction,sinr,se_bps_hz\n", 0) == 0);
}

TEST_CASE("cdf csv is per-key monotone and reaches probability one") {
  SystemConfig cfg = small_config();
  cfg.drops = 3;
  const SeReport rep = run_experiment(cfg);
  const std::string csv = cdf_csv(rep);
  REQUIRE(csv.rfind("approach,direction,se,cum_prob\n", 0) == 0);

  std::map<std::string, std::pair<double, double>> last;  // key -> (se, prob)
  size_t pos = csv.find('\n') + 1;
  int data_lines = 0;
  while (pos < csv.size()) {
    const size_t end = csv.find('\n', pos);
    const std::string line = csv.substr(pos, end - pos);
    pos = end + 1;
    ++data_lines;
    size_t c1 = line.find(','), c2 = line.find(',', c1 + 1), c3 = line.find(',', c2 + 1);
    const std::string key = line.substr(0, c1) + "/" + line.substr(c1 + 1, c2 - c1 - 1);
    const double se = std::stod(line.substr(c2 + 1, c3 - c2 - 1));
    const double prob = std::stod(line.substr(c3 + 1));
    if (last.count(key)) {
      CHECK(se >= last[key].first);
      CHECK(prob > last[key].second);
    }
    last[key] = {se, prob};
  }
  CHECK(data_lines == 9 * 3 * 4);  // keys x drops x users
  for (const auto& [key, se_prob] : last) CHECK(se_prob.second == doctest::Approx(1.0));
}

TEST_CASE("summary json echoes the configuration and the percentile recipe") {
  SystemConfig cfg = small_config();
  cfg.drops = 2;
  const SeReport rep = run_experiment(cfg);
  const auto j = nlohmann::json::parse(summary_json(rep));
  CHECK(j.at("config").at("num_aps").get<int>() == 24);
  CHECK(j.at("config").at("num_users").get<int>() == 4);
  CHECK(j.at("config").at("bandwidth").get<double>() == 5e6);
  CHECK(j.at("config").at("seed").get<std::uint64_t>() == 11);
  CHECK(j.at("config").at("drops").get<int>() == 2);
  CHECK(j.at("selection_mode").get<std::string>() == "fixed");
  CHECK(j.at("percentile_method").get<std::string>().find("order statistics") !=
        std::string::npos);
  for (const auto& key : canonical_keys()) {
    const auto& s = j.at("summary").at(key);
    CHECK(s.at("count").get<int>() == 8);  // drops x users
    CHECK(s.at("p5").get<double>() <= s.at("median").get<double>());
    CHECK(s.at("median").get<double>() <= s.at("p95").get<double>());
  }
}

TEST_CASE("sweep over users-per-RB: OAS ties single-user at one user per RB") {
  SystemConfig cfg = small_config();
  cfg.drops = 20;
  const SweepResult res = sweep(cfg, "nu", {1, 2});
  REQUIRE(res.p5_curves.count("mu-oas/ul") == 1);
  CHECK(res.p5_curves.at("mu-oas/ul")[0] ==
        doctest::Approx(res.p5_curves.at("su-oas/ul")[0]).epsilon(1e-12));
  CHECK(res.p5_curves.at("mu-oas/dl")[0] ==
        doctest::Approx(res.p5_curves.at("su-oas/dl")[0]).epsilon(1e-12));
  // schemes that ignore the RB width stay flat thanks to common random numbers
  for (const std::string key : {"su-oas/ul", "su-oas/dl", "cf/ul", "cf/dl", "uc/ul", "uc/dl"}) {
    const auto& curve = res.p5_curves.at(key);
    CHECK(curve[0] == doctest::Approx(curve[1]).epsilon(1e-12));
  }
}

TEST_CASE("sweep over APs-per-user: cell-free is flat, the csv is well-formed") {
  SystemConfig cfg = small_config();
  cfg.drops = 12;
  const SweepResult res = sweep(cfg, "ms", {2, 3, 4});
  const auto& cf_ul = res.p5_curves.at("cf/ul");
  const auto& cf_dl = res.p5_curves.at("cf/dl");
  for (size_t i = 1; i < cf_ul.size(); ++i) {
    CHECK(cf_ul[i] == doctest::Approx(cf_ul[0]).epsilon(1e-12));
    CHECK(cf_dl[i] == doctest::Approx(cf_dl[0]).epsilon(1e-12));
  }
  const std::string csv = sweep_csv(res);
  CHECK(csv.rfind("axis,value,approach,direction,p5_se\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 3 * 9);
  CHECK(csv.find("ms,2,cf,ul,") != std::string::npos);
}

TEST_CASE("sweep rejects unknown axes and empty value lists") {
  const SystemConfig cfg = small_config();
  CHECK_THROWS_AS(sweep(cfg, "power", {1}), std::invalid_argument);
  CHECK_THROWS_AS(sweep(cfg, "nu", {}), std::invalid_argument);
}

TEST_CASE("bootstrap percentile interval brackets the point estimate") {
  SystemConfig cfg = small_config();
  cfg.drops = 40;
  RunOptions opts;
  opts.approaches = {"cf"};
  const SeReport rep = run_experiment(cfg, opts);
  const auto samples = se_samples(rep).at("cf/ul");
  auto g = make_stream(99, 0, 0);
  const auto [lo, hi] = bootstrap_percentile_ci(samples, 5.0, 400, 0.05, g);
  const double point = percentile(samples, 5.0);
  CHECK(lo <= point);
  CHECK(point <= hi);
  CHECK(lo < hi);

  // doubling the drop count moves the estimate by less than the interval width
  SystemConfig cfg2 = cfg;
  cfg2.drops = 80;
  const auto samples2 = se_samples(run_experiment(cfg2, opts)).at("cf/ul");
  const double point2 = percentile(samples2, 5.0);
  CHECK(std::abs(point2 - point) < (hi - lo));
}

TEST_SUITE_END();
