#include "cfmimo/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "cfmimo/estimation.hpp"
#include "cfmimo/propagation.hpp"
#include "cfmimo/rng.hpp"
#include "cfmimo/selection.hpp"
#include "cfmimo/stats.hpp"
#include "cfmimo/topology.hpp"

namespace cfmimo {

namespace {

constexpr const char* kApproachNames[] = {"cf", "uc", "su-oas", "mu-oas"};
constexpr Approach kApproaches[] = {Approach::Cf, Approach::Uc, Approach::SuOas,
                                    Approach::MuOas};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool enabled(const RunOptions& opts, const char* name) {
  if (opts.approaches.empty()) return true;
  return std::find(opts.approaches.begin(), opts.approaches.end(), name) !=
         opts.approaches.end();
}

std::vector<int> candidate_aps(const MatrixXd& beta, int k, const SystemConfig& cfg,
                               SelectionMode mode) {
  if (mode == SelectionMode::FixedCount)
    return nearest_aps_fixed(beta.col(k),
                             std::min(cfg.aps_per_user, static_cast<int>(beta.rows())));
  return nearest_aps_threshold(beta.col(k), cfg.threshold_coeff);
}

SelectionPlan build_selection(Approach a, const MatrixXd& beta, const SystemConfig& cfg,
                              SelectionMode mode) {
  const int m_total = static_cast<int>(beta.rows());
  const int k_total = static_cast<int>(beta.cols());
  SelectionPlan s;
  switch (a) {
    case Approach::Cf:
      break;
    case Approach::Uc: {
      if (mode == SelectionMode::FixedCount) {
        auto [user_sets, ap_sets] =
            uc_association_user_side(beta, std::min(cfg.aps_per_user, m_total));
        s.uc_user_sets = std::move(user_sets);
        s.uc_ap_sets = std::move(ap_sets);
      } else {
        s.uc_ap_sets.resize(static_cast<size_t>(k_total));
        s.uc_user_sets.assign(static_cast<size_t>(m_total), {});
        for (int k = 0; k < k_total; ++k) {
          s.uc_ap_sets[static_cast<size_t>(k)] = candidate_aps(beta, k, cfg, mode);
          for (int m : s.uc_ap_sets[static_cast<size_t>(k)])
            s.uc_user_sets[static_cast<size_t>(m)].push_back(k);
        }
      }
      break;
    }
    case Approach::SuOas: {
      s.per_user_aps.resize(static_cast<size_t>(k_total));
      for (int k = 0; k < k_total; ++k)
        s.per_user_aps[static_cast<size_t>(k)] = candidate_aps(beta, k, cfg, mode);
      s.rb_users = assign_users_single(k_total, k_total);
      s.user_rb.assign(static_cast<size_t>(k_total), -1);
      s.rb_aps.resize(s.rb_users.size());
      for (size_t b = 0; b < s.rb_users.size(); ++b) {
        const int k = s.rb_users[b][0];
        s.rb_aps[b] = s.per_user_aps[static_cast<size_t>(k)];
        if (s.user_rb[static_cast<size_t>(k)] < 0)
          s.user_rb[static_cast<size_t>(k)] = static_cast<int>(b);
      }
      break;
    }
    case Approach::MuOas: {
      s.rb_users = assign_users_multi(k_total, std::min(cfg.users_per_rb, k_total));
      s.user_rb.assign(static_cast<size_t>(k_total), -1);
      s.rb_aps.resize(s.rb_users.size());
      for (size_t b = 0; b < s.rb_users.size(); ++b) {
        if (mode == SelectionMode::FixedCount) {
          const int budget = std::min(
              static_cast<int>(s.rb_users[b].size()) * cfg.aps_per_user, m_total);
          s.rb_aps[b] = round_robin_aps(beta, s.rb_users[b], budget);
        } else {
          // union of the group's threshold sets, first-seen order
          std::vector<char> seen(static_cast<size_t>(m_total), 0);
          for (int k : s.rb_users[b])
            for (int m : candidate_aps(beta, k, cfg, mode))
              if (!seen[static_cast<size_t>(m)]) {
                seen[static_cast<size_t>(m)] = 1;
                s.rb_aps[b].push_back(m);
              }
        }
        for (int k : s.rb_users[b]) s.user_rb[static_cast<size_t>(k)] = static_cast<int>(b);
      }
      break;
    }
  }
  return s;
}

}  // namespace

std::vector<SeRow> run_drop(const SystemConfig& config, int drop_index,
                            const RunOptions& opts) {
  SystemConfig cfg = config;
  cfg.validate();
  const Topology topo = drop_topology(cfg, drop_index);
  auto shadow_stream = make_stream(cfg.seed, static_cast<std::uint64_t>(drop_index), 1);
  const LargeScaleMatrix ls = large_scale_matrix(topo, cfg, shadow_stream);
  const double sigma2 = noise_power(cfg);

  SinrInputs base;
  base.beta = ls.beta;
  base.alpha = mmse_gain_matrix(ls.beta, cfg.p_u, sigma2);
  base.psi = mmse_gain_matrix(ls.beta, cfg.p_d, sigma2);
  base.noise_over_pu = sigma2 / cfg.p_u;
  base.noise_over_pd = sigma2 / cfg.p_d;

  std::vector<SeRow> rows;
  for (int a = 0; a < 4; ++a) {
    if (!enabled(opts, kApproachNames[a])) continue;
    const Approach approach = kApproaches[a];
    SinrInputs in = base;
    in.sets = build_selection(approach, ls.beta, cfg, opts.selection);
    in.power = full_power_allocation(approach, in.sets, in.alpha);

    for (int k = 0; k < cfg.num_users; ++k) {
      const double g = uplink_sinr(approach, k, in);
      rows.push_back({drop_index, k, kApproachNames[a], "ul", g, spectral_efficiency(g)});
    }
    for (int k = 0; k < cfg.num_users; ++k) {
      double g = 0.0;
      switch (approach) {
        case Approach::Cf:
        case Approach::Uc:
          g = downlink_sinr_benchmark(approach, k, in);
          break;
        case Approach::SuOas:
          g = downlink_sinr_oas(DlVariant::Su, k, in);
          break;
        case Approach::MuOas:
          g = downlink_sinr_oas(DlVariant::MuCoherent, k, in);
          break;
      }
      rows.push_back({drop_index, k, kApproachNames[a], "dl", g, spectral_efficiency(g)});
    }
    if (approach == Approach::MuOas) {
      for (int k = 0; k < cfg.num_users; ++k) {
        const double g = downlink_sinr_oas(DlVariant::MuNonCoherent, k, in);
        rows.push_back({drop_index, k, "mu-oas-noncoh", "dl", g, spectral_efficiency(g)});
      }
    }
  }
  return rows;
}

SeReport run_experiment(const SystemConfig& config, const RunOptions& opts) {
  SystemConfig cfg = config;
  cfg.validate();
  std::vector<std::vector<SeRow>> per_drop(static_cast<size_t>(cfg.drops));
  const int workers = std::max(1, opts.workers);
  if (workers == 1) {
    for (int d = 0; d < cfg.drops; ++d) per_drop[static_cast<size_t>(d)] = run_drop(cfg, d, opts);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          for (int d = w; d < cfg.drops; d += workers)
            per_drop[static_cast<size_t>(d)] = run_drop(cfg, d, opts);
        } catch (...) {
          errors[static_cast<size_t>(w)] = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  SeReport report;
  report.config = cfg;
  report.selection = opts.selection;
  for (auto& rows : per_drop)
    report.rows.insert(report.rows.end(), rows.begin(), rows.end());
  return report;
}

SweepResult sweep(const SystemConfig& config, const std::string& axis,
                  const std::vector<int>& values, const RunOptions& opts) {
  if (axis != "nu" && axis != "ms")
    throw std::invalid_argument("sweep: axis must be 'nu' or 'ms'");
  if (values.empty()) throw std::invalid_argument("sweep: no axis values");
  SweepResult result;
  result.axis = axis;
  result.values = values;
  for (int v : values) {
    SystemConfig cfg = config;
    if (axis == "nu")
      cfg.users_per_rb = v;
    else
      cfg.aps_per_user = v;
    cfg.validate();
    const SeReport report = run_experiment(cfg, opts);
    auto samples = se_samples(report);
    for (const auto& key : canonical_keys()) {
      auto it = samples.find(key);
      if (it == samples.end()) continue;
      result.p5_curves[key].push_back(percentile(it->second, 5.0));
    }
  }
  return result;
}

const std::vector<std::string>& canonical_keys() {
  static const std::vector<std::string> keys = {
      "cf/ul",     "cf/dl",     "uc/ul",     "uc/dl",          "su-oas/ul",
      "su-oas/dl", "mu-oas/ul", "mu-oas/dl", "mu-oas-noncoh/dl"};
  return keys;
}

std::map<std::string, std::vector<double>> se_samples(const SeReport& report) {
  std::map<std::string, std::vector<double>> out;
  for (const auto& row : report.rows) out[row.approach + "/" + row.direction].push_back(row.se);
  return out;
}

std::string samples_csv(const SeReport& report) {
  std::string out = "drop,user,approach,direction,sinr,se_bps_hz\n";
  for (const auto& r : report.rows) {
    out += std::to_string(r.drop) + ',' + std::to_string(r.user) + ',' + r.approach + ',' +
           r.direction + ',' + fmt(r.sinr) + ',' + fmt(r.se) + '\n';
  }
  return out;
}

std::string cdf_csv(const SeReport& report) {
  auto samples = se_samples(report);
  std::string out = "approach,direction,se,cum_prob\n";
  for (const auto& key : canonical_keys()) {
    auto it = samples.find(key);
    if (it == samples.end()) continue;
    const auto slash = key.find('/');
    const std::string approach = key.substr(0, slash);
    const std::string direction = key.substr(slash + 1);
    for (const auto& [se, prob] : ecdf(it->second))
      out += approach + ',' + direction + ',' + fmt(se) + ',' + fmt(prob) + '\n';
  }
  return out;
}

std::string summary_json(const SeReport& report) {
  nlohmann::ordered_json j;
  const SystemConfig& c = report.config;
  j["config"] = {{"num_aps", c.num_aps},
                 {"num_users", c.num_users},
                 {"radius", c.radius},
                 {"p_d", c.p_d},
                 {"p_u", c.p_u},
                 {"noise_density", c.noise_density},
                 {"noise_figure", c.noise_figure},
                 {"bandwidth", c.bandwidth},
                 {"shadow_std", c.shadow_std},
                 {"f_c", c.f_c},
                 {"h_ap", c.h_ap},
                 {"h_ue", c.h_ue},
                 {"d0", c.d0},
                 {"d1", c.d1},
                 {"users_per_rb", c.users_per_rb},
                 {"aps_per_user", c.aps_per_user},
                 {"threshold_coeff", c.threshold_coeff},
                 {"drops", c.drops},
                 {"seed", c.seed}};
  j["selection_mode"] =
      report.selection == SelectionMode::FixedCount ? "fixed" : "threshold";
  j["percentile_method"] = "linear interpolation between order statistics";
  nlohmann::ordered_json sum;
  auto samples = se_samples(report);
  for (const auto& key : canonical_keys()) {
    auto it = samples.find(key);
    if (it == samples.end()) continue;
    const SummaryStats s = summarize(it->second);
    sum[key] = {{"count", s.count},
                {"mean", s.mean},
                {"median", s.median},
                {"p5", s.p5},
                {"p95", s.p95}};
  }
  j["summary"] = std::move(sum);
  return j.dump(2) + "\n";
}

std::string sweep_csv(const SweepResult& result) {
  std::string out = "axis,value,approach,direction,p5_se\n";
  for (size_t i = 0; i < result.values.size(); ++i) {
    for (const auto& key : canonical_keys()) {
      auto it = result.p5_curves.find(key);
      if (it == result.p5_curves.end()) continue;
      const auto slash = key.find('/');
      out += result.axis + ',' + std::to_string(result.values[i]) + ',' +
             key.substr(0, slash) + ',' + key.substr(slash + 1) + ',' +
             fmt(it->second[i]) + '\n';
    }
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace cfmimo
