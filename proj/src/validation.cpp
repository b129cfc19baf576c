#include "cfmimo/validation.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "cfmimo/estimation.hpp"
#include "cfmimo/rng.hpp"
#include "cfmimo/selection.hpp"

namespace cfmimo {

namespace {

constexpr int kAps = 8;
constexpr int kUsers = 4;
constexpr int kUsersPerRb = 2;
constexpr int kApsPerUser = 4;

double rel(double value, double pred) {
  return pred > 0.0 ? std::abs(value - pred) / pred : std::abs(value);
}

// Gains spread over ~3/4 of a decade. Wider spreads starve the weakest
// links and blow up the variance of the simulated SINR estimate (its error
// is bounded below by the per-realization spread of the combining gain, not
// by the symbol count), which would drown the comparison the suite makes.
MatrixXd draw_gains(int m_total, int k_total, std::mt19937_64& g) {
  MatrixXd beta(m_total, k_total);
  for (int k = 0; k < k_total; ++k)
    for (int m = 0; m < m_total; ++m) beta(m, k) = std::pow(10.0, -0.75 * uniform01(g));
  return beta;
}

SinrInputs shared_inputs(const MatrixXd& beta, double noise_over_pu, double noise_over_pd) {
  SinrInputs in;
  in.beta = beta;
  in.alpha = mmse_gain_matrix(beta, 1.0, noise_over_pu);
  in.psi = mmse_gain_matrix(beta, 1.0, noise_over_pd);
  in.noise_over_pu = noise_over_pu;
  in.noise_over_pd = noise_over_pd;
  return in;
}

}  // namespace

ValidationInstance make_validation_instance(double noise_over_pu, double noise_over_pd,
                                            std::uint64_t seed) {
  auto g = make_stream(seed, 0, 7001);
  const MatrixXd beta = draw_gains(kAps, kUsers, g);
  const SinrInputs base = shared_inputs(beta, noise_over_pu, noise_over_pd);
  ValidationInstance inst{base, base, base, base};

  inst.cf.power = full_power_allocation(Approach::Cf, inst.cf.sets, base.alpha);

  auto uc_sets = uc_association_user_side(beta, kApsPerUser);
  inst.uc.sets.uc_user_sets = std::move(uc_sets.first);
  inst.uc.sets.uc_ap_sets = std::move(uc_sets.second);
  inst.uc.power = full_power_allocation(Approach::Uc, inst.uc.sets, base.alpha);

  SelectionPlan su;
  su.rb_users = assign_users_single(kUsers, kUsers);
  su.user_rb.resize(kUsers);
  for (int k = 0; k < kUsers; ++k) {
    su.per_user_aps.push_back(nearest_aps_fixed(beta.col(k), kApsPerUser));
    su.user_rb[static_cast<size_t>(k)] = k;  // one RB per user, in order
  }
  su.rb_aps = su.per_user_aps;
  inst.su.sets = std::move(su);
  inst.su.power = full_power_allocation(Approach::SuOas, inst.su.sets, base.alpha);

  SelectionPlan mu;
  mu.rb_users = assign_users_multi(kUsers, kUsersPerRb);
  mu.user_rb.assign(kUsers, -1);
  for (size_t b = 0; b < mu.rb_users.size(); ++b) {
    const auto& group = mu.rb_users[b];
    const int budget = std::min(kAps, static_cast<int>(group.size()) * kApsPerUser);
    mu.rb_aps.push_back(round_robin_aps(beta, group, budget));
    for (int k : group) mu.user_rb[static_cast<size_t>(k)] = static_cast<int>(b);
  }
  inst.mu.sets = std::move(mu);
  inst.mu.power = full_power_allocation(Approach::MuOas, inst.mu.sets, base.alpha);

  return inst;
}

ValidationReport run_validation_suite(long num_symbols, int num_realizations,
                                      std::uint64_t seed) {
  ValidationReport rep;
  const ValidationInstance inst = make_validation_instance(0.1, 0.1, seed);

  struct Form {
    const char* name;
    const SinrInputs& in;
    bool uplink;
    Approach approach;
    DlOracleVariant variant;
  };
  const Form forms[] = {
      {"cf/ul", inst.cf, true, Approach::Cf, DlOracleVariant::Cf},
      {"uc/ul", inst.uc, true, Approach::Uc, DlOracleVariant::Uc},
      {"su-oas/ul", inst.su, true, Approach::SuOas, DlOracleVariant::Su},
      {"mu-oas/ul", inst.mu, true, Approach::MuOas, DlOracleVariant::Coherent},
      {"cf/dl", inst.cf, false, Approach::Cf, DlOracleVariant::Cf},
      {"uc/dl", inst.uc, false, Approach::Uc, DlOracleVariant::Uc},
      {"su-oas/dl", inst.su, false, Approach::SuOas, DlOracleVariant::Su},
      {"mu-oas/dl", inst.mu, false, Approach::MuOas, DlOracleVariant::Coherent},
      {"mu-oas-noncoh/dl", inst.mu, false, Approach::MuOas, DlOracleVariant::NonCoherent},
  };

  int lane = 100;
  for (const Form& f : forms) {
    auto g = make_stream(seed, 1, lane++);
    const OracleReport r =
        f.uplink ? simulate_uplink_rb(f.in, f.approach, num_symbols, num_realizations, g)
                 : simulate_downlink_rb(f.in, f.variant, num_symbols, num_realizations, g);
    for (size_t i = 0; i < r.users.size(); ++i) {
      ValidationRow row;
      row.form = f.name;
      row.user = r.users[i];
      row.closed_form = r.closed_form_sinr(static_cast<Eigen::Index>(i));
      row.empirical = r.empirical_sinr(static_cast<Eigen::Index>(i));
      row.reference =
          f.uplink ? row.closed_form
                   : downlink_sinr_moment_reference(f.variant, r.users[i], f.in);
      row.rel_printed = rel(row.empirical, row.closed_form);
      row.rel_reference = rel(row.empirical, row.reference);
      row.empirical_se = r.empirical_se(static_cast<Eigen::Index>(i));
      rep.rows.push_back(std::move(row));
    }
  }

  // Term probes run on an instance whose uplink and downlink estimate
  // variances differ, which separates terms that coincide when they are
  // equal. Term statistics converge slower than the SINR ratio, so the
  // realization count gets a floor.
  const ValidationInstance pi = make_validation_instance(0.2, 0.05, seed + 1);
  const int probe_reals = std::max(num_realizations, 20000);
  struct ProbeSpec {
    const char* tag;
    const SinrInputs& in;
    bool uplink;
    Approach approach;
    DlOracleVariant variant;
  };
  const ProbeSpec specs[] = {
      {"mu-oas/ul", pi.mu, true, Approach::MuOas, DlOracleVariant::Coherent},
      {"mu-oas/dl", pi.mu, false, Approach::MuOas, DlOracleVariant::Coherent},
      {"cf/dl", pi.cf, false, Approach::Cf, DlOracleVariant::Cf},
      {"uc/dl", pi.uc, false, Approach::Uc, DlOracleVariant::Uc},
  };
  for (const ProbeSpec& s : specs) {
    auto g = make_stream(seed, 2, lane++);
    auto probes = s.uplink
                      ? probe_uplink_terms(s.in, s.approach, 0, probe_reals, g)
                      : probe_downlink_terms(s.in, s.variant, 0, probe_reals, g);
    for (TermProbe& p : probes) {
      p.name = std::string(s.tag) + ":" + p.name;
      rep.terms.push_back(std::move(p));
    }
  }
  return rep;
}

std::vector<WaveformCheck> run_waveform_checks(std::uint64_t seed) {
  // One shared RB: six APs, two users, so every detection mode is exercised
  // on a multi-user group without multiple RBs.
  auto g0 = make_stream(seed, 0, 7101);
  const MatrixXd beta = draw_gains(6, 2, g0);

  SinrInputs mu = shared_inputs(beta, 0.2, 0.2);
  mu.sets.rb_users = {{0, 1}};
  mu.sets.user_rb = {0, 0};
  mu.sets.rb_aps = {round_robin_aps(beta, {0, 1}, 4)};
  mu.power = full_power_allocation(Approach::MuOas, mu.sets, mu.alpha);

  SinrInputs cf = shared_inputs(beta, 0.2, 0.2);
  cf.power = full_power_allocation(Approach::Cf, cf.sets, cf.alpha);

  auto one = [&](const char* name, const SinrInputs& in, DlOracleVariant variant,
                 const WaveformParams& wp, int lane) {
    auto g_flat = make_stream(seed, 1, lane);
    auto g_wave = make_stream(seed, 2, lane);
    // Both estimates are limited by channel draws, not symbols. One waveform
    // realization spans the whole band and is worth several independent flat
    // draws (the frequency response only has num_taps degrees of freedom), so
    // the flat side gets 4x the realizations and fewer symbols per draw.
    const OracleReport flat =
        simulate_downlink_rb(in, variant, 800, 4 * wp.num_realizations, g_flat);
    const OracleReport wave = simulate_waveform_rb(in, variant, wp, g_wave);
    WaveformCheck c;
    c.name = name;
    c.flat_empirical = flat.empirical_sinr(0);
    c.waveform_empirical = wave.empirical_sinr(0);
    c.closed_form = flat.closed_form_sinr(0);
    for (Eigen::Index i = 0; i < flat.empirical_sinr.size(); ++i)
      c.rel_cross = std::max(c.rel_cross, rel(wave.empirical_sinr(i), flat.empirical_sinr(i)));
    return c;
  };

  WaveformParams wp;
  wp.num_realizations = 2000;
  std::vector<WaveformCheck> checks;
  checks.push_back(one("cf-adequate-cp", cf, DlOracleVariant::Cf, wp, 30));
  checks.push_back(one("mu-coherent-adequate-cp", mu, DlOracleVariant::Coherent, wp, 31));

  WaveformParams short_cp = wp;
  short_cp.num_taps = 16;
  short_cp.cp_length = 2;
  short_cp.allow_insufficient_cp = true;
  checks.push_back(one("mu-coherent-short-cp", mu, DlOracleVariant::Coherent, short_cp, 32));
  return checks;
}

}  // namespace cfmimo
