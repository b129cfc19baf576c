#pragma once

#include "cfmimo/selection.hpp"
#include "cfmimo/types.hpp"

namespace cfmimo {

enum class Approach { Cf, Uc, SuOas, MuOas };
enum class DlVariant { MuCoherent, MuNonCoherent, Su };

struct PowerAllocation {
  VectorXd eta_ul;  // K, each in [0,1]
  MatrixXd eta_dl;  // M x K, zero for unserved pairs
};

struct SinrInputs {
  MatrixXd beta;   // M x K
  MatrixXd alpha;  // uplink-pilot estimate variance, M x K
  MatrixXd psi;    // downlink-pilot estimate variance, M x K
  PowerAllocation power;
  SelectionPlan sets;
  double noise_over_pu = 0.0;  // sigma_z^2 / p_u
  double noise_over_pd = 0.0;  // sigma_z^2 / p_d
};

// eta_ul = 1; eta_dl row-normalized so each active AP spends its full budget
// on the users it serves within one RB: eta_mk = 1 / sum_{k' in served(m)} alpha_mk'.
// served(m): CF = all users, UC = uc_user_sets[m], SU-OAS = each served user
// alone, MU-OAS = the RB group the AP was picked for.
PowerAllocation full_power_allocation(Approach approach, const SelectionPlan& sets,
                                      const MatrixXd& alpha);

// Statistics-based matched-filter combining. Serving/interfering sets follow
// the approach: CF (all APs, all users), UC (uc_ap_sets[k], all users),
// SU-OAS (per_user_aps[k], {k}), MU-OAS (rb_aps[b], rb_users[b]).
// Empty serving set yields 0.
double uplink_sinr(Approach approach, int k, const SinrInputs& in);

// OAS downlink: coherent detection with downlink-pilot estimates, its
// non-coherent counterpart, and the single-user special case.
double downlink_sinr_oas(DlVariant variant, int k, const SinrInputs& in);

// Statistics-based downlink detection for the CF and UC benchmarks.
double downlink_sinr_benchmark(Approach approach, int k, const SinrInputs& in);

// log2(1 + gamma)
double spectral_efficiency(double gamma);

}  // namespace cfmimo
