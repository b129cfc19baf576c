#include "cfmimo/propagation.hpp"

#include <cmath>

#include "cfmimo/rng.hpp"

namespace cfmimo {

double reference_loss(double f_c_mhz, double h_ap_m, double h_ue_m) {
  const double lf = std::log10(f_c_mhz);
  return 46.3 + 33.9 * lf - 13.82 * std::log10(h_ap_m) - (1.1 * lf - 0.7) * h_ue_m +
         1.56 * lf - 0.8;
}

PathLossBranch path_loss_branch(double d_km, const SystemConfig& cfg) {
  if (d_km > cfg.d1) return PathLossBranch::Far;
  if (d_km > cfg.d0) return PathLossBranch::Middle;
  return PathLossBranch::BelowD0;
}

double path_loss(double d_km, const SystemConfig& cfg) {
  const double l0 = reference_loss(cfg.f_c, cfg.h_ap, cfg.h_ue);
  switch (path_loss_branch(d_km, cfg)) {
    case PathLossBranch::Far:
      return -l0 - 35.0 * std::log10(d_km);
    case PathLossBranch::Middle:
      return -l0 - 15.0 * std::log10(cfg.d1) - 20.0 * std::log10(d_km);
    case PathLossBranch::BelowD0:
    default:
      return -l0 - 15.0 * std::log10(cfg.d1) - 20.0 * std::log10(cfg.d0);
  }
}

LargeScaleMatrix large_scale_matrix(const Topology& topo, const SystemConfig& cfg,
                                    std::mt19937_64& g) {
  const MatrixXd d = distances(topo);
  LargeScaleMatrix ls;
  ls.pathloss_db.resize(d.rows(), d.cols());
  ls.shadow_db.resize(d.rows(), d.cols());
  for (Eigen::Index j = 0; j < d.cols(); ++j)
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
      ls.pathloss_db(i, j) = path_loss(d(i, j), cfg);
      ls.shadow_db(i, j) = cfg.shadow_std * normal(g);
    }
  ls.beta = Eigen::pow(10.0, (ls.pathloss_db + ls.shadow_db).array() / 10.0);
  return ls;
}

}  // namespace cfmimo
