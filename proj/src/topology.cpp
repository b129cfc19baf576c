#include "cfmimo/topology.hpp"

#include <cmath>
#include <numbers>

#include "cfmimo/rng.hpp"

namespace cfmimo {

namespace {
constexpr std::uint64_t kTopologyLane = 0;

MatrixXd uniform_disc(int n, double radius, std::mt19937_64& g) {
  MatrixXd xy(n, 2);
  for (int i = 0; i < n; ++i) {
    const double r = radius * std::sqrt(uniform01(g));
    const double th = 2.0 * std::numbers::pi * uniform01(g);
    xy(i, 0) = r * std::cos(th);
    xy(i, 1) = r * std::sin(th);
  }
  return xy;
}
}  // namespace

Topology drop_topology(const SystemConfig& cfg, int drop_index) {
  auto g = make_stream(cfg.seed, static_cast<std::uint64_t>(drop_index), kTopologyLane);
  Topology topo;
  topo.ap_xy = uniform_disc(cfg.num_aps, cfg.radius, g);
  topo.user_xy = uniform_disc(cfg.num_users, cfg.radius, g);
  return topo;
}

MatrixXd distances(const Topology& topo) {
  const Eigen::Index m = topo.ap_xy.rows(), k = topo.user_xy.rows();
  MatrixXd d(m, k);
  for (Eigen::Index j = 0; j < k; ++j)
    d.col(j) = (topo.ap_xy.rowwise() - topo.user_xy.row(j)).rowwise().norm();
  return d;
}

}  // namespace cfmimo
