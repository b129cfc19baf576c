#pragma once

#include <Eigen/Dense>
#include <complex>

namespace cfmimo {

using Eigen::ArrayXd;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

using cd = std::complex<double>;

}  // namespace cfmimo
