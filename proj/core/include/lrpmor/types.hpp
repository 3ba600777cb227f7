#pragma once

#include <Eigen/Dense>
#include <complex>

namespace lrpmor {

using Index = Eigen::Index;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Complex = std::complex<double>;

} // namespace lrpmor
