// SPDX-License-Identifier: Apache-2.0
//
// nfswarm - near-field analysis and channel estimation for distributed UAV arrays

#pragma once

#include <Eigen/Dense>
#include <complex>

namespace nfswarm {

using cxd = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using Vec3 = Eigen::Vector3d;

inline constexpr double kTwoPi = 2.0 * 3.141592653589793238462643383279502884;
inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline double to_db(double linear) { return 10.0 * std::log10(linear); }
inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace nfswarm
