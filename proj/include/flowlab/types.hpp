#pragma once

#include <Eigen/Core>

namespace flowlab {

// Upper bound on the number of principal curvatures. Fixed-capacity Eigen
// storage keeps the hot evaluation paths free of heap allocation.
inline constexpr int kMaxDim = 12;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim + 1, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor,
                          kMaxDim + 1, kMaxDim + 1>;

}  // namespace flowlab
