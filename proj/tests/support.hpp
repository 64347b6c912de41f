#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "vincl/space.hpp"

namespace vincl_test {

// Values below were computed outside the library (numpy, closed forms) and
// frozen here. Do not regenerate them from vincl itself.
namespace oracle {
// Example 4.7 at rho = 0.35, zero errors, S = T = identity: the iteration map
// is u -> (K + rho N)^{-1} (K - rho (P + Q)) u, a scaled rotation.
inline constexpr double iteration_map_norm_4_7 = 0.9158554186884023;
inline constexpr double resolvent_norm_4_7 = 0.33394910435310937;   // ||(K + rho N)^{-1}||
inline constexpr double theta_4_7 = 0.2903215796870934;
inline constexpr double radicand_4_7 = 0.75227125;
inline constexpr double residual_4_7_unit_offset = 0.911195795522443;  // ||(P+Q+N) e1||
inline constexpr double resolvent_norm_3_2 = 0.1353708742917606;     // rho = 1
inline constexpr double audit_bound_3_2 = 0.13793103448275862;       // 1 / (4 + 3.25)
inline constexpr double zero_in_t_plus_n[2] = {-0.7692307692307693, 0.5128205128205129};
inline constexpr double scaled_n_lambda2[2] = {0.10273972602739725, 0.273972602739726};
inline constexpr double theta_h_ab = 0.852332245714006;
}  // namespace oracle

inline vincl::Vector random_vector(std::mt19937_64& rng, std::size_t dim, double scale = 10.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> c(dim);
  for (auto& x : c) x = u(rng);
  return vincl::Vector(std::move(c));
}

}  // namespace vincl_test
