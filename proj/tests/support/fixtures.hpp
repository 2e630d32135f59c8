#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "fcsd/harness.hpp"
#include "fcsd/model.hpp"

namespace fcsd::testing {

/// Initiator at the origin with frequency f0; fog node i at (dist, 0, 0) rotated
/// onto distinct axes so positions differ, all with the same failure rates.
inline Scenario line_scenario(double f0, const std::vector<double>& freqs, double nu = 0.0,
                              double mu = 0.0, double dist = 10.0,
                              std::optional<CloudSpec> cloud = std::nullopt) {
  DroneNode self{0, {0, 0, 0}, f0, nu};
  std::vector<DroneNode> nodes;
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    const double s = (i % 2 == 0) ? dist : -dist;
    Vec3 pos = (i / 2) % 3 == 0 ? Vec3{s, 0, 0} : (i / 2) % 3 == 1 ? Vec3{0, s, 0} : Vec3{0, 0, s};
    nodes.push_back(DroneNode{static_cast<int>(i) + 1, pos, freqs[i], nu});
  }
  ChannelModel ch;
  ch.link_fail_rate = mu;
  return Scenario(self, nodes, ch, {}, {}, cloud);
}

inline Scenario random_scenario(std::uint64_t seed, int p = 10) {
  ScenarioDistribution d;
  d.p = p;
  Rng rng(seed);
  return sample_scenario(d, rng);
}

/// Normalized allocation with uniform random shares.
inline Allocation random_allocation(std::size_t p, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Allocation a;
  a.rho = u(rng);
  double sum = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    a.lambda.push_back(u(rng));
    sum += a.lambda.back();
  }
  for (double& l : a.lambda) l /= sum;
  return a;
}

inline TaskSpec task_mb(double mb) {
  TaskSpec t;
  t.data_size_bits = mb * kBitsPerMegabyte;
  return t;
}

}  // namespace fcsd::testing
