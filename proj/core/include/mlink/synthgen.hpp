#pragma once

#include <cstddef>
#include <cstdint>

#include "mlink/graph.hpp"

namespace mlink {

/// Parameters of the coevolving multiplex generator.
struct GenParams {
  std::size_t nodes = 500;
  std::size_t layers = 2;
  std::size_t snapshots = 10;
  std::size_t edges_per_snapshot = 100;  ///< edge draws per layer per snapshot
  double gamma = 1.0;                    ///< attachment exponent, >= 0
  double rho = 0.3;                      ///< cross-layer copy probability
  std::size_t memory = 1;                ///< earlier snapshots counted in degree, 0 = all
  std::uint64_t seed = 1;

  void validate() const;
};

/// Each snapshot t and layer l draws `edges_per_snapshot` edges. With
/// probability rho (and t > 0, layers > 1) a draw copies a uniformly chosen
/// distinct edge of snapshot t-1 from a uniformly chosen other layer;
/// otherwise both endpoints are drawn with probability proportional to
/// (degree + 1)^gamma, degree being the node's degree in l over the current
/// snapshot and the `memory` snapshots before it (all history when 0).
/// Weights are Poisson(2) + 1. Repeated draws of a pair within a snapshot
/// merge by summing weights. Node labels are "0".."nodes-1".
MultiplexSeries generate(const GenParams& params);

}  // namespace mlink
