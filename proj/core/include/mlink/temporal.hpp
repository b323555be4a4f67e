#pragma once

#include <cstddef>
#include <span>

#include "mlink/score.hpp"

namespace mlink {

struct DecayParams {
  double theta = 0.4;       ///< smoothing weight in [0, 1]
  std::size_t window = 3;   ///< T, number of snapshots aggregated

  void validate() const;
};

/// Σ_{k=1..T} θ^{T-k} · M_k over matrices ordered oldest first; the newest
/// matrix has weight θ^0 = 1 (also when θ = 0). Pairs missing from a matrix
/// contribute 0. Throws ParameterError on an empty list or mismatched tags.
ScoreMatrix decay_aggregate(std::span<const ScoreMatrix> matrices, double theta);

}  // namespace mlink
