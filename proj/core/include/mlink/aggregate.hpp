#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "mlink/graph.hpp"
#include "mlink/metrics.hpp"
#include "mlink/score.hpp"

namespace mlink {

/// Total Borda points per pair. Points are kept in half units so tied
/// positions can share their mean exactly.
struct BordaTally {
  std::vector<PairKey> keys;               ///< sorted
  std::vector<std::int64_t> half_points;   ///< 2·B(i), aligned with keys

  double points(PairKey key) const;
  std::int64_t half_points_of(PairKey key) const;
};

struct BordaResult {
  RankedList ranked;  ///< sorted by B(i) desc, ties by ascending key; scores = B(i)
  BordaTally tally;
};

/// Borda count over full lists sharing one key set. In each list an item
/// earns the number of items ranked strictly below it; items with equal
/// scores in a list share the mean of their positions' counts.
/// Throws ParameterError on an empty input or differing key sets.
BordaResult borda(std::span<const RankedList> lists);

/// Same tally for matrices ranked over `candidates` (absent pairs score 0).
/// Only the non-zero entries are sorted when no score is negative.
BordaResult borda(std::span<const ScoreMatrix> matrices, const CandidateSet& candidates);

/// Entry-wise mean over layers (missing = 0). Pairs missing everywhere stay
/// missing.
ScoreMatrix average_aggregate(std::span<const ScoreMatrix> per_layer);

/// -Σ_α p_α ln p_α with p_α = X^α / Σ X; zero terms contribute 0 and the
/// result is 0 when Σ X = 0.
ScoreMatrix entropy_aggregate(std::span<const ScoreMatrix> per_layer);

/// CN, JC, PA or AA on the binary graph whose neighbourhoods are the union
/// of every layer's neighbourhoods over the window.
ScoreMatrix multilayer_core_metric(const MultiplexSeries& series, Window window, Metric metric,
                                   const CandidateSet& candidates,
                                   const MetricOptions& options = {});

/// `src,dst,borda_score,final_rank` (rank is 1-based).
void write_tally(std::ostream& out, const BordaResult& result, const LabelDictionary& labels);

}  // namespace mlink
