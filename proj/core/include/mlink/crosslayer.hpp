#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "mlink/graph.hpp"
#include "mlink/score.hpp"

namespace mlink {

/// Weight given to reweighted edges whose computed weight is exactly zero,
/// so they stay in the graph.
inline constexpr double kReweightFloor = 1e-6;

/// Conditional overlap of one predictor layer with the target layer.
struct LayerLikelihood {
  LayerId other = 0;
  double likelihood = 0.0;       ///< overlap_count / other_count, 0 if other_count == 0
  std::size_t overlap_count = 0;  ///< |U_target ∩ U_other|
  std::size_t other_count = 0;    ///< |U_other|
};

struct LayerLikelihoods {
  LayerId target = 0;
  Window window;
  std::vector<LayerLikelihood> others;  ///< every layer except the target, ascending
};

/// Distinct directed (src, dst) pairs seen in `layer` anywhere in the window,
/// packed as (src << 32 | dst) and sorted.
std::vector<std::uint64_t> distinct_pairs(const MultiplexSeries& series, LayerId layer,
                                          Window window);

inline std::uint64_t pack_pair(NodeId src, NodeId dst) {
  return (std::uint64_t{src} << 32) | dst;
}

LayerLikelihood layer_likelihood(const MultiplexSeries& series, LayerId target, LayerId other,
                                 Window window);
LayerLikelihoods layer_likelihoods(const MultiplexSeries& series, LayerId target, Window window);

/// Mean unweighted out-degree of x in the target layer over the window.
double node_rate(const MultiplexSeries& series, LayerId target, NodeId x, Window window);
std::vector<double> node_rates(const MultiplexSeries& series, LayerId target, Window window);

/// Layer likelihoods, node rates and per-layer pair sets for one window.
/// Edge weights follow w_e = rate(src) + Σ_{i≠target} w_i · linkExist(e, i)
/// with linkExist(e, i) = 1 iff e appears in layer i within the window.
class CrossLayerModel {
 public:
  CrossLayerModel(const MultiplexSeries& series, LayerId target, Window window);

  const LayerLikelihoods& likelihoods() const noexcept { return likelihoods_; }
  std::span<const double> rates() const noexcept { return rates_; }
  bool link_exists(NodeId src, NodeId dst, LayerId layer) const;

  /// Σ_{i≠target} w_i · linkExist((src, dst), i)
  double cross_layer_term(NodeId src, NodeId dst) const;

  /// rate(src) + cross_layer_term, replaced by kReweightFloor when zero.
  double edge_weight(NodeId src, NodeId dst) const;

  /// Same edge set as `edges`, weights replaced by edge_weight().
  SnapshotGraph reweight(const SnapshotGraph& edges) const;

  /// Edge weight read as a score for any unordered pair: the larger of the
  /// two orientations (kUndirected) or src -> dst only (kOut).
  double pair_score(PairKey pair, NeighborMode mode) const;

 private:
  LayerLikelihoods likelihoods_;
  std::vector<double> rates_;
  std::vector<std::vector<std::uint64_t>> pairs_;  // per layer
};

/// Target-layer window union with every edge reweighted.
SnapshotGraph reweight_target_layer(const MultiplexSeries& series, LayerId target, Window window);

/// Target-layer edges of snapshot t weighted with the model of `window`.
SnapshotGraph reweight_snapshot(const MultiplexSeries& series, LayerId target, SnapshotId t,
                                Window window);

/// Cross-layer edge weights used directly as pair scores for the candidates.
ScoreMatrix likelihood_scores(const CrossLayerModel& model, const CandidateSet& candidates,
                              NeighborMode mode = NeighborMode::kUndirected);

/// `target_layer,other_layer,likelihood,overlap_count,other_count`
void write_likelihoods(std::ostream& out, const LayerLikelihoods& likelihoods);

}  // namespace mlink
