#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "mlink/graph.hpp"
#include "mlink/score.hpp"

namespace mlink {

/// The weighted node-similarity scorers.
enum class Metric {
  kCommonNeighbors,
  kJaccard,
  kPreferentialAttachment,
  kAdamicAdar,
  kResourceAllocation,
  kPageRank,
  kInversePathDistance,
  kClusteringProduct,
};

inline constexpr std::array<Metric, 8> kAllMetrics{
    Metric::kCommonNeighbors,    Metric::kJaccard,  Metric::kPreferentialAttachment,
    Metric::kAdamicAdar,         Metric::kResourceAllocation, Metric::kPageRank,
    Metric::kInversePathDistance, Metric::kClusteringProduct};

/// Short names: cn, jc, pa, aa, ra, pr, ipd, pcf.
std::string_view metric_name(Metric metric);
std::optional<Metric> parse_metric(std::string_view name);

struct PageRankParams {
  double damping = 0.85;
  double tolerance = 1e-10;  ///< L1 change between iterates
  std::size_t max_iterations = 1000;

  void validate() const;
};

/// How an edge weight becomes a path cost for inverse path distance.
enum class PathCost { kWeight, kInverseWeight };

struct MetricOptions {
  NeighborMode mode = NeighborMode::kUndirected;
  PathCost path_cost = PathCost::kWeight;
  PageRankParams pagerank;
  /// Logarithm base for Adamic-Adar; 0 selects the natural log.
  double adamic_adar_log_base = 0.0;
  unsigned threads = 1;
};

// Pair scorers. Each returns entries only for candidate pairs with a
// non-zero score.

/// Σ_{z∈Γ(x)∩Γ(y)} w(x,z) + w(y,z)
ScoreMatrix common_neighbors(const SnapshotGraph& g, const CandidateSet& pairs,
                             const MetricOptions& options = {});

/// Common-neighbour weight over Σ_{a∈Γ(x)} w(x,a) + Σ_{b∈Γ(y)} w(y,b); 0 if
/// both nodes are isolated.
ScoreMatrix jaccard(const SnapshotGraph& g, const CandidateSet& pairs,
                    const MetricOptions& options = {});

/// Product of weighted strengths.
ScoreMatrix preferential_attachment(const SnapshotGraph& g, const CandidateSet& pairs,
                                    const MetricOptions& options = {});

/// Σ_z (w(x,z)+w(y,z)) / log(1 + Σ_{c∈Γ(z)} w(z,c)). Common neighbours with
/// an empty Γ(z) (possible in the out and in modes) contribute 0.
ScoreMatrix adamic_adar(const SnapshotGraph& g, const CandidateSet& pairs,
                        const MetricOptions& options = {});

/// Σ_z (w(x,z)+w(y,z)) / Σ_{c∈Γ(z)} w(z,c), same convention for empty Γ(z).
ScoreMatrix resource_allocation(const SnapshotGraph& g, const CandidateSet& pairs,
                                const MetricOptions& options = {});

/// PR(x)·PR(y) with the weighted PageRank below.
ScoreMatrix pagerank_product(const SnapshotGraph& g, const CandidateSet& pairs,
                             const MetricOptions& options = {});

/// 1 / shortest weighted distance, 0 when unreachable.
ScoreMatrix inverse_path_distance(const SnapshotGraph& g, const CandidateSet& pairs,
                                  const MetricOptions& options = {});

/// cc(x)·cc(y) with the local clustering coefficient of the unweighted skeleton.
ScoreMatrix clustering_product(const SnapshotGraph& g, const CandidateSet& pairs,
                               const MetricOptions& options = {});

/// Weighted PageRank. Mass flows along Γ(·) in proportion to edge weight over
/// the sender's outgoing weight L(k); teleport is proportional to each node's
/// total incident weight (uniform on an edgeless graph); dangling mass is
/// spread uniformly. Scores sum to 1.
/// Throws ConvergenceError after max_iterations.
std::vector<double> weighted_pagerank(const SnapshotGraph& g, const PageRankParams& params,
                                      NeighborMode mode = NeighborMode::kUndirected);

/// 2·T(v) / (d(v)(d(v)-1)) on the unweighted skeleton; 0 when d(v) <= 1.
std::vector<double> clustering_coefficients(const SnapshotGraph& g,
                                            NeighborMode mode = NeighborMode::kUndirected);

ScoreMatrix score(Metric metric, const SnapshotGraph& g, const CandidateSet& pairs,
                  const MetricOptions& options = {}, Provenance provenance = {});

}  // namespace mlink
