#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mlink/aggregate.hpp"
#include "mlink/crosslayer.hpp"
#include "mlink/graph.hpp"
#include "mlink/metrics.hpp"
#include "mlink/score.hpp"
#include "mlink/temporal.hpp"

namespace mlink {

/// Predictor variants. The first nine are the framework and its baselines;
/// kOracle and kRandom are reference scorers for checking the evaluation.
enum class Variant {
  kHybrid,              ///< reweight each snapshot, score, decay, Borda
  kLikelihoodRank,      ///< reweight the window union, score, Borda
  kDecayRank,           ///< raw snapshots, score, decay, Borda
  kLikelihoodOnly,      ///< reweighting weights used directly as scores
  kRankOnly,            ///< raw window union, score, Borda
  kSingleMetric,        ///< one metric on the binary target history 0..t-1
  kAverageAggregation,  ///< per-layer metrics averaged, then Borda
  kEntropyAggregation,  ///< per-layer metrics entropy-combined, then Borda
  kMultilayerMetric,    ///< one metric on the union-of-layers history 0..t-1
  kOracle,              ///< 1 for pairs linked in the target layer at t
  kRandom,              ///< seeded uniform noise
};

enum class CandidatePolicy { kAllNonEdges, kActiveNodesOnly, kExplicit };

/// Which window the likelihood model of a reweighted snapshot is built on.
enum class ReweightScope {
  kWindow,    ///< one model over the whole prediction window
  kSnapshot,  ///< a separate model per snapshot
};

struct PredictorSpec {
  Variant variant = Variant::kHybrid;
  std::vector<Metric> metrics{kAllMetrics.begin(), kAllMetrics.end()};
  Metric metric = Metric::kCommonNeighbors;  ///< for single / multilayer variants
  DecayParams decay;
  CandidatePolicy policy = CandidatePolicy::kActiveNodesOnly;
  std::vector<PairKey> explicit_pairs;
  std::size_t pair_budget = 20'000'000;
  ReweightScope reweight_scope = ReweightScope::kWindow;
  MetricOptions metric_options;
  std::uint64_t seed = 0;

  void validate() const;

  /// "hybrid", "likelihood+rank", ..., "single:cn", "multilayer:aa".
  std::string name() const;
  static PredictorSpec from_name(std::string_view name);
  static PredictorSpec from_name(std::string_view name, const PredictorSpec& base);
};

/// Every row of the comparison table: five framework variants, eight single
/// metrics, two cross-layer aggregations and four multilayer metrics.
std::vector<PredictorSpec> comparison_rows(const PredictorSpec& base = {});

struct Prediction {
  Window window;
  CandidateSet candidates;
  RankedList ranked;
  ScoreMatrix scores;
  std::optional<BordaResult> borda;
  std::optional<LayerLikelihoods> likelihoods;
};

/// Window (t-T .. t-1). Throws ParameterError when it would start before
/// snapshot 0 or end past the series.
Window prediction_window(const MultiplexSeries& series, SnapshotId t, std::size_t T);

/// all-non-edges: every unordered pair minus pairs linked (either direction)
/// in the target-layer window union. active-nodes-only: the same restricted to
/// nodes with an edge in any layer within the window. explicit: `pairs` minus
/// self pairs and duplicates. Throws ParameterError past `budget`.
CandidateSet candidate_pairs(const MultiplexSeries& series, LayerId target, Window window,
                             CandidatePolicy policy, std::span<const PairKey> pairs = {},
                             std::size_t budget = 20'000'000);

/// Predicts links of the target layer at snapshot t from snapshots t-T..t-1.
Prediction predict(const MultiplexSeries& series, LayerId target, SnapshotId t,
                   const PredictorSpec& spec);

/// Same, on a caller-supplied candidate set.
Prediction predict(const MultiplexSeries& series, LayerId target, SnapshotId t,
                   const PredictorSpec& spec, const CandidateSet& candidates);

/// Ordered key/value pairs describing a run. Never includes the thread count.
using Manifest = std::vector<std::pair<std::string, std::string>>;
Manifest run_manifest(const PredictorSpec& spec, LayerId target, std::optional<SnapshotId> t,
                      const std::string& dataset_hash);

/// One `# key=value` line per entry.
void write_manifest(std::ostream& out, const Manifest& manifest);

std::string_view policy_name(CandidatePolicy policy);
std::optional<CandidatePolicy> parse_policy(std::string_view name);

}  // namespace mlink
