#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mlink/graph.hpp"
#include "mlink/pipeline.hpp"

namespace mlink {

struct LabeledScore {
  double score = 0.0;
  bool positive = false;
};

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

/// P(random positive outscores random negative), ties counted 1/2, from the
/// Mann-Whitney rank sum with mid-ranks. Throws ParameterError without at
/// least one positive and one negative, or on non-finite scores.
double auroc(std::span<const LabeledScore> scores);

/// ROC vertices from (0,0) to (1,1), one per distinct score threshold.
std::vector<RocPoint> roc_curve(std::span<const LabeledScore> scores);

struct SnapshotEval {
  SnapshotId t = 0;
  double auroc = 0.0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::vector<RocPoint> roc;
};

struct EvalReport {
  std::string variant;
  LayerId target = 0;
  std::size_t T = 0;
  double theta = 0.0;
  std::vector<SnapshotEval> snapshots;  ///< ordered by t
  std::vector<SnapshotId> skipped;      ///< snapshots with no positives or no negatives
  double mean = 0.0;
  double std_dev = 0.0;    ///< sample standard deviation
  double std_error = 0.0;  ///< std_dev / sqrt(n)

  std::vector<double> aurocs() const;
};

struct EvalOptions {
  /// Fraction of negatives kept per snapshot (deterministic by seed); values
  /// >= 1 keep all of them.
  double negative_sample_ratio = 1.0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool keep_roc = false;
};

/// Candidate scores aligned with candidates.pairs().
using Scorer = std::function<std::vector<double>(SnapshotId t, Window window,
                                                 const CandidateSet& candidates)>;

/// For every t in (T, T_total): candidates from the window t-T..t-1,
/// positives = candidates linked in the target layer at t, everything else
/// negative. Snapshots without positives (or negatives) are skipped.
EvalReport moving_window_eval(const MultiplexSeries& series, LayerId target,
                              const PredictorSpec& spec, const EvalOptions& options = {});

/// Same protocol with an arbitrary scorer; candidates follow `policy`.
EvalReport moving_window_eval(const MultiplexSeries& series, LayerId target, std::size_t T,
                              CandidatePolicy policy, const std::string& name,
                              const Scorer& scorer, const EvalOptions& options = {});

/// Evaluates several specs on shared per-snapshot candidate sets. All specs
/// must agree on the window length and candidate policy.
std::vector<EvalReport> evaluate_variants(const MultiplexSeries& series, LayerId target,
                                          std::span<const PredictorSpec> specs,
                                          const EvalOptions& options = {});

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  std::size_t df = 0;
};

/// Paired two-sample t-test, two-sided, n-1 degrees of freedom. Identical
/// inputs give t = 0, p = 1. Throws ParameterError on length mismatch,
/// fewer than two pairs, or constant non-zero differences.
TTestResult paired_ttest(std::span<const double> a, std::span<const double> b);

struct OverlapMatrix {
  std::size_t layers = 0;
  std::vector<std::size_t> counts;  ///< |U_i ∩ U_j|, row-major; diagonal |U_i|
  std::vector<double> ratios;       ///< counts(i,j) / |U_i|, 0 for empty U_i

  std::size_t count(LayerId i, LayerId j) const { return counts[i * layers + j]; }
  double ratio(LayerId i, LayerId j) const { return ratios[i * layers + j]; }
};

OverlapMatrix overlap_matrix(const MultiplexSeries& series, Window window);

struct InteractionGroup {
  std::string group;  ///< "all_layers" or "fewer_layers"
  std::size_t count = 0;
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

/// Target-layer pair weights over the whole series, split by whether the
/// pair is linked in every layer at some point. Empty groups are omitted.
std::vector<InteractionGroup> interaction_stats(const MultiplexSeries& series, LayerId target);

/// Linear-interpolation quantile of sorted data, q in [0, 1].
double quantile(std::span<const double> sorted, double q);

// Writers.
void write_report_json(std::ostream& out, const EvalReport& report, const Manifest& manifest);
void write_roc_csv(std::ostream& out, std::span<const RocPoint> roc);
void write_overlap_csv(std::ostream& out, const OverlapMatrix& matrix);
void write_interaction_csv(std::ostream& out, std::span<const InteractionGroup> groups);

}  // namespace mlink
