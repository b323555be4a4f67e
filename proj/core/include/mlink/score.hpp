#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mlink/graph.hpp"

namespace mlink {

/// A node pair. Candidate pairs are unordered and stored with src < dst.
struct PairKey {
  NodeId src = 0;
  NodeId dst = 0;

  static PairKey canonical(NodeId a, NodeId b) { return a < b ? PairKey{a, b} : PairKey{b, a}; }
  friend auto operator<=>(const PairKey&, const PairKey&) = default;
};

struct ScoredPair {
  PairKey key;
  double score = 0.0;
};

/// Where a score matrix came from.
struct Provenance {
  LayerId layer = 0;
  Window window;
};

/// Sparse pair -> score map. Entries are sorted by key, unique and finite;
/// pairs without an entry score 0.
class ScoreMatrix {
 public:
  ScoreMatrix() = default;
  ScoreMatrix(std::string tag, std::vector<ScoredPair> entries, Provenance provenance = {});

  const std::string& tag() const noexcept { return tag_; }
  const Provenance& provenance() const noexcept { return provenance_; }
  void set_provenance(Provenance provenance) noexcept { provenance_ = provenance; }
  std::span<const ScoredPair> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

  double at(PairKey key) const;

  /// Scores aligned with `keys` (which must be sorted ascending).
  std::vector<double> dense(std::span<const PairKey> keys) const;

 private:
  std::string tag_;
  Provenance provenance_;
  std::vector<ScoredPair> entries_;
};

/// Sorted list of distinct unordered pairs, no self pairs.
class CandidateSet {
 public:
  CandidateSet() = default;

  /// Canonicalises each pair, drops self pairs and duplicates.
  static CandidateSet from_pairs(std::vector<PairKey> pairs);

  std::span<const PairKey> pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }
  bool contains(PairKey key) const;

 private:
  std::vector<PairKey> pairs_;
};

/// Total order of pairs, best first, with the score that produced it.
/// Equal scores are ordered by ascending key.
struct RankedList {
  std::string tag;
  std::vector<PairKey> order;
  std::vector<double> scores;
};

RankedList rank(const ScoreMatrix& matrix, const CandidateSet& candidates);
RankedList rank(std::string tag, std::span<const PairKey> keys, std::span<const double> scores);

/// `src,dst,score` sorted by score descending then (src, dst) ascending.
void write_scores(std::ostream& out, const RankedList& list, const LabelDictionary& labels);

}  // namespace mlink
