#include "mlink/score.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "mlink/error.hpp"
#include "mlink/io.hpp"

namespace mlink {

ScoreMatrix::ScoreMatrix(std::string tag, std::vector<ScoredPair> entries, Provenance provenance)
    : tag_(std::move(tag)), provenance_(provenance), entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!std::isfinite(entries_[i].score))
      throw InvariantError("non-finite score in matrix '" + tag_ + "'");
    if (i > 0 && !(entries_[i - 1].key < entries_[i].key))
      throw InvariantError("score matrix entries must be sorted and unique");
  }
}

double ScoreMatrix::at(PairKey key) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                             [](const ScoredPair& e, PairKey k) { return e.key < k; });
  return (it != entries_.end() && it->key == key) ? it->score : 0.0;
}

std::vector<double> ScoreMatrix::dense(std::span<const PairKey> keys) const {
  std::vector<double> out(keys.size(), 0.0);
  std::size_t j = 0;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    while (j < entries_.size() && entries_[j].key < keys[i]) ++j;
    if (j < entries_.size() && entries_[j].key == keys[i]) out[i] = entries_[j].score;
  }
  return out;
}

CandidateSet CandidateSet::from_pairs(std::vector<PairKey> pairs) {
  CandidateSet c;
  c.pairs_.reserve(pairs.size());
  for (const auto& p : pairs)
    if (p.src != p.dst) c.pairs_.push_back(PairKey::canonical(p.src, p.dst));
  std::sort(c.pairs_.begin(), c.pairs_.end());
  c.pairs_.erase(std::unique(c.pairs_.begin(), c.pairs_.end()), c.pairs_.end());
  return c;
}

bool CandidateSet::contains(PairKey key) const {
  return std::binary_search(pairs_.begin(), pairs_.end(), PairKey::canonical(key.src, key.dst));
}

RankedList rank(std::string tag, std::span<const PairKey> keys, std::span<const double> scores) {
  if (keys.size() != scores.size()) throw InvariantError("rank: keys and scores differ in length");
  std::vector<std::size_t> idx(keys.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return keys[a] < keys[b];
  });
  RankedList out{std::move(tag), {}, {}};
  out.order.reserve(idx.size());
  out.scores.reserve(idx.size());
  for (auto i : idx) {
    out.order.push_back(keys[i]);
    out.scores.push_back(scores[i]);
  }
  return out;
}

RankedList rank(const ScoreMatrix& matrix, const CandidateSet& candidates) {
  auto scores = matrix.dense(candidates.pairs());
  return rank(matrix.tag(), candidates.pairs(), scores);
}

void write_scores(std::ostream& out, const RankedList& list, const LabelDictionary& labels) {
  out << "src,dst,score\n";
  for (std::size_t i = 0; i < list.order.size(); ++i)
    out << labels.label(list.order[i].src) << ',' << labels.label(list.order[i].dst) << ','
        << format_double(list.scores[i]) << '\n';
}

}  // namespace mlink
