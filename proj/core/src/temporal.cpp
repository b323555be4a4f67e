#include "mlink/temporal.hpp"

#include <algorithm>
#include <cmath>

#include "mlink/error.hpp"

namespace mlink {

void DecayParams::validate() const {
  if (!(theta >= 0.0 && theta <= 1.0)) throw ParameterError("theta must be in [0, 1]");
  if (window < 1) throw ParameterError("decay window T must be at least 1");
}

ScoreMatrix decay_aggregate(std::span<const ScoreMatrix> matrices, double theta) {
  if (matrices.empty()) throw ParameterError("decay_aggregate needs at least one matrix");
  if (!(theta >= 0.0 && theta <= 1.0)) throw ParameterError("theta must be in [0, 1]");
  for (const auto& m : matrices)
    if (m.tag() != matrices.front().tag())
      throw ParameterError("decay_aggregate: matrices carry different metric tags");

  const std::size_t T = matrices.size();
  std::vector<ScoredPair> all;
  for (std::size_t k = 0; k < T; ++k) {
    // std::pow(0.0, 0) == 1, which is the convention we want for the newest.
    const double factor = std::pow(theta, static_cast<double>(T - 1 - k));
    for (const auto& e : matrices[k].entries()) all.push_back({e.key, factor * e.score});
  }
  // Stable sort keeps the oldest-first accumulation order per pair.
  std::stable_sort(all.begin(), all.end(),
                   [](const ScoredPair& a, const ScoredPair& b) { return a.key < b.key; });
  std::vector<ScoredPair> out;
  for (const auto& e : all) {
    if (!out.empty() && out.back().key == e.key) {
      out.back().score += e.score;
    } else {
      out.push_back(e);
    }
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const ScoredPair& e) { return e.score == 0.0; }),
            out.end());
  Provenance prov = matrices.back().provenance();
  prov.window.from = matrices.front().provenance().window.from;
  return ScoreMatrix(matrices.front().tag(), std::move(out), prov);
}

}  // namespace mlink
