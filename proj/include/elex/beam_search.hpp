#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "elex/scoring.hpp"

namespace elex {

struct BeamConfig {
  int iterations = 10;     // n
  int beam_width = 10000;  // k
  std::vector<std::string> classes;
  std::vector<std::string> edge_types;
  std::string class_to_explain;
  int workers = 1;
  std::uint64_t seed = 0;
};

// Scores one candidate; the seed is derived per (iteration, index) so results
// are identical regardless of worker count.
using ScoreFn = std::function<ScoredCandidate(const CE&, std::uint64_t seed)>;

// Keep-top-k search: k random seeds, then per iteration one mutation per
// survivor, scored and appended; the 2k pool is sorted by
// (score desc, length asc, insertion order) and truncated to k. Returns the
// final beam in sorted order.
std::vector<ScoredCandidate> beam_search(const BeamConfig& config, const ScoreFn& score);

// Deterministic index-parallel loop used for candidate scoring.
void parallel_for(int count, int workers, const std::function<void(int)>& body);

}  // namespace elex
