#include "elex/beam_search.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace elex {

namespace {

// Stream tags for per-candidate seed derivation.
constexpr std::uint64_t kStreamCreate = 0;
constexpr std::uint64_t kStreamMutate = 1;
constexpr std::uint64_t kStreamScore = 2;

}  // namespace

void parallel_for(int count, int workers, const std::function<void(int)>& body) {
  if (workers <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  const int n_threads = std::min(workers, count);
  threads.reserve(static_cast<std::size_t>(n_threads));
  for (int t = 0; t < n_threads; ++t) threads.emplace_back(run);
  for (std::thread& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<ScoredCandidate> beam_search(const BeamConfig& config, const ScoreFn& score) {
  if (config.iterations < 0) throw Error("beam_search: iterations must be >= 0");
  if (config.beam_width < 1) throw Error("beam_search: beam width must be >= 1");
  if (config.classes.empty()) throw Error("beam_search: empty class list");
  if (config.edge_types.empty()) throw Error("beam_search: empty edge type list");

  const int k = config.beam_width;
  std::uint64_t order = 0;

  // Iteration 0: k random CEs, scored at creation.
  std::vector<CE> fresh(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    Rng rng(derive_seed(config.seed, 0, static_cast<std::uint64_t>(i), kStreamCreate));
    fresh[static_cast<std::size_t>(i)] =
        random_ce(config.classes, config.edge_types, config.class_to_explain, rng);
  }
  std::vector<ScoredCandidate> beam(static_cast<std::size_t>(k));
  parallel_for(k, config.workers, [&](int i) {
    beam[static_cast<std::size_t>(i)] =
        score(fresh[static_cast<std::size_t>(i)],
              derive_seed(config.seed, 0, static_cast<std::uint64_t>(i), kStreamScore));
  });
  for (auto& cand : beam) cand.order = order++;

  auto by_rank = [](const ScoredCandidate& a, const ScoredCandidate& b) {
    if (a.score != b.score) return a.score > b.score;
    const int la = length(a.ce);
    const int lb = length(b.ce);
    if (la != lb) return la < lb;
    return a.order < b.order;
  };
  std::sort(beam.begin(), beam.end(), by_rank);

  for (int iter = 1; iter <= config.iterations; ++iter) {
    const int survivors = static_cast<int>(beam.size());
    std::vector<CE> mutated(static_cast<std::size_t>(survivors));
    for (int i = 0; i < survivors; ++i) {
      Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(iter),
                          static_cast<std::uint64_t>(i), kStreamMutate));
      mutated[static_cast<std::size_t>(i)] =
          mutate_ce(beam[static_cast<std::size_t>(i)].ce, config.classes,
                    config.edge_types, rng);
    }
    std::vector<ScoredCandidate> scored(static_cast<std::size_t>(survivors));
    parallel_for(survivors, config.workers, [&](int i) {
      scored[static_cast<std::size_t>(i)] =
          score(mutated[static_cast<std::size_t>(i)],
                derive_seed(config.seed, static_cast<std::uint64_t>(iter),
                            static_cast<std::uint64_t>(i), kStreamScore));
    });
    for (auto& cand : scored) {
      cand.order = order++;
      beam.push_back(std::move(cand));
    }
    std::sort(beam.begin(), beam.end(), by_rank);
    if (static_cast<int>(beam.size()) > k) beam.resize(static_cast<std::size_t>(k));
  }
  return beam;
}

}  // namespace elex
