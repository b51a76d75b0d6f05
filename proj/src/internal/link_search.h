#ifndef CCP_INTERNAL_LINK_SEARCH_H_
#define CCP_INTERNAL_LINK_SEARCH_H_

#include <cstdint>
#include <limits>
#include <vector>

#include "ccp/comm_graph_opt.h"

namespace ccp::internal {

struct SubsetBest {
  double mean = std::numeric_limits<double>::infinity();
  std::uint32_t mask = 0;  // 0 = nothing feasible found

  // Lower mean wins; equal means resolve to the smaller mask.
  bool better_than(const SubsetBest& other) const {
    if (mask == 0) return false;
    if (other.mask == 0) return true;
    if (mean != other.mean) return mean < other.mean;
    return mask < other.mask;
  }
};

// Scans masks in [begin, end) over `candidates` and keeps the best subset
// with at most `max_links` links and at least `min_ego` links into ego.
inline SubsetBest search_masks(const std::vector<CandidateLink>& candidates,
                               int max_links, int min_ego,
                               std::uint32_t begin, std::uint32_t end) {
  SubsetBest best;
  const int k = static_cast<int>(candidates.size());
  for (std::uint32_t mask = begin; mask < end; ++mask) {
    if (mask == 0) continue;
    const int count = __builtin_popcount(mask);
    if (count > max_links) continue;
    int ego = 0;
    double total = 0.0;
    for (int b = 0; b < k; ++b) {
      if (mask & (1u << b)) {
        total += candidates[b].best_delay_s;
        ego += candidates[b].to_ego ? 1 : 0;
      }
    }
    if (ego < min_ego) continue;
    const SubsetBest here{total / count, mask};
    if (here.better_than(best)) best = here;
  }
  return best;
}

// Plan for the subset encoded by `mask`, every gamma at its lower bound.
CommPlan plan_from_mask(const Scenario& s,
                        const std::vector<CandidateLink>& candidates,
                        std::uint32_t mask);

void check_brute_force_size(const std::vector<CandidateLink>& candidates);

}  // namespace ccp::internal

#endif  // CCP_INTERNAL_LINK_SEARCH_H_
