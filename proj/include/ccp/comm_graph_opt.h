#ifndef CCP_COMM_GRAPH_OPT_H_
#define CCP_COMM_GRAPH_OPT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "ccp/channel_model.h"
#include "ccp/matrix.h"

namespace ccp {

// Output of the link planner. All matrices are N x N, indexed like
// Scenario::nodes.
struct CommPlan {
  Matrix<std::uint8_t> links;   // G: 1 = link i -> j active, zero diagonal
  Matrix<double> gamma;         // compression ratio, in (0, 1]
  Matrix<double> rate_bps;      // T: transmission rate, 0 where inactive
  Matrix<double> delay_s;       // D = gamma * A / T, 0 where inactive
  double avg_delay_s = 0.0;

  // Relaxed link scores at the end of gradient descent (optimize only).
  Matrix<double> relaxed_links;
  int iterations = 0;

  int num_links() const;
};

enum class RoundingRule { kTopKByScore };

struct SolverConfig {
  double learning_rate = 0.05;
  int max_iters = 4000;
  // Lower temperature pushes the relaxed link variables to {0, 1} sooner.
  double relaxation_temperature = 1.0;
  RoundingRule rounding_rule = RoundingRule::kTopKByScore;
  std::uint64_t seed = 0;
  double convergence_tol = 1e-9;

  void validate() const;
};

// D = gamma * A / tr. Throws DomainError when tr == 0 or inputs are out of
// range.
double transmission_delay(double gamma, double volume_bits, double rate_bps);

// Smallest compression ratio the distance constraint allows:
//   max(beta * exp(-L / Lref), gamma_min), capped at 1.
double gamma_lower_bound(double distance_m, double beta,
                         double distance_scale_m, double gamma_min = 0.05);

// Sum of selected delays over the number of selected links. Throws
// NoLinksError on an empty graph.
double average_delay(const CommPlan& plan);

// A directed pair with data to send; the unit the planner selects.
struct CandidateLink {
  std::size_t src = 0;  // node index
  std::size_t dst = 0;
  double capacity_bps = 0.0;
  double volume_bits = 0.0;
  double distance_m = 0.0;
  double gamma_lb = 1.0;
  bool to_ego = false;
  // Delay at gamma_lb and full capacity: the best this link can do.
  double best_delay_s = 0.0;
};

// Every ordered pair i != j with A(i, j) > 0 and positive capacity.
std::vector<CandidateLink> candidate_links(const Scenario& s);

// Throws InfeasibleError naming the violated constraint when no plan can
// satisfy the link budget and the ego-link requirement.
void check_feasible(const Scenario& s,
                    const std::vector<CandidateLink>& candidates);

// Builds a plan from a selection over `candidates`, with T = C and each
// gamma given by `gammas` (one per candidate; only selected entries read).
CommPlan make_plan(const Scenario& s,
                   const std::vector<CandidateLink>& candidates,
                   const std::vector<bool>& selected,
                   const std::vector<double>& gammas);

// Relaxed Lagrangian projected gradient descent followed by deterministic
// rounding. Deterministic for a given (scenario, config).
CommPlan optimize(const Scenario& s, const SolverConfig& cfg);

// Exhaustive search over link subsets (OpenMP-parallel). Throws SizeError
// for more than kMaxBruteForceLinks candidates.
inline constexpr int kMaxBruteForceLinks = 20;
CommPlan brute_force_optimum(const Scenario& s);

// Returns one message per violated plan invariant; empty when the plan is
// consistent with the scenario.
std::vector<std::string> validate_plan(const Scenario& s,
                                       const CommPlan& plan);

}  // namespace ccp

#endif  // CCP_COMM_GRAPH_OPT_H_
