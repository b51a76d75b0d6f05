#include "ccp/comm_graph_opt.h"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ccp/errors.h"
#include "internal/link_search.h"

namespace ccp {

int CommPlan::num_links() const {
  int count = 0;
  for (auto v : links.data()) count += v;
  return count;
}

void SolverConfig::validate() const {
  if (!(learning_rate > 0)) {
    throw ValidationError("learning_rate must be > 0");
  }
  if (max_iters < 1) throw ValidationError("max_iters must be >= 1");
  if (!(relaxation_temperature > 0)) {
    throw ValidationError("relaxation_temperature must be > 0");
  }
  if (!(convergence_tol > 0)) {
    throw ValidationError("convergence_tol must be > 0");
  }
}

double transmission_delay(double gamma, double volume_bits, double rate_bps) {
  if (!(gamma > 0 && gamma <= 1)) {
    throw DomainError("transmission_delay: gamma must lie in (0, 1]");
  }
  if (!(volume_bits >= 0)) {
    throw DomainError("transmission_delay: volume must be >= 0");
  }
  if (!(rate_bps > 0)) {
    throw DomainError("transmission_delay: rate must be > 0");
  }
  return gamma * volume_bits / rate_bps;
}

double gamma_lower_bound(double distance_m, double beta,
                         double distance_scale_m, double gamma_min) {
  const double bound = beta * std::exp(-distance_m / distance_scale_m);
  return std::min(1.0, std::max(bound, gamma_min));
}

double average_delay(const CommPlan& plan) {
  double total = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < plan.links.rows(); ++i) {
    for (std::size_t j = 0; j < plan.links.cols(); ++j) {
      if (plan.links(i, j)) {
        total += plan.delay_s(i, j);
        ++count;
      }
    }
  }
  if (count == 0) throw NoLinksError("average_delay: plan has no links");
  return total / count;
}

std::vector<CandidateLink> candidate_links(const Scenario& s) {
  const Matrix<double> cap = capacity_matrix(s);
  const std::size_t ego = s.ego_index();
  std::vector<CandidateLink> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (i == j || s.data_volumes(i, j) <= 0 || cap(i, j) <= 0) continue;
      CandidateLink link;
      link.src = i;
      link.dst = j;
      link.capacity_bps = cap(i, j);
      link.volume_bits = s.data_volumes(i, j);
      link.distance_m = distance(s.nodes[i].position, s.nodes[j].position);
      link.gamma_lb = gamma_lower_bound(link.distance_m, s.beta,
                                        s.distance_scale_m, s.gamma_min);
      link.to_ego = j == ego;
      link.best_delay_s = transmission_delay(link.gamma_lb, link.volume_bits,
                                             link.capacity_bps);
      out.push_back(link);
    }
  }
  return out;
}

void check_feasible(const Scenario& s,
                    const std::vector<CandidateLink>& candidates) {
  const int c = s.channel.num_subchannels;
  if (c < s.min_ego_links) {
    throw InfeasibleError("link budget (sum of g <= c): c = " + std::to_string(c) +
                          " is below min_ego_links = " +
                          std::to_string(s.min_ego_links));
  }
  const auto ego_links = std::count_if(
      candidates.begin(), candidates.end(),
      [](const CandidateLink& l) { return l.to_ego; });
  if (ego_links < s.min_ego_links) {
    throw InfeasibleError(
        "ego connectivity: only " + std::to_string(ego_links) +
        " link(s) into ego node " + std::to_string(s.ego_id) +
        " have data and positive capacity, min_ego_links = " +
        std::to_string(s.min_ego_links));
  }
}

CommPlan make_plan(const Scenario& s,
                   const std::vector<CandidateLink>& candidates,
                   const std::vector<bool>& selected,
                   const std::vector<double>& gammas) {
  const std::size_t n = s.size();
  CommPlan plan;
  plan.links = Matrix<std::uint8_t>(n, n, 0);
  plan.gamma = Matrix<double>(n, n, 1.0);
  plan.rate_bps = Matrix<double>(n, n, 0.0);
  plan.delay_s = Matrix<double>(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      plan.gamma(i, j) = gamma_lower_bound(
          distance(s.nodes[i].position, s.nodes[j].position), s.beta,
          s.distance_scale_m, s.gamma_min);
    }
  }
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (!selected[k]) continue;
    const CandidateLink& l = candidates[k];
    plan.links(l.src, l.dst) = 1;
    plan.gamma(l.src, l.dst) = gammas[k];
    plan.rate_bps(l.src, l.dst) = l.capacity_bps;
    plan.delay_s(l.src, l.dst) =
        transmission_delay(gammas[k], l.volume_bits, l.capacity_bps);
  }
  plan.avg_delay_s = average_delay(plan);
  return plan;
}

namespace {

// Box for the relaxed variables. Rates are expressed as a fraction of
// capacity so every link shares one scale.
constexpr double kRateFractionMin = 1e-3;
constexpr double kMinLinkMass = 1e-9;
// Quadratic penalty weight of the augmented Lagrangian.
constexpr double kPenalty = 1.0;
constexpr double kInitialJitter = 1e-3;
constexpr double kKeepThreshold = 0.5;

std::vector<bool> round_links(const Scenario& s,
                              const std::vector<CandidateLink>& cands,
                              const std::vector<double>& score) {
  std::vector<std::size_t> order(cands.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (score[a] != score[b]) return score[a] > score[b];
    if (cands[a].best_delay_s != cands[b].best_delay_s) {
      return cands[a].best_delay_s < cands[b].best_delay_s;
    }
    const int src_a = s.nodes[cands[a].src].id;
    const int src_b = s.nodes[cands[b].src].id;
    if (src_a != src_b) return src_a < src_b;
    return s.nodes[cands[a].dst].id < s.nodes[cands[b].dst].id;
  });

  const int budget = s.channel.num_subchannels;
  std::vector<bool> selected(cands.size(), false);
  int count = 0;
  // The ego requirement is met first, in score order.
  int ego = 0;
  for (std::size_t k : order) {
    if (ego >= s.min_ego_links) break;
    if (cands[k].to_ego) {
      selected[k] = true;
      ++ego;
      ++count;
    }
  }
  for (std::size_t k : order) {
    if (count >= budget) break;
    if (selected[k] || score[k] < kKeepThreshold) continue;
    selected[k] = true;
    ++count;
  }
  return selected;
}

// Second phase on the rounded graph: projected gradient on gamma over its
// feasible box [lb, 1], with T fixed at capacity. The objective is linear
// and increasing in each gamma, so a diagonally scaled step of lr per
// coordinate reaches the lower corner within ceil(1 / lr) iterations.
void polish(const std::vector<CandidateLink>& cands,
            const std::vector<bool>& selected, double lr,
            std::vector<double>& gamma) {
  for (std::size_t k = 0; k < cands.size(); ++k) {
    gamma[k] = std::clamp(gamma[k], cands[k].gamma_lb, 1.0);
  }
  for (bool moved = true; moved;) {
    moved = false;
    for (std::size_t k = 0; k < cands.size(); ++k) {
      if (!selected[k] || cands[k].best_delay_s == 0.0) continue;
      const double next = std::max(gamma[k] - lr, cands[k].gamma_lb);
      moved |= next != gamma[k];
      gamma[k] = next;
    }
  }
}

}  // namespace

// Relaxation solved here, with g in [0, 1], gamma in [lb, 1] and u = tr / C
// in [u_min, 1]:
//
//   f(g, gamma, u) = sum_k g_k d_k / sum_k g_k,  d_k = gamma_k A_k / (u_k C_k)
//
// The rate and compression constraints are per-link boxes and are enforced
// by projection. The coupling constraints get one multiplier each, in
// augmented form max(0, lambda + kPenalty * violation):
//   lambda_links  (sum_k g_k - c)               link budget
//   lambda_ego    (min_ego - sum_{k->ego} g_k)  ego connectivity
// plus mu * sum_k g_k (1 - g_k) with mu = (t / max_iters)^3 / temperature,
// which leaves g free early and drives it to {0, 1} late.
// d_k is increasing in gamma_k and decreasing in u_k for every g, so gamma
// and u take diagonally scaled steps (a relative step of lr) that do not
// vanish on links whose g has dropped to 0. Delays are measured in units of
// the mean best-case delay so the g gradient is O(1).
CommPlan optimize(const Scenario& s, const SolverConfig& cfg) {
  s.validate();
  cfg.validate();
  if (s.size() < 2) {
    throw ValidationError("optimize: scenario needs at least 2 nodes");
  }
  const std::vector<CandidateLink> cands = candidate_links(s);
  check_feasible(s, cands);

  const std::size_t k_links = cands.size();
  std::vector<double> base(k_links);
  double scale = 0.0;
  for (std::size_t k = 0; k < k_links; ++k) {
    base[k] = cands[k].volume_bits / cands[k].capacity_bps;
    scale += cands[k].best_delay_s / static_cast<double>(k_links);
  }

  const double c = s.channel.num_subchannels;
  const double m = s.min_ego_links;
  const double lr = cfg.learning_rate;

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> jitter(-kInitialJitter,
                                                kInitialJitter);
  const double g0 = std::min(kKeepThreshold, c / static_cast<double>(k_links));
  std::vector<double> g(k_links), gamma(k_links, 1.0), u(k_links, 1.0);
  for (auto& v : g) v = g0 + jitter(rng);

  double lambda_links = 0, lambda_ego = 0;
  std::vector<double> d(k_links), grad_g(k_links);

  int it = 0;
  for (; it < cfg.max_iters; ++it) {
    double g_sum = 0.0, weighted = 0.0;
    for (std::size_t k = 0; k < k_links; ++k) {
      d[k] = gamma[k] * base[k] / (u[k] * scale);
      g_sum += g[k];
      weighted += g[k] * d[k];
    }
    g_sum = std::max(g_sum, kMinLinkMass);
    const double f = weighted / g_sum;
    const double mu =
        std::pow(static_cast<double>(it + 1) / cfg.max_iters, 3) /
        cfg.relaxation_temperature;

    double links = 0.0, ego = 0.0;
    for (std::size_t k = 0; k < k_links; ++k) {
      links += g[k];
      if (cands[k].to_ego) ego += g[k];
    }
    const double pull_links =
        std::max(0.0, lambda_links + kPenalty * (links - c));
    const double pull_ego = std::max(0.0, lambda_ego + kPenalty * (m - ego));

    double change = 0.0;
    links = 0.0;
    ego = 0.0;
    for (std::size_t k = 0; k < k_links; ++k) {
      grad_g[k] = (d[k] - f) / g_sum + pull_links + mu * (1.0 - 2.0 * g[k]);
      if (cands[k].to_ego) grad_g[k] -= pull_ego;
      const double g_new = std::clamp(g[k] - lr * grad_g[k], 0.0, 1.0);
      const double gamma_new =
          std::clamp(gamma[k] * (1.0 - lr), cands[k].gamma_lb, 1.0);
      const double u_new =
          std::clamp(u[k] * (1.0 + lr), kRateFractionMin, 1.0);
      change = std::max({change, std::abs(g_new - g[k]),
                         std::abs(gamma_new - gamma[k]),
                         std::abs(u_new - u[k])});
      g[k] = g_new;
      gamma[k] = gamma_new;
      u[k] = u_new;
      links += g[k];
      if (cands[k].to_ego) ego += g[k];
    }
    lambda_links = std::max(0.0, lambda_links + lr * (links - c));
    lambda_ego = std::max(0.0, lambda_ego + lr * (m - ego));

    const double tol = cfg.convergence_tol;
    if (change < tol && links <= c + tol && ego >= m - tol) {
      ++it;
      break;
    }
  }

  const std::vector<bool> selected = round_links(s, cands, g);
  polish(cands, selected, lr, gamma);
  CommPlan plan = make_plan(s, cands, selected, gamma);
  plan.relaxed_links = Matrix<double>(s.size(), s.size(), 0.0);
  for (std::size_t k = 0; k < k_links; ++k) {
    plan.relaxed_links(cands[k].src, cands[k].dst) = g[k];
  }
  plan.iterations = it;
  return plan;
}

namespace internal {

void check_brute_force_size(const std::vector<CandidateLink>& candidates) {
  if (candidates.size() > static_cast<std::size_t>(kMaxBruteForceLinks)) {
    throw SizeError("brute_force_optimum: " +
                    std::to_string(candidates.size()) +
                    " candidate links exceed the limit of " +
                    std::to_string(kMaxBruteForceLinks));
  }
}

CommPlan plan_from_mask(const Scenario& s,
                        const std::vector<CandidateLink>& candidates,
                        std::uint32_t mask) {
  std::vector<bool> selected(candidates.size());
  std::vector<double> gammas(candidates.size());
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    selected[k] = (mask >> k) & 1u;
    gammas[k] = candidates[k].gamma_lb;
  }
  return make_plan(s, candidates, selected, gammas);
}

}  // namespace internal

CommPlan brute_force_optimum(const Scenario& s) {
  s.validate();
  const std::vector<CandidateLink> cands = candidate_links(s);
  internal::check_brute_force_size(cands);
  check_feasible(s, cands);

  const std::uint32_t end = 1u << cands.size();
  const int max_links = s.channel.num_subchannels;
  internal::SubsetBest best;
#pragma omp parallel
  {
    const std::uint32_t threads = omp_get_num_threads();
    const std::uint32_t t = omp_get_thread_num();
    const std::uint32_t chunk = (end + threads - 1) / threads;
    const std::uint32_t lo = std::min(end, t * chunk);
    const std::uint32_t hi = std::min(end, lo + chunk);
    const internal::SubsetBest local =
        internal::search_masks(cands, max_links, s.min_ego_links, lo, hi);
#pragma omp critical(ccp_brute_force_reduce)
    if (local.better_than(best)) best = local;
  }
  if (best.mask == 0) {
    throw InfeasibleError("brute_force_optimum: no subset satisfies the "
                          "link budget and ego connectivity");
  }
  return internal::plan_from_mask(s, cands, best.mask);
}

std::vector<std::string> validate_plan(const Scenario& s,
                                       const CommPlan& plan) {
  std::vector<std::string> problems;
  const std::size_t n = s.size();
  if (plan.links.rows() != n || plan.links.cols() != n ||
      plan.gamma.rows() != n || plan.rate_bps.rows() != n ||
      plan.delay_s.rows() != n) {
    problems.push_back("plan matrices do not match the scenario size");
    return problems;
  }
  const Matrix<double> cap = capacity_matrix(s);
  const std::size_t ego = s.ego_index();
  int total = 0, ego_links = 0;
  auto name = [&](std::size_t i, std::size_t j) {
    return std::to_string(s.nodes[i].id) + "->" +
           std::to_string(s.nodes[j].id);
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto g = plan.links(i, j);
      if (i == j && g != 0) problems.push_back("nonzero diagonal link");
      if (g > 1) problems.push_back("non-binary link " + name(i, j));
      if (!g) continue;
      ++total;
      if (j == ego) ++ego_links;
      const double gamma = plan.gamma(i, j);
      const double tr = plan.rate_bps(i, j);
      if (!(gamma > 0 && gamma <= 1)) {
        problems.push_back("gamma outside (0, 1] on " + name(i, j));
      }
      if (!(tr > 0) || tr > cap(i, j)) {
        problems.push_back("rate exceeds capacity on " + name(i, j));
      }
      const double dist = distance(s.nodes[i].position, s.nodes[j].position);
      if (gamma * std::exp(dist / s.distance_scale_m) < s.beta * (1 - 1e-12)) {
        problems.push_back("compression constraint violated on " + name(i, j));
      }
      if (tr > 0 && plan.delay_s(i, j) != gamma * s.data_volumes(i, j) / tr) {
        problems.push_back("delay != gamma*A/tr on " + name(i, j));
      }
    }
  }
  if (total > s.channel.num_subchannels) {
    problems.push_back("link budget exceeded: " + std::to_string(total) +
                       " > c = " + std::to_string(s.channel.num_subchannels));
  }
  if (ego_links < s.min_ego_links) {
    problems.push_back("only " + std::to_string(ego_links) +
                       " link(s) into ego, need " +
                       std::to_string(s.min_ego_links));
  }
  return problems;
}

}  // namespace ccp
