#ifndef BDP_MODEL_HPP
#define BDP_MODEL_HPP

// Birth-death process models: per-state birth/death rates, a barrier taboo
// set, and a per-unit-time reward function.  Models are immutable after
// construction and safe to share across threads.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace bdp {

using StateIndex = std::int64_t;
using RateFunction = std::function<double(StateIndex)>;

class ModelError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Absorbing target set: a lower barrier, an upper barrier, or both.
struct TabooSet {
  std::optional<StateIndex> lower;
  std::optional<StateIndex> upper;

  bool empty() const { return !lower && !upper; }

  bool contains(StateIndex n) const {
    if (lower && n <= *lower) return true;
    if (upper && n >= *upper) return true;
    return false;
  }

  // Checks barrier ordering and that the initial state lies strictly
  // between the barriers.
  void validate(StateIndex initial) const {
    if (empty()) throw ModelError("taboo set must have at least one barrier");
    if (lower && upper && *lower >= *upper)
      throw ModelError("taboo barriers must satisfy lower < upper");
    if (contains(initial))
      throw ModelError("initial state " + std::to_string(initial) +
                       " lies in the taboo set");
  }
};

struct BdpModel {
  RateFunction birth;   // lambda_n, n >= 0
  RateFunction death;   // mu_n, mu_0 forced to 0
  RateFunction reward;  // g(n) >= 0, cost per unit time in state n
  TabooSet taboo;
  std::optional<StateIndex> state_cap;  // rates vanish at/above this state

  double birth_rate(StateIndex n) const {
    if (n < 0) return 0.0;
    if (state_cap && n >= *state_cap) return 0.0;
    const double r = birth ? birth(n) : 0.0;
    if (r < 0.0 || !std::isfinite(r))
      throw ModelError("invalid birth rate " + std::to_string(r) + " at state " +
                       std::to_string(n));
    return r;
  }

  double death_rate(StateIndex n) const {
    if (n <= 0) return 0.0;
    if (state_cap && n > *state_cap) return 0.0;
    const double r = death ? death(n) : 0.0;
    if (r < 0.0 || !std::isfinite(r))
      throw ModelError("invalid death rate " + std::to_string(r) + " at state " +
                       std::to_string(n));
    return r;
  }

  double reward_at(StateIndex n) const {
    const double g = reward ? reward(n) : 1.0;
    if (g < 0.0 || !std::isfinite(g))
      throw ModelError("invalid reward " + std::to_string(g) + " at state " +
                       std::to_string(n));
    return g;
  }
};

// --- Built-in model constructors (section-3 model zoo) ---------------------

// Simple linear BDP: lambda_n = n*lambda, mu_n = n*mu.  State 0 is
// naturally absorbing; default reward g(n) = n (total particle-time).
inline BdpModel make_kendall(double lambda, double mu) {
  if (lambda < 0 || mu < 0) throw ModelError("kendall: rates must be nonnegative");
  BdpModel m;
  m.birth = [lambda](StateIndex n) { return static_cast<double>(n) * lambda; };
  m.death = [mu](StateIndex n) { return static_cast<double>(n) * mu; };
  m.reward = [](StateIndex n) { return static_cast<double>(n); };
  m.taboo.lower = 0;
  return m;
}

// M/M/c queue (c absent: infinitely many servers).  Arrivals at rate
// lambda, service rate min(n,c)*mu.  Default reward g(n) = n so W is the
// customer-time waited during a busy period.
inline BdpModel make_mm_queue(double lambda, double mu,
                              std::optional<StateIndex> servers = std::nullopt) {
  if (lambda < 0 || mu < 0) throw ModelError("mm_queue: rates must be nonnegative");
  if (servers && *servers < 1) throw ModelError("mm_queue: need c >= 1 servers");
  BdpModel m;
  m.birth = [lambda](StateIndex) { return lambda; };
  if (servers) {
    StateIndex c = *servers;
    m.death = [mu, c](StateIndex n) { return static_cast<double>(std::min(n, c)) * mu; };
  } else {
    m.death = [mu](StateIndex n) { return static_cast<double>(n) * mu; };
  }
  m.reward = [](StateIndex n) { return static_cast<double>(n); };
  m.taboo.lower = 0;
  return m;
}

// Moran model with selection and mutation; n counts carriers of the first
// allele in a population of size N.  fitness_1/fitness_2 are the selective
// advantages of the two alleles; u mutates allele 1 -> 2, v the reverse.
inline BdpModel make_moran(StateIndex population, double fitness_1, double fitness_2,
                           double u, double v) {
  if (population < 1) throw ModelError("moran: population must be >= 1");
  if (u < 0 || u > 1 || v < 0 || v > 1)
    throw ModelError("moran: mutation probabilities must lie in [0,1]");
  if (fitness_1 < 0 || fitness_2 < 0) throw ModelError("moran: fitness must be nonnegative");
  BdpModel m;
  const double N = static_cast<double>(population);
  m.birth = [=](StateIndex k) {
    const double n = static_cast<double>(k);
    return (N - n) * (fitness_1 * n * (1.0 - u) + fitness_2 * (N - n) * v);
  };
  m.death = [=](StateIndex k) {
    const double n = static_cast<double>(k);
    return n * (fitness_2 * (N - n) * (1.0 - v) + fitness_1 * n * u);
  };
  m.reward = [](StateIndex n) { return static_cast<double>(n); };
  m.taboo.lower = 0;
  m.state_cap = population;
  return m;
}

// SIS epidemic with intervention: lambda_n = lambda*n*(N-n), mu_n =
// n*(mu+epsilon); reward g(n) = cost_a*epsilon + cost_b*n.
inline BdpModel make_sis(StateIndex population, double lambda, double mu, double epsilon,
                         double cost_a = 0.0, double cost_b = 1.0) {
  if (population < 1) throw ModelError("sis: population must be >= 1");
  if (lambda < 0 || mu < 0 || epsilon < 0)
    throw ModelError("sis: rates and control must be nonnegative");
  BdpModel m;
  const double N = static_cast<double>(population);
  m.birth = [lambda, N](StateIndex k) {
    const double n = static_cast<double>(k);
    return lambda * n * (N - n);
  };
  m.death = [mu, epsilon](StateIndex k) { return static_cast<double>(k) * (mu + epsilon); };
  m.reward = [cost_a, cost_b, epsilon](StateIndex n) {
    return cost_a * epsilon + cost_b * static_cast<double>(n);
  };
  m.taboo.lower = 0;
  m.state_cap = population;
  return m;
}

// Tick-level asset price process: lambda_n = n*lambda + immigration,
// mu_n = n*mu + emigration (n >= 1).  The model leaves lambda_0 open;
// the default convention is lambda_0 = immigration.  Reward g(n) =
// payoff_a*n + payoff_b*initial.  The strike barrier (upper taboo) is
// set by the caller, typically per candidate k during a search.
inline BdpModel make_option(double lambda, double mu, double immigration, double emigration,
                            StateIndex initial, double payoff_a, double payoff_b,
                            std::optional<double> lambda0 = std::nullopt,
                            std::optional<StateIndex> strike = std::nullopt) {
  if (lambda < 0 || mu < 0 || immigration < 0 || emigration < 0)
    throw ModelError("option: rates must be nonnegative");
  BdpModel m;
  const double l0 = lambda0.value_or(immigration);
  m.birth = [lambda, immigration, l0](StateIndex k) {
    if (k == 0) return l0;
    return static_cast<double>(k) * lambda + immigration;
  };
  m.death = [mu, emigration](StateIndex k) {
    return static_cast<double>(k) * mu + emigration;
  };
  m.reward = [payoff_a, payoff_b, initial](StateIndex n) {
    return payoff_a * static_cast<double>(n) + payoff_b * static_cast<double>(initial);
  };
  if (strike) m.taboo.upper = *strike;
  return m;
}

}  // namespace bdp

#endif  // BDP_MODEL_HPP
