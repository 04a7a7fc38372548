#ifndef BRS_POSTERIOR_HPP
#define BRS_POSTERIOR_HPP

#include "brs/roughcore.hpp"

namespace brs {

// One MCMC state: a granulization with its induced rules and score.
struct RoughModel {
  Granulization g;
  RuleSet rules;
  std::size_t rule_count = 0;
  double accuracy = 0.0;
  double log_posterior = 0.0;
};

// Fraction of objects whose matched rule carries their decision label
// (majority label, ties resolving to 0). Abstentions count incorrect.
double predictive_accuracy(const RuleSet& rules, const GranularTable& gt);

// log of exp{A - 1} with the normalization constant dropped.
double log_likelihood(double accuracy);

// log of exp{-lambda * N} with the normalization constant dropped.
double log_prior(std::size_t n_rules, double lambda);

// (A - 1) - lambda * N, the unnormalized log posterior.
double log_posterior(double accuracy, std::size_t n_rules, double lambda);

}  // namespace brs

#endif  // BRS_POSTERIOR_HPP
