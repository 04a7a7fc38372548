#include "brs/posterior.hpp"

#include "brs/errors.hpp"

namespace brs {

double predictive_accuracy(const RuleSet& rules, const GranularTable& gt) {
  if (gt.n_objects() == 0)
    throw DomainError("predictive_accuracy: empty table");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gt.n_objects(); ++i) {
    auto it = rules.rules.find(gt.signatures[i]);
    if (it == rules.rules.end()) continue;  // abstention counts incorrect
    // majority label of the matched rule; ties resolve to 0
    if (it->second.decision == gt.decisions[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(gt.n_objects());
}

double log_likelihood(double accuracy) {
  if (accuracy < 0.0 || accuracy > 1.0)
    throw DomainError("log_likelihood: accuracy outside [0, 1]");
  return accuracy - 1.0;
}

double log_prior(std::size_t n_rules, double lambda) {
  return -lambda * static_cast<double>(n_rules);
}

double log_posterior(double accuracy, std::size_t n_rules, double lambda) {
  return log_likelihood(accuracy) + log_prior(n_rules, lambda);
}

}  // namespace brs
