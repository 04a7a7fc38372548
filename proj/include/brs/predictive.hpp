#ifndef BRS_PREDICTIVE_HPP
#define BRS_PREDICTIVE_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "brs/sampler.hpp"

namespace brs {

struct Query {
  std::string id;
  std::vector<double> values;  // schema order
};

struct PredictiveDistribution {
  std::string query_id;
  std::vector<double> outputs;  // non-abstaining model outputs, chain order
  std::size_t abstentions = 0;
  double mean = 0.0;      // abstentions contribute 0
  double coverage = 0.0;  // fraction of models that matched a rule
  Histogram hist;         // over outputs only
  bool no_support = false;
};

// CSV queries: header with the schema's attribute names plus an
// optional leading "id" column.
std::vector<Query> load_queries(std::istream& source, const Schema& schema);

// Per-retained-model output for a raw query: granulate under that
// model's cuts and classify; nullopt = abstain.
std::vector<std::optional<double>> per_model_outputs(
    const Chain& chain, std::span<const double> query);

// Posterior predictive mean: sum of outputs / retained count, with
// abstentions contributing 0. Out-of-range query values -> DomainError.
double predict_mean(const Chain& chain, std::span<const double> query);

PredictiveDistribution predict_distribution(const Chain& chain,
                                            const Query& query, int bins);

// Index of the retained model with maximal log posterior (ties ->
// earliest).
std::size_t map_model_index(const Chain& chain);

// Paper-style rule listing: certain rules under "Lower Approximation
// Rules", possible rules under "Upper Approximation Rules".
std::string format_rule_report(const RuleSet& rules, const Schema& schema,
                               std::span<const int> granules_per_attribute);

// Writes rules_map.txt, hist_rules.csv, hist_accuracy.csv,
// pred_<query-id>.csv, and summary.json into out_dir.
void emit_report(const Chain& chain, std::span<const Query> queries,
                 const std::filesystem::path& out_dir, int bins = 20);

}  // namespace brs

#endif  // BRS_PREDICTIVE_HPP
