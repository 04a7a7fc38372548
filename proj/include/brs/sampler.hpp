#ifndef BRS_SAMPLER_HPP
#define BRS_SAMPLER_HPP

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "brs/posterior.hpp"

namespace brs {

// Standard Metropolis duplicates the current state on rejection.
// PaperLiteral emits nothing on rejection and draws a fresh proposal;
// its stationary distribution is not guaranteed to be the posterior.
enum class RejectionMode { Standard, PaperLiteral };

struct ChainConfig {
  std::size_t burn_in = 500;
  std::size_t retain = 500;
  double step_fraction = 0.05;
  double lambda = 0.001;
  std::uint64_t seed = 0;
  RejectionMode rejection_mode = RejectionMode::Standard;
  int granules = 4;                        // k, uniform over attributes
  std::vector<int> granules_per_attribute; // overrides granules when set
  double holdout_fraction = 0.0;           // 0 -> accuracy on training data

  void validate() const;  // throws ConfigError
};

struct TraceRow {
  std::vector<double> cuts_flat;  // schema order
  double accuracy = 0.0;
  std::size_t n_rules = 0;
  double log_posterior = 0.0;
};

struct Chain {
  Schema schema;
  ChainConfig config;
  std::vector<RoughModel> retained;
  std::vector<TraceRow> trace;  // one row per retained model
  std::size_t acceptance_count = 0;
  std::size_t proposal_count = 0;

  double acceptance_rate() const {
    return proposal_count == 0
               ? 0.0
               : static_cast<double>(acceptance_count) / proposal_count;
  }

  nlohmann::json to_json() const;
  static Chain from_json(const nlohmann::json& j);
};

struct Histogram {
  std::vector<double> edges;        // bins + 1 entries
  std::vector<std::size_t> counts;  // bins entries

  std::size_t total() const;
};

struct Diagnostics {
  double acceptance_rate = 0.0;
  Histogram accuracy_hist;
  Histogram rule_count_hist;
  double mean_accuracy = 0.0;
  double mean_rules = 0.0;
  double mean_log_posterior = 0.0;

  nlohmann::json to_json() const;
};

nlohmann::json config_to_json(const ChainConfig& c);
ChainConfig config_from_json(const nlohmann::json& j);

// Pure acceptance rule: accept iff delta > 0 or delta > ln(xi).
bool metropolis_decision(double delta_log_posterior, double xi);

// Draws xi uniform on (0, 1) and applies metropolis_decision.
bool metropolis_accept(double log_posterior_current,
                       double log_posterior_proposal, std::mt19937_64& rng);

// Scores a granulization against a granular table.
RoughModel score_model(const InformationTable& table, const Granulization& g,
                       double lambda);

Chain run_chain(const InformationTable& table, const ChainConfig& config);

Histogram make_histogram(std::span<const double> values, int bins, double lo,
                         double hi);

Diagnostics chain_diagnostics(const Chain& chain, int bins);

// One CSV row per retained model: flattened cuts in schema order, then
// accuracy, n_rules, log_posterior.
void write_trace_csv(const Chain& chain, std::ostream& out);

}  // namespace brs

#endif  // BRS_SAMPLER_HPP
