#ifndef BRS_GRANULATION_HPP
#define BRS_GRANULATION_HPP

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "brs/table.hpp"

namespace brs {

// Minimum separation between adjacent cuts, as a fraction of range width.
inline constexpr double kMinCutSeparationFraction = 1e-6;

using GranuleSignature = std::vector<int>;

// Per-attribute ordered cut points; the MCMC state.
// k granules per attribute correspond to k-1 cuts.
struct Granulization {
  std::vector<std::vector<double>> cuts;  // schema order

  std::size_t n_attributes() const { return cuts.size(); }
  int granules(std::size_t attr) const {
    return static_cast<int>(cuts[attr].size()) + 1;
  }
  // Strictly increasing, strictly inside the range, delta-separated.
  void validate(const Schema& schema) const;

  nlohmann::json to_json(const Schema& schema) const;
  static Granulization from_json(const nlohmann::json& j, const Schema& schema);
};

// Discretized view of a table: one signature per object plus the
// decisions, cached so rough-set operations never touch raw values.
struct GranularTable {
  Granulization granulization;
  std::vector<GranuleSignature> signatures;
  std::vector<int> decisions;

  std::size_t n_objects() const { return signatures.size(); }
};

// Index of the half-open interval [cut_{i-1}, cut_i) containing value;
// below the first cut -> 0, at or above the last cut -> cuts.size().
int discretize_value(double value, std::span<const double> cuts);

GranularTable granulate_table(const InformationTable& table,
                              const Granulization& g);

// Cuts drawn uniformly inside each declared range, sorted, respecting
// the minimum separation. granules_per_attribute entries must be >= 2.
Granulization random_granulization(const Schema& schema,
                                   std::span<const int> granules_per_attribute,
                                   std::mt19937_64& rng);
Granulization random_granulization(const Schema& schema, int granules,
                                   std::mt19937_64& rng);

// Moves one cut of one attribute by a zero-mean Gaussian displacement
// with sd = step_fraction * range width, then re-sorts and clamps.
// Symmetric in distribution. Throws ProposalError when the retry budget
// is exhausted.
Granulization perturb(const Granulization& g, const Schema& schema,
                      double step_fraction, std::mt19937_64& rng,
                      int max_retries = 100);

// "Low", "Med", "High", "Very High" for k = 4; shorter prefixes for
// smaller k; "G<i>" beyond that.
std::string granule_label(int index, int granules);

}  // namespace brs

#endif  // BRS_GRANULATION_HPP
