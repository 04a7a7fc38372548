#include "brs/granulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

namespace brs {

namespace {

double min_separation(const AttributeSpec& spec) {
  return kMinCutSeparationFraction * spec.width();
}

}  // namespace

void Granulization::validate(const Schema& schema) const {
  if (cuts.size() != schema.size())
    throw ConfigError("granulization does not cover every attribute");
  for (std::size_t a = 0; a < cuts.size(); ++a) {
    const auto& spec = schema.attributes[a];
    const double delta = min_separation(spec);
    double prev = -std::numeric_limits<double>::infinity();
    for (double c : cuts[a]) {
      if (!(c > spec.lo && c < spec.hi))
        throw ConfigError("attribute " + spec.name +
                          ": cut outside open declared range");
      if (prev > -std::numeric_limits<double>::infinity() && c - prev < delta)
        throw ConfigError("attribute " + spec.name +
                          ": cuts closer than minimum separation");
      if (c <= prev)
        throw ConfigError("attribute " + spec.name +
                          ": cuts not strictly increasing");
      prev = c;
    }
  }
}

nlohmann::json Granulization::to_json(const Schema& schema) const {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t a = 0; a < cuts.size(); ++a)
    j[schema.attributes[a].name] = cuts[a];
  return j;
}

Granulization Granulization::from_json(const nlohmann::json& j,
                                       const Schema& schema) {
  Granulization g;
  g.cuts.resize(schema.size());
  for (std::size_t a = 0; a < schema.size(); ++a) {
    const auto& name = schema.attributes[a].name;
    if (!j.contains(name))
      throw SchemaError("granulization missing attribute: " + name);
    g.cuts[a] = j.at(name).get<std::vector<double>>();
  }
  g.validate(schema);
  return g;
}

int discretize_value(double value, std::span<const double> cuts) {
  // number of cuts <= value
  auto it = std::upper_bound(cuts.begin(), cuts.end(), value);
  return static_cast<int>(it - cuts.begin());
}

GranularTable granulate_table(const InformationTable& table,
                              const Granulization& g) {
  if (g.cuts.size() != table.schema.size())
    throw SchemaError("granulization does not cover every schema attribute");
  GranularTable gt;
  gt.granulization = g;
  gt.decisions = table.decisions;
  gt.signatures.resize(table.n_objects());
  for (std::size_t i = 0; i < table.n_objects(); ++i) {
    GranuleSignature sig(table.schema.size());
    for (std::size_t a = 0; a < table.schema.size(); ++a)
      sig[a] = discretize_value(table.values[i][a], g.cuts[a]);
    gt.signatures[i] = std::move(sig);
  }
  return gt;
}

Granulization random_granulization(const Schema& schema,
                                   std::span<const int> granules_per_attribute,
                                   std::mt19937_64& rng) {
  if (granules_per_attribute.size() != schema.size())
    throw ConfigError("granule counts do not cover every attribute");
  Granulization g;
  g.cuts.resize(schema.size());
  for (std::size_t a = 0; a < schema.size(); ++a) {
    const auto& spec = schema.attributes[a];
    const int k = granules_per_attribute[a];
    if (k < 2) throw ConfigError("attribute " + spec.name + ": need k >= 2");
    const double delta = min_separation(spec);
    if (spec.width() <= (k + 1) * delta)
      throw ConfigError("attribute " + spec.name +
                        ": range too narrow for " + std::to_string(k) +
                        " granules");
    std::uniform_real_distribution<double> unif(spec.lo, spec.hi);
    std::vector<double> cuts(static_cast<std::size_t>(k) - 1);
    for (int attempt = 0;; ++attempt) {
      for (auto& c : cuts) c = unif(rng);
      std::sort(cuts.begin(), cuts.end());
      bool ok = cuts.front() > spec.lo && cuts.back() < spec.hi;
      for (std::size_t i = 1; ok && i < cuts.size(); ++i)
        ok = cuts[i] - cuts[i - 1] >= delta;
      if (ok) break;
      if (attempt >= 1000)
        throw ConfigError("attribute " + spec.name +
                          ": cannot place separated cuts");
    }
    g.cuts[a] = std::move(cuts);
  }
  return g;
}

Granulization random_granulization(const Schema& schema, int granules,
                                   std::mt19937_64& rng) {
  std::vector<int> k(schema.size(), granules);
  return random_granulization(schema, k, rng);
}

Granulization perturb(const Granulization& g, const Schema& schema,
                      double step_fraction, std::mt19937_64& rng,
                      int max_retries) {
  if (step_fraction < 0.0 || step_fraction > 1.0)
    throw ConfigError("step_fraction must lie in (0, 1]");
  std::uniform_int_distribution<std::size_t> pick_attr(0, g.cuts.size() - 1);

  for (int attempt = 0; attempt < max_retries; ++attempt) {
    std::size_t a = pick_attr(rng);
    if (g.cuts[a].empty()) continue;
    const auto& spec = schema.attributes[a];
    const double delta = min_separation(spec);
    std::uniform_int_distribution<std::size_t> pick_cut(0,
                                                        g.cuts[a].size() - 1);
    std::size_t c = pick_cut(rng);
    std::normal_distribution<double> gauss(0.0, step_fraction * spec.width());

    std::vector<double> cuts = g.cuts[a];
    cuts[c] += gauss(rng);
    cuts[c] = std::clamp(cuts[c], spec.lo + delta, spec.hi - delta);
    std::sort(cuts.begin(), cuts.end());

    bool ok = true;
    for (std::size_t i = 1; ok && i < cuts.size(); ++i)
      ok = cuts[i] - cuts[i - 1] >= delta;
    if (!ok) continue;

    Granulization out = g;
    out.cuts[a] = std::move(cuts);
    return out;
  }
  throw ProposalError("perturb: retry budget exhausted");
}

std::string granule_label(int index, int granules) {
  static const char* k4[] = {"Low", "Med", "High", "Very High"};
  if (granules == 2) return index == 0 ? "Low" : "High";
  if (granules == 3) return k4[index == 2 ? 2 : index];
  if (granules == 4 && index < 4) return k4[index];
  return "G" + std::to_string(index);
}

}  // namespace brs
