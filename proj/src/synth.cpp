#include "brs/synth.hpp"

#include <random>

#include <nlohmann/json.hpp>

namespace brs {

void SynthSpec::validate() const {
  schema.validate();
  planted_cuts.validate(schema);
  if (noise < 0.0 || noise >= 0.5)
    throw ConfigError("noise must lie in [0, 0.5)");
  if (default_prob < 0.0 || default_prob > 1.0)
    throw ConfigError("default_prob must lie in [0, 1]");
  for (const auto& [sig, p] : rule_probs) {
    if (sig.size() != schema.size())
      throw ConfigError("planted rule signature length mismatch");
    if (p < 0.0 || p > 1.0)
      throw ConfigError("planted rule probability outside [0, 1]");
  }
}

std::pair<InformationTable, SynthTruth> generate(const SynthSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unif01(0.0, 1.0);

  InformationTable table;
  table.schema = spec.schema;

  SynthTruth truth;
  truth.cuts = spec.planted_cuts;
  truth.rule_probs = spec.rule_probs;

  for (std::size_t i = 0; i < spec.n_objects; ++i) {
    std::vector<double> row(spec.schema.size());
    GranuleSignature sig(spec.schema.size());
    for (std::size_t a = 0; a < spec.schema.size(); ++a) {
      const auto& attr = spec.schema.attributes[a];
      std::uniform_real_distribution<double> unif(attr.lo, attr.hi);
      row[a] = unif(rng);
      sig[a] = discretize_value(row[a], spec.planted_cuts.cuts[a]);
    }
    auto it = spec.rule_probs.find(sig);
    double p1 = it != spec.rule_probs.end() ? it->second : spec.default_prob;
    int decision = unif01(rng) < p1 ? 1 : 0;
    if (spec.noise > 0.0 && unif01(rng) < spec.noise) decision = 1 - decision;

    ++truth.signature_counts[sig];
    table.object_ids.push_back("obj" + std::to_string(i + 1));
    table.values.push_back(std::move(row));
    table.decisions.push_back(decision);
  }
  return {std::move(table), std::move(truth)};
}

std::map<GranuleSignature, double> random_deterministic_rule(
    const Schema& schema, const Granulization& cuts, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);

  std::map<GranuleSignature, double> rule;
  GranuleSignature sig(schema.size(), 0);
  // odometer walk over the full granule grid
  while (true) {
    rule[sig] = coin(rng) ? 1.0 : 0.0;
    std::size_t a = 0;
    while (a < sig.size()) {
      if (++sig[a] < cuts.granules(a)) break;
      sig[a] = 0;
      ++a;
    }
    if (a == sig.size()) break;
  }
  return rule;
}

Schema demographic_schema() {
  Schema s;
  s.attributes = {
      {"race", AttributeKind::Categorical, 1.0, 4.0},
      {"mothers_age", AttributeKind::Numeric, 14.0, 50.0},
      {"education", AttributeKind::Categorical, 0.0, 13.0},
      {"gravidity", AttributeKind::Categorical, 0.0, 12.0},
      {"parity", AttributeKind::Categorical, 0.0, 10.0},
      {"fathers_age", AttributeKind::Numeric, 15.0, 70.0},
  };
  s.decision_name = "hiv";
  return s;
}

namespace {

GranuleSignature sig_from_json(const nlohmann::json& j) {
  return j.get<GranuleSignature>();
}

}  // namespace

nlohmann::json SynthSpec::to_json() const {
  nlohmann::json rules = nlohmann::json::array();
  for (const auto& [sig, p] : rule_probs)
    rules.push_back({{"signature", sig}, {"p1", p}});
  return {{"schema", schema_to_json(schema)},
          {"cuts", planted_cuts.to_json(schema)},
          {"rules", rules},
          {"default_prob", default_prob},
          {"noise", noise},
          {"n_objects", n_objects},
          {"seed", seed}};
}

SynthSpec SynthSpec::from_json(const nlohmann::json& j) {
  SynthSpec spec;
  spec.schema = schema_from_json(j.at("schema"));
  spec.planted_cuts = Granulization::from_json(j.at("cuts"), spec.schema);
  spec.default_prob = j.value("default_prob", spec.default_prob);
  spec.noise = j.value("noise", spec.noise);
  spec.n_objects = j.at("n_objects").get<std::size_t>();
  spec.seed = j.value("seed", spec.seed);
  if (j.contains("rules")) {
    const auto& jr = j.at("rules");
    if (jr.is_string() && jr.get<std::string>() == "random") {
      spec.rule_probs = random_deterministic_rule(
          spec.schema, spec.planted_cuts,
          j.value("rule_seed", spec.seed ^ 0x9e3779b97f4a7c15ULL));
    } else {
      for (const auto& r : jr)
        spec.rule_probs[sig_from_json(r.at("signature"))] =
            r.at("p1").get<double>();
    }
  }
  spec.validate();
  return spec;
}

nlohmann::json SynthTruth::to_json(const Schema& schema) const {
  nlohmann::json rules = nlohmann::json::array();
  for (const auto& [sig, p] : rule_probs)
    rules.push_back({{"signature", sig}, {"p1", p}});
  nlohmann::json counts = nlohmann::json::array();
  for (const auto& [sig, n] : signature_counts)
    counts.push_back({{"signature", sig}, {"count", n}});
  return {{"cuts", cuts.to_json(schema)},
          {"rules", rules},
          {"signature_counts", counts}};
}

}  // namespace brs
