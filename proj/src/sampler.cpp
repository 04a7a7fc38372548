#include "brs/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include <nlohmann/json.hpp>

#include "brs/format.hpp"

namespace brs {

void ChainConfig::validate() const {
  if (retain < 1) throw ConfigError("retain must be >= 1");
  if (!(step_fraction > 0.0 && step_fraction <= 1.0))
    throw ConfigError("step_fraction must lie in (0, 1]");
  if (lambda < 0.0) throw ConfigError("lambda must be >= 0");
  if (granules_per_attribute.empty()) {
    if (granules < 2) throw ConfigError("granules must be >= 2");
  } else {
    for (int k : granules_per_attribute)
      if (k < 2) throw ConfigError("granules must be >= 2");
  }
  if (holdout_fraction < 0.0 || holdout_fraction >= 1.0)
    throw ConfigError("holdout_fraction must lie in [0, 1)");
}

bool metropolis_decision(double delta_log_posterior, double xi) {
  if (delta_log_posterior > 0.0) return true;
  return delta_log_posterior > std::log(xi);
}

bool metropolis_accept(double log_posterior_current,
                       double log_posterior_proposal, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double xi = unif(rng);
  while (xi == 0.0) xi = unif(rng);  // ln 0 undefined
  return metropolis_decision(log_posterior_proposal - log_posterior_current,
                             xi);
}

namespace {

RoughModel score_granular(const GranularTable& train,
                          const GranularTable& eval, Granulization g,
                          double lambda) {
  RoughModel m;
  m.rules = induce_rules(train);
  m.rule_count = m.rules.size();
  m.accuracy = predictive_accuracy(m.rules, eval);
  m.log_posterior = log_posterior(m.accuracy, m.rule_count, lambda);
  m.g = std::move(g);
  return m;
}

TraceRow trace_of(const RoughModel& m) {
  TraceRow row;
  for (const auto& cuts : m.g.cuts)
    row.cuts_flat.insert(row.cuts_flat.end(), cuts.begin(), cuts.end());
  row.accuracy = m.accuracy;
  row.n_rules = m.rule_count;
  row.log_posterior = m.log_posterior;
  return row;
}

}  // namespace

RoughModel score_model(const InformationTable& table, const Granulization& g,
                       double lambda) {
  GranularTable gt = granulate_table(table, g);
  return score_granular(gt, gt, g, lambda);
}

Chain run_chain(const InformationTable& table, const ChainConfig& config) {
  config.validate();
  if (table.n_objects() == 0)
    throw DomainError("run_chain: empty table");
  table.schema.validate();

  std::mt19937_64 rng(config.seed);

  // Optional holdout: rules fit on the training part, accuracy
  // measured on the held-out part.
  InformationTable train = table;
  InformationTable eval = table;
  if (config.holdout_fraction > 0.0) {
    std::vector<std::size_t> order(table.n_objects());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::size_t n_hold = std::max<std::size_t>(
        1, static_cast<std::size_t>(config.holdout_fraction *
                                    static_cast<double>(order.size())));
    if (n_hold >= order.size())
      throw ConfigError("holdout leaves no training rows");
    auto subset = [&](std::size_t from, std::size_t to) {
      InformationTable t;
      t.schema = table.schema;
      for (std::size_t i = from; i < to; ++i) {
        std::size_t o = order[i];
        t.object_ids.push_back(table.object_ids[o]);
        t.values.push_back(table.values[o]);
        t.decisions.push_back(table.decisions[o]);
      }
      return t;
    };
    eval = subset(0, n_hold);
    train = subset(n_hold, order.size());
  }

  std::vector<int> granules = config.granules_per_attribute;
  if (granules.empty())
    granules.assign(table.schema.size(), config.granules);

  auto score = [&](Granulization g) {
    GranularTable gt_train = granulate_table(train, g);
    if (config.holdout_fraction > 0.0) {
      GranularTable gt_eval = granulate_table(eval, g);
      return score_granular(gt_train, gt_eval, std::move(g), config.lambda);
    }
    return score_granular(gt_train, gt_train, std::move(g), config.lambda);
  };

  Chain chain;
  chain.schema = table.schema;
  chain.config = config;

  RoughModel current = score(random_granulization(table.schema, granules, rng));

  const std::size_t total = config.burn_in + config.retain;
  const std::size_t proposal_budget =
      std::max<std::size_t>(10000, 10000 * total);
  std::size_t emitted = 0;
  while (emitted < total) {
    if (chain.proposal_count >= proposal_budget)
      throw ConfigError("run_chain: proposal budget exhausted "
                        "(paper-literal mode may not terminate on sharply "
                        "peaked posteriors)");
    ++chain.proposal_count;
    bool accepted = false;
    try {
      Granulization g =
          perturb(current.g, table.schema, config.step_fraction, rng);
      RoughModel proposal = score(std::move(g));
      accepted =
          metropolis_accept(current.log_posterior, proposal.log_posterior, rng);
      if (accepted) {
        ++chain.acceptance_count;
        current = std::move(proposal);
      }
    } catch (const ProposalError&) {
      accepted = false;  // unattainable proposal, treated as rejection
    }

    if (!accepted && config.rejection_mode == RejectionMode::PaperLiteral)
      continue;  // no state emitted; draw a fresh proposal

    ++emitted;
    if (emitted > config.burn_in) {
      chain.retained.push_back(current);
      chain.trace.push_back(trace_of(current));
    }
  }
  return chain;
}

std::size_t Histogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

Histogram make_histogram(std::span<const double> values, int bins, double lo,
                         double hi) {
  if (bins < 1) throw DomainError("make_histogram: bins must be >= 1");
  Histogram h;
  if (lo >= hi) {  // degenerate data range: one bin around the point
    h.edges = {lo - 0.5, lo + 0.5};
    h.counts = {values.size()};
    return h;
  }
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int b = 0; b <= bins; ++b)
    h.edges[b] = lo + (hi - lo) * static_cast<double>(b) / bins;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (double v : values) {
    double t = (v - lo) / (hi - lo);
    int b = std::clamp(static_cast<int>(t * bins), 0, bins - 1);
    ++h.counts[static_cast<std::size_t>(b)];
  }
  return h;
}

Diagnostics chain_diagnostics(const Chain& chain, int bins) {
  if (chain.retained.empty())
    throw DomainError("chain_diagnostics: empty chain");
  if (bins < 1) throw DomainError("chain_diagnostics: bins must be >= 1");

  std::vector<double> acc, nrules, lp;
  for (const auto& m : chain.retained) {
    acc.push_back(m.accuracy);
    nrules.push_back(static_cast<double>(m.rule_count));
    lp.push_back(m.log_posterior);
  }
  auto [amin, amax] = std::minmax_element(acc.begin(), acc.end());
  auto [rmin, rmax] = std::minmax_element(nrules.begin(), nrules.end());

  Diagnostics d;
  d.acceptance_rate = chain.acceptance_rate();
  d.accuracy_hist = make_histogram(acc, bins, *amin, *amax);
  d.rule_count_hist = make_histogram(nrules, bins, *rmin, *rmax);
  auto mean = [](const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) /
           static_cast<double>(v.size());
  };
  d.mean_accuracy = mean(acc);
  d.mean_rules = mean(nrules);
  d.mean_log_posterior = mean(lp);
  return d;
}

void write_trace_csv(const Chain& chain, std::ostream& out) {
  if (chain.retained.empty())
    throw DomainError("write_trace_csv: empty chain");
  for (const auto& a : chain.schema.attributes) {
    std::size_t n_cuts = 0;
    // cut counts may vary per attribute; take them from the first model
    const auto& g = chain.retained.front().g;
    n_cuts = g.cuts[chain.schema.index_of(a.name)].size();
    for (std::size_t c = 0; c < n_cuts; ++c)
      out << a.name << "_cut" << (c + 1) << ",";
  }
  out << "accuracy,n_rules,log_posterior\n";
  for (const auto& row : chain.trace) {
    for (double c : row.cuts_flat) out << fmt_double(c) << ",";
    out << fmt_double(row.accuracy) << "," << row.n_rules << ","
        << fmt_double(row.log_posterior) << "\n";
  }
}

nlohmann::json Diagnostics::to_json() const {
  auto hist = [](const Histogram& h) {
    return nlohmann::json{{"edges", h.edges}, {"counts", h.counts}};
  };
  return {{"acceptance_rate", acceptance_rate},
          {"accuracy_histogram", hist(accuracy_hist)},
          {"rule_count_histogram", hist(rule_count_hist)},
          {"mean_accuracy", mean_accuracy},
          {"mean_rules", mean_rules},
          {"mean_log_posterior", mean_log_posterior}};
}

namespace {

std::string rejection_mode_name(RejectionMode m) {
  return m == RejectionMode::Standard ? "standard" : "paper-literal";
}

RejectionMode rejection_mode_from(const std::string& s) {
  if (s == "standard") return RejectionMode::Standard;
  if (s == "paper-literal" || s == "paper_literal")
    return RejectionMode::PaperLiteral;
  throw ConfigError("unknown rejection_mode: " + s);
}

}  // namespace

nlohmann::json config_to_json(const ChainConfig& c) {
  return {{"burn_in", c.burn_in},
          {"retain", c.retain},
          {"step_fraction", c.step_fraction},
          {"lambda", c.lambda},
          {"seed", c.seed},
          {"rejection_mode", rejection_mode_name(c.rejection_mode)},
          {"granules", c.granules},
          {"granules_per_attribute", c.granules_per_attribute},
          {"holdout_fraction", c.holdout_fraction}};
}

ChainConfig config_from_json(const nlohmann::json& j) {
  ChainConfig c;
  c.burn_in = j.value("burn_in", c.burn_in);
  c.retain = j.value("retain", c.retain);
  c.step_fraction = j.value("step_fraction", c.step_fraction);
  c.lambda = j.value("lambda", c.lambda);
  c.seed = j.value("seed", c.seed);
  if (j.contains("rejection_mode"))
    c.rejection_mode = rejection_mode_from(j.at("rejection_mode"));
  c.granules = j.value("granules", c.granules);
  c.granules_per_attribute =
      j.value("granules_per_attribute", c.granules_per_attribute);
  c.holdout_fraction = j.value("holdout_fraction", c.holdout_fraction);
  return c;
}

nlohmann::json Chain::to_json() const {
  nlohmann::json models = nlohmann::json::array();
  for (const auto& m : retained) {
    models.push_back({{"cuts", m.g.to_json(schema)},
                      {"accuracy", m.accuracy},
                      {"n_rules", m.rule_count},
                      {"log_posterior", m.log_posterior},
                      {"rules", m.rules.to_json()}});
  }
  return {{"schema", schema_to_json(schema)},
          {"config", config_to_json(config)},
          {"acceptance_count", acceptance_count},
          {"proposal_count", proposal_count},
          {"acceptance_rate", acceptance_rate()},
          {"models", models}};
}

Chain Chain::from_json(const nlohmann::json& j) {
  Chain chain;
  chain.schema = schema_from_json(j.at("schema"));
  chain.config = config_from_json(j.at("config"));
  chain.acceptance_count = j.at("acceptance_count").get<std::size_t>();
  chain.proposal_count = j.at("proposal_count").get<std::size_t>();
  for (const auto& jm : j.at("models")) {
    RoughModel m;
    m.g = Granulization::from_json(jm.at("cuts"), chain.schema);
    m.accuracy = jm.at("accuracy").get<double>();
    m.rule_count = jm.at("n_rules").get<std::size_t>();
    m.log_posterior = jm.at("log_posterior").get<double>();
    m.rules = RuleSet::from_json(jm.at("rules"));
    chain.trace.push_back(trace_of(m));
    chain.retained.push_back(std::move(m));
  }
  return chain;
}

}  // namespace brs
