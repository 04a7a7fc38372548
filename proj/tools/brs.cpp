// Command-line front end: train / predict / rules / synth / report.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "brs/format.hpp"
#include "brs/predictive.hpp"
#include "brs/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

json read_json_file(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  json j;
  try {
    f >> j;
  } catch (const json::parse_error& e) {
    throw brs::ParseError(path.string() + ": " + e.what());
  }
  return j;
}

// Removes everything this run created if it fails partway.
class OutputTracker {
 public:
  std::ofstream create(const fs::path& p) {
    std::ofstream f(p);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    files_.push_back(p);
    return f;
  }
  void track_dir(const fs::path& p) { dirs_.push_back(p); }
  void commit() { files_.clear(); dirs_.clear(); }
  ~OutputTracker() {
    std::error_code ec;
    for (const auto& p : files_) fs::remove(p, ec);
    for (const auto& p : dirs_) fs::remove_all(p, ec);
  }

 private:
  std::vector<fs::path> files_;
  std::vector<fs::path> dirs_;
};

brs::CmpOp parse_op(const std::string& s) {
  if (s == "==" || s == "eq") return brs::CmpOp::Eq;
  if (s == "!=" || s == "ne") return brs::CmpOp::Ne;
  if (s == "<" || s == "lt") return brs::CmpOp::Lt;
  if (s == "<=" || s == "le") return brs::CmpOp::Le;
  if (s == ">" || s == "gt") return brs::CmpOp::Gt;
  if (s == ">=" || s == "ge") return brs::CmpOp::Ge;
  throw brs::ConfigError("unknown comparison operator: " + s);
}

std::vector<brs::ConsistencyPredicate> parse_predicates(const json& j) {
  std::vector<brs::ConsistencyPredicate> preds;
  for (const auto& jp : j) {
    if (jp.is_string()) {
      std::string name = jp.get<std::string>();
      if (name == "gravidity_parity") {
        preds.push_back(brs::gravidity_parity_predicate());
      } else if (name == "parity_exceeds_gravidity") {
        preds.push_back(brs::parity_exceeds_gravidity_predicate());
      } else {
        throw brs::ConfigError("unknown built-in predicate: " + name);
      }
      continue;
    }
    brs::ConsistencyPredicate p;
    p.name = jp.at("name").get<std::string>();
    for (const auto& jc : jp.at("all_of")) {
      brs::Condition c;
      c.attr = jc.at("attr").get<std::string>();
      c.op = parse_op(jc.at("op").get<std::string>());
      if (jc.contains("rhs_attr"))
        c.rhs_attr = jc.at("rhs_attr").get<std::string>();
      else
        c.value = jc.at("value").get<double>();
      p.all_of.push_back(std::move(c));
    }
    preds.push_back(std::move(p));
  }
  return preds;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 over (seed + index)
  std::uint64_t z = seed + index * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct TrainOptions {
  std::string config_path;
  std::string out_dir;
  int chains = 1;
  // flag overrides, negative/empty = not set
  std::int64_t seed = -1;
  std::int64_t retain = -1;
  std::int64_t burn_in = -1;
  double lambda = -1.0;
  int granules = -1;
};

int cmd_train(const TrainOptions& opt) {
  json cfg = read_json_file(opt.config_path);

  brs::Schema schema = brs::schema_from_json(cfg.at("schema"));
  brs::ChainConfig chain_cfg = brs::config_from_json(cfg);
  if (opt.seed >= 0) chain_cfg.seed = static_cast<std::uint64_t>(opt.seed);
  if (opt.retain >= 0) chain_cfg.retain = static_cast<std::size_t>(opt.retain);
  if (opt.burn_in >= 0)
    chain_cfg.burn_in = static_cast<std::size_t>(opt.burn_in);
  if (opt.lambda >= 0.0) chain_cfg.lambda = opt.lambda;
  if (opt.granules >= 0) chain_cfg.granules = opt.granules;
  chain_cfg.validate();

  fs::path out_dir = !opt.out_dir.empty()
                         ? fs::path(opt.out_dir)
                         : fs::path(cfg.value("output_dir", "out"));

  std::string data_path = cfg.at("data").get<std::string>();
  std::ifstream data(data_path);
  if (!data) throw std::runtime_error("cannot open data file " + data_path);

  std::string missing_token = cfg.value("missing_token", "?");
  brs::InformationTable raw = brs::load_table(data, schema, missing_token);

  std::vector<brs::ConsistencyPredicate> preds;
  if (cfg.contains("predicates")) preds = parse_predicates(cfg["predicates"]);
  auto [table, report] = brs::clean_table(raw, preds);
  if (table.n_objects() == 0)
    throw brs::DomainError("no rows left after cleaning; refusing to train");

  fs::create_directories(out_dir);
  OutputTracker outputs;

  {
    auto f = outputs.create(out_dir / "clean_report.json");
    f << report.to_json().dump(2) << "\n";
  }

  auto run_one = [&](std::uint64_t seed, const std::string& suffix) {
    brs::ChainConfig cc = chain_cfg;
    cc.seed = seed;
    brs::Chain chain = brs::run_chain(table, cc);
    brs::Diagnostics diag = brs::chain_diagnostics(chain, 20);
    {
      auto f = outputs.create(out_dir / ("trace" + suffix + ".csv"));
      brs::write_trace_csv(chain, f);
    }
    {
      auto f = outputs.create(out_dir / ("chain" + suffix + ".json"));
      f << chain.to_json().dump() << "\n";
    }
    {
      auto f = outputs.create(out_dir / ("diagnostics" + suffix + ".json"));
      f << diag.to_json().dump(2) << "\n";
    }
    std::cout << "chain" << suffix << ": retained " << chain.retained.size()
              << " models, mean accuracy " << brs::fmt_double(diag.mean_accuracy)
              << ", mean rules " << brs::fmt_double(diag.mean_rules)
              << ", acceptance rate "
              << brs::fmt_double(diag.acceptance_rate) << "\n";
  };

  if (opt.chains <= 1) {
    run_one(chain_cfg.seed, "");
  } else {
    // independent seeded chains; outputs are written after each joins
    std::vector<brs::Chain> chains(static_cast<std::size_t>(opt.chains));
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(chains.size());
    for (std::size_t i = 0; i < chains.size(); ++i) {
      workers.emplace_back([&, i] {
        try {
          brs::ChainConfig cc = chain_cfg;
          cc.seed = derive_seed(chain_cfg.seed, i);
          chains[i] = brs::run_chain(table, cc);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
    }
    for (auto& w : workers) w.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
    for (std::size_t i = 0; i < chains.size(); ++i) {
      std::string suffix = "_" + std::to_string(i);
      brs::Diagnostics diag = brs::chain_diagnostics(chains[i], 20);
      {
        auto f = outputs.create(out_dir / ("trace" + suffix + ".csv"));
        brs::write_trace_csv(chains[i], f);
      }
      {
        auto f = outputs.create(out_dir / ("chain" + suffix + ".json"));
        f << chains[i].to_json().dump() << "\n";
      }
      {
        auto f = outputs.create(out_dir / ("diagnostics" + suffix + ".json"));
        f << diag.to_json().dump(2) << "\n";
      }
      std::cout << "chain" << suffix << ": mean accuracy "
                << brs::fmt_double(diag.mean_accuracy) << ", mean rules "
                << brs::fmt_double(diag.mean_rules) << ", acceptance rate "
                << brs::fmt_double(diag.acceptance_rate) << "\n";
    }
  }

  outputs.commit();
  return kExitOk;
}

int cmd_predict(const std::string& chain_path, const std::string& query_path,
                const std::string& out_dir, int bins) {
  brs::Chain chain = brs::Chain::from_json(read_json_file(chain_path));

  std::ifstream qf(query_path);
  if (!qf) throw std::runtime_error("cannot open query file " + query_path);
  auto queries = brs::load_queries(qf, chain.schema);
  if (queries.empty())
    std::cerr << "warning: query file has no rows; nothing to predict\n";

  fs::create_directories(out_dir);
  OutputTracker outputs;
  json summary = json::array();
  for (const auto& q : queries) {
    brs::PredictiveDistribution dist =
        brs::predict_distribution(chain, q, bins);
    auto f = outputs.create(fs::path(out_dir) / ("pred_" + q.id + ".csv"));
    f << "bin_lo,bin_hi,count\n";
    for (std::size_t b = 0; b < dist.hist.counts.size(); ++b)
      f << brs::fmt_double(dist.hist.edges[b]) << ","
        << brs::fmt_double(dist.hist.edges[b + 1]) << ","
        << dist.hist.counts[b] << "\n";
    summary.push_back({{"id", q.id},
                       {"mean", dist.mean},
                       {"coverage", dist.coverage},
                       {"abstentions", dist.abstentions},
                       {"no_support", dist.no_support}});
    std::cout << q.id << ": mean plausibility " << brs::fmt_double(dist.mean)
              << ", coverage " << brs::fmt_double(dist.coverage) << "\n";
  }
  {
    auto f = outputs.create(fs::path(out_dir) / "predictions.json");
    f << summary.dump(2) << "\n";
  }
  outputs.commit();
  return kExitOk;
}

int cmd_rules(const std::string& chain_path, const std::string& out_path) {
  brs::Chain chain = brs::Chain::from_json(read_json_file(chain_path));
  std::vector<int> granules = chain.config.granules_per_attribute;
  if (granules.empty())
    granules.assign(chain.schema.size(), chain.config.granules);
  std::size_t map_idx = brs::map_model_index(chain);
  std::string report = brs::format_rule_report(
      chain.retained[map_idx].rules, chain.schema, granules);
  if (out_path.empty()) {
    std::cout << report;
  } else {
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot write " + out_path);
    f << report;
  }
  return kExitOk;
}

int cmd_synth(const std::string& spec_path, const std::string& out_path,
              const std::string& truth_path) {
  brs::SynthSpec spec = brs::SynthSpec::from_json(read_json_file(spec_path));
  auto [table, truth] = brs::generate(spec);

  OutputTracker outputs;
  {
    auto f = outputs.create(out_path);
    brs::write_table_csv(table, f);
  }
  if (!truth_path.empty()) {
    auto f = outputs.create(truth_path);
    f << truth.to_json(spec.schema).dump(2) << "\n";
  }
  outputs.commit();
  std::cout << "wrote " << table.n_objects() << " rows to " << out_path
            << "\n";
  return kExitOk;
}

int cmd_report(const std::string& chain_path, const std::string& query_path,
               const std::string& out_dir, int bins) {
  brs::Chain chain = brs::Chain::from_json(read_json_file(chain_path));
  std::vector<brs::Query> queries;
  if (!query_path.empty()) {
    std::ifstream qf(query_path);
    if (!qf) throw std::runtime_error("cannot open query file " + query_path);
    queries = brs::load_queries(qf, chain.schema);
  }
  brs::emit_report(chain, queries, out_dir, bins);
  std::cout << "report written to " << out_dir << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian rough set classifier trained by MCMC over the "
               "granule space"};
  app.require_subcommand(1);

  TrainOptions topt;
  auto* train = app.add_subcommand("train", "Run an MCMC training chain");
  train->add_option("--config", topt.config_path, "Run config JSON")
      ->required();
  train->add_option("--out", topt.out_dir, "Output directory");
  train->add_option("--seed", topt.seed, "Override seed");
  train->add_option("--retain", topt.retain, "Override retained sample count");
  train->add_option("--burn-in", topt.burn_in, "Override burn-in length");
  train->add_option("--lambda", topt.lambda, "Override rule-count penalty");
  train->add_option("--k", topt.granules, "Override granules per attribute");
  train->add_option("--chains", topt.chains, "Independent seeded chains");

  std::string chain_path, query_path, out_path, spec_path, truth_path;
  int bins = 20;
  auto* predict =
      app.add_subcommand("predict", "Posterior predictive for queries");
  predict->add_option("--chain", chain_path, "Chain JSON artifact")
      ->required();
  predict->add_option("--queries", query_path, "Query CSV")->required();
  predict->add_option("--out", out_path, "Output directory")->required();
  predict->add_option("--bins", bins, "Histogram bins");

  auto* rules = app.add_subcommand("rules", "Print the MAP model's rules");
  rules->add_option("--chain", chain_path, "Chain JSON artifact")->required();
  rules->add_option("--out", out_path, "Output file (stdout if omitted)");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic table");
  synth->add_option("--spec", spec_path, "Synth spec JSON")->required();
  synth->add_option("--out", out_path, "Output CSV")->required();
  synth->add_option("--truth", truth_path, "Ground-truth JSON");

  auto* report = app.add_subcommand("report", "Emit the full report bundle");
  report->add_option("--chain", chain_path, "Chain JSON artifact")->required();
  report->add_option("--queries", query_path, "Query CSV");
  report->add_option("--out", out_path, "Output directory")->required();
  report->add_option("--bins", bins, "Histogram bins");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (train->parsed()) return cmd_train(topt);
    if (predict->parsed())
      return cmd_predict(chain_path, query_path, out_path, bins);
    if (rules->parsed()) return cmd_rules(chain_path, out_path);
    if (synth->parsed()) return cmd_synth(spec_path, out_path, truth_path);
    if (report->parsed())
      return cmd_report(chain_path, query_path, out_path, bins);
  } catch (const brs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const brs::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitConfig;
}
