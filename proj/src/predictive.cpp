#include "brs/predictive.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "brs/format.hpp"

namespace brs {

namespace {

void check_query(const Chain& chain, std::span<const double> query) {
  if (chain.retained.empty())
    throw DomainError("prediction: empty chain");
  if (query.size() != chain.schema.size())
    throw SchemaError("query length does not match schema");
  for (std::size_t a = 0; a < query.size(); ++a) {
    const auto& spec = chain.schema.attributes[a];
    if (std::isnan(query[a]) || query[a] < spec.lo || query[a] > spec.hi)
      throw DomainError("query value for " + spec.name +
                        " outside declared range");
  }
}

std::string sanitize_filename(const std::string& id) {
  std::string out;
  for (char c : id)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
            c == '_')
               ? c
               : '_';
  return out.empty() ? "query" : out;
}

void write_histogram_csv(const Histogram& h, const std::string& value_name,
                         std::ostream& out) {
  out << "bin_lo,bin_hi,count\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b)
    out << fmt_double(h.edges[b]) << "," << fmt_double(h.edges[b + 1]) << ","
        << h.counts[b] << "\n";
  (void)value_name;
}

}  // namespace

std::vector<Query> load_queries(std::istream& source, const Schema& schema) {
  std::string line;
  if (!std::getline(source, line)) return {};  // empty file: no queries

  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(s);
    while (std::getline(ss, cell, ',')) {
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' '))
        cell.pop_back();
      while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
      cells.push_back(cell);
    }
    return cells;
  };

  auto header = split(line);
  bool has_id = !header.empty() && header.front() == "id";
  std::vector<std::size_t> cols(schema.size());
  for (std::size_t a = 0; a < schema.size(); ++a) {
    auto it = std::find(header.begin(), header.end(),
                        schema.attributes[a].name);
    if (it == header.end())
      throw SchemaError("query file missing column: " +
                        schema.attributes[a].name);
    cols[a] = static_cast<std::size_t>(it - header.begin());
  }

  std::vector<Query> queries;
  std::size_t row_no = 0;
  while (std::getline(source, line)) {
    ++row_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = split(line);
    if (cells.size() != header.size())
      throw ParseError("query row " + std::to_string(row_no) +
                       ": wrong cell count");
    Query q;
    q.id = has_id ? cells[0] : "q" + std::to_string(row_no);
    q.values.resize(schema.size());
    for (std::size_t a = 0; a < schema.size(); ++a) {
      try {
        q.values[a] = std::stod(cells[cols[a]]);
      } catch (const std::exception&) {
        throw ParseError("query row " + std::to_string(row_no) + ", column " +
                         schema.attributes[a].name + ": cannot parse '" +
                         cells[cols[a]] + "'");
      }
    }
    queries.push_back(std::move(q));
  }
  return queries;
}

std::vector<std::optional<double>> per_model_outputs(
    const Chain& chain, std::span<const double> query) {
  check_query(chain, query);
  std::vector<std::optional<double>> outputs;
  outputs.reserve(chain.retained.size());
  for (const auto& m : chain.retained) {
    GranuleSignature sig(query.size());
    for (std::size_t a = 0; a < query.size(); ++a)
      sig[a] = discretize_value(query[a], m.g.cuts[a]);
    outputs.push_back(classify(m.rules, sig));
  }
  return outputs;
}

double predict_mean(const Chain& chain, std::span<const double> query) {
  auto outputs = per_model_outputs(chain, query);
  double sum = 0.0;
  for (const auto& o : outputs) sum += o.value_or(0.0);
  return sum / static_cast<double>(outputs.size());
}

PredictiveDistribution predict_distribution(const Chain& chain,
                                            const Query& query, int bins) {
  if (bins < 1) throw DomainError("predict_distribution: bins must be >= 1");
  auto outputs = per_model_outputs(chain, query.values);

  PredictiveDistribution dist;
  dist.query_id = query.id;
  double sum = 0.0;
  for (const auto& o : outputs) {
    sum += o.value_or(0.0);
    if (o)
      dist.outputs.push_back(*o);
    else
      ++dist.abstentions;
  }
  dist.mean = sum / static_cast<double>(outputs.size());
  dist.coverage = static_cast<double>(dist.outputs.size()) /
                  static_cast<double>(outputs.size());
  dist.no_support = dist.outputs.empty();
  dist.hist = make_histogram(dist.outputs, bins, -1.0, 1.0);
  return dist;
}

std::size_t map_model_index(const Chain& chain) {
  if (chain.retained.empty())
    throw DomainError("map_model_index: empty chain");
  std::size_t best = 0;
  for (std::size_t i = 1; i < chain.retained.size(); ++i) {
    if (chain.retained[i].log_posterior >
        chain.retained[best].log_posterior)
      best = i;
  }
  return best;
}

std::string format_rule_report(const RuleSet& rules, const Schema& schema,
                               std::span<const int> granules_per_attribute) {
  std::ostringstream certain, possible;
  std::size_t n_certain = 0, n_possible = 0;

  for (const auto& [sig, r] : rules.rules) {
    std::ostream& out = r.certain() ? certain : possible;
    std::size_t& n = r.certain() ? n_certain : n_possible;
    ++n;
    out << n << ". If ";
    for (std::size_t a = 0; a < schema.size(); ++a) {
      if (a > 0) out << " and ";
      out << schema.attributes[a].name << " = "
          << granule_label(sig[a], granules_per_attribute[a]);
    }
    out << " Then " << schema.decision_name;
    if (r.certain()) {
      out << " = Most Probably " << (r.decision == 1 ? "Positive" : "Negative")
          << "\n";
    } else {
      char buf[16];
      std::snprintf(buf, sizeof buf, "%.5f", r.plausibility);
      out << " = Positive with plausibility = " << buf << "\n";
    }
  }

  std::ostringstream report;
  report << "Rules: " << rules.size() << " (" << n_certain << " certain, "
         << n_possible << " possible)\n\n";
  report << "Lower Approximation Rules\n\n" << certain.str() << "\n";
  report << "Upper Approximation Rules\n\n" << possible.str();
  return report.str();
}

void emit_report(const Chain& chain, std::span<const Query> queries,
                 const std::filesystem::path& out_dir, int bins) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec)
    throw std::runtime_error("cannot create report directory " +
                             out_dir.string() + ": " + ec.message());

  auto open = [&](const std::filesystem::path& p) {
    std::ofstream f(p);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    return f;
  };

  Diagnostics diag = chain_diagnostics(chain, bins);
  {
    auto f = open(out_dir / "hist_rules.csv");
    write_histogram_csv(diag.rule_count_hist, "n_rules", f);
  }
  {
    auto f = open(out_dir / "hist_accuracy.csv");
    write_histogram_csv(diag.accuracy_hist, "accuracy", f);
  }

  std::vector<int> granules = chain.config.granules_per_attribute;
  if (granules.empty())
    granules.assign(chain.schema.size(), chain.config.granules);

  std::size_t map_idx = map_model_index(chain);
  {
    auto f = open(out_dir / "rules_map.txt");
    f << format_rule_report(chain.retained[map_idx].rules, chain.schema,
                            granules);
  }

  nlohmann::json summary;
  summary["map_model_index"] = map_idx;
  summary["acceptance_rate"] = chain.acceptance_rate();
  summary["mean_accuracy"] = diag.mean_accuracy;
  summary["mean_rules"] = diag.mean_rules;
  nlohmann::json jqueries = nlohmann::json::array();
  for (const auto& q : queries) {
    PredictiveDistribution dist = predict_distribution(chain, q, bins);
    auto f = open(out_dir / ("pred_" + sanitize_filename(q.id) + ".csv"));
    write_histogram_csv(dist.hist, "plausibility", f);
    jqueries.push_back({{"id", q.id},
                        {"mean", dist.mean},
                        {"coverage", dist.coverage},
                        {"abstentions", dist.abstentions},
                        {"no_support", dist.no_support}});
  }
  summary["queries"] = jqueries;
  {
    auto f = open(out_dir / "summary.json");
    f << summary.dump(2) << "\n";
  }
}

}  // namespace brs
