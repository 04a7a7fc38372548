#include "brs/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "brs/format.hpp"

namespace brs {

std::size_t Schema::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    if (attributes[i].name == name) return i;
  }
  throw SchemaError("unknown attribute: " + name);
}

bool Schema::has(const std::string& name) const {
  return std::any_of(attributes.begin(), attributes.end(),
                     [&](const AttributeSpec& a) { return a.name == name; });
}

void Schema::validate() const {
  std::set<std::string> seen;
  for (const auto& a : attributes) {
    if (!seen.insert(a.name).second)
      throw SchemaError("duplicate attribute name: " + a.name);
    if (!(a.lo < a.hi))
      throw SchemaError("attribute " + a.name +
                        ": range lower bound must be below upper bound");
  }
  if (decision_name.empty()) throw SchemaError("decision column not named");
  if (seen.count(decision_name))
    throw SchemaError("decision column collides with attribute: " +
                      decision_name);
}

bool InformationTable::row_has_missing(std::size_t row) const {
  if (decisions[row] < 0) return true;
  for (double v : values[row]) {
    if (std::isnan(v)) return true;
  }
  return false;
}

nlohmann::json CleanReport::to_json() const {
  nlohmann::json per;
  for (const auto& [name, count] : per_predicate) per[name] = count;
  return {{"total_in", total_in},
          {"removed_missing", removed_missing},
          {"removed_inconsistent", removed_inconsistent},
          {"remaining", remaining},
          {"per_predicate", per}};
}

void ConsistencyPredicate::validate(const Schema& schema) const {
  for (const auto& c : all_of) {
    if (!schema.has(c.attr))
      throw SchemaError("predicate " + name +
                        " references unknown attribute: " + c.attr);
    if (!c.rhs_attr.empty() && !schema.has(c.rhs_attr))
      throw SchemaError("predicate " + name +
                        " references unknown attribute: " + c.rhs_attr);
  }
}

namespace {

bool compare(double lhs, CmpOp op, double rhs) {
  switch (op) {
    case CmpOp::Eq: return lhs == rhs;
    case CmpOp::Ne: return lhs != rhs;
    case CmpOp::Lt: return lhs < rhs;
    case CmpOp::Le: return lhs <= rhs;
    case CmpOp::Gt: return lhs > rhs;
    case CmpOp::Ge: return lhs >= rhs;
  }
  return false;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_cell(const std::string& text, std::size_t row,
                  const std::string& column) {
  const char* first = text.data();
  const char* last = first + text.size();
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last)
    throw ParseError("row " + std::to_string(row) + ", column " + column +
                     ": cannot parse '" + text + "' as a number");
  return out;
}

}  // namespace

bool ConsistencyPredicate::matches(const Schema& schema,
                                   const std::vector<double>& row) const {
  for (const auto& c : all_of) {
    double lhs = row[schema.index_of(c.attr)];
    double rhs =
        c.rhs_attr.empty() ? c.value : row[schema.index_of(c.rhs_attr)];
    if (!compare(lhs, c.op, rhs)) return false;
  }
  return !all_of.empty();
}

ConsistencyPredicate gravidity_parity_predicate(const std::string& gravidity,
                                                const std::string& parity) {
  return {"gravidity_parity",
          {{gravidity, CmpOp::Eq, 0.0, ""}, {parity, CmpOp::Ge, 1.0, ""}}};
}

ConsistencyPredicate parity_exceeds_gravidity_predicate(
    const std::string& gravidity, const std::string& parity) {
  return {"parity_exceeds_gravidity",
          {{parity, CmpOp::Gt, 0.0, gravidity}}};
}

nlohmann::json schema_to_json(const Schema& schema) {
  nlohmann::json attrs = nlohmann::json::array();
  for (const auto& a : schema.attributes) {
    attrs.push_back(
        {{"name", a.name},
         {"kind", a.kind == AttributeKind::Numeric ? "numeric" : "categorical"},
         {"range", {a.lo, a.hi}}});
  }
  return {{"attributes", attrs}, {"decision", schema.decision_name}};
}

Schema schema_from_json(const nlohmann::json& j) {
  Schema schema;
  for (const auto& ja : j.at("attributes")) {
    AttributeSpec a;
    a.name = ja.at("name").get<std::string>();
    std::string kind = ja.value("kind", "numeric");
    if (kind == "numeric") {
      a.kind = AttributeKind::Numeric;
    } else if (kind == "categorical") {
      a.kind = AttributeKind::Categorical;
    } else {
      throw SchemaError("unknown attribute kind: " + kind);
    }
    a.lo = ja.at("range").at(0).get<double>();
    a.hi = ja.at("range").at(1).get<double>();
    schema.attributes.push_back(std::move(a));
  }
  schema.decision_name = j.at("decision").get<std::string>();
  schema.validate();
  return schema;
}

InformationTable load_table(std::istream& source, const Schema& schema,
                            const std::string& missing_token) {
  schema.validate();

  std::string line;
  if (!std::getline(source, line))
    throw ParseError("empty input: no header row");
  auto header = split_csv_line(line);
  for (auto& h : header) h = trim(h);

  std::vector<std::size_t> attr_col(schema.size());
  for (std::size_t i = 0; i < schema.size(); ++i) {
    auto it = std::find(header.begin(), header.end(),
                        schema.attributes[i].name);
    if (it == header.end())
      throw SchemaError("column not found in header: " +
                        schema.attributes[i].name);
    attr_col[i] = static_cast<std::size_t>(it - header.begin());
  }
  auto dit = std::find(header.begin(), header.end(), schema.decision_name);
  if (dit == header.end())
    throw SchemaError("decision column not found in header: " +
                      schema.decision_name);
  std::size_t decision_col = static_cast<std::size_t>(dit - header.begin());

  InformationTable table;
  table.schema = schema;

  std::size_t row_no = 0;  // 1-based data rows
  while (std::getline(source, line)) {
    ++row_no;
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw ParseError("row " + std::to_string(row_no) + ": expected " +
                       std::to_string(header.size()) + " cells, got " +
                       std::to_string(cells.size()));
    for (auto& c : cells) c = trim(c);

    std::vector<double> row(schema.size());
    for (std::size_t i = 0; i < schema.size(); ++i) {
      const auto& spec = schema.attributes[i];
      const std::string& cell = cells[attr_col[i]];
      if (cell.empty() || cell == missing_token) {
        row[i] = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      double v = parse_cell(cell, row_no, spec.name);
      if (v < spec.lo || v > spec.hi)
        throw DomainError("row " + std::to_string(row_no) + ", column " +
                          spec.name + ": value " + cell +
                          " outside declared range");
      row[i] = v;
    }

    const std::string& dcell = cells[decision_col];
    int decision = -1;
    if (!dcell.empty() && dcell != missing_token) {
      double d = parse_cell(dcell, row_no, schema.decision_name);
      if (d != 0.0 && d != 1.0)
        throw DomainError("row " + std::to_string(row_no) +
                          ": decision value '" + dcell +
                          "' is not 0 or 1");
      decision = static_cast<int>(d);
    }

    table.object_ids.push_back("obj" + std::to_string(row_no));
    table.values.push_back(std::move(row));
    table.decisions.push_back(decision);
  }
  return table;
}

void write_table_csv(const InformationTable& table, std::ostream& out) {
  for (const auto& a : table.schema.attributes) out << a.name << ",";
  out << table.schema.decision_name << "\n";
  for (std::size_t i = 0; i < table.n_objects(); ++i) {
    for (double v : table.values[i]) {
      if (!std::isnan(v)) out << fmt_double(v);
      out << ",";
    }
    if (table.decisions[i] >= 0) out << table.decisions[i];
    out << "\n";
  }
}

std::pair<InformationTable, CleanReport> clean_table(
    const InformationTable& table,
    const std::vector<ConsistencyPredicate>& predicates) {
  for (const auto& p : predicates) p.validate(table.schema);

  InformationTable out;
  out.schema = table.schema;
  CleanReport report;
  report.total_in = table.n_objects();
  for (const auto& p : predicates) report.per_predicate.emplace_back(p.name, 0);

  for (std::size_t i = 0; i < table.n_objects(); ++i) {
    if (table.row_has_missing(i)) {
      ++report.removed_missing;
      continue;
    }
    bool removed = false;
    for (std::size_t j = 0; j < predicates.size(); ++j) {
      if (predicates[j].matches(table.schema, table.values[i])) {
        ++report.removed_inconsistent;
        ++report.per_predicate[j].second;
        removed = true;
        break;
      }
    }
    if (removed) continue;
    out.object_ids.push_back(table.object_ids[i]);
    out.values.push_back(table.values[i]);
    out.decisions.push_back(table.decisions[i]);
  }
  report.remaining = out.n_objects();
  return {std::move(out), report};
}

}  // namespace brs
