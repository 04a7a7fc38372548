#ifndef BRS_TABLE_HPP
#define BRS_TABLE_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "brs/errors.hpp"

namespace brs {

enum class AttributeKind { Numeric, Categorical };

// One condition attribute: a name, a kind, and a closed declared range.
struct AttributeSpec {
  std::string name;
  AttributeKind kind = AttributeKind::Numeric;
  double lo = 0.0;
  double hi = 1.0;

  double width() const { return hi - lo; }
};

struct Schema {
  std::vector<AttributeSpec> attributes;
  std::string decision_name;

  std::size_t size() const { return attributes.size(); }
  // Index of a named attribute; throws SchemaError if absent.
  std::size_t index_of(const std::string& name) const;
  bool has(const std::string& name) const;
  // Checks name uniqueness and lo < hi for every attribute.
  void validate() const;
};

// Decision table: objects x condition attributes plus a binary decision.
// Missing condition values are NaN; missing decisions are -1.
struct InformationTable {
  Schema schema;
  std::vector<std::string> object_ids;
  std::vector<std::vector<double>> values;  // row-major, schema order
  std::vector<int> decisions;               // 0, 1, or -1 (missing)

  std::size_t n_objects() const { return values.size(); }
  std::size_t n_attributes() const { return schema.size(); }
  bool row_has_missing(std::size_t row) const;
};

struct CleanReport {
  std::size_t total_in = 0;
  std::size_t removed_missing = 0;
  std::size_t removed_inconsistent = 0;
  std::size_t remaining = 0;
  // predicate name -> rows it removed (first matching predicate wins)
  std::vector<std::pair<std::string, std::size_t>> per_predicate;

  nlohmann::json to_json() const;
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

// attr OP value, or attr OP other-attr when rhs_attr is non-empty.
struct Condition {
  std::string attr;
  CmpOp op = CmpOp::Eq;
  double value = 0.0;
  std::string rhs_attr;  // empty -> compare against value
};

// Conjunction of conditions marking a row as invalid.
struct ConsistencyPredicate {
  std::string name;
  std::vector<Condition> all_of;

  void validate(const Schema& schema) const;
  bool matches(const Schema& schema, const std::vector<double>& row) const;
};

// gravidity = 0 AND parity >= 1 (impossible: birth without pregnancy).
ConsistencyPredicate gravidity_parity_predicate(
    const std::string& gravidity = "gravidity",
    const std::string& parity = "parity");

// parity > gravidity. Optional, disabled by default at the CLI level.
ConsistencyPredicate parity_exceeds_gravidity_predicate(
    const std::string& gravidity = "gravidity",
    const std::string& parity = "parity");

nlohmann::json schema_to_json(const Schema& schema);
Schema schema_from_json(const nlohmann::json& j);

// Reads a CSV stream (header row first). Cells equal to the empty string
// or to missing_token are kept as missing markers; cleaning is separate.
// Non-missing values outside the declared range raise DomainError.
InformationTable load_table(std::istream& source, const Schema& schema,
                            const std::string& missing_token = "?");

// Writes the same CSV format load_table reads (header + data rows).
void write_table_csv(const InformationTable& table, std::ostream& out);

// Drops rows with missing cells, then rows matching any predicate.
// A row removed for missingness is not also counted under predicates.
std::pair<InformationTable, CleanReport> clean_table(
    const InformationTable& table,
    const std::vector<ConsistencyPredicate>& predicates);

}  // namespace brs

#endif  // BRS_TABLE_HPP
