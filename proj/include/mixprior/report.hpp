#ifndef MIXPRIOR_REPORT_HPP_
#define MIXPRIOR_REPORT_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace mixprior {

inline constexpr const char *kEngineVersion = "0.1.0";

// A labelled numeric table.  columns[0] names the label column; each row has
// columns.size() - 1 values.  NaN prints as NA.
struct ResultTable {
  struct Row {
    std::string label;
    std::vector<double> values;
    bool operator==(const Row &) const = default;
  };

  std::string name;
  std::vector<std::string> columns;
  std::vector<Row> rows;
  std::string note;

  bool operator==(const ResultTable &) const = default;
};

struct Provenance {
  std::string engine_version = kEngineVersion;
  std::uint64_t seed = 1;
  std::string timestamp;  // UTC, ISO 8601
};

struct ResultDocument {
  std::string config_echo;
  std::vector<ResultTable> tables;
  Provenance provenance;
  std::vector<std::string> warnings;

  const ResultTable *find(const std::string &name) const;
};

enum class Precision { kDisplay, kFull };

// Fixed three decimals, or twelve significant digits.
std::string format_value(double x, Precision precision);

// Aligned plain-text tables for the terminal.
std::string format_text(const ResultDocument &doc, Precision precision);

// Machine-readable document: [provenance], [config] and one [table <name>]
// section per table, each a comma-separated block with a header row.  Values
// are written with round-trip precision.
std::string format_csv(const ResultDocument &doc);

std::string utc_timestamp();

}  // namespace mixprior

#endif  // MIXPRIOR_REPORT_HPP_
