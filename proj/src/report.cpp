#include "mixprior/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

#include "mixprior/config.hpp"

namespace mixprior {

const ResultTable *ResultDocument::find(const std::string &name) const {
  for (const auto &t : tables) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

std::string format_value(double x, Precision precision) {
  if (std::isnan(x)) return "NA";
  char buffer[64];
  if (precision == Precision::kDisplay) {
    std::snprintf(buffer, sizeof buffer, "%.3f", x);
  } else {
    std::snprintf(buffer, sizeof buffer, "%.12g", x);
  }
  return buffer;
}

namespace {

std::string csv_field(const std::string &field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

}  // namespace

std::string format_text(const ResultDocument &doc, Precision precision) {
  std::ostringstream out;
  for (std::size_t t = 0; t < doc.tables.size(); ++t) {
    const auto &table = doc.tables[t];
    if (t) out << '\n';
    out << table.name << '\n';
    if (!table.note.empty()) out << "  (" << table.note << ")\n";

    std::vector<std::vector<std::string>> cells;
    cells.push_back(table.columns);
    for (const auto &row : table.rows) {
      std::vector<std::string> line{row.label};
      for (double v : row.values) line.push_back(format_value(v, precision));
      cells.push_back(std::move(line));
    }
    std::vector<std::size_t> width(table.columns.size(), 0);
    for (const auto &line : cells) {
      for (std::size_t c = 0; c < line.size() && c < width.size(); ++c) {
        width[c] = std::max(width[c], line[c].size());
      }
    }
    for (const auto &line : cells) {
      for (std::size_t c = 0; c < line.size() && c < width.size(); ++c) {
        if (c == 0) {
          out << line[c] << std::string(width[c] - line[c].size(), ' ');
        } else {
          out << "  " << std::string(width[c] - line[c].size(), ' ') << line[c];
        }
      }
      out << '\n';
    }
  }
  return out.str();
}

std::string format_csv(const ResultDocument &doc) {
  std::ostringstream out;
  out << "[provenance]\nkey,value\n"
      << "engine_version," << doc.provenance.engine_version << '\n'
      << "seed," << doc.provenance.seed << '\n'
      << "timestamp," << doc.provenance.timestamp << "\n\n";
  out << "[config]\n" << doc.config_echo;
  if (!doc.config_echo.empty() && doc.config_echo.back() != '\n') out << '\n';
  for (const auto &table : doc.tables) {
    out << "\n[table " << table.name << "]\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      out << (c ? "," : "") << csv_field(table.columns[c]);
    }
    out << '\n';
    for (const auto &row : table.rows) {
      out << csv_field(row.label);
      for (double v : row.values) {
        out << ',' << (std::isnan(v) ? std::string("NA") : format_number(v));
      }
      out << '\n';
    }
  }
  return out.str();
}

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

}  // namespace mixprior
