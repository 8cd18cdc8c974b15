#pragma once

#include <string>
#include <vector>

#include "qhmcgp/experiment.hpp"

namespace qhmcgp {

/// One line of results.csv.
struct ResultRow {
  std::string experiment_id;
  std::string function;
  int dim = 0;
  int n_train = 0;
  double snr_percent = 0.0;
  std::string method;
  int n_constraints = 0;
  double rel_error = 0.0;
  double mean_post_var = 0.0;
  double wall_time_s = 0.0;
  double acceptance_rate = 0.0;
  std::uint64_t seed = 0;

  bool operator==(const ResultRow&) const = default;
};

ResultRow make_row(const ExperimentReport& report);

/// Fixed header, in field order.
std::string csv_header();

/// Comma-separated, '.' decimal, shortest round-trip doubles; text fields are
/// quoted only when they contain a comma, quote or newline.
std::string format_row(const ResultRow& row);

/// Inverse of format_row. Throws Error on malformed input.
ResultRow parse_row(const std::string& line);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

/// Split one CSV record honoring double-quoted fields.
std::vector<std::string> split_csv(const std::string& line);

/// Append rows to a CSV file, writing the header first if the file is new or
/// empty. Each row goes out in a single write followed by a flush.
void append_rows(const std::string& path, const std::vector<ResultRow>& rows);

/// All data rows of a results file.
std::vector<ResultRow> read_rows(const std::string& path);

/// trace.csv content for an adaptive trace.
std::string format_trace_csv(const AdaptiveTrace& trace);

}  // namespace qhmcgp
