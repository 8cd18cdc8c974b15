#include "qhmcgp/results.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qhmcgp/error.hpp"

namespace qhmcgp {

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

template <class T>
T parse_number(const std::string& field, const char* name) {
  T value{};
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end) throw Error(std::string("results: bad ") + name + " field '" + field + "'");
  return value;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error("format_double: conversion failed");
  return std::string(buf, ptr);
}

ResultRow make_row(const ExperimentReport& r) {
  ResultRow row;
  row.experiment_id = r.experiment_id.empty()
                          ? r.spec.function_name + "-" + r.method + "-n" + std::to_string(r.spec.n_train) + "-snr" +
                                format_double(r.spec.snr_percent) + "-s" + std::to_string(r.spec.seed)
                          : r.experiment_id;
  row.function = r.spec.function_name;
  row.dim = r.spec.dim;
  row.n_train = r.spec.n_train;
  row.snr_percent = r.spec.snr_percent;
  row.method = r.method;
  row.n_constraints = r.n_constraints_final;
  row.rel_error = r.rel_error;
  row.mean_post_var = r.mean_posterior_variance;
  row.wall_time_s = r.wall_time_s;
  row.acceptance_rate = r.acceptance_rate;
  row.seed = r.spec.seed;
  return row;
}

std::string csv_header() {
  return "experiment_id,function,dim,n_train,snr_percent,method,n_constraints,rel_error,mean_post_var,"
         "wall_time_s,acceptance_rate,seed";
}

std::string format_row(const ResultRow& r) {
  std::ostringstream os;
  os << quote(r.experiment_id) << ',' << quote(r.function) << ',' << r.dim << ',' << r.n_train << ','
     << format_double(r.snr_percent) << ',' << quote(r.method) << ',' << r.n_constraints << ','
     << format_double(r.rel_error) << ',' << format_double(r.mean_post_var) << ',' << format_double(r.wall_time_s)
     << ',' << format_double(r.acceptance_rate) << ',' << r.seed;
  return os.str();
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw Error("results: unterminated quote");
  return fields;
}

ResultRow parse_row(const std::string& line) {
  const auto f = split_csv(line);
  if (f.size() != 12) throw Error("results: expected 12 fields, got " + std::to_string(f.size()));
  ResultRow r;
  r.experiment_id = f[0];
  r.function = f[1];
  r.dim = parse_number<int>(f[2], "dim");
  r.n_train = parse_number<int>(f[3], "n_train");
  r.snr_percent = parse_number<double>(f[4], "snr_percent");
  r.method = f[5];
  r.n_constraints = parse_number<int>(f[6], "n_constraints");
  r.rel_error = parse_number<double>(f[7], "rel_error");
  r.mean_post_var = parse_number<double>(f[8], "mean_post_var");
  r.wall_time_s = parse_number<double>(f[9], "wall_time_s");
  r.acceptance_rate = parse_number<double>(f[10], "acceptance_rate");
  r.seed = parse_number<std::uint64_t>(f[11], "seed");
  return r;
}

void append_rows(const std::string& path, const std::vector<ResultRow>& rows) {
  namespace fs = std::filesystem;
  std::error_code ec;
  const bool fresh = !fs::exists(path, ec) || fs::file_size(path, ec) == 0;
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for appending");
  if (fresh) out << csv_header() << '\n' << std::flush;
  for (const ResultRow& row : rows) {
    out << (format_row(row) + '\n') << std::flush;
  }
  if (!out) throw Error("write to '" + path + "' failed");
}

std::vector<ResultRow> read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read '" + path + "'");
  std::string line;
  std::vector<ResultRow> rows;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      if (line != csv_header()) throw Error("results: unexpected header in '" + path + "'");
      header = false;
      continue;
    }
    if (!line.empty()) rows.push_back(parse_row(line));
  }
  return rows;
}

std::string format_trace_csv(const AdaptiveTrace& trace) {
  std::ostringstream os;
  os << "step,n_constraints,rel_error,rel_error_chain_mean,mean_post_var,acceptance_rate,log_sigma,log_length,"
        "log_noise,selection_score,true_margin,location\n";
  for (const TraceRecord& t : trace) {
    std::string loc;
    for (Eigen::Index i = 0; i < t.added_location.size(); ++i) {
      if (i) loc += ';';
      loc += format_double(t.added_location[i]);
    }
    os << t.step << ',' << t.n_constraints << ',' << format_double(t.rel_error) << ','
       << format_double(t.rel_error_chain_mean) << ',' << format_double(t.mean_post_var) << ','
       << format_double(t.acceptance_rate) << ',' << format_double(t.hyper.log_sigma) << ','
       << format_double(t.hyper.log_length) << ',' << format_double(t.hyper.log_noise) << ','
       << format_double(t.selection_score) << ',' << format_double(t.true_margin) << ',' << loc << '\n';
  }
  return os.str();
}

}  // namespace qhmcgp
