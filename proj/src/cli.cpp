#include "qhmcgp/cli.hpp"

#include <condition_variable>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "qhmcgp/config.hpp"
#include "qhmcgp/error.hpp"
#include "qhmcgp/results.hpp"
#include "qhmcgp/selftest.hpp"
#include "qhmcgp/svg.hpp"

namespace qhmcgp {

namespace fs = std::filesystem;

namespace {

struct Prepared {
  RunConfig config;
  fs::path out_dir;
};

Prepared prepare(const CliOptions& options) {
  Prepared p;
  p.config = options.config_path.empty() ? parse_config("") : load_config(options.config_path);
  if (options.seed) p.config.settings.bench.seed = *options.seed;
  if (!options.out_dir.empty()) p.config.output_dir = options.out_dir;
  p.config.settings.validate();
  p.out_dir = p.config.output_dir;
  fs::create_directories(p.out_dir);
  return p;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f.flush()) throw Error("write to " + path.string() + " failed");
}

void write_manifest(const fs::path& dir, const std::string& command, const RunConfig& config,
                    const nlohmann::json& extra = nlohmann::json::object()) {
  nlohmann::json m{{"command", command}, {"config", config.to_json()}};
  for (auto it = extra.begin(); it != extra.end(); ++it) m[it.key()] = it.value();
  write_text(dir / "manifest.json", m.dump(2) + "\n");
}

std::string summary(const ResultRow& row) {
  return row.experiment_id + ": rel_error=" + format_double(row.rel_error) +
         " mean_post_var=" + format_double(row.mean_post_var) + " n_constraints=" + std::to_string(row.n_constraints) +
         " acceptance=" + format_double(row.acceptance_rate) + " time=" + format_double(row.wall_time_s) + "s";
}

// Translates exceptions into the exit-code contract.
template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

std::string sweep_cell_id(const ExperimentSettings& s) {
  return (s.experiment_id.empty() ? s.bench.function_name : s.experiment_id) + "-n" +
         std::to_string(s.bench.n_train) + "-snr" + format_double(s.bench.snr_percent);
}

}  // namespace

int cmd_run(const CliOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Prepared p = prepare(options);
    write_manifest(p.out_dir, "run", p.config);
    const ResultRow row = make_row(run_experiment(p.config.settings));
    append_rows((p.out_dir / "results.csv").string(), {row});
    if (!options.quiet) out << summary(row) << "\n";
    return int{kExitOk};
  });
}

int cmd_sweep(const CliOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Prepared p = prepare(options);
    const RunConfig& cfg = p.config;
    std::vector<int> ns = cfg.sweep_n_train;
    std::vector<double> snrs = cfg.sweep_snr_percent;
    if (ns.empty()) ns.push_back(cfg.settings.bench.n_train);
    if (snrs.empty()) snrs.push_back(cfg.settings.bench.snr_percent);
    std::sort(ns.begin(), ns.end());
    std::sort(snrs.begin(), snrs.end());

    std::vector<ExperimentSettings> cells;
    for (int n : ns) {
      for (double snr : snrs) {
        ExperimentSettings s = cfg.settings;
        s.bench.n_train = n;
        s.bench.snr_percent = snr;
        s.experiment_id = sweep_cell_id(s);
        s.validate();
        cells.push_back(std::move(s));
      }
    }
    write_manifest(p.out_dir, "sweep", cfg, {{"status", "running"}});

    // Workers fill slots; this thread is the single writer and emits rows in
    // cell order as soon as the next one is ready.
    struct Slot {
      bool done = false;
      std::optional<ResultRow> row;
      std::string error;
    };
    std::vector<Slot> slots(cells.size());
    std::mutex mu;
    std::condition_variable cv;
    std::size_t next_cell = 0;

    auto worker = [&] {
      for (;;) {
        std::size_t i;
        {
          std::lock_guard lock(mu);
          if (next_cell >= cells.size()) return;
          i = next_cell++;
        }
        Slot result;
        try {
          result.row = make_row(run_experiment(cells[i]));
        } catch (const std::exception& e) {
          result.error = e.what();
        }
        result.done = true;
        {
          std::lock_guard lock(mu);
          slots[i] = std::move(result);
        }
        cv.notify_all();
      }
    };
    const int n_workers = std::max(1, std::min<int>(options.jobs, static_cast<int>(cells.size())));
    std::vector<std::jthread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);

    const std::string csv = (p.out_dir / "results.csv").string();
    nlohmann::json failed = nlohmann::json::array();
    for (std::size_t i = 0; i < cells.size(); ++i) {
      Slot slot;
      {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return slots[i].done; });
        slot = slots[i];
      }
      if (slot.row) {
        append_rows(csv, {*slot.row});
        if (!options.quiet) out << summary(*slot.row) << "\n";
      } else {
        failed.push_back({{"experiment_id", cells[i].experiment_id},
                          {"n_train", cells[i].bench.n_train},
                          {"snr_percent", cells[i].bench.snr_percent},
                          {"error", slot.error}});
        err << "cell " << cells[i].experiment_id << " failed: " << slot.error << "\n";
      }
    }
    pool.clear();

    nlohmann::json grid = nlohmann::json::array();
    for (const auto& c : cells) grid.push_back({{"n_train", c.bench.n_train}, {"snr_percent", c.bench.snr_percent}});
    write_manifest(p.out_dir, "sweep", cfg,
                   {{"status", failed.empty() ? "complete" : "partial"}, {"cells", grid}, {"failed_cells", failed}});
    return failed.empty() ? int{kExitOk} : int{kExitRuntime};
  });
}

int cmd_trace(const CliOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Prepared p = prepare(options);
    write_manifest(p.out_dir, "trace", p.config);
    const ExperimentReport report = run_experiment(p.config.settings);
    write_text(p.out_dir / "trace.csv", format_trace_csv(report.trace));

    ChartSeries best{"rel_error (min-potential sample)", {}, {}, "#1f77b4"};
    ChartSeries avg{"rel_error (chain mean)", {}, {}, "#d62728"};
    for (const TraceRecord& r : report.trace) {
      best.x.push_back(r.n_constraints);
      best.y.push_back(r.rel_error);
      avg.x.push_back(r.n_constraints);
      avg.y.push_back(r.rel_error_chain_mean);
    }
    ChartOptions chart;
    chart.title = report.spec.function_name + " " + report.method + ": relative error while adding constraints";
    chart.x_label = "number of constraint points";
    chart.y_label = "relative L2 error";
    write_text(p.out_dir / "trace.svg", render_line_chart({best, avg}, chart));

    const ResultRow row = make_row(report);
    append_rows((p.out_dir / "results.csv").string(), {row});
    if (!options.quiet) out << summary(row) << " trace_steps=" << report.trace.size() << "\n";
    return int{kExitOk};
  });
}

int cmd_selftest(const CliOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    SelftestOptions st;
    if (options.seed) st.seed = *options.seed;
    const auto results = run_selftest(st);
    bool all = true;
    for (const CheckResult& r : results) {
      all = all && r.passed;
      if (!r.passed) {
        err << "FAIL " << r.name << ": " << r.detail << "\n";
      } else if (!options.quiet) {
        out << "PASS " << r.name << ": " << r.detail << "\n";
      }
    }
    return all ? int{kExitOk} : int{kExitRuntime};
  });
}

}  // namespace qhmcgp
