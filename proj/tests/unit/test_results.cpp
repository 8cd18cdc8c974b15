#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <limits>

#include "qhmcgp/error.hpp"
#include "qhmcgp/results.hpp"
#include "qhmcgp/rng.hpp"

using namespace qhmcgp;

namespace {

ResultRow sample_row() {
  return {"arctan2d-QHMC-both-n200-snr0-s1", "arctan2d", 2, 200, 0.0, "QHMC-both", 20, 0.0812, 0.13, 48.5, 0.91, 1};
}

}  // namespace

TEST_CASE("header order") {
  CHECK(csv_header() ==
        "experiment_id,function,dim,n_train,snr_percent,method,n_constraints,rel_error,mean_post_var,wall_time_s,"
        "acceptance_rate,seed");
}

TEST_CASE("format_double is shortest round-trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(1e-300) == "1e-300");
}

TEST_CASE("row round-trip property") {
  Rng rng(99);
  for (int i = 0; i < 500; ++i) {
    ResultRow r = sample_row();
    r.experiment_id = i % 7 == 0 ? "id, with \"quotes\"" : "cell-" + std::to_string(i);
    r.n_train = 1 + static_cast<int>(rng.index(1000));
    r.snr_percent = 30.0 * rng.uniform();
    r.rel_error = std::exp(20.0 * rng.normal());
    r.mean_post_var = rng.uniform() * 1e-9;
    r.wall_time_s = 1e4 * rng.uniform();
    r.acceptance_rate = rng.uniform();
    r.seed = rng.engine()();
    CHECK(parse_row(format_row(r)) == r);
  }
  CHECK_THROWS_AS(parse_row("a,b,c"), Error);
}

TEST_CASE("split_csv honors quotes") {
  const auto f = split_csv(R"("a,b",c,"d""e")");
  REQUIRE(f.size() == 3);
  CHECK(f[0] == "a,b");
  CHECK(f[2] == "d\"e");
}

TEST_CASE("append_rows writes the header once") {
  const auto path = std::filesystem::temp_directory_path() / "qhmcgp_results_test.csv";
  std::filesystem::remove(path);
  append_rows(path.string(), {sample_row()});
  ResultRow second = sample_row();
  second.seed = 2;
  append_rows(path.string(), {second});
  std::ifstream in(path);
  std::string line;
  int lines = 0, headers = 0;
  while (std::getline(in, line)) {
    ++lines;
    headers += line == csv_header();
  }
  CHECK(lines == 3);
  CHECK(headers == 1);
  const auto rows = read_rows(path.string());
  REQUIRE(rows.size() == 2);
  CHECK(rows[1] == second);
  std::filesystem::remove(path);
}

TEST_CASE("make_row copies report fields") {
  ExperimentReport rep;
  rep.method = "QHMC-var";
  rep.spec.function_name = "mono5d";
  rep.spec.dim = 5;
  rep.spec.n_train = 100;
  rep.spec.snr_percent = 5;
  rep.spec.seed = 3;
  rep.rel_error = 0.1;
  rep.n_constraints_final = 4;
  const ResultRow r = make_row(rep);
  CHECK(r.experiment_id == "mono5d-QHMC-var-n100-snr5-s3");
  CHECK(r.dim == 5);
  CHECK(r.n_constraints == 4);
  CHECK(r.rel_error == 0.1);
}

TEST_CASE("trace csv") {
  AdaptiveTrace t(2);
  t[1].step = 1;
  t[1].n_constraints = 1;
  t[1].added_location = Eigen::Vector2d(0.25, 0.5);
  const std::string csv = format_trace_csv(t);
  CHECK(csv.rfind("step,n_constraints,rel_error", 0) == 0);
  CHECK(csv.find("0.25;0.5") != std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
