// End-to-end checks of the bench binary: exit codes and file outputs.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "cvr/dataset.hpp"
#include "doctest.h"

#ifndef CVR_BENCH_BINARY
#define CVR_BENCH_BINARY "bench"
#endif

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(CVR_BENCH_BINARY) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

fs::path write_config(const char* name, const std::string& extra = "") {
  const auto path = fs::temp_directory_path() / name;
  std::ofstream f(path);
  f << "[problem]\nkind = ridge\ndata = synthetic-regression\nn = 400\nd = 4\n"
       "[optimizer]\nalgorithm = sgd\neta = 0.002\nepochs = 3\n"
       "[metrics]\nwall_time = off\n"
       "[output]\npath = "
    << (fs::temp_directory_path() / "cvr_cli_trace.csv").string() << "\n"
    << extra;
  return path;
}

}  // namespace

TEST_CASE("bench run exits 0 and writes the trace") {
  const auto cfg = write_config("cvr_cli_run.conf");
  CHECK(run_cli("run --config " + cfg.string()) == 0);
  CHECK(fs::exists(fs::temp_directory_path() / "cvr_cli_trace.csv"));
  fs::remove(fs::temp_directory_path() / "cvr_cli_trace.csv");
  fs::remove(cfg);
}

TEST_CASE("bench run exits 1 on a config error") {
  const auto cfg = write_config("cvr_cli_bad.conf");
  CHECK(run_cli("run --config " + cfg.string() +
                " --set optimizer.algorithm=bogus") == 1);
  CHECK(run_cli("run --config /nonexistent.conf") == 1);
  fs::remove(cfg);
}

TEST_CASE("bench run exits 2 on divergence, flushing the partial trace") {
  const auto cfg = write_config("cvr_cli_div.conf");
  CHECK(run_cli("run --config " + cfg.string() + " --set optimizer.eta=50") == 2);
  CHECK(fs::exists(fs::temp_directory_path() / "cvr_cli_trace.csv"));
  fs::remove(fs::temp_directory_path() / "cvr_cli_trace.csv");
  fs::remove(cfg);
}

TEST_CASE("bench gen-data writes a loadable dataset") {
  const auto out = fs::temp_directory_path() / "cvr_cli_data.libsvm";
  CHECK(run_cli("gen-data --kind classification --n 50 --d 3 --seed 4 --out " +
                out.string()) == 0);
  const auto ds = cvr::read_libsvm(out);
  CHECK(ds.size() == 50);
  CHECK(ds.dim() == 3);
  CHECK(ds.kind_hint == cvr::DataKind::Classification);
  fs::remove(out);
}

TEST_CASE("bench sweep writes per-value traces and a summary") {
  const auto cfg = write_config("cvr_cli_sweep.conf");
  CHECK(run_cli("sweep --config " + cfg.string() +
                " --axis eta --values 0.001,0.002") == 0);
  CHECK(fs::exists(fs::temp_directory_path() / "cvr_cli_trace.eta=0.001.csv"));
  CHECK(fs::exists(fs::temp_directory_path() / "cvr_cli_trace.summary.csv"));
  for (const char* name :
       {"cvr_cli_trace.eta=0.001.csv", "cvr_cli_trace.eta=0.002.csv",
        "cvr_cli_trace.summary.csv"})
    fs::remove(fs::temp_directory_path() / name);
  fs::remove(cfg);
}
