#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "gcx/corpus/manifest.hpp"

namespace {

using namespace gcx::corpus;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kConfig = 2;

bool write_report(const std::string& path, const std::string& text) {
  if (path.empty()) return true;
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "gcx: cannot write report to '" << path << "'\n";
    return false;
  }
  return true;
}

int run_one(const std::string& file, const RunOptions& opts, const std::string& report_path) {
  Report r;
  try {
    r = run_file(file, opts);
  } catch (const ParseError& e) {
    std::cerr << file << ": " << e.what() << "\n";
    return kConfig;
  }
  const std::string text = r.str();
  std::cout << text;
  if (!write_report(report_path, text)) return kConfig;
  return r.passed() ? kPass : kFail;
}

int run_all(const RunOptions& opts, unsigned jobs, const std::string& report_path) {
  const auto start = std::chrono::steady_clock::now();
  const auto entries = list_corpus(corpus_dir());
  const auto outcomes = run_corpus(entries, opts, jobs);
  std::ostringstream full;
  int status = kPass;
  int passed = 0;
  for (const CorpusOutcome& o : outcomes) {
    if (!o.parse_error.empty()) {
      status = kConfig;
      std::cout << "ERROR " << o.entry.name << ": " << o.parse_error << "\n";
      full << "scenario " << o.entry.name << "\n  parse error: " << o.parse_error << "\n";
      continue;
    }
    const bool ok = o.report.passed();
    if (ok) {
      ++passed;
    } else if (status == kPass) {
      status = kFail;
    }
    std::cout << (ok ? "PASS  " : "FAIL  ") << o.entry.name << "  (" << o.report.assertions.size()
              << " assertions)\n";
    if (!ok) std::cout << o.report.str();
    full << o.report.str() << "\n";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << passed << "/" << outcomes.size() << " scenarios passed";
  std::cout.precision(2);
  std::cout << std::fixed << " in " << secs << " s\n";
  if (!write_report(report_path, full.str())) return kConfig;
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized complex structures: scenario checker"};
  app.require_subcommand(1);

  RunOptions opts;
  std::string report_path;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", opts.seed, "Sampling seed")->capture_default_str();
    sub->add_option("--samples", opts.samples, "Sample points per check")->capture_default_str()->check(
        CLI::PositiveNumber);
    sub->add_option("--tolerance", opts.tolerance, "Relative tolerance for transcendental values")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--report", report_path, "Also write the report to this file");
  };

  std::string file;
  auto* verify = app.add_subcommand("verify", "Parse a scenario and build its objects without running checks");
  verify->add_option("file", file, "Scenario file")->required();
  common(verify);

  auto* run = app.add_subcommand("run", "Run a scenario and compare its expectations");
  run->add_option("file", file, "Scenario file")->required();
  common(run);

  auto* corpus = app.add_subcommand("corpus", "Regression corpus");
  corpus->require_subcommand(1);
  auto* list = corpus->add_subcommand("list", "List scenarios with the statement each reproduces");
  auto* run_all_cmd = corpus->add_subcommand("run-all", "Run every scenario");
  unsigned jobs = 1;
  run_all_cmd->add_option("-j,--jobs", jobs, "Scenarios run in parallel (0: one per core)")->capture_default_str();
  common(run_all_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfig;
  }

  if (*verify) {
    opts.checks = false;
    return run_one(file, opts, report_path);
  }
  if (*run) return run_one(file, opts, report_path);
  if (*list) {
    for (const ManifestEntry& e : list_corpus(corpus_dir())) {
      std::cout << e.file.filename().string() << "\t" << (e.reproduces.empty() ? "-" : e.reproduces) << "\n";
    }
    return kPass;
  }
  if (*run_all_cmd) {
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    return run_all(opts, jobs, report_path);
  }
  return kConfig;
}
