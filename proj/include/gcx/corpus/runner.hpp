#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "gcx/corpus/ast.hpp"
#include "gcx/corpus/parser.hpp"

namespace gcx::corpus {

struct RunOptions {
  std::uint64_t seed = 0;
  int samples = 32;
  /// Relative tolerance for values without an exact evaluation.
  double tolerance = 1e-9;
  /// false: build every declared object but skip the checking commands.
  bool checks = true;
};

struct Assertion {
  int line = 0;
  std::string key;
  std::string expected;
  std::string actual;
  bool passed = false;
};

struct CommandResult {
  int line = 0;
  std::string text;  // the statement, pretty-printed
  /// "ok" (nothing asserted), "pass", "fail", "flagged" (ok but with notes),
  /// or "skipped" when checks are off.
  std::string status;
  std::vector<std::pair<std::string, std::string>> values;
  std::vector<std::string> notes;
  std::string error;
};

struct Report {
  std::string scenario;
  std::string reproduces;
  RunOptions options;
  std::vector<CommandResult> commands;
  std::vector<Assertion> assertions;
  std::vector<std::string> warnings;

  int failures() const;
  bool passed() const { return failures() == 0; }
  /// Human-readable listing followed by the key: value block.
  std::string str() const;
  /// Only the key: value block.
  std::string machine() const;
};

/// Executes the statements in order. Unknown names, wrong kinds of objects
/// and failures while declaring objects (unless an `error` is expected) throw
/// ParseError; failing checks are recorded in the report.
Report run_scenario(const Scenario& s, const RunOptions& opts = {});

Scenario parse_file(const std::filesystem::path& file);
Report run_file(const std::filesystem::path& file, const RunOptions& opts = {});

}  // namespace gcx::corpus
