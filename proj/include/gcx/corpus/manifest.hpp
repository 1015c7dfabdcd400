#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gcx/corpus/runner.hpp"

namespace gcx::corpus {

struct ManifestEntry {
  std::filesystem::path file;
  std::string name;
  std::string reproduces;
};

/// GCX_CORPUS_DIR when set, else the corpus directory of the source tree.
std::filesystem::path corpus_dir();

/// Scenario files (*.gcx) in `dir`, sorted by name. A missing or empty
/// directory gives an empty manifest.
std::vector<ManifestEntry> list_corpus(const std::filesystem::path& dir);

struct CorpusOutcome {
  ManifestEntry entry;
  Report report;
  /// Set when the scenario failed to parse; the report is then empty.
  std::string parse_error;
};

/// Runs every scenario, `jobs` at a time. Results come back in manifest order.
std::vector<CorpusOutcome> run_corpus(const std::vector<ManifestEntry>& entries, const RunOptions& opts,
                                      unsigned jobs = 1);

}  // namespace gcx::corpus
