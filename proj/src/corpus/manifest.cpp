#include "gcx/corpus/manifest.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

#ifndef GCX_DEFAULT_CORPUS_DIR
#define GCX_DEFAULT_CORPUS_DIR "corpus"
#endif

namespace gcx::corpus {

std::filesystem::path corpus_dir() {
  if (const char* env = std::getenv("GCX_CORPUS_DIR"); env && *env) return env;
  return GCX_DEFAULT_CORPUS_DIR;
}

std::vector<ManifestEntry> list_corpus(const std::filesystem::path& dir) {
  std::vector<ManifestEntry> out;
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) return out;
  for (const auto& f : std::filesystem::directory_iterator(dir, ec)) {
    if (!f.is_regular_file() || f.path().extension() != ".gcx") continue;
    ManifestEntry e{f.path(), f.path().stem().string(), ""};
    try {
      e.reproduces = parse_file(f.path()).reproduces;
    } catch (const ParseError&) {
      // listed anyway; running it reports the error
    }
    out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return out;
}

std::vector<CorpusOutcome> run_corpus(const std::vector<ManifestEntry>& entries, const RunOptions& opts,
                                      unsigned jobs) {
  std::vector<CorpusOutcome> out(entries.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) {
      out[i].entry = entries[i];
      try {
        out[i].report = run_file(entries[i].file, opts);
      } catch (const ParseError& e) {
        out[i].parse_error = e.what();
      }
    }
  };
  jobs = std::clamp<unsigned>(jobs, 1, std::max<std::size_t>(entries.size(), 1));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace gcx::corpus
