#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <unistd.h>

#include "ansgen/analysis.hpp"
#include "ansgen/corpus.hpp"
#include "ansgen/parsetree.hpp"
#include "ansgen/rules.hpp"

namespace fixtures {

inline std::filesystem::path test_data(const std::string& name) { return std::filesystem::path(ANSGEN_TEST_DATA_DIR) / name; }
inline std::filesystem::path shared_data(const std::string& name) { return std::filesystem::path(ANSGEN_DATA_DIR) / name; }

inline std::filesystem::path mini_corpus_path() { return test_data("mini_corpus.jsonl"); }

inline const std::vector<ansgen::Sample>& mini_corpus() {
  static const std::vector<ansgen::Sample> samples = ansgen::load_jsonl(mini_corpus_path()).samples;
  return samples;
}

inline const ansgen::Sample& sample(const std::string& id) {
  for (const auto& s : mini_corpus()) {
    if (s.id == id) return s;
  }
  throw std::out_of_range("no fixture sample '" + id + "'");
}

/// Parsed question and its analysis; keeps both alive for GenerationRequest.
struct Prepared {
  ansgen::ParsedQuestion pq;
  ansgen::QuestionAnalysis analysis;

  explicit Prepared(const ansgen::Sample& s) : pq(ansgen::parse_sample(s)), analysis(ansgen::analyze(pq)) {}

  ansgen::GenerationRequest request(const std::string& factoid,
                                    ansgen::QuestionType qtype = ansgen::QuestionType::Factoid) const {
    return ansgen::GenerationRequest{pq, analysis, factoid, qtype};
  }
};

inline Prepared prepare(const std::string& id) { return Prepared(sample(id)); }

inline std::string expected(const ansgen::Sample& s, const std::string& rule, const std::string& form = "finalized") {
  return s.extra.at("expected").at(rule).at(form).get<std::string>();
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Fresh scratch directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("ansgen_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path file(const std::string& name) const { return path_ / name; }
  std::filesystem::path write(const std::string& name, const std::string& content) const {
    std::ofstream(file(name), std::ios::binary) << content;
    return file(name);
  }

 private:
  std::filesystem::path path_;
};

}  // namespace fixtures
