#pragma once

// JSONL corpus of (question, factoid, targets) samples with precomputed
// parses. One object per line:
//
//   {"id": "...", "question": "...", "factoid": "...", "targets": ["...", ...],
//    "qtype": "factoid" | "existential", "constituency": "(SBARQ ...)",
//    "dependency": "1\tWhat\t...", "source": "newsqa"}
//
// "source" is optional; any other keys are carried through untouched.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ansgen/parsetree.hpp"
#include "ansgen/question_type.hpp"

namespace ansgen {

struct Sample {
  std::string id;
  std::string question;
  std::string factoid;
  std::vector<std::string> targets;
  QuestionType qtype = QuestionType::Factoid;
  std::string constituency;
  std::string dependency;
  std::optional<std::string> source;
  nlohmann::json extra = nlohmann::json::object();

  bool operator==(const Sample&) const = default;
};

class CorpusError : public std::runtime_error {
 public:
  CorpusError(const std::string& what, std::size_t line)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  /// 1-based line, 0 when not tied to a line.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct LoadIssue {
  std::size_t line = 0;
  std::string message;
};

struct LoadResult {
  std::vector<Sample> samples;
  std::vector<LoadIssue> issues;
};

enum class LoadMode { Strict, Lenient };

/// Strict mode throws CorpusError at the first bad line; lenient mode skips
/// bad lines and records them in `issues`.
LoadResult load_jsonl(const std::filesystem::path& path, LoadMode mode = LoadMode::Strict);
LoadResult load_jsonl(std::istream& in, LoadMode mode = LoadMode::Strict);

Sample sample_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Sample& s);
void write_jsonl(std::ostream& out, const std::vector<Sample>& samples);

/// Every violated Sample invariant, including parse alignment. Empty when valid.
std::vector<std::string> validate(const Sample& sample);

struct CorpusViolation {
  std::size_t index = 0;
  std::string message;
};

/// Corpus-level checks (duplicate ids) plus per-sample validation.
std::vector<CorpusViolation> validate_corpus(const std::vector<Sample>& samples);

ParsedQuestion parse_sample(const Sample& sample);

struct CorpusStats {
  std::size_t total = 0;
  std::map<std::string, std::size_t> by_qtype;
  std::map<std::string, std::size_t> by_source;
};

CorpusStats stats(const std::vector<Sample>& samples);

}  // namespace ansgen
