#pragma once

// Sentence-level multi-reference BLEU and ROUGE-1/2/L. Scores reported on a
// 0-100 scale.

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ansgen {

using Tokens = std::vector<std::string>;

class EmptyInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class EmptyCorpus : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct EvalScores {
  double bleu = 0.0;
  double rouge1 = 0.0;
  double rouge2 = 0.0;
  double rougeL = 0.0;

  bool operator==(const EvalScores&) const = default;
};

struct PrfScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct NGramProfile {
  int n = 1;
  std::map<Tokens, int> counts;

  std::size_t total() const;
};

NGramProfile ngram_profile(std::span<const std::string> tokens, int n);

/// Splits punctuation off into standalone tokens and splits on whitespace.
/// Apostrophes, hyphens and periods between two alphanumerics stay inside the
/// word ("don't", "web-based", "3.5").
Tokens tokenize_words(std::string_view text, bool lowercase);

/// tokenize_words with lowercasing; the tokenizer every metric uses.
Tokens metric_tokenize(std::string_view text);

struct BleuOptions {
  int max_order = 4;
  /// When > 0, zero-match orders use epsilon / candidate n-gram count
  /// instead of zeroing the score.
  double smoothing_epsilon = 0.0;
};

double sentence_bleu(std::span<const std::string> candidate, std::span<const Tokens> references,
                     const BleuOptions& options = {});

PrfScore rouge_n(std::span<const std::string> candidate, std::span<const std::string> reference, int n);
PrfScore rouge_l(std::span<const std::string> candidate, std::span<const std::string> reference);

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

/// BLEU against all references at once; each ROUGE variant takes the best F1
/// over references.
EvalScores score_sample(std::string_view candidate, std::span<const std::string> references,
                        const BleuOptions& options = {});

EvalScores aggregate(std::span<const EvalScores> per_sample);

}  // namespace ansgen
