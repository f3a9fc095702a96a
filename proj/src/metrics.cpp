#include "ansgen/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace ansgen {

namespace {

bool is_alnum(unsigned char c) { return std::isalnum(c) != 0 || c >= 0x80; }
bool is_punct(unsigned char c) { return c < 0x80 && std::ispunct(c) != 0; }

PrfScore prf(double matched, double candidate_total, double reference_total) {
  PrfScore s;
  s.precision = candidate_total > 0 ? matched / candidate_total : 0.0;
  s.recall = reference_total > 0 ? matched / reference_total : 0.0;
  const double sum = s.precision + s.recall;
  s.f1 = sum > 0 ? 2.0 * s.precision * s.recall / sum : 0.0;
  return s;
}

}  // namespace

std::size_t NGramProfile::total() const {
  std::size_t t = 0;
  for (const auto& [gram, count] : counts) t += static_cast<std::size_t>(count);
  return t;
}

NGramProfile ngram_profile(std::span<const std::string> tokens, int n) {
  if (n < 1) throw std::invalid_argument("n-gram order must be positive");
  NGramProfile p;
  p.n = n;
  const auto order = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i + order <= tokens.size(); ++i) {
    ++p.counts[Tokens(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                      tokens.begin() + static_cast<std::ptrdiff_t>(i + order))];
  }
  return p;
}

Tokens tokenize_words(std::string_view text, bool lowercase) {
  Tokens out;
  std::string word;
  const auto flush = [&] {
    if (!word.empty()) out.push_back(std::move(word));
    word.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      flush();
    } else if (is_punct(c)) {
      const bool joiner = c == '\'' || c == '-' || c == '.';
      const bool inner = joiner && !word.empty() && is_alnum(static_cast<unsigned char>(word.back())) &&
                         i + 1 < text.size() && is_alnum(static_cast<unsigned char>(text[i + 1]));
      if (inner) {
        word += static_cast<char>(c);
      } else {
        flush();
        out.emplace_back(1, static_cast<char>(c));
      }
    } else {
      word += lowercase ? static_cast<char>(std::tolower(c)) : static_cast<char>(c);
    }
  }
  flush();
  return out;
}

Tokens metric_tokenize(std::string_view text) { return tokenize_words(text, true); }

double sentence_bleu(std::span<const std::string> candidate, std::span<const Tokens> references,
                     const BleuOptions& options) {
  if (candidate.empty()) throw EmptyInput("BLEU: empty candidate");
  if (references.empty()) throw EmptyInput("BLEU: no references");
  if (std::all_of(references.begin(), references.end(), [](const Tokens& r) { return r.empty(); })) {
    throw EmptyInput("BLEU: all references empty");
  }

  double log_sum = 0.0;
  for (int n = 1; n <= options.max_order; ++n) {
    const auto cand = ngram_profile(candidate, n);
    std::map<Tokens, int> max_ref;
    for (const auto& ref : references) {
      for (const auto& [gram, count] : ngram_profile(ref, n).counts) {
        int& m = max_ref[gram];
        m = std::max(m, count);
      }
    }
    double matched = 0.0;
    for (const auto& [gram, count] : cand.counts) {
      auto it = max_ref.find(gram);
      if (it != max_ref.end()) matched += std::min(count, it->second);
    }
    const double denom = std::max<double>(1.0, static_cast<double>(cand.total()));
    if (matched == 0.0) {
      if (options.smoothing_epsilon <= 0.0) return 0.0;
      matched = options.smoothing_epsilon;
    }
    log_sum += std::log(matched / denom) / options.max_order;
  }

  const auto c = static_cast<double>(candidate.size());
  double closest = std::numeric_limits<double>::infinity();
  for (const auto& ref : references) {
    const auto r = static_cast<double>(ref.size());
    if (std::abs(r - c) < std::abs(closest - c) || (std::abs(r - c) == std::abs(closest - c) && r < closest)) {
      closest = r;
    }
  }
  const double bp = c > closest ? 1.0 : std::exp(1.0 - closest / c);
  return std::clamp(100.0 * bp * std::exp(log_sum), 0.0, 100.0);
}

PrfScore rouge_n(std::span<const std::string> candidate, std::span<const std::string> reference, int n) {
  if (n != 1 && n != 2) throw std::invalid_argument("ROUGE-N supports n = 1 or 2");
  const auto cand = ngram_profile(candidate, n);
  const auto ref = ngram_profile(reference, n);
  const auto cand_total = static_cast<double>(cand.total());
  const auto ref_total = static_cast<double>(ref.total());
  if (cand_total == 0 && ref_total == 0) throw EmptyInput("ROUGE-N: no n-grams on either side");
  double matched = 0.0;
  for (const auto& [gram, count] : cand.counts) {
    auto it = ref.counts.find(gram);
    if (it != ref.counts.end()) matched += std::min(count, it->second);
  }
  return prf(matched, cand_total, ref_total);
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

PrfScore rouge_l(std::span<const std::string> candidate, std::span<const std::string> reference) {
  if (candidate.empty() || reference.empty()) throw EmptyInput("ROUGE-L: empty sequence");
  return prf(static_cast<double>(lcs_length(candidate, reference)), static_cast<double>(candidate.size()),
             static_cast<double>(reference.size()));
}

EvalScores score_sample(std::string_view candidate, std::span<const std::string> references,
                        const BleuOptions& options) {
  if (references.empty()) throw EmptyInput("score_sample: no references");
  const Tokens cand = metric_tokenize(candidate);
  if (cand.empty()) throw EmptyInput("score_sample: empty candidate");
  std::vector<Tokens> refs;
  refs.reserve(references.size());
  for (const auto& r : references) {
    refs.push_back(metric_tokenize(r));
    if (refs.back().empty()) throw EmptyInput("score_sample: empty reference");
  }

  // Pairs with no bigram on either side: identical scores 1, anything else 0.
  const auto rouge2_f1 = [&](const Tokens& ref) {
    if (cand.size() < 2 && ref.size() < 2) return cand == ref ? 1.0 : 0.0;
    return rouge_n(cand, ref, 2).f1;
  };

  EvalScores s;
  s.bleu = sentence_bleu(cand, refs, options);
  for (const auto& ref : refs) {
    s.rouge1 = std::max(s.rouge1, 100.0 * rouge_n(cand, ref, 1).f1);
    s.rouge2 = std::max(s.rouge2, 100.0 * rouge2_f1(ref));
    s.rougeL = std::max(s.rougeL, 100.0 * rouge_l(cand, ref).f1);
  }
  return s;
}

EvalScores aggregate(std::span<const EvalScores> per_sample) {
  if (per_sample.empty()) throw EmptyCorpus("aggregate: no samples");
  EvalScores sum;
  for (const auto& s : per_sample) {
    sum.bleu += s.bleu;
    sum.rouge1 += s.rouge1;
    sum.rouge2 += s.rouge2;
    sum.rougeL += s.rougeL;
  }
  const auto n = static_cast<double>(per_sample.size());
  return {sum.bleu / n, sum.rouge1 / n, sum.rouge2 / n, sum.rougeL / n};
}

}  // namespace ansgen
