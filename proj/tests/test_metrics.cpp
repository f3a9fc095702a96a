#include <cmath>
#include <random>

#include "ansgen/metrics.hpp"
#include "doctest.h"
#include "metric_oracles.hpp"

using namespace ansgen;
using fixtures::TokenList;

namespace {

TokenList toks(const std::string& s) { return metric_tokenize(s); }

double bleu(const std::string& cand, const std::vector<std::string>& refs, BleuOptions o = {}) {
  std::vector<Tokens> r;
  for (const auto& s : refs) r.push_back(toks(s));
  return sentence_bleu(toks(cand), r, o);
}

}  // namespace

TEST_CASE("metric tokenization") {
  CHECK(metric_tokenize("The bus was going to Phoenix, Arizona.") ==
        TokenList{"the", "bus", "was", "going", "to", "phoenix", ",", "arizona", "."});
  CHECK(metric_tokenize("").empty());
  CHECK(metric_tokenize("a  b") == TokenList{"a", "b"});
  CHECK(metric_tokenize("don't stop web-based 3.5 now.") ==
        TokenList{"don't", "stop", "web-based", "3.5", "now", "."});
  CHECK(metric_tokenize("john. .") == TokenList{"john", ".", "."});
  CHECK(tokenize_words("Phoenix, AZ", false) == TokenList{"Phoenix", ",", "AZ"});
}

TEST_CASE("n-gram profiles") {
  const TokenList t{"a", "b", "a", "b"};
  const auto p2 = ngram_profile(t, 2);
  CHECK(p2.total() == 3);
  CHECK(p2.counts.at({"a", "b"}) == 2);
  CHECK(p2.counts.at({"b", "a"}) == 1);
  CHECK(ngram_profile(t, 5).total() == 0);
  for (const auto& [gram, count] : p2.counts) {
    CHECK(gram.size() == 2);
    CHECK(count >= 1);
  }
}

TEST_CASE("BLEU worked examples") {
  CHECK(bleu("the bus was going phoenix", {"the bus was going phoenix"}) == doctest::Approx(100.0));
  CHECK(bleu("alpha beta gamma delta", {"one two three four"}) == 0.0);
  CHECK(bleu("the cat sat on the mat", {"the cat sat on the mat", "a cat sat on a mat"}) == doctest::Approx(100.0));
}

TEST_CASE("BLEU against hand-counted precisions") {
  // Clipped matches 5/6, 3/5, 2/4, 1/3; equal lengths so no brevity penalty.
  CHECK(bleu("the cat sat on the mat", {"the cat sat on a mat"}) ==
        doctest::Approx(100.0 * std::pow(1.0 / 12.0, 0.25)).epsilon(1e-12));
  // All precisions 1; c = 4, r = 6.
  CHECK(bleu("the cat sat on", {"the cat sat on the mat"}) ==
        doctest::Approx(100.0 * std::exp(1.0 - 6.0 / 4.0)).epsilon(1e-12));
  // Closest reference length 4 (tie 4 vs 6 around c = 5 goes to the shorter).
  CHECK(bleu("the cat sat on it", {"the cat sat on", "the cat sat on it now"}) ==
        doctest::Approx(100.0 * std::pow((5.0 / 5) * (4.0 / 4) * (3.0 / 3) * (2.0 / 2), 0.25)));
  // Clipping: "the" appears at most twice in any single reference.
  CHECK(bleu("the the the the", {"the cat the dog"}) == 0.0);
}

TEST_CASE("BLEU smoothing and errors") {
  CHECK(bleu("the cat", {"the cat"}) == 0.0);
  const double smoothed = bleu("the cat", {"the cat"}, {.max_order = 4, .smoothing_epsilon = 0.1});
  CHECK(smoothed > 0.0);
  CHECK(smoothed < 100.0);
  CHECK(bleu("the cat", {"the cat"}, {.max_order = 2}) == doctest::Approx(100.0));
  const std::vector<Tokens> none;
  CHECK_THROWS_AS(sentence_bleu(TokenList{"a"}, none), EmptyInput);
  CHECK_THROWS_AS(sentence_bleu(TokenList{}, std::vector<Tokens>{{"a"}}), EmptyInput);
}

TEST_CASE("ROUGE-N") {
  const auto r = rouge_n(TokenList{"the", "cat", "sat"}, TokenList{"the", "cat", "sat", "down"}, 1);
  CHECK(r.precision == doctest::Approx(1.0));
  CHECK(r.recall == doctest::Approx(0.75));
  CHECK(std::abs(r.f1 - 6.0 / 7.0) < 1e-9);
  CHECK(rouge_n(TokenList{"a", "b", "c"}, TokenList{"a", "b", "c"}, 2).f1 == doctest::Approx(1.0));
  CHECK(rouge_n(TokenList{"a", "b"}, TokenList{"c", "d"}, 1).f1 == 0.0);
  CHECK_THROWS_AS(rouge_n(TokenList{"a"}, TokenList{"b"}, 2), EmptyInput);
  CHECK_THROWS_AS(rouge_n(TokenList{"a"}, TokenList{"b"}, 3), std::invalid_argument);
}

TEST_CASE("ROUGE-L") {
  const auto r = rouge_l(TokenList{"the", "cat", "sat"}, TokenList{"the", "cat", "sat", "down"});
  CHECK(std::abs(r.f1 - 6.0 / 7.0) < 1e-9);
  CHECK(lcs_length(TokenList{"the", "cat", "sat"}, TokenList{"the", "cat", "sat", "down"}) == 3);
  CHECK(rouge_l(TokenList{"x", "y"}, TokenList{"x", "y"}).f1 == doctest::Approx(1.0));
  const auto swapped = rouge_l(TokenList{"a", "b"}, TokenList{"b", "a"});
  CHECK(swapped.precision == doctest::Approx(0.5));
  CHECK(swapped.recall == doctest::Approx(0.5));
  CHECK(swapped.f1 == doctest::Approx(0.5));
  CHECK_THROWS_AS(rouge_l(TokenList{}, TokenList{"a"}), EmptyInput);
}

TEST_CASE("ROUGE-L matches exhaustive subsequence enumeration") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = fixtures::random_tokens(rng, 1, 6, fixtures::small_alphabet());
    const auto b = fixtures::random_tokens(rng, 1, 6, fixtures::small_alphabet());
    const auto l = static_cast<double>(fixtures::brute_force_lcs(a, b));
    const auto got = rouge_l(a, b);
    CHECK(std::abs(got.f1 - fixtures::f1_from_counts(l, a.size(), b.size())) <= 1e-12);
    CHECK(std::abs(got.precision - l / a.size()) <= 1e-12);
    CHECK(std::abs(got.recall - l / b.size()) <= 1e-12);
  }
}

TEST_CASE("ROUGE-L never exceeds ROUGE-1") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = fixtures::random_tokens(rng, 1, 10, fixtures::small_alphabet());
    const auto b = fixtures::random_tokens(rng, 1, 10, fixtures::small_alphabet());
    CHECK(rouge_l(a, b).f1 <= rouge_n(a, b, 1).f1 + 1e-12);
  }
}

TEST_CASE("score_sample") {
  const std::vector<std::string> refs{"Sundar Pichai is the ceo of google.", "The ceo of google is Sundar Pichai."};
  const auto second = score_sample("The ceo of google is Sundar Pichai.", refs);
  CHECK(second == EvalScores{100.0, 100.0, 100.0, 100.0});
  CHECK(score_sample("sundar pichai is the ceo of google .", refs).rouge1 == doctest::Approx(100.0));
  CHECK(score_sample("alpha beta gamma delta", std::vector<std::string>{"one two three four"}) == EvalScores{});
  CHECK(score_sample("Delhi", std::vector<std::string>{"delhi"}).rouge2 == doctest::Approx(100.0));
  CHECK(score_sample("Delhi", std::vector<std::string>{"Mumbai"}).rouge2 == 0.0);
  CHECK_THROWS_AS(score_sample("x", std::vector<std::string>{}), EmptyInput);
  CHECK_THROWS_AS(score_sample("", std::vector<std::string>{"x"}), EmptyInput);
}

TEST_CASE("scores stay within bounds and exact matches are maximal") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const auto cand = fixtures::join(fixtures::random_tokens(rng, 1, 9, fixtures::word_alphabet()));
    const auto ref = fixtures::join(fixtures::random_tokens(rng, 1, 9, fixtures::word_alphabet()));
    const auto s = score_sample(cand, std::vector<std::string>{ref});
    for (double v : {s.bleu, s.rouge1, s.rouge2, s.rougeL}) {
      CHECK(v >= 0.0);
      CHECK(v <= 100.0);
    }
    const auto exact = score_sample(cand, std::vector<std::string>{ref, cand});
    CHECK(exact.rouge1 == doctest::Approx(100.0));
    CHECK(exact.rouge2 == doctest::Approx(100.0));
    CHECK(exact.rougeL == doctest::Approx(100.0));
    if (metric_tokenize(cand).size() >= 4) CHECK(exact.bleu == doctest::Approx(100.0));
  }
}

TEST_CASE("adding a reference never lowers a ROUGE score") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const auto cand = fixtures::join(fixtures::random_tokens(rng, 1, 8, fixtures::word_alphabet()));
    std::vector<std::string> refs{fixtures::join(fixtures::random_tokens(rng, 1, 8, fixtures::word_alphabet()))};
    const auto before = score_sample(cand, refs);
    refs.push_back(fixtures::join(fixtures::random_tokens(rng, 1, 8, fixtures::word_alphabet())));
    const auto after = score_sample(cand, refs);
    CHECK(after.rouge1 >= before.rouge1);
    CHECK(after.rouge2 >= before.rouge2);
    CHECK(after.rougeL >= before.rougeL);
  }
}

TEST_CASE("aggregate") {
  const std::vector<EvalScores> two{{100, 100, 100, 100}, {0, 0, 0, 0}};
  CHECK(aggregate(two) == EvalScores{50, 50, 50, 50});
  const std::vector<EvalScores> one{{1, 2, 3, 4}};
  CHECK(aggregate(one) == one[0]);
  const std::vector<EvalScores> three{{80, 0, 0, 0}, {70, 0, 0, 0}, {90, 0, 0, 0}};
  CHECK(aggregate(three).bleu == doctest::Approx(80.0));
  CHECK_THROWS_AS(aggregate(std::vector<EvalScores>{}), EmptyCorpus);
}
