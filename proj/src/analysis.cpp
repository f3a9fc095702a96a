#include "ansgen/analysis.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace ansgen {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

template <std::size_t N>
bool one_of(std::string_view s, const std::array<std::string_view, N>& set) {
  return std::find(set.begin(), set.end(), s) != set.end();
}

constexpr std::array<std::string_view, 4> kWhTags{"WP", "WRB", "WDT", "WP$"};
constexpr std::array<std::string_view, 3> kAuxRelations{"aux", "auxpass", "aux:pass"};
constexpr std::array<std::string_view, 3> kBeDoHaveLemmas{"be", "do", "have"};
constexpr std::array<std::string_view, 19> kBeDoHaveForms{
    "be", "am", "is", "are", "was", "were", "been", "being", "'s", "'re", "'m",
    "do", "does", "did", "done", "have", "has", "had", "'ve"};

bool starts_with_vb(std::string_view tag) { return tag.size() >= 2 && tag.substr(0, 2) == "VB"; }

std::optional<TokenRange> first_phrase(const ParsedQuestion& pq, std::string_view label, std::size_t from) {
  std::optional<TokenRange> best;
  for (const auto& c : pq.constituents()) {
    if (c.label != label || c.span.begin < from || c.span.empty()) continue;
    if (!best || c.span.begin < best->begin || (c.span.begin == best->begin && c.span.size() < best->size())) {
      best = c.span;
    }
  }
  return best;
}

}  // namespace

bool is_wh_tag(std::string_view pos_tag) { return one_of(pos_tag, kWhTags); }

bool is_auxiliary_relation(std::string_view deprel) { return one_of(lower(deprel), kAuxRelations); }

bool is_be_do_have(const Token& token) {
  return one_of(lower(token.lemma), kBeDoHaveLemmas) || one_of(lower(token.text), kBeDoHaveForms);
}

bool is_aux_like(const Token& token) {
  return is_auxiliary_relation(token.deprel) || lower(token.deprel) == "cop" || token.pos_tag == "MD";
}

std::optional<std::size_t> find_wh(const ParsedQuestion& pq) {
  for (const auto& t : pq.tokens())
    if (is_wh_tag(t.pos_tag)) return t.index;
  return std::nullopt;
}

std::optional<std::size_t> find_auxiliary(const ParsedQuestion& pq) {
  for (const auto& t : pq.tokens())
    if (is_auxiliary_relation(t.deprel)) return t.index;
  // Copular questions have no aux relation; the copula (root or cop) pivots.
  for (const auto& t : pq.tokens()) {
    if (t.pos_tag == "MD") return t.index;
    const bool root_or_cop = !t.head || lower(t.deprel) == "cop";
    if (root_or_cop && is_be_do_have(t)) return t.index;
  }
  return std::nullopt;
}

std::optional<std::size_t> find_main_verb(const ParsedQuestion& pq, std::optional<std::size_t> aux) {
  const auto is_candidate = [&](const Token& t) {
    return starts_with_vb(t.pos_tag) && t.index != aux && !is_auxiliary_relation(t.deprel);
  };
  const Token& root = pq[pq.root_index()];
  if (is_candidate(root)) return root.index;
  const std::size_t start = aux ? *aux + 1 : 0;
  for (std::size_t i = start; i < pq.size(); ++i)
    if (is_candidate(pq[i])) return i;
  return std::nullopt;
}

std::optional<std::size_t> find_main_verb(const ParsedQuestion& pq) {
  return find_main_verb(pq, find_auxiliary(pq));
}

PhraseSpans find_np_vp(const ParsedQuestion& pq, std::size_t from) {
  PhraseSpans out;
  if (from >= pq.size()) return out;
  out.np = first_phrase(pq, "NP", from);
  if (out.np) out.vp = first_phrase(pq, "VP", out.np->end);
  return out;
}

std::optional<std::size_t> find_embedded_clause(const ParsedQuestion& pq) {
  for (std::size_t i = 0; i + 1 < pq.size(); ++i) {
    const std::string w = lower(pq[i].text);
    if (w == "if" || w == "whether") return i + 1;
  }
  return std::nullopt;
}

QuestionAnalysis analyze(const ParsedQuestion& pq) {
  QuestionAnalysis a;
  a.wh_index = find_wh(pq);
  a.aux_index = find_auxiliary(pq);
  a.main_verb_index = find_main_verb(pq, a.aux_index);
  a.embedded_start = find_embedded_clause(pq);
  std::optional<std::size_t> from = a.embedded_start;
  if (!from && a.aux_index) from = *a.aux_index + 1;
  if (from) {
    auto spans = find_np_vp(pq, *from);
    a.np_span = spans.np;
    a.vp_span = spans.vp;
  }
  return a;
}

}  // namespace ansgen
