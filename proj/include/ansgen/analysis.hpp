#pragma once

// Linguistic landmarks the answer rules pivot on: the WH word, the auxiliary,
// the main verb, the NP/VP pair after the auxiliary, and the start of an
// embedded "if"/"whether" clause.

#include <optional>

#include "ansgen/parsetree.hpp"

namespace ansgen {

struct QuestionAnalysis {
  std::optional<std::size_t> wh_index;
  std::optional<std::size_t> aux_index;
  std::optional<std::size_t> main_verb_index;
  std::optional<TokenRange> np_span;
  std::optional<TokenRange> vp_span;
  std::optional<std::size_t> embedded_start;

  bool operator==(const QuestionAnalysis&) const = default;
};

struct PhraseSpans {
  std::optional<TokenRange> np;
  std::optional<TokenRange> vp;
};

bool is_wh_tag(std::string_view pos_tag);

/// aux / auxpass (and the UD spelling aux:pass).
bool is_auxiliary_relation(std::string_view deprel);

/// Inflected or lemma form of be / do / have.
bool is_be_do_have(const Token& token);

/// Token that can carry tense and negation on its own: an auxiliary or copula
/// relation, or a modal.
bool is_aux_like(const Token& token);

std::optional<std::size_t> find_wh(const ParsedQuestion& pq);
std::optional<std::size_t> find_auxiliary(const ParsedQuestion& pq);

/// The dependency root when it is a verb other than `aux`, else the first
/// non-auxiliary VB* token after `aux`.
std::optional<std::size_t> find_main_verb(const ParsedQuestion& pq, std::optional<std::size_t> aux);
std::optional<std::size_t> find_main_verb(const ParsedQuestion& pq);

/// First NP starting at or after `from` (ties go to the shorter span), then
/// the first VP starting at or after the NP's end.
PhraseSpans find_np_vp(const ParsedQuestion& pq, std::size_t from);

std::optional<std::size_t> find_embedded_clause(const ParsedQuestion& pq);

QuestionAnalysis analyze(const ParsedQuestion& pq);

}  // namespace ansgen
