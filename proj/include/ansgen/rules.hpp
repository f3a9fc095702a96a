#pragma once

// Answer construction from a parsed question and its factoid answer:
//   RBV1         WH word replaced by the factoid.
//   RBV2         reordering around the auxiliary and main verb.
//   existential  AUX-NP-VP reordered to NP-AUX-VP behind a "Yes,"/"No," prefix.
// Output is space-joined tokens terminated by a standalone ".".

#include <stdexcept>
#include <string>
#include <vector>

#include "ansgen/analysis.hpp"
#include "ansgen/parsetree.hpp"
#include "ansgen/question_type.hpp"

namespace ansgen {

enum class RuleCase {
  V1Substitution,
  V2Consecutive,
  V2Split,
  V2NoMainVerb,
  ExDirect,
  ExIndirect,
  Fallback,
};

std::string_view to_string(RuleCase c);

struct TraceStep {
  enum class Source { Question, Factoid, Literal };

  Source source = Source::Literal;
  std::optional<TokenRange> range;  // question tokens copied, when Source::Question
  std::vector<std::string> tokens;  // tokens as emitted

  bool operator==(const TraceStep&) const = default;
};

struct GeneratedAnswer {
  std::string text;
  RuleCase rule_case = RuleCase::Fallback;
  std::vector<TraceStep> trace;
  std::vector<std::string> notes;

  /// Space-join of every trace step; equals `text`.
  std::string render_trace() const;
  bool operator==(const GeneratedAnswer&) const = default;
};

struct GenerationRequest {
  const ParsedQuestion& question;
  const QuestionAnalysis& analysis;
  std::string factoid;
  QuestionType qtype = QuestionType::Factoid;
};

struct GenerationOptions {
  /// my->your, I->you, ... on existential NP/VP tokens.
  bool pronoun_swap = true;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class InvalidRequest : public GenerationError {
 public:
  using GenerationError::GenerationError;
};
class MissingWhWord : public GenerationError {
 public:
  using GenerationError::GenerationError;
};
class Unanalyzable : public GenerationError {
 public:
  using GenerationError::GenerationError;
};
class StructureNotFound : public GenerationError {
 public:
  using GenerationError::GenerationError;
};

/// Drops a trailing "?" token, appends "." and space-joins.
std::string finalize(std::vector<std::string> tokens);

/// Which RBV2 branch applies to an analysis.
RuleCase classify_v2(const QuestionAnalysis& analysis);

GeneratedAnswer generate_v1(const GenerationRequest& req);
GeneratedAnswer generate_v2(const GenerationRequest& req);
GeneratedAnswer generate_existential(const GenerationRequest& req, const GenerationOptions& options = {});

/// Case-preserving first/second person swap; unknown words pass through.
std::string swap_perspective(std::string_view word);

}  // namespace ansgen
