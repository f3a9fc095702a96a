#include "ansgen/rules.hpp"

#include <algorithm>
#include <cctype>

namespace ansgen {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// End of the question body, excluding a trailing "?".
std::size_t content_end(const ParsedQuestion& pq) {
  std::size_t n = pq.size();
  if (n > 0 && pq[n - 1].text == "?") --n;
  return n;
}

class AnswerBuilder {
 public:
  explicit AnswerBuilder(const ParsedQuestion& pq) : pq_(pq) {}

  AnswerBuilder& question(std::size_t begin, std::size_t end, bool swap = false) {
    if (begin >= end) return *this;
    TraceStep step{TraceStep::Source::Question, TokenRange{begin, end}, {}};
    for (std::size_t i = begin; i < end; ++i) step.tokens.push_back(swap ? swap_perspective(pq_[i].text) : pq_[i].text);
    steps_.push_back(std::move(step));
    return *this;
  }
  AnswerBuilder& question(TokenRange r, bool swap = false) { return question(r.begin, r.end, swap); }

  AnswerBuilder& factoid(const std::vector<std::string>& tokens) {
    if (!tokens.empty()) steps_.push_back({TraceStep::Source::Factoid, std::nullopt, tokens});
    return *this;
  }

  AnswerBuilder& literal(std::string token) {
    steps_.push_back({TraceStep::Source::Literal, std::nullopt, {std::move(token)}});
    return *this;
  }

  GeneratedAnswer finish(RuleCase rule_case, std::vector<std::string> notes = {}) {
    std::vector<std::string> flat;
    for (const auto& s : steps_) flat.insert(flat.end(), s.tokens.begin(), s.tokens.end());
    if (flat.empty()) throw GenerationError("rule produced no tokens");
    // Keep the trace in step with finalize's "?" stripping.
    if (flat.back() == "?") {
      steps_.back().tokens.pop_back();
      if (steps_.back().tokens.empty()) steps_.pop_back();
    }
    GeneratedAnswer out;
    out.text = finalize(std::move(flat));
    steps_.push_back({TraceStep::Source::Literal, std::nullopt, {"."}});
    out.rule_case = rule_case;
    out.trace = std::move(steps_);
    out.notes = std::move(notes);
    return out;
  }

 private:
  const ParsedQuestion& pq_;
  std::vector<TraceStep> steps_;
};

std::vector<std::string> factoid_tokens(const GenerationRequest& req) {
  auto tokens = split_whitespace(req.factoid);
  if (tokens.empty()) throw InvalidRequest("factoid answer is empty");
  return tokens;
}

void require_factoid(const GenerationRequest& req) {
  if (req.qtype != QuestionType::Factoid) throw InvalidRequest("request is not a factoid question");
}

}  // namespace

std::string_view to_string(RuleCase c) {
  switch (c) {
    case RuleCase::V1Substitution: return "V1_SUBSTITUTION";
    case RuleCase::V2Consecutive: return "V2_CONSECUTIVE";
    case RuleCase::V2Split: return "V2_SPLIT";
    case RuleCase::V2NoMainVerb: return "V2_NO_MAIN_VERB";
    case RuleCase::ExDirect: return "EX_DIRECT";
    case RuleCase::ExIndirect: return "EX_INDIRECT";
    case RuleCase::Fallback: return "FALLBACK";
  }
  return "FALLBACK";
}

std::string GeneratedAnswer::render_trace() const {
  std::vector<std::string> flat;
  for (const auto& s : trace) flat.insert(flat.end(), s.tokens.begin(), s.tokens.end());
  return join_tokens(flat);
}

std::string finalize(std::vector<std::string> tokens) {
  if (tokens.empty()) throw std::invalid_argument("finalize: empty token list");
  if (tokens.back() == "?") tokens.pop_back();
  tokens.emplace_back(".");
  return join_tokens(tokens);
}

RuleCase classify_v2(const QuestionAnalysis& a) {
  if (!a.aux_index) return RuleCase::Fallback;
  // Only fronted WH words take part in the reordering.
  if (a.wh_index && (*a.wh_index != 0 || *a.aux_index <= *a.wh_index)) return RuleCase::Fallback;
  if (!a.main_verb_index) return RuleCase::V2NoMainVerb;
  if (*a.main_verb_index < *a.aux_index) return RuleCase::Fallback;
  if (*a.main_verb_index == *a.aux_index + 1) return RuleCase::V2Consecutive;
  return RuleCase::V2Split;
}

GeneratedAnswer generate_v1(const GenerationRequest& req) {
  require_factoid(req);
  const auto fact = factoid_tokens(req);
  if (!req.analysis.wh_index) throw MissingWhWord("no WH word in question");
  const std::size_t wh = *req.analysis.wh_index;
  return AnswerBuilder(req.question)
      .question(0, wh)
      .factoid(fact)
      .question(wh + 1, content_end(req.question))
      .finish(RuleCase::V1Substitution);
}

GeneratedAnswer generate_v2(const GenerationRequest& req) {
  require_factoid(req);
  const auto fact = factoid_tokens(req);
  const auto& a = req.analysis;
  const std::size_t end = content_end(req.question);
  AnswerBuilder b(req.question);

  switch (classify_v2(a)) {
    case RuleCase::V2Consecutive:
      return b.factoid(fact).question(*a.aux_index, end).finish(RuleCase::V2Consecutive);
    case RuleCase::V2Split: {
      const std::size_t aux = *a.aux_index, main = *a.main_verb_index;
      return b.question(aux + 1, main)
          .question(aux, aux + 1)
          .question(main, end)
          .factoid(fact)
          .finish(RuleCase::V2Split);
    }
    case RuleCase::V2NoMainVerb: {
      const std::size_t aux = *a.aux_index;
      return b.question(aux + 1, end).question(aux, aux + 1).factoid(fact).finish(RuleCase::V2NoMainVerb);
    }
    default:
      break;
  }

  std::vector<std::string> notes;
  if (!a.aux_index && a.main_verb_index) {
    notes.emplace_back("main verb without auxiliary; fell back to WH substitution");
  } else if (!a.aux_index) {
    notes.emplace_back("no auxiliary; fell back to WH substitution");
  } else if (a.main_verb_index && *a.main_verb_index < *a.aux_index) {
    notes.emplace_back("main verb precedes auxiliary; fell back to WH substitution");
  } else {
    notes.emplace_back("WH word not sentence-initial; fell back to WH substitution");
  }
  if (!a.wh_index) throw Unanalyzable("question has neither a usable auxiliary nor a WH word");
  GeneratedAnswer out = generate_v1(req);
  out.rule_case = RuleCase::Fallback;
  out.notes = std::move(notes);
  return out;
}

GeneratedAnswer generate_existential(const GenerationRequest& req, const GenerationOptions& options) {
  if (req.qtype != QuestionType::Existential) throw InvalidRequest("request is not an existential question");
  const std::string polarity = lower(req.factoid);
  if (polarity != "yes" && polarity != "no") throw InvalidRequest("existential answer must be yes or no");
  const bool negative = polarity == "no";
  const auto& a = req.analysis;
  if (!a.np_span) throw StructureNotFound("no noun phrase found");
  if (!a.vp_span) throw StructureNotFound("no verb phrase found");
  const bool swap = options.pronoun_swap;
  const auto& pq = req.question;

  AnswerBuilder b(pq);
  b.literal(negative ? "No," : "Yes,");
  b.question(*a.np_span, swap);

  if (a.embedded_start) {
    TokenRange vp = *a.vp_span;
    std::vector<std::string> notes;
    if (is_aux_like(pq[vp.begin])) {
      b.question(vp.begin, vp.begin + 1);
      ++vp.begin;
    } else {
      b.literal("does");
      notes.emplace_back("inserted do-support");
    }
    if (negative) b.literal("not");
    return b.question(vp, swap).finish(RuleCase::ExIndirect, std::move(notes));
  }

  if (!a.aux_index) throw StructureNotFound("no auxiliary found");
  b.literal(lower(pq[*a.aux_index].text));
  if (negative) b.literal("not");
  return b.question(*a.vp_span, swap).finish(RuleCase::ExDirect);
}

std::string swap_perspective(std::string_view word) {
  static constexpr std::pair<std::string_view, std::string_view> kTable[] = {
      {"my", "your"}, {"your", "my"}, {"me", "you"}, {"mine", "yours"}, {"our", "your"}};
  if (word == "I") return "you";
  const std::string key = lower(word);
  for (const auto& [from, to] : kTable) {
    if (key != from) continue;
    std::string out(to);
    const bool all_upper = word.size() > 1 && std::all_of(word.begin(), word.end(), [](char c) {
      return std::isupper(static_cast<unsigned char>(c));
    });
    if (all_upper) {
      for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    } else if (std::isupper(static_cast<unsigned char>(word.front()))) {
      out.front() = static_cast<char>(std::toupper(static_cast<unsigned char>(out.front())));
    }
    return out;
  }
  return std::string(word);
}

}  // namespace ansgen
