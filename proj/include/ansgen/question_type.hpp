#pragma once

#include <optional>
#include <string_view>

namespace ansgen {

enum class QuestionType { Factoid, Existential };

constexpr std::string_view to_string(QuestionType t) {
  return t == QuestionType::Factoid ? "factoid" : "existential";
}

inline std::optional<QuestionType> parse_question_type(std::string_view s) {
  if (s == "factoid") return QuestionType::Factoid;
  if (s == "existential") return QuestionType::Existential;
  return std::nullopt;
}

}  // namespace ansgen
