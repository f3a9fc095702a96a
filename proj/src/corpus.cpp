#include "ansgen/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

namespace ansgen {

namespace {

constexpr const char* kKnownKeys[] = {"id",    "question",     "factoid",    "targets",
                                      "qtype", "constituency", "dependency", "source"};

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

std::string required_string(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw std::invalid_argument(std::string("missing field '") + key + "'");
  if (!j[key].is_string()) throw std::invalid_argument(std::string("field '") + key + "' must be a string");
  return j[key].get<std::string>();
}

}  // namespace

Sample sample_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("record is not a JSON object");
  Sample s;
  s.id = required_string(j, "id");
  s.question = required_string(j, "question");
  s.factoid = required_string(j, "factoid");
  if (!j.contains("targets") || !j["targets"].is_array()) throw std::invalid_argument("field 'targets' must be an array");
  for (const auto& t : j["targets"]) {
    if (!t.is_string()) throw std::invalid_argument("targets must be strings");
    s.targets.push_back(t.get<std::string>());
  }
  const std::string qtype = required_string(j, "qtype");
  const auto parsed = parse_question_type(qtype);
  if (!parsed) throw std::invalid_argument("unknown qtype '" + qtype + "'");
  s.qtype = *parsed;
  s.constituency = required_string(j, "constituency");
  s.dependency = required_string(j, "dependency");
  if (j.contains("source") && !j["source"].is_null()) s.source = required_string(j, "source");
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(kKnownKeys), std::end(kKnownKeys), key) == std::end(kKnownKeys)) s.extra[key] = value;
  }
  return s;
}

nlohmann::json to_json(const Sample& s) {
  nlohmann::json j = s.extra.is_object() ? s.extra : nlohmann::json::object();
  j["id"] = s.id;
  j["question"] = s.question;
  j["factoid"] = s.factoid;
  j["targets"] = s.targets;
  j["qtype"] = std::string(to_string(s.qtype));
  j["constituency"] = s.constituency;
  j["dependency"] = s.dependency;
  if (s.source) j["source"] = *s.source;
  return j;
}

void write_jsonl(std::ostream& out, const std::vector<Sample>& samples) {
  for (const auto& s : samples) out << to_json(s).dump() << '\n';
}

ParsedQuestion parse_sample(const Sample& sample) {
  return align(parse_ptb_bracketed(sample.constituency), parse_conllu(sample.dependency), sample.question);
}

std::vector<std::string> validate(const Sample& s) {
  std::vector<std::string> v;
  if (s.id.empty()) v.emplace_back("id empty");
  if (is_blank(s.question)) v.emplace_back("question empty");
  if (is_blank(s.factoid)) v.emplace_back("factoid empty");
  if (s.targets.empty()) v.emplace_back("targets empty");
  for (std::size_t k = 0; k < s.targets.size(); ++k) {
    if (is_blank(s.targets[k])) v.push_back("target " + std::to_string(k) + " empty");
  }
  if (s.qtype == QuestionType::Existential) {
    const std::string f = lower(s.factoid);
    if (f != "yes" && f != "no") v.emplace_back("existential factoid must be yes or no");
  }

  std::optional<ConstituencyNode> tree;
  std::optional<std::vector<Token>> tokens;
  try {
    tree = parse_ptb_bracketed(s.constituency);
  } catch (const ParseError& e) {
    v.push_back(std::string("constituency parse error: ") + e.what());
  }
  try {
    tokens = parse_conllu(s.dependency);
  } catch (const ParseError& e) {
    v.push_back(std::string("dependency parse error: ") + e.what());
  }
  if (tree && tokens) {
    try {
      align(std::move(*tree), std::move(*tokens), s.question);
    } catch (const std::exception& e) {
      v.push_back(std::string("parse alignment failure: ") + e.what());
    }
  }
  return v;
}

std::vector<CorpusViolation> validate_corpus(const std::vector<Sample>& samples) {
  std::vector<CorpusViolation> out;
  std::set<std::string> ids;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (!ids.insert(samples[k].id).second) out.push_back({k, "duplicate id '" + samples[k].id + "'"});
    for (auto& msg : validate(samples[k])) out.push_back({k, std::move(msg)});
  }
  return out;
}

LoadResult load_jsonl(std::istream& in, LoadMode mode) {
  LoadResult result;
  std::set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  const auto fail = [&](std::string message) {
    if (mode == LoadMode::Strict) throw CorpusError(message, lineno);
    result.issues.push_back({lineno, std::move(message)});
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank(line)) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      fail("malformed JSON");
      continue;
    }
    Sample s;
    try {
      s = sample_from_json(j);
    } catch (const std::exception& e) {
      fail(std::string("schema violation: ") + e.what());
      continue;
    }
    auto violations = validate(s);
    if (!ids.insert(s.id).second) violations.push_back("duplicate id '" + s.id + "'");
    if (!violations.empty()) {
      std::string msg = "schema violation: ";
      for (std::size_t k = 0; k < violations.size(); ++k) msg += (k ? "; " : "") + violations[k];
      fail(std::move(msg));
      continue;
    }
    result.samples.push_back(std::move(s));
  }
  if (in.bad()) throw CorpusError("read failure", lineno);
  return result;
}

LoadResult load_jsonl(const std::filesystem::path& path, LoadMode mode) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open corpus file '" + path.string() + "'", 0);
  return load_jsonl(in, mode);
}

CorpusStats stats(const std::vector<Sample>& samples) {
  CorpusStats st;
  st.total = samples.size();
  for (const auto& s : samples) {
    ++st.by_qtype[std::string(to_string(s.qtype))];
    if (s.source) ++st.by_source[*s.source];
  }
  return st;
}

}  // namespace ansgen
