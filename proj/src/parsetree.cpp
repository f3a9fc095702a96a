#include "ansgen/parsetree.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

namespace ansgen {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

class BracketReader {
 public:
  explicit BracketReader(std::string_view text) : text_(text) {}

  ConstituencyNode read_tree() {
    skip_space();
    if (at_end()) throw ParseError("empty input", pos_);
    if (text_[pos_] != '(') throw ParseError("expected '('", pos_);
    ConstituencyNode root = read_node();
    skip_space();
    if (!at_end()) {
      if (text_[pos_] == ')') throw ParseError("unbalanced brackets", pos_);
      throw ParseError("trailing characters after tree", pos_);
    }
    return root;
  }

 private:
  ConstituencyNode read_node() {
    const std::size_t open = pos_;
    ++pos_;  // '('
    skip_space();
    ConstituencyNode node;
    node.label = read_atom();
    bool saw_terminal = false;
    while (true) {
      skip_space();
      if (at_end()) throw ParseError("unbalanced brackets", open);
      const char c = text_[pos_];
      if (c == ')') {
        ++pos_;
        break;
      }
      if (c == '(') {
        if (saw_terminal) throw ParseError("leaf with no preterminal label", pos_);
        node.children.push_back(read_node());
        continue;
      }
      const std::size_t at = pos_;
      std::string word = read_atom();
      if (saw_terminal || !node.children.empty()) {
        throw ParseError("leaf with no preterminal label", at);
      }
      skip_space();
      if (node.label.empty()) throw ParseError("leaf with no preterminal label", at);
      node.word = std::move(word);
      node.leaf_token = next_leaf_++;
      saw_terminal = true;
    }
    if (!saw_terminal && node.children.empty()) throw ParseError("empty constituent", open);
    return node;
  }

  std::string read_atom() {
    const std::size_t start = pos_;
    while (!at_end() && !is_space(text_[pos_]) && text_[pos_] != '(' && text_[pos_] != ')') ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  void skip_space() {
    while (!at_end() && is_space(text_[pos_])) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t next_leaf_ = 0;
};

void write_node(const ConstituencyNode& node, std::string& out) {
  out += '(';
  out += node.label;
  if (node.is_leaf()) {
    out += ' ';
    out += node.word;
  } else {
    for (const auto& child : node.children) {
      out += ' ';
      write_node(child, out);
    }
  }
  out += ')';
}

std::optional<long> parse_int(std::string_view s) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t p = s.find(sep, start);
    if (p == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, p - start));
    start = p + 1;
  }
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Collects leaves in reading order and phrase spans in pre-order.
TokenRange collect(const ConstituencyNode& node, std::size_t depth,
                   std::vector<const ConstituencyNode*>& leaves, std::vector<Constituent>& phrases) {
  if (node.is_leaf()) {
    const std::size_t i = leaves.size();
    leaves.push_back(&node);
    return {i, i + 1};
  }
  const std::size_t slot = phrases.size();
  phrases.push_back({node.label, {}, depth});
  TokenRange span{leaves.size(), leaves.size()};
  for (const auto& child : node.children) span.end = collect(child, depth + 1, leaves, phrases).end;
  phrases[slot].span = span;
  return span;
}

}  // namespace

std::size_t ConstituencyNode::leaf_count() const {
  if (is_leaf()) return 1;
  std::size_t n = 0;
  for (const auto& c : children) n += c.leaf_count();
  return n;
}

ConstituencyNode parse_ptb_bracketed(std::string_view text) { return BracketReader(text).read_tree(); }

std::string to_bracketed(const ConstituencyNode& node) {
  std::string out;
  write_node(node, out);
  return out;
}

std::vector<Token> parse_conllu(std::string_view block) {
  std::vector<Token> tokens;
  std::vector<std::size_t> line_offsets;
  std::size_t line_start = 0;
  for (std::string_view line : split(block, '\n')) {
    const std::size_t offset = line_start;
    line_start += line.size() + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    auto cols = split(line, '\t');
    if (cols.size() < 8) throw ParseError("expected at least 8 tab-separated columns", offset);
    // Multiword ranges ("2-3") and empty nodes ("2.1") carry no tree position.
    if (cols[0].find_first_of("-.") != std::string_view::npos) continue;

    auto id = parse_int(cols[0]);
    if (!id || *id < 1) throw ParseError("non-numeric ID '" + std::string(cols[0]) + "'", offset);
    auto head = parse_int(cols[6]);
    if (!head || *head < 0) throw ParseError("non-numeric HEAD '" + std::string(cols[6]) + "'", offset);

    Token t;
    t.index = static_cast<std::size_t>(*id - 1);
    t.text = cols[1];
    t.lemma = cols[2];
    t.upos = cols[3];
    t.pos_tag = cols[4];
    t.feats = cols[5];
    if (*head > 0) t.head = static_cast<std::size_t>(*head - 1);
    t.deprel = cols[7];
    if (cols.size() > 8) t.deps = cols[8];
    if (cols.size() > 9) t.misc = cols[9];
    tokens.push_back(std::move(t));
    line_offsets.push_back(offset);
  }
  if (tokens.empty()) throw ParseError("no tokens in block", 0);

  std::set<std::size_t> seen;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    if (!seen.insert(tokens[k].index).second) {
      throw ParseError("duplicate ID " + std::to_string(tokens[k].index + 1), line_offsets[k]);
    }
    if (tokens[k].index != k) throw ParseError("non-contiguous ID", line_offsets[k]);
  }
  std::size_t roots = 0;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    const auto& t = tokens[k];
    if (t.head && *t.head >= tokens.size()) throw ParseError("head out of range", line_offsets[k]);
    if (t.head && *t.head == t.index) throw ParseError("self-referential head", line_offsets[k]);
    if (!t.head && ++roots > 1) throw ParseError("multiple roots", line_offsets[k]);
  }
  if (roots == 0) throw ParseError("no root", 0);
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    const bool root_rel = lower(tokens[k].deprel) == "root";
    if (root_rel != !tokens[k].head.has_value()) {
      throw ParseError("root relation must label exactly the HEAD=0 token", line_offsets[k]);
    }
  }
  return tokens;
}

std::string write_conllu(std::span<const Token> tokens) {
  std::string out;
  for (const auto& t : tokens) {
    out += std::to_string(t.index + 1);
    for (const std::string* col : {&t.text, &t.lemma, &t.upos, &t.pos_tag, &t.feats}) {
      out += '\t';
      out += *col;
    }
    out += '\t';
    out += t.head ? std::to_string(*t.head + 1) : "0";
    for (const std::string* col : {&t.deprel, &t.deps, &t.misc}) {
      out += '\t';
      out += *col;
    }
    out += '\n';
  }
  return out;
}

void validate_tokens(std::span<const Token> tokens) {
  if (tokens.empty()) throw std::invalid_argument("empty token list");
  std::size_t roots = 0;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    const auto& t = tokens[k];
    if (t.index != k) throw std::invalid_argument("token indices not contiguous at " + std::to_string(k));
    if (t.head && *t.head >= tokens.size()) throw std::invalid_argument("head out of range at " + std::to_string(k));
    if (t.head && *t.head == k) throw std::invalid_argument("self-referential head at " + std::to_string(k));
    if (lower(t.deprel) == "root") ++roots;
    if (!t.head && lower(t.deprel) != "root") throw std::invalid_argument("headless token without root relation");
  }
  if (roots != 1) throw std::invalid_argument("expected exactly one root, found " + std::to_string(roots));
}

ParsedQuestion align(ConstituencyNode root, std::vector<Token> tokens, std::string raw) {
  std::vector<const ConstituencyNode*> leaves;
  std::vector<Constituent> phrases;
  collect(root, 0, leaves, phrases);
  if (leaves.size() != tokens.size()) {
    throw AlignmentError("count mismatch: " + std::to_string(leaves.size()) + " leaves vs " +
                         std::to_string(tokens.size()) + " tokens");
  }
  for (std::size_t k = 0; k < leaves.size(); ++k) {
    if (leaves[k]->word != tokens[k].text) throw AlignmentError("text mismatch at " + std::to_string(k));
    if (leaves[k]->leaf_token != k) throw AlignmentError("leaf index out of order at " + std::to_string(k));
  }
  validate_tokens(tokens);

  ParsedQuestion pq;
  pq.root_index_ = static_cast<std::size_t>(
      std::find_if(tokens.begin(), tokens.end(), [](const Token& t) { return !t.head; }) - tokens.begin());
  pq.raw_ = raw.empty() ? [&] {
    std::string s;
    for (const auto& t : tokens) s += (s.empty() ? "" : " ") + t.text;
    return s;
  }() : std::move(raw);
  pq.tokens_ = std::move(tokens);
  pq.root_ = std::move(root);
  pq.constituents_ = std::move(phrases);
  return pq;
}

std::string span_text(const ParsedQuestion& pq, TokenRange range) {
  if (range.begin > range.end || range.end > pq.size()) {
    throw std::out_of_range("token range [" + std::to_string(range.begin) + "," + std::to_string(range.end) +
                            ") outside " + std::to_string(pq.size()) + " tokens");
  }
  std::string out;
  for (std::size_t i = range.begin; i < range.end; ++i) {
    if (i > range.begin) out += ' ';
    out += pq[i].text;
  }
  return out;
}

std::string join_tokens(std::span<const std::string> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) out.emplace_back(text.substr(start, i - start));
  }
  return out;
}

}  // namespace ansgen
