#pragma once

// Constituency (Penn-bracketed) and dependency (CoNLL-U) parse ingestion, and
// the aligned question representation the analysis and rule stages read.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ansgen {

/// Half-open token index range [begin, end).
struct TokenRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool empty() const { return begin == end; }
  bool contains(std::size_t i) const { return i >= begin && i < end; }
  bool overlaps(const TokenRange& o) const { return begin < o.end && o.begin < end; }
  bool operator==(const TokenRange&) const = default;
};

/// One CoNLL-U word line. `pos_tag` carries the XPOS (Penn) column; the other
/// columns are kept verbatim so a block can be written back out.
struct Token {
  std::size_t index = 0;
  std::string text;
  std::string pos_tag;
  std::optional<std::size_t> head;  // none for the root
  std::string deprel;
  std::string lemma = "_";
  std::string upos = "_";
  std::string feats = "_";
  std::string deps = "_";
  std::string misc = "_";

  bool operator==(const Token&) const = default;
};

/// Malformed bracketed tree or CoNLL-U block. `offset()` is the character
/// offset into the input where the problem was detected.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Constituency tree and token list disagree.
class AlignmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A node has children XOR a leaf token. Leaves are preterminals: `label` is
/// the POS tag and `word` the terminal surface text.
struct ConstituencyNode {
  std::string label;
  std::vector<ConstituencyNode> children;
  std::optional<std::size_t> leaf_token;
  std::string word;

  bool is_leaf() const { return leaf_token.has_value(); }
  std::size_t leaf_count() const;
  bool operator==(const ConstituencyNode&) const = default;
};

/// A labelled phrase and the tokens it covers.
struct Constituent {
  std::string label;
  TokenRange span;
  std::size_t depth = 0;
};

ConstituencyNode parse_ptb_bracketed(std::string_view text);
std::string to_bracketed(const ConstituencyNode& node);

std::vector<Token> parse_conllu(std::string_view block);
std::string write_conllu(std::span<const Token> tokens);

/// Checks the token-list invariants: contiguous indices, heads in range and
/// not self-referential, exactly one root carrying the "root" relation.
/// Throws std::invalid_argument.
void validate_tokens(std::span<const Token> tokens);

class ParsedQuestion {
 public:
  const std::string& raw() const { return raw_; }
  const std::vector<Token>& tokens() const { return tokens_; }
  const ConstituencyNode& root() const { return root_; }
  std::size_t size() const { return tokens_.size(); }
  const Token& operator[](std::size_t i) const { return tokens_.at(i); }

  /// Index of the dependency root.
  std::size_t root_index() const { return root_index_; }

  /// All internal nodes with their spans, in pre-order.
  const std::vector<Constituent>& constituents() const { return constituents_; }

  bool operator==(const ParsedQuestion& o) const {
    return raw_ == o.raw_ && tokens_ == o.tokens_ && root_ == o.root_;
  }

 private:
  friend ParsedQuestion align(ConstituencyNode root, std::vector<Token> tokens, std::string raw);
  ParsedQuestion() = default;

  std::string raw_;
  std::vector<Token> tokens_;
  ConstituencyNode root_;
  std::size_t root_index_ = 0;
  std::vector<Constituent> constituents_;
};

/// Pairs tree leaves with tokens by position; surface texts must agree
/// case-sensitively. An empty `raw` defaults to the space-joined tokens.
ParsedQuestion align(ConstituencyNode root, std::vector<Token> tokens, std::string raw = {});

/// Space-joined token texts over `range`; throws std::out_of_range.
std::string span_text(const ParsedQuestion& pq, TokenRange range);

std::string join_tokens(std::span<const std::string> tokens);
std::vector<std::string> split_whitespace(std::string_view text);

}  // namespace ansgen
