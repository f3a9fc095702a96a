#include "ansgen/diagnostics.hpp"

#include <algorithm>
#include <cctype>

namespace ansgen {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

struct RawOp {
  bool is_delete = false;
  std::size_t before_pos = 0;  // delete: index; insert: slot
  std::size_t after_pos = 0;   // insert only
  std::size_t gap = 0;
  enum class Fate { Plain, Moved, Substituted } fate = Fate::Plain;
  std::size_t partner = 0;
};

}  // namespace

std::string_view to_string(EditKind k) {
  switch (k) {
    case EditKind::Insert: return "insert";
    case EditKind::Delete: return "delete";
    case EditKind::Substitute: return "substitute";
    case EditKind::Move: return "move";
  }
  return "insert";
}

std::vector<EditOp> token_diff(std::span<const std::string> before, std::span<const std::string> after,
                               const DiffOptions& options) {
  const std::size_t n = before.size(), m = after.size();
  std::vector<std::string> a(before.begin(), before.end()), b(after.begin(), after.end());
  if (!options.case_sensitive) {
    for (auto& s : a) s = lower(s);
    for (auto& s : b) s = lower(s);
  }

  // Suffix LCS table.
  std::vector<std::vector<std::size_t>> lcs(n + 1, std::vector<std::size_t>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      lcs[i][j] = a[i] == b[j] ? lcs[i + 1][j + 1] + 1 : std::max(lcs[i + 1][j], lcs[i][j + 1]);
    }
  }

  std::vector<RawOp> raw;
  std::vector<std::size_t> gap_end;  // before index of the match closing each gap
  std::size_t i = 0, j = 0, gap = 0;
  while (i < n || j < m) {
    if (i < n && j < m && a[i] == b[j] && lcs[i][j] == lcs[i + 1][j + 1] + 1) {
      gap_end.push_back(i);
      ++gap;
      ++i;
      ++j;
    } else if (i < n && (j == m || lcs[i + 1][j] >= lcs[i][j + 1])) {
      raw.push_back({true, i, 0, gap});
      ++i;
    } else {
      raw.push_back({false, 0, j, gap});
      ++j;
    }
  }
  gap_end.push_back(n);
  for (auto& op : raw)
    if (!op.is_delete) op.before_pos = gap_end[op.gap];

  // Deletes and inserts sharing a gap pair up in order as substitutes.
  for (std::size_t g = 0; g <= gap; ++g) {
    std::vector<std::size_t> dels, inss;
    for (std::size_t k = 0; k < raw.size(); ++k) {
      if (raw[k].gap != g || raw[k].fate != RawOp::Fate::Plain) continue;
      (raw[k].is_delete ? dels : inss).push_back(k);
    }
    for (std::size_t k = 0; k < std::min(dels.size(), inss.size()); ++k) {
      raw[dels[k]].fate = raw[inss[k]].fate = RawOp::Fate::Substituted;
      raw[dels[k]].partner = inss[k];
      raw[inss[k]].partner = dels[k];
    }
  }

  // Moves only join ops left unpaired, so collapsing never lengthens the script.
  if (options.collapse_moves) {
    for (std::size_t d = 0; d < raw.size(); ++d) {
      if (!raw[d].is_delete || raw[d].fate != RawOp::Fate::Plain) continue;
      for (std::size_t k = 0; k < raw.size(); ++k) {
        auto& ins = raw[k];
        if (ins.is_delete || ins.fate != RawOp::Fate::Plain || b[ins.after_pos] != a[raw[d].before_pos]) continue;
        raw[d].fate = ins.fate = RawOp::Fate::Moved;
        raw[d].partner = k;
        ins.partner = d;
        break;
      }
    }
  }

  std::vector<EditOp> edits;
  for (const auto& op : raw) {
    if (op.is_delete) {
      const std::string& src = before[op.before_pos];
      switch (op.fate) {
        case RawOp::Fate::Plain:
          edits.push_back({EditKind::Delete, {src}, op.before_pos, std::nullopt});
          break;
        case RawOp::Fate::Moved:
          edits.push_back({EditKind::Move, {src}, op.before_pos, raw[op.partner].after_pos});
          break;
        case RawOp::Fate::Substituted:
          edits.push_back({EditKind::Substitute, {src, after[raw[op.partner].after_pos]}, op.before_pos, std::nullopt});
          break;
      }
    } else if (op.fate == RawOp::Fate::Plain) {
      edits.push_back({EditKind::Insert, {after[op.after_pos]}, op.before_pos, std::nullopt});
    }
  }
  return edits;
}

Tokens apply_edits(std::span<const std::string> before, std::span<const EditOp> edits) {
  const std::size_t n = before.size();
  enum class Slot { Keep, Drop, Replace };
  std::vector<Slot> slot(n, Slot::Keep);
  std::vector<const std::string*> replacement(n, nullptr);
  std::vector<std::vector<const std::string*>> inserts(n + 1);
  std::vector<const EditOp*> moves;

  for (const auto& e : edits) {
    const bool at_slot = e.kind == EditKind::Insert;
    if (e.position > n || (!at_slot && e.position == n)) throw std::invalid_argument("edit position out of range");
    switch (e.kind) {
      case EditKind::Insert:
        for (const auto& t : e.tokens) inserts[e.position].push_back(&t);
        break;
      case EditKind::Delete:
        slot[e.position] = Slot::Drop;
        break;
      case EditKind::Substitute:
        if (e.tokens.size() != 2) throw std::invalid_argument("substitute needs old and new token");
        slot[e.position] = Slot::Replace;
        replacement[e.position] = &e.tokens[1];
        break;
      case EditKind::Move:
        if (!e.destination || e.tokens.empty()) throw std::invalid_argument("move needs a destination and token");
        slot[e.position] = Slot::Drop;
        moves.push_back(&e);
        break;
    }
  }

  Tokens out;
  for (std::size_t i = 0; i <= n; ++i) {
    for (const auto* t : inserts[i]) out.push_back(*t);
    if (i == n) break;
    if (slot[i] == Slot::Keep) out.push_back(before[i]);
    if (slot[i] == Slot::Replace) out.push_back(*replacement[i]);
  }
  // Destinations are final indices, so ascending insertion places each exactly.
  std::stable_sort(moves.begin(), moves.end(),
                   [](const EditOp* x, const EditOp* y) { return *x->destination < *y->destination; });
  for (const auto* mv : moves) {
    if (*mv->destination > out.size()) throw std::invalid_argument("move destination out of range");
    out.insert(out.begin() + static_cast<std::ptrdiff_t>(*mv->destination), mv->tokens.front());
  }
  return out;
}

ErrorCategoryCounts& ErrorCategoryCounts::operator+=(const ErrorCategoryCounts& o) {
  extra += o.extra;
  incorrect += o.incorrect;
  misplaced += o.misplaced;
  missing += o.missing;
  return *this;
}

ErrorCategoryCounts operator+(ErrorCategoryCounts a, const ErrorCategoryCounts& b) { return a += b; }

ErrorCategoryCounts categorize(std::span<const EditOp> edits) {
  ErrorCategoryCounts c;
  for (const auto& e : edits) {
    switch (e.kind) {
      case EditKind::Delete: ++c.extra; break;
      case EditKind::Insert: ++c.missing; break;
      case EditKind::Substitute: ++c.incorrect; break;
      case EditKind::Move: ++c.misplaced; break;
    }
  }
  return c;
}

Tokens diff_tokenize(std::string_view text) { return tokenize_words(text, false); }

ErrorCategoryCounts audit_corpus(std::span<const std::string> rule_outputs,
                                 std::span<const std::string> corrected_outputs) {
  if (rule_outputs.size() != corrected_outputs.size()) {
    throw std::invalid_argument("audit_corpus: length mismatch (" + std::to_string(rule_outputs.size()) + " vs " +
                                std::to_string(corrected_outputs.size()) + ")");
  }
  ErrorCategoryCounts total;
  for (std::size_t k = 0; k < rule_outputs.size(); ++k) {
    const auto edits = token_diff(diff_tokenize(rule_outputs[k]), diff_tokenize(corrected_outputs[k]));
    total += categorize(edits);
  }
  return total;
}

TimingReport time_pipeline(std::span<const Sample> samples, const GenerationFn& pipeline, std::string scope) {
  if (samples.empty()) throw EmptyCorpus("time_pipeline: no samples");
  using Clock = std::chrono::steady_clock;
  TimingReport r;
  r.scope = std::move(scope);
  for (const auto& s : samples) {
    const auto t0 = Clock::now();
    pipeline(s);
    r.total_seconds += std::chrono::duration<double>(Clock::now() - t0).count();
  }
  r.sample_count = samples.size();
  r.avg_seconds = r.total_seconds / static_cast<double>(r.sample_count);
  return r;
}

}  // namespace ansgen
