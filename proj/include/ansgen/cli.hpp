#pragma once

// Command orchestration behind the `ansgen` executable: generate, evaluate,
// diagnose and stats over a JSONL corpus. Reports go to `out` (or the --out
// file), diagnostics to `err`. Exit status is 0 iff no hard error occurred.

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ansgen/corpus.hpp"
#include "ansgen/corrector.hpp"
#include "ansgen/rules.hpp"

namespace ansgen {

enum class Command { Generate, Evaluate, Diagnose, Stats };
enum class RuleChoice { V1, V2, Existential, Auto };
enum class CorrectorKind { Identity, Remote };
enum class ReportFormat { Text, Json };

struct RunConfig {
  Command command = Command::Generate;
  std::string corpus_path;
  RuleChoice rule = RuleChoice::Auto;
  CorrectorKind corrector = CorrectorKind::Identity;
  CorrectorConfig corrector_config;
  bool pronoun_swap = true;
  std::optional<std::string> output_path;
  ReportFormat report_format = ReportFormat::Text;
  unsigned workers = 1;

  /// Throws std::invalid_argument (e.g. remote corrector without endpoint).
  void validate() const;
};

/// Rule output plus its corrected form for one sample.
struct SampleOutcome {
  GeneratedAnswer generated;
  CorrectionResult correction;
};

/// analyze + the selected rule. `auto` picks RBV2 for factoid samples and the
/// existential rule for existential ones.
GeneratedAnswer generate_answer(const Sample& sample, const ParsedQuestion& pq, RuleChoice rule,
                                const GenerationOptions& options);

std::unique_ptr<Corrector> make_corrector(const RunConfig& config);

int run_generate(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_evaluate(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_diagnose(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_stats(const RunConfig& config, std::ostream& out, std::ostream& err);
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses command-line arguments and runs the selected command.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ansgen
