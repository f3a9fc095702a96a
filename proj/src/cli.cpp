#include "ansgen/cli.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>

#include <CLI11.hpp>

#include "ansgen/analysis.hpp"
#include "ansgen/diagnostics.hpp"
#include "ansgen/metrics.hpp"

namespace ansgen {

namespace {

constexpr const char* kTimingScope = "analysis + rules per sample; parses precomputed, correction excluded";

struct Prepared {
  std::vector<Sample> samples;
  std::vector<ParsedQuestion> parsed;
};

std::optional<Prepared> prepare(const RunConfig& config, std::ostream& err) {
  Prepared p;
  try {
    p.samples = load_jsonl(config.corpus_path, LoadMode::Strict).samples;
  } catch (const CorpusError& e) {
    err << "error: " << e.what() << '\n';
    return std::nullopt;
  }
  if (p.samples.empty()) {
    err << "error: no samples in " << config.corpus_path << '\n';
    return std::nullopt;
  }
  p.parsed.reserve(p.samples.size());
  for (const auto& s : p.samples) p.parsed.push_back(parse_sample(s));
  return p;
}

// Runs fn(k) for k in [0, n) on up to `workers` threads; results stay indexed.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  if (workers == 1) {
    for (std::size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < n; k = next++) fn(k);
    });
  }
}

struct Processed {
  std::vector<std::optional<SampleOutcome>> outcomes;
  bool hard_error = false;
  std::string model_label;
};

Processed process(const RunConfig& config, const Prepared& p, std::ostream& err) {
  Processed r;
  r.outcomes.resize(p.samples.size());
  std::vector<std::string> errors(p.samples.size());
  std::vector<std::string> warnings(p.samples.size());
  auto corrector = make_corrector(config);
  const GenerationOptions options{config.pronoun_swap};

  parallel_for(p.samples.size(), config.workers, [&](std::size_t k) {
    const Sample& s = p.samples[k];
    try {
      SampleOutcome o;
      o.generated = generate_answer(s, p.parsed[k], config.rule, options);
      o.correction = corrector->correct(o.generated.text);
      if (o.correction.warning) warnings[k] = o.correction.warning_message;
      r.outcomes[k] = std::move(o);
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  });

  for (std::size_t k = 0; k < p.samples.size(); ++k) {
    if (!warnings[k].empty()) {
      err << "warning: sample " << p.samples[k].id << ": correction passthrough (" << warnings[k] << ")\n";
    }
    if (!errors[k].empty()) {
      err << "error: sample " << p.samples[k].id << ": " << errors[k] << '\n';
      r.hard_error = true;
    }
  }
  r.model_label = corrector->model_label();
  return r;
}

// Writes to --out when given, else to `out`.
bool emit(const RunConfig& config, std::ostream& out, std::ostream& err, const std::string& report) {
  if (!config.output_path) {
    out << report;
    return true;
  }
  std::ofstream file(*config.output_path, std::ios::binary);
  if (!file || !(file << report)) {
    err << "error: cannot write " << *config.output_path << '\n';
    return false;
  }
  return true;
}

std::string model_name(const RunConfig& config, const std::vector<Sample>& samples, const std::string& gec_label) {
  std::string name;
  switch (config.rule) {
    case RuleChoice::V1: name = "RBV1"; break;
    case RuleChoice::V2: name = "RBV2"; break;
    case RuleChoice::Existential: name = "RB"; break;
    case RuleChoice::Auto: {
      bool factoid = false, existential = false;
      for (const auto& s : samples) (s.qtype == QuestionType::Factoid ? factoid : existential) = true;
      name = factoid && existential ? "RBV2/RB" : existential ? "RB" : "RBV2";
      break;
    }
  }
  if (config.corrector == CorrectorKind::Remote) name += "+" + (gec_label.empty() ? std::string("GCM") : gec_label);
  return name;
}

std::string fixed(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

std::string pad(std::string s, std::size_t width, bool left = false) {
  if (s.size() >= width) return s;
  const std::string fill(width - s.size(), ' ');
  return left ? s + fill : fill + s;
}

nlohmann::json scores_json(const EvalScores& s) {
  return {{"bleu", s.bleu}, {"rouge1", s.rouge1}, {"rouge2", s.rouge2}, {"rougeL", s.rougeL}};
}

}  // namespace

void RunConfig::validate() const {
  if (corpus_path.empty()) throw std::invalid_argument("--corpus is required");
  if (workers == 0) throw std::invalid_argument("--workers must be at least 1");
  if (corrector == CorrectorKind::Remote) {
    if (corrector_config.endpoint.empty()) {
      throw std::invalid_argument("remote corrector needs --endpoint or ANSGEN_GEC_ENDPOINT");
    }
    corrector_config.validate();
  }
}

GeneratedAnswer generate_answer(const Sample& sample, const ParsedQuestion& pq, RuleChoice rule,
                                const GenerationOptions& options) {
  const QuestionAnalysis analysis = analyze(pq);
  const GenerationRequest req{pq, analysis, sample.factoid, sample.qtype};
  switch (rule) {
    case RuleChoice::V1: return generate_v1(req);
    case RuleChoice::V2: return generate_v2(req);
    case RuleChoice::Existential: return generate_existential(req, options);
    case RuleChoice::Auto:
      return sample.qtype == QuestionType::Existential ? generate_existential(req, options) : generate_v2(req);
  }
  throw std::logic_error("unknown rule choice");
}

std::unique_ptr<Corrector> make_corrector(const RunConfig& config) {
  if (config.corrector == CorrectorKind::Remote) return std::make_unique<HttpCorrector>(config.corrector_config);
  return std::make_unique<IdentityCorrector>();
}

int run_generate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  auto prepared = prepare(config, err);
  if (!prepared) return 1;
  const auto processed = process(config, *prepared, err);

  std::string report;
  for (std::size_t k = 0; k < prepared->samples.size(); ++k) {
    const auto& o = processed.outcomes[k];
    if (!o) continue;
    nlohmann::json rec{{"id", prepared->samples[k].id},
                       {"answer", o->correction.corrected},
                       {"rule_case", std::string(to_string(o->generated.rule_case))},
                       {"changed_by_gec", o->correction.changed}};
    report += rec.dump() + "\n";
  }
  if (!emit(config, out, err, report)) return 1;
  return processed.hard_error ? 1 : 0;
}

int run_evaluate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  auto prepared = prepare(config, err);
  if (!prepared) return 1;
  const auto processed = process(config, *prepared, err);
  if (processed.hard_error) return 1;

  const auto& samples = prepared->samples;
  std::vector<EvalScores> per_sample;
  per_sample.reserve(samples.size());
  try {
    for (std::size_t k = 0; k < samples.size(); ++k) {
      per_sample.push_back(score_sample(processed.outcomes[k]->correction.corrected, samples[k].targets));
    }
  } catch (const std::exception& e) {
    err << "error: scoring failed: " << e.what() << '\n';
    return 1;
  }
  const EvalScores total = aggregate(per_sample);

  // Timing is sequential and covers the rule path only.
  const GenerationOptions options{config.pronoun_swap};
  const TimingReport timing = time_pipeline(
      samples,
      [&](const Sample& s) {
        const auto k = static_cast<std::size_t>(&s - samples.data());
        (void)generate_answer(s, prepared->parsed[k], config.rule, options);
      },
      kTimingScope);

  const std::string model = model_name(config, samples, processed.model_label);
  std::string report;
  if (config.report_format == ReportFormat::Json) {
    nlohmann::json j;
    j["model"] = model;
    j["bleu_mode"] = "mean sentence-level";
    j["rouge_multi_reference"] = "max F1 over references";
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t k = 0; k < samples.size(); ++k) {
      const auto& o = *processed.outcomes[k];
      rows.push_back({{"id", samples[k].id},
                      {"rule_output", o.generated.text},
                      {"candidate", o.correction.corrected},
                      {"rule_case", std::string(to_string(o.generated.rule_case))},
                      {"changed_by_gec", o.correction.changed},
                      {"scores", scores_json(per_sample[k])}});
    }
    j["samples"] = std::move(rows);
    j["aggregate"] = scores_json(total);
    j["timing"] = {{"scope", timing.scope},
                   {"sample_count", timing.sample_count},
                   {"total_seconds", timing.total_seconds},
                   {"avg_seconds", timing.avg_seconds}};
    report = j.dump(2) + "\n";
  } else {
    const std::size_t w = std::max<std::size_t>(12, model.size() + 2);
    report += pad("Model", w, true) + pad("BLEU", 8) + pad("ROUGE-1", 9) + pad("ROUGE-2", 9) + pad("ROUGE-L", 9) +
              pad("Avg. time (sec.)", 18) + "\n";
    report += pad(model, w, true) + pad(fixed(total.bleu, 1), 8) + pad(fixed(total.rouge1, 1), 9) +
              pad(fixed(total.rouge2, 1), 9) + pad(fixed(total.rougeL, 1), 9) +
              pad(fixed(timing.avg_seconds, 6), 18) + "\n";
    report += "samples: " + std::to_string(samples.size()) + "; BLEU: mean sentence-level; timing: " + timing.scope +
              "\n";
  }
  return emit(config, out, err, report) ? 0 : 1;
}

int run_diagnose(const RunConfig& config, std::ostream& out, std::ostream& err) {
  auto prepared = prepare(config, err);
  if (!prepared) return 1;
  const auto processed = process(config, *prepared, err);
  if (processed.hard_error) return 1;

  std::vector<std::string> before, after;
  for (const auto& o : processed.outcomes) {
    before.push_back(o->generated.text);
    after.push_back(o->correction.corrected);
  }
  const ErrorCategoryCounts c = audit_corpus(before, after);

  std::string report;
  if (config.report_format == ReportFormat::Json) {
    nlohmann::json j{{"pairs", before.size()},
                     {"extra", c.extra},
                     {"incorrect", c.incorrect},
                     {"misplaced", c.misplaced},
                     {"missing", c.missing}};
    report = j.dump(2) + "\n";
  } else {
    const std::pair<const char*, std::size_t> rows[] = {
        {"extra", c.extra}, {"incorrect", c.incorrect}, {"misplaced", c.misplaced}, {"missing", c.missing}};
    report += pad("Grammar Error", 28, true) + pad("Count", 8) + "\n";
    for (const auto& [name, count] : rows) {
      report += pad(std::string("Grammar Error [") + name + "]", 28, true) + pad(std::to_string(count), 8) + "\n";
    }
    report += "pairs: " + std::to_string(before.size()) + "\n";
  }
  return emit(config, out, err, report) ? 0 : 1;
}

int run_stats(const RunConfig& config, std::ostream& out, std::ostream& err) {
  LoadResult loaded;
  try {
    loaded = load_jsonl(config.corpus_path, LoadMode::Lenient);
  } catch (const CorpusError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  for (const auto& issue : loaded.issues) err << "warning: line " << issue.line << ": " << issue.message << '\n';
  const CorpusStats st = stats(loaded.samples);

  std::string report;
  if (config.report_format == ReportFormat::Json) {
    nlohmann::json j{{"total", st.total},
                     {"by_qtype", st.by_qtype},
                     {"by_source", st.by_source},
                     {"warnings", loaded.issues.size()}};
    report = j.dump(2) + "\n";
  } else {
    report += "total: " + std::to_string(st.total) + "\n";
    for (const auto& [k, v] : st.by_qtype) report += "qtype " + k + ": " + std::to_string(v) + "\n";
    for (const auto& [k, v] : st.by_source) report += "source " + k + ": " + std::to_string(v) + "\n";
    report += "warnings: " + std::to_string(loaded.issues.size()) + "\n";
  }
  return emit(config, out, err, report) ? 0 : 1;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  try {
    switch (config.command) {
      case Command::Generate: return run_generate(config, out, err);
      case Command::Evaluate: return run_evaluate(config, out, err);
      case Command::Diagnose: return run_diagnose(config, out, err);
      case Command::Stats: return run_stats(config, out, err);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return 1;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Full-length answer generation from questions and factoid answers"};
  app.require_subcommand(1);

  RunConfig config;
  config.workers = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ANSGEN_GEC_ENDPOINT")) config.corrector_config.endpoint = env;

  const std::map<std::string, RuleChoice> rules{
      {"v1", RuleChoice::V1}, {"v2", RuleChoice::V2}, {"existential", RuleChoice::Existential}, {"auto", RuleChoice::Auto}};
  const std::map<std::string, CorrectorKind> correctors{{"identity", CorrectorKind::Identity},
                                                        {"remote", CorrectorKind::Remote}};
  const std::map<std::string, OnGecError> on_error{{"fail", OnGecError::Fail}, {"passthrough", OnGecError::Passthrough}};
  const std::map<std::string, bool> switches{{"on", true}, {"off", false}};
  const std::map<std::string, ReportFormat> formats{{"text", ReportFormat::Text}, {"json", ReportFormat::Json}};
  std::string out_path;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--corpus", config.corpus_path, "JSONL corpus")->required();
    sub->add_option("--rule", config.rule, "v1 | v2 | existential | auto")
        ->transform(CLI::CheckedTransformer(rules, CLI::ignore_case));
    sub->add_option("--corrector", config.corrector, "identity | remote")
        ->transform(CLI::CheckedTransformer(correctors, CLI::ignore_case));
    sub->add_option("--endpoint", config.corrector_config.endpoint, "GEC service base URL");
    sub->add_option("--timeout-ms", config.corrector_config.timeout_ms, "GEC request timeout");
    sub->add_option("--retries", config.corrector_config.max_retries, "GEC retries on transient failure");
    sub->add_option("--on-gec-error", config.corrector_config.on_error, "fail | passthrough")
        ->transform(CLI::CheckedTransformer(on_error, CLI::ignore_case));
    sub->add_option("--pronoun-swap", config.pronoun_swap, "on | off")
        ->transform(CLI::CheckedTransformer(switches, CLI::ignore_case));
    sub->add_option("--out", out_path, "write the report here instead of stdout");
    sub->add_option("--format", config.report_format, "text | json")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    sub->add_option("--workers", config.workers, "concurrent samples");
  };

  const std::pair<const char*, Command> commands[] = {{"generate", Command::Generate},
                                                       {"evaluate", Command::Evaluate},
                                                       {"diagnose", Command::Diagnose},
                                                       {"stats", Command::Stats}};
  const char* descriptions[] = {"write answer records as JSONL", "score answers against targets",
                                "categorize corrector edits", "count corpus samples"};
  std::vector<std::pair<CLI::App*, Command>> subs;
  for (std::size_t k = 0; k < std::size(commands); ++k) {
    auto* sub = app.add_subcommand(commands[k].first, descriptions[k]);
    add_common(sub);
    subs.emplace_back(sub, commands[k].second);
  }

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    // --help exits 0; every other parse failure is a usage error.
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }
  for (const auto& [sub, cmd] : subs)
    if (sub->parsed()) config.command = cmd;
  if (!out_path.empty()) config.output_path = out_path;
  return run(config, out, err);
}

}  // namespace ansgen
