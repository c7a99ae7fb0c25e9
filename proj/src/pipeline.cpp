#include "autopatch/pipeline.hpp"

#include <cstdlib>
#include <fstream>
#include <map>

#include <spdlog/spdlog.h>

#include "autopatch/cfg.hpp"
#include "autopatch/cfg_diff.hpp"
#include "autopatch/embedding.hpp"
#include "autopatch/error.hpp"
#include "autopatch/preprocess.hpp"
#include "autopatch/text.hpp"
#include "autopatch/vector_index.hpp"

namespace autopatch {

namespace fs = std::filesystem;
using nlohmann::json;

void RunConfig::validate() const {
  if (!cassette || cassette_mode != CassetteMode::Replay) return;
  if (const char* base = std::getenv("AUTOPATCH_LLM_BASE"); base != nullptr && *base != '\0') {
    throw Error(ErrorCode::Usage, "replay mode forbids a live service URL (AUTOPATCH_LLM_BASE is set)");
  }
  if (provider == EmbeddingBackend::Remote) {
    throw Error(ErrorCode::Usage, "replay mode forbids the remote embedding provider");
  }
}

namespace {

struct Manifest {
  std::vector<std::string> database_ids;
  std::vector<std::string> test_ids;
};

fs::path manifest_path(const RunConfig& c) { return c.out / "manifest.json"; }

Manifest read_manifest(const RunConfig& c) {
  const json j = json::parse(text::read_file(manifest_path(c)), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::Io, "unreadable manifest " + manifest_path(c).string());
  Manifest m;
  m.database_ids = j.at("database_ids").get<std::vector<std::string>>();
  m.test_ids = j.at("test_ids").get<std::vector<std::string>>();
  return m;
}

Corpus load_corpus(const RunConfig& c) {
  IngestResult r = ingest_pairs(c.corpus);
  for (const auto& e : r.stats.errors) spdlog::warn("corpus line {}: {}", e.line_no, e.reason);
  return std::move(r.corpus);
}

std::unique_ptr<EmbeddingProvider> make_embedder(const RunConfig& c) {
  if (c.provider == EmbeddingBackend::Remote) return std::make_unique<RemoteEmbedder>(RemoteEmbeddingConfig::from_env());
  return std::make_unique<LocalHashEmbedder>();
}

std::unique_ptr<LlmClient> make_llm(const RunConfig& c) {
  c.validate();
  if (!c.cassette) return std::make_unique<HttpChatClient>(ChatServiceConfig::from_env());
  std::shared_ptr<LlmClient> inner;
  if (c.cassette_mode == CassetteMode::Record) inner = std::make_shared<HttpChatClient>(ChatServiceConfig::from_env());
  return std::make_unique<CassetteClient>(*c.cassette, c.cassette_mode, inner);
}

ControlFlowGraph program_cfg(const std::string& code, const AnalyzerConfig& analyzer) {
  const PreprocessReport pre = preprocess_source(code);
  return extract_cfg(pre.output_code, analyzer.function, analyzer);
}

std::string failure_text(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    return std::string(to_string(err->code())) + ": " + err->detail();
  }
  return e.what();
}

std::string failure_code(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) return std::string(to_string(err->code()));
  return "Internal";
}

}  // namespace

CorpusStats cmd_ingest(const RunConfig& config) {
  IngestResult r = ingest_pairs(config.corpus);
  for (const auto& e : r.stats.errors) spdlog::warn("corpus line {}: {}", e.line_no, e.reason);
  const CorpusSplit split = split_corpus(r.corpus.records(), config.db_count, config.seed);

  json db = json::array();
  json test = json::array();
  for (const auto& p : split.database_set) db.push_back(p.id);
  for (const auto& p : split.test_set) test.push_back(p.id);
  const json manifest = {{"corpus", config.corpus.string()},
                         {"seed", config.seed},
                         {"db_count", config.db_count},
                         {"database_ids", db},
                         {"test_ids", test}};
  text::write_file(manifest_path(config), manifest.dump(2) + "\n");
  text::write_file(config.out / "corpus_stats.json", to_json(r.stats).dump(2) + "\n");
  spdlog::info("ingested {} records ({} database, {} test, {} rejected lines)", r.stats.count,
               split.database_set.size(), split.test_set.size(), r.stats.errors.size());
  return r.stats;
}

std::string journal_key(const CodePair& pair) {
  std::string material = pair.id;
  material += '\0';
  material += pair.original_code;
  material += '\0';
  material += pair.optimized_code;
  return text::sha256_hex(material);
}

IndexSummary cmd_index(const RunConfig& config) {
  const Manifest manifest = read_manifest(config);
  const Corpus corpus = load_corpus(config);
  const fs::path dir = config.index_path();
  const fs::path journal_path = dir / "journal.jsonl";

  // Last journal line per record wins.
  std::map<std::string, json> journal;
  if (fs::exists(journal_path)) {
    const std::string lines = text::read_file(journal_path);
    for (std::string_view line : text::split_lines(lines)) {
      if (text::trim(line).empty()) continue;
      json j = json::parse(line, nullptr, false);
      if (!j.is_object() || !j.contains("id") || !j["id"].is_string()) continue;
      std::string id = j["id"].get<std::string>();
      journal[std::move(id)] = std::move(j);
    }
  }
  fs::create_directories(dir);
  std::ofstream journal_out(journal_path, std::ios::app);
  if (!journal_out) throw Error(ErrorCode::Io, "cannot open " + journal_path.string());

  std::unique_ptr<LlmClient> llm;
  IndexSummary summary;
  std::vector<IndexRecord> records;
  for (const std::string& id : manifest.database_ids) {
    if (!corpus.contains(id)) {
      spdlog::warn("index: record {} not in corpus, skipped", id);
      ++summary.skipped;
      continue;
    }
    const CodePair& pair = corpus.load_record(id);
    const std::string key = journal_key(pair);
    if (auto it = journal.find(id); it != journal.end() && it->second.value("status", "") == "ok" &&
                                    it->second.value("key", "") == key) {
      records.push_back({&pair, it->second.at("cfg_text").get<std::string>(), it->second.at("diff_text").get<std::string>(),
                         it->second.at("rationale").get<std::string>()});
      ++summary.reused;
      continue;
    }
    json entry = {{"id", id}, {"key", key}};
    try {
      const ControlFlowGraph g_o = program_cfg(pair.original_code, config.analyzer);
      const ControlFlowGraph g_p = program_cfg(pair.optimized_code, config.analyzer);
      const CfgDiff diff = compute_diff(g_o, g_p);
      const std::string diff_text = render_diff(diff, g_o, g_p);
      std::string rationale;
      if (diff.empty()) {
        rationale = std::string(kNoStructuralChanges);
      } else {
        if (!llm) llm = make_llm(config);
        rationale = generate_rationale(diff, diff_text, pair, *llm, config.generation);
      }
      records.push_back({&pair, serialize_cfg(g_o), diff_text, rationale});
      entry.update({{"status", "ok"}, {"cfg_text", records.back().cfg_text}, {"diff_text", diff_text}, {"rationale", rationale}});
    } catch (const std::exception& e) {
      spdlog::warn("index: record {} skipped: {}", id, failure_text(e));
      entry.update({{"status", "failed"}, {"error", failure_text(e)}});
      ++summary.skipped;
    }
    journal_out << entry.dump() << '\n' << std::flush;
  }
  journal_out.close();

  if (records.empty()) throw Error(ErrorCode::EmptyIndex, "no database record could be indexed");
  const auto embedder = make_embedder(config);
  build_index(records, *embedder, SourceKind::CfgSerialization).save(dir / "context.jsonl");
  build_index(records, *embedder, SourceKind::RawSource).save(dir / "naive.jsonl");
  summary.indexed = records.size();
  spdlog::info("indexed {} records ({} reused from journal), {} skipped", summary.indexed, summary.reused,
               summary.skipped);
  return summary;
}

OptimizeSummary cmd_optimize(const RunConfig& config) {
  const Manifest manifest = read_manifest(config);
  const Corpus corpus = load_corpus(config);
  const auto embedder = make_embedder(config);
  const auto llm = make_llm(config);

  std::optional<VectorIndex> context_index;
  std::optional<VectorIndex> naive_index;
  for (PromptMode mode : config.modes) {
    if (mode == PromptMode::Context && !context_index) context_index = VectorIndex::load(config.index_path() / "context.jsonl");
    if (mode == PromptMode::Naive && !naive_index) naive_index = VectorIndex::load(config.index_path() / "naive.jsonl");
  }

  OptimizeSummary summary;
  json failures = json::array();
  for (const std::string& id : manifest.test_ids) {
    for (PromptMode mode : config.modes) {
      const std::string mode_name(to_string(mode));
      const fs::path patch_path = config.out / "patches" / mode_name / (id + ".cpp");
      try {
        const CodePair& target = corpus.load_record(id);
        Prompt prompt;
        if (mode == PromptMode::ZeroShot) {
          prompt = build_prompt(mode, target, std::nullopt, std::nullopt, nullptr);
        } else if (mode == PromptMode::Naive) {
          const RetrievalHit hit = retrieve_top1(*naive_index, embed_text(target.original_code, *embedder));
          prompt = build_prompt(mode, target, std::nullopt, std::nullopt, &corpus.load_record(hit.entry->record_id));
        } else {
          const ControlFlowGraph g = program_cfg(target.original_code, config.analyzer);
          const RetrievalHit hit = retrieve_top1(*context_index, embed_text(serialize_cfg(g), *embedder));
          prompt = build_prompt(mode, target, hit.entry->diff_text, hit.entry->rationale,
                                &corpus.load_record(hit.entry->record_id));
        }
        text::write_file(config.out / "prompts" / mode_name / (id + ".txt"),
                         "## System\n" + prompt.system_text + "\n\n" + prompt.user_text);
        const GeneratedPatch patch = generate_patch(prompt, *llm, config.generation);
        text::write_file(patch_path, patch.code);
        ++summary.generated;
      } catch (const std::exception& e) {
        spdlog::warn("optimize: {} [{}] failed: {}", id, mode_name, failure_text(e));
        std::error_code ec;
        fs::remove(patch_path, ec);
        failures.push_back({{"id", id}, {"mode", mode_name}, {"code", failure_code(e)}, {"detail", failure_text(e)}});
        ++summary.failed;
      }
    }
  }
  text::write_file(config.out / "patches" / "failures.json",
                   json{{"generated", summary.generated}, {"failed", summary.failed}, {"failures", failures}}.dump(2) + "\n");
  spdlog::info("generated {} patches, {} failures", summary.generated, summary.failed);
  return summary;
}

EvaluationReport cmd_eval(const RunConfig& config) {
  const Manifest manifest = read_manifest(config);
  const Corpus corpus = load_corpus(config);

  std::vector<EvaluationResult> results;
  for (const std::string& id : manifest.test_ids) {
    if (!corpus.contains(id)) continue;
    const CodePair& target = corpus.load_record(id);
    if (target.testcases.empty()) {
      spdlog::warn("eval: {} has no testcases, skipped", id);
      continue;
    }
    for (PromptMode mode : config.modes) {
      const fs::path patch_path = config.out / "patches" / std::string(to_string(mode)) / (id + ".cpp");
      if (!fs::exists(patch_path)) continue;
      const std::string code = text::read_file(patch_path);
      EvaluationResult r;
      r.target_id = id;
      r.mode = mode;
      r.labels = target.labels;
      try {
        r.lexical = lexical_scores(code, target.optimized_code);
      } catch (const Error& e) {
        spdlog::warn("eval: {} [{}] lexical scores unavailable: {}", id, to_string(mode), e.what());
      }
      r.outcome = evaluate_program(code, target.testcases, config.toolchain, config.measure);
      if (r.outcome.status != RunStatus::Ok) {
        spdlog::info("eval: {} [{}] {}: {}", id, to_string(mode), to_string(r.outcome.status),
                     r.outcome.detail.substr(0, 200));
      }
      results.push_back(std::move(r));
    }
  }
  if (results.empty()) throw Error(ErrorCode::Usage, "no patches to evaluate under " + (config.out / "patches").string());

  json modes = json::array();
  for (PromptMode m : config.modes) modes.push_back(to_string(m));
  const json metadata = {
      {"corpus", config.corpus.string()},
      {"db_count", config.db_count},
      {"seed", config.seed},
      {"modes", modes},
      {"reps", config.measure.reps},
      {"warmup", config.measure.warmup},
      {"timeout", config.measure.timeout_s},
      {"compiler", config.toolchain.compiler},
      {"compiler_flags", config.toolchain.flags},
      {"analyzer", config.analyzer.binary},
      {"provider", config.provider == EmbeddingBackend::Local ? "local" : "remote"},
      {"generation_model", config.generation.model},
      {"temperature", config.generation.temperature},
      {"cassette", config.cassette ? json(config.cassette->string()) : json(nullptr)},
  };
  EvaluationReport report = aggregate_report(std::move(results), metadata);
  text::write_file(config.out / "report.json", to_json(report).dump(2) + "\n");
  text::write_file(config.out / "report.txt", render_text(report));
  return report;
}

}  // namespace autopatch
