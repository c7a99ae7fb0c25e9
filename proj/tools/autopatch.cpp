#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "autopatch/error.hpp"
#include "autopatch/pipeline.hpp"
#include "autopatch/text.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitGuard = 3;

std::vector<autopatch::PromptMode> parse_modes(const std::string& list) {
  std::vector<autopatch::PromptMode> modes;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = std::min(list.find(',', start), list.size());
    const auto name = autopatch::text::trim(std::string_view(list).substr(start, comma - start));
    if (!name.empty()) {
      const auto mode = autopatch::parse_prompt_mode(name);
      if (!mode) throw autopatch::Error(autopatch::ErrorCode::Usage, "unknown mode `" + std::string(name) + "`");
      if (std::find(modes.begin(), modes.end(), *mode) == modes.end()) modes.push_back(*mode);
    }
    start = comma + 1;
  }
  if (modes.empty()) throw autopatch::Error(autopatch::ErrorCode::Usage, "no mode given");
  return modes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Retrieval-augmented patch generation with CFG-diff context"};
  app.require_subcommand(1);

  autopatch::RunConfig config;
  std::string corpus;
  std::string out = config.out.string();
  std::string index;
  std::string modes = "zero-shot,naive,context";
  std::string provider = "local";
  std::string cassette;
  bool record = false;
  bool replay = false;
  bool verbose = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--corpus", corpus, "Corpus JSONL file")->required();
    cmd->add_option("--out", out, "Output directory")->capture_default_str();
    cmd->add_flag("-v,--verbose", verbose, "Debug logging");
  };
  auto add_services = [&](CLI::App* cmd) {
    cmd->add_option("--index", index, "Index directory (default <out>/index)");
    cmd->add_option("--provider", provider, "Embedding provider")
        ->check(CLI::IsMember({"local", "remote"}))
        ->capture_default_str();
    cmd->add_option("--cassette", cassette, "LLM request/response cassette");
    auto* rec = cmd->add_flag("--record", record, "Call the live service and record into the cassette");
    auto* rep = cmd->add_flag("--replay", replay, "Answer from the cassette only");
    rec->excludes(rep);
  };

  auto* ingest = app.add_subcommand("ingest", "Validate the corpus and split it");
  add_common(ingest);
  ingest->add_option("--db-count", config.db_count, "Database split size")->capture_default_str();
  ingest->add_option("--seed", config.seed, "Split seed")->capture_default_str();

  auto* index_cmd = app.add_subcommand("index", "Build the retrieval indexes from the database split");
  add_common(index_cmd);
  add_services(index_cmd);

  auto* optimize = app.add_subcommand("optimize", "Generate patches for the test split");
  add_common(optimize);
  add_services(optimize);
  optimize->add_option("--mode", modes, "Comma-separated modes: zero-shot,naive,context")->capture_default_str();

  auto* eval = app.add_subcommand("eval", "Score, compile and time the patches");
  add_common(eval);
  eval->add_option("--mode", modes, "Comma-separated modes")->capture_default_str();
  eval->add_option("--reps", config.measure.reps, "Timed runs per testcase")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  eval->add_option("--timeout", config.measure.timeout_s, "Per-run timeout in seconds")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  spdlog::set_default_logger(spdlog::stderr_color_mt("autopatch"));
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

  try {
    config.corpus = corpus;
    config.out = out;
    if (!index.empty()) config.index_dir = index;
    config.modes = parse_modes(modes);
    config.provider = provider == "remote" ? autopatch::EmbeddingBackend::Remote : autopatch::EmbeddingBackend::Local;
    if ((record || replay) && cassette.empty()) {
      throw autopatch::Error(autopatch::ErrorCode::Usage, "--record/--replay need --cassette");
    }
    if (!cassette.empty()) {
      config.cassette = cassette;
      config.cassette_mode = record ? autopatch::CassetteMode::Record : autopatch::CassetteMode::Replay;
    }
    config.validate();

    if (ingest->parsed()) {
      const auto stats = autopatch::cmd_ingest(config);
      std::cout << autopatch::to_json(stats).dump(2) << '\n';
    } else if (index_cmd->parsed()) {
      const auto s = autopatch::cmd_index(config);
      std::cout << "indexed " << s.indexed << ", reused " << s.reused << ", skipped " << s.skipped << '\n';
    } else if (optimize->parsed()) {
      const auto s = autopatch::cmd_optimize(config);
      std::cout << "generated " << s.generated << ", failed " << s.failed << '\n';
    } else if (eval->parsed()) {
      const auto report = autopatch::cmd_eval(config);
      std::cout << autopatch::render_text(report);
      if (report.timing_guard) {
        std::cerr << "error: " << autopatch::to_string(*report.timing_guard)
                  << ": no program executed correctly in every mode\n";
        return kExitGuard;
      }
    }
  } catch (const autopatch::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == autopatch::ErrorCode::NoCommonExecutableSet ? kExitGuard : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}
