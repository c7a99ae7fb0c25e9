#include "autopatch/corpus.hpp"

#include <random>

#include "autopatch/text.hpp"

namespace autopatch {

using nlohmann::json;

std::string_view to_string(OptimizationType type) noexcept {
  switch (type) {
    case OptimizationType::CodeRefactoring: return "code_refactoring";
    case OptimizationType::MemoryOptimization: return "memory_optimization";
    case OptimizationType::PerformanceEnhancement: return "performance_enhancement";
    case OptimizationType::AlgorithmicSimplification: return "algorithmic_simplification";
    case OptimizationType::LoopOptimization: return "loop_optimization";
  }
  return "unknown";
}

std::optional<OptimizationType> parse_optimization_type(std::string_view name) noexcept {
  for (OptimizationType t : kAllOptimizationTypes) {
    if (to_string(t) == name) return t;
  }
  return std::nullopt;
}

bool outputs_match(std::string_view actual, std::string_view expected) {
  return text::normalize_output(actual) == text::normalize_output(expected);
}

json to_json(const CodePair& pair) {
  json labels = json::array();
  for (OptimizationType t : pair.labels) labels.push_back(std::string(to_string(t)));
  json testcases = json::array();
  for (const TestCase& tc : pair.testcases) {
    testcases.push_back({{"input", tc.input}, {"expected_output", tc.expected_output}});
  }
  json j = {
      {"id", pair.id},
      {"problem_id", pair.problem_id},
      {"original_code", pair.original_code},
      {"optimized_code", pair.optimized_code},
      {"labels", std::move(labels)},
      {"testcases", std::move(testcases)},
  };
  if (pair.rationale) j["rationale"] = *pair.rationale;
  return j;
}

namespace {

[[noreturn]] void malformed(const std::string& reason) { throw Error(ErrorCode::MalformedRecord, reason); }

std::string required_string(const json& j, const char* key, bool nonempty) {
  const auto it = j.find(key);
  if (it == j.end()) malformed(std::string("missing `") + key + "`");
  if (!it->is_string()) malformed(std::string("`") + key + "` is not a string");
  std::string value = it->get<std::string>();
  if (nonempty && value.empty()) malformed(std::string("`") + key + "` is empty");
  if (!text::is_valid_utf8(value)) malformed(std::string("`") + key + "` is not valid UTF-8");
  return value;
}

}  // namespace

CodePair code_pair_from_json(const json& j) {
  if (!j.is_object()) malformed("record is not a JSON object");
  CodePair pair;
  pair.id = required_string(j, "id", true);
  pair.problem_id = required_string(j, "problem_id", false);
  pair.original_code = required_string(j, "original_code", true);
  pair.optimized_code = required_string(j, "optimized_code", true);

  const auto labels = j.find("labels");
  if (labels == j.end()) malformed("missing `labels`");
  if (!labels->is_array()) malformed("`labels` is not an array");
  for (const json& l : *labels) {
    if (!l.is_string()) malformed("label is not a string");
    const auto type = parse_optimization_type(l.get<std::string>());
    if (!type) malformed("unknown label `" + l.get<std::string>() + "`");
    pair.labels.insert(*type);
  }

  const auto tcs = j.find("testcases");
  if (tcs == j.end()) malformed("missing `testcases`");
  if (!tcs->is_array()) malformed("`testcases` is not an array");
  for (const json& tc : *tcs) {
    if (!tc.is_object()) malformed("testcase is not an object");
    TestCase t;
    t.input = required_string(tc, "input", false);
    t.expected_output = required_string(tc, "expected_output", false);
    pair.testcases.push_back(std::move(t));
  }

  if (const auto r = j.find("rationale"); r != j.end() && !r->is_null()) {
    if (!r->is_string()) malformed("`rationale` is not a string");
    pair.rationale = r->get<std::string>();
  }
  return pair;
}

std::size_t CorpusStats::total_labels() const {
  std::size_t total = 0;
  for (const auto& [type, n] : label_histogram) total += n;
  return total;
}

json to_json(const CorpusStats& stats) {
  json hist = json::object();
  for (OptimizationType t : kAllOptimizationTypes) {
    const auto it = stats.label_histogram.find(t);
    hist[std::string(to_string(t))] = it == stats.label_histogram.end() ? 0 : it->second;
  }
  json errors = json::array();
  for (const RecordError& e : stats.errors) {
    errors.push_back({{"line", e.line_no}, {"error", std::string(to_string(e.code))}, {"reason", e.reason}});
  }
  return {{"count", stats.count}, {"label_histogram", std::move(hist)}, {"errors", std::move(errors)}};
}

Corpus::Corpus(std::vector<CodePair> records) : records_(std::move(records)) {
  by_id_.reserve(records_.size());
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (!by_id_.emplace(records_[i].id, i).second) throw Error(ErrorCode::DuplicateId, records_[i].id);
  }
}

bool Corpus::contains(std::string_view id) const { return by_id_.count(std::string(id)) != 0; }

const CodePair& Corpus::load_record(std::string_view id) const {
  const auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) throw Error(ErrorCode::UnknownId, std::string(id));
  return records_[it->second];
}

std::optional<std::string_view> Corpus::raw_record(std::string_view id) const {
  const auto it = by_id_.find(std::string(id));
  if (it == by_id_.end() || it->second >= raw_lines_.size()) return std::nullopt;
  return raw_lines_[it->second];
}

struct CorpusIngest {
  static IngestResult run(std::string_view jsonl) {
    IngestResult result;
    Corpus& corpus = result.corpus;
    std::size_t line_no = 0;
    for (std::string_view line : text::split_lines(jsonl)) {
      ++line_no;
      if (text::trim(line).empty()) continue;
      try {
        const json j = json::parse(line);
        CodePair pair = code_pair_from_json(j);
        if (corpus.by_id_.count(pair.id) != 0) {
          result.stats.errors.push_back({line_no, ErrorCode::DuplicateId, pair.id});
          continue;
        }
        for (OptimizationType t : pair.labels) ++result.stats.label_histogram[t];
        corpus.by_id_.emplace(pair.id, corpus.records_.size());
        corpus.records_.push_back(std::move(pair));
        corpus.raw_lines_.emplace_back(line);
      } catch (const json::exception& e) {
        result.stats.errors.push_back({line_no, ErrorCode::MalformedRecord, std::string("invalid JSON: ") + e.what()});
      } catch (const Error& e) {
        result.stats.errors.push_back({line_no, e.code(), e.detail()});
      }
    }
    result.stats.count = corpus.records_.size();
    return result;
  }
};

IngestResult ingest_pairs_from_text(std::string_view jsonl) { return CorpusIngest::run(jsonl); }

IngestResult ingest_pairs(const std::filesystem::path& path) { return CorpusIngest::run(text::read_file(path)); }

CorpusSplit split_corpus(const std::vector<CodePair>& pairs, std::size_t database_count, std::uint64_t seed) {
  if (database_count > pairs.size()) {
    throw Error(ErrorCode::CountOutOfRange,
                "database_count " + std::to_string(database_count) + " exceeds " + std::to_string(pairs.size()));
  }
  std::vector<std::size_t> order(pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  // std::shuffle and uniform_int_distribution differ between standard
  // libraries; mt19937_64 output itself is fully specified.
  std::mt19937_64 rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    const std::uint64_t bound = i;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t r = rng();
    while (r >= limit) r = rng();
    std::swap(order[i - 1], order[r % bound]);
  }
  CorpusSplit split;
  split.database_set.reserve(database_count);
  split.test_set.reserve(pairs.size() - database_count);
  for (std::size_t k = 0; k < order.size(); ++k) {
    (k < database_count ? split.database_set : split.test_set).push_back(pairs[order[k]]);
  }
  return split;
}

}  // namespace autopatch
