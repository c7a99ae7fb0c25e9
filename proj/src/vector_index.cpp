#include "autopatch/vector_index.hpp"

#include <omp.h>

#include <atomic>
#include <cmath>
#include <cstring>
#include <exception>
#include <fstream>
#include <mutex>
#include <optional>
#include <thread>

#include <json.hpp>

#include "autopatch/error.hpp"
#include "autopatch/text.hpp"

namespace autopatch {

using nlohmann::json;

std::string_view to_string(SourceKind kind) noexcept {
  return kind == SourceKind::CfgSerialization ? "cfg_serialization" : "raw_source";
}

SourceKind parse_source_kind(std::string_view name) {
  if (name == "cfg_serialization") return SourceKind::CfgSerialization;
  if (name == "raw_source") return SourceKind::RawSource;
  throw Error(ErrorCode::MalformedRecord, "unknown source_kind `" + std::string(name) + "`");
}

namespace {

double row_norm(std::span<const float> v) {
  double s = 0.0;
  for (float x : v) s += static_cast<double>(x) * x;
  return std::sqrt(s);
}

double row_dot(std::span<const float> a, std::span<const float> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<double>(a[i]) * b[i];
  return s;
}

}  // namespace

VectorIndex::VectorIndex(std::size_t dim, SourceKind source_kind) : dim_(dim), source_kind_(source_kind) {
  if (dim_ == 0) throw Error(ErrorCode::DimMismatch, "index dim must be positive");
}

void VectorIndex::add(IndexEntry entry) {
  if (entry.vector.dim() != dim_) {
    throw Error(ErrorCode::DimMismatch,
                entry.record_id + ": dim " + std::to_string(entry.vector.dim()) + " != " + std::to_string(dim_));
  }
  if (ids_.count(entry.record_id) != 0) throw Error(ErrorCode::DuplicateId, entry.record_id);
  const double n = row_norm(entry.vector.values);
  if (n == 0.0) throw Error(ErrorCode::ZeroVector, entry.record_id);
  entry.source_kind = source_kind_;
  ids_.insert(entry.record_id);
  matrix_.insert(matrix_.end(), entry.vector.values.begin(), entry.vector.values.end());
  norms_.push_back(n);
  entries_.push_back(std::move(entry));
}

std::filesystem::path VectorIndex::vector_blob_path(const std::filesystem::path& path) {
  std::filesystem::path p = path;
  p += ".vec";
  return p;
}

void VectorIndex::save(const std::filesystem::path& path) const {
  std::string meta = json{{"version", kFormatVersion},
                          {"dim", dim_},
                          {"source_kind", std::string(to_string(source_kind_))},
                          {"count", entries_.size()}}
                         .dump() +
                     "\n";
  for (const IndexEntry& e : entries_) {
    meta += json{{"record_id", e.record_id}, {"diff_text", e.diff_text}, {"rationale", e.rationale}}.dump() + "\n";
  }
  std::string blob;
  blob.reserve(matrix_.size() * 4);
  for (float f : matrix_) {
    std::uint32_t bits = 0;
    std::memcpy(&bits, &f, sizeof bits);
    for (int b = 0; b < 4; ++b) blob.push_back(static_cast<char>((bits >> (8 * b)) & 0xFF));
  }
  text::write_file(vector_blob_path(path), blob);
  text::write_file(path, meta);
}

VectorIndex VectorIndex::load(const std::filesystem::path& path) {
  const std::string meta = text::read_file(path);
  const std::string blob = text::read_file(vector_blob_path(path));
  const auto lines = text::split_lines(meta);
  if (lines.empty()) throw Error(ErrorCode::MalformedRecord, path.string() + ": empty index file");
  try {
    const json header = json::parse(lines[0]);
    if (header.at("version").get<int>() != kFormatVersion) {
      throw Error(ErrorCode::MalformedRecord, path.string() + ": unsupported index version");
    }
    const auto dim = header.at("dim").get<std::size_t>();
    const auto count = header.at("count").get<std::size_t>();
    VectorIndex index(dim, parse_source_kind(header.at("source_kind").get<std::string>()));
    if (lines.size() != count + 1) throw Error(ErrorCode::MalformedRecord, path.string() + ": entry count mismatch");
    if (blob.size() != count * dim * 4) throw Error(ErrorCode::MalformedRecord, path.string() + ": vector blob size mismatch");
    for (std::size_t i = 0; i < count; ++i) {
      const json m = json::parse(lines[i + 1]);
      IndexEntry e;
      e.record_id = m.at("record_id").get<std::string>();
      e.diff_text = m.at("diff_text").get<std::string>();
      e.rationale = m.at("rationale").get<std::string>();
      e.vector.values.resize(dim);
      for (std::size_t d = 0; d < dim; ++d) {
        const std::size_t off = (i * dim + d) * 4;
        std::uint32_t bits = 0;
        for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(blob[off + b])) << (8 * b);
        std::memcpy(&e.vector.values[d], &bits, sizeof bits);
      }
      index.add(std::move(e));
    }
    return index;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedRecord, path.string() + ": " + e.what());
  }
}

namespace {

void check_query(const VectorIndex& index, const EmbeddingVector& query, double& query_norm) {
  if (index.empty()) throw Error(ErrorCode::EmptyIndex, "no entries to retrieve from");
  if (query.dim() != index.dim()) {
    throw Error(ErrorCode::DimMismatch, std::to_string(query.dim()) + " vs " + std::to_string(index.dim()));
  }
  query_norm = row_norm(query.values);
  if (query_norm == 0.0) throw Error(ErrorCode::ZeroVector, "query vector is zero");
}

struct Best {
  std::size_t position = 0;
  double score = 0.0;
  bool valid = false;
};

bool better(const VectorIndex& index, std::size_t pos, double score, const Best& best) {
  if (!best.valid || score > best.score) return true;
  return score == best.score && index.entries()[pos].record_id < index.entries()[best.position].record_id;
}

double entry_score(const VectorIndex& index, std::size_t i, std::span<const float> q, double qn) {
  return row_dot(q, index.row(i)) / (qn * index.norm(i));
}

}  // namespace

RetrievalHit retrieve_top1_serial(const VectorIndex& index, const EmbeddingVector& query) {
  double qn = 0.0;
  check_query(index, query, qn);
  Best best;
  for (std::size_t i = 0; i < index.size(); ++i) {
    const double s = entry_score(index, i, query.values, qn);
    if (better(index, i, s, best)) best = {i, s, true};
  }
  return {&index.entries()[best.position], best.position, best.score};
}

RetrievalHit retrieve_top1(const VectorIndex& index, const EmbeddingVector& query) {
  double qn = 0.0;
  check_query(index, query, qn);
  const auto n = static_cast<std::ptrdiff_t>(index.size());
  const std::span<const float> q = query.values;
  Best best;
#pragma omp parallel
  {
    Best local;
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto pos = static_cast<std::size_t>(i);
      const double s = entry_score(index, pos, q, qn);
      if (better(index, pos, s, local)) local = {pos, s, true};
    }
#pragma omp critical(autopatch_top1_merge)
    {
      if (local.valid && better(index, local.position, local.score, best)) best = local;
    }
  }
  return {&index.entries()[best.position], best.position, best.score};
}

VectorIndex build_index(const std::vector<IndexRecord>& records, EmbeddingProvider& provider, SourceKind source_kind,
                        std::size_t max_in_flight) {
  if (records.empty()) throw Error(ErrorCode::EmptyIndex, "no records to index");
  {
    std::unordered_set<std::string> seen;
    for (const IndexRecord& r : records) {
      if (!seen.insert(r.pair->id).second) throw Error(ErrorCode::DuplicateId, r.pair->id);
    }
  }
  std::vector<std::optional<EmbeddingVector>> vectors(records.size());
  std::vector<std::exception_ptr> failures(records.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < records.size(); i = next++) {
      const IndexRecord& r = records[i];
      const std::string& input = source_kind == SourceKind::CfgSerialization ? r.cfg_text : r.pair->original_code;
      try {
        vectors[i] = embed_text(input, provider);
      } catch (const Error& e) {
        failures[i] = std::make_exception_ptr(Error(e.code(), "record " + r.pair->id + ": " + e.detail()));
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min(max_in_flight, records.size()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }
  for (const std::exception_ptr& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  VectorIndex index(vectors.front()->dim(), source_kind);
  for (std::size_t i = 0; i < records.size(); ++i) {
    index.add({records[i].pair->id, std::move(*vectors[i]), records[i].diff_text, records[i].rationale, source_kind});
  }
  return index;
}

}  // namespace autopatch
