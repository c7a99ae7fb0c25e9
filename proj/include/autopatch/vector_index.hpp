#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "autopatch/corpus.hpp"
#include "autopatch/embedding.hpp"

namespace autopatch {

enum class SourceKind { CfgSerialization, RawSource };

std::string_view to_string(SourceKind kind) noexcept;
SourceKind parse_source_kind(std::string_view name);

struct IndexEntry {
  std::string record_id;
  EmbeddingVector vector;
  std::string diff_text;
  std::string rationale;
  SourceKind source_kind = SourceKind::CfgSerialization;

  bool operator==(const IndexEntry&) const = default;
};

/// Flat exact-search index. Vectors are also kept row-major in one buffer with
/// precomputed norms for the scan kernels. Immutable once built; concurrent
/// queries are safe.
class VectorIndex {
 public:
  static constexpr int kFormatVersion = 1;

  VectorIndex(std::size_t dim, SourceKind source_kind);

  /// Throws Error(DuplicateId), Error(DimMismatch) or Error(ZeroVector).
  void add(IndexEntry entry);

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] SourceKind source_kind() const noexcept { return source_kind_; }
  [[nodiscard]] int version() const noexcept { return kFormatVersion; }
  [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
  [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }
  [[nodiscard]] const std::vector<IndexEntry>& entries() const noexcept { return entries_; }
  [[nodiscard]] std::span<const float> row(std::size_t i) const noexcept {
    return {matrix_.data() + i * dim_, dim_};
  }
  [[nodiscard]] double norm(std::size_t i) const noexcept { return norms_[i]; }

  /// Writes `path` (header line then one metadata line per entry) and the
  /// sidecar `path + ".vec"` (count x dim little-endian float32).
  void save(const std::filesystem::path& path) const;
  static VectorIndex load(const std::filesystem::path& path);

  static std::filesystem::path vector_blob_path(const std::filesystem::path& path);

 private:
  std::size_t dim_;
  SourceKind source_kind_;
  std::vector<IndexEntry> entries_;
  std::vector<float> matrix_;
  std::vector<double> norms_;
  std::unordered_set<std::string> ids_;
};

struct RetrievalHit {
  const IndexEntry* entry = nullptr;
  std::size_t position = 0;
  double score = 0.0;
};

/// Exhaustive cosine argmax, ties to the lexicographically smallest record
/// id. Entries are scanned in parallel (OpenMP); per-entry scores are computed
/// exactly as the serial kernel computes them, so both agree bit for bit.
/// Throws Error(EmptyIndex), Error(DimMismatch) or Error(ZeroVector).
RetrievalHit retrieve_top1(const VectorIndex& index, const EmbeddingVector& query);

/// Single-threaded reference kernel.
RetrievalHit retrieve_top1_serial(const VectorIndex& index, const EmbeddingVector& query);

struct IndexRecord {
  const CodePair* pair = nullptr;
  std::string cfg_text;  // serialize_cfg of the original program's CFG
  std::string diff_text;
  std::string rationale;
};

/// Embeds every record (CFG serialization or raw original source, by kind)
/// with up to `max_in_flight` concurrent provider calls, committing entries in
/// record order. Provider errors are rethrown with the record id prepended.
VectorIndex build_index(const std::vector<IndexRecord>& records, EmbeddingProvider& provider, SourceKind source_kind,
                        std::size_t max_in_flight = 4);

}  // namespace autopatch
