#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "autopatch/cfg.hpp"

namespace autopatch {

/// Correspondence between the blocks of an original and an optimized CFG.
struct BlockMatching {
  std::vector<std::pair<BlockId, BlockId>> pairs;  // (original id, optimized id), ascending by original id
  std::set<BlockId> unmatched_o;
  std::set<BlockId> unmatched_p;
};

inline constexpr double kMatchSimilarityThreshold = 0.5;

/// Block content with intra-dump operand references (`[B12.3]`) abstracted to
/// `[B.3]`, so renumbered but otherwise identical blocks compare equal. The
/// label comes first and the terminator last (`T: ...`).
std::vector<std::string> block_content_key(const BasicBlock& block);

/// Jaccard similarity of the token sets of two blocks' content keys; two
/// empty blocks have similarity 1.
double block_similarity(const BasicBlock& a, const BasicBlock& b);

/// Two passes, both restricted to blocks of the same role (entry, exit, body):
///  1. exact content-key matches, closest ids first, then lowest original id;
///  2. among leftovers, greedy best-first on block_similarity, accepting
///     pairs at or above kMatchSimilarityThreshold.
BlockMatching match_blocks(const ControlFlowGraph& g_o, const ControlFlowGraph& g_p);

struct StatementEdit {
  enum class Kind { Insert, Delete, Replace };
  Kind kind;
  std::optional<std::size_t> o_index;  // position in the original block content
  std::optional<std::size_t> p_index;  // position in the optimized block content
  std::string o_text;
  std::string p_text;

  bool operator==(const StatementEdit&) const = default;
};

struct ContentChange {
  BlockId o_id;
  BlockId p_id;
  std::vector<StatementEdit> edits;

  bool operator==(const ContentChange&) const = default;
};

/// An edge of one graph. Added edges use optimized-graph ids, removed edges
/// original-graph ids; the flags mark endpoints without a counterpart.
struct DiffEdge {
  BlockId from;
  BlockId to;
  bool from_unmatched = false;
  bool to_unmatched = false;

  auto operator<=>(const DiffEdge&) const = default;
};

struct StructuralDelta {
  std::set<BlockId> added_blocks;    // optimized ids
  std::set<BlockId> removed_blocks;  // original ids
  bool operator==(const StructuralDelta&) const = default;
};

struct FlowDelta {
  std::vector<DiffEdge> added_edges;
  std::vector<DiffEdge> removed_edges;
  bool operator==(const FlowDelta&) const = default;
};

struct CfgDiff {
  StructuralDelta delta_s;
  FlowDelta delta_f;
  std::vector<ContentChange> delta_c;
  BlockMatching matching;

  [[nodiscard]] bool empty() const noexcept {
    return delta_s.added_blocks.empty() && delta_s.removed_blocks.empty() && delta_f.added_edges.empty() &&
           delta_f.removed_edges.empty() && delta_c.empty();
  }
};

/// Statement-level edit script (unit-cost insert/delete/replace) between two
/// content sequences, compared by key and reported with display text.
std::vector<StatementEdit> statement_edit_script(const std::vector<std::string>& o_keys,
                                                 const std::vector<std::string>& o_text,
                                                 const std::vector<std::string>& p_keys,
                                                 const std::vector<std::string>& p_text);

/// The optimized graph minus the original one: unmatched blocks, edges not
/// preserved under the matching, and edit scripts for matched blocks whose
/// content differs.
CfgDiff compute_diff(const ControlFlowGraph& g_o, const ControlFlowGraph& g_p);

/// Prompt/index text with `ΔS`, `ΔF` and `ΔC` sections, one entry per line;
/// an empty section renders as `ΔS: none`.
std::string render_diff(const CfgDiff& diff, const ControlFlowGraph& g_o, const ControlFlowGraph& g_p);

nlohmann::json to_json(const CfgDiff& diff);

}  // namespace autopatch
