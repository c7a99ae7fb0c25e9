#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace autopatch {

using BlockId = int;
using Edge = std::pair<BlockId, BlockId>;

struct BasicBlock {
  BlockId id = 0;
  /// `case 1:`, `default:` or a goto label heading the block.
  std::optional<std::string> label;
  /// Whitespace-collapsed statement text with the dump's `N:` prefix removed.
  std::vector<std::string> statements;
  std::optional<std::string> terminator;
  /// Successor ids in dump order (branch polarity preserved); NULL entries dropped.
  std::vector<BlockId> successors;

  bool operator==(const BasicBlock&) const = default;
};

/// One function's CFG. Blocks are kept in ascending id order.
struct ControlFlowGraph {
  std::string function;  // dump header line, e.g. "int main()"; may be empty
  std::vector<BasicBlock> blocks;
  BlockId entry_id = 0;
  BlockId exit_id = 0;
  std::set<Edge> edges;

  bool operator==(const ControlFlowGraph&) const = default;

  [[nodiscard]] const BasicBlock* find(BlockId id) const noexcept;
  [[nodiscard]] std::size_t statement_count() const noexcept;
  [[nodiscard]] std::vector<BlockId> predecessors(BlockId id) const;
};

/// Checks the structural invariants: unique ids, entry/exit exist, edge
/// endpoints exist, entry has no predecessors, exit has no successors, and
/// `edges` agrees with the per-block successor lists. Returns the first
/// violation, if any.
std::optional<std::string> validate(const ControlFlowGraph& cfg);

/// Rebuilds `edges` from the per-block successor lists and sorts blocks.
void finalize(ControlFlowGraph& cfg);

/// Parses one function's CFG from the analyzer's textual dump (`[Bn]` block
/// headers, numbered statements, `T:` terminators, `Preds`/`Succs` lines).
/// An optional function header line may precede the first block. Lines the
/// parser does not recognize inside a block's statement area continue the
/// previous statement, or become an opaque statement when there is none.
/// Throws Error(ParseError) carrying the 1-based line number.
ControlFlowGraph parse_cfg_dump(std::string_view dump);

struct FunctionDump {
  std::string header;  // e.g. "int solve(int n)"
  std::string name;    // e.g. "solve", "Foo::bar"
  std::string text;    // the header line plus its blocks
};

/// Splits a whole-translation-unit dump into per-function sections. A column-0
/// line starts a new function only when the next non-blank line is an
/// `(ENTRY)` block header; other column-0 lines belong to multi-line statements.
std::vector<FunctionDump> split_function_dumps(std::string_view dump);

/// Extracts the (possibly qualified) function name from a dump header line.
std::string function_name_from_header(std::string_view header);

/// Canonical one-line-per-block text, ascending block id:
///   B<id>: <elem>; <elem> -> succ: <id>,<id>
/// where the elements are the label, the statements and `T: <terminator>`.
/// This is the text that context-mode embeddings are computed from.
std::string serialize_cfg(const ControlFlowGraph& cfg);

/// Re-emits the graph in the analyzer's dump syntax (entry block first, exit
/// block last), so that parse_cfg_dump(to_dump_text(g)) == g.
std::string to_dump_text(const ControlFlowGraph& cfg);

}  // namespace autopatch
