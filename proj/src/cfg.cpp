#include "autopatch/cfg.hpp"

#include <algorithm>
#include <charconv>
#include <map>

#include "autopatch/error.hpp"
#include "autopatch/text.hpp"

namespace autopatch {

const BasicBlock* ControlFlowGraph::find(BlockId id) const noexcept {
  const auto it = std::lower_bound(blocks.begin(), blocks.end(), id,
                                   [](const BasicBlock& b, BlockId v) { return b.id < v; });
  if (it == blocks.end() || it->id != id) return nullptr;
  return &*it;
}

std::size_t ControlFlowGraph::statement_count() const noexcept {
  std::size_t n = 0;
  for (const BasicBlock& b : blocks) n += b.statements.size();
  return n;
}

std::vector<BlockId> ControlFlowGraph::predecessors(BlockId id) const {
  std::vector<BlockId> preds;
  for (const auto& [from, to] : edges) {
    if (to == id) preds.push_back(from);
  }
  return preds;
}

void finalize(ControlFlowGraph& cfg) {
  std::sort(cfg.blocks.begin(), cfg.blocks.end(), [](const BasicBlock& a, const BasicBlock& b) { return a.id < b.id; });
  cfg.edges.clear();
  for (const BasicBlock& b : cfg.blocks) {
    for (BlockId s : b.successors) cfg.edges.emplace(b.id, s);
  }
}

std::optional<std::string> validate(const ControlFlowGraph& cfg) {
  for (std::size_t i = 1; i < cfg.blocks.size(); ++i) {
    if (cfg.blocks[i - 1].id >= cfg.blocks[i].id) return "block ids not unique and ascending";
  }
  if (cfg.find(cfg.entry_id) == nullptr) return "entry block B" + std::to_string(cfg.entry_id) + " missing";
  if (cfg.find(cfg.exit_id) == nullptr) return "exit block B" + std::to_string(cfg.exit_id) + " missing";
  std::set<Edge> derived;
  for (const BasicBlock& b : cfg.blocks) {
    for (BlockId s : b.successors) derived.emplace(b.id, s);
  }
  if (derived != cfg.edges) return "edge set disagrees with successor lists";
  for (const auto& [from, to] : cfg.edges) {
    if (cfg.find(from) == nullptr || cfg.find(to) == nullptr) {
      return "edge B" + std::to_string(from) + "->B" + std::to_string(to) + " references a missing block";
    }
    if (to == cfg.entry_id) return "entry block has a predecessor";
    if (from == cfg.exit_id) return "exit block has a successor";
  }
  return std::nullopt;
}

namespace {

[[noreturn]] void parse_error(std::size_t line_no, const std::string& reason) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + reason);
}

std::size_t leading_spaces(std::string_view line) {
  std::size_t n = 0;
  while (n < line.size() && (line[n] == ' ' || line[n] == '\t')) ++n;
  return n;
}

std::optional<int> parse_int(std::string_view s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

enum class BlockTag { None, Entry, Exit };

struct BlockHeader {
  BlockId id;
  BlockTag tag;
};

// Matches ` [B12]`, ` [B3 (ENTRY)]`, ` [B0 (EXIT)]`.
std::optional<BlockHeader> match_block_header(std::string_view line) {
  std::string_view s = text::trim(line);
  if (s.size() < 4 || s.substr(0, 2) != "[B" || s.back() != ']') return std::nullopt;
  s = s.substr(2, s.size() - 3);
  std::size_t digits = 0;
  while (digits < s.size() && s[digits] >= '0' && s[digits] <= '9') ++digits;
  if (digits == 0) return std::nullopt;
  const auto id = parse_int(s.substr(0, digits));
  if (!id) return std::nullopt;
  std::string_view rest = s.substr(digits);
  BlockTag tag = BlockTag::None;
  if (rest == " (ENTRY)") {
    tag = BlockTag::Entry;
  } else if (rest == " (EXIT)") {
    tag = BlockTag::Exit;
  } else if (!rest.empty()) {
    return std::nullopt;
  }
  return BlockHeader{*id, tag};
}

struct BlockList {
  std::size_t declared = 0;
  std::vector<std::string_view> items;
};

// Matches `Preds (2): B3 B4(Unreachable)` after the given keyword.
std::optional<BlockList> match_block_list(std::string_view line, std::string_view keyword) {
  std::string_view s = text::trim(line);
  if (!text::starts_with(s, keyword) || s.size() <= keyword.size() || s[keyword.size()] != ' ') return std::nullopt;
  s.remove_prefix(keyword.size() + 1);
  if (s.empty() || s.front() != '(') return std::nullopt;
  const std::size_t close = s.find(')');
  if (close == std::string_view::npos || close + 1 >= s.size() || s[close + 1] != ':') return std::nullopt;
  const auto declared = parse_int(s.substr(1, close - 1));
  if (!declared || *declared < 0) return std::nullopt;
  BlockList list;
  list.declared = static_cast<std::size_t>(*declared);
  std::string_view rest = s.substr(close + 2);
  while (!rest.empty()) {
    rest = text::trim(rest);
    if (rest.empty()) break;
    const std::size_t sp = rest.find(' ');
    list.items.push_back(rest.substr(0, sp));
    if (sp == std::string_view::npos) break;
    rest.remove_prefix(sp + 1);
  }
  return list;
}

// `B12`, `B12(Unreachable)` -> 12; `NULL` -> nullopt with ok = true.
std::optional<BlockId> parse_block_ref(std::string_view item, bool& ok) {
  ok = true;
  if (item == "NULL") return std::nullopt;
  if (const std::size_t paren = item.find('('); paren != std::string_view::npos) {
    if (item.substr(paren) != "(Unreachable)") {
      ok = false;
      return std::nullopt;
    }
    item = item.substr(0, paren);
  }
  if (item.size() < 2 || item.front() != 'B') {
    ok = false;
    return std::nullopt;
  }
  const auto id = parse_int(item.substr(1));
  if (!id) ok = false;
  return id;
}

// `  12: payload` with the expected sequence number.
std::optional<std::string_view> match_statement(std::string_view line, std::size_t expected_number) {
  const std::size_t lead = leading_spaces(line);
  if (lead == 0) return std::nullopt;
  std::string_view s = line.substr(lead);
  const std::size_t colon = s.find(':');
  if (colon == std::string_view::npos || colon == 0) return std::nullopt;
  const auto number = parse_int(s.substr(0, colon));
  if (!number || static_cast<std::size_t>(*number) != expected_number) return std::nullopt;
  std::string_view payload = s.substr(colon + 1);
  if (!payload.empty() && payload.front() == ' ') payload.remove_prefix(1);
  return payload;
}

std::optional<std::string_view> match_terminator(std::string_view line) {
  const std::size_t lead = leading_spaces(line);
  if (lead == 0) return std::nullopt;
  std::string_view s = line.substr(lead);
  if (!text::starts_with(s, "T: ")) return std::nullopt;
  return s.substr(3);
}

// Labels are printed with a two-space indent directly under the block header.
std::optional<std::string_view> match_label(std::string_view line) {
  if (leading_spaces(line) != 2) return std::nullopt;
  std::string_view s = text::trim(line);
  if (s.size() < 2 || s.back() != ':') return std::nullopt;
  return s;
}

bool is_function_header_at(const std::vector<std::string_view>& lines, std::size_t i) {
  const std::string_view line = lines[i];
  if (line.empty() || line.front() == ' ' || line.front() == '\t') return false;
  for (std::size_t k = i + 1; k < lines.size(); ++k) {
    if (text::trim(lines[k]).empty()) continue;
    const auto header = match_block_header(lines[k]);
    return header && header->tag == BlockTag::Entry;
  }
  return false;
}

enum class Section { Body, Preds, Succs };

struct PendingBlock {
  BasicBlock block;
  BlockTag tag = BlockTag::None;
  std::size_t header_line = 0;
  Section section = Section::Body;
  bool has_preds = false;
  bool has_succs = false;
  std::vector<std::string> raw_statements;
  std::optional<std::string> raw_terminator;
  bool last_item_is_terminator = false;
  std::vector<std::pair<std::size_t, BlockId>> succ_refs;  // (line, id)
  std::vector<std::pair<std::size_t, BlockId>> pred_refs;
};

}  // namespace

ControlFlowGraph parse_cfg_dump(std::string_view dump) {
  const std::vector<std::string_view> lines = text::split_lines(dump);
  ControlFlowGraph cfg;
  std::vector<PendingBlock> pending;
  bool seen_header = false;

  auto current = [&]() -> PendingBlock* { return pending.empty() ? nullptr : &pending.back(); };

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const std::string_view line = lines[i];
    if (text::trim(line).empty()) continue;

    if (const auto header = match_block_header(line)) {
      PendingBlock pb;
      pb.block.id = header->id;
      pb.tag = header->tag;
      pb.header_line = line_no;
      pending.push_back(std::move(pb));
      continue;
    }

    PendingBlock* blk = current();
    if (blk == nullptr) {
      if (!seen_header && line.front() != ' ' && line.front() != '\t') {
        cfg.function = std::string(text::trim(line));
        seen_header = true;
        continue;
      }
      parse_error(line_no, "unexpected line before first block: " + std::string(text::trim(line)));
    }

    if (const auto preds = match_block_list(line, "Preds")) {
      if (blk->has_preds || blk->section == Section::Succs) parse_error(line_no, "misplaced Preds line");
      if (preds->declared != preds->items.size()) parse_error(line_no, "Preds count does not match listed blocks");
      for (std::string_view item : preds->items) {
        bool ok = true;
        const auto id = parse_block_ref(item, ok);
        if (!ok) parse_error(line_no, "bad block reference `" + std::string(item) + "`");
        if (id) blk->pred_refs.emplace_back(line_no, *id);
      }
      blk->has_preds = true;
      blk->section = Section::Preds;
      continue;
    }
    if (const auto succs = match_block_list(line, "Succs")) {
      if (blk->has_succs) parse_error(line_no, "duplicate Succs line");
      if (succs->declared != succs->items.size()) parse_error(line_no, "Succs count does not match listed blocks");
      for (std::string_view item : succs->items) {
        bool ok = true;
        const auto id = parse_block_ref(item, ok);
        if (!ok) parse_error(line_no, "bad block reference `" + std::string(item) + "`");
        if (id) blk->succ_refs.emplace_back(line_no, *id);
      }
      blk->has_succs = true;
      blk->section = Section::Succs;
      continue;
    }

    if (is_function_header_at(lines, i)) parse_error(line_no, "dump contains more than one function");
    if (blk->section != Section::Body) {
      parse_error(line_no, "unexpected line after predecessor/successor lists: " + std::string(text::trim(line)));
    }

    if (const auto stmt = match_statement(line, blk->raw_statements.size() + 1); stmt && !blk->raw_terminator) {
      blk->raw_statements.emplace_back(*stmt);
      blk->last_item_is_terminator = false;
      continue;
    }
    if (const auto term = match_terminator(line); term && !blk->raw_terminator) {
      blk->raw_terminator = std::string(*term);
      blk->last_item_is_terminator = true;
      continue;
    }
    if (blk->raw_statements.empty() && !blk->raw_terminator && !blk->block.label) {
      if (const auto label = match_label(line)) {
        blk->block.label = std::string(*label);
        continue;
      }
    }
    // Continuation of a multi-line statement or terminator, else opaque payload.
    if (blk->last_item_is_terminator && blk->raw_terminator) {
      *blk->raw_terminator += '\n';
      *blk->raw_terminator += line;
    } else if (!blk->raw_statements.empty()) {
      blk->raw_statements.back() += '\n';
      blk->raw_statements.back() += line;
    } else {
      blk->raw_statements.emplace_back(text::trim(line));
    }
  }

  if (pending.empty()) parse_error(lines.size(), "dump contains no blocks");

  std::map<BlockId, std::size_t> header_lines;
  bool have_entry = false;
  bool have_exit = false;
  for (PendingBlock& pb : pending) {
    if (!header_lines.emplace(pb.block.id, pb.header_line).second) {
      parse_error(pb.header_line, "duplicate block B" + std::to_string(pb.block.id));
    }
    if (pb.tag == BlockTag::Entry) {
      if (have_entry) parse_error(pb.header_line, "second ENTRY block");
      cfg.entry_id = pb.block.id;
      have_entry = true;
    } else if (pb.tag == BlockTag::Exit) {
      if (have_exit) parse_error(pb.header_line, "second EXIT block");
      cfg.exit_id = pb.block.id;
      have_exit = true;
    }
  }
  if (!have_entry) parse_error(lines.size(), "no ENTRY block");
  if (!have_exit) parse_error(lines.size(), "no EXIT block");

  for (PendingBlock& pb : pending) {
    for (const auto& [line_no, id] : pb.succ_refs) {
      if (header_lines.count(id) == 0) parse_error(line_no, "Succs references nonexistent block B" + std::to_string(id));
      pb.block.successors.push_back(id);
    }
    for (const auto& [line_no, id] : pb.pred_refs) {
      if (header_lines.count(id) == 0) parse_error(line_no, "Preds references nonexistent block B" + std::to_string(id));
    }
    for (const std::string& raw : pb.raw_statements) pb.block.statements.push_back(text::collapse_whitespace(raw));
    if (pb.raw_terminator) pb.block.terminator = text::collapse_whitespace(*pb.raw_terminator);
    cfg.blocks.push_back(std::move(pb.block));
  }
  finalize(cfg);
  if (const auto problem = validate(cfg)) parse_error(lines.size(), *problem);
  return cfg;
}

std::string function_name_from_header(std::string_view header) {
  std::string_view s = text::trim(header);
  std::size_t paren = s.find('(');
  // `operator()(...)` keeps its first pair of parentheses.
  if (paren != std::string_view::npos && paren >= 8 && s.substr(paren - 8, 8) == "operator" &&
      s.substr(paren, 2) == "()") {
    paren = s.find('(', paren + 2);
  }
  std::string_view before = s.substr(0, paren);
  before = text::trim_right(before);
  // The name is the last whitespace-separated token, minus pointer/reference sigils.
  const std::size_t sp = before.find_last_of(" \t");
  std::string_view name = sp == std::string_view::npos ? before : before.substr(sp + 1);
  while (!name.empty() && (name.front() == '*' || name.front() == '&')) name.remove_prefix(1);
  return std::string(name);
}

std::vector<FunctionDump> split_function_dumps(std::string_view dump) {
  const std::vector<std::string_view> lines = text::split_lines(dump);
  std::vector<FunctionDump> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (is_function_header_at(lines, i)) {
      FunctionDump fd;
      fd.header = std::string(text::trim(lines[i]));
      fd.name = function_name_from_header(fd.header);
      out.push_back(std::move(fd));
    }
    if (!out.empty()) {
      out.back().text.append(lines[i]);
      out.back().text.push_back('\n');
    }
  }
  return out;
}

std::string serialize_cfg(const ControlFlowGraph& cfg) {
  std::string out;
  for (const BasicBlock& b : cfg.blocks) {
    std::vector<std::string> elems;
    if (b.label) elems.push_back(*b.label);
    elems.insert(elems.end(), b.statements.begin(), b.statements.end());
    if (b.terminator) elems.push_back("T: " + *b.terminator);
    out += "B" + std::to_string(b.id) + ":";
    if (!elems.empty()) out += " " + text::join(elems, "; ");
    out += " -> succ:";
    for (std::size_t i = 0; i < b.successors.size(); ++i) {
      out += (i == 0 ? " " : ",") + std::to_string(b.successors[i]);
    }
    out += '\n';
  }
  return out;
}

namespace {

void append_block_list(std::string& out, std::string_view keyword, const std::vector<BlockId>& ids) {
  if (ids.empty()) return;
  out += "   ";
  out += keyword;
  out += " (" + std::to_string(ids.size()) + "):";
  for (BlockId id : ids) out += " B" + std::to_string(id);
  out += '\n';
}

void append_dump_block(std::string& out, const ControlFlowGraph& cfg, const BasicBlock& b) {
  out += " [B" + std::to_string(b.id);
  if (b.id == cfg.entry_id) out += " (ENTRY)";
  if (b.id == cfg.exit_id) out += " (EXIT)";
  out += "]\n";
  if (b.label) out += "  " + *b.label + "\n";
  for (std::size_t i = 0; i < b.statements.size(); ++i) {
    std::string num = std::to_string(i + 1);
    num.insert(0, num.size() < 4 ? 4 - num.size() : 1, ' ');
    out += num + ": " + b.statements[i] + "\n";
  }
  if (b.terminator) out += "   T: " + *b.terminator + "\n";
  append_block_list(out, "Preds", cfg.predecessors(b.id));
  append_block_list(out, "Succs", b.successors);
  out += '\n';
}

}  // namespace

std::string to_dump_text(const ControlFlowGraph& cfg) {
  std::string out;
  if (!cfg.function.empty()) out += cfg.function + "\n";
  if (const BasicBlock* entry = cfg.find(cfg.entry_id)) append_dump_block(out, cfg, *entry);
  for (const BasicBlock& b : cfg.blocks) {
    if (b.id != cfg.entry_id && b.id != cfg.exit_id) append_dump_block(out, cfg, b);
  }
  if (cfg.exit_id != cfg.entry_id) {
    if (const BasicBlock* exit = cfg.find(cfg.exit_id)) append_dump_block(out, cfg, *exit);
  }
  return out;
}

}  // namespace autopatch
