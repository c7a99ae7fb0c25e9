#include "autopatch/cfg_diff.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <regex>
#include <tuple>

#include "autopatch/lexer.hpp"
#include "autopatch/text.hpp"

namespace autopatch {

namespace {

const std::regex kOperandRef(R"(\[B\d+\.)");

enum class Role { Entry, Exit, Body };

Role role_of(const ControlFlowGraph& g, BlockId id) {
  if (id == g.entry_id) return Role::Entry;
  if (id == g.exit_id) return Role::Exit;
  return Role::Body;
}

std::vector<std::string> block_display(const BasicBlock& block) {
  std::vector<std::string> out;
  if (block.label) out.push_back(*block.label);
  out.insert(out.end(), block.statements.begin(), block.statements.end());
  if (block.terminator) out.push_back("T: " + *block.terminator);
  return out;
}

std::set<std::string> token_set(const std::vector<std::string>& key) {
  std::set<std::string> out;
  for (const std::string& elem : key) {
    for (std::string& t : tokenize(elem)) out.insert(std::move(t));
  }
  return out;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++inter;
      ++ia;
      ++ib;
    }
  }
  const std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

struct BlockInfo {
  BlockId id;
  Role role;
  std::vector<std::string> key;
  std::string joined_key;
  std::set<std::string> tokens;
};

std::vector<BlockInfo> describe(const ControlFlowGraph& g) {
  std::vector<BlockInfo> out;
  out.reserve(g.blocks.size());
  for (const BasicBlock& b : g.blocks) {
    BlockInfo info{b.id, role_of(g, b.id), block_content_key(b), {}, {}};
    info.joined_key = text::join(info.key, "\x1f");
    info.tokens = token_set(info.key);
    out.push_back(std::move(info));
  }
  return out;
}

std::string truncate(std::string_view s, std::size_t max_bytes) {
  if (s.size() <= max_bytes) return std::string(s);
  std::size_t cut = max_bytes;
  while (cut > 0 && (static_cast<unsigned char>(s[cut]) & 0xC0) == 0x80) --cut;
  return std::string(s.substr(0, cut)) + "...";
}

std::string quote_text(std::string_view s) { return "\"" + truncate(s, 100) + "\""; }

}  // namespace

std::vector<std::string> block_content_key(const BasicBlock& block) {
  std::vector<std::string> key;
  for (const std::string& elem : block_display(block)) key.push_back(std::regex_replace(elem, kOperandRef, "[B."));
  return key;
}

double block_similarity(const BasicBlock& a, const BasicBlock& b) {
  return jaccard(token_set(block_content_key(a)), token_set(block_content_key(b)));
}

BlockMatching match_blocks(const ControlFlowGraph& g_o, const ControlFlowGraph& g_p) {
  const std::vector<BlockInfo> os = describe(g_o);
  const std::vector<BlockInfo> ps = describe(g_p);
  std::set<BlockId> used_o;
  std::set<BlockId> used_p;
  BlockMatching m;

  // Pass 1: exact keys.
  {
    std::vector<std::tuple<int, BlockId, BlockId>> candidates;  // (id distance, o, p)
    std::multimap<std::pair<Role, std::string>, BlockId> p_by_key;
    for (const BlockInfo& p : ps) p_by_key.emplace(std::make_pair(p.role, p.joined_key), p.id);
    for (const BlockInfo& o : os) {
      const auto range = p_by_key.equal_range(std::make_pair(o.role, o.joined_key));
      for (auto it = range.first; it != range.second; ++it) {
        candidates.emplace_back(std::abs(o.id - it->second), o.id, it->second);
      }
    }
    std::sort(candidates.begin(), candidates.end());
    for (const auto& [dist, o, p] : candidates) {
      if (used_o.count(o) != 0 || used_p.count(p) != 0) continue;
      used_o.insert(o);
      used_p.insert(p);
      m.pairs.emplace_back(o, p);
    }
  }

  // Pass 2: greedy best-first on similarity among leftovers.
  {
    struct Candidate {
      double sim;
      int dist;
      BlockId o;
      BlockId p;
    };
    std::vector<Candidate> candidates;
    for (const BlockInfo& o : os) {
      if (used_o.count(o.id) != 0) continue;
      for (const BlockInfo& p : ps) {
        if (used_p.count(p.id) != 0 || p.role != o.role) continue;
        const double sim = jaccard(o.tokens, p.tokens);
        if (sim >= kMatchSimilarityThreshold) candidates.push_back({sim, std::abs(o.id - p.id), o.id, p.id});
      }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      if (a.sim != b.sim) return a.sim > b.sim;
      return std::tie(a.dist, a.o, a.p) < std::tie(b.dist, b.o, b.p);
    });
    for (const Candidate& c : candidates) {
      if (used_o.count(c.o) != 0 || used_p.count(c.p) != 0) continue;
      used_o.insert(c.o);
      used_p.insert(c.p);
      m.pairs.emplace_back(c.o, c.p);
    }
  }

  std::sort(m.pairs.begin(), m.pairs.end());
  for (const BlockInfo& o : os) {
    if (used_o.count(o.id) == 0) m.unmatched_o.insert(o.id);
  }
  for (const BlockInfo& p : ps) {
    if (used_p.count(p.id) == 0) m.unmatched_p.insert(p.id);
  }
  return m;
}

std::vector<StatementEdit> statement_edit_script(const std::vector<std::string>& o_keys,
                                                 const std::vector<std::string>& o_text,
                                                 const std::vector<std::string>& p_keys,
                                                 const std::vector<std::string>& p_text) {
  const std::size_t n = o_keys.size();
  const std::size_t k = p_keys.size();
  std::vector<std::vector<std::size_t>> d(n + 1, std::vector<std::size_t>(k + 1, 0));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= k; ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= k; ++j) {
      const std::size_t sub = d[i - 1][j - 1] + (o_keys[i - 1] == p_keys[j - 1] ? 0 : 1);
      d[i][j] = std::min({sub, d[i - 1][j] + 1, d[i][j - 1] + 1});
    }
  }
  std::vector<StatementEdit> ops;
  std::size_t i = n;
  std::size_t j = k;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && o_keys[i - 1] == p_keys[j - 1] && d[i][j] == d[i - 1][j - 1]) {
      --i;
      --j;
    } else if (i > 0 && j > 0 && d[i][j] == d[i - 1][j - 1] + 1) {
      ops.push_back({StatementEdit::Kind::Replace, i - 1, j - 1, o_text[i - 1], p_text[j - 1]});
      --i;
      --j;
    } else if (i > 0 && d[i][j] == d[i - 1][j] + 1) {
      ops.push_back({StatementEdit::Kind::Delete, i - 1, std::nullopt, o_text[i - 1], {}});
      --i;
    } else {
      ops.push_back({StatementEdit::Kind::Insert, std::nullopt, j - 1, {}, p_text[j - 1]});
      --j;
    }
  }
  std::reverse(ops.begin(), ops.end());
  return ops;
}

CfgDiff compute_diff(const ControlFlowGraph& g_o, const ControlFlowGraph& g_p) {
  CfgDiff diff;
  diff.matching = match_blocks(g_o, g_p);
  const BlockMatching& m = diff.matching;
  diff.delta_s.added_blocks = m.unmatched_p;
  diff.delta_s.removed_blocks = m.unmatched_o;

  std::map<BlockId, BlockId> o_to_p;
  std::map<BlockId, BlockId> p_to_o;
  for (const auto& [o, p] : m.pairs) {
    o_to_p.emplace(o, p);
    p_to_o.emplace(p, o);
  }

  for (const auto& [from, to] : g_p.edges) {
    const auto f = p_to_o.find(from);
    const auto t = p_to_o.find(to);
    const bool f_un = f == p_to_o.end();
    const bool t_un = t == p_to_o.end();
    if (f_un || t_un || g_o.edges.count({f->second, t->second}) == 0) {
      diff.delta_f.added_edges.push_back({from, to, f_un, t_un});
    }
  }
  for (const auto& [from, to] : g_o.edges) {
    const auto f = o_to_p.find(from);
    const auto t = o_to_p.find(to);
    const bool f_un = f == o_to_p.end();
    const bool t_un = t == o_to_p.end();
    if (f_un || t_un || g_p.edges.count({f->second, t->second}) == 0) {
      diff.delta_f.removed_edges.push_back({from, to, f_un, t_un});
    }
  }

  for (const auto& [o, p] : m.pairs) {
    const BasicBlock* bo = g_o.find(o);
    const BasicBlock* bp = g_p.find(p);
    const std::vector<std::string> ko = block_content_key(*bo);
    const std::vector<std::string> kp = block_content_key(*bp);
    if (ko == kp) continue;
    diff.delta_c.push_back({o, p, statement_edit_script(ko, block_display(*bo), kp, block_display(*bp))});
  }
  return diff;
}

namespace {

std::string block_preview(const BasicBlock& b) {
  const std::vector<std::string> elems = block_display(b);
  if (elems.empty()) return "(empty)";
  constexpr std::size_t kMaxShown = 6;
  std::vector<std::string> shown;
  for (std::size_t i = 0; i < elems.size() && i < kMaxShown; ++i) shown.push_back(quote_text(elems[i]));
  std::string out = text::join(shown, "; ");
  if (elems.size() > kMaxShown) out += "; (+" + std::to_string(elems.size() - kMaxShown) + " more)";
  return out;
}

std::string edge_text(const DiffEdge& e, std::string_view side, std::string_view flag_word) {
  std::string out = "B" + std::to_string(e.from) + " -> B" + std::to_string(e.to) + " (" + std::string(side);
  if (e.from_unmatched) out += "; B" + std::to_string(e.from) + " " + std::string(flag_word);
  if (e.to_unmatched && !(e.from_unmatched && e.from == e.to)) {
    out += "; B" + std::to_string(e.to) + " " + std::string(flag_word);
  }
  return out + ")";
}

std::string edit_text(const StatementEdit& e) {
  switch (e.kind) {
    case StatementEdit::Kind::Insert: return "insert #" + std::to_string(*e.p_index + 1) + " " + quote_text(e.p_text);
    case StatementEdit::Kind::Delete: return "delete #" + std::to_string(*e.o_index + 1) + " " + quote_text(e.o_text);
    case StatementEdit::Kind::Replace:
      return "replace #" + std::to_string(*e.o_index + 1) + " " + quote_text(e.o_text) + " with " + quote_text(e.p_text);
  }
  return {};
}

void section(std::string& out, std::string_view name, const std::vector<std::string>& entries) {
  out += name;
  if (entries.empty()) {
    out += ": none\n";
    return;
  }
  out += ":\n";
  for (const std::string& e : entries) out += "  " + e + "\n";
}

const char* edit_kind_name(StatementEdit::Kind k) {
  switch (k) {
    case StatementEdit::Kind::Insert: return "insert";
    case StatementEdit::Kind::Delete: return "delete";
    case StatementEdit::Kind::Replace: return "replace";
  }
  return "";
}

}  // namespace

std::string render_diff(const CfgDiff& diff, const ControlFlowGraph& g_o, const ControlFlowGraph& g_p) {
  std::vector<std::string> s_entries;
  for (BlockId id : diff.delta_s.removed_blocks) {
    s_entries.push_back("- B" + std::to_string(id) + " (original): " + block_preview(*g_o.find(id)));
  }
  for (BlockId id : diff.delta_s.added_blocks) {
    s_entries.push_back("+ B" + std::to_string(id) + " (optimized): " + block_preview(*g_p.find(id)));
  }
  std::vector<std::string> f_entries;
  for (const DiffEdge& e : diff.delta_f.removed_edges) f_entries.push_back("- " + edge_text(e, "original", "removed"));
  for (const DiffEdge& e : diff.delta_f.added_edges) f_entries.push_back("+ " + edge_text(e, "optimized", "added"));
  std::vector<std::string> c_entries;
  for (const ContentChange& c : diff.delta_c) {
    std::vector<std::string> edits;
    for (const StatementEdit& e : c.edits) edits.push_back(edit_text(e));
    c_entries.push_back("B" + std::to_string(c.o_id) + " (original) ~ B" + std::to_string(c.p_id) +
                        " (optimized): " + text::join(edits, "; "));
  }
  std::string out;
  section(out, "ΔS", s_entries);
  section(out, "ΔF", f_entries);
  section(out, "ΔC", c_entries);
  return out;
}

nlohmann::json to_json(const CfgDiff& diff) {
  using nlohmann::json;
  auto edges = [](const std::vector<DiffEdge>& es) {
    json arr = json::array();
    for (const DiffEdge& e : es) {
      arr.push_back({{"from", e.from}, {"to", e.to}, {"from_unmatched", e.from_unmatched}, {"to_unmatched", e.to_unmatched}});
    }
    return arr;
  };
  json changes = json::array();
  for (const ContentChange& c : diff.delta_c) {
    json edits = json::array();
    for (const StatementEdit& e : c.edits) {
      json je = {{"kind", edit_kind_name(e.kind)}};
      if (e.o_index) je["o_index"] = *e.o_index;
      if (e.p_index) je["p_index"] = *e.p_index;
      if (e.kind != StatementEdit::Kind::Insert) je["o_text"] = e.o_text;
      if (e.kind != StatementEdit::Kind::Delete) je["p_text"] = e.p_text;
      edits.push_back(std::move(je));
    }
    changes.push_back({{"o_id", c.o_id}, {"p_id", c.p_id}, {"edits", std::move(edits)}});
  }
  json pairs = json::array();
  for (const auto& [o, p] : diff.matching.pairs) pairs.push_back({o, p});
  return {
      {"delta_s", {{"added_blocks", diff.delta_s.added_blocks}, {"removed_blocks", diff.delta_s.removed_blocks}}},
      {"delta_f", {{"added_edges", edges(diff.delta_f.added_edges)}, {"removed_edges", edges(diff.delta_f.removed_edges)}}},
      {"delta_c", std::move(changes)},
      {"matching", std::move(pairs)},
  };
}

}  // namespace autopatch
