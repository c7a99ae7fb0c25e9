// Reference implementations used only by tests. They are written in the most
// direct way possible and share no code with the library kernels.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "autopatch/cfg.hpp"

namespace oracle {

inline std::filesystem::path data_dir() { return AUTOPATCH_TEST_DATA_DIR; }

// Wagner-Fischer, full table.
template <typename S>
std::size_t levenshtein_dp(const S& a, const S& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, sub});
    }
  }
  return d[a.size()][b.size()];
}

struct ScanResult {
  std::size_t position;
  double score;
};

// Exhaustive cosine argmax; ties go to the smallest id.
inline ScanResult linear_scan(const std::vector<std::vector<float>>& rows, const std::vector<std::string>& ids,
                              const std::vector<float>& q) {
  ScanResult best{rows.size(), -2.0};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double dot = 0, na = 0, nb = 0;
    for (std::size_t k = 0; k < q.size(); ++k) {
      dot += double(rows[i][k]) * double(q[k]);
      na += double(rows[i][k]) * double(rows[i][k]);
      nb += double(q[k]) * double(q[k]);
    }
    const double s = dot / (std::sqrt(na) * std::sqrt(nb));
    if (best.position == rows.size() || s > best.score || (s == best.score && ids[i] < ids[best.position])) {
      best = {i, s};
    }
  }
  return best;
}

// Random single-function CFG: exit B0, body B1..Bn-2, entry Bn-1.
inline autopatch::ControlFlowGraph random_cfg(std::mt19937_64& rng, int max_blocks) {
  static const std::vector<std::string> kStatements = {
      "x", "[B.1] (ImplicitCastExpr, LValueToRValue, int)", "0", "1", "int i = 0;", "i++", "return [B.2];",
      "[B.1] + [B.2]", "std::cin >> n", "a[i]", "s += a[i]", "foo()", "[B.3] < [B.4]", "v.push_back(x)"};
  std::uniform_int_distribution<int> nblocks(2, max_blocks);
  const int n = nblocks(rng);
  autopatch::ControlFlowGraph g;
  g.function = "int main()";
  g.exit_id = 0;
  g.entry_id = n - 1;
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  for (int id = 0; id < n; ++id) {
    autopatch::BasicBlock b;
    b.id = id;
    if (id != 0 && id != n - 1) {
      const int count = pick(0, 5);
      for (int s = 0; s < count; ++s) b.statements.push_back(kStatements[std::size_t(pick(0, int(kStatements.size()) - 1))]);
      if (pick(0, 3) == 0) b.terminator = "if [B." + std::to_string(pick(1, 4)) + "]";
      if (pick(0, 7) == 0) b.label = "case " + std::to_string(pick(1, 3)) + ":";
      const int succs = pick(1, 2);
      for (int s = 0; s < succs; ++s) {
        const int to = pick(0, n - 2);  // any body block or exit, never entry
        if (std::find(b.successors.begin(), b.successors.end(), to) == b.successors.end()) b.successors.push_back(to);
      }
    } else if (id == n - 1) {
      b.successors.push_back(n > 2 ? pick(1, n - 2) : 0);
    }
    g.blocks.push_back(std::move(b));
  }
  autopatch::finalize(g);
  return g;
}

}  // namespace oracle
