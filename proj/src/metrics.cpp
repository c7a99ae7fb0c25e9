#include "autopatch/metrics.hpp"

#include <omp.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <unordered_map>

#include "autopatch/error.hpp"
#include "autopatch/lexer.hpp"
#include "autopatch/text.hpp"

namespace autopatch {

std::vector<std::string> normalized_lines(std::string_view code) {
  // A line survives if some non-comment token overlaps it.
  const std::vector<std::string_view> lines = text::split_lines(code);
  std::vector<std::size_t> line_start(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) line_start[i] = static_cast<std::size_t>(lines[i].data() - code.data());
  std::vector<bool> has_code(lines.size(), false);
  for (const Token& t : lex(code)) {
    const auto first = std::upper_bound(line_start.begin(), line_start.end(), t.offset) - line_start.begin() - 1;
    const std::size_t end = t.offset + t.text.size();
    for (auto l = static_cast<std::size_t>(std::max<std::ptrdiff_t>(first, 0)); l < lines.size() && line_start[l] < end; ++l) {
      has_code[l] = true;
    }
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (has_code[i]) out.emplace_back(text::trim(lines[i]));
  }
  return out;
}

namespace {

template <typename T>
std::size_t multiset_intersection(const std::vector<T>& a, const std::vector<T>& b) {
  std::map<T, std::size_t> counts;
  for (const T& x : b) ++counts[x];
  std::size_t matched = 0;
  for (const T& x : a) {
    const auto it = counts.find(x);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++matched;
    }
  }
  return matched;
}

class PatternBits {
 public:
  explicit PatternBits(std::u32string_view pattern) : blocks_((pattern.size() + 63) / 64) {
    ascii_.fill(-1);
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      const int slot = slot_for(pattern[i], true);
      masks_[static_cast<std::size_t>(slot) * blocks_ + i / 64] |= std::uint64_t{1} << (i % 64);
    }
  }

  [[nodiscard]] std::size_t blocks() const noexcept { return blocks_; }

  // Match mask of symbol c for block b; zero for symbols absent from the pattern.
  [[nodiscard]] std::uint64_t eq(int slot, std::size_t b) const noexcept {
    return slot < 0 ? 0 : masks_[static_cast<std::size_t>(slot) * blocks_ + b];
  }

  int slot_for(char32_t c, bool insert = false) {
    if (c < 128) {
      int& s = ascii_[c];
      if (s < 0 && insert) s = new_slot();
      return s;
    }
    const auto it = other_.find(c);
    if (it != other_.end()) return it->second;
    if (!insert) return -1;
    const int s = new_slot();
    other_.emplace(c, s);
    return s;
  }

 private:
  int new_slot() {
    masks_.resize(masks_.size() + blocks_, 0);
    return next_slot_++;
  }

  std::size_t blocks_;
  std::array<int, 128> ascii_{};
  std::unordered_map<char32_t, int> other_;
  std::vector<std::uint64_t> masks_;
  int next_slot_ = 0;
};

// One 64-row block of one text column; hin/hout are the horizontal deltas
// entering at the top and leaving at row `high`.
int advance_block(std::uint64_t& pv, std::uint64_t& mv, std::uint64_t eq, int hin, std::uint64_t high) {
  const std::uint64_t hin_neg = hin < 0 ? 1 : 0;
  const std::uint64_t xv = eq | mv;
  eq |= hin_neg;
  const std::uint64_t xh = (((eq & pv) + pv) ^ pv) | eq;
  std::uint64_t ph = mv | ~(xh | pv);
  std::uint64_t mh = pv & xh;
  int hout = 0;
  if ((ph & high) != 0) {
    hout = 1;
  } else if ((mh & high) != 0) {
    hout = -1;
  }
  ph <<= 1;
  mh <<= 1;
  if (hin < 0) {
    mh |= 1;
  } else if (hin > 0) {
    ph |= 1;
  }
  pv = mh | ~(xv | ph);
  mv = ph & xv;
  return hout;
}

}  // namespace

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);  // pattern = shorter string
  const std::u32string_view pattern = b;
  const std::u32string_view text = a;
  if (pattern.empty()) return text.size();

  PatternBits bits(pattern);
  const std::size_t blocks = bits.blocks();
  std::vector<std::uint64_t> pv(blocks, ~std::uint64_t{0});
  std::vector<std::uint64_t> mv(blocks, 0);
  const std::uint64_t last_high = std::uint64_t{1} << ((pattern.size() - 1) % 64);
  constexpr std::uint64_t kHigh = std::uint64_t{1} << 63;

  std::size_t score = pattern.size();
  for (char32_t c : text) {
    const int slot = bits.slot_for(c);
    int carry = 1;  // row 0 grows by one per column
    for (std::size_t blk = 0; blk < blocks; ++blk) {
      carry = advance_block(pv[blk], mv[blk], bits.eq(slot, blk), carry, blk + 1 == blocks ? last_high : kHigh);
    }
    score = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(score) + carry);
  }
  return score;
}

double edit_distance_similarity(std::string_view generated, std::string_view ground_truth) {
  const std::u32string g = text::decode_utf8(text::normalize_code_text(generated));
  const std::u32string t = text::decode_utf8(text::normalize_code_text(ground_truth));
  if (g.empty() && t.empty()) throw Error(ErrorCode::BothEmpty, "both texts are empty after normalization");
  const std::size_t e = levenshtein(g, t);
  return 1.0 - static_cast<double>(e) / static_cast<double>(std::max(g.size(), t.size()));
}

double line_overlap(std::string_view generated, std::string_view ground_truth) {
  const std::vector<std::string> truth = normalized_lines(ground_truth);
  if (truth.empty()) throw Error(ErrorCode::EmptyGroundTruth, "ground truth has no code lines");
  const std::size_t matched = multiset_intersection(normalized_lines(generated), truth);
  return static_cast<double>(matched) / static_cast<double>(truth.size()) * 100.0;
}

double token_overlap(std::string_view generated, std::string_view ground_truth) {
  const std::vector<std::string> truth = tokenize(ground_truth);
  if (truth.empty()) throw Error(ErrorCode::EmptyGroundTruth, "ground truth has no tokens");
  const std::size_t matched = multiset_intersection(tokenize(generated), truth);
  return static_cast<double>(matched) / static_cast<double>(truth.size()) * 100.0;
}

LexicalScores lexical_scores(std::string_view generated, std::string_view ground_truth) {
  return {line_overlap(generated, ground_truth), edit_distance_similarity(generated, ground_truth),
          token_overlap(generated, ground_truth)};
}

namespace {

std::vector<std::pair<std::u32string, std::u32string>> prepare(std::span<const TextPair> pairs) {
  std::vector<std::pair<std::u32string, std::u32string>> out;
  out.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto g = text::decode_utf8(text::normalize_code_text(pairs[i].first));
    auto t = text::decode_utf8(text::normalize_code_text(pairs[i].second));
    if (g.empty() && t.empty()) throw Error(ErrorCode::BothEmpty, "pair " + std::to_string(i));
    out.emplace_back(std::move(g), std::move(t));
  }
  return out;
}

double eds_of(const std::pair<std::u32string, std::u32string>& p) {
  const std::size_t e = levenshtein(p.first, p.second);
  return 1.0 - static_cast<double>(e) / static_cast<double>(std::max(p.first.size(), p.second.size()));
}

}  // namespace

std::vector<double> edit_distance_similarity_batch(std::span<const TextPair> pairs) {
  const auto prepared = prepare(pairs);
  std::vector<double> out(prepared.size());
  const auto n = static_cast<std::ptrdiff_t>(prepared.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = eds_of(prepared[static_cast<std::size_t>(i)]);
  return out;
}

std::vector<double> edit_distance_similarity_batch_serial(std::span<const TextPair> pairs) {
  const auto prepared = prepare(pairs);
  std::vector<double> out;
  out.reserve(prepared.size());
  for (const auto& p : prepared) out.push_back(eds_of(p));
  return out;
}

}  // namespace autopatch
