#include "autopatch/preprocess.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include "autopatch/error.hpp"
#include "autopatch/lexer.hpp"
#include "autopatch/text.hpp"

namespace autopatch {

namespace {

const std::regex kUmbrellaInclude(R"(^\s*#\s*include\s*<bits/stdc\+\+\.h>\s*$)");
const std::regex kGccPragma(R"(^\s*#\s*pragma\s+GCC\s+(\w+)\b.*$)");
const std::regex kSystemInclude(R"(^\s*#\s*include\s*<([^>]+)>)");

struct DependencyRule {
  std::vector<std::string_view> identifiers;
  std::string_view followed_by;  // "" = any use, "(" = call, "<" = template
  std::string_view header;
};

// Facilities commonly used in contest code, with the header that declares them.
const std::vector<DependencyRule>& dependency_rules() {
  static const std::vector<DependencyRule> rules{
      {{"printf", "scanf", "puts", "getchar", "putchar", "fprintf", "sprintf", "fgets"}, "(", "cstdio"},
      {{"cin", "cout", "cerr", "endl"}, "", "iostream"},
      {{"vector"}, "<", "vector"},
      {{"string"}, "", "string"},
      {{"map", "multimap"}, "<", "map"},
      {{"set", "multiset"}, "<", "set"},
      {{"unordered_map"}, "<", "unordered_map"},
      {{"unordered_set"}, "<", "unordered_set"},
      {{"queue", "priority_queue"}, "<", "queue"},
      {{"stack"}, "<", "stack"},
      {{"deque"}, "<", "deque"},
      {{"sort", "reverse", "max_element", "min_element", "lower_bound", "upper_bound", "next_permutation",
        "unique", "fill"},
       "(",
       "algorithm"},
      {{"accumulate", "iota", "gcd", "lcm"}, "(", "numeric"},
      {{"sqrt", "pow", "fabs", "floor", "ceil", "log", "exp", "hypot"}, "(", "cmath"},
      {{"memset", "memcpy", "strlen", "strcmp"}, "(", "cstring"},
      {{"setprecision", "setw", "fixed"}, "", "iomanip"},
  };
  return rules;
}

std::string attribute_name(std::string_view item) {
  item = text::trim(item);
  if (const std::size_t paren = item.find('('); paren != std::string_view::npos) item = item.substr(0, paren);
  item = text::trim(item);
  if (const std::size_t ns = item.rfind("::"); ns != std::string_view::npos) item = item.substr(ns + 2);
  while (text::starts_with(item, "_")) item.remove_prefix(1);
  while (!item.empty() && item.back() == '_') item.remove_suffix(1);
  return std::string(item);
}

// Splits the attribute list [begin, end) of `tokens` on top-level commas.
std::vector<std::string> attribute_items(std::string_view code, const std::vector<Token>& tokens, std::size_t begin,
                                         std::size_t end) {
  std::vector<std::string> items;
  int depth = 0;
  std::size_t item_start = tokens[begin].offset;
  for (std::size_t k = begin; k < end; ++k) {
    const std::string_view t = tokens[k].text;
    if (t == "(") ++depth;
    if (t == ")") --depth;
    if (t == "," && depth == 0) {
      items.emplace_back(code.substr(item_start, tokens[k].offset - item_start));
      item_start = tokens[k].offset + 1;
    }
  }
  const std::size_t last_end = end > begin ? tokens[end - 1].offset + tokens[end - 1].text.size() : item_start;
  if (last_end > item_start) items.emplace_back(code.substr(item_start, last_end - item_start));
  return items;
}

struct Span {
  std::size_t begin;
  std::size_t end;
  std::string text;
};

// Finds `__attribute__((...))` and `[[...]]` specifiers whose every attribute is
// in the strip list.
std::vector<Span> strippable_attributes(std::string_view code, const std::set<std::string>& strip) {
  const std::vector<Token> tokens = lex(code);
  std::vector<Span> spans;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    const std::string_view t = tokens[k].text;
    std::size_t list_begin = 0;
    std::size_t list_end = 0;
    std::size_t last = 0;
    if ((t == "__attribute__" || t == "__attribute") && k + 2 < tokens.size() && tokens[k + 1].text == "(" &&
        tokens[k + 2].text == "(") {
      int depth = 0;
      std::size_t j = k + 1;
      for (; j < tokens.size(); ++j) {
        if (tokens[j].text == "(") ++depth;
        if (tokens[j].text == ")" && --depth == 0) break;
      }
      if (j >= tokens.size() || j < k + 4 || tokens[j - 1].text != ")") continue;
      list_begin = k + 3;
      list_end = j - 1;
      last = j;
    } else if (t == "[" && k + 1 < tokens.size() && tokens[k + 1].text == "[" &&
               tokens[k + 1].offset == tokens[k].offset + 1) {
      std::size_t j = k + 2;
      int depth = 0;
      for (; j + 1 < tokens.size(); ++j) {
        if (tokens[j].text == "(") ++depth;
        if (tokens[j].text == ")") --depth;
        if (depth == 0 && tokens[j].text == "]" && tokens[j + 1].text == "]") break;
      }
      if (j + 1 >= tokens.size()) continue;
      list_begin = k + 2;
      list_end = j;
      last = j + 1;
    } else {
      continue;
    }
    const std::vector<std::string> items = attribute_items(code, tokens, list_begin, list_end);
    if (items.empty()) continue;
    const bool all_stripped = std::all_of(items.begin(), items.end(),
                                          [&](const std::string& item) { return strip.count(attribute_name(item)) != 0; });
    if (!all_stripped) continue;
    const std::size_t begin = tokens[k].offset;
    std::size_t end = tokens[last].offset + tokens[last].text.size();
    spans.push_back({begin, end, std::string(code.substr(begin, end - begin))});
    k = last;
  }
  return spans;
}

std::string remove_spans(std::string_view code, const std::vector<Span>& spans) {
  std::string out;
  std::size_t pos = 0;
  for (const Span& s : spans) {
    out.append(code.substr(pos, s.begin - pos));
    pos = s.end;
    // Swallow one space so `inline __attribute__((x)) int` becomes `inline int`.
    if (pos < code.size() && code[pos] == ' ') ++pos;
  }
  out.append(code.substr(pos));
  return out;
}

}  // namespace

PreprocessReport preprocess_source(std::string_view code, const PreprocessOptions& options) {
  if (!text::is_valid_utf8(code)) throw Error(ErrorCode::NonUtf8Input, "source is not valid UTF-8");
  PreprocessReport report;
  const std::set<std::string> strip(options.attribute_strip_list.begin(), options.attribute_strip_list.end());

  // Line rewrites: umbrella header and optimization pragmas.
  std::string lines_out;
  lines_out.reserve(code.size());
  bool changed = false;
  for (std::string_view line : text::split_lines(code)) {
    const std::string line_str(line);
    std::smatch m;
    if (std::regex_match(line_str, kUmbrellaInclude)) {
      for (const std::string& h : options.standard_headers) lines_out += "#include <" + h + ">\n";
      report.actions.push_back("standardize-headers: replaced <bits/stdc++.h> with " +
                               std::to_string(options.standard_headers.size()) + " standard headers");
      changed = true;
      continue;
    }
    if (std::regex_match(line_str, m, kGccPragma) && strip.count(m[1].str()) != 0) {
      report.actions.push_back("remove-attribute: " + std::string(text::trim(line)));
      changed = true;
      continue;
    }
    lines_out += line_str;
    lines_out += '\n';
  }
  std::string current = changed ? std::move(lines_out) : std::string(code);

  const std::vector<Span> spans = strippable_attributes(current, strip);
  if (!spans.empty()) {
    for (const Span& s : spans) report.actions.push_back("remove-attribute: " + s.text);
    current = remove_spans(current, spans);
  }

  // Dependency resolution over code tokens (comments and literals excluded).
  std::set<std::string> included;
  for (std::string_view line : text::split_lines(current)) {
    const std::string line_str(line);
    std::smatch m;
    if (std::regex_search(line_str, m, kSystemInclude)) included.insert(m[1].str());
  }
  std::vector<std::string> missing;
  const std::vector<Token> tokens = lex(current);
  for (const DependencyRule& rule : dependency_rules()) {
    const std::string header(rule.header);
    if (included.count(header) != 0) continue;
    bool used = false;
    for (std::size_t k = 0; k < tokens.size() && !used; ++k) {
      if (tokens[k].kind != TokenKind::Identifier) continue;
      if (std::find(rule.identifiers.begin(), rule.identifiers.end(), tokens[k].text) == rule.identifiers.end()) {
        continue;
      }
      // Skip the names appearing inside an #include line.
      if (k > 0 && (tokens[k - 1].text == "<" || tokens[k - 1].text == "/") && k > 1 &&
          (tokens[k - 2].text == "include" || tokens[k - 2].text == "/")) {
        continue;
      }
      // Member access like `obj.fill(` or `x.set<` is not a use of the facility.
      if (k > 0 && (tokens[k - 1].text == "." || tokens[k - 1].text == "->")) continue;
      if (rule.followed_by.empty()) {
        used = true;
      } else if (k + 1 < tokens.size() && tokens[k + 1].text == rule.followed_by) {
        used = true;
      }
    }
    if (used) {
      missing.push_back(header);
      included.insert(header);
    }
  }
  if (!missing.empty()) {
    std::string prefix;
    for (const std::string& h : missing) {
      prefix += "#include <" + h + ">\n";
      report.actions.push_back("resolve-dependency: added <" + h + ">");
    }
    current = prefix + current;
  }

  report.output_code = std::move(current);
  return report;
}

}  // namespace autopatch
