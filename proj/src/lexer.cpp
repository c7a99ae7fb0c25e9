#include "autopatch/lexer.hpp"

#include <array>

namespace autopatch {

namespace {

bool is_ident_start(unsigned char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$'; }
bool is_ident_char(unsigned char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }
bool is_space(unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

constexpr std::array<std::string_view, 5> kThreeCharOps{"<=>", "<<=", ">>=", "->*", "..."};
constexpr std::array<std::string_view, 22> kTwoCharOps{"::", "->", "++", "--", "<<", ">>", "<=", ">=",
                                                       "==", "!=", "&&", "||", "+=", "-=", "*=", "/=",
                                                       "%=", "&=", "|=", "^=", ".*", "##"};
constexpr std::string_view kPunct = "{}[]()<>;:,.?~!+-*/%^&|=#";

bool is_string_prefix(std::string_view ident) {
  return ident == "L" || ident == "u" || ident == "U" || ident == "u8";
}
bool is_raw_prefix(std::string_view ident) {
  return ident == "R" || ident == "LR" || ident == "uR" || ident == "UR" || ident == "u8R";
}

// Returns the end offset of a quoted literal starting at `i` (the quote).
std::size_t scan_quoted(std::string_view s, std::size_t i, char quote) {
  std::size_t j = i + 1;
  while (j < s.size()) {
    const char c = s[j];
    if (c == '\\' && j + 1 < s.size()) {
      j += 2;
      continue;
    }
    if (c == quote) return j + 1;
    if (c == '\n') return j;  // unterminated: stop at end of line
    ++j;
  }
  return j;
}

// `i` at the opening quote of R"delim( ... )delim".
std::size_t scan_raw_string(std::string_view s, std::size_t i) {
  const std::size_t paren = s.find('(', i + 1);
  if (paren == std::string_view::npos || paren - i - 1 > 16) return scan_quoted(s, i, '"');
  const std::string close = ")" + std::string(s.substr(i + 1, paren - i - 1)) + "\"";
  const std::size_t end = s.find(close, paren + 1);
  return end == std::string_view::npos ? s.size() : end + close.size();
}

std::size_t scan_number(std::string_view s, std::size_t i) {
  std::size_t j = i;
  while (j < s.size()) {
    const auto c = static_cast<unsigned char>(s[j]);
    if ((c == '+' || c == '-') && j > i) {
      const char prev = s[j - 1];
      if (prev == 'e' || prev == 'E' || prev == 'p' || prev == 'P') {
        ++j;
        continue;
      }
      break;
    }
    if (c == '\'' && j + 1 < s.size() && is_ident_char(static_cast<unsigned char>(s[j + 1])) && j > i) {
      ++j;  // digit separator
      continue;
    }
    if (is_ident_char(c) || c == '.') {
      ++j;
      continue;
    }
    break;
  }
  return j;
}

std::size_t utf8_length(unsigned char lead) {
  if (lead >= 0xF0) return 4;
  if (lead >= 0xE0) return 3;
  if (lead >= 0xC0) return 2;
  return 1;
}

}  // namespace

std::vector<Token> lex(std::string_view s, const LexOptions& options) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto emit = [&](TokenKind kind, std::size_t begin, std::size_t end) {
    out.push_back(Token{kind, s.substr(begin, end - begin), begin});
  };
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (is_space(c)) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < s.size() && s[i + 1] == '/') {
      std::size_t end = s.find('\n', i);
      if (end == std::string_view::npos) end = s.size();
      if (options.keep_comments) emit(TokenKind::Comment, i, end);
      i = end;
      continue;
    }
    if (c == '/' && i + 1 < s.size() && s[i + 1] == '*') {
      std::size_t end = s.find("*/", i + 2);
      end = end == std::string_view::npos ? s.size() : end + 2;
      if (options.keep_comments) emit(TokenKind::Comment, i, end);
      i = end;
      continue;
    }
    if (is_ident_start(c)) {
      std::size_t j = i + 1;
      while (j < s.size() && is_ident_char(static_cast<unsigned char>(s[j]))) ++j;
      const std::string_view ident = s.substr(i, j - i);
      if (j < s.size() && s[j] == '"' && is_raw_prefix(ident)) {
        const std::size_t end = scan_raw_string(s, j);
        emit(TokenKind::String, i, end);
        i = end;
      } else if (j < s.size() && s[j] == '"' && is_string_prefix(ident)) {
        const std::size_t end = scan_quoted(s, j, '"');
        emit(TokenKind::String, i, end);
        i = end;
      } else if (j < s.size() && s[j] == '\'' && is_string_prefix(ident)) {
        const std::size_t end = scan_quoted(s, j, '\'');
        emit(TokenKind::Char, i, end);
        i = end;
      } else {
        emit(TokenKind::Identifier, i, j);
        i = j;
      }
      continue;
    }
    if (is_digit(c) || (c == '.' && i + 1 < s.size() && is_digit(static_cast<unsigned char>(s[i + 1])))) {
      const std::size_t end = scan_number(s, i);
      emit(TokenKind::Number, i, end);
      i = end;
      continue;
    }
    if (c == '"') {
      const std::size_t end = scan_quoted(s, i, '"');
      emit(TokenKind::String, i, end);
      i = end;
      continue;
    }
    if (c == '\'') {
      const std::size_t end = scan_quoted(s, i, '\'');
      emit(TokenKind::Char, i, end);
      i = end;
      continue;
    }
    const std::string_view rest = s.substr(i);
    bool matched = false;
    for (std::string_view op : kThreeCharOps) {
      if (rest.substr(0, 3) == op) {
        emit(TokenKind::Operator, i, i + 3);
        i += 3;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    for (std::string_view op : kTwoCharOps) {
      if (rest.substr(0, 2) == op) {
        emit(TokenKind::Operator, i, i + 2);
        i += 2;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (kPunct.find(static_cast<char>(c)) != std::string_view::npos) {
      emit(TokenKind::Operator, i, i + 1);
      ++i;
      continue;
    }
    const std::size_t len = std::min(utf8_length(c), s.size() - i);
    emit(TokenKind::Other, i, i + len);
    i += len;
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view code) {
  std::vector<std::string> out;
  for (const Token& t : lex(code)) out.emplace_back(t.text);
  return out;
}

}  // namespace autopatch
