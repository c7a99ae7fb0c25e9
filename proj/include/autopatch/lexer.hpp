#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace autopatch {

enum class TokenKind { Identifier, Number, String, Char, Operator, Comment, Other };

struct Token {
  TokenKind kind;
  std::string_view text;  // view into the lexed source
  std::size_t offset;
};

struct LexOptions {
  bool keep_comments = false;
};

/// C-family lexer: identifiers/keywords, pp-numbers, string and character
/// literals (encoding prefixes and raw strings included) as single tokens,
/// longest-match multi-character operators, single-character punctuation.
/// Whitespace is skipped; comments are skipped unless requested. Bytes that
/// start no token become single-character tokens, so lexing never fails.
std::vector<Token> lex(std::string_view code, const LexOptions& options = {});

/// Token texts of lex(code), comments dropped.
std::vector<std::string> tokenize(std::string_view code);

}  // namespace autopatch
