#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "choiceless/errors.hpp"

namespace choiceless {

enum class TokenKind { Ident, Int, Punct, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;

  bool is(std::string_view punct_or_word) const {
    return kind != TokenKind::End && kind != TokenKind::Int &&
           text == punct_or_word;
  }
};

/// Splits text into identifiers, decimal integers and punctuation.
/// `#` starts a comment running to the end of the line.
inline std::vector<Token> tokenize(std::string_view text,
                                   std::size_t first_line = 1) {
  std::vector<Token> out;
  std::size_t line = first_line, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  auto ident_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           c == '\'' || c == '.';
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token tok;
    tok.line = line;
    tok.column = col;
    std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
        advance(1);
      if (i < text.size() && ident_char(text[i])) {
        while (i < text.size() && ident_char(text[i])) advance(1);
        tok.kind = TokenKind::Ident;
      } else {
        tok.kind = TokenKind::Int;
      }
    } else if (ident_char(c)) {
      while (i < text.size() && ident_char(text[i])) advance(1);
      tok.kind = TokenKind::Ident;
    } else {
      static constexpr std::string_view two[] = {"->", ":=", "!="};
      std::size_t len = 0;
      for (auto p : two)
        if (text.substr(i, 2) == p) len = 2;
      if (len == 0) {
        if (std::string_view("(),:/{};=-").find(c) == std::string_view::npos)
          throw ParseError(std::string("unexpected character '") + c + "'",
                           line, col);
        len = 1;
      }
      advance(len);
      tok.kind = TokenKind::Punct;
    }
    tok.text = std::string(text.substr(start, i - start));
    out.push_back(std::move(tok));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

/// Cursor over a token vector with the usual expect/accept helpers.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t k = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[k];
  }
  const Token& next() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == TokenKind::End; }
  bool accept(std::string_view s) {
    if (peek().is(s)) {
      next();
      return true;
    }
    return false;
  }
  const Token& expect(std::string_view s) {
    if (!peek().is(s)) fail("expected '" + std::string(s) + "'");
    return next();
  }
  const Token& expect_ident() {
    if (peek().kind != TokenKind::Ident) fail("expected identifier");
    return next();
  }
  std::size_t expect_int() {
    if (peek().kind != TokenKind::Int) fail("expected integer");
    return std::stoull(next().text);
  }
  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    std::string found = t.kind == TokenKind::End ? "end of input"
                                                  : "'" + t.text + "'";
    throw ParseError(what + ", found " + found, t.line, t.column);
  }

  std::size_t position() const { return pos_; }
  void seek(std::size_t pos) { pos_ = pos; }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace choiceless
