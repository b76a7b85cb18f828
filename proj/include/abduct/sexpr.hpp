#pragma once

// Minimal s-expression reader. The input language is whitespace-insensitive
// sequences of atoms and parenthesized lists; atoms are runs of characters
// other than parentheses and whitespace.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "abduct/errors.hpp"

namespace abduct {

struct SNode {
  bool is_atom = true;
  std::string atom;
  std::vector<SNode> items;
  std::size_t line = 1;
  std::size_t column = 1;

  const SNode& head() const { return items.front(); }
  bool is_list(std::string_view keyword) const {
    return !is_atom && !items.empty() && items.front().is_atom && items.front().atom == keyword;
  }
};

namespace detail {

class SexprReader {
 public:
  explicit SexprReader(std::string_view text) : text_(text) {}

  std::vector<SNode> read_all() {
    std::vector<SNode> out;
    skip_space();
    while (!eof()) {
      out.push_back(read_node());
      skip_space();
    }
    return out;
  }

 private:
  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\n' || peek() == '\r')) advance();
  }

  SNode read_node() {
    skip_space();
    if (eof()) throw ParseError("unexpected end of input", line_, col_);
    if (peek() == ')') throw ParseError("unexpected ')'", line_, col_);
    if (peek() == '(') {
      SNode node;
      node.is_atom = false;
      node.line = line_;
      node.column = col_;
      advance();  // consume '('
      skip_space();
      while (!eof() && peek() != ')') {
        node.items.push_back(read_node());
        skip_space();
      }
      if (eof()) throw ParseError("missing ')'", node.line, node.column);
      advance();  // consume ')'
      return node;
    }
    SNode node;
    node.is_atom = true;
    node.line = line_;
    node.column = col_;
    while (!eof() && peek() != '(' && peek() != ')' && peek() != ' ' && peek() != '\t' &&
           peek() != '\n' && peek() != '\r') {
      node.atom.push_back(peek());
      advance();
    }
    return node;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

}  // namespace detail

inline std::vector<SNode> parse_sexprs(std::string_view text) {
  return detail::SexprReader(text).read_all();
}

}  // namespace abduct
