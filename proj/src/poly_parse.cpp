#include "sosym/poly_parse.hpp"

#include <cctype>
#include <string>

#include "sosym/errors.hpp"

namespace sosym {

namespace {

// Recursive descent:
//   expr    = [sign] term { ("+" | "-") term }
//   term    = factor { "*" factor }
//   factor  = sign factor | primary [ "^" digits ]
//   primary = number | "x" digits | "(" expr ")"
class Parser {
 public:
  Parser(std::string_view text, std::size_t n, int line, int column_offset)
      : text_(text), n_(n), line_(line), column_offset_(column_offset) {}

  Polynomial parse() {
    skip_space();
    if (at_end()) fail("empty polynomial");
    Polynomial p = expr();
    skip_space();
    if (!at_end()) fail(std::string("unexpected character '") + text_[pos_] + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, line_, column_offset_ + static_cast<int>(pos_));
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view digits() {
    std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  Polynomial expr() {
    skip_space();
    Polynomial result(n_);
    bool negate = false;
    if (peek() == '+' || peek() == '-') {
      negate = peek() == '-';
      ++pos_;
    }
    Polynomial t = term();
    result += negate ? -t : t;
    while (true) {
      skip_space();
      char c = peek();
      if (c != '+' && c != '-') break;
      ++pos_;
      Polynomial next = term();
      if (c == '+')
        result += next;
      else
        result -= next;
    }
    return result;
  }

  Polynomial term() {
    Polynomial result = factor();
    while (true) {
      skip_space();
      if (peek() != '*') break;
      ++pos_;
      result = result * factor();
    }
    return result;
  }

  Polynomial factor() {
    skip_space();
    if (peek() == '-' || peek() == '+') {
      bool negate = peek() == '-';
      ++pos_;
      Polynomial inner = factor();
      return negate ? -inner : inner;
    }
    Polynomial base = primary();
    skip_space();
    if (peek() == '^') {
      ++pos_;
      skip_space();
      std::string_view e = digits();
      if (e.empty()) fail("expected exponent after '^'");
      if (e.size() > 4) fail("exponent too large");
      base = base.pow(static_cast<unsigned>(std::stoul(std::string(e))));
    }
    return base;
  }

  Polynomial primary() {
    skip_space();
    char c = peek();
    if (c == '(') {
      ++pos_;
      Polynomial inner = expr();
      skip_space();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (c == 'x') {
      std::size_t start = pos_;
      ++pos_;
      std::string_view idx = digits();
      if (idx.empty()) fail("expected variable index after 'x'");
      if (idx.size() > 9) fail("variable index too large");
      std::size_t i = std::stoul(std::string(idx));
      if (i < 1 || i > n_) {
        pos_ = start;
        fail("variable x" + std::string(idx) + " out of range (vars: " + std::to_string(n_) +
             ")");
      }
      return Polynomial::variable(n_, i - 1);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      digits();
      if (peek() == '/' ) {
        ++pos_;
        if (digits().empty()) fail("expected denominator");
      } else if (peek() == '.') {
        ++pos_;
        digits();
      }
      std::string_view literal = text_.substr(start, pos_ - start);
      try {
        return Polynomial(n_, parse_rational(literal));
      } catch (const std::invalid_argument& e) {
        pos_ = start;
        fail(e.what());
      }
    }
    if (at_end()) fail("unexpected end of polynomial");
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  std::size_t n_;
  int line_;
  int column_offset_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, std::size_t n, int line, int column_offset) {
  return Parser(text, n, line, column_offset).parse();
}

}  // namespace sosym
