#include "solitonjet/parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

#include "solitonjet/error.hpp"

namespace solitonjet {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  FieldExpr parse() {
    FieldExpr e = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(ErrorKind::Syntax, pos_, what); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      fail(pos_ < text_.size() ? "expected '" + std::string(1, c) + "'"
                               : "expected '" + std::string(1, c) + "' before end of input");
    }
  }

  FieldExpr expr() {
    FieldExpr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = lhs + term();
      } else if (accept('-')) {
        lhs = lhs - term();
      } else {
        return lhs;
      }
    }
  }

  FieldExpr term() {
    FieldExpr lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = lhs * factor();
      } else if (accept('/')) {
        lhs = lhs / factor();
      } else {
        return lhs;
      }
    }
  }

  FieldExpr factor() {
    FieldExpr base = atom();
    if (accept('^')) {
      skip_space();
      bool negative = false;
      if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
        negative = text_[pos_] == '-';
        ++pos_;
      }
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected integer exponent");
      int value = 0;
      auto [end, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
      if (ec != std::errc{}) {
        pos_ = start;
        fail("exponent out of range");
      }
      base = powi(base, negative ? -value : value);
    }
    return base;
  }

  bool at_number_start() const {
    if (pos_ >= text_.size()) return false;
    const char c = text_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
  }

  double number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    double value = 0.0;
    auto [end, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc{} || end != text_.data() + pos_ || !std::isfinite(value)) {
      pos_ = start;
      fail("malformed number");
    }
    return value;
  }

  std::string_view identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }

  FieldExpr atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (at_number_start()) return FieldExpr::constant(number());
    if (c == '(') {
      ++pos_;
      FieldExpr e = expr();
      expect(')');
      return e;
    }
    if (c == '-') {
      ++pos_;
      skip_space();
      if (at_number_start()) return FieldExpr::constant(-number());
      return -atom();
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      const std::string_view name = identifier();
      if (name == "x") return x_coord();
      if (name == "y" || name == "t") return second_coord();
      if (name == "exp") {
        expect('(');
        FieldExpr e = expr();
        expect(')');
        return exp(e);
      }
      if (name == "diff") return diff_call();
      throw SyntaxError(ErrorKind::UnknownIdentifier, start,
                        "unknown identifier '" + std::string(name) + "'");
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  FieldExpr diff_call() {
    expect('(');
    FieldExpr e = expr();
    int da = 0;
    int db = 0;
    if (!accept(',')) fail("expected ',' and a differentiation variable");
    do {
      skip_space();
      const std::size_t start = pos_;
      const std::string_view var = identifier();
      if (var == "x") {
        ++da;
      } else if (var == "y" || var == "t") {
        ++db;
      } else {
        pos_ = start;
        fail("expected differentiation variable x, y or t");
      }
    } while (accept(','));
    expect(')');
    return partial(e, da, db);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

FieldExpr parse_field(std::string_view text) { return Parser(text).parse(); }

}  // namespace solitonjet
