#pragma once

#include <cctype>
#include <charconv>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "levikit/common.hpp"

namespace levikit::expr {

/// Expression tree for the `.dfn` language.
///
/// Grammar (EBNF, also shipped in docs/grammar.ebnf):
///
///   expression := term { ("+" | "-") term } ;
///   term       := factor { ("*" | "/") factor } ;
///   factor     := ("+" | "-") factor | power ;
///   power      := atom [ "^" integer ] ;
///   atom       := number | "i" | variable | parameter
///               | builtin "(" expression ")" | "(" expression ")" ;
///   builtin    := "re" | "im" | "abs2" | "conj" ;
///   variable   := "z" digits ;
///   integer    := ["-"] digits ;
///
/// `#` starts a comment that runs to the end of the line. Whitespace and
/// newlines are insignificant inside an expression.
struct Node;
using NodePtr = std::shared_ptr<const Node>;

enum class NodeKind {
  Constant,   // real literal
  ImagUnit,   // the literal `i`
  Parameter,  // named real scalar
  Variable,   // z_j, 0-based index stored
  Negate,
  Add,
  Sub,
  Mul,
  Div,
  Pow,        // integer exponent
  Re,
  Im,
  Abs2,
  Conj,
};

struct Node {
  NodeKind kind;
  double number = 0.0;      // Constant
  std::string name;         // Parameter
  int var_index = -1;       // Variable (0-based)
  int exponent = 0;         // Pow
  NodePtr a, b;             // operands
};

inline NodePtr make_const(double v) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Constant;
  n->number = v;
  return n;
}
inline NodePtr make_imag() {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::ImagUnit;
  return n;
}
inline NodePtr make_param(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Parameter;
  n->name = std::move(name);
  return n;
}
inline NodePtr make_var(int index0) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Variable;
  n->var_index = index0;
  return n;
}
inline NodePtr make_unary(NodeKind k, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = std::move(a);
  return n;
}
inline NodePtr make_binary(NodeKind k, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}
inline NodePtr make_pow(NodePtr a, int e) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Pow;
  n->a = std::move(a);
  n->exponent = e;
  return n;
}

// Convenience builders for code that assembles fields programmatically.
inline NodePtr operator+(NodePtr a, NodePtr b) { return make_binary(NodeKind::Add, std::move(a), std::move(b)); }
inline NodePtr operator-(NodePtr a, NodePtr b) { return make_binary(NodeKind::Sub, std::move(a), std::move(b)); }
inline NodePtr operator*(NodePtr a, NodePtr b) { return make_binary(NodeKind::Mul, std::move(a), std::move(b)); }
inline NodePtr operator/(NodePtr a, NodePtr b) { return make_binary(NodeKind::Div, std::move(a), std::move(b)); }
inline NodePtr operator-(NodePtr a) { return make_unary(NodeKind::Negate, std::move(a)); }

inline bool ast_equal(const NodePtr& x, const NodePtr& y) {
  if (x == y) return true;
  if (!x || !y) return false;
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case NodeKind::Constant: return x->number == y->number;
    case NodeKind::Parameter: return x->name == y->name;
    case NodeKind::Variable: return x->var_index == y->var_index;
    case NodeKind::Pow: return x->exponent == y->exponent && ast_equal(x->a, y->a);
    default: break;
  }
  return ast_equal(x->a, y->a) && ast_equal(x->b, y->b);
}

/// Highest variable index referenced (1-based count), 0 if none.
inline int max_variable(const NodePtr& n) {
  if (!n) return 0;
  int m = n->kind == NodeKind::Variable ? n->var_index + 1 : 0;
  return std::max({m, max_variable(n->a), max_variable(n->b)});
}

inline void collect_parameters(const NodePtr& n, std::vector<std::string>& out) {
  if (!n) return;
  if (n->kind == NodeKind::Parameter) out.push_back(n->name);
  collect_parameters(n->a, out);
  collect_parameters(n->b, out);
}

/// Two-point type lattice used to decide whether an expression is
/// guaranteed real-valued: re/im/abs2 produce reals, and real-coefficient
/// combinations of reals stay real. Anything touching z_j or `i` outside
/// those builtins is typed complex.
inline bool is_real_typed(const NodePtr& n) {
  switch (n->kind) {
    case NodeKind::Constant:
    case NodeKind::Parameter:
    case NodeKind::Re:
    case NodeKind::Im:
    case NodeKind::Abs2: return true;
    case NodeKind::ImagUnit:
    case NodeKind::Variable: return false;
    case NodeKind::Negate:
    case NodeKind::Conj: return is_real_typed(n->a);
    case NodeKind::Pow: return is_real_typed(n->a);
    default: return is_real_typed(n->a) && is_real_typed(n->b);
  }
}

namespace detail {

inline int precedence(NodeKind k) {
  switch (k) {
    case NodeKind::Add:
    case NodeKind::Sub: return 1;
    case NodeKind::Mul:
    case NodeKind::Div: return 2;
    case NodeKind::Negate: return 3;
    case NodeKind::Pow: return 4;
    default: return 5;
  }
}

inline std::string format_number(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline void serialize_rec(const NodePtr& n, std::string& out, int parent_prec, bool right_operand) {
  int prec = precedence(n->kind);
  bool need_paren = prec < parent_prec ||
                    (prec == parent_prec && right_operand &&
                     (n->kind == NodeKind::Sub || n->kind == NodeKind::Add ||
                      n->kind == NodeKind::Div || n->kind == NodeKind::Mul));
  if (need_paren) out += '(';
  switch (n->kind) {
    case NodeKind::Constant: out += format_number(n->number); break;
    case NodeKind::ImagUnit: out += 'i'; break;
    case NodeKind::Parameter: out += n->name; break;
    case NodeKind::Variable:
      out += 'z';
      out += std::to_string(n->var_index + 1);
      break;
    case NodeKind::Negate:
      out += '-';
      serialize_rec(n->a, out, prec, true);
      break;
    case NodeKind::Add:
    case NodeKind::Sub:
    case NodeKind::Mul:
    case NodeKind::Div:
      serialize_rec(n->a, out, prec, false);
      out += (n->kind == NodeKind::Add ? " + " : n->kind == NodeKind::Sub ? " - "
              : n->kind == NodeKind::Mul ? "*" : "/");
      serialize_rec(n->b, out, prec, true);
      break;
    case NodeKind::Pow:
      serialize_rec(n->a, out, prec + 1, false);
      out += '^';
      out += std::to_string(n->exponent);
      break;
    case NodeKind::Re:
    case NodeKind::Im:
    case NodeKind::Abs2:
    case NodeKind::Conj:
      out += (n->kind == NodeKind::Re ? "re" : n->kind == NodeKind::Im ? "im"
              : n->kind == NodeKind::Abs2 ? "abs2" : "conj");
      out += '(';
      serialize_rec(n->a, out, 0, false);
      out += ')';
      break;
  }
  if (need_paren) out += ')';
}

struct Token {
  enum Type { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End } type;
  double number = 0;
  std::string text;
  int line = 1, col = 1;
};

class Lexer {
public:
  Lexer(const std::string& src, int first_line) : src_(src), line_(first_line) {}

  Token next() {
    skip_ws();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= src_.size()) {
      t.type = Token::End;
      return t;
    }
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) advance();
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        size_t save = pos_;
        advance();
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
        if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        } else {
          pos_ = save;  // not an exponent; `e` starts an identifier
        }
      }
      std::string text = src_.substr(start, pos_ - start);
      double value = 0;
      auto res = std::from_chars(text.data(), text.data() + text.size(), value);
      if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw ParseError("invalid number literal '" + text + "'", t.line, t.col);
      t.type = Token::Number;
      t.number = value;
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        advance();
      t.type = Token::Ident;
      t.text = src_.substr(start, pos_ - start);
      return t;
    }
    advance();
    switch (c) {
      case '+': t.type = Token::Plus; return t;
      case '-': t.type = Token::Minus; return t;
      case '*': t.type = Token::Star; return t;
      case '/': t.type = Token::Slash; return t;
      case '^': t.type = Token::Caret; return t;
      case '(': t.type = Token::LParen; return t;
      case ')': t.type = Token::RParen; return t;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", t.line, t.col);
  }

private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  void skip_ws() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        break;
      }
    }
  }
  const std::string& src_;
  size_t pos_ = 0;
  int line_;
  int col_ = 1;
};

class Parser {
public:
  Parser(const std::string& src, const std::vector<std::string>& params, int first_line)
      : lexer_(src, first_line), params_(params) {
    cur_ = lexer_.next();
  }

  NodePtr parse_expression_then_end() {
    NodePtr e = parse_sum();
    if (cur_.type != Token::End)
      throw ParseError("unexpected trailing input '" + describe(cur_) + "'", cur_.line, cur_.col);
    return e;
  }

private:
  static std::string describe(const Token& t) {
    switch (t.type) {
      case Token::Number: return "number";
      case Token::Ident: return t.text;
      case Token::Plus: return "+";
      case Token::Minus: return "-";
      case Token::Star: return "*";
      case Token::Slash: return "/";
      case Token::Caret: return "^";
      case Token::LParen: return "(";
      case Token::RParen: return ")";
      case Token::End: return "end of input";
    }
    return "?";
  }

  void bump() { cur_ = lexer_.next(); }

  void expect(Token::Type type, const char* what) {
    if (cur_.type != type)
      throw ParseError(std::string("expected ") + what + ", found '" + describe(cur_) + "'",
                       cur_.line, cur_.col);
    bump();
  }

  NodePtr parse_sum() {
    NodePtr lhs = parse_term();
    while (cur_.type == Token::Plus || cur_.type == Token::Minus) {
      NodeKind k = cur_.type == Token::Plus ? NodeKind::Add : NodeKind::Sub;
      bump();
      lhs = make_binary(k, std::move(lhs), parse_term());
    }
    return lhs;
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    while (cur_.type == Token::Star || cur_.type == Token::Slash) {
      NodeKind k = cur_.type == Token::Star ? NodeKind::Mul : NodeKind::Div;
      bump();
      lhs = make_binary(k, std::move(lhs), parse_factor());
    }
    return lhs;
  }

  NodePtr parse_factor() {
    if (cur_.type == Token::Minus) {
      bump();
      return make_unary(NodeKind::Negate, parse_factor());
    }
    if (cur_.type == Token::Plus) {
      bump();
      return parse_factor();
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (cur_.type == Token::Caret) {
      bump();
      int sign = 1;
      if (cur_.type == Token::Minus) {
        sign = -1;
        bump();
      }
      if (cur_.type != Token::Number || cur_.number != std::floor(cur_.number))
        throw ParseError("exponent must be an integer literal", cur_.line, cur_.col);
      int e = sign * static_cast<int>(cur_.number);
      bump();
      return make_pow(std::move(base), e);
    }
    return base;
  }

  NodePtr parse_atom() {
    Token t = cur_;
    switch (t.type) {
      case Token::Number:
        bump();
        return make_const(t.number);
      case Token::LParen: {
        bump();
        NodePtr e = parse_sum();
        expect(Token::RParen, "')'");
        return e;
      }
      case Token::Ident: {
        bump();
        const std::string& id = t.text;
        if (id == "i") return make_imag();
        if (id == "re" || id == "im" || id == "abs2" || id == "conj") {
          expect(Token::LParen, "'('");
          NodePtr arg = parse_sum();
          expect(Token::RParen, "')'");
          NodeKind k = id == "re" ? NodeKind::Re : id == "im" ? NodeKind::Im
                       : id == "abs2" ? NodeKind::Abs2 : NodeKind::Conj;
          return make_unary(k, std::move(arg));
        }
        if (id.size() >= 2 && id[0] == 'z') {
          bool digits = true;
          for (size_t k = 1; k < id.size(); ++k)
            if (!std::isdigit(static_cast<unsigned char>(id[k]))) digits = false;
          if (digits) {
            int j = std::stoi(id.substr(1));
            if (j < 1) throw ParseError("variable index must be >= 1", t.line, t.col);
            return make_var(j - 1);
          }
        }
        for (const std::string& p : params_)
          if (p == id) return make_param(id);
        throw ParseError("unknown identifier '" + id + "'", t.line, t.col);
      }
      default:
        throw ParseError("expected an operand, found '" + describe(t) + "'", t.line, t.col);
    }
  }

  Lexer lexer_;
  Token cur_;
  std::vector<std::string> params_;
};

}  // namespace detail

/// Canonical text form; `parse_expression(serialize(t))` rebuilds an
/// identical tree.
inline std::string serialize(const NodePtr& n) {
  std::string out;
  detail::serialize_rec(n, out, 0, false);
  return out;
}

/// Parse a single expression. `params` lists the identifiers that are bound
/// parameters; anything else alphabetic is rejected as unknown.
inline NodePtr parse_expression(const std::string& text,
                                const std::vector<std::string>& params = {},
                                int first_line = 1) {
  detail::Parser p(text, params, first_line);
  return p.parse_expression_then_end();
}

}  // namespace levikit::expr
