#ifndef BDP_EXPR_HPP
#define BDP_EXPR_HPP

// Small arithmetic expression language for rate/reward functions of the
// state index n.  Supported: numeric literals, the variable `n`, named
// parameters bound at parse time, + - * / ^, min(x,y), max(x,y), parens.
// `^` binds tightest; all binary operators are left-associative.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace bdp {

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

class EvalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {

enum class ExprOp { kConst, kVar, kAdd, kSub, kMul, kDiv, kPow, kMin, kMax };

struct ExprNode {
  ExprOp op;
  double value = 0.0;        // kConst (literals and bound parameters)
  std::string name;          // parameter name, kept for unparsing
  std::unique_ptr<ExprNode> lhs, rhs;
};

}  // namespace detail

// Parsed rate expression with all parameters already bound to numbers.
class RateExpr {
public:
  RateExpr() = default;

  double eval(std::int64_t n) const {
    if (!root_) throw EvalError("empty expression");
    return eval_node(*root_, static_cast<double>(n));
  }

  // Canonical fully-parenthesized rendering; parse(unparse(e)) == e.
  std::string unparse() const { return root_ ? unparse_node(*root_) : ""; }

  const std::string& source() const { return source_; }

  friend RateExpr parse_rate_expr(const std::string& source,
                                  const std::map<std::string, double>& params);

private:
  static double eval_node(const detail::ExprNode& e, double n) {
    using detail::ExprOp;
    switch (e.op) {
      case ExprOp::kConst: return e.value;
      case ExprOp::kVar: return n;
      case ExprOp::kAdd: return eval_node(*e.lhs, n) + eval_node(*e.rhs, n);
      case ExprOp::kSub: return eval_node(*e.lhs, n) - eval_node(*e.rhs, n);
      case ExprOp::kMul: return eval_node(*e.lhs, n) * eval_node(*e.rhs, n);
      case ExprOp::kDiv: {
        const double d = eval_node(*e.rhs, n);
        if (d == 0.0) throw EvalError("division by zero in rate expression");
        return eval_node(*e.lhs, n) / d;
      }
      case ExprOp::kPow: {
        const double r = std::pow(eval_node(*e.lhs, n), eval_node(*e.rhs, n));
        if (!std::isfinite(r)) throw EvalError("non-finite power in rate expression");
        return r;
      }
      case ExprOp::kMin: return std::fmin(eval_node(*e.lhs, n), eval_node(*e.rhs, n));
      case ExprOp::kMax: return std::fmax(eval_node(*e.lhs, n), eval_node(*e.rhs, n));
    }
    throw EvalError("corrupt expression node");
  }

  static std::string unparse_node(const detail::ExprNode& e) {
    using detail::ExprOp;
    switch (e.op) {
      case ExprOp::kConst: {
        if (!e.name.empty()) return e.name;
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", e.value);
        return buf;
      }
      case ExprOp::kVar: return "n";
      case ExprOp::kAdd: return "(" + unparse_node(*e.lhs) + "+" + unparse_node(*e.rhs) + ")";
      case ExprOp::kSub: return "(" + unparse_node(*e.lhs) + "-" + unparse_node(*e.rhs) + ")";
      case ExprOp::kMul: return "(" + unparse_node(*e.lhs) + "*" + unparse_node(*e.rhs) + ")";
      case ExprOp::kDiv: return "(" + unparse_node(*e.lhs) + "/" + unparse_node(*e.rhs) + ")";
      case ExprOp::kPow: return "(" + unparse_node(*e.lhs) + "^" + unparse_node(*e.rhs) + ")";
      case ExprOp::kMin: return "min(" + unparse_node(*e.lhs) + "," + unparse_node(*e.rhs) + ")";
      case ExprOp::kMax: return "max(" + unparse_node(*e.lhs) + "," + unparse_node(*e.rhs) + ")";
    }
    return "";
  }

  std::shared_ptr<detail::ExprNode> root_;
  std::string source_;
};

namespace detail {

class ExprParser {
public:
  ExprParser(const std::string& src, const std::map<std::string, double>& params)
      : src_(src), params_(params) {}

  std::unique_ptr<ExprNode> parse() {
    auto e = parse_sum();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError("unexpected token", pos_);
    return e;
  }

private:
  std::unique_ptr<ExprNode> parse_sum() {
    auto lhs = parse_product();
    for (;;) {
      skip_ws();
      if (accept('+')) lhs = binary(ExprOp::kAdd, std::move(lhs), parse_product());
      else if (accept('-')) lhs = binary(ExprOp::kSub, std::move(lhs), parse_product());
      else return lhs;
    }
  }

  std::unique_ptr<ExprNode> parse_product() {
    auto lhs = parse_power();
    for (;;) {
      skip_ws();
      if (accept('*')) lhs = binary(ExprOp::kMul, std::move(lhs), parse_power());
      else if (accept('/')) lhs = binary(ExprOp::kDiv, std::move(lhs), parse_power());
      else return lhs;
    }
  }

  std::unique_ptr<ExprNode> parse_power() {
    auto lhs = parse_primary();
    for (;;) {
      skip_ws();
      if (accept('^')) lhs = binary(ExprOp::kPow, std::move(lhs), parse_primary());
      else return lhs;
    }
  }

  std::unique_ptr<ExprNode> parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of expression", pos_);
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = parse_sum();
      skip_ws();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  std::unique_ptr<ExprNode> parse_number() {
    std::size_t start = pos_;
    std::size_t consumed = 0;
    double v;
    try {
      v = std::stod(src_.substr(start), &consumed);
    } catch (const std::exception&) {
      throw ParseError("malformed number", start);
    }
    pos_ = start + consumed;
    auto node = std::make_unique<ExprNode>();
    node->op = ExprOp::kConst;
    node->value = v;
    return node;
  }

  std::unique_ptr<ExprNode> parse_ident() {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string id = src_.substr(start, pos_ - start);
    if (id == "min" || id == "max") return parse_call(id, start);
    if (id == "n") {
      auto node = std::make_unique<ExprNode>();
      node->op = ExprOp::kVar;
      return node;
    }
    auto it = params_.find(id);
    if (it == params_.end()) throw ParseError("unknown identifier '" + id + "'", start);
    auto node = std::make_unique<ExprNode>();
    node->op = ExprOp::kConst;
    node->value = it->second;
    node->name = id;
    return node;
  }

  std::unique_ptr<ExprNode> parse_call(const std::string& fn, std::size_t start) {
    skip_ws();
    if (!accept('(')) throw ParseError("expected '(' after " + fn, pos_);
    std::vector<std::unique_ptr<ExprNode>> args;
    args.push_back(parse_sum());
    skip_ws();
    while (accept(',')) {
      args.push_back(parse_sum());
      skip_ws();
    }
    if (!accept(')')) throw ParseError("expected ')'", pos_);
    if (args.size() != 2)
      throw ParseError(fn + " takes exactly 2 arguments, got " + std::to_string(args.size()),
                       start);
    return binary(fn == "min" ? ExprOp::kMin : ExprOp::kMax, std::move(args[0]),
                  std::move(args[1]));
  }

  static std::unique_ptr<ExprNode> binary(ExprOp op, std::unique_ptr<ExprNode> l,
                                          std::unique_ptr<ExprNode> r) {
    auto node = std::make_unique<ExprNode>();
    node->op = op;
    node->lhs = std::move(l);
    node->rhs = std::move(r);
    return node;
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  const std::string& src_;
  const std::map<std::string, double>& params_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline RateExpr parse_rate_expr(const std::string& source,
                                const std::map<std::string, double>& params) {
  if (source.empty()) throw ParseError("empty expression", 0);
  detail::ExprParser p(source, params);
  RateExpr e;
  e.root_ = std::shared_ptr<detail::ExprNode>(p.parse().release());
  e.source_ = source;
  return e;
}

}  // namespace bdp

#endif  // BDP_EXPR_HPP
