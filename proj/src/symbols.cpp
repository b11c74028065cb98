#include "pf/symbols.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

namespace pf {

namespace {

using C = std::complex<double>;

SymbolEval constant(C v) {
  return [v](const PhasePoint&) { return v; };
}

}  // namespace

SymbolPreset symbol_preset(const std::string& name) {
  SymbolPreset p;
  p.name = name;
  using E = SymbolPreset::ClassExpectation;
  if (name == "const1") {
    p.evaluator = constant(1.0);
    p.expectation = E::in;
  } else if (name == "sinsin") {
    p.evaluator = [](const PhasePoint& P) {
      return C(std::sin(P.x[0]) * std::sin(P.xi[0]));
    };
    p.expectation = E::in;
  } else if (name == "chirp") {
    p.evaluator = [](const PhasePoint& P) {
      return std::polar(1.0, std::numbers::pi * P.x[0] * P.xi[0]);
    };
    p.expectation = E::out;
  } else if (name == "gauss") {
    p.evaluator = [](const PhasePoint& P) {
      return C(std::exp(-std::numbers::pi * (P.x[0] * P.x[0] + P.xi[0] * P.xi[0])));
    };
    p.expectation = E::in;
  } else if (name == "jb_xi") {
    p.evaluator = [](const PhasePoint& P) { return C(std::sqrt(1.0 + P.xi[0] * P.xi[0])); };
    p.expectation = E::unknown;  // in S(<xi>,g); out against M == 1
  } else if (name == "jb_xi_inv") {
    p.evaluator = [](const PhasePoint& P) {
      return C(1.0 / std::sqrt(1.0 + P.xi[0] * P.xi[0]));
    };
    p.expectation = E::in;
  } else {
    throw std::invalid_argument("unknown symbol preset: " + name);
  }
  return p;
}

// --- recursive-descent expression parser -------------------------------------

namespace {

class Parser {
 public:
  explicit Parser(const std::string& src) : src_(src) {}

  SymbolEval parse() {
    auto e = expression();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  const std::string& src_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw SymbolParseError(what + " at position " + std::to_string(pos_), pos_);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  SymbolEval expression() {
    auto lhs = term();
    while (true) {
      if (consume('+')) {
        auto rhs = term();
        lhs = [lhs, rhs](const PhasePoint& P) { return lhs(P) + rhs(P); };
      } else if (consume('-')) {
        auto rhs = term();
        lhs = [lhs, rhs](const PhasePoint& P) { return lhs(P) - rhs(P); };
      } else {
        return lhs;
      }
    }
  }

  SymbolEval term() {
    auto lhs = unary();
    while (true) {
      if (consume('*')) {
        auto rhs = unary();
        lhs = [lhs, rhs](const PhasePoint& P) { return lhs(P) * rhs(P); };
      } else if (consume('/')) {
        auto rhs = unary();
        lhs = [lhs, rhs](const PhasePoint& P) { return lhs(P) / rhs(P); };
      } else {
        return lhs;
      }
    }
  }

  SymbolEval unary() {
    if (consume('-')) {
      auto e = unary();
      return [e](const PhasePoint& P) { return -e(P); };
    }
    return power();
  }

  SymbolEval power() {
    auto base = primary();
    if (consume('^')) {
      auto expo = unary();
      return [base, expo](const PhasePoint& P) { return std::pow(base(P), expo(P)); };
    }
    return base;
  }

  SymbolEval primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of expression");
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    if (consume('(')) {
      auto e = expression();
      if (!consume(')')) fail("expected ')'");
      return e;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  SymbolEval number() {
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(src_.substr(pos_), &used);
    } catch (const std::exception&) {
      fail("malformed number");
    }
    pos_ += used;
    return constant(v);
  }

  SymbolEval identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string name = src_.substr(start, pos_ - start);
    if (name == "x") return [](const PhasePoint& P) { return C(P.x[0]); };
    if (name == "xi") return [](const PhasePoint& P) { return C(P.xi[0]); };
    if (name == "pi") return constant(std::numbers::pi);
    if (name == "i") return constant(C(0.0, 1.0));
    if (name == "sin" || name == "cos" || name == "exp" || name == "jb") {
      if (!consume('(')) fail("expected '(' after function " + name);
      auto arg = expression();
      if (!consume(')')) fail("expected ')'");
      if (name == "sin")
        return [arg](const PhasePoint& P) { return std::sin(arg(P)); };
      if (name == "cos")
        return [arg](const PhasePoint& P) { return std::cos(arg(P)); };
      if (name == "exp")
        return [arg](const PhasePoint& P) { return std::exp(arg(P)); };
      return [arg](const PhasePoint& P) { return std::sqrt(1.0 + arg(P) * arg(P)); };
    }
    pos_ = start;
    fail("unknown identifier '" + name + "'");
  }
};

}  // namespace

SymbolPreset symbol_parse(const std::string& expr) {
  SymbolPreset p;
  p.name = expr;
  p.evaluator = Parser(expr).parse();
  p.expectation = SymbolPreset::ClassExpectation::unknown;
  return p;
}

}  // namespace pf
