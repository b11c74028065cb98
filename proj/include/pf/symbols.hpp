#pragma once

#include "pf/phase_space.hpp"

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

namespace pf {

using SymbolEval = std::function<std::complex<double>(const PhasePoint&)>;

struct SymbolPreset {
  std::string name;
  SymbolEval evaluator;
  enum class ClassExpectation { in, out, unknown };
  ClassExpectation expectation = ClassExpectation::unknown;
};

// Built-in battery entries: "const1", "sinsin", "chirp", "gauss", "jb_xi",
// "jb_xi_inv".
SymbolPreset symbol_preset(const std::string& name);

struct SymbolParseError : std::runtime_error {
  std::size_t position;
  SymbolParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg), position(pos) {}
};

// Expression over x, xi with + - * / ^, sin, cos, exp, jb(.) = (1+.^2)^{1/2},
// constants pi and i. Total evaluator over R^2.
SymbolPreset symbol_parse(const std::string& expr);

}  // namespace pf
