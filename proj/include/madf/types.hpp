#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace madf {

/// Time is measured in integer units (clock cycles).
using Time = std::int64_t;
using ActorId = std::string;
using ModeId = std::string;

/// Exact utilization arithmetic. Reports never print floating point.
using Rational = boost::rational<std::int64_t>;

/// "a/b", or "a" when the denominator is one.
std::string to_string(const Rational& r);
/// Inverse of to_string; throws ParseError on malformed input.
Rational parse_rational(const std::string& text);

template <class V>
using ActorMap = std::map<ActorId, V>;

class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

/// Malformed input files.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error("parse", what), line_(line), column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Structurally invalid graph, unknown mode, unbound parameter, ...
class ModelError : public Error {
 public:
  ModelError(std::string kind, const std::string& what) : Error(std::move(kind), what) {}
};

/// Inconsistent graph, deadlock, overload, unsupported structure.
class AnalysisError : public Error {
 public:
  AnalysisError(std::string kind, const std::string& what) : Error(std::move(kind), what) {}
};

inline Time ceil_div(Time a, Time b) {
  // b > 0
  return a >= 0 ? (a + b - 1) / b : -((-a) / b);
}

}  // namespace madf
