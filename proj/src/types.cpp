#include "madf/types.hpp"

#include <charconv>

namespace madf {

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace {

std::int64_t parse_int(std::string_view text, const std::string& whole) {
  std::int64_t v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end)
    throw ParseError("malformed rational '" + whole + "'");
  return v;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(parse_int(text, text));
  const auto num = parse_int(std::string_view(text).substr(0, slash), text);
  const auto den = parse_int(std::string_view(text).substr(slash + 1), text);
  if (den <= 0) throw ParseError("malformed rational '" + text + "'");
  return Rational(num, den);
}

}  // namespace madf
