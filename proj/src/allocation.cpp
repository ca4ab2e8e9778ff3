#include "jscc/allocation.hpp"

#include <charconv>

namespace jscc {

std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::UpperBound: return "ub";
    case Scheme::SingleLayer: return "single";
    case Scheme::LS: return "ls";
    case Scheme::HLS: return "hls";
    case Scheme::BS: return "bs";
  }
  return "?";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  for (Scheme s : {Scheme::UpperBound, Scheme::SingleLayer, Scheme::LS, Scheme::HLS, Scheme::BS}) {
    if (scheme_name(s) == name) return s;
  }
  return std::nullopt;
}

std::optional<LayerCount> LayerCount::parse(std::string_view text) {
  if (text == "inf") return infinite();
  int n = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
  if (ec != std::errc() || end != text.data() + text.size() || n < 0) return std::nullopt;
  return finite(n);
}

std::string LayerCount::to_string() const { return is_infinite() ? "inf" : std::to_string(n_); }

}  // namespace jscc
