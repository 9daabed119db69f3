#include <array>

#include "bnras/model_io.hpp"
#include "builtin_sources.hpp"

namespace bnras {

std::optional<std::string_view> builtin_source(std::string_view name) {
  for (const auto& entry : detail::kBuiltinSources) {
    if (entry.name == name) return entry.text;
  }
  return std::nullopt;
}

std::map<std::string, BeliefNetwork> builtin_networks() {
  std::map<std::string, BeliefNetwork> out;
  for (const auto& entry : detail::kBuiltinSources) {
    out.emplace(std::string(entry.name), parse_network(entry.text));
  }
  return out;
}

BeliefNetwork builtin_network(std::string_view name) {
  if (auto text = builtin_source(name)) return parse_network(*text);
  throw ValidationError("no bundled network named '" + std::string(name) + "'");
}

}  // namespace bnras
