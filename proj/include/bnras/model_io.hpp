#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bnras/error.hpp"
#include "bnras/network.hpp"

namespace bnras {

struct Diagnostic {
  std::size_t line = 0;
  std::size_t column = 0;
  std::string message;

  std::string to_string() const;
};

/// Result of parsing a `.bn` document. `network` is set iff there are no
/// diagnostics, in which case it passes every structural check.
struct NetworkDocument {
  std::string source;
  std::optional<BeliefNetwork> network;
  std::vector<Diagnostic> diagnostics;

  bool ok() const noexcept { return diagnostics.empty() && network.has_value(); }
};

/// Never throws on malformed input; problems land in `diagnostics`.
NetworkDocument parse_document(std::string_view text);

/// Throws ParseError carrying the first diagnostic.
BeliefNetwork parse_network(std::string_view text);

/// Canonical text: node blocks in declaration order, each followed by its
/// parents line (if any) and CPT, probabilities with 17 significant digits.
std::string serialize_network(const BeliefNetwork& net);

/// `Name=outcome(,Name=outcome)*`; the empty string is empty evidence.
/// Throws ValidationError on unknown node or label, duplicates, or bad syntax.
Evidence parse_evidence(std::string_view spec, const BeliefNetwork& net);

/// Inverse of parse_evidence.
std::string format_evidence(const Evidence& ev, const BeliefNetwork& net);

/// Reads and parses a file. Throws IoError if unreadable, ParseError if
/// malformed.
BeliefNetwork load_network_file(const std::filesystem::path& path);

class IoError : public Error {
 public:
  using Error::Error;
};

/// Source text of a bundled network, if `name` is one.
std::optional<std::string_view> builtin_source(std::string_view name);

/// AB, PATH2, CHAIN5, MINIALARM.
std::map<std::string, BeliefNetwork> builtin_networks();

/// Throws ValidationError for an unknown name.
BeliefNetwork builtin_network(std::string_view name);

}  // namespace bnras
