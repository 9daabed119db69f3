#include "bnras/model_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace bnras {

std::string Diagnostic::to_string() const {
  return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
}

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
            message),
      line_(line),
      column_(column),
      message_(message) {}

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { kIdent, kNumber, kLBrace, kRBrace, kColon, kComma, kEnd, kInvalid };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  double number = 0.0;
  std::size_t line = 1;
  std::size_t column = 1;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool number_start(char c) {
  return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+';
}
bool number_char(char c) {
  return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+' ||
         c == 'e' || c == 'E';
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space_and_comments();
    Token tok;
    tok.line = line_;
    tok.column = column_;
    if (pos_ >= text_.size()) return tok;
    const char c = text_[pos_];
    if (ident_start(c)) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && ident_char(text_[pos_])) advance();
      tok.kind = Tok::kIdent;
      tok.text = std::string(text_.substr(start, pos_ - start));
      return tok;
    }
    if (number_start(c)) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && number_char(text_[pos_])) advance();
      tok.text = std::string(text_.substr(start, pos_ - start));
      const char* first = tok.text.data();
      const char* last = first + tok.text.size();
      if (*first == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, last, tok.number);
      tok.kind = (ec == std::errc() && ptr == last) ? Tok::kNumber : Tok::kInvalid;
      return tok;
    }
    advance();
    tok.text = std::string(1, c);
    switch (c) {
      case '{': tok.kind = Tok::kLBrace; break;
      case '}': tok.kind = Tok::kRBrace; break;
      case ':': tok.kind = Tok::kColon; break;
      case ',': tok.kind = Tok::kComma; break;
      default: tok.kind = Tok::kInvalid; break;
    }
    return tok;
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

std::string describe(const Token& tok) {
  switch (tok.kind) {
    case Tok::kEnd: return "end of input";
    case Tok::kNumber: return "number '" + tok.text + "'";
    case Tok::kIdent: return "identifier '" + tok.text + "'";
    case Tok::kInvalid:
      return tok.text.size() == 1 ? "unexpected character '" + tok.text + "'"
                                  : "malformed token '" + tok.text + "'";
    default: return "'" + tok.text + "'";
  }
}

// ---------------------------------------------------------------------------
// Parser: syntax pass builds declarations, semantic pass resolves them.

struct Located {
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;
};

struct NodeDecl {
  Located name;
  std::vector<Located> outcomes;
};

struct ParentsDecl {
  Located node;
  std::vector<Located> parents;
};

struct CptDecl {
  Located node;
  std::vector<double> numbers;
};

struct SyntaxAbort {
  Diagnostic diagnostic;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { tok_ = lexer_.next(); }

  void parse() {
    if (tok_.kind == Tok::kEnd) fail(tok_, "no network declared");
    if (!(tok_.kind == Tok::kIdent && tok_.text == "network")) {
      fail(tok_, "no network declared: expected 'network', found " + describe(tok_));
    }
    advance();
    network_name_ = expect_ident("network name").text;
    while (tok_.kind != Tok::kEnd) {
      if (tok_.kind == Tok::kIdent && tok_.text == "node") {
        parse_node();
      } else if (tok_.kind == Tok::kIdent && tok_.text == "parents") {
        parse_parents();
      } else if (tok_.kind == Tok::kIdent && tok_.text == "cpt") {
        parse_cpt();
      } else {
        fail(tok_, "expected 'node', 'parents' or 'cpt', found " + describe(tok_));
      }
    }
  }

  std::string network_name_;
  std::vector<NodeDecl> nodes_;
  std::vector<ParentsDecl> parents_;
  std::vector<CptDecl> cpts_;

 private:
  [[noreturn]] void fail(const Token& at, const std::string& message) {
    throw SyntaxAbort{{at.line, at.column, message}};
  }

  void advance() { tok_ = lexer_.next(); }

  Located expect_ident(const char* what) {
    if (tok_.kind != Tok::kIdent) fail(tok_, std::string("expected ") + what + ", found " + describe(tok_));
    Located out{tok_.text, tok_.line, tok_.column};
    advance();
    return out;
  }

  void expect(Tok kind, const char* what) {
    if (tok_.kind != kind) fail(tok_, std::string("expected ") + what + ", found " + describe(tok_));
    advance();
  }

  void parse_node() {
    advance();
    NodeDecl decl;
    decl.name = expect_ident("node name");
    expect(Tok::kLBrace, "'{'");
    const Token key = tok_;
    if (!(tok_.kind == Tok::kIdent && tok_.text == "outcomes")) {
      fail(tok_, "expected 'outcomes:', found " + describe(tok_));
    }
    advance();
    expect(Tok::kColon, "':' after 'outcomes'");
    decl.outcomes.push_back(expect_ident("outcome label"));
    while (tok_.kind == Tok::kComma) {
      advance();
      decl.outcomes.push_back(expect_ident("outcome label"));
    }
    if (decl.outcomes.size() < 2) fail(key, "node '" + decl.name.text + "' needs at least two outcomes");
    expect(Tok::kRBrace, "',' or '}'");
    nodes_.push_back(std::move(decl));
  }

  void parse_parents() {
    advance();
    ParentsDecl decl;
    decl.node = expect_ident("node name");
    expect(Tok::kColon, "':'");
    decl.parents.push_back(expect_ident("parent name"));
    while (tok_.kind == Tok::kComma) {
      advance();
      decl.parents.push_back(expect_ident("parent name"));
    }
    parents_.push_back(std::move(decl));
  }

  void parse_cpt() {
    advance();
    CptDecl decl;
    decl.node = expect_ident("node name");
    expect(Tok::kColon, "':'");
    if (tok_.kind != Tok::kNumber) fail(tok_, "expected probability, found " + describe(tok_));
    while (tok_.kind == Tok::kNumber) {
      decl.numbers.push_back(tok_.number);
      advance();
    }
    if (tok_.kind == Tok::kInvalid) fail(tok_, describe(tok_));
    cpts_.push_back(std::move(decl));
  }

  Lexer lexer_;
  Token tok_;
};

void resolve(const Parser& p, NetworkDocument& doc) {
  auto& diags = doc.diagnostics;
  auto report = [&](const Located& at, std::string message) {
    diags.push_back({at.line, at.column, std::move(message)});
  };

  std::unordered_map<std::string, NodeIndex> index;
  for (const auto& decl : p.nodes_) {
    if (!index.emplace(decl.name.text, index.size()).second) {
      report(decl.name, "node '" + decl.name.text + "' declared twice");
    }
  }
  if (!diags.empty()) return;

  std::vector<Node> nodes(p.nodes_.size());
  std::vector<const ParentsDecl*> parents_of(nodes.size(), nullptr);
  std::vector<const CptDecl*> cpt_of(nodes.size(), nullptr);

  for (std::size_t i = 0; i < p.nodes_.size(); ++i) {
    nodes[i].name = p.nodes_[i].name.text;
    for (const auto& label : p.nodes_[i].outcomes) {
      if (std::find(nodes[i].outcomes.begin(), nodes[i].outcomes.end(), label.text) !=
          nodes[i].outcomes.end()) {
        report(label, "node '" + nodes[i].name + "' repeats outcome '" + label.text + "'");
      }
      nodes[i].outcomes.push_back(label.text);
    }
  }

  for (const auto& decl : p.parents_) {
    auto it = index.find(decl.node.text);
    if (it == index.end()) {
      report(decl.node, "parents declared for unknown node '" + decl.node.text + "'");
      continue;
    }
    if (parents_of[it->second] != nullptr) {
      report(decl.node, "parents of '" + decl.node.text + "' declared twice");
      continue;
    }
    parents_of[it->second] = &decl;
    auto& node = nodes[it->second];
    for (const auto& parent : decl.parents) {
      auto pit = index.find(parent.text);
      if (pit == index.end()) {
        report(parent, "unknown parent '" + parent.text + "' of node '" + node.name + "'");
      } else if (std::find(node.parents.begin(), node.parents.end(), pit->second) !=
                 node.parents.end()) {
        report(parent, "node '" + node.name + "' lists parent '" + parent.text + "' twice");
      } else if (pit->second == it->second) {
        report(parent, "node '" + node.name + "' cannot be its own parent");
      } else {
        node.parents.push_back(pit->second);
      }
    }
  }

  for (const auto& decl : p.cpts_) {
    auto it = index.find(decl.node.text);
    if (it == index.end()) {
      report(decl.node, "cpt declared for unknown node '" + decl.node.text + "'");
    } else if (cpt_of[it->second] != nullptr) {
      report(decl.node, "cpt of '" + decl.node.text + "' declared twice");
    } else {
      cpt_of[it->second] = &decl;
    }
  }
  if (!diags.empty()) return;

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto& node = nodes[i];
    const auto& nd = p.nodes_[i];
    const CptDecl* cpt = cpt_of[i];
    if (cpt == nullptr) {
      report(nd.name, "node '" + node.name + "' has no cpt");
      continue;
    }
    std::size_t rows = 1;
    for (NodeIndex parent : node.parents) rows *= nodes[parent].outcomes.size();
    const std::size_t k = node.outcomes.size();
    if (cpt->numbers.size() != rows * k) {
      std::ostringstream msg;
      msg << "cpt of '" << node.name << "' has " << cpt->numbers.size() << " entries, expected "
          << rows << " rows of " << k << " (" << rows * k << ")";
      report(cpt->node, msg.str());
      continue;
    }
    for (std::size_t r = 0; r < rows; ++r) {
      double sum = 0.0;
      bool in_range = true;
      for (std::size_t v = 0; v < k; ++v) {
        const double x = cpt->numbers[r * k + v];
        if (!(x >= 0.0 && x <= 1.0)) in_range = false;
        sum += x;
      }
      if (!in_range) {
        report(cpt->node, "cpt of '" + node.name + "' row " + std::to_string(r) +
                              " has an entry outside [0, 1]");
      } else if (!(std::abs(sum - 1.0) <= kRowSumTolerance)) {
        report(cpt->node, "cpt of '" + node.name + "' row " + std::to_string(r) + " sums to " +
                              shortest_decimal(sum));
      }
    }
    node.cpt = Cpt(k, cpt->numbers);
  }
  if (!diags.empty()) return;

  BeliefNetwork net(p.network_name_, std::move(nodes));
  const auto& rep = net.report();
  if (!rep.usable()) {
    for (const auto& issue : rep.issues) {
      std::size_t line = 1;
      std::size_t column = 1;
      if (auto i = net.find(issue.node)) {
        const Located& at = parents_of[*i] ? parents_of[*i]->node : p.nodes_[*i].name;
        line = at.line;
        column = at.column;
      } else if (!p.parents_.empty()) {
        line = p.parents_.front().node.line;
        column = p.parents_.front().node.column;
      }
      diags.push_back({line, column, issue.message});
    }
    return;
  }
  doc.network = std::move(net);
}

std::string format_probability(double p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", p);
  return buf;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

NetworkDocument parse_document(std::string_view text) {
  NetworkDocument doc;
  doc.source = std::string(text);
  Parser parser(text);
  try {
    parser.parse();
  } catch (const SyntaxAbort& abort) {
    doc.diagnostics.push_back(abort.diagnostic);
    return doc;
  }
  resolve(parser, doc);
  return doc;
}

BeliefNetwork parse_network(std::string_view text) {
  NetworkDocument doc = parse_document(text);
  if (!doc.diagnostics.empty()) {
    const auto& d = doc.diagnostics.front();
    throw ParseError(d.line, d.column, d.message);
  }
  return std::move(*doc.network);
}

std::string serialize_network(const BeliefNetwork& net) {
  std::ostringstream out;
  out << "network " << net.name() << "\n";
  for (const auto& node : net.nodes()) {
    out << "\nnode " << node.name << " { outcomes: ";
    for (std::size_t v = 0; v < node.outcomes.size(); ++v) {
      out << (v ? ", " : "") << node.outcomes[v];
    }
    out << " }\n";
    if (!node.parents.empty()) {
      out << "parents " << node.name << ":";
      for (std::size_t i = 0; i < node.parents.size(); ++i) {
        out << (i ? ", " : " ") << net.node(node.parents[i]).name;
      }
      out << "\n";
    }
    out << "cpt " << node.name << ":\n";
    for (std::size_t r = 0; r < node.cpt.row_count(); ++r) {
      out << " ";
      for (double p : node.cpt.row(r)) out << " " << format_probability(p);
      out << "\n";
    }
  }
  return out.str();
}

Evidence parse_evidence(std::string_view spec, const BeliefNetwork& net) {
  Evidence ev;
  spec = trim(spec);
  if (spec.empty()) return ev;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const std::size_t comma = std::min(spec.find(',', start), spec.size());
    const std::string_view item = trim(spec.substr(start, comma - start));
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("malformed evidence item '" + std::string(item) +
                            "', expected Name=outcome");
    }
    const std::string_view name = trim(item.substr(0, eq));
    const std::string_view label = trim(item.substr(eq + 1));
    const auto node = net.find(name);
    if (!node) throw ValidationError("evidence names unknown node '" + std::string(name) + "'");
    const auto value = net.node(*node).find_outcome(label);
    if (!value) {
      throw ValidationError("unknown outcome '" + std::string(label) + "' for node '" +
                            std::string(name) + "'");
    }
    if (ev.contains(*node)) {
      throw ValidationError("node '" + std::string(name) + "' appears twice in evidence");
    }
    ev.set(*node, *value);
    start = comma + 1;
  }
  return ev;
}

std::string format_evidence(const Evidence& ev, const BeliefNetwork& net) {
  std::string out;
  for (const auto& [node, value] : ev) {
    if (!out.empty()) out += ",";
    out += net.node(node).name + "=" + net.node(node).outcomes.at(value);
  }
  return out;
}

BeliefNetwork load_network_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open network file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading network file '" + path.string() + "'");
  return parse_network(buf.str());
}

}  // namespace bnras
