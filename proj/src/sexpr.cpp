// Copyright 2026 The blastgp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "blastgp/gplang.hpp"

namespace blastgp {

std::string format_constant(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

namespace {

void emit(std::string& out, const Tree& t, std::size_t& i, const ConstantTable& table) {
  const Node& n = t[i++];
  if (n.op == Primitive::Const) {
    out += format_constant(table[n.constant]);
    return;
  }
  const int a = arity(n.op);
  if (a == 0) {
    out += primitive_name(n.op);
    return;
  }
  out += '(';
  out += primitive_name(n.op);
  for (int k = 0; k < a; ++k) {
    out += ' ';
    emit(out, t, i, table);
  }
  out += ')';
}

struct Token {
  enum Kind { Open, Close, Atom, End } kind;
  std::string_view text;
  std::size_t pos;
};

class Parser {
 public:
  Parser(std::string_view text, Role role, ConstantTable& table, const PrimitiveSet& ps)
      : text_(text), role_(role), table_(table), ps_(ps) {}

  Tree parse() {
    std::vector<Node> nodes;
    expr(nodes);
    const Token t = next();
    if (t.kind != Token::End) throw ParseError(t.pos, "unexpected trailing input");
    if (nodes.size() > kMaxTreeSize) throw ParseError(0, "tree exceeds " + std::to_string(kMaxTreeSize) + " nodes");
    return Tree(role_, std::move(nodes));
  }

 private:
  Token next() {
    while (at_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[at_]))) ++at_;
    if (at_ >= text_.size()) return {Token::End, {}, at_};
    const std::size_t start = at_;
    if (text_[at_] == '(') return {Token::Open, text_.substr(at_++, 1), start};
    if (text_[at_] == ')') return {Token::Close, text_.substr(at_++, 1), start};
    while (at_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[at_])) && text_[at_] != '(' &&
           text_[at_] != ')') {
      ++at_;
    }
    return {Token::Atom, text_.substr(start, at_ - start), start};
  }

  Token peek() {
    const auto saved = at_;
    Token t = next();
    at_ = saved;
    return t;
  }

  // Appends the node for an atom and returns its arity.
  int atom(const Token& t, std::vector<Node>& nodes) {
    double v = 0.0;
    const char* b = t.text.data();
    const char* e = b + t.text.size();
    const char* nb = (b != e && *b == '+') ? b + 1 : b;
    auto [p, ec] = std::from_chars(nb, e, v);
    if (ec == std::errc() && p == e) {
      nodes.push_back(Node{Primitive::Const, table_.intern(v), 1});
      return 0;
    }
    auto prim = primitive_from_name(t.text);
    if (!prim) throw ParseError(t.pos, "unknown symbol '" + std::string(t.text) + "'");
    if (!ps_.legal(role_, *prim)) {
      throw ParseError(t.pos, "'" + std::string(t.text) + "' is not legal in a " + std::string(role_name(role_)) +
                                  " tree");
    }
    nodes.push_back(Node{*prim, 0, 1});
    return arity(*prim);
  }

  void expr(std::vector<Node>& nodes) {
    const Token t = next();
    switch (t.kind) {
      case Token::End: throw ParseError(t.pos, "unexpected end of input");
      case Token::Close: throw ParseError(t.pos, "unexpected ')'");
      case Token::Atom: {
        const int a = atom(t, nodes);
        if (a != 0) throw ParseError(t.pos, "'" + std::string(t.text) + "' needs " + std::to_string(a) + " arguments");
        return;
      }
      case Token::Open: {
        const Token head = next();
        if (head.kind != Token::Atom) throw ParseError(head.pos, "expected operator after '('");
        const int a = atom(head, nodes);
        int got = 0;
        while (peek().kind != Token::Close) {
          if (peek().kind == Token::End) throw ParseError(text_.size(), "missing ')'");
          expr(nodes);
          ++got;
        }
        next();
        if (got != a) {
          throw ParseError(head.pos, "'" + std::string(head.text) + "' takes " + std::to_string(a) +
                                         " arguments, got " + std::to_string(got));
        }
        return;
      }
    }
  }

  std::string_view text_;
  std::size_t at_ = 0;
  Role role_;
  ConstantTable& table_;
  const PrimitiveSet& ps_;
};

}  // namespace

std::string to_sexpr(const Tree& t, const ConstantTable& table) {
  std::string out;
  std::size_t i = 0;
  emit(out, t, i, table);
  return out;
}

Tree from_sexpr(std::string_view text, Role role, ConstantTable& table, const PrimitiveSet& ps) {
  return Parser(text, role, table, ps).parse();
}

bool same_structure(const Tree& a, const ConstantTable& ta, const Tree& b, const ConstantTable& tb) {
  if (a.role() != b.role() || a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].op != b[i].op) return false;
    if (a[i].op == Primitive::Const && ta[a[i].constant] != tb[b[i].constant]) return false;
  }
  return true;
}

void write_model(std::ostream& out, const Model& m) {
  out << "# blastgp model\nconstants:\n";
  const auto v = m.constants.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    out << format_constant(v[i]) << ((i % 10 == 9 || i + 1 == v.size()) ? '\n' : ' ');
  }
  for (const auto& t : m.team.trees()) out << role_name(t.role()) << ": " << to_sexpr(t, m.constants) << '\n';
}

Model read_model(std::istream& in, const PrimitiveSet& ps) {
  std::map<std::string, std::string> sections;
  std::string current, line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto colon = line.find(':');
    if (colon != std::string::npos) {
      const auto label = line.substr(0, colon);
      if (label == "constants" || label == "prepas0" || label == "prepas1" || label == "expect") {
        current = label;
        if (sections.contains(current)) throw ParseError(0, "duplicate section " + current);
        sections[current] = line.substr(colon + 1);
        continue;
      }
    }
    if (current.empty()) throw ParseError(0, "text before first section: " + line);
    sections[current] += ' ' + line;
  }
  for (const char* need : {"constants", "prepas0", "prepas1", "expect"}) {
    if (!sections.contains(need)) throw ParseError(0, std::string("missing section ") + need);
  }

  std::vector<double> values;
  std::istringstream cs(sections["constants"]);
  std::string tok;
  while (cs >> tok) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size()) throw ParseError(0, "bad constant '" + tok + "'");
    values.push_back(v);
  }
  ConstantTable table = [&] {
    try {
      return ConstantTable::from_values(values);
    } catch (const std::invalid_argument& e) {
      throw ParseError(0, e.what());
    }
  }();
  auto tree = [&](const char* name, Role r) {
    try {
      return from_sexpr(sections[name], r, table, ps);
    } catch (const ParseError& e) {
      throw ParseError(e.position(), std::string(name) + ": " + e.what());
    }
  };
  Tree p0 = tree("prepas0", Role::Prepass0);
  Tree p1 = tree("prepas1", Role::Prepass1);
  Tree r = tree("expect", Role::Result);
  return Model{table, Individual(std::move(p0), std::move(p1), std::move(r))};
}

Model load_model_file(const std::string& path, const PrimitiveSet& ps) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model " + path);
  return read_model(in, ps);
}

void save_model_file(const std::string& path, const Model& m) {
  std::ofstream out(path);
  write_model(out, m);
  if (!out) throw std::runtime_error("failed writing model " + path);
}

}  // namespace blastgp
