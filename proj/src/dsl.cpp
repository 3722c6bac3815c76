#include "gogtree/dsl.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace gogtree {

namespace {

struct Tok {
  std::string text;
  int line, col;
  bool is_punct;
};

class Lexer {
public:
  explicit Lexer(const std::string& src) {
    int line = 1, col = 1;
    size_t i = 0;
    auto advance = [&](size_t k) {
      for (size_t j = 0; j < k; ++j, ++i) {
        if (src[i] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
    };
    while (i < src.size()) {
      char c = src[i];
      if (c == '#') {
        while (i < src.size() && src[i] != '\n') advance(1);
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance(1);
        continue;
      }
      int tl = line, tc = col;
      if (c == '-') {
        if (i + 1 < src.size() && src[i + 1] == '>') {
          toks_.push_back({"->", tl, tc, true});
          advance(2);
          continue;
        }
        throw ParseError("stray '-' (expected '->')", tl, tc);
      }
      if (std::string("=:{},|*").find(c) != std::string::npos) {
        toks_.push_back({std::string(1, c), tl, tc, true});
        advance(1);
        continue;
      }
      size_t start = i;
      while (i < src.size() && std::string(" \t\r\n#=:{},|*").find(src[i]) == std::string::npos &&
             src[i] != '-')
        advance(1);
      if (i == start) throw ParseError(std::string("unexpected character '") + c + "'", tl, tc);
      toks_.push_back({src.substr(start, i - start), tl, tc, false});
    }
  }

  bool done() const { return pos_ >= toks_.size(); }
  const Tok& peek() const {
    if (done()) throw ParseError("unexpected end of input", last_line(), last_col());
    return toks_[pos_];
  }
  Tok next() {
    Tok t = peek();
    ++pos_;
    return t;
  }
  Tok expect(const std::string& text) {
    Tok t = next();
    if (t.text != text)
      throw ParseError("expected '" + text + "', found '" + t.text + "'", t.line, t.col);
    return t;
  }
  Tok expect_name() {
    Tok t = next();
    if (t.is_punct) throw ParseError("expected a name, found '" + t.text + "'", t.line, t.col);
    return t;
  }
  int last_line() const { return toks_.empty() ? 1 : toks_.back().line; }
  int last_col() const { return toks_.empty() ? 1 : toks_.back().col + 1; }

private:
  std::vector<Tok> toks_;
  size_t pos_ = 0;
};

Elem eval_word(const FiniteGroup& g, const std::string& name, const Tok& at) {
  auto e = g.elem_by_name(name);
  if (!e) throw ParseError("unknown element '" + name + "' in group " + g.name(), at.line, at.col);
  return *e;
}

}  // namespace

GogPtr parse_gog(const std::string& text, int order_cap) {
  Lexer lex(text);
  std::map<std::string, GroupPtr> groups;
  std::vector<VertexData> vertices;
  std::map<std::string, std::string> vertex_group;  // id -> group name
  std::vector<GraphOfGroups::EdgeSpec> edges;
  std::string base_id;

  auto get_group = [&](const Tok& t) -> GroupPtr {
    auto it = groups.find(t.text);
    if (it == groups.end()) throw ParseError("unknown group '" + t.text + "'", t.line, t.col);
    return it->second;
  };

  auto parse_maps = [&](const GroupPtr& edge_group, const GroupPtr& vertex_grp,
                        const Tok& ctx) -> Mono {
    std::vector<std::pair<Elem, Elem>> pairs;
    lex.expect("{");
    while (lex.peek().text != "}") {
      Tok elem = lex.expect_name();
      auto x = edge_group->elem_by_name(elem.text);
      if (!x)
        throw ParseError("unknown element '" + elem.text + "' in edge group " +
                             edge_group->name(),
                         elem.line, elem.col);
      lex.expect("->");
      Tok w = lex.expect_name();
      Elem y = eval_word(*vertex_grp, w.text, w);
      while (!lex.done() && lex.peek().text == "*") {
        lex.next();
        Tok w2 = lex.expect_name();
        y = vertex_grp->mul(y, eval_word(*vertex_grp, w2.text, w2));
      }
      pairs.emplace_back(*x, y);
      if (lex.peek().text == ",") lex.next();
    }
    lex.expect("}");
    try {
      return Mono::check(edge_group, vertex_grp, pairs);
    } catch (const Error& e) {
      throw ParseError(e.what(), ctx.line, ctx.col);
    }
  };

  while (!lex.done()) {
    Tok kw = lex.expect_name();
    if (kw.text == "group") {
      Tok name = lex.expect_name();
      if (groups.count(name.text))
        throw ParseError("group '" + name.text + "' declared twice", name.line, name.col);
      lex.expect("=");
      Tok kind = lex.expect_name();
      try {
        if (kind.text == "cyclic") {
          Tok num = lex.expect_name();
          int n = std::stoi(num.text);
          std::string symbol = "g";
          if (!lex.done() && !lex.peek().is_punct) {
            const std::string& t = lex.peek().text;
            if (t != "group" && t != "vertex" && t != "edge" && t != "base")
              symbol = lex.next().text;
          }
          groups[name.text] = FiniteGroup::cyclic(n, symbol, name.text, order_cap);
        } else if (kind.text == "symmetric") {
          Tok num = lex.expect_name();
          groups[name.text] = FiniteGroup::symmetric(std::stoi(num.text), name.text, order_cap);
        } else if (kind.text == "table") {
          lex.expect("{");
          std::vector<std::string> names;
          while (lex.peek().text != "|") names.push_back(lex.expect_name().text);
          lex.expect("|");
          std::vector<std::vector<Elem>> table;
          std::map<std::string, int> pos;
          for (size_t i = 0; i < names.size(); ++i) pos[names[i]] = static_cast<int>(i);
          while (true) {
            std::vector<Elem> row;
            while (lex.peek().text != "," && lex.peek().text != "}") {
              Tok t = lex.expect_name();
              auto it = pos.find(t.text);
              if (it == pos.end())
                throw ParseError("table row mentions unknown element '" + t.text + "'", t.line,
                                 t.col);
              row.push_back(it->second);
            }
            table.push_back(std::move(row));
            if (lex.peek().text == ",") {
              lex.next();
              continue;
            }
            break;
          }
          lex.expect("}");
          groups[name.text] =
              FiniteGroup::from_table(names, std::move(table), name.text, order_cap);
        } else {
          throw ParseError("unknown group kind '" + kind.text + "'", kind.line, kind.col);
        }
      } catch (const ParseError&) {
        throw;
      } catch (const Error& e) {
        throw ParseError(e.what(), kind.line, kind.col);
      }
    } else if (kw.text == "vertex") {
      Tok name = lex.expect_name();
      if (vertex_group.count(name.text))
        throw ParseError("vertex '" + name.text + "' declared twice", name.line, name.col);
      lex.expect(":");
      Tok grp = lex.expect_name();
      vertices.push_back({name.text, get_group(grp)});
      vertex_group[name.text] = grp.text;
    } else if (kw.text == "edge") {
      Tok name = lex.expect_name();
      lex.expect(":");
      GroupPtr egroup = get_group(lex.expect_name());
      lex.expect("from");
      Tok va = lex.expect_name();
      if (!vertex_group.count(va.text))
        throw ParseError("edge '" + name.text + "' references undeclared vertex '" + va.text + "'",
                         va.line, va.col);
      lex.expect("via");
      GroupPtr ga;
      for (const auto& v : vertices)
        if (v.id == va.text) ga = v.group;
      Mono ia = parse_maps(egroup, ga, name);
      lex.expect("to");
      Tok vb = lex.expect_name();
      if (!vertex_group.count(vb.text))
        throw ParseError("edge '" + name.text + "' references undeclared vertex '" + vb.text + "'",
                         vb.line, vb.col);
      lex.expect("via");
      GroupPtr gb;
      for (const auto& v : vertices)
        if (v.id == vb.text) gb = v.group;
      Mono ib = parse_maps(egroup, gb, name);
      edges.push_back({name.text, egroup, va.text, vb.text, ia, ib});
    } else if (kw.text == "base") {
      Tok name = lex.expect_name();
      if (!vertex_group.count(name.text))
        throw ParseError("base references undeclared vertex '" + name.text + "'", name.line,
                         name.col);
      base_id = name.text;
    } else {
      throw ParseError("unknown declaration '" + kw.text + "'", kw.line, kw.col);
    }
  }

  if (vertices.empty()) throw ParseError("no vertices declared", 1, 1);
  if (base_id.empty()) base_id = vertices.front().id;
  return GraphOfGroups::build(std::move(vertices), std::move(edges), base_id);
}

GogPtr parse_gog_file(const std::string& path, int order_cap) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_gog(ss.str(), order_cap);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.raw(), e.line(), e.col());
  }
}

}  // namespace gogtree
