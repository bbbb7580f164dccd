#pragma once

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "coxstar/automorphism.hpp"
#include "coxstar/general_system.hpp"
#include "coxstar/group_element.hpp"
#include "coxstar/star_system.hpp"

namespace coxstar {

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

namespace detail {

inline std::string strip_comment(std::string s) {
  auto pos = s.find('#');
  if (pos != std::string::npos) s.erase(pos);
  return s;
}

inline std::vector<std::string> tokens(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

inline int parse_int(const std::string& t, int line) {
  try {
    std::size_t used = 0;
    int v = std::stoi(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "expected an integer, got '" + t + "'");
  }
}

inline std::vector<std::string> logical_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  lines.push_back(cur);
  return lines;
}

}  // namespace detail

/// System file: a single `labels m_1 ... m_n` line ('#' comments allowed).
inline StarSystem parse_star(std::string_view text) {
  std::optional<StarSystem> sys;
  auto lines = detail::logical_lines(text);
  for (int ln = 1; ln <= static_cast<int>(lines.size()); ++ln) {
    auto toks = detail::tokens(detail::strip_comment(lines[static_cast<std::size_t>(ln) - 1]));
    if (toks.empty()) continue;
    if (toks[0] != "labels") throw ParseError(ln, "expected 'labels', got '" + toks[0] + "'");
    if (sys) throw ParseError(ln, "duplicate labels line");
    std::vector<int> labels;
    for (std::size_t k = 1; k < toks.size(); ++k) labels.push_back(detail::parse_int(toks[k], ln));
    try {
      sys.emplace(labels);
    } catch (const std::invalid_argument& e) {
      throw ParseError(ln, e.what());
    }
  }
  if (!sys) throw ParseError(1, "no labels line found");
  return *sys;
}

inline SystemPtr parse_star_ptr(std::string_view text) {
  return std::make_shared<const StarSystem>(parse_star(text));
}

/// Diagram file: either the star `labels ...` format, or `vertex <name>`
/// lines followed by `edge <u> <v> <label>` lines.
inline GeneralSystem parse_diagram(std::string_view text) {
  auto lines = detail::logical_lines(text);
  bool has_vertex = false;
  for (const auto& l : lines) {
    auto toks = detail::tokens(detail::strip_comment(l));
    if (!toks.empty() && toks[0] == "vertex") has_vertex = true;
  }
  if (!has_vertex) return GeneralSystem::from_star(parse_star_ptr(text));

  std::vector<std::string> names;
  std::map<std::pair<int, int>, int> edges;
  auto find = [&](const std::string& nm, int ln) {
    for (int v = 0; v < static_cast<int>(names.size()); ++v)
      if (names[static_cast<std::size_t>(v)] == nm) return v;
    throw ParseError(ln, "unknown vertex '" + nm + "'");
  };
  for (int ln = 1; ln <= static_cast<int>(lines.size()); ++ln) {
    auto toks = detail::tokens(detail::strip_comment(lines[static_cast<std::size_t>(ln) - 1]));
    if (toks.empty()) continue;
    if (toks[0] == "vertex") {
      if (toks.size() != 2) throw ParseError(ln, "vertex line needs exactly one name");
      names.push_back(toks[1]);
    } else if (toks[0] == "edge") {
      if (toks.size() != 4) throw ParseError(ln, "edge line needs two names and a label");
      int u = find(toks[1], ln), v = find(toks[2], ln);
      int label = detail::parse_int(toks[3], ln);
      if (label < 2) throw ParseError(ln, "edge label below 2");
      if (u == v) throw ParseError(ln, "self-loop at '" + toks[1] + "'");
      edges[{std::min(u, v), std::max(u, v)}] = label;
    } else {
      throw ParseError(ln, "expected 'vertex' or 'edge', got '" + toks[0] + "'");
    }
  }
  try {
    return GeneralSystem::from_parts(std::move(names), std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw ParseError(1, e.what());
  }
}

/// Words are whitespace-separated generator tokens s0 s1 ... sn; the
/// empty string is the identity.
inline GroupElement parse_word(const SystemPtr& sys, std::string_view text) {
  std::vector<int> letters;
  for (const auto& t : detail::tokens(detail::strip_comment(std::string(text)))) {
    if (t.size() < 2 || t[0] != 's') throw ParseError(1, "bad generator token '" + t + "'");
    int i = detail::parse_int(t.substr(1), 1);
    if (!sys->valid_generator(i)) throw ParseError(1, "generator '" + t + "' out of range");
    letters.push_back(i);
  }
  return GroupElement::from_letters(sys, letters);
}

inline std::string format_letters(const std::vector<int>& letters) {
  std::string s;
  for (int l : letters) s += (s.empty() ? "" : " ") + ("s" + std::to_string(l));
  return s;
}

inline std::string format_word(const GroupElement& g) { return format_letters(g.letters()); }

inline std::string format_basic(const BasicAut& b) {
  switch (b.kind) {
    case BasicKind::inner:
      return "inner(" + format_letters(b.word) + ")";
    case BasicKind::transvection:
      return "tau(" + std::to_string(b.i) + ")";
    case BasicKind::phi:
      return "phi(" + std::to_string(b.i) + "," + std::to_string(b.t) + ")";
    case BasicKind::psi:
      return "psi(" + std::to_string(b.i) + "," + std::to_string(b.j) + ")";
    case BasicKind::sigma:
      return "sigma(" + std::to_string(b.i) + "," + std::to_string(b.j) + ")";
    case BasicKind::diagram: {
      std::string s = "diag(";
      auto cycles = b.perm.cycles();
      if (cycles.empty()) s += "()";
      for (const auto& c : cycles) {
        s += "(";
        for (std::size_t k = 0; k < c.size(); ++k) s += (k ? " " : "") + std::to_string(c[k]);
        s += ")";
      }
      return s + ")";
    }
  }
  return "?";
}

/// One image line per generator.
inline std::string format_automorphism(const Automorphism& a) {
  std::string s;
  for (int i = 0; i <= a.system().leaf_count(); ++i)
    s += "s" + std::to_string(i) + " -> " + format_word(a.image(i)) + "\n";
  return s;
}

namespace detail {

inline BasicAut parse_basic_literal(const SystemPtr& sys, const std::string& line, int ln) {
  auto open = line.find('(');
  auto close = line.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw ParseError(ln, "malformed basic automorphism literal '" + line + "'");
  std::string head = line.substr(0, open);
  std::string args = line.substr(open + 1, close - open - 1);
  auto ints = [&] {
    std::vector<int> out;
    std::string cur;
    for (char c : args + ",") {
      if (c == ',') {
        std::string t;
        for (char x : cur)
          if (!std::isspace(static_cast<unsigned char>(x))) t += x;
        if (!t.empty()) out.push_back(parse_int(t, ln));
        cur.clear();
      } else {
        cur += c;
      }
    }
    return out;
  };
  if (head == "tau") {
    auto v = ints();
    if (v.size() != 1) throw ParseError(ln, "tau takes one index");
    return BasicAut::transvection(v[0]);
  }
  if (head == "phi") {
    auto v = ints();
    if (v.size() != 2) throw ParseError(ln, "phi takes an index and an exponent");
    return BasicAut::phi(v[0], v[1]);
  }
  if (head == "psi") {
    auto v = ints();
    if (v.size() != 2) throw ParseError(ln, "psi takes two indices");
    return BasicAut::psi(v[0], v[1]);
  }
  if (head == "sigma") {
    auto v = ints();
    if (v.size() != 2) throw ParseError(ln, "sigma takes two indices");
    return BasicAut::sigma(v[0], v[1]);
  }
  if (head == "inner") {
    GroupElement w = parse_word(sys, args);
    return BasicAut::inner(w.letters());
  }
  if (head == "diag") {
    Permutation p = Permutation::identity(sys->leaf_count());
    std::string cur;
    std::vector<int> cyc;
    for (char c : args) {
      if (c == '(') {
        cyc.clear();
        cur.clear();
      } else if (c == ')' || c == ' ' || c == ',') {
        if (!cur.empty()) {
          cyc.push_back(parse_int(cur, ln));
          cur.clear();
        }
        if (c == ')') {
          if (cyc.size() >= 2) {
            std::vector<int> img;
            for (int i = 0; i <= sys->leaf_count(); ++i) img.push_back(i);
            for (std::size_t k = 0; k < cyc.size(); ++k) {
              int from = cyc[k], to = cyc[(k + 1) % cyc.size()];
              if (from < 1 || from > sys->leaf_count())
                throw ParseError(ln, "cycle entry out of range");
              img[static_cast<std::size_t>(from)] = to;
            }
            p = Permutation::from_images(img) * p;
          }
          cyc.clear();
        }
      } else {
        cur += c;
      }
    }
    return BasicAut::diagram(p);
  }
  throw ParseError(ln, "unknown basic automorphism '" + head + "'");
}

}  // namespace detail

/// Automorphism file: either one `s<i> -> <word>` line per generator, or
/// a sequence of basic literals (one per line) composing top-to-bottom,
/// the first line acting last.
inline Automorphism parse_automorphism(const SystemPtr& sys, std::string_view text) {
  auto lines = detail::logical_lines(text);
  std::map<int, GroupElement> images;
  std::vector<BasicAut> basics;
  for (int ln = 1; ln <= static_cast<int>(lines.size()); ++ln) {
    std::string body = detail::strip_comment(lines[static_cast<std::size_t>(ln) - 1]);
    auto toks = detail::tokens(body);
    if (toks.empty()) continue;
    auto arrow = body.find("->");
    if (arrow != std::string::npos) {
      auto lhs = detail::tokens(body.substr(0, arrow));
      if (lhs.size() != 1 || lhs[0].size() < 2 || lhs[0][0] != 's')
        throw ParseError(ln, "image line must start with a generator");
      int i = detail::parse_int(lhs[0].substr(1), ln);
      if (!sys->valid_generator(i)) throw ParseError(ln, "generator out of range");
      if (images.count(i)) throw ParseError(ln, "duplicate image for s" + std::to_string(i));
      images.emplace(i, parse_word(sys, body.substr(arrow + 2)));
    } else {
      std::string joined;
      for (const auto& t : toks) joined += joined.empty() ? t : (" " + t);
      try {
        basics.push_back(detail::parse_basic_literal(sys, joined, ln));
      } catch (const std::invalid_argument& e) {
        throw ParseError(ln, e.what());
      }
    }
  }
  if (!images.empty() && !basics.empty())
    throw ParseError(1, "mix of image lines and basic literals");
  if (!images.empty()) {
    std::vector<GroupElement> table;
    for (int i = 0; i <= sys->leaf_count(); ++i) {
      auto it = images.find(i);
      if (it == images.end()) throw ParseError(1, "missing image for s" + std::to_string(i));
      table.push_back(it->second);
    }
    return Automorphism::from_images(sys, std::move(table));
  }
  if (basics.empty()) throw ParseError(1, "empty automorphism file");
  try {
    return compose_basics(sys, basics);
  } catch (const std::invalid_argument& e) {
    throw ParseError(1, e.what());
  }
}

inline std::string format_general(const GeneralSystem& g) {
  std::string s;
  for (int v = 0; v < g.vertex_count(); ++v) s += "vertex " + g.name(v) + "\n";
  for (auto& [e, label] : g.edges())
    s += "edge " + g.name(e.first) + " " + g.name(e.second) + " " + std::to_string(label) + "\n";
  return s;
}

}  // namespace coxstar
