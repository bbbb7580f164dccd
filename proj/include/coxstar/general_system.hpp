#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "coxstar/group_element.hpp"
#include "coxstar/star_system.hpp"

namespace coxstar {

/// A labelled Coxeter diagram for the twist calculus: named vertices,
/// finite edge labels >= 2 (absent pair = infinite label), and for each
/// vertex an expression — a word over the base alphabet, the vertex set
/// of the system this one was derived from by moves. When the base system
/// is star-shaped, a StarSystem reference is attached and expressions can
/// be evaluated in the normal-form engine.
class GeneralSystem {
 public:
  GeneralSystem() = default;

  static GeneralSystem from_star(const SystemPtr& sys) {
    GeneralSystem g;
    for (int i = 0; i <= sys->leaf_count(); ++i) {
      g.names_.push_back("s" + std::to_string(i));
      g.expr_.push_back({i});
    }
    g.base_names_ = g.names_;
    for (int i = 1; i <= sys->leaf_count(); ++i) g.edges_[{0, i}] = sys->label(i);
    g.ref_ = sys;
    g.base_gen_.resize(g.names_.size());
    for (std::size_t k = 0; k < g.base_gen_.size(); ++k) g.base_gen_[k] = static_cast<int>(k);
    return g;
  }

  static GeneralSystem from_parts(std::vector<std::string> names,
                                  std::map<std::pair<int, int>, int> edges) {
    GeneralSystem g;
    g.names_ = std::move(names);
    std::set<std::string> uniq(g.names_.begin(), g.names_.end());
    if (uniq.size() != g.names_.size()) throw std::invalid_argument("duplicate vertex names");
    for (auto& [e, label] : edges) {
      auto [u, v] = e;
      if (u == v) throw std::invalid_argument("self-loop at vertex " + g.names_.at(static_cast<std::size_t>(u)));
      if (u < 0 || v < 0 || u >= g.vertex_count() || v >= g.vertex_count())
        throw std::invalid_argument("edge endpoint out of range");
      if (label < 2) throw std::invalid_argument("edge label below 2");
      g.edges_[{std::min(u, v), std::max(u, v)}] = label;
    }
    g.base_names_ = g.names_;
    for (int v = 0; v < g.vertex_count(); ++v) g.expr_.push_back({v});
    g.try_attach_star_reference();
    return g;
  }

  int vertex_count() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(int v) const { return names_.at(static_cast<std::size_t>(v)); }
  int index_of(const std::string& name) const {
    for (int v = 0; v < vertex_count(); ++v)
      if (names_[static_cast<std::size_t>(v)] == name) return v;
    return -1;
  }

  const std::map<std::pair<int, int>, int>& edges() const { return edges_; }
  std::optional<int> edge_label(int u, int v) const {
    auto it = edges_.find({std::min(u, v), std::max(u, v)});
    if (it == edges_.end()) return std::nullopt;
    return it->second;
  }
  std::vector<int> neighbours(int v) const {
    std::vector<int> out;
    for (auto& [e, label] : edges_) {
      if (e.first == v) out.push_back(e.second);
      if (e.second == v) out.push_back(e.first);
    }
    std::sort(out.begin(), out.end());
    return out;
  }
  int degree(int v) const { return static_cast<int>(neighbours(v).size()); }

  bool connected() const {
    if (vertex_count() == 0) return true;
    std::set<int> seen{0};
    std::vector<int> frontier{0};
    while (!frontier.empty()) {
      std::vector<int> next;
      for (int v : frontier)
        for (int u : neighbours(v))
          if (seen.insert(u).second) next.push_back(u);
      frontier = std::move(next);
    }
    return static_cast<int>(seen.size()) == vertex_count();
  }

  const std::vector<std::vector<int>>& expressions() const { return expr_; }
  const std::vector<int>& expression(int v) const { return expr_.at(static_cast<std::size_t>(v)); }
  const std::vector<std::string>& base_names() const { return base_names_; }
  const std::optional<SystemPtr>& reference() const { return ref_; }

  std::string expression_string(int v) const {
    std::string s;
    for (int letter : expr_.at(static_cast<std::size_t>(v)))
      s += (s.empty() ? "" : " ") + base_names_.at(static_cast<std::size_t>(letter));
    return s;
  }

  /// Evaluate the expression of vertex v in the reference star group.
  GroupElement expression_element(int v) const {
    if (!ref_) throw std::logic_error("no star reference attached");
    std::vector<int> letters;
    for (int b : expr_.at(static_cast<std::size_t>(v)))
      letters.push_back(base_gen_.at(static_cast<std::size_t>(b)));
    return GroupElement::from_letters(*ref_, letters);
  }

  /// Mutators used by the move calculus (twist.hpp).
  void set_expression(int v, std::vector<int> word) { expr_.at(static_cast<std::size_t>(v)) = std::move(word); }
  void set_edge(int u, int v, int label) { edges_[{std::min(u, v), std::max(u, v)}] = label; }
  void remove_edge(int u, int v) { edges_.erase({std::min(u, v), std::max(u, v)}); }

  int add_vertex(const std::string& base_name, std::vector<int> expression) {
    std::string nm = base_name;
    while (index_of(nm) != -1) nm += "'";
    names_.push_back(nm);
    expr_.push_back(std::move(expression));
    return vertex_count() - 1;
  }

  void remove_vertex(int v) {
    std::map<std::pair<int, int>, int> kept;
    for (auto& [e, label] : edges_) {
      if (e.first == v || e.second == v) continue;
      auto shift = [&](int x) { return x > v ? x - 1 : x; };
      kept[{shift(e.first), shift(e.second)}] = label;
    }
    edges_ = std::move(kept);
    names_.erase(names_.begin() + v);
    expr_.erase(expr_.begin() + v);
  }

  /// Multiset of edge labels.
  std::vector<int> label_multiset() const {
    std::vector<int> out;
    for (auto& [e, label] : edges_) out.push_back(label);
    std::sort(out.begin(), out.end());
    return out;
  }

  bool is_star() const {
    if (vertex_count() < 3) return false;
    for (int c = 0; c < vertex_count(); ++c)
      if (degree(c) == static_cast<int>(edges_.size()) &&
          static_cast<int>(edges_.size()) == vertex_count() - 1)
        return true;
    return false;
  }

  int star_center() const {
    for (int c = 0; c < vertex_count(); ++c)
      if (degree(c) == static_cast<int>(edges_.size()) &&
          static_cast<int>(edges_.size()) == vertex_count() - 1)
        return c;
    return -1;
  }

 private:
  void try_attach_star_reference() {
    int c = star_center();
    if (c < 0) return;
    std::vector<int> labels;
    std::vector<int> gen(names_.size(), 0);
    int leaf = 1;
    for (int v = 0; v < vertex_count(); ++v) {
      if (v == c) continue;
      labels.push_back(*edge_label(c, v));
      gen[static_cast<std::size_t>(v)] = leaf++;
    }
    ref_ = make_system(labels);
    base_gen_ = std::move(gen);
  }

  std::vector<std::string> names_;
  std::map<std::pair<int, int>, int> edges_;
  std::vector<std::vector<int>> expr_;     // words over the base alphabet
  std::vector<std::string> base_names_;    // alphabet of the expressions
  std::optional<SystemPtr> ref_;
  std::vector<int> base_gen_;              // base letter -> generator index in *ref_
};

/// Isomorphism of labelled diagrams irrespective of vertex names; small
/// inputs only (backtracking over degree/label-compatible assignments).
inline bool diagram_isomorphic(const GeneralSystem& a, const GeneralSystem& b) {
  const int n = a.vertex_count();
  if (n != b.vertex_count() || a.label_multiset() != b.label_multiset()) return false;
  std::vector<int> assign(static_cast<std::size_t>(n), -1);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  auto compatible = [&](int va, int vb) {
    if (a.degree(va) != b.degree(vb)) return false;
    for (int u = 0; u < va; ++u) {
      if (assign[static_cast<std::size_t>(u)] < 0) continue;
      if (a.edge_label(va, u) != b.edge_label(vb, assign[static_cast<std::size_t>(u)]))
        return false;
    }
    return true;
  };
  // Depth-first over vertices of a in index order.
  std::vector<int> stack{0};
  std::vector<int> choice(static_cast<std::size_t>(n), -1);
  int depth = 0;
  while (depth >= 0) {
    if (depth == n) return true;
    bool advanced = false;
    for (int vb = choice[static_cast<std::size_t>(depth)] + 1; vb < n; ++vb) {
      if (used[static_cast<std::size_t>(vb)] || !compatible(depth, vb)) continue;
      choice[static_cast<std::size_t>(depth)] = vb;
      assign[static_cast<std::size_t>(depth)] = vb;
      used[static_cast<std::size_t>(vb)] = true;
      ++depth;
      if (depth < n) choice[static_cast<std::size_t>(depth)] = -1;
      advanced = true;
      break;
    }
    if (!advanced) {
      choice[static_cast<std::size_t>(depth)] = -1;
      --depth;
      if (depth >= 0) {
        used[static_cast<std::size_t>(assign[static_cast<std::size_t>(depth)])] = false;
        assign[static_cast<std::size_t>(depth)] = -1;
      }
    }
  }
  return false;
}

}  // namespace coxstar
