#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "coxstar/general_system.hpp"

namespace coxstar {

struct OutOfClass : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A diagram twist T_{I,J}: I spans a finite dihedral, J is separated
/// from the complement K by infinite labels, and the generators of K get
/// conjugated by the longest element Delta_I.
struct TwistMove {
  std::array<int, 2> I{};
  std::vector<int> Iperp;
  std::vector<int> J;
  std::vector<int> K;
  std::vector<int> delta_word;  // base-alphabet expression of Delta_I
  bool diagram_fixing = false;  // even I-edge: Delta_I is central in W_I

  std::string describe(const GeneralSystem& g) const {
    std::string s = "twist I={" + g.name(I[0]) + "," + g.name(I[1]) + "} J={";
    for (std::size_t k = 0; k < J.size(); ++k) s += (k ? "," : "") + g.name(J[k]);
    s += "} K={";
    for (std::size_t k = 0; k < K.size(); ++k) s += (k ? "," : "") + g.name(K[k]);
    return s + "}";
  }
};

namespace detail {

inline std::vector<int> delta_base_word(const GeneralSystem& g, int a, int b, int label) {
  // Longest element of <a, b>: the alternating product of `label` letters,
  // spelled starting from the second vertex of the pair.
  std::vector<int> w;
  for (int k = 0; k < label; ++k) {
    const auto& e = g.expression(k % 2 == 0 ? b : a);
    w.insert(w.end(), e.begin(), e.end());
  }
  return w;
}

inline std::vector<int> perp_of_pair(const GeneralSystem& g, int a, int b) {
  std::vector<int> out;
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (v == a || v == b) continue;
    if (g.edge_label(v, a) == std::optional<int>(2) && g.edge_label(v, b) == std::optional<int>(2))
      out.push_back(v);
  }
  return out;
}

// Connected components of the subgraph induced on `pool`.
inline std::vector<std::vector<int>> induced_components(const GeneralSystem& g,
                                                        const std::vector<int>& pool) {
  std::set<int> in(pool.begin(), pool.end());
  std::vector<std::vector<int>> comps;
  std::set<int> seen;
  for (int v : pool) {
    if (seen.count(v)) continue;
    std::vector<int> comp, frontier{v};
    seen.insert(v);
    while (!frontier.empty()) {
      std::vector<int> next;
      for (int x : frontier) {
        comp.push_back(x);
        for (int u : g.neighbours(x))
          if (in.count(u) && seen.insert(u).second) next.push_back(u);
      }
      frontier = std::move(next);
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

}  // namespace detail

inline TwistMove make_twist(const GeneralSystem& g, int a, int b, std::vector<int> J) {
  auto label = g.edge_label(a, b);
  if (!label) throw std::invalid_argument("twist pair must span a finite dihedral");
  TwistMove t;
  t.I = {a, b};
  t.Iperp = detail::perp_of_pair(g, a, b);
  std::sort(J.begin(), J.end());
  t.J = J;
  std::set<int> excluded{a, b};
  excluded.insert(t.Iperp.begin(), t.Iperp.end());
  for (int j : J)
    if (excluded.count(j)) throw std::invalid_argument("J meets I or its perp");
  excluded.insert(J.begin(), J.end());
  for (int v = 0; v < g.vertex_count(); ++v)
    if (!excluded.count(v)) t.K.push_back(v);
  for (int j : t.J)
    for (int k : t.K)
      if (g.edge_label(j, k))
        throw std::invalid_argument("pair not admissible: finite label between J and K");
  t.delta_word = detail::delta_base_word(g, a, b, *label);
  t.diagram_fixing = *label % 2 == 0;
  return t;
}

bool in_supported_class(const GeneralSystem& g);

/// All admissible twists with |I| = 2 and both J and K nonempty. J must
/// be a union of connected components of the graph induced outside
/// I u I^perp, which is exactly the separation condition.
inline std::vector<TwistMove> admissible_pairs(const GeneralSystem& g) {
  if (!in_supported_class(g)) throw OutOfClass("diagram outside the supported class");
  std::vector<TwistMove> out;
  for (auto& [e, label] : g.edges()) {
    auto [a, b] = e;
    auto perp = detail::perp_of_pair(g, a, b);
    std::set<int> excluded{a, b};
    excluded.insert(perp.begin(), perp.end());
    std::vector<int> pool;
    for (int v = 0; v < g.vertex_count(); ++v)
      if (!excluded.count(v)) pool.push_back(v);
    auto comps = detail::induced_components(g, pool);
    const std::size_t c = comps.size();
    if (c < 2 || c > 20) continue;  // need both J and K nonempty
    for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << c); ++mask) {
      std::vector<int> J;
      for (std::size_t i = 0; i < c; ++i)
        if (mask & (std::size_t{1} << i)) J.insert(J.end(), comps[i].begin(), comps[i].end());
      out.push_back(make_twist(g, a, b, std::move(J)));
    }
  }
  return out;
}

/// Apply the twist: K-vertices get conjugated by Delta_I (expressions
/// updated), and for an odd I-edge every K-to-I edge swaps its endpoint
/// inside I, since conjugation by Delta_I swaps the two I-generators.
/// Even I-edges fix the diagram; the move only rewrites expressions.
inline GeneralSystem apply_twist(const GeneralSystem& g, const TwistMove& t) {
  GeneralSystem out = g;
  const auto [a, b] = t.I;
  for (int k : t.K) {
    std::vector<int> w = t.delta_word;
    const auto& e = g.expression(k);
    w.insert(w.end(), e.begin(), e.end());
    w.insert(w.end(), t.delta_word.rbegin(), t.delta_word.rend());
    out.set_expression(k, std::move(w));
  }
  if (!t.diagram_fixing) {
    for (int k : t.K) {
      auto la = g.edge_label(k, a);
      auto lb = g.edge_label(k, b);
      out.remove_edge(k, a);
      out.remove_edge(k, b);
      if (la) out.set_edge(k, b, *la);
      if (lb) out.set_edge(k, a, *lb);
    }
  }
  return out;
}

/// Vertices tau having a unique partner t with m(tau, t) = 2 mod 4 such
/// that every other finite label at tau is a 2 shared with t.
inline std::vector<std::pair<int, int>> find_pseudo_transpositions(const GeneralSystem& g) {
  std::vector<std::pair<int, int>> out;
  for (int tau = 0; tau < g.vertex_count(); ++tau) {
    int partner = -1;
    bool unique = true;
    for (int t = 0; t < g.vertex_count(); ++t) {
      if (t == tau) continue;
      auto l = g.edge_label(tau, t);
      if (l && *l % 4 == 2) {
        if (partner != -1) unique = false;
        partner = t;
      }
    }
    if (partner < 0 || !unique) continue;
    bool ok = true;
    for (int s = 0; s < g.vertex_count() && ok; ++s) {
      if (s == tau || s == partner) continue;
      auto l = g.edge_label(tau, s);
      if (!l) continue;
      if (*l != 2 || g.edge_label(partner, s) != std::optional<int>(2)) ok = false;
    }
    if (ok) out.push_back({tau, partner});
  }
  return out;
}

/// Blow-up of a pseudo-transposition with label 4k+2, k >= 1: the edge
/// becomes the (2, 2, 2k+1)-triangle on the partner t, the new vertex
/// tau t tau and the central involution Delta_{tau t}; rank grows by one.
inline GeneralSystem blow_up(const GeneralSystem& g, int tau) {
  auto pts = find_pseudo_transpositions(g);
  int t = -1;
  for (auto& [x, partner] : pts)
    if (x == tau) t = partner;
  if (t < 0) throw std::invalid_argument(g.name(tau) + " is not a pseudo-transposition");
  const int label = *g.edge_label(tau, t);
  if (label == 2)
    throw std::invalid_argument("blow-up of a label-2 edge is degenerate");
  const int k = (label - 2) / 4;

  GeneralSystem out = g;
  // tau t tau
  std::vector<int> eu = g.expression(tau);
  { const auto& et = g.expression(t); eu.insert(eu.end(), et.begin(), et.end()); }
  { const auto& e2 = g.expression(tau); eu.insert(eu.end(), e2.begin(), e2.end()); }
  // Delta_{tau t} = (t tau)^(2k+1): alternating word of 4k+2 letters.
  std::vector<int> ed;
  for (int x = 0; x < label; ++x) {
    const auto& e = g.expression(x % 2 == 0 ? t : tau);
    ed.insert(ed.end(), e.begin(), e.end());
  }
  int u = out.add_vertex(g.name(tau) + "'", std::move(eu));
  int d = out.add_vertex(g.name(tau) + "''", std::move(ed));
  out.set_edge(t, u, 2 * k + 1);
  out.set_edge(t, d, 2);
  out.set_edge(u, d, 2);
  for (int s : g.neighbours(tau)) {
    if (s == t) continue;
    out.set_edge(s, u, 2);
    out.set_edge(s, d, 2);
  }
  // Removing tau also drops its old edges; u and d were appended after
  // tau's index only if tau < them, which holds since they are new.
  out.remove_vertex(tau);
  return out;
}

/// Reverse of blow_up: a (2, 2, 2k+1)-triangle whose apex (the vertex on
/// both 2-edges) has no other neighbours collapses to a single edge
/// labelled 4k+2.
inline GeneralSystem triangle_eliminate(const GeneralSystem& g, std::array<int, 3> triple) {
  auto [x, y, z] = triple;
  auto need = [&](int u, int v) {
    auto l = g.edge_label(u, v);
    if (!l) throw std::invalid_argument("triple is not a triangle");
    return *l;
  };
  int lxy = need(x, y), lxz = need(x, z), lyz = need(y, z);
  int apex, p, q, odd;
  if (lxy % 2 == 1 && lxz == 2 && lyz == 2) {
    apex = z; p = x; q = y; odd = lxy;
  } else if (lxz % 2 == 1 && lxy == 2 && lyz == 2) {
    apex = y; p = x; q = z; odd = lxz;
  } else if (lyz % 2 == 1 && lxy == 2 && lxz == 2) {
    apex = x; p = y; q = z; odd = lyz;
  } else {
    throw std::invalid_argument("triangle labels are not {2, 2, odd}");
  }
  if (odd < 3) throw std::invalid_argument("triangle labels are not {2, 2, odd}");
  if (g.degree(apex) != 2) throw std::invalid_argument("apex has extra neighbours");
  const int k = (odd - 1) / 2;

  // One endpoint of the odd edge is kept (t); the folded one (u) may only
  // have the triangle and common label-2 neighbours.
  auto foldable = [&](int u, int t) {
    for (int s : g.neighbours(u)) {
      if (s == t || s == apex) continue;
      if (g.edge_label(u, s) != std::optional<int>(2)) return false;
      if (g.edge_label(t, s) != std::optional<int>(2)) return false;
    }
    return true;
  };
  int t = -1, u = -1;
  // Prefer folding the endpoint of smaller degree, matching the blow-up shape.
  for (auto [cu, ct] : {std::pair{p, q}, std::pair{q, p}}) {
    if (!foldable(cu, ct)) continue;
    if (u == -1 || g.degree(cu) < g.degree(u)) {
      u = cu;
      t = ct;
    }
  }
  if (u < 0) throw std::invalid_argument("no foldable endpoint in the triangle");

  GeneralSystem out = g;
  // tau = Delta (t u)^k t.
  std::vector<int> etau = g.expression(apex);
  for (int rep = 0; rep < k; ++rep) {
    const auto& et = g.expression(t);
    const auto& eu = g.expression(u);
    etau.insert(etau.end(), et.begin(), et.end());
    etau.insert(etau.end(), eu.begin(), eu.end());
  }
  { const auto& et = g.expression(t); etau.insert(etau.end(), et.begin(), et.end()); }
  int tau = out.add_vertex(g.name(u) + "'", std::move(etau));
  out.set_edge(t, tau, 4 * k + 2);
  for (int s : g.neighbours(u))
    if (s != t && s != apex) out.set_edge(s, tau, 2);
  // Remove apex and u; adjust indices (remove the larger first).
  int hi = std::max(apex, u), lo = std::min(apex, u);
  out.remove_vertex(hi);
  out.remove_vertex(lo);
  return out;
}

namespace detail {

inline std::vector<std::array<int, 3>> triangles(const GeneralSystem& g) {
  std::vector<std::array<int, 3>> out;
  const int n = g.vertex_count();
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      if (!g.edge_label(a, b)) continue;
      for (int c = b + 1; c < n; ++c)
        if (g.edge_label(a, c) && g.edge_label(b, c)) out.push_back({a, b, c});
    }
  return out;
}

// When both endpoints of a triangle's odd edge carry outside subtrees,
// elimination is blocked; a twist in the odd edge moves one side's
// attachments across first.
inline std::optional<TwistMove> cleaning_twist(const GeneralSystem& g, std::array<int, 3> tri) {
  auto [x, y, z] = tri;
  int p = -1, q = -1;
  for (auto [u, v] : {std::pair{x, y}, std::pair{x, z}, std::pair{y, z}}) {
    auto l = g.edge_label(u, v);
    if (l && *l % 2 == 1) {
      p = u;
      q = v;
    }
  }
  if (p < 0) return std::nullopt;
  std::set<int> excluded{p, q};
  for (int v : perp_of_pair(g, p, q)) excluded.insert(v);
  std::vector<int> pool;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (!excluded.count(v)) pool.push_back(v);
  auto comps = induced_components(g, pool);
  std::vector<int> J;
  bool q_attached = false;
  for (const auto& comp : comps) {
    bool at_p = false, at_q = false;
    for (int v : comp) {
      if (g.edge_label(v, p)) at_p = true;
      if (g.edge_label(v, q)) at_q = true;
    }
    if (at_p && at_q) return std::nullopt;  // cycle through the pair: out of class
    if (at_p) J.insert(J.end(), comp.begin(), comp.end());
    if (at_q) q_attached = true;
  }
  if (!q_attached) return std::nullopt;  // nothing to move
  try {
    return make_twist(g, p, q, std::move(J));
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

inline bool is_tree(const GeneralSystem& g) {
  return g.connected() && static_cast<int>(g.edges().size()) == g.vertex_count() - 1;
}

inline bool pendant_even_edges(const GeneralSystem& g) {
  for (auto& [e, label] : g.edges()) {
    if (label % 2 == 1) continue;
    if (g.degree(e.first) > 1 && g.degree(e.second) > 1) return false;
  }
  return true;
}

// Eliminate every (2,2,odd)-triangle, twisting attachments aside when
// both odd-edge endpoints are busy; empty result when a triangle fails
// the pattern.
inline std::optional<GeneralSystem> eliminate_all_triangles(const GeneralSystem& g0,
                                                            std::vector<std::string>* trail = nullptr) {
  GeneralSystem g = g0;
  while (true) {
    auto tris = triangles(g);
    if (tris.empty()) return g;
    bool progressed = false;
    for (auto& t : tris) {
      try {
        GeneralSystem nxt = triangle_eliminate(g, t);
        if (trail)
          trail->push_back("eliminate triangle {" + g.name(t[0]) + "," + g.name(t[1]) + "," +
                           g.name(t[2]) + "}");
        g = std::move(nxt);
        progressed = true;
        break;
      } catch (const std::invalid_argument&) {
      }
    }
    if (progressed) continue;
    for (auto& t : tris) {
      auto mv = cleaning_twist(g, t);
      if (!mv) continue;
      GeneralSystem twisted = apply_twist(g, *mv);
      try {
        GeneralSystem nxt = triangle_eliminate(twisted, t);
        if (trail) {
          trail->push_back(mv->describe(g));
          trail->push_back("eliminate triangle {" + g.name(t[0]) + "," + g.name(t[1]) + "," +
                           g.name(t[2]) + "}");
        }
        g = std::move(nxt);
        progressed = true;
        break;
      } catch (const std::invalid_argument&) {
      }
    }
    if (!progressed) return std::nullopt;
  }
}

}  // namespace detail

/// The class the normalization theorem covers: stars, trees whose even
/// edges are pendant, and such trees decorated with (2,2,odd)-triangles
/// that eliminate cleanly.
inline bool in_supported_class(const GeneralSystem& g) {
  if (g.vertex_count() < 3 || !g.connected()) return false;
  auto reduced = detail::eliminate_all_triangles(g);
  if (!reduced) return false;
  return detail::is_tree(*reduced) && detail::pendant_even_edges(*reduced);
}

/// Lemma-style tree normalization: walk every pendant edge down its odd
/// path to the root by dihedral twists. Returns the star together with
/// the twist sequence; each move is admissible where it is applied.
inline std::pair<GeneralSystem, std::vector<TwistMove>> tree_to_star(const GeneralSystem& g0) {
  if (!detail::is_tree(g0)) throw OutOfClass("tree_to_star needs a tree");
  if (!detail::pendant_even_edges(g0)) {
    for (auto& [e, label] : g0.edges())
      if (label % 2 == 0 && g0.degree(e.first) > 1 && g0.degree(e.second) > 1)
        throw OutOfClass("interior even edge " + g0.name(e.first) + "-" + g0.name(e.second));
  }
  GeneralSystem g = g0;
  std::vector<TwistMove> moves;
  if (g.is_star()) return {g, moves};

  int root = -1;
  for (int v = 0; v < g.vertex_count() && root < 0; ++v)
    for (int u : g.neighbours(v))
      if (*g.edge_label(v, u) % 2 == 1) {
        root = v;
        break;
      }
  if (root < 0) throw OutOfClass("no odd edge to anchor the normalization");

  while (!g.is_star()) {
    // Parents toward the root.
    std::vector<int> parent(static_cast<std::size_t>(g.vertex_count()), -1);
    std::vector<int> order{root};
    std::set<int> seen{root};
    for (std::size_t q = 0; q < order.size(); ++q)
      for (int u : g.neighbours(order[q]))
        if (seen.insert(u).second) {
          parent[static_cast<std::size_t>(u)] = order[q];
          order.push_back(u);
        }
    int t = -1;
    for (int v = 0; v < g.vertex_count(); ++v)
      if (v != root && g.degree(v) == 1 && parent[static_cast<std::size_t>(v)] != root) {
        t = v;
        break;
      }
    if (t < 0) break;  // every edge is incident to the root
    int s = parent[static_cast<std::size_t>(t)];
    int p = parent[static_cast<std::size_t>(s)];
    if (*g.edge_label(p, s) % 2 == 0)
      throw OutOfClass("interior even edge " + g.name(p) + "-" + g.name(s));
    std::vector<int> J;
    std::set<int> excl{p, s, t};
    for (int x : detail::perp_of_pair(g, p, s)) excl.insert(x);
    for (int v = 0; v < g.vertex_count(); ++v)
      if (!excl.count(v)) J.push_back(v);
    TwistMove mv = make_twist(g, p, s, J);
    g = apply_twist(g, mv);
    moves.push_back(std::move(mv));
  }
  return {g, moves};
}

/// Canonical form: rank and sorted label multiset of the star obtained by
/// eliminating all triangles and twisting the tree onto a star.
struct CanonicalForm {
  int rank = 0;
  std::vector<int> labels;

  friend bool operator==(const CanonicalForm& a, const CanonicalForm& b) {
    return a.rank == b.rank && a.labels == b.labels;
  }
  friend bool operator!=(const CanonicalForm& a, const CanonicalForm& b) { return !(a == b); }
};

struct CanonicalResult {
  CanonicalForm form;
  GeneralSystem star;
  std::vector<std::string> moves;  // human-readable move trail
};

inline CanonicalResult canonical_form_full(const GeneralSystem& g) {
  if (g.vertex_count() < 3 || !g.connected())
    throw OutOfClass("diagram outside the supported class");
  std::vector<std::string> trail;
  auto reduced = detail::eliminate_all_triangles(g, &trail);
  if (!reduced) throw OutOfClass("unsupported triangle pattern");
  GeneralSystem cur = std::move(*reduced);
  if (!detail::is_tree(cur) || !detail::pendant_even_edges(cur))
    throw OutOfClass("diagram outside the supported class");
  auto [star, moves] = tree_to_star(cur);
  for (const auto& m : moves) trail.push_back(m.describe(star));
  CanonicalResult res;
  res.form.rank = star.vertex_count();
  res.form.labels = star.label_multiset();
  res.star = std::move(star);
  res.moves = std::move(trail);
  return res;
}

inline CanonicalForm canonical_form(const GeneralSystem& g) { return canonical_form_full(g).form; }

enum class IsoVerdict { isomorphic, not_isomorphic, out_of_class };

inline IsoVerdict decide_isomorphism(const GeneralSystem& a, const GeneralSystem& b) {
  CanonicalForm ca, cb;
  try {
    ca = canonical_form(a);
    cb = canonical_form(b);
  } catch (const OutOfClass&) {
    return IsoVerdict::out_of_class;
  }
  return ca == cb ? IsoVerdict::isomorphic : IsoVerdict::not_isomorphic;
}

}  // namespace coxstar
