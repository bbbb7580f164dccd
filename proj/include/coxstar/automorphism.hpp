#pragma once

#include <map>
#include <queue>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "coxstar/group_element.hpp"
#include "coxstar/star_system.hpp"

namespace coxstar {

enum class BasicKind { inner, transvection, phi, psi, sigma, diagram };

/// Description of one generator of Aut(W):
///   inner(w)          conjugation by w
///   transvection(i)   si -> s0 si                      (i in I_2)
///   phi(i, t)         si -> si (s0 si)^(t-1)           (i not in I_2, gcd(t, m_i) = 1)
///   psi(i, j)         sj -> Delta_i sj Delta_i         (i in I_even, j != i)
///   sigma(i, j)       sj -> si sj si                   (i in I_2, j != i)
///   diagram(pi)       si -> s_pi(i)                    (label-preserving)
struct BasicAut {
  BasicKind kind = BasicKind::inner;
  int i = 0;
  int j = 0;
  int t = 0;
  std::vector<int> word;  // inner only
  Permutation perm;       // diagram only

  static BasicAut inner(std::vector<int> letters) {
    BasicAut b;
    b.kind = BasicKind::inner;
    b.word = std::move(letters);
    return b;
  }
  static BasicAut transvection(int i) {
    BasicAut b;
    b.kind = BasicKind::transvection;
    b.i = i;
    return b;
  }
  static BasicAut phi(int i, int t) {
    BasicAut b;
    b.kind = BasicKind::phi;
    b.i = i;
    b.t = t;
    return b;
  }
  static BasicAut psi(int i, int j) {
    BasicAut b;
    b.kind = BasicKind::psi;
    b.i = i;
    b.j = j;
    return b;
  }
  static BasicAut sigma(int i, int j) {
    BasicAut b;
    b.kind = BasicKind::sigma;
    b.i = i;
    b.j = j;
    return b;
  }
  static BasicAut diagram(Permutation p) {
    BasicAut b;
    b.kind = BasicKind::diagram;
    b.perm = std::move(p);
    return b;
  }
};

/// An automorphism of W, stored as the table of images of s0..sn. Two
/// automorphisms are equal iff their tables agree in normal form. The
/// optional provenance records a product of basic automorphisms composing
/// to this one; list [b1, ..., bk] means b1 o b2 o ... o bk (bk acts
/// first).
class Automorphism {
 public:
  static Automorphism identity(SystemPtr sys) {
    Automorphism a;
    a.sys_ = sys;
    for (int i = 0; i <= sys->leaf_count(); ++i)
      a.images_.push_back(GroupElement::generator(sys, i));
    a.provenance_ = std::vector<BasicAut>{};
    return a;
  }

  /// Wrap an image table without validating it (see
  /// verify_is_automorphism for the full check).
  static Automorphism from_images(SystemPtr sys, std::vector<GroupElement> images,
                                  std::optional<std::vector<BasicAut>> provenance = std::nullopt) {
    if (static_cast<int>(images.size()) != sys->leaf_count() + 1)
      throw std::invalid_argument("image table must list images of s0..sn");
    for (const auto& g : images)
      if (g.system() != *sys) throw std::invalid_argument("image over a different system");
    Automorphism a;
    a.sys_ = std::move(sys);
    a.images_ = std::move(images);
    a.provenance_ = std::move(provenance);
    return a;
  }

  const StarSystem& system() const { return *sys_; }
  const SystemPtr& system_ptr() const { return sys_; }
  const GroupElement& image(int i) const { return images_.at(static_cast<std::size_t>(i)); }
  const std::vector<GroupElement>& images() const { return images_; }
  const std::optional<std::vector<BasicAut>>& provenance() const { return provenance_; }
  void set_provenance(std::vector<BasicAut> p) { provenance_ = std::move(p); }

  bool is_identity() const {
    for (int i = 0; i < static_cast<int>(images_.size()); ++i)
      if (images_[static_cast<std::size_t>(i)] != GroupElement::generator(sys_, i)) return false;
    return true;
  }

  friend bool operator==(const Automorphism& a, const Automorphism& b) {
    return *a.sys_ == *b.sys_ && a.images_ == b.images_;
  }
  friend bool operator!=(const Automorphism& a, const Automorphism& b) { return !(a == b); }
  friend bool operator<(const Automorphism& a, const Automorphism& b) {
    return std::lexicographical_compare(a.images_.begin(), a.images_.end(), b.images_.begin(),
                                        b.images_.end());
  }

 private:
  Automorphism() = default;
  SystemPtr sys_;
  std::vector<GroupElement> images_;
  std::optional<std::vector<BasicAut>> provenance_;
};

/// Substitute images for letters: the image of g under a.
inline GroupElement apply(const Automorphism& a, const GroupElement& g) {
  if (a.system() != g.system())
    throw std::invalid_argument("automorphism and element over different systems");
  GroupElement out = GroupElement::identity(a.system_ptr());
  for (int l : g.letters()) out = out * a.image(l);
  return out;
}

inline Automorphism make_basic(SystemPtr sys, const BasicAut& b) {
  const int n = sys->leaf_count();
  auto table = [&] {
    std::vector<GroupElement> t;
    for (int i = 0; i <= n; ++i) t.push_back(GroupElement::generator(sys, i));
    return t;
  };
  std::vector<GroupElement> images = table();
  switch (b.kind) {
    case BasicKind::inner: {
      GroupElement w = GroupElement::from_letters(sys, b.word);
      GroupElement wi = w.inverse();
      for (auto& g : images) g = w * g * wi;
      break;
    }
    case BasicKind::transvection: {
      if (b.i < 1 || b.i > n || !sys->commuting_leaf(b.i))
        throw std::invalid_argument("transvection needs a leaf with label 2");
      images[static_cast<std::size_t>(b.i)] =
          GroupElement::generator(sys, 0) * GroupElement::generator(sys, b.i);
      break;
    }
    case BasicKind::phi: {
      if (b.i < 1 || b.i > n || sys->commuting_leaf(b.i))
        throw std::invalid_argument("phi needs a leaf with label > 2");
      const int m = sys->label(b.i);
      if (b.t < 1 || b.t >= m || std::gcd(b.t, m) != 1)
        throw std::invalid_argument("phi exponent must satisfy 1 <= t < m, gcd(t, m) = 1");
      // si (s0 si)^(t-1) = rho^(m - t) sigma
      images[static_cast<std::size_t>(b.i)] =
          GroupElement::from_dihedral(sys, {b.i, m - b.t, true});
      break;
    }
    case BasicKind::psi: {
      if (b.i < 1 || b.i > n || !sys->even_leaf(b.i))
        throw std::invalid_argument("psi conjugator index must be an even leaf");
      if (b.j < 1 || b.j > n || b.j == b.i)
        throw std::invalid_argument("psi target index invalid");
      GroupElement d = GroupElement::delta(sys, b.i);
      images[static_cast<std::size_t>(b.j)] = d * GroupElement::generator(sys, b.j) * d;
      break;
    }
    case BasicKind::sigma: {
      if (b.i < 1 || b.i > n || !sys->commuting_leaf(b.i))
        throw std::invalid_argument("sigma conjugator index must lie in I_2");
      if (b.j < 1 || b.j > n || b.j == b.i)
        throw std::invalid_argument("sigma target index invalid");
      GroupElement si = GroupElement::generator(sys, b.i);
      images[static_cast<std::size_t>(b.j)] = si * GroupElement::generator(sys, b.j) * si;
      break;
    }
    case BasicKind::diagram: {
      if (b.perm.degree() != n || !b.perm.preserves_labels(*sys))
        throw std::invalid_argument("diagram permutation must preserve labels");
      for (int i = 1; i <= n; ++i)
        images[static_cast<std::size_t>(i)] = GroupElement::generator(sys, b.perm.apply(i));
      break;
    }
  }
  return Automorphism::from_images(sys, std::move(images), std::vector<BasicAut>{b});
}

/// (a o b)(x) = a(b(x)).
inline Automorphism compose(const Automorphism& a, const Automorphism& b) {
  if (a.system() != b.system())
    throw std::invalid_argument("automorphisms over different systems");
  std::vector<GroupElement> images;
  for (const auto& g : b.images()) images.push_back(apply(a, g));
  std::optional<std::vector<BasicAut>> prov;
  if (a.provenance() && b.provenance()) {
    prov = *a.provenance();
    prov->insert(prov->end(), b.provenance()->begin(), b.provenance()->end());
  }
  return Automorphism::from_images(a.system_ptr(), std::move(images), std::move(prov));
}

inline Automorphism compose_basics(const SystemPtr& sys, const std::vector<BasicAut>& list) {
  Automorphism out = Automorphism::identity(sys);
  for (const auto& b : list) out = compose(out, make_basic(sys, b));
  return out;
}

inline BasicAut invert_basic(const SystemPtr& sys, const BasicAut& b) {
  switch (b.kind) {
    case BasicKind::inner: {
      GroupElement w = GroupElement::from_letters(sys, b.word);
      return BasicAut::inner(w.inverse().letters());
    }
    case BasicKind::phi: {
      const int m = sys->label(b.i);
      int tinv = 1;
      for (int x = 1; x < m; ++x)
        if ((x * b.t) % m == 1) tinv = x;
      return BasicAut::phi(b.i, tinv);
    }
    case BasicKind::diagram:
      return BasicAut::diagram(b.perm.inverse());
    default:
      return b;  // transvections, psi, sigma are involutions
  }
}

struct Factorization;
struct FactorizeOutcome;
FactorizeOutcome factorize_automorphism(const Automorphism& a);

/// Decomposition per the structure theorem: a = inner(w) o p o t o diag,
/// with p a product of partial conjugations, t a set of transvections
/// and diag a label-preserving leaf permutation.
struct Factorization {
  GroupElement conjugator;
  std::vector<BasicAut> p_word;
  std::vector<int> t_set;  // ascending indices in I_2
  Permutation diagram;
};

struct FactorizeOutcome {
  std::optional<Factorization> result;
  std::string error;
  int failing_generator = -1;

  bool ok() const { return result.has_value(); }
};

inline std::vector<BasicAut> factorization_basics(const Factorization& f) {
  std::vector<BasicAut> out;
  if (!f.conjugator.is_identity()) out.push_back(BasicAut::inner(f.conjugator.letters()));
  out.insert(out.end(), f.p_word.begin(), f.p_word.end());
  for (int i : f.t_set) out.push_back(BasicAut::transvection(i));
  if (!f.diagram.is_identity()) out.push_back(BasicAut::diagram(f.diagram));
  return out;
}

inline Automorphism recompose(const SystemPtr& sys, const Factorization& f) {
  return compose_basics(sys, factorization_basics(f));
}

inline Automorphism invert_aut(const Automorphism& a) {
  std::vector<BasicAut> list;
  if (a.provenance()) {
    list = *a.provenance();
  } else {
    FactorizeOutcome out = factorize_automorphism(a);
    if (!out.ok())
      throw std::invalid_argument("cannot invert: " + out.error);
    list = factorization_basics(*out.result);
  }
  std::vector<BasicAut> inv;
  for (auto it = list.rbegin(); it != list.rend(); ++it)
    inv.push_back(invert_basic(a.system_ptr(), *it));
  Automorphism out = compose_basics(a.system_ptr(), inv);
  return out;
}

/// Conjugacy class of an involution, when it is the class of a generator:
/// the core of the cyclic reduction lands in <s0> or a single factor and
/// is classified there. Rotation cores (Delta-type involutions) belong to
/// no generator class.
inline std::optional<GeneratorClass> involution_class(const GroupElement& g) {
  const GroupElement core = cyclically_reduce(g).core;
  if (core.syllable_count() == 0)
    return core.tail() ? std::optional<GeneratorClass>(GeneratorClass::central()) : std::nullopt;
  if (core.syllable_count() >= 2) return std::nullopt;
  DihedralElement d = core.syllables().front();
  if (core.tail()) d = dihedral::mul(core.system(), d, dihedral::center_gen(d.factor));
  if (!d.ref) return std::nullopt;
  const int m = core.system().label(d.factor);
  if (m % 2 == 1 || d.rot % 2 == 0) return GeneratorClass::central();
  return GeneratorClass::even(d.factor);
}

namespace detail {

// Solve h = u s0 u^-1; empty result when h is not conjugate to s0. The
// conjugator is only determined modulo C_W(s0); pick the shorter word of
// the pair {u, u s0}.
inline std::optional<GroupElement> conjugator_to_s0(const GroupElement& h) {
  auto [core, conj] = cyclically_reduce(h);
  const SystemPtr& sys = h.system_ptr();
  std::optional<GroupElement> u;
  if (core.syllable_count() == 0) {
    if (!core.tail()) return std::nullopt;
    u = conj;  // h = conj s0 conj^-1
  } else if (core.syllable_count() >= 2) {
    return std::nullopt;
  } else {
    DihedralElement d = core.syllables().front();
    if (core.tail()) d = dihedral::mul(*sys, d, dihedral::center_gen(d.factor));
    if (!d.ref) return std::nullopt;  // rotation, central-type involution
    const int m = sys->label(d.factor);
    // rho^x (rho^r sigma) rho^-x = rho^(r + 2x) sigma; need r + 2x = 0 mod m.
    int x = -1;
    if (d.rot % 2 == 0)
      x = dihedral::norm_rot(-(d.rot / 2), m);
    else if (m % 2 == 1)
      x = dihedral::norm_rot(-((d.rot + m) / 2), m);
    else
      return std::nullopt;  // odd rotation in an even factor: class of si
    // core = rho^-x s0 rho^x.
    GroupElement rx =
        GroupElement::from_dihedral(sys, {d.factor, dihedral::norm_rot(-x, m), false});
    u = conj * rx;
  }
  GroupElement alt = *u * GroupElement::generator(sys, 0);
  return alt.letters().size() < u->letters().size() ? alt : *u;
}

// Peel leading Delta conjugators: g = Delta_{j1} ... Delta_{jq} y
// Delta_{jq} ... Delta_{j1} with y a single syllable of the factor
// `target` (plus tail). Returns the conjugator word [j1..jq] and y.
struct DeltaStrip {
  std::vector<int> deltas;
  GroupElement remainder;
};

inline std::optional<DeltaStrip> strip_deltas(const GroupElement& g0, int target) {
  GroupElement g = g0;
  std::vector<int> deltas;
  const SystemPtr& sys = g0.system_ptr();
  while (true) {
    const int k = g.syllable_count();
    if (k == 0) return std::nullopt;
    if (k == 1) {
      if (g.syllables().front().factor != target) return std::nullopt;
      return DeltaStrip{std::move(deltas), g};
    }
    const int f = g.syllables().front().factor;
    if (!sys->even_leaf(f)) return std::nullopt;
    GroupElement d = GroupElement::delta(sys, f);
    GroupElement g2 = d * g * d;
    if (g2.syllable_count() >= k) return std::nullopt;
    g = std::move(g2);
    deltas.push_back(f);
  }
}

// The single dihedral element appearing in a one-syllable word, with the
// tail folded in.
inline DihedralElement combined_syllable(const GroupElement& g) {
  DihedralElement d = g.syllables().front();
  if (g.tail()) d = dihedral::mul(g.system(), d, dihedral::center_gen(d.factor));
  return d;
}

// Bounded Whitehead-move search expressing an automorphism of the shape
// sj -> delta_j sj delta_j^-1 (delta_j in Delta, j in I_even, all other
// generators fixed) as a word in the psi_{k,j} with k, j in I_even. Moves
// multiply on the right by products prod_{a in A} psi_{k,a}; the search
// explores every tuple whose total conjugator length does not exceed the
// initial one, which suffices by peak reduction.
struct SpeSearch {
  bool ok = false;
  std::vector<BasicAut> word;  // composition list, first entry outermost
};

inline std::vector<int> normalize_conj_word(std::vector<int> w, int j) {
  auto reduce = [&] {
    bool again = true;
    while (again) {
      again = false;
      for (std::size_t p = 0; p + 1 < w.size(); ++p)
        if (w[p] == w[p + 1]) {
          w.erase(w.begin() + static_cast<std::ptrdiff_t>(p),
                  w.begin() + static_cast<std::ptrdiff_t>(p) + 2);
          again = true;
          break;
        }
    }
  };
  reduce();
  while (!w.empty() && w.back() == j) {
    w.pop_back();
    reduce();
  }
  return w;
}

inline SpeSearch spe_decompose(const std::vector<int>& even_indices,
                               std::map<int, std::vector<int>> initial,
                               std::size_t state_cap = 2000000) {
  using State = std::map<int, std::vector<int>>;
  for (auto& [j, w] : initial) w = normalize_conj_word(w, j);
  auto total = [](const State& s) {
    std::size_t t = 0;
    for (auto& [j, w] : s) t += w.size();
    return t;
  };
  auto trivial = [&](const State& s) { return total(s) == 0; };

  struct Move {
    int k;
    std::vector<int> targets;
  };
  if (trivial(initial)) return {true, {}};
  const std::size_t bound = total(initial);

  std::map<State, std::pair<State, Move>> parent;  // state -> (previous, move)
  parent.emplace(initial, std::make_pair(State{}, Move{0, {}}));
  // Best-first by total conjugator length: the search descends greedily
  // and still exhausts the whole <= bound space if it has to.
  using QEntry = std::pair<std::pair<std::size_t, std::uint64_t>, State>;
  std::priority_queue<QEntry, std::vector<QEntry>, std::greater<QEntry>> queue;
  std::uint64_t seq = 0;
  queue.push({{total(initial), seq++}, initial});

  std::vector<std::vector<int>> subsets;  // nonempty subsets of indices
  auto enum_subsets = [&](const std::vector<int>& pool) {
    subsets.clear();
    const std::size_t m = pool.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
      std::vector<int> s;
      for (std::size_t b = 0; b < m; ++b)
        if (mask & (std::size_t{1} << b)) s.push_back(pool[b]);
      subsets.push_back(std::move(s));
    }
  };

  while (!queue.empty()) {
    State cur = std::move(queue.top().second);
    queue.pop();
    for (int k : even_indices) {
      std::vector<int> pool;
      for (int j : even_indices)
        if (j != k) pool.push_back(j);
      enum_subsets(pool);
      const std::vector<int>& dk = cur.at(k);
      std::vector<int> conj = dk;  // delta_k Delta_k delta_k^-1
      conj.push_back(k);
      conj.insert(conj.end(), dk.rbegin(), dk.rend());
      for (const auto& A : subsets) {
        State nxt = cur;
        for (int a : A) {
          std::vector<int> w = conj;
          const auto& da = cur.at(a);
          w.insert(w.end(), da.begin(), da.end());
          nxt[a] = normalize_conj_word(std::move(w), a);
        }
        const std::size_t len = total(nxt);
        if (len > bound) continue;
        if (parent.count(nxt)) continue;
        if (parent.size() >= state_cap) return {};
        parent.emplace(nxt, std::make_pair(cur, Move{k, A}));
        if (len == 0) {
          // Reconstruct: phi o w1 o ... o wr = id, so phi = wr o ... o w1,
          // and each move is a commuting product of involutions.
          std::vector<Move> path;
          State s = nxt;
          while (!(s == initial)) {
            auto& [prev, mv] = parent.at(s);
            path.push_back(mv);
            s = prev;
          }
          SpeSearch out;
          out.ok = true;
          for (const Move& mv : path)  // path is already wr ... w1
            for (int a : mv.targets) out.word.push_back(BasicAut::psi(mv.k, a));
          return out;
        }
        queue.push({{len, seq++}, std::move(nxt)});
      }
    }
  }
  return {};
}

}  // namespace detail

/// Factorization procedure following the structure theorem's proof:
/// (1) conjugate the image of s0 back to s0, (2) read the diagram
/// permutation off the factor hit by each cyclically reduced image,
/// (3) local adjustments in T x P_1 trivialize each factor component,
/// (4) the residual centralizer conjugators decompose into type-2 partial
/// conjugations. Fails (with the offending generator) exactly when the
/// table is not an automorphism.
inline FactorizeOutcome factorize_automorphism(const Automorphism& a) {
  const SystemPtr& sys = a.system_ptr();
  const int n = sys->leaf_count();
  auto fail = [](std::string msg, int gen) {
    FactorizeOutcome out;
    out.error = std::move(msg);
    out.failing_generator = gen;
    return out;
  };

  for (int i = 0; i <= n; ++i)
    if (!(a.image(i) * a.image(i)).is_identity())
      return fail("image of s" + std::to_string(i) + " is not an involution", i);

  // Step 1: a(s0) = w s0 w^-1.
  auto w = detail::conjugator_to_s0(a.image(0));
  if (!w) return fail("image of s0 is not conjugate to s0", 0);
  Automorphism phi1 = compose(make_basic(sys, BasicAut::inner(w->inverse().letters())), a);
  if (phi1.image(0) != GroupElement::generator(sys, 0))
    return fail("normalization of s0 failed", 0);

  // Step 2: the factor of each cyclic core defines the leaf permutation.
  std::vector<int> pi(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    GroupElement core = cyclically_reduce(phi1.image(i)).core;
    if (core.syllable_count() != 1)
      return fail("image of s" + std::to_string(i) + " does not land in a factor", i);
    pi[static_cast<std::size_t>(i)] = core.syllables().front().factor;
  }
  Permutation rho;
  try {
    rho = Permutation::from_images(pi);
  } catch (const std::invalid_argument&) {
    return fail("factor assignment is not a permutation", -1);
  }
  if (!rho.preserves_labels(*sys)) return fail("factor assignment does not preserve labels", -1);
  Automorphism phi2 = compose(phi1, make_basic(sys, BasicAut::diagram(rho.inverse())));

  // Step 3: phi2(si) = x_i y_i x_i^-1 with x_i in C_W(s0), y_i in W_i.
  std::vector<int> t_set;
  std::vector<BasicAut> p1_part;
  for (int i = 1; i <= n; ++i) {
    auto strip = detail::strip_deltas(phi2.image(i), i);
    if (!strip) return fail("image of s" + std::to_string(i) + " has no centralizer form", i);
    DihedralElement e = detail::combined_syllable(strip->remainder);
    const int m = sys->label(i);
    if (sys->commuting_leaf(i)) {
      if (e.ref) continue;  // y = si
      t_set.push_back(i);   // y = s0 si
      continue;
    }
    if (!e.ref) return fail("image of s" + std::to_string(i) + " is not a reflection", i);
    if (std::gcd(e.rot, m) != 1)
      return fail("image of s" + std::to_string(i) + " does not generate its factor", i);
    if (e.rot != m - 1) p1_part.push_back(BasicAut::phi(i, m - e.rot));
  }
  std::vector<BasicAut> tilde = p1_part;
  for (int i : t_set) tilde.push_back(BasicAut::transvection(i));
  Automorphism phi3 = compose(invert_aut(compose_basics(sys, tilde)), phi2);

  // Step 4a: shift the conjugators into Delta via P_3 elements.
  std::vector<BasicAut> p3_part;
  for (int i = 1; i <= n; ++i) {
    auto strip = detail::strip_deltas(phi3.image(i), i);
    if (!strip) return fail("conjugator of s" + std::to_string(i) + " is not in C_W(s0)", i);
    DihedralElement e = detail::combined_syllable(strip->remainder);
    if (e == dihedral::leaf_gen(*sys, i)) continue;
    if (e.ref && e.rot == 1 && !sys->commuting_leaf(i)) {
      p3_part.push_back(BasicAut::phi(i, sys->label(i) - 1));  // strips the s0 part
      continue;
    }
    return fail("unexpected local form at s" + std::to_string(i), i);
  }
  Automorphism phi4 = compose(compose_basics(sys, p3_part), phi3);

  // Step 4b: odd-leaf conjugators are free words in Delta.
  std::vector<BasicAut> p2o_part;
  for (int i : sys->odd_indices()) {
    auto strip = detail::strip_deltas(phi4.image(i), i);
    if (!strip || detail::combined_syllable(strip->remainder) != dihedral::leaf_gen(*sys, i))
      return fail("odd conjugator extraction failed at s" + std::to_string(i), i);
    for (auto it = strip->deltas.rbegin(); it != strip->deltas.rend(); ++it)
      p2o_part.push_back(BasicAut::psi(*it, i));
  }
  Automorphism phi5 = compose(invert_aut(compose_basics(sys, p2o_part)), phi4);

  // Step 4c: even-leaf conjugators decompose by Whitehead search.
  const auto even = sys->even_indices();
  std::map<int, std::vector<int>> tuple;
  for (int j : even) {
    auto strip = detail::strip_deltas(phi5.image(j), j);
    if (!strip || detail::combined_syllable(strip->remainder) != dihedral::leaf_gen(*sys, j))
      return fail("even conjugator extraction failed at s" + std::to_string(j), j);
    tuple[j] = strip->deltas;
  }
  for (int i : sys->odd_indices())
    if (phi5.image(i) != GroupElement::generator(sys, i))
      return fail("residual action on odd leaf s" + std::to_string(i), i);
  if (phi5.image(0) != GroupElement::generator(sys, 0)) return fail("residual action on s0", 0);
  detail::SpeSearch sp = detail::spe_decompose(even, std::move(tuple));
  if (!sp.ok) return fail("type-2 decomposition search failed", -1);

  // Assemble a = inner(w) o p o t o diag; the type-2 block moves past the
  // transvections by psi <-> sigma conjugation.
  std::vector<BasicAut> p_word = p1_part;
  auto push_conjugated = [&](const std::vector<BasicAut>& list) {
    for (const BasicAut& b : list) {
      bool flip = (b.kind == BasicKind::psi || b.kind == BasicKind::sigma) &&
                  std::find(t_set.begin(), t_set.end(), b.i) != t_set.end();
      if (!flip) {
        p_word.push_back(b);
      } else if (b.kind == BasicKind::psi) {
        p_word.push_back(BasicAut::sigma(b.i, b.j));
      } else {
        p_word.push_back(BasicAut::psi(b.i, b.j));
      }
    }
  };
  push_conjugated(p3_part);
  push_conjugated(p2o_part);
  push_conjugated(sp.word);

  Factorization f{*w, std::move(p_word), std::move(t_set), rho};
  if (recompose(sys, f) != a) return fail("recomposition mismatch", -1);
  FactorizeOutcome out;
  out.result = std::move(f);
  return out;
}

struct VerifyResult {
  bool ok = false;
  std::string detail;
};

/// Check that an image table defines an automorphism: the defining
/// relations must hold on the images and the factorization procedure must
/// succeed (which witnesses invertibility).
inline VerifyResult verify_is_automorphism(const SystemPtr& sys,
                                           const std::vector<GroupElement>& images) {
  const int n = sys->leaf_count();
  if (static_cast<int>(images.size()) != n + 1)
    return {false, "image table must have n + 1 rows"};
  for (int i = 0; i <= n; ++i)
    if (!(images[static_cast<std::size_t>(i)] * images[static_cast<std::size_t>(i)]).is_identity())
      return {false, "relation s" + std::to_string(i) + "^2 = 1 fails on images"};
  for (int j = 1; j <= n; ++j) {
    GroupElement r = images[0] * images[static_cast<std::size_t>(j)];
    auto o = order(r);
    if (!o || sys->label(j) % *o != 0)
      return {false, "relation (s0 s" + std::to_string(j) + ")^" +
                         std::to_string(sys->label(j)) + " = 1 fails on images"};
  }
  Automorphism a = Automorphism::from_images(sys, images);
  FactorizeOutcome out = factorize_automorphism(a);
  if (!out.ok()) return {false, "not invertible: " + out.error};
  return {true, ""};
}

/// Membership in Spe(W): every generator keeps its conjugacy class.
inline bool spe_membership(const Automorphism& a) {
  const StarSystem& sys = a.system();
  for (int i = 0; i <= sys.leaf_count(); ++i) {
    auto cls = involution_class(a.image(i));
    if (!cls || *cls != generator_class(sys, i)) return false;
  }
  return true;
}

}  // namespace coxstar
