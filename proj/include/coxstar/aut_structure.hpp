#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "coxstar/automorphism.hpp"

namespace coxstar {

inline unsigned long long euler_phi(int m) {
  unsigned long long result = static_cast<unsigned long long>(m);
  int x = m;
  for (int p = 2; p * p <= x; ++p) {
    if (x % p) continue;
    while (x % p == 0) x /= p;
    result -= result / static_cast<unsigned long long>(p);
  }
  if (x > 1) result -= result / static_cast<unsigned long long>(x);
  return result;
}

/// Splitting criterion for 1 -> Z_2 -> prod Z_m^x -> quot -> 1 with the
/// Z_2 embedded diagonally as -1: some m must be divisible by 4 or by a
/// prime congruent to 3 mod 4.
inline bool splitting_predicate(const std::vector<int>& labels) {
  for (int m : labels) {
    if (m % 4 == 0) return true;
    int x = m;
    for (int p = 2; p * p <= x; ++p)
      if (x % p == 0) {
        if (p % 4 == 3) return true;
        while (x % p == 0) x /= p;
      }
    if (x > 1 && x % 4 == 3) return true;
  }
  return false;
}

namespace detail {

inline std::vector<int> unit_group(int m) {
  std::vector<int> elems;
  for (int x = 1; x < m; ++x)
    if (std::gcd(x, m) == 1) elems.push_back(x);
  return elems;
}

inline std::set<int> unit_closure(int m, std::vector<int> gens) {
  std::set<int> sub{1};
  std::vector<int> frontier{1};
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int x : frontier)
      for (int g : gens) {
        int y = static_cast<int>((static_cast<long long>(x) * g) % m);
        if (sub.insert(y).second) next.push_back(y);
      }
    frontier = std::move(next);
  }
  return sub;
}

inline std::vector<int> minimal_generators(int m, const std::set<int>& subgroup) {
  std::vector<int> gens;
  std::set<int> have{1};
  for (int x : subgroup) {
    if (have.count(x)) continue;
    gens.push_back(x);
    have = unit_closure(m, gens);
    if (have.size() == subgroup.size()) break;
  }
  return gens;
}

}  // namespace detail

/// A complement of <m-1> in Z_m^x, found by scanning the index-2
/// subgroups (kernels of the characters to Z_2, read off the quotient by
/// the squares). Returns a generating set, or nothing when -1 is a
/// square.
inline std::optional<std::vector<int>> unit_group_complement(int m) {
  if (m < 3 || m > 1000) throw std::out_of_range("supported range is 3 <= m <= 1000");
  const auto elems = detail::unit_group(m);
  std::vector<int> sq;
  for (int x : elems) sq.push_back(static_cast<int>((static_cast<long long>(x) * x) % m));
  std::set<int> squares = detail::unit_closure(m, sq);
  if (squares.count(m - 1)) return std::nullopt;

  // Coset classes modulo the squares form an F2 space; characters are
  // linear forms on it.
  std::vector<std::set<int>> cosets;
  std::map<int, int> coset_of;
  for (int x : elems) {
    if (coset_of.count(x)) continue;
    std::set<int> c;
    for (int s : squares) c.insert(static_cast<int>((static_cast<long long>(x) * s) % m));
    int id = static_cast<int>(cosets.size());
    for (int y : c) coset_of[y] = id;
    cosets.push_back(std::move(c));
  }
  // Basis of the quotient: greedily pick classes independent of the span.
  std::vector<int> basis_elems;
  std::set<int> span{1};
  std::vector<std::pair<int, std::vector<int>>> coords;  // element -> F2 coords
  for (int x : elems) {
    if (span.count(x)) continue;
    std::vector<int> g = basis_elems;
    g.push_back(x);
    auto bigger = detail::unit_closure(m, [&] {
      std::vector<int> withsq(squares.begin(), squares.end());
      withsq.insert(withsq.end(), g.begin(), g.end());
      return withsq;
    }());
    basis_elems.push_back(x);
    span = std::move(bigger);
  }
  const std::size_t r = basis_elems.size();
  auto coords_of = [&](int x) {
    // Solve x = prod basis^eps modulo squares by direct enumeration.
    for (std::uint32_t mask = 0; mask < (1u << r); ++mask) {
      long long v = 1;
      for (std::size_t b = 0; b < r; ++b)
        if (mask & (1u << b)) v = (v * basis_elems[b]) % m;
      if (coset_of.at(static_cast<int>(v)) == coset_of.at(x)) return mask;
    }
    throw std::logic_error("coset coordinates not found");
  };
  const std::uint32_t minus1 = coords_of(m - 1);
  // Exhaust the nonzero linear forms; keep the first whose kernel misses -1.
  for (std::uint32_t lambda = 1; lambda < (1u << r); ++lambda) {
    if (__builtin_parity(lambda & minus1) == 0) continue;  // lambda(-1) = 0
    std::vector<int> kernel_gens;
    for (int x : elems)
      if (__builtin_parity(lambda & coords_of(x)) == 0) kernel_gens.push_back(x);
    std::set<int> K = detail::unit_closure(m, kernel_gens);
    if (K.count(m - 1) || 2 * K.size() != elems.size()) continue;
    return detail::minimal_generators(m, K);
  }
  return std::nullopt;
}

/// The finite elementary abelian group P_3 = P_1 n P_2: all products of
/// the involutions phi(j, m_j - 1) when some label equals 2, trivial
/// otherwise.
inline std::vector<Automorphism> enumerate_P3(const SystemPtr& sys) {
  std::vector<Automorphism> out{Automorphism::identity(sys)};
  if (sys->n_two() == 0) return out;
  std::vector<int> idx;
  for (int i = 1; i <= sys->leaf_count(); ++i)
    if (!sys->commuting_leaf(i)) idx.push_back(i);
  for (int i : idx) {
    std::vector<Automorphism> next = out;
    Automorphism g = make_basic(sys, BasicAut::phi(i, sys->label(i) - 1));
    for (const auto& a : out) next.push_back(compose(a, g));
    out = std::move(next);
  }
  return out;
}

struct RelationCheck {
  std::string identity;
  std::string instance;
  bool pass = false;
};

struct RelationReport {
  std::vector<RelationCheck> checks;
  bool all_pass = true;

  void add(std::string id, std::string inst, bool ok) {
    checks.push_back({std::move(id), std::move(inst), ok});
    all_pass = all_pass && ok;
  }
};

namespace detail {

inline std::vector<Permutation> diagram_elements(const StarSystem& sys, std::size_t cap = 720) {
  auto gens = diagram_automorphisms(sys).generators;
  std::set<Permutation> seen{Permutation::identity(sys.leaf_count())};
  std::vector<Permutation> frontier(seen.begin(), seen.end());
  while (!frontier.empty() && seen.size() <= cap) {
    std::vector<Permutation> next;
    for (const auto& p : frontier)
      for (const auto& g : gens) {
        Permutation q = p * g;
        if (seen.insert(q).second) next.push_back(q);
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

inline std::vector<int> coprime_exponents(int m) {
  std::vector<int> out;
  for (int t = 1; t < m; ++t)
    if (std::gcd(t, m) == 1) out.push_back(t);
  return out;
}

// Exponent list for suite instantiation; truncated on very large labels
// so the self-test stays interactive, always keeping m - 1.
inline std::vector<int> suite_exponents(int m, std::size_t cap = 24) {
  auto out = coprime_exponents(m);
  if (out.size() > cap) {
    out.resize(cap);
    out.push_back(m - 1);
  }
  return out;
}

}  // namespace detail

/// Instantiates and checks, as image-table identities, every relation the
/// structure theory asserts between the basic automorphisms:
/// the inner expressions (4.1) and (4.2), the Diag conjugation formulas
/// (4.3)-(4.6), the psi/sigma/phi identities, commutation of T with P_1,
/// the abelian structure of T and of each P_{1,i}, the transvection
/// conjugation rule and the mixed type-2 conjugation rule.
inline RelationReport relation_suite(const SystemPtr& sys) {
  RelationReport rep;
  const int n = sys->leaf_count();
  const auto odd = sys->odd_indices();
  const auto even = sys->even_indices();
  const auto two = sys->two_indices();
  std::vector<int> not_two;
  for (int i = 1; i <= n; ++i)
    if (!sys->commuting_leaf(i)) not_two.push_back(i);
  const Automorphism id = Automorphism::identity(sys);
  auto tau = [&](int i) { return make_basic(sys, BasicAut::transvection(i)); };
  auto phi = [&](int i, int t) { return make_basic(sys, BasicAut::phi(i, t)); };
  auto psi = [&](int i, int j) { return make_basic(sys, BasicAut::psi(i, j)); };
  auto sg = [&](int i, int j) { return make_basic(sys, BasicAut::sigma(i, j)); };
  auto inner_of = [&](const GroupElement& w) {
    return make_basic(sys, BasicAut::inner(w.letters()));
  };

  // (4.1)  s0^ = prod_{j not in I_2} phi_{j, m_j - 1}
  {
    Automorphism rhs = id;
    for (int j : not_two) rhs = compose(rhs, phi(j, sys->label(j) - 1));
    rep.add("Eq(4.1)", "s0^ = prod phi(j, m_j - 1)",
            inner_of(GroupElement::generator(sys, 0)) == rhs);
  }
  // (4.2)  Delta_j^ = prod_{k != j} psi_{j,k}
  for (int j : even) {
    Automorphism rhs = id;
    for (int k = 1; k <= n; ++k)
      if (k != j) rhs = compose(rhs, psi(j, k));
    rep.add("Eq(4.2)", "Delta_" + std::to_string(j) + "^ = prod psi",
            inner_of(GroupElement::delta(sys, j)) == rhs);
  }
  // (4.3)-(4.6): Diag conjugation.
  for (const auto& perm : detail::diagram_elements(*sys)) {
    if (perm.is_identity()) continue;
    Automorphism r = make_basic(sys, BasicAut::diagram(perm));
    Automorphism rinv = make_basic(sys, BasicAut::diagram(perm.inverse()));
    auto conj = [&](const Automorphism& a) { return compose(rinv, compose(a, r)); };
    Permutation pinv = perm.inverse();
    std::string ps = "rho";
    for (int i : two)
      rep.add("Eq(4.3)", ps + "^-1 tau_" + std::to_string(i) + " rho",
              conj(tau(i)) == tau(pinv.apply(i)));
    for (int i : not_two)
      for (int t : detail::suite_exponents(sys->label(i)))
        rep.add("Eq(4.4)", ps + "^-1 phi_(" + std::to_string(i) + "," + std::to_string(t) + ") rho",
                conj(phi(i, t)) == phi(pinv.apply(i), t));
    for (int i : even)
      for (int j = 1; j <= n; ++j)
        if (j != i)
          rep.add("Eq(4.5)",
                  ps + "^-1 psi_(" + std::to_string(i) + "," + std::to_string(j) + ") rho",
                  conj(psi(i, j)) == psi(pinv.apply(i), pinv.apply(j)));
    for (int i : two)
      for (int j = 1; j <= n; ++j)
        if (j != i)
          rep.add("Eq(4.6)",
                  ps + "^-1 sigma_(" + std::to_string(i) + "," + std::to_string(j) + ") rho",
                  conj(sg(i, j)) == sg(pinv.apply(i), pinv.apply(j)));
  }
  // psi sigma = phi_{j, m_j - 1} for i in I_2, j outside I_2.
  for (int i : two)
    for (int j : not_two)
      rep.add("psi.sigma=phi",
              "(" + std::to_string(i) + "," + std::to_string(j) + ")",
              compose(psi(i, j), sg(i, j)) == phi(j, sys->label(j) - 1));
  // sigma = psi exactly on I_2 targets.
  for (int i : two)
    for (int j = 1; j <= n; ++j)
      if (j != i)
        rep.add("sigma=psi iff j in I_2",
                "(" + std::to_string(i) + "," + std::to_string(j) + ")",
                (sg(i, j) == psi(i, j)) == sys->commuting_leaf(j));
  // T x P_1 (elementwise commutation), T elementary abelian, P_1 product law.
  for (int i : two) {
    rep.add("T involutive", "tau_" + std::to_string(i), compose(tau(i), tau(i)) == id);
    for (int j : two)
      rep.add("T abelian", "(" + std::to_string(i) + "," + std::to_string(j) + ")",
              compose(tau(i), tau(j)) == compose(tau(j), tau(i)));
    for (int j : not_two)
      for (int t : detail::suite_exponents(sys->label(j)))
        rep.add("T,P1 commute", "tau_" + std::to_string(i) + ", phi_(" + std::to_string(j) + "," +
                                    std::to_string(t) + ")",
                compose(tau(i), phi(j, t)) == compose(phi(j, t), tau(i)));
  }
  for (int i : not_two) {
    const int m = sys->label(i);
    for (int t : detail::suite_exponents(m))
      for (int u : detail::suite_exponents(m)) {
        int tu = (t * u) % m;
        Automorphism rhs = tu == 1 ? id : phi(i, tu);
        rep.add("P1 product", "phi_(" + std::to_string(i) + ") " + std::to_string(t) + "*" +
                                  std::to_string(u),
                compose(phi(i, t), phi(i, u)) == rhs);
      }
  }
  // tau_i psi_{j,k} tau_i = sigma_{j,k} when j = i, psi_{j,k} otherwise.
  for (int i : two)
    for (int j : even)
      for (int k = 1; k <= n; ++k) {
        if (k == j) continue;
        Automorphism lhs = compose(tau(i), compose(psi(j, k), tau(i)));
        Automorphism rhs = (j == i) ? sg(j, k) : psi(j, k);
        rep.add("tau psi tau", "(" + std::to_string(i) + ";" + std::to_string(j) + "," +
                                   std::to_string(k) + ")",
                lhs == rhs);
      }
  // psi_{i,j} psi_{k,l} psi_{i,j} for i,j even, l odd.
  for (int i : even)
    for (int j : even) {
      if (i == j) continue;
      for (int k : even)
        for (int l : odd) {
          Automorphism lhs = compose(psi(i, j), compose(psi(k, l), psi(i, j)));
          Automorphism rhs =
              (j == k) ? compose(psi(i, l), compose(psi(k, l), psi(i, l))) : psi(k, l);
          rep.add("psi psi psi", "(" + std::to_string(i) + "," + std::to_string(j) + ";" +
                                     std::to_string(k) + "," + std::to_string(l) + ")",
                  lhs == rhs);
        }
    }
  // T and P_1 intersect trivially at the image-table level.
  {
    unsigned long long p1_size = 1;
    for (int i : not_two) p1_size *= euler_phi(sys->label(i));
    if (p1_size <= 4096) {
      std::set<Automorphism> p1{id};
      for (int i : not_two) {
        std::set<Automorphism> next;
        for (const auto& a : p1)
          for (int t : detail::coprime_exponents(sys->label(i)))
            next.insert(t == 1 ? a : compose(a, phi(i, t)));
        p1 = std::move(next);
      }
      bool trivial = true;
      for (std::size_t mask = 1; mask < (std::size_t{1} << two.size()); ++mask) {
        Automorphism a = id;
        for (std::size_t k = 0; k < two.size(); ++k)
          if (mask & (std::size_t{1} << k)) a = compose(a, tau(two[k]));
        if (p1.count(a)) trivial = false;
      }
      rep.add("T,P1 trivial intersection", "table enumeration", trivial);
    }
  }
  return rep;
}

/// Verification of the center of P_2: P_3 commutes with every generator;
/// a non-central word of bounded length exists exactly when n_e >= 2.
struct CenterReport {
  bool p3_central = false;
  bool witness_expected = false;
  bool witness_found = false;
  std::string witness;  // description of the non-central non-P3 word
  bool exhaustive = true;
  bool pass = false;
};

inline CenterReport check_center_P2(const SystemPtr& sys, unsigned long long seed = 0,
                                    std::size_t sample_cap = 200000) {
  CenterReport rep;
  const int n = sys->leaf_count();
  std::vector<std::pair<BasicAut, std::string>> gens;
  for (int i : sys->even_indices())
    for (int j = 1; j <= n; ++j)
      if (j != i)
        gens.push_back({BasicAut::psi(i, j),
                        "psi(" + std::to_string(i) + "," + std::to_string(j) + ")"});
  for (int i : sys->two_indices())
    for (int j = 1; j <= n; ++j)
      if (j != i)
        gens.push_back({BasicAut::sigma(i, j),
                        "sigma(" + std::to_string(i) + "," + std::to_string(j) + ")"});

  std::vector<Automorphism> gen_auts;
  gen_auts.reserve(gens.size());
  for (auto& [b, s] : gens) gen_auts.push_back(make_basic(sys, b));

  rep.p3_central = true;
  for (const auto& p : enumerate_P3(sys))
    for (const auto& g : gen_auts)
      if (compose(p, g) != compose(g, p)) rep.p3_central = false;

  std::set<Automorphism> p3_tables;
  for (const auto& p : enumerate_P3(sys)) p3_tables.insert(p);

  rep.witness_expected = sys->n_even() >= 2;
  auto non_central = [&](const Automorphism& a) {
    for (const auto& g : gen_auts)
      if (compose(a, g) != compose(g, a)) return true;
    return false;
  };

  // Words of length <= 4 over the generators, exhaustively when feasible.
  const std::size_t g = gens.size();
  std::size_t words = 0;
  for (int len = 1, p = 1; len <= 4; ++len) {
    p *= static_cast<int>(g ? g : 1);
    words += static_cast<std::size_t>(p);
  }
  if (g == 0) {
    rep.witness_found = false;
  } else if (words <= sample_cap) {
    std::vector<std::vector<std::size_t>> frontier{{}};
    bool done = false;
    for (int len = 1; len <= 4 && !done; ++len) {
      std::vector<std::vector<std::size_t>> next;
      for (const auto& w : frontier)
        for (std::size_t k = 0; k < g && !done; ++k) {
          auto w2 = w;
          w2.push_back(k);
          Automorphism a = Automorphism::identity(sys);
          for (std::size_t x : w2) a = compose(a, gen_auts[x]);
          if (!p3_tables.count(a) && non_central(a)) {
            rep.witness_found = true;
            std::string s;
            for (std::size_t x : w2) s += (s.empty() ? "" : " ") + gens[x].second;
            rep.witness = s;
            if (rep.witness_expected) done = true;  // a witness settles n_e >= 2
          }
          next.push_back(std::move(w2));
        }
      frontier = std::move(next);
    }
  } else {
    rep.exhaustive = false;
    std::mt19937_64 rng(seed);
    for (int trial = 0; trial < 2000 && !rep.witness_found; ++trial) {
      Automorphism a = Automorphism::identity(sys);
      int len = 1 + static_cast<int>(rng() % 4);
      std::string s;
      for (int k = 0; k < len; ++k) {
        std::size_t x = static_cast<std::size_t>(rng() % g);
        a = compose(a, gen_auts[x]);
        s += (s.empty() ? "" : " ") + gens[x].second;
      }
      if (!p3_tables.count(a) && non_central(a)) {
        rep.witness_found = true;
        rep.witness = s;
      }
    }
  }
  rep.pass = rep.p3_central && (rep.witness_found == rep.witness_expected);
  return rep;
}

/// Constructed complement Q of Inn(W) inside Inn(W) P, following the
/// splitting construction: a distinguished qualifying label contributes a
/// complement inside its own P_1 block, every other block enters whole,
/// and each type-2 block drops the partial conjugations aimed at the
/// distinguished leaf.
struct ComplementQ {
  int distinguished = 0;
  bool full_out_level = false;  // the qualifying label has multiplicity 1
  std::vector<BasicAut> generators;
  std::vector<RelationCheck> certificate;
};

inline std::optional<ComplementQ> build_complement_Q(const SystemPtr& sys) {
  const int n = sys->leaf_count();
  if (!splitting_predicate(sys->labels())) return std::nullopt;
  auto qualifies = [&](int i) { return splitting_predicate({sys->label(i)}); };
  auto multiplicity = [&](int i) {
    int c = 0;
    for (int j = 1; j <= n; ++j)
      if (sys->label(j) == sys->label(i)) ++c;
    return c;
  };
  int star = 0;
  for (int i = 1; i <= n && star == 0; ++i)
    if (qualifies(i) && multiplicity(i) == 1) star = i;
  bool full = star != 0;
  for (int i = 1; i <= n && star == 0; ++i)
    if (qualifies(i)) star = i;

  ComplementQ q;
  q.distinguished = star;
  q.full_out_level = full;
  const int m_star = sys->label(star);
  auto K = unit_group_complement(m_star);
  if (!K) return std::nullopt;  // cannot happen when the label qualifies
  for (int t : *K)
    if (t != 1) q.generators.push_back(BasicAut::phi(star, t));
  for (int j = 1; j <= n; ++j) {
    if (j == star || sys->commuting_leaf(j)) continue;
    for (int t : detail::minimal_generators(
             sys->label(j), detail::unit_closure(sys->label(j), detail::unit_group(sys->label(j)))))
      q.generators.push_back(BasicAut::phi(j, t));
  }
  int ref = star == 1 ? 2 : 1;  // the fixed second index of the construction
  for (int j : sys->even_indices()) {
    if (j == star) {
      for (int k = 1; k <= n; ++k)
        if (k != star && k != ref) q.generators.push_back(BasicAut::psi(j, k));
    } else if (sys->commuting_leaf(j)) {
      for (int k = 1; k <= n; ++k)
        if (k != star && k != j) {
          q.generators.push_back(BasicAut::psi(j, k));
          q.generators.push_back(BasicAut::sigma(j, k));
        }
    } else {
      for (int k = 1; k <= n; ++k)
        if (k != star && k != j) q.generators.push_back(BasicAut::psi(j, k));
    }
  }

  // Certificate: the proof's identities instantiated on this system.
  const Automorphism id = Automorphism::identity(sys);
  {
    bool ok = true;
    for (const auto& b : q.generators) {
      Automorphism a = make_basic(sys, b);
      ok = ok && a.image(0) == GroupElement::generator(sys, 0);
    }
    q.certificate.push_back({"Q fixes s0", "all generators", ok});
  }
  {
    Automorphism rhs = id;
    for (int j = 1; j <= n; ++j)
      if (!sys->commuting_leaf(j)) rhs = compose(rhs, make_basic(sys, BasicAut::phi(j, sys->label(j) - 1)));
    bool ok = make_basic(sys, BasicAut::inner({0})) == rhs;
    q.certificate.push_back({"Eq(4.1)", "s0^ decomposition", ok});
  }
  if (sys->even_leaf(star)) {
    Automorphism rhs = id;
    for (int k = 1; k <= n; ++k)
      if (k != star) rhs = compose(rhs, make_basic(sys, BasicAut::psi(star, k)));
    bool ok = make_basic(sys, BasicAut::inner(GroupElement::delta(sys, star).letters())) == rhs;
    q.certificate.push_back({"Eq(4.2)", "Delta^ decomposition at the distinguished leaf", ok});
  }
  {
    std::set<int> Kc = detail::unit_closure(m_star, *K);
    q.certificate.push_back({"complement avoids -1",
                             "m-1 not in <K> inside Z_" + std::to_string(m_star) + "^x",
                             Kc.count(m_star - 1) == 0 && 2 * Kc.size() == detail::unit_group(m_star).size()});
  }
  return q;
}

/// Summary of the structure theory instantiated on one system.
struct StructureReport {
  std::vector<int> labels;
  int n = 0, n_o = 0, n_e = 0, n_2 = 0;
  unsigned long long T_order = 1;
  unsigned long long P1_order = 1;
  unsigned long long P3_order = 1;
  unsigned long long diag_order = 1;
  std::string P1_iso;
  std::string P2_iso;
  std::string aut_decomposition;
  std::string spe_decomposition;
  bool aut_equals_spe = false;
  bool innP_splits = false;         // exact criterion
  std::string out_splitting;        // "splits (constructed)" or "unknown"
  bool full_out_splitting = false;  // multiplicity-1 witness available
  int distinguished = 0;
};

inline StructureReport structure_report(const SystemPtr& sys) {
  StructureReport r;
  r.labels = sys->labels();
  r.n = sys->leaf_count();
  r.n_o = sys->n_odd();
  r.n_e = sys->n_even();
  r.n_2 = sys->n_two();
  r.T_order = 1ull << r.n_2;
  for (int i = 1; i <= r.n; ++i) r.P1_order *= euler_phi(sys->label(i));
  r.P3_order = r.n_2 >= 1 ? (1ull << (r.n - r.n_2)) : 1;
  r.diag_order = diagram_automorphisms(*sys).order;

  {
    std::string s;
    for (int i = 1; i <= r.n; ++i) {
      if (sys->commuting_leaf(i)) continue;
      s += (s.empty() ? "" : " x ") + ("Z_" + std::to_string(sys->label(i)) + "^x");
    }
    r.P1_iso = s.empty() ? "1" : s;
  }
  {
    std::string core = "(U_" + std::to_string(r.n_e) + ")^" + std::to_string(r.n_o) +
                       " x| Spe(U_" + std::to_string(r.n_e) + ")";
    if (r.n_2 >= 1)
      core += " x (Z_2)^" + std::to_string(r.n - r.n_2);
    r.P2_iso = core;
  }
  r.aut_decomposition = "((Inn(W) P) x| T) x| Diag(W)";
  r.spe_decomposition = "(Inn(W) P) x| Diag_o";
  {
    std::map<int, int> mult;
    for (int l : r.labels) mult[l]++;
    bool even_mult_one = true;
    for (auto& [l, c] : mult)
      if (l % 2 == 0 && c > 1) even_mult_one = false;
    r.aut_equals_spe = (r.n_2 == 0) && even_mult_one;
  }
  r.innP_splits = splitting_predicate(r.labels);
  if (auto q = build_complement_Q(sys)) {
    r.out_splitting = q->full_out_level ? "splits (constructed)" : "unknown";
    r.full_out_splitting = q->full_out_level;
    r.distinguished = q->distinguished;
  } else {
    r.out_splitting = "unknown";
  }
  return r;
}

}  // namespace coxstar
