#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace coxstar {

/// A star-shaped Coxeter system: one central generator s0 and n leaf
/// generators s1..sn, with finite labels m_i = m(s0, si) >= 2 on the
/// center-leaf edges and implicit infinite labels between leaves.
///
/// Leaves are indexed 1..n in input order; index 0 is always the center.
class StarSystem {
 public:
  explicit StarSystem(std::vector<int> labels) : labels_(std::move(labels)) {
    if (labels_.size() < 2)
      throw std::invalid_argument("star system needs n >= 2 leaves (rank >= 3), got n = " +
                                  std::to_string(labels_.size()));
    for (std::size_t k = 0; k < labels_.size(); ++k)
      if (labels_[k] < 2)
        throw std::invalid_argument("label m_" + std::to_string(k + 1) + " = " +
                                    std::to_string(labels_[k]) + " is below 2");
  }

  int leaf_count() const { return static_cast<int>(labels_.size()); }
  int rank() const { return leaf_count() + 1; }

  /// Label m_i of the edge s0 - si, for i in 1..n.
  int label(int i) const {
    if (i < 1 || i > leaf_count())
      throw std::out_of_range("leaf index " + std::to_string(i) + " out of range 1.." +
                              std::to_string(leaf_count()));
    return labels_[static_cast<std::size_t>(i) - 1];
  }

  bool valid_generator(int i) const { return i >= 0 && i <= leaf_count(); }

  bool odd_leaf(int i) const { return label(i) % 2 == 1; }
  bool even_leaf(int i) const { return label(i) % 2 == 0; }
  bool commuting_leaf(int i) const { return label(i) == 2; }  // i in I_2

  const std::vector<int>& labels() const { return labels_; }

  std::vector<int> odd_indices() const { return collect([&](int i) { return odd_leaf(i); }); }
  std::vector<int> even_indices() const { return collect([&](int i) { return even_leaf(i); }); }
  std::vector<int> two_indices() const { return collect([&](int i) { return commuting_leaf(i); }); }

  int n_odd() const { return static_cast<int>(odd_indices().size()); }
  int n_even() const { return static_cast<int>(even_indices().size()); }
  int n_two() const { return static_cast<int>(two_indices().size()); }

  friend bool operator==(const StarSystem& a, const StarSystem& b) {
    return a.labels_ == b.labels_;
  }
  friend bool operator!=(const StarSystem& a, const StarSystem& b) { return !(a == b); }

 private:
  template <class Pred>
  std::vector<int> collect(Pred p) const {
    std::vector<int> out;
    for (int i = 1; i <= leaf_count(); ++i)
      if (p(i)) out.push_back(i);
    return out;
  }

  std::vector<int> labels_;
};

using SystemPtr = std::shared_ptr<const StarSystem>;

inline SystemPtr make_system(std::vector<int> labels) {
  return std::make_shared<const StarSystem>(std::move(labels));
}

/// The partition I = I_odd u I_even together with I_2 (labels equal to 2).
struct IndexPartitions {
  std::vector<int> odd;
  std::vector<int> even;
  std::vector<int> two;
};

inline IndexPartitions index_partitions(const StarSystem& sys) {
  return {sys.odd_indices(), sys.even_indices(), sys.two_indices()};
}

/// Permutation of the leaves 1..n (index 0 is fixed).
class Permutation {
 public:
  Permutation() = default;
  static Permutation identity(int n) {
    Permutation p;
    p.img_.resize(static_cast<std::size_t>(n) + 1);
    std::iota(p.img_.begin(), p.img_.end(), 0);
    return p;
  }
  static Permutation from_images(std::vector<int> images_1_based) {
    Permutation p;
    p.img_ = std::move(images_1_based);
    if (p.img_.empty() || p.img_[0] != 0)
      throw std::invalid_argument("permutation image table must have img[0] == 0");
    std::vector<bool> hit(p.img_.size(), false);
    for (std::size_t i = 1; i < p.img_.size(); ++i) {
      int v = p.img_[i];
      if (v < 1 || v >= static_cast<int>(p.img_.size()) || hit[static_cast<std::size_t>(v)])
        throw std::invalid_argument("not a permutation of 1..n");
      hit[static_cast<std::size_t>(v)] = true;
    }
    return p;
  }

  int degree() const { return static_cast<int>(img_.size()) - 1; }
  int apply(int i) const { return i == 0 ? 0 : img_.at(static_cast<std::size_t>(i)); }

  Permutation inverse() const {
    Permutation p = identity(degree());
    for (int i = 1; i <= degree(); ++i) p.img_[static_cast<std::size_t>(apply(i))] = i;
    return p;
  }
  /// (a * b)(i) = a(b(i)).
  friend Permutation operator*(const Permutation& a, const Permutation& b) {
    Permutation p = identity(a.degree());
    for (int i = 1; i <= a.degree(); ++i)
      p.img_[static_cast<std::size_t>(i)] = a.apply(b.apply(i));
    return p;
  }
  bool is_identity() const {
    for (int i = 1; i <= degree(); ++i)
      if (apply(i) != i) return false;
    return true;
  }
  friend bool operator==(const Permutation& a, const Permutation& b) { return a.img_ == b.img_; }
  friend bool operator!=(const Permutation& a, const Permutation& b) { return !(a == b); }
  friend bool operator<(const Permutation& a, const Permutation& b) { return a.img_ < b.img_; }

  bool preserves_labels(const StarSystem& sys) const {
    if (degree() != sys.leaf_count()) return false;
    for (int i = 1; i <= degree(); ++i)
      if (sys.label(apply(i)) != sys.label(i)) return false;
    return true;
  }

  /// Swap of two leaves.
  static Permutation transposition(int n, int a, int b) {
    Permutation p = identity(n);
    std::swap(p.img_[static_cast<std::size_t>(a)], p.img_[static_cast<std::size_t>(b)]);
    return p;
  }

  std::vector<std::vector<int>> cycles() const {
    std::vector<std::vector<int>> out;
    std::vector<bool> seen(img_.size(), false);
    for (int i = 1; i <= degree(); ++i) {
      if (seen[static_cast<std::size_t>(i)] || apply(i) == i) continue;
      std::vector<int> cyc;
      int j = i;
      while (!seen[static_cast<std::size_t>(j)]) {
        seen[static_cast<std::size_t>(j)] = true;
        cyc.push_back(j);
        j = apply(j);
      }
      out.push_back(std::move(cyc));
    }
    return out;
  }

 private:
  std::vector<int> img_;
};

/// Description of Diag(W) = Diag_o x Diag_e: leaves with equal labels may be
/// permuted arbitrarily, one symmetric-group block per repeated label.
struct DiagramGroup {
  struct Block {
    int label = 0;
    bool odd = false;
    std::vector<int> indices;  // ascending leaf indices sharing the label
  };
  std::vector<Block> blocks;              // odd blocks first, then even, by label
  std::vector<Permutation> generators;    // adjacent transpositions inside blocks
  unsigned long long order = 1;           // prod alpha_k! * prod beta_l!
};

inline DiagramGroup diagram_automorphisms(const StarSystem& sys) {
  DiagramGroup g;
  std::map<int, std::vector<int>> by_label;
  for (int i = 1; i <= sys.leaf_count(); ++i) by_label[sys.label(i)].push_back(i);
  auto add_blocks = [&](bool odd) {
    for (const auto& [label, idx] : by_label) {
      if ((label % 2 == 1) != odd) continue;
      g.blocks.push_back({label, odd, idx});
      for (std::size_t k = 0; k + 1 < idx.size(); ++k)
        g.generators.push_back(Permutation::transposition(sys.leaf_count(), idx[k], idx[k + 1]));
      for (std::size_t k = 2; k <= idx.size(); ++k) {
        unsigned long long next = g.order * k;
        if (next / k != g.order) throw std::overflow_error("Diag(W) order overflows 64 bits");
        g.order = next;
      }
    }
  };
  add_blocks(true);
  add_blocks(false);
  return g;
}

/// Conjugacy class of a generator (Lemma: s0 and the odd leaves form one
/// class, each even leaf is alone in its own class).
struct GeneratorClass {
  bool central_odd = true;
  int leaf = 0;  // meaningful when !central_odd

  static GeneratorClass central() { return {true, 0}; }
  static GeneratorClass even(int j) { return {false, j}; }
  friend bool operator==(const GeneratorClass& a, const GeneratorClass& b) {
    return a.central_odd == b.central_odd && (a.central_odd || a.leaf == b.leaf);
  }
  friend bool operator!=(const GeneratorClass& a, const GeneratorClass& b) { return !(a == b); }
};

inline GeneratorClass generator_class(const StarSystem& sys, int i) {
  if (!sys.valid_generator(i))
    throw std::out_of_range("generator index " + std::to_string(i) + " out of range");
  if (i == 0 || sys.odd_leaf(i)) return GeneratorClass::central();
  return GeneratorClass::even(i);
}

namespace detail {

// Affinity test for an induced sub-diagram of a star system, given as the
// list of member generators (0 = center). Rank >= 3 irreducible affine
// diagrams carry only finite labels, so any infinite leaf-leaf pair rules
// them out; the remaining candidates are the Euclidean triangle groups.
inline bool subset_is_affine(const StarSystem&, const std::vector<int>& members) {
  if (members.size() < 3) return false;
  bool has_center = std::find(members.begin(), members.end(), 0) != members.end();
  int leaves = static_cast<int>(members.size()) - (has_center ? 1 : 0);
  if (leaves >= 2) return false;  // infinite label inside, no affine type matches
  if (!has_center || leaves != static_cast<int>(members.size()) - 1) return false;
  // At most one leaf plus the center: rank <= 2, never affine of rank >= 3.
  return false;
}

// Connectivity of the induced finite-diagram (edges where the label is
// finite, i.e. exactly the center-leaf pairs here).
inline bool subset_is_connected(const StarSystem&, const std::vector<int>& members) {
  if (members.size() <= 1) return true;
  bool has_center = std::find(members.begin(), members.end(), 0) != members.end();
  // Leaves are pairwise non-adjacent; the center is adjacent to every leaf.
  return has_center;
}

}  // namespace detail

/// Hyperbolicity of W per Moussong: no affine standard parabolic of rank
/// >= 3 and no pair of disjoint commuting infinite standard parabolics.
/// True for every valid star system; the checks run for real so that the
/// diagram data is actually exercised.
inline bool is_hyperbolic(const StarSystem& sys) {
  const int r = sys.rank();
  if (r <= 12) {
    // Exhaustive scan over the subsets of S.
    for (std::uint32_t mask = 1; mask < (1u << r); ++mask) {
      std::vector<int> members;
      for (int i = 0; i < r; ++i)
        if (mask & (1u << i)) members.push_back(i);
      if (members.size() >= 3 && detail::subset_is_connected(sys, members) &&
          detail::subset_is_affine(sys, members))
        return false;
    }
    // Disjoint commuting infinite pairs. A standard parabolic here is
    // infinite iff it contains two leaves; any two leaves carry an
    // infinite label, so a commuting partner could only live inside
    // {s0}, which is finite. Scan pairs anyway.
    for (std::uint32_t m1 = 1; m1 < (1u << r); ++m1) {
      auto leaves_of = [&](std::uint32_t m) {
        int c = 0;
        for (int i = 1; i < r; ++i)
          if (m & (1u << i)) ++c;
        return c;
      };
      if (leaves_of(m1) < 2) continue;  // finite parabolic
      for (std::uint32_t m2 = 1; m2 < (1u << r); ++m2) {
        if ((m1 & m2) != 0 || leaves_of(m2) < 2) continue;
        bool all_commute = true;
        for (int i = 0; i < r && all_commute; ++i) {
          if (!(m1 & (1u << i))) continue;
          for (int j = 0; j < r && all_commute; ++j) {
            if (!(m2 & (1u << j))) continue;
            int lab;
            if (i == 0)
              lab = sys.label(j);
            else if (j == 0)
              lab = sys.label(i);
            else
              lab = -1;  // leaf-leaf: infinite
            if (lab != 2) all_commute = false;
          }
        }
        if (all_commute) return false;
      }
    }
    return true;
  }
  // Large rank: same two conditions established pairwise. Every subset of
  // rank >= 3 either misses the center (then it is a free product, not
  // affine) or contains two leaves (then it has an infinite label).
  for (int i = 1; i <= sys.leaf_count(); ++i)
    if (sys.label(i) < 2) return false;  // unreachable for a valid system
  return true;
}

}  // namespace coxstar
