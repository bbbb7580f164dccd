#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "coxstar/dihedral.hpp"
#include "coxstar/star_system.hpp"

namespace coxstar {

/// An element of W in the normal form of the amalgamated free product
/// W = W_1 *_<s0> W_2 *_<s0> ... *_<s0> W_n:
///
///     g = a_1 a_2 ... a_k * s0^tail
///
/// where each syllable a_j is the transversal representative of a
/// nontrivial coset a_j<s0> in its factor (see dihedral::rep_split) and
/// consecutive syllables come from distinct factors. The form is unique,
/// so equality of elements is structural equality.
class GroupElement {
 public:
  static GroupElement identity(SystemPtr sys) { return GroupElement(std::move(sys)); }

  static GroupElement generator(SystemPtr sys, int i) {
    GroupElement g(std::move(sys));
    if (!g.sys_->valid_generator(i))
      throw std::out_of_range("generator index " + std::to_string(i) + " out of range");
    if (i == 0)
      g.tail_ = true;
    else
      g.push(dihedral::leaf_gen(*g.sys_, i));
    return g;
  }

  static GroupElement from_letters(SystemPtr sys, std::span<const int> letters) {
    GroupElement g(std::move(sys));
    for (int l : letters) g.push_letter(l);
    return g;
  }
  static GroupElement from_letters(SystemPtr sys, const std::vector<int>& letters) {
    return from_letters(std::move(sys), std::span<const int>(letters));
  }

  /// Delta_i, the longest element of the factor W_i.
  static GroupElement delta(SystemPtr sys, int i) {
    GroupElement g(std::move(sys));
    if (i < 1 || i > g.sys_->leaf_count())
      throw std::out_of_range("delta index " + std::to_string(i) + " out of range");
    g.push(dihedral::delta(*g.sys_, i));
    return g;
  }

  /// A single-factor element as a group element.
  static GroupElement from_dihedral(SystemPtr sys, const DihedralElement& d) {
    GroupElement g(std::move(sys));
    g.push(d);
    return g;
  }

  const StarSystem& system() const { return *sys_; }
  const SystemPtr& system_ptr() const { return sys_; }

  bool is_identity() const { return syl_.empty() && !tail_; }
  int syllable_count() const { return static_cast<int>(syl_.size()); }
  bool tail() const { return tail_; }
  const std::vector<DihedralElement>& syllables() const { return syl_; }

  friend GroupElement operator*(const GroupElement& a, const GroupElement& b) {
    a.check_same_system(b);
    GroupElement r = a;
    for (const auto& s : b.syl_) r.push(s);
    r.tail_ ^= b.tail_;
    return r;
  }

  GroupElement inverse() const {
    GroupElement r(sys_);
    r.tail_ = tail_;
    for (auto it = syl_.rbegin(); it != syl_.rend(); ++it)
      r.push(dihedral::inv(*sys_, *it));
    return r;
  }

  bool is_involution() const { return !is_identity() && (*this * *this).is_identity(); }

  /// Expansion into generator indices; concatenating the shortest dihedral
  /// words of the syllables plus the tail.
  std::vector<int> letters() const {
    std::vector<int> out;
    for (const auto& s : syl_) {
      auto w = dihedral::letters(*sys_, s);
      out.insert(out.end(), w.begin(), w.end());
    }
    if (tail_) out.push_back(0);
    return out;
  }

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return *a.sys_ == *b.sys_ && a.tail_ == b.tail_ && a.syl_ == b.syl_;
  }
  friend bool operator!=(const GroupElement& a, const GroupElement& b) { return !(a == b); }
  friend bool operator<(const GroupElement& a, const GroupElement& b) {
    auto key = [](const GroupElement& g) {
      std::vector<int> k;
      for (const auto& s : g.syl_) {
        k.push_back(s.factor);
        k.push_back(s.rot);
        k.push_back(s.ref);
      }
      k.push_back(g.tail_ ? 1 : 0);
      return k;
    };
    return key(a) < key(b);
  }

 private:
  explicit GroupElement(SystemPtr sys) : sys_(std::move(sys)) {
    if (!sys_) throw std::invalid_argument("null system");
  }

  void check_same_system(const GroupElement& other) const {
    if (*sys_ != *other.sys_)
      throw std::invalid_argument("elements belong to different star systems");
  }

  void push_letter(int l) {
    if (!sys_->valid_generator(l))
      throw std::out_of_range("letter " + std::to_string(l) + " out of range");
    if (l == 0)
      tail_ = !tail_;
    else
      push(dihedral::leaf_gen(*sys_, l));
  }

  // Multiply on the right by an arbitrary element y of the factor W_i,
  // restoring the normal form. The pending tail s0^t is folded into y
  // first; cancellations cascade through at most one popped syllable
  // because the remaining word is already alternating.
  void push(const DihedralElement& y) {
    DihedralElement z = y;
    if (tail_) {
      z = dihedral::mul(*sys_, dihedral::center_gen(y.factor), y);
      tail_ = false;
    }
    if (dihedral::in_center_subgroup(z)) {
      tail_ = z.ref;
      return;
    }
    if (!syl_.empty() && syl_.back().factor == z.factor) {
      DihedralElement merged = dihedral::mul(*sys_, syl_.back(), z);
      syl_.pop_back();
      if (dihedral::in_center_subgroup(merged)) {
        tail_ = merged.ref;
        return;
      }
      auto split = dihedral::rep_split(*sys_, merged);
      syl_.push_back(split.rep);
      tail_ = split.tail;
      return;
    }
    auto split = dihedral::rep_split(*sys_, z);
    syl_.push_back(split.rep);
    tail_ = split.tail;
  }

  SystemPtr sys_;
  std::vector<DihedralElement> syl_;
  bool tail_ = false;
};

inline GroupElement make_delta(SystemPtr sys, int i) { return GroupElement::delta(std::move(sys), i); }

struct CyclicReduction {
  GroupElement core;
  GroupElement conjugator;  // input = conjugator * core * conjugator^-1
};

/// Cyclic reduction in the amalgam: conjugate away leading syllables until
/// the word has at most one syllable or its first and last factors differ.
inline CyclicReduction cyclically_reduce(const GroupElement& g) {
  GroupElement core = g;
  GroupElement conj = GroupElement::identity(g.system_ptr());
  while (core.syllable_count() >= 2 &&
         core.syllables().front().factor == core.syllables().back().factor) {
    GroupElement a = GroupElement::from_dihedral(g.system_ptr(), core.syllables().front());
    core = a.inverse() * core * a;
    conj = conj * a;
  }
  return {core, conj};
}

/// Order of the element: infinite iff the cyclically reduced core has two
/// or more syllables; otherwise the order inside the dihedral factor (or
/// inside <s0>). std::nullopt encodes infinity.
inline std::optional<long long> order(const GroupElement& g) {
  const GroupElement core = cyclically_reduce(g).core;
  if (core.syllable_count() >= 2) return std::nullopt;
  if (core.syllable_count() == 0) return core.tail() ? 2 : 1;
  DihedralElement d = core.syllables().front();
  if (core.tail()) d = dihedral::mul(core.system(), d, dihedral::center_gen(d.factor));
  return dihedral::order(core.system(), d);
}

/// Image under the homomorphism W -> GF(2)^(1 + n_e) counting letters per
/// conjugacy class: coordinate 0 for {s0} u {si : i odd}, one coordinate
/// per even leaf in ascending order.
struct ParityVector {
  std::vector<unsigned char> bits;

  friend bool operator==(const ParityVector& a, const ParityVector& b) { return a.bits == b.bits; }
  friend bool operator!=(const ParityVector& a, const ParityVector& b) { return !(a == b); }
  friend ParityVector operator+(const ParityVector& a, const ParityVector& b) {
    ParityVector r = a;
    for (std::size_t k = 0; k < r.bits.size(); ++k) r.bits[k] ^= b.bits[k];
    return r;
  }
  bool is_zero() const {
    for (auto b : bits)
      if (b) return false;
    return true;
  }
};

inline ParityVector parity(const GroupElement& g) {
  const StarSystem& sys = g.system();
  const auto even = sys.even_indices();
  ParityVector p;
  p.bits.assign(1 + even.size(), 0);
  auto coord = [&](int leaf) {
    for (std::size_t k = 0; k < even.size(); ++k)
      if (even[k] == leaf) return k + 1;
    return std::size_t{0};
  };
  for (const auto& s : g.syllables()) {
    // (s0 si)^rot s0^ref spells rot + ref letters s0 and rot letters si.
    p.bits[0] ^= static_cast<unsigned char>((s.rot + (s.ref ? 1 : 0)) & 1);
    std::size_t c = sys.even_leaf(s.factor) ? coord(s.factor) : 0;
    p.bits[c] ^= static_cast<unsigned char>(s.rot & 1);
  }
  if (g.tail()) p.bits[0] ^= 1;
  return p;
}

inline bool commutes_with(const GroupElement& a, const GroupElement& b) {
  return a * b == b * a;
}

/// Generators of the centralizer C_W(si): {si} for odd i, {si, Delta_i}
/// for even i, and {s0} u {Delta_j : j even} for the center.
inline std::vector<GroupElement> centralizer_generators(SystemPtr sys, int i) {
  if (!sys->valid_generator(i))
    throw std::out_of_range("generator index " + std::to_string(i) + " out of range");
  std::vector<GroupElement> out;
  if (i == 0) {
    out.push_back(GroupElement::generator(sys, 0));
    for (int j : sys->even_indices()) out.push_back(GroupElement::delta(sys, j));
  } else if (sys->odd_leaf(i)) {
    out.push_back(GroupElement::generator(sys, i));
  } else {
    out.push_back(GroupElement::generator(sys, i));
    out.push_back(GroupElement::delta(sys, i));
  }
  return out;
}

}  // namespace coxstar
