#pragma once

#include <numeric>
#include <vector>

#include "coxstar/star_system.hpp"

namespace coxstar {

/// An element of a dihedral factor W_i = <s0, si>, stored as
/// (s0 si)^rot * s0^ref with 0 <= rot < m_i. Writing rho = s0 si and
/// sigma = s0, the relations are rho^(m_i) = sigma^2 = 1 and
/// sigma rho sigma = rho^-1.
struct DihedralElement {
  int factor = 0;  // leaf index i in 1..n
  int rot = 0;
  bool ref = false;

  friend bool operator==(const DihedralElement& a, const DihedralElement& b) {
    return a.factor == b.factor && a.rot == b.rot && a.ref == b.ref;
  }
  friend bool operator!=(const DihedralElement& a, const DihedralElement& b) { return !(a == b); }
};

namespace dihedral {

inline int norm_rot(int r, int m) {
  r %= m;
  return r < 0 ? r + m : r;
}

inline DihedralElement identity(int factor) { return {factor, 0, false}; }
inline DihedralElement center_gen(int factor) { return {factor, 0, true}; }  // s0
inline DihedralElement leaf_gen(const StarSystem& sys, int factor) {
  // si = rho^(m-1) sigma
  return {factor, sys.label(factor) - 1, true};
}

inline bool in_center_subgroup(const DihedralElement& a) { return a.rot == 0; }
inline bool is_identity(const DihedralElement& a) { return a.rot == 0 && !a.ref; }

inline DihedralElement mul(const StarSystem& sys, const DihedralElement& a,
                           const DihedralElement& b) {
  const int m = sys.label(a.factor);
  return {a.factor, norm_rot(a.rot + (a.ref ? -b.rot : b.rot), m),
          static_cast<bool>(a.ref ^ b.ref)};
}

inline DihedralElement inv(const StarSystem& sys, const DihedralElement& a) {
  if (a.ref) return a;  // reflections are involutions
  return {a.factor, norm_rot(-a.rot, sys.label(a.factor)), false};
}

inline long long order(const StarSystem& sys, const DihedralElement& a) {
  if (is_identity(a)) return 1;
  if (a.ref) return 2;
  const int m = sys.label(a.factor);
  return m / std::gcd(a.rot, m);
}

/// The longest element Delta_i of W_i: si (s0 si)^((m-1)/2) when m is odd,
/// (s0 si)^(m/2) when m is even. Central in W_i exactly when m is even.
inline DihedralElement delta(const StarSystem& sys, int factor) {
  const int m = sys.label(factor);
  if (m % 2 == 1) return {factor, (m - 1) / 2, true};
  return {factor, m / 2, false};
}

/// Transversal of the cosets x<s0> in W_i: each nontrivial coset
/// {rho^r, rho^r sigma} (r != 0) is represented by its shorter element,
/// the rotation when 2r < m and the reflection otherwise. The two lengths
/// differ by one, so the choice is unambiguous.
inline bool rep_reflected(const StarSystem& sys, int factor, int rot) {
  return 2 * rot >= sys.label(factor);
}

struct RepSplit {
  DihedralElement rep;
  bool tail;  // residual s0 on the right
};

/// Split a non-central element as rep * s0^tail with rep the transversal
/// representative of its coset.
inline RepSplit rep_split(const StarSystem& sys, const DihedralElement& a) {
  const bool er = rep_reflected(sys, a.factor, a.rot);
  return {{a.factor, a.rot, er}, static_cast<bool>(a.ref ^ er)};
}

/// Shortest alternating word in {0, factor} for the element; ties (the
/// longest rotation in an even factor) resolve to the s0-leading form.
inline std::vector<int> letters(const StarSystem& sys, const DihedralElement& a) {
  const int m = sys.label(a.factor);
  const int i = a.factor;
  std::vector<int> w;
  auto alternate = [&](int first, int second, int count) {
    for (int k = 0; k < count; ++k) w.push_back(k % 2 == 0 ? first : second);
  };
  if (!a.ref) {
    if (2 * a.rot <= m) {
      alternate(0, i, 2 * a.rot);  // (s0 si)^rot
    } else {
      alternate(i, 0, 2 * (m - a.rot));  // (si s0)^(m-rot)
    }
  } else {
    if (2 * a.rot + 1 <= 2 * (m - a.rot) - 1) {
      alternate(0, i, 2 * a.rot);  // (s0 si)^rot s0
      w.push_back(0);
    } else {
      w.push_back(i);  // si (s0 si)^(m-rot-1)
      alternate(0, i, 2 * (m - a.rot - 1));
    }
  }
  return w;
}

}  // namespace dihedral
}  // namespace coxstar
