#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <vector>

#include "coxstar/star_system.hpp"

namespace coxstar {

enum class OracleVerdict { equal, distinct, inconclusive };

namespace detail {

/// All words obtained from w by one braid move: an alternating run
/// s0 si s0 ... of length m_i flips to si s0 si ... (and back). Leaf-leaf
/// pairs carry infinite labels and admit no braid move.
inline std::vector<std::vector<int>> braid_neighbours(const StarSystem& sys,
                                                      const std::vector<int>& w) {
  std::vector<std::vector<int>> out;
  for (int i = 1; i <= sys.leaf_count(); ++i) {
    const int m = sys.label(i);
    if (m > static_cast<int>(w.size())) continue;
    for (std::size_t p = 0; p + m <= w.size(); ++p) {
      for (int first : {0, i}) {
        const int second = first == 0 ? i : 0;
        bool match = true;
        for (int k = 0; k < m && match; ++k)
          if (w[p + static_cast<std::size_t>(k)] != (k % 2 == 0 ? first : second)) match = false;
        if (!match) continue;
        std::vector<int> v = w;
        for (int k = 0; k < m; ++k)
          v[p + static_cast<std::size_t>(k)] = (k % 2 == 0 ? second : first);
        out.push_back(std::move(v));
      }
    }
  }
  return out;
}

inline bool nil_reduce_once(std::vector<int>& w) {
  for (std::size_t p = 0; p + 1 < w.size(); ++p) {
    if (w[p] == w[p + 1]) {
      w.erase(w.begin() + static_cast<std::ptrdiff_t>(p), w.begin() + static_cast<std::ptrdiff_t>(p) + 2);
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Exhaustive Tits-move word-problem oracle: decides whether the words u
/// and v represent the same element by searching nil moves (delete s s)
/// and braid moves on the word u v^-1. Length never needs to grow, so the
/// search restarts from any shortened word and the braid closure of a
/// word with no applicable nil move is finite: the verdict is exact
/// whenever the visit budget suffices.
///
/// Test-side tool only; the normal-form engine never calls it.
inline OracleVerdict tits_oracle_equal(const StarSystem& sys, std::span<const int> u,
                                       std::span<const int> v, std::size_t budget = 1000000) {
  std::vector<int> w(u.begin(), u.end());
  // v^-1: generators are involutions, so reverse the word.
  w.insert(w.end(), v.rbegin(), v.rend());

  std::size_t visited = 0;
restart:
  while (detail::nil_reduce_once(w)) {
  }
  if (w.empty()) return OracleVerdict::equal;

  std::set<std::vector<int>> seen{w};
  std::vector<std::vector<int>> frontier{w};
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& cur : frontier) {
      if (++visited > budget) return OracleVerdict::inconclusive;
      for (auto& nb : detail::braid_neighbours(sys, cur)) {
        std::vector<int> cand = nb;
        if (detail::nil_reduce_once(cand)) {
          while (detail::nil_reduce_once(cand)) {
          }
          if (cand.empty()) return OracleVerdict::equal;
          w = std::move(cand);
          goto restart;
        }
        if (seen.insert(nb).second) next.push_back(std::move(nb));
      }
    }
    frontier = std::move(next);
  }
  // Braid closure exhausted with no nil move anywhere: every member is
  // Tits-reduced and nonempty.
  return OracleVerdict::distinct;
}

inline OracleVerdict tits_oracle_equal(const StarSystem& sys, const std::vector<int>& u,
                                       const std::vector<int>& v, std::size_t budget = 1000000) {
  return tits_oracle_equal(sys, std::span<const int>(u), std::span<const int>(v), budget);
}

}  // namespace coxstar
