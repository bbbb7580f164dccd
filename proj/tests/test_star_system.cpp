#include <catch2/catch_amalgamated.hpp>

#include "coxstar/io.hpp"
#include "coxstar/star_system.hpp"

using namespace coxstar;

TEST_CASE("parse_star accepts and validates label lines") {
  StarSystem sys = parse_star("labels 3 4\n");
  REQUIRE(sys.leaf_count() == 2);
  REQUIRE(sys.label(1) == 3);
  REQUIRE(sys.label(2) == 4);

  CHECK_THROWS_AS(parse_star("labels 2\n"), ParseError);       // n = 1 < 2
  CHECK_THROWS_AS(parse_star("labels 3 1 5\n"), ParseError);   // label 1 < 2
  CHECK_THROWS_AS(parse_star("labels 3 x\n"), ParseError);
  CHECK_THROWS_AS(parse_star("# only a comment\n"), ParseError);

  // Position information is part of the message.
  try {
    parse_star("# c\nlabels 3 1 5\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }

  StarSystem commented = parse_star("# star\nlabels 2 2   # all twos\n");
  CHECK(commented.leaf_count() == 2);
}

TEST_CASE("index partitions split I by parity") {
  auto p1 = index_partitions(StarSystem({3, 4, 6}));
  CHECK(p1.odd == std::vector<int>{1});
  CHECK(p1.even == std::vector<int>{2, 3});
  CHECK(p1.two.empty());

  auto p2 = index_partitions(StarSystem({2, 2}));
  CHECK(p2.odd.empty());
  CHECK(p2.even == std::vector<int>{1, 2});
  CHECK(p2.two == std::vector<int>{1, 2});

  auto p3 = index_partitions(StarSystem({3, 3, 5}));
  CHECK(p3.odd == std::vector<int>{1, 2, 3});
  CHECK(p3.even.empty());
}

TEST_CASE("index partition invariants hold on a label grid") {
  for (int a = 2; a <= 7; ++a)
    for (int b = a; b <= 7; ++b)
      for (int c = b; c <= 7; ++c) {
        StarSystem sys({a, b, c});
        auto p = index_partitions(sys);
        CHECK(p.odd.size() + p.even.size() == 3);
        for (int i : p.two) CHECK(sys.label(i) == 2);
        for (int i = 1; i <= 3; ++i) {
          bool in_two = std::find(p.two.begin(), p.two.end(), i) != p.two.end();
          CHECK(in_two == (sys.label(i) == 2));
        }
      }
}

TEST_CASE("diagram automorphisms follow the equal-label blocks") {
  auto g1 = diagram_automorphisms(StarSystem({3, 3, 4}));
  CHECK(g1.order == 2);
  REQUIRE(g1.generators.size() == 1);
  CHECK(g1.generators[0].apply(1) == 2);
  REQUIRE(g1.blocks.size() == 2);
  CHECK(g1.blocks[0].odd);
  CHECK(g1.blocks[0].indices == std::vector<int>{1, 2});

  auto g2 = diagram_automorphisms(StarSystem({3, 4, 6}));
  CHECK(g2.order == 1);
  CHECK(g2.generators.empty());

  auto g3 = diagram_automorphisms(StarSystem({4, 4, 4}));
  CHECK(g3.order == 6);
  REQUIRE(g3.blocks.size() == 1);
  CHECK_FALSE(g3.blocks[0].odd);
}

TEST_CASE("diagram automorphism generators preserve labels; order matches factorials") {
  for (std::vector<int> labels :
       {std::vector<int>{3, 3, 3}, {2, 2, 5}, {4, 6, 4, 6}, {5, 5, 5, 5}, {2, 3, 4, 5}}) {
    StarSystem sys(labels);
    auto g = diagram_automorphisms(sys);
    unsigned long long expect = 1;
    std::map<int, int> mult;
    for (int l : labels) mult[l]++;
    for (auto& [l, c] : mult)
      for (int k = 2; k <= c; ++k) expect *= static_cast<unsigned long long>(k);
    CHECK(g.order == expect);
    for (const auto& perm : g.generators) CHECK(perm.preserves_labels(sys));
  }
}

TEST_CASE("generator classes: odd leaves share the center's class") {
  StarSystem sys({3, 4});
  CHECK(generator_class(sys, 1) == GeneratorClass::central());
  CHECK(generator_class(sys, 2) == GeneratorClass::even(2));
  CHECK(generator_class(sys, 0) == GeneratorClass::central());
  CHECK_THROWS_AS(generator_class(sys, 3), std::out_of_range);

  // Constant on {0} u I_odd, injective on I_even.
  StarSystem big({3, 5, 4, 4, 2});
  for (int i : big.odd_indices()) CHECK(generator_class(big, i) == generator_class(big, 0));
  auto even = big.even_indices();
  for (std::size_t a = 0; a < even.size(); ++a)
    for (std::size_t b = a + 1; b < even.size(); ++b)
      CHECK(generator_class(big, even[a]) != generator_class(big, even[b]));
}

namespace {

// Sub-simplex enumeration oracle: no standard parabolic of a star system
// is irreducible affine of rank >= 3. Written directly from the label
// data, independent of is_hyperbolic's internal logic.
bool affine_subset_exists(const StarSystem& sys) {
  const int r = sys.rank();
  for (std::uint32_t mask = 1; mask < (1u << r); ++mask) {
    std::vector<int> mem;
    for (int i = 0; i < r; ++i)
      if (mask & (1u << i)) mem.push_back(i);
    if (mem.size() != 3) continue;  // larger star subsets always carry an infinite label
    // Triangle group (p, q, r): affine iff all finite and 1/p+1/q+1/r = 1.
    long long p, q, s;
    auto lab = [&](int x, int y) -> long long {
      if (x == 0) return sys.label(y);
      if (y == 0) return sys.label(x);
      return -1;  // infinity
    };
    p = lab(mem[0], mem[1]);
    q = lab(mem[0], mem[2]);
    s = lab(mem[1], mem[2]);
    if (p < 0 || q < 0 || s < 0) continue;
    if (q * s * p > 0 && s * p + p * q + q * s == p * q * s) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("hyperbolicity holds across star systems") {
  CHECK(is_hyperbolic(StarSystem({3, 4})));
  StarSystem all2({2, 2, 2});
  CHECK(is_hyperbolic(all2));
  CHECK_FALSE(affine_subset_exists(all2));
  StarSystem sixes({6, 6, 6, 6});
  CHECK(is_hyperbolic(sixes));
  CHECK_FALSE(affine_subset_exists(sixes));

  for (int a = 2; a <= 7; ++a)
    for (int b = a; b <= 7; ++b) {
      StarSystem sys({a, b});
      CHECK(is_hyperbolic(sys));
      CHECK_FALSE(affine_subset_exists(sys));
    }
}
