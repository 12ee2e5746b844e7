#include <doctest.h>

#include <random>

#include "confol/mcg.hpp"

using namespace confol;
using namespace confol::mcg;

namespace {

Curve a_curve() { return chain_curve(1, 1); }  // class (1, 0)
Curve b_curve() { return chain_curve(1, 2); }  // class (0, 1)

TwistWord word_of(int genus, std::initializer_list<std::pair<Curve, int>> ls) {
  TwistWord w{genus, {}};
  for (const auto& [c, e] : ls) w.append(c, e);
  return w;
}

}  // namespace

TEST_CASE("twist matrices of the genus-1 generators") {
  auto ta = twist_matrix(a_curve());
  CHECK(ta.at(0, 0) == 1);
  CHECK(ta.at(0, 1) == -1);
  CHECK(ta.at(1, 0) == 0);
  CHECK(ta.at(1, 1) == 1);

  auto tb = twist_matrix(b_curve());
  CHECK(tb.at(0, 0) == 1);
  CHECK(tb.at(0, 1) == 0);
  CHECK(tb.at(1, 0) == 1);
  CHECK(tb.at(1, 1) == 1);

  CHECK(twist_matrix(boundary_curve(3)).is_identity());
  CHECK(twist_matrix(separating_curve(2, "s1")).is_identity());
}

TEST_CASE("word representation and composition order") {
  // D_a D_b: leftmost acts last
  auto w = word_of(1, {{a_curve(), 1}, {b_curve(), 1}});
  auto m = hom_rep(w);
  CHECK(m.at(0, 0) == 0);
  CHECK(m.at(0, 1) == -1);
  CHECK(m.at(1, 0) == 1);
  CHECK(m.at(1, 1) == 1);

  CHECK(hom_rep(TwistWord{1, {}}).is_identity());

  // words in the homologically trivial curves
  auto trivial = word_of(2, {{boundary_curve(2), 1},
                             {separating_curve(2, "s1"), -1},
                             {boundary_curve(2), 1}});
  CHECK(hom_rep(trivial).is_identity());
}

TEST_CASE("inverse twists invert on homology") {
  auto w = word_of(1, {{a_curve(), 1}, {a_curve(), -1}});
  CHECK(hom_rep(w).is_identity());
  auto m = HomRep::transvection(a_curve(), -1) * HomRep::twist(a_curve());
  CHECK(m.is_identity());
}

TEST_CASE("chain relation in the homological representation") {
  for (int g = 1; g <= 3; ++g) {
    auto w = chain_relation_word(g);
    CHECK(w.size() == static_cast<std::size_t>(2 * g * (4 * g + 2)));
    CHECK(hom_rep(w).is_identity());
  }
  // the base matrix at genus 1 has order exactly 6
  auto base = hom_rep(word_of(1, {{a_curve(), 1}, {b_curve(), 1}}));
  HomRep power(1);
  for (int k = 1; k <= 6; ++k) {
    power = power * base;
    if (k < 6) CHECK_FALSE(power.is_identity());
  }
  CHECK(power.is_identity());
}

TEST_CASE("word reduction") {
  // adjacent inverse pair disappears
  auto w = word_of(1, {{a_curve(), -1}, {a_curve(), 1}});
  CHECK(word_reduce(w).size() == 0);

  // boundary twists are central: c^m s^-1 s -> c^m with the twist spread out
  auto spread = word_of(2, {{separating_curve(2, "s1"), -1},
                            {boundary_curve(2), 1},
                            {boundary_curve(2), 1},
                            {separating_curve(2, "s1"), 1}});
  auto reduced = word_reduce(spread);
  CHECK(reduced.size() == 2);
  for (const auto& letter : reduced.letters) CHECK(letter.curve.name == "c");

  // non-commuting letters block the cancellation
  auto blocked = word_of(1, {{a_curve(), -1}, {b_curve(), 1}, {a_curve(), 1}});
  CHECK(word_reduce(blocked).size() == 3);
}

TEST_CASE("property: reduction preserves the homological representation") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const int g = 1 + static_cast<int>(rng() % 3);
    TwistWord w{g, {}};
    const int len = 2 + static_cast<int>(rng() % 12);
    for (int i = 0; i < len; ++i) {
      const int pick = static_cast<int>(rng() % (2 * g + 2));
      Curve c;
      if (pick == 0) c = boundary_curve(g);
      else if (pick == 1) c = separating_curve(g, "s1");
      else c = chain_curve(g, pick - 1);
      w.append(c, rng() % 2 == 0 ? 1 : -1);
    }
    auto reduced = word_reduce(w);
    CHECK(hom_rep(reduced) == hom_rep(w));
    CHECK(reduced.size() <= w.size());
  }
}

TEST_CASE("property: every word maps to a symplectic matrix") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 300; ++trial) {
    const int g = 1 + static_cast<int>(rng() % 3);
    TwistWord w{g, {}};
    const int len = 1 + static_cast<int>(rng() % 10);
    for (int i = 0; i < len; ++i)
      w.append(chain_curve(g, 1 + static_cast<int>(rng() % (2 * g))),
               rng() % 2 == 0 ? 1 : -1);
    CHECK(hom_rep(w).is_symplectic());
  }
}

TEST_CASE("positive stabilization") {
  OpenBook ob{1, TwistWord{1, {}}};
  auto st = positive_stabilize(ob);
  CHECK(st.genus == 2);
  CHECK(st.monodromy.size() == 1);
  CHECK(st.monodromy.letters[0].curve.homology ==
        std::vector<std::int64_t>{0, 0, 1, 0});

  // the old representation survives in the upper block
  OpenBook twisted{1, word_of(1, {{a_curve(), 1}, {b_curve(), 1}})};
  auto old = hom_rep(twisted.monodromy);
  auto bigger = hom_rep(positive_stabilize(twisted).monodromy);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(bigger.at(i, j) == old.at(i, j));

  // stabilizing twice commutes up to relabeling of the new handles
  auto twice = positive_stabilize(positive_stabilize(ob));
  CHECK(twice.genus == 3);
  CHECK(hom_rep(twice.monodromy).is_symplectic());
}

TEST_CASE("legendrian surgery composes on the right") {
  OpenBook ob{1, word_of(1, {{separating_curve(1, "s1"), -1}})};
  auto [after, record] = legendrian_surgery(ob, separating_curve(1, "s1"));
  CHECK(record.framing == "page framing - 1");
  CHECK(word_reduce(after.monodromy).size() == 0);

  // surgery on a chain curve multiplies the representation on the right
  OpenBook base{1, word_of(1, {{b_curve(), 1}})};
  auto [surgered, rec2] = legendrian_surgery(base, a_curve());
  CHECK(hom_rep(surgered.monodromy) ==
        hom_rep(base.monodromy) * twist_matrix(a_curve()));
}

TEST_CASE("homology sphere detector") {
  // trivial monodromy: positive first Betti number
  CHECK(homology_sphere_check(OpenBook{1, TwistWord{1, {}}}) == 0);

  // D_c^2 D_g1 D_g2 at genus 1: |det(psi - I)| = 1
  auto w = word_of(1, {{boundary_curve(1), 1},
                       {boundary_curve(1), 1},
                       {a_curve(), 1},
                       {b_curve(), 1}});
  CHECK(homology_sphere_check(OpenBook{1, w}) == 1);

  // one full chain at genus 2 and 3
  for (int g = 2; g <= 3; ++g) {
    TwistWord chain{g, {}};
    for (int i = 1; i <= 2 * g; ++i) chain.append(chain_curve(g, i));
    CHECK(homology_sphere_check(OpenBook{g, chain}) == 1);
  }
}

TEST_CASE("determinant check is invariant under reduction and conjugation") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const int g = 1 + static_cast<int>(rng() % 2);
    TwistWord w{g, {}};
    for (int i = 0; i < 6; ++i)
      w.append(chain_curve(g, 1 + static_cast<int>(rng() % (2 * g))),
               rng() % 2 == 0 ? 1 : -1);
    const auto direct = homology_sphere_check(OpenBook{g, w});
    CHECK(homology_sphere_check(OpenBook{g, word_reduce(w)}) == direct);

    // conjugation by a twist
    const Curve conj = chain_curve(g, 1);
    TwistWord conjugated{g, {}};
    conjugated.append(conj, 1);
    for (const auto& letter : w.letters)
      conjugated.append(letter.curve, letter.exponent);
    conjugated.append(conj, -1);
    CHECK(homology_sphere_check(OpenBook{g, conjugated}) == direct);
  }
}

TEST_CASE("twist word grammar") {
  auto w = parse_twist_word("c^2 * s1^-1", 2);
  REQUIRE(w.size() == 3);
  CHECK(w.letters[0].curve.name == "c");
  CHECK(w.letters[2].curve.name == "s1");
  CHECK(w.letters[2].exponent == -1);

  CHECK(parse_twist_word("", 1).size() == 0);
  CHECK(parse_twist_word("g1 * g2 * g3 * g4", 2).size() == 4);
  CHECK_THROWS_AS(parse_twist_word("q1", 1), ParseError);
  CHECK_THROWS_AS(parse_twist_word("g5", 2), Error);
  CHECK_THROWS_AS(parse_twist_word("c^2 *", 1), ParseError);
  CHECK(word_str(parse_twist_word("c^2*s1^-1", 2)) == "c * c * s1^-1");
}

TEST_CASE("cap pipeline on the worked example") {
  for (int g = 1; g <= 3; ++g) {
    for (int m = 0; m <= 2; ++m) {
      auto word = parse_twist_word("c^" + std::to_string(m) + " * s1^-1", g);
      auto result = cap_pipeline(OpenBook{g, word});

      REQUIRE(result.stages.size() == 4);
      CHECK(result.stages[0].label == "stage-1");
      CHECK(result.stages[0].word.size() == static_cast<std::size_t>(m));
      CHECK(result.stages[1].abs_det_minus_identity == 1);
      CHECK(result.stages[2].word.size() == static_cast<std::size_t>(m + 1));
      CHECK(result.k_exponent == m + 1);
      CHECK(result.stage3_computed_count == (4L * g + 1) * 2 * g);
      CHECK(result.stage3_stated_count == 8L * g * g + 3 * g);
      CHECK(result.stages[3].word.size() == 1);
      CHECK(result.stages[3].word.letters[0].curve.central);
      CHECK(result.final_genus == g + 1);

      REQUIRE(result.handles.cap);
      CHECK(result.handles.cap->euler_number == 1);
      CHECK(result.handles.cap->concave);
      CHECK(result.handles.cap->closed_surface_genus == g + 1);

      // every record carries the fixed framing rule
      for (const auto& rec : result.handles.records)
        CHECK(rec.framing == "page framing - 1");
      // handle count: n + 2g + (4g+1) 2g + the stage-4 record
      CHECK(result.handles.records.size() ==
            1 + 2 * static_cast<std::size_t>(g) +
                static_cast<std::size_t>(result.stage3_computed_count) + 1);
    }
  }
}

TEST_CASE("cap pipeline without negative twists") {
  auto result = cap_pipeline(OpenBook{1, TwistWord{1, {}}});
  CHECK(result.stages[0].word.size() == 0);
  CHECK(result.k_exponent == 1);
}

TEST_CASE("cap pipeline rejects unfactored monodromies") {
  OpenBook bad{1, TwistWord{1, {}}};
  bad.monodromy.append(chain_curve(1, 1), 1);
  CHECK_THROWS_AS(cap_pipeline(bad), PreconditionError);

  OpenBook wrong_sign{1, TwistWord{1, {}}};
  wrong_sign.monodromy.append(separating_curve(1, "s1"), 1);
  CHECK_THROWS_AS(cap_pipeline(wrong_sign), PreconditionError);
}
