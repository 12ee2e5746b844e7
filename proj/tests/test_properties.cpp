#include <doctest.h>

#include "property_suites.hpp"

// Full-size randomized suites; the acceptance runner repeats these with the
// same case counts.

TEST_CASE("property suite: d^2 = 0") {
  CHECK_NOTHROW(confol_props::suite_d_squared(1000));
}

TEST_CASE("property suite: graded Leibniz rule") {
  CHECK_NOTHROW(confol_props::suite_leibniz(1000));
}

TEST_CASE("property suite: parse/print round-trip") {
  CHECK_NOTHROW(confol_props::suite_roundtrip(1000));
}

TEST_CASE("property suite: hom_rep after word_reduce") {
  CHECK_NOTHROW(confol_props::suite_word_reduction(1000));
}

TEST_CASE("property suite: classification scaling invariance") {
  CHECK_NOTHROW(confol_props::suite_scaling(1000));
}

TEST_CASE("property suite: holonomy double loop") {
  CHECK_NOTHROW(confol_props::suite_holonomy_composition(1000));
}
