#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "confol/error.hpp"

namespace confol::mcg {

// Simple closed curve on the genus-g surface with one boundary component,
// known through its class in the symplectic basis (e1, f1, ..., eg, fg).
// Separating curves (including the boundary-parallel curve c) have zero
// class; c is additionally central for word rewriting.
struct Curve {
  std::string name;
  int genus = 1;
  std::vector<std::int64_t> homology;  // length 2g
  bool separating = false;
  bool central = false;  // boundary-parallel

  bool is_zero_class() const;
  void validate() const;  // separating <=> zero class
};

Curve boundary_curve(int g);                       // c
Curve chain_curve(int g, int i);                   // g1 .. g<2g>
Curve separating_curve(int g, const std::string& name);
// Extends a curve to a larger genus context (new handles get zero class).
Curve widen(const Curve& c, int genus);

struct Letter {
  Curve curve;
  int exponent = 1;  // +1 or -1
};

struct TwistWord {
  int genus = 1;
  std::vector<Letter> letters;  // leftmost acts last

  TwistWord& append(const Curve& c, int exponent = 1);
  std::size_t size() const { return letters.size(); }
};

std::string word_str(const TwistWord& w);

// Word grammar: factors name^exp separated by '*', names c, g1..g2g,
// s1..sn; exponents expand into single twists.
TwistWord parse_twist_word(const std::string& text, int genus);

// Integer symplectic representation on H1 = Z^{2g}.
class HomRep {
 public:
  explicit HomRep(int genus);  // identity
  static HomRep twist(const Curve& c);
  // x -> x + sign * <x, c> * c; sign -1 gives the inverse twist.
  static HomRep transvection(const Curve& c, int sign);

  int genus() const { return genus_; }
  std::int64_t at(int row, int col) const;
  HomRep operator*(const HomRep& rhs) const;
  bool operator==(const HomRep& rhs) const;
  bool is_identity() const;
  bool is_symplectic() const;  // M^T J M = J, exact

  // |det(M - I)|, exact fraction-free elimination.
  std::uint64_t abs_det_minus_identity() const;

  std::string str() const;

 private:
  int genus_;
  std::vector<std::int64_t> m_;  // row-major 2g x 2g
};

HomRep twist_matrix(const Curve& c);
HomRep hom_rep(const TwistWord& w);

// Free reduction plus the declared commutations (the boundary twist is
// central; equal-name letters commute).  Rightmost cancellation first.
TwistWord word_reduce(const TwistWord& w);

// (D_{g1} ... D_{g2g})^{4g+2}, the left side of the chain relation.
TwistWord chain_relation_word(int g);

struct OpenBook {
  int genus = 1;  // page genus; one boundary component
  TwistWord monodromy;
};

struct HandleRecord {
  std::string stage;
  std::string attaching_curve;
  std::string framing = "page framing - 1";
  TwistWord resulting_monodromy;
};

struct CapRecord {
  int closed_surface_genus = 0;
  int euler_number = 1;
  bool concave = true;
};

struct HandleSequence {
  std::vector<HandleRecord> records;
  std::optional<CapRecord> cap;
};

// Adds a handle to the page and composes with a right twist over it.
OpenBook positive_stabilize(const OpenBook& ob);

// Composes the monodromy with a right twist along the curve and records
// the symplectic 2-handle attachment.
std::pair<OpenBook, HandleRecord> legendrian_surgery(const OpenBook& ob,
                                                     const Curve& c);

// |det(hom_rep(monodromy) - I)|; 1 certifies a homology sphere, 0 means
// positive first Betti number.
std::uint64_t homology_sphere_check(const OpenBook& ob);

struct StageInfo {
  std::string label;
  TwistWord word;
  long handles_attached = 0;
  std::uint64_t abs_det_minus_identity = 0;
};

struct CapPipelineResult {
  HandleSequence handles;
  std::vector<StageInfo> stages;
  long stage3_computed_count = 0;  // (4g+1) * 2g, forced by the relation
  long stage3_stated_count = 0;    // 8g^2 + 3g, reported alongside
  int k_exponent = 0;              // boundary twists after stage 3
  int final_genus = 0;
};

// Runs the four-stage cap construction on a monodromy of the factored
// form D_c^m * (product of inverse twists along separating curves).
CapPipelineResult cap_pipeline(const OpenBook& ob);

}  // namespace confol::mcg
