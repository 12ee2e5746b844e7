#include "confol/mcg.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <sstream>

namespace confol::mcg {

namespace {

using i64 = std::int64_t;
using i128 = __int128;

i64 checked(i128 v, const char* what) {
  if (v > std::numeric_limits<i64>::max() || v < std::numeric_limits<i64>::min())
    throw Error(std::string("integer overflow in ") + what);
  return static_cast<i64>(v);
}

// <u, v> with <e_k, f_k> = +1
i64 pairing(const std::vector<i64>& u, const std::vector<i64>& v) {
  i128 total = 0;
  for (std::size_t k = 0; k + 1 < u.size(); k += 2)
    total += i128(u[k]) * v[k + 1] - i128(u[k + 1]) * v[k];
  return checked(total, "symplectic pairing");
}

}  // namespace

bool Curve::is_zero_class() const {
  return std::all_of(homology.begin(), homology.end(),
                     [](i64 x) { return x == 0; });
}

void Curve::validate() const {
  if (static_cast<int>(homology.size()) != 2 * genus)
    throw Error("curve " + name + ": homology class length mismatch");
  if (separating != is_zero_class())
    throw Error("curve " + name +
                ": separating flag inconsistent with homology class");
}

Curve boundary_curve(int g) {
  Curve c{"c", g, std::vector<i64>(2 * g, 0), true, true};
  c.validate();
  return c;
}

Curve chain_curve(int g, int i) {
  if (g < 1 || i < 1 || i > 2 * g)
    throw Error("chain curve index out of range");
  std::vector<i64> h(2 * g, 0);
  if (i % 2 == 1) {
    h[i - 1] = 1;  // e_k for i = 2k-1
  } else {
    const int k = i / 2;
    h[2 * (k - 1) + 1] = 1;  // f_k
    if (k < g) h[2 * k + 1] = 1;  // + f_{k+1}
  }
  Curve c{"g" + std::to_string(i), g, std::move(h), false, false};
  c.validate();
  return c;
}

Curve separating_curve(int g, const std::string& name) {
  Curve c{name, g, std::vector<i64>(2 * g, 0), true, false};
  c.validate();
  return c;
}

Curve widen(const Curve& c, int genus) {
  if (genus < c.genus) throw Error("cannot shrink a curve's genus context");
  Curve out = c;
  out.genus = genus;
  out.homology.resize(2 * genus, 0);
  return out;
}

TwistWord& TwistWord::append(const Curve& c, int exponent) {
  if (exponent != 1 && exponent != -1)
    throw Error("twist letters carry exponent +1 or -1");
  if (c.genus != genus)
    throw Error("curve " + c.name + " has the wrong genus context");
  c.validate();
  letters.push_back({c, exponent});
  return *this;
}

std::string word_str(const TwistWord& w) {
  if (w.letters.empty()) return "1";
  std::ostringstream os;
  for (std::size_t i = 0; i < w.letters.size(); ++i) {
    if (i) os << " * ";
    os << w.letters[i].curve.name;
    if (w.letters[i].exponent < 0) os << "^-1";
  }
  return os.str();
}

TwistWord parse_twist_word(const std::string& text, int genus) {
  TwistWord w{genus, {}};
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  };
  skip();
  if (pos == text.size()) return w;
  bool expect_factor = true;
  while (pos < text.size()) {
    if (!expect_factor) {
      skip();
      if (pos == text.size()) break;
      if (text[pos] != '*') throw ParseError("expected '*'", pos);
      ++pos;
      expect_factor = true;
      continue;
    }
    skip();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    if (pos == start) throw ParseError("expected curve name", pos);
    const std::string name = text.substr(start, pos - start);
    long exp = 1;
    skip();
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      skip();
      std::size_t estart = pos;
      bool negative = false;
      if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
        negative = text[pos] == '-';
        ++pos;
      }
      exp = 0;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        exp = exp * 10 + (text[pos] - '0');
        if (exp > 10000) throw ParseError("exponent too large", estart);
        ++pos;
      }
      if (pos == estart + (negative ? 1 : 0))
        throw ParseError("expected exponent", estart);
      if (negative) exp = -exp;
    }
    Curve curve;
    if (name == "c") {
      curve = boundary_curve(genus);
    } else if (name.size() > 1 && name[0] == 'g') {
      int idx = 0;
      for (std::size_t i = 1; i < name.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(name[i])))
          throw ParseError("bad chain curve name " + name, start);
        idx = idx * 10 + (name[i] - '0');
      }
      curve = chain_curve(genus, idx);
    } else if (name.size() > 1 && name[0] == 's') {
      curve = separating_curve(genus, name);
    } else {
      throw ParseError("unknown curve name " + name, start);
    }
    const int sign = exp < 0 ? -1 : 1;
    for (long k = 0; k < std::abs(exp); ++k) w.append(curve, sign);
    expect_factor = false;
  }
  if (expect_factor) throw ParseError("trailing '*'", pos);
  return w;
}

// ---------------------------------------------------------------------
// HomRep

HomRep::HomRep(int genus) : genus_(genus), m_(4 * genus * genus, 0) {
  if (genus < 1) throw Error("genus must be >= 1");
  for (int i = 0; i < 2 * genus; ++i) m_[i * 2 * genus + i] = 1;
}

i64 HomRep::at(int row, int col) const { return m_[row * 2 * genus_ + col]; }

HomRep HomRep::transvection(const Curve& c, int sign) {
  c.validate();
  HomRep out(c.genus);
  const int n = 2 * c.genus;
  for (int col = 0; col < n; ++col) {
    std::vector<i64> basis(n, 0);
    basis[col] = 1;
    const i64 coef = pairing(basis, c.homology);
    for (int row = 0; row < n; ++row)
      out.m_[row * n + col] = checked(
          i128(basis[row]) + i128(sign) * coef * c.homology[row], "twist");
  }
  return out;
}

HomRep HomRep::twist(const Curve& c) { return transvection(c, 1); }

HomRep HomRep::operator*(const HomRep& rhs) const {
  if (genus_ != rhs.genus_) throw Error("genus mismatch in matrix product");
  const int n = 2 * genus_;
  HomRep out(genus_);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      i128 acc = 0;
      for (int k = 0; k < n; ++k) acc += i128(at(i, k)) * rhs.at(k, j);
      out.m_[i * n + j] = checked(acc, "matrix product");
    }
  }
  return out;
}

bool HomRep::operator==(const HomRep& rhs) const {
  return genus_ == rhs.genus_ && m_ == rhs.m_;
}

bool HomRep::is_identity() const { return *this == HomRep(genus_); }

bool HomRep::is_symplectic() const {
  const int n = 2 * genus_;
  // J in the (e1, f1, ...) basis
  auto J = [&](int i, int j) -> i64 {
    if (i / 2 != j / 2) return 0;
    if (i % 2 == 0 && j % 2 == 1) return 1;
    if (i % 2 == 1 && j % 2 == 0) return -1;
    return 0;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      i128 acc = 0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          acc += i128(at(k, i)) * J(k, l) * at(l, j);
      if (acc != J(i, j)) return false;
    }
  }
  return true;
}

std::uint64_t HomRep::abs_det_minus_identity() const {
  const int n = 2 * genus_;
  std::vector<i128> a(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a[i * n + j] = i128(at(i, j)) - (i == j ? 1 : 0);

  // fraction-free Bareiss elimination
  i128 prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a[k * n + k] == 0) {
      int swap_row = -1;
      for (int i = k + 1; i < n; ++i)
        if (a[i * n + k] != 0) {
          swap_row = i;
          break;
        }
      if (swap_row < 0) return 0;  // singular
      for (int j = 0; j < n; ++j) std::swap(a[k * n + j], a[swap_row * n + j]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        i128 num = a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j];
        a[i * n + j] = num / prev;
      }
      a[i * n + k] = 0;
    }
    prev = a[k * n + k];
  }
  i128 det = a[(n - 1) * n + (n - 1)] * sign;
  if (det < 0) det = -det;
  return checked(det, "determinant");
}

std::string HomRep::str() const {
  const int n = 2 * genus_;
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < n; ++i) {
    os << "[";
    for (int j = 0; j < n; ++j) {
      if (j) os << ", ";
      os << at(i, j);
    }
    os << "]";
    if (i + 1 < n) os << ", ";
  }
  os << "]";
  return os.str();
}

HomRep twist_matrix(const Curve& c) { return HomRep::twist(c); }

HomRep hom_rep(const TwistWord& w) {
  HomRep out(w.genus);
  for (const auto& letter : w.letters)
    out = out * HomRep::transvection(letter.curve, letter.exponent);
  return out;
}

TwistWord word_reduce(const TwistWord& w) {
  auto commute = [](const Curve& a, const Curve& b) {
    return a.central || b.central || a.name == b.name;
  };
  std::vector<Letter> letters = w.letters;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = static_cast<int>(letters.size()) - 2; i >= 0 && !changed; --i) {
      for (std::size_t j = i + 1; j < letters.size(); ++j) {
        if (letters[j].curve.name == letters[i].curve.name &&
            letters[j].exponent == -letters[i].exponent) {
          letters.erase(letters.begin() + j);
          letters.erase(letters.begin() + i);
          changed = true;
          break;
        }
        if (!commute(letters[j].curve, letters[i].curve)) break;
      }
    }
  }
  TwistWord out{w.genus, std::move(letters)};
  return out;
}

TwistWord chain_relation_word(int g) {
  if (g < 1) throw PreconditionError("chain relation needs genus >= 1");
  TwistWord w{g, {}};
  for (int rep = 0; rep < 4 * g + 2; ++rep)
    for (int i = 1; i <= 2 * g; ++i) w.append(chain_curve(g, i));
  return w;
}

OpenBook positive_stabilize(const OpenBook& ob) {
  OpenBook out;
  out.genus = ob.genus + 1;
  out.monodromy.genus = out.genus;
  for (const auto& letter : ob.monodromy.letters)
    out.monodromy.append(widen(letter.curve, out.genus), letter.exponent);
  // the curve over the new handle: class e_{g+1}
  Curve st{"st" + std::to_string(out.genus), out.genus,
           std::vector<i64>(2 * out.genus, 0), false, false};
  st.homology[2 * ob.genus] = 1;
  st.validate();
  out.monodromy.append(st, 1);
  return out;
}

std::pair<OpenBook, HandleRecord> legendrian_surgery(const OpenBook& ob,
                                                     const Curve& c) {
  OpenBook out = ob;
  out.monodromy.append(c, 1);
  HandleRecord rec;
  rec.stage = "surgery";
  rec.attaching_curve = c.name;
  rec.resulting_monodromy = out.monodromy;
  return {std::move(out), std::move(rec)};
}

std::uint64_t homology_sphere_check(const OpenBook& ob) {
  return hom_rep(ob.monodromy).abs_det_minus_identity();
}

CapPipelineResult cap_pipeline(const OpenBook& ob) {
  const int g = ob.genus;
  TwistWord reduced = word_reduce(ob.monodromy);

  int m = 0;
  std::vector<Curve> negatives;
  for (const auto& letter : reduced.letters) {
    if (letter.curve.central) {
      m += letter.exponent;
    } else if (letter.curve.separating && letter.exponent == -1) {
      negatives.push_back(letter.curve);
    } else {
      throw PreconditionError(
          "monodromy not in the factored form D_c^m * (inverse separating "
          "twists): offending letter " +
          letter.curve.name);
    }
  }

  CapPipelineResult result;
  OpenBook book = ob;

  auto c_power = [&](int genus, int power) {
    TwistWord w{genus, {}};
    const Curve c = boundary_curve(genus);
    for (int i = 0; i < std::abs(power); ++i) w.append(c, power < 0 ? -1 : 1);
    return w;
  };

  // stage 1: kill the negative twists, one 2-handle per letter
  for (auto it = negatives.rbegin(); it != negatives.rend(); ++it) {
    auto [next, rec] = legendrian_surgery(book, *it);
    book = std::move(next);
    rec.stage = "stage-1";
    result.handles.records.push_back(std::move(rec));
  }
  book.monodromy = word_reduce(book.monodromy);
  {
    const TwistWord want = c_power(g, m);
    if (word_str(book.monodromy) != word_str(want))
      throw VerificationError("stage-1 reduction did not cancel the negative "
                              "twists: " + word_str(book.monodromy));
    result.stages.push_back({"stage-1", book.monodromy,
                             static_cast<long>(negatives.size()),
                             homology_sphere_check(book)});
  }

  // stage 2: one full chain of right twists
  for (int i = 1; i <= 2 * g; ++i) {
    auto [next, rec] = legendrian_surgery(book, chain_curve(g, i));
    book = std::move(next);
    rec.stage = "stage-2";
    result.handles.records.push_back(std::move(rec));
  }
  {
    const std::uint64_t det = homology_sphere_check(book);
    if (det != 1)
      throw VerificationError(
          "stage-2 boundary is not a homology sphere (det " +
          std::to_string(det) + ")");
    result.stages.push_back({"stage-2", book.monodromy,
                             static_cast<long>(2 * g), det});
  }

  // stage 3: complete the chain to a boundary twist
  result.stage3_computed_count = static_cast<long>(4 * g + 1) * 2 * g;
  result.stage3_stated_count = 8L * g * g + 3L * g;
  for (int rep = 0; rep < 4 * g + 1; ++rep) {
    for (int i = 1; i <= 2 * g; ++i) {
      auto [next, rec] = legendrian_surgery(book, chain_curve(g, i));
      book = std::move(next);
      rec.stage = "stage-3";
      result.handles.records.push_back(std::move(rec));
    }
  }
  result.k_exponent = m + 1;
  {
    // rewrite (chain)^{4g+2} = D_c; certify the step on homology
    const TwistWord target = c_power(g, m + 1);
    if (!(hom_rep(book.monodromy) == hom_rep(target)))
      throw VerificationError("chain relation certification failed");
    book.monodromy = target;
    result.stages.push_back({"stage-3", book.monodromy,
                             result.stage3_computed_count,
                             homology_sphere_check(book)});
  }

  // stage 4: stabilize and trade the remaining boundary twists for a
  // single one on the bigger page; certified on homology only
  book = positive_stabilize(book);
  {
    HandleRecord rec;
    rec.stage = "stage-4";
    rec.attaching_curve = "st" + std::to_string(book.genus);
    rec.resulting_monodromy = book.monodromy;
    result.handles.records.push_back(std::move(rec));

    const TwistWord target = c_power(book.genus, 1);
    if (!hom_rep(target).is_identity() ||
        !hom_rep(c_power(book.genus, result.k_exponent)).is_identity())
      throw VerificationError("stage-4 homology certification failed");
    book.monodromy = target;
    result.stages.push_back({"stage-4", book.monodromy, 1,
                             homology_sphere_check(book)});
  }

  result.final_genus = book.genus;
  result.handles.cap = CapRecord{book.genus, 1, true};
  return result;
}

}  // namespace confol::mcg
