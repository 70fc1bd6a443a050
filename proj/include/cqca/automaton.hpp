#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cqca/laurent.hpp"

// Clifford cellular automata as 2x2 matrices of symmetric Laurent
// polynomials over F2 with unit determinant, together with their trace
// classification, powers, and exact periods on a ring of N cells.

namespace cqca {

// Plain 2x2 polynomial matrix; no invariants enforced.
struct PolyMat2 {
  LaurentPoly e[2][2];

  static PolyMat2 identity(std::optional<int> modulus = std::nullopt) {
    PolyMat2 m;
    m.e[0][0] = LaurentPoly::one(modulus);
    m.e[0][1] = LaurentPoly::zero(modulus);
    m.e[1][0] = LaurentPoly::zero(modulus);
    m.e[1][1] = LaurentPoly::one(modulus);
    return m;
  }

  LaurentPoly trace() const { return e[0][0] + e[1][1]; }
  LaurentPoly det() const { return e[0][0] * e[1][1] + e[0][1] * e[1][0]; }

  PolyMat2 reduced(int n) const {
    PolyMat2 m;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) m.e[r][c] = e[r][c].reduced(n);
    return m;
  }

  friend PolyMat2 operator*(const PolyMat2& a, const PolyMat2& b) {
    PolyMat2 m;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        m.e[r][c] = a.e[r][0] * b.e[0][c] + a.e[r][1] * b.e[1][c];
    return m;
  }

  friend bool operator==(const PolyMat2& a, const PolyMat2& b) {
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        if (!(a.e[r][c] == b.e[r][c])) return false;
    return true;
  }
};

// A validated automaton: entries are modulus-free symmetric polynomials
// and det(t) = 1.
class Cqca {
 public:
  static Cqca make(PolyMat2 m) {
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        if (m.e[r][c].modulus())
          throw user_error("CQCA entries must be modulus-free");
        if (!is_symmetric(m.e[r][c]))
          throw user_error("CQCA entry t" + std::to_string(r + 1) +
                           std::to_string(c + 1) + " = " + m.e[r][c].str() +
                           " is not symmetric");
      }
    if (!m.det().is_one())
      throw user_error("CQCA determinant is " + m.det().str() + ", expected 1");
    return Cqca(std::move(m));
  }

  // The simple automaton of a given trace: [[Tr, 1], [1, 0]].
  static Cqca simple_from_trace(const LaurentPoly& tr) {
    PolyMat2 m;
    m.e[0][0] = tr;
    m.e[0][1] = LaurentPoly::one();
    m.e[1][0] = LaurentPoly::one();
    m.e[1][1] = LaurentPoly::zero();
    return make(std::move(m));
  }

  const PolyMat2& mat() const { return m_; }
  const LaurentPoly& entry(int r, int c) const { return m_.e[r][c]; }
  LaurentPoly trace() const { return m_.trace(); }

  friend bool operator==(const Cqca& a, const Cqca& b) { return a.m_ == b.m_; }

 private:
  explicit Cqca(PolyMat2 m) : m_(std::move(m)) {}
  PolyMat2 m_;
};

// ---- presets ---------------------------------------------------------

inline LaurentPoly poly(const std::string& s) { return LaurentPoly::parse(s); }

inline Cqca preset_tg() { return Cqca::simple_from_trace(poly("u^-1+u")); }
inline Cqca preset_tf() { return Cqca::simple_from_trace(poly("u^-1+1+u")); }
inline Cqca preset_tp() { return Cqca::simple_from_trace(poly("0")); }

// h * t_g: periodic but entangling; period 2.
inline Cqca preset_te() {
  PolyMat2 m;
  m.e[0][0] = poly("1");
  m.e[0][1] = poly("0");
  m.e[1][0] = poly("u^-1+u");
  m.e[1][1] = poly("1");
  return Cqca::make(std::move(m));
}

inline std::optional<Cqca> preset_by_name(const std::string& name) {
  if (name == "Tg") return preset_tg();
  if (name == "Tf") return preset_tf();
  if (name == "Tp") return preset_tp();
  if (name == "Te") return preset_te();
  return std::nullopt;
}

// ---- classification --------------------------------------------------

enum class CqcaKind { Periodic, Glider, Fractal };

struct CqcaClass {
  CqcaKind kind;
  // Periodic: the constant trace a in {0,1}. Glider: the shift c > 0.
  int param = 0;

  std::string str() const {
    switch (kind) {
      case CqcaKind::Periodic:
        return "Periodic(" + std::to_string(param) + ")";
      case CqcaKind::Glider:
        return "Glider(" + std::to_string(param) + ")";
      default:
        return "Fractal";
    }
  }
};

inline CqcaClass classify(const Cqca& t) {
  LaurentPoly tr = t.trace();
  if (tr.is_zero()) return {CqcaKind::Periodic, 0};
  if (tr.is_one()) return {CqcaKind::Periodic, 1};
  // Glider requires the trace to be exactly u^c + u^-c.
  if (tr.terms().size() == 2) {
    int c = *tr.terms().rbegin();
    if (c > 0 && tr.terms().count(-c)) return {CqcaKind::Glider, c};
  }
  return {CqcaKind::Fractal, 0};
}

inline bool is_simple(const Cqca& t) {
  return t.entry(0, 1).is_one() && t.entry(1, 0).is_one() &&
         t.entry(1, 1).is_zero();
}

inline bool is_entangling(const Cqca& t) {
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      const LaurentPoly& p = t.entry(r, c);
      if (p.terms().size() >= 2) return true;
      if (p.terms().size() == 1 && *p.terms().begin() != 0) return true;
    }
  return false;
}

// Composition. The product of two valid automata always has unit
// determinant but may in principle violate entry symmetry; that is
// surfaced as an error rather than silently normalized.
inline Cqca compose(const Cqca& a, const Cqca& b) {
  PolyMat2 m = a.mat() * b.mat();
  try {
    return Cqca::make(std::move(m));
  } catch (const user_error& e) {
    throw internal_error(std::string("compose broke CQCA invariants: ") +
                         e.what());
  }
}

enum class BasisChange { Hadamard, Phase };

// Conjugation by the Hadamard matrix h = [[0,1],[1,0]] or the phase
// matrix s = [[1,0],[1,1]]; both are involutions over F2.
inline Cqca conjugate_basis(const Cqca& t, BasisChange which) {
  PolyMat2 g = PolyMat2::identity();
  if (which == BasisChange::Hadamard) {
    g.e[0][0] = poly("0");
    g.e[0][1] = poly("1");
    g.e[1][0] = poly("1");
    g.e[1][1] = poly("0");
  } else {
    g.e[1][0] = poly("1");
  }
  PolyMat2 m = g * t.mat() * g;  // h and s are self-inverse mod 2
  try {
    return Cqca::make(std::move(m));
  } catch (const user_error& e) {
    throw internal_error(std::string("basis conjugation broke invariants: ") +
                         e.what());
  }
}

// t^k by repeated squaring over the polynomial ring (reduced mod u^N = 1
// when a modulus is supplied).
inline PolyMat2 power(const Cqca& t, std::uint64_t k,
                      std::optional<int> modulus = std::nullopt) {
  PolyMat2 base = modulus ? t.mat().reduced(*modulus) : t.mat();
  PolyMat2 acc = PolyMat2::identity(modulus);
  while (k) {
    if (k & 1) acc = acc * base;
    base = base * base;
    k >>= 1;
  }
  return acc;
}

// t^k via the Cayley-Hamilton recursion t^k = a_k t + b_k I; an
// independent route that must agree with `power`.
inline PolyMat2 power_cayley(const Cqca& t, std::uint64_t k,
                             std::optional<int> modulus = std::nullopt) {
  if (k == 0) return PolyMat2::identity(modulus);
  LaurentPoly tr = modulus ? t.trace().reduced(*modulus) : t.trace();
  LaurentPoly a = LaurentPoly::one(modulus);
  LaurentPoly b = LaurentPoly::zero(modulus);
  for (std::uint64_t i = 1; i < k; ++i) {
    LaurentPoly na = a * tr + b;
    b = a;
    a = na;
  }
  PolyMat2 base = modulus ? t.mat().reduced(*modulus) : t.mat();
  PolyMat2 r;
  const LaurentPoly one = LaurentPoly::one(modulus);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      r.e[i][j] = a * base.e[i][j];
      if (i == j) r.e[i][j] = r.e[i][j] + b;
    }
  return r;
}

namespace detail {

// Dense cyclic polynomial mod u^N = 1 for the period iteration.
struct CycPoly {
  int n;
  BitVec bits;
  explicit CycPoly(int n_) : n(n_), bits(std::size_t(n_)) {}

  bool is_zero() const { return !bits.any(); }
  bool is_one() const { return bits.popcount() == 1 && bits.get(0); }
};

inline CycPoly cyc_from(const LaurentPoly& p, int n) {
  CycPoly c(n);
  for (int k : p.terms()) c.bits.flip(std::size_t(((k % n) + n) % n));
  return c;
}

// a * (sum of u^k over shifts) computed as xor of rotations.
inline CycPoly cyc_mul_terms(const CycPoly& a, const std::vector<int>& shifts) {
  CycPoly r(a.n);
  for (int s : shifts) {
    for (int i = 0; i < a.n; ++i)
      if (a.bits.get(std::size_t(i))) r.bits.flip(std::size_t((i + s) % a.n));
  }
  return r;
}

}  // namespace detail

// Exact multiplicative order of t modulo u^N = 1, by iterating the
// Cayley-Hamilton coefficient pair: t^k = a_k t + b_k with
// a_{k+1} = a_k Tr + b_k, b_{k+1} = a_k. The order is the first k with
// (a, b) = (0, 1). Works for every valid t since the ring is finite.
inline std::uint64_t period(const Cqca& t, int n,
                            std::uint64_t max_steps = (1ull << 26)) {
  if (n < 1) throw user_error("N must be positive");
  if (t.mat().reduced(n) == PolyMat2::identity(n)) return 1;
  LaurentPoly tr = t.trace();
  std::vector<int> tr_shifts;
  for (int k : tr.terms()) tr_shifts.push_back(((k % n) + n) % n);

  detail::CycPoly a(n), b(n);
  a.bits.set(0, true);  // t^1 = 1*t + 0
  for (std::uint64_t k = 1; k < max_steps; ++k) {
    detail::CycPoly na = detail::cyc_mul_terms(a, tr_shifts);
    na.bits ^= b.bits;
    b = a;
    a = na;
    // (a, b) = (0, 1) iff t^(k+1) = I; for non-scalar t this is exact.
    if (a.is_zero() && b.is_one()) return k + 1;
  }
  throw internal_error("period: iteration cap exceeded");
}

// Injectivity of the ring tensor at circumference N reduces to the
// N-invertibility of t12; the all-N statement reduces to t12 = 1.
inline bool injective_for(const Cqca& t, int n) {
  return is_n_invertible(t.entry(0, 1), n);
}

// The fractal period table for Tf, N = 2..48 even. Reference data for the
// --golden comparison.
inline const std::vector<std::pair<int, std::uint64_t>>& tf_period_table() {
  static const std::vector<std::pair<int, std::uint64_t>> table = {
      {2, 3},     {4, 6},    {6, 12},   {8, 12},   {10, 30},  {12, 24},
      {14, 18},   {16, 24},  {18, 84},  {20, 60},  {22, 186}, {24, 48},
      {26, 126},  {28, 36},  {30, 1020},{32, 48},  {34, 510}, {36, 168},
      {38, 1026}, {40, 120}, {42, 2340},{44, 372}, {46, 12282},{48, 96}};
  return table;
}

}  // namespace cqca
