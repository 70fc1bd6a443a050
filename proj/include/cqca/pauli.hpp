#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cqca/automaton.hpp"

// Phase-free Pauli strings on a ring of N qubits in binary symplectic
// form, the CQCA action on them, gliders and cones, Lie closure, and the
// brute-force injectivity oracle.

namespace cqca {

class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(int n)
      : n_(n), x_(std::size_t(n)), z_(std::size_t(n)) {}

  static PauliString identity(int n) { return PauliString(n); }
  static PauliString single(int n, char axis, int site) {
    PauliString p(n);
    p.apply_letter(axis, site);
    return p;
  }

  int n() const { return n_; }
  const BitVec& xbits() const { return x_; }
  const BitVec& zbits() const { return z_; }

  bool is_identity() const { return !x_.any() && !z_.any(); }

  bool x(int i) const { return x_.get(idx(i)); }
  bool z(int i) const { return z_.get(idx(i)); }
  void set_x(int i, bool v) { x_.set(idx(i), v); }
  void set_z(int i, bool v) { z_.set(idx(i), v); }

  // Letter at site i: I, X, Y, or Z.
  char letter(int i) const {
    bool xb = x(i), zb = z(i);
    if (xb && zb) return 'Y';
    if (xb) return 'X';
    if (zb) return 'Z';
    return 'I';
  }

  void apply_letter(char axis, int site) {
    switch (axis) {
      case 'X': x_.flip(idx(site)); break;
      case 'Z': z_.flip(idx(site)); break;
      case 'Y':
        x_.flip(idx(site));
        z_.flip(idx(site));
        break;
      default:
        throw user_error(std::string("bad Pauli letter '") + axis + "'");
    }
  }

  // Phase-free product (bitwise xor).
  friend PauliString operator*(const PauliString& a, const PauliString& b) {
    a.check_same(b);
    PauliString r = a;
    r.x_ ^= b.x_;
    r.z_ ^= b.z_;
    return r;
  }

  friend bool operator==(const PauliString& a, const PauliString& b) {
    return a.n_ == b.n_ && a.x_ == b.x_ && a.z_ == b.z_;
  }
  friend bool operator<(const PauliString& a, const PauliString& b) {
    if (!(a.x_ == b.x_)) return a.x_ < b.x_;
    return a.z_ < b.z_;
  }

  PauliString translated(int shift) const {
    PauliString r(n_);
    for (int i = 0; i < n_; ++i) {
      if (x(i)) r.set_x(i + shift, true);
      if (z(i)) r.set_z(i + shift, true);
    }
    return r;
  }

  // The symplectic vector (xbits | zbits) of width 2N.
  BitVec symplectic() const {
    BitVec v(std::size_t(2 * n_));
    for (int i = 0; i < n_; ++i) {
      if (x(i)) v.set(std::size_t(i), true);
      if (z(i)) v.set(std::size_t(n_ + i), true);
    }
    return v;
  }

  static PauliString from_symplectic(const BitVec& v, int n) {
    PauliString p(n);
    for (int i = 0; i < n; ++i) {
      if (v.get(std::size_t(i))) p.set_x(i, true);
      if (v.get(std::size_t(n + i))) p.set_z(i, true);
    }
    return p;
  }

  // Polynomial-vector view (xi^X, xi^Z), reduced mod u^N = 1.
  std::pair<LaurentPoly, LaurentPoly> poly_vector() const {
    LaurentPoly px = LaurentPoly::zero(n_), pz = LaurentPoly::zero(n_);
    for (int i = 0; i < n_; ++i) {
      if (x(i)) px.toggle(i);
      if (z(i)) pz.toggle(i);
    }
    return {px, pz};
  }

  static PauliString from_poly_vector(const LaurentPoly& px,
                                      const LaurentPoly& pz, int n) {
    PauliString p(n);
    for (int k : px.terms()) p.set_x(k, true);
    for (int k : pz.terms()) p.set_z(k, true);
    return p;
  }

  // Text form `X0 Z3 Y5 @N=8`.
  std::string str() const {
    std::ostringstream os;
    bool any = false;
    for (int i = 0; i < n_; ++i) {
      char l = letter(i);
      if (l == 'I') continue;
      if (any) os << " ";
      os << l << i;
      any = true;
    }
    if (!any) os << "I";
    os << " @N=" << n_;
    return os.str();
  }

  static PauliString parse(const std::string& text) {
    std::istringstream is(text);
    std::string tok;
    std::vector<std::pair<char, int>> letters;
    std::optional<int> n;
    while (is >> tok) {
      if (tok.rfind("@N=", 0) == 0) {
        try {
          n = std::stoi(tok.substr(3));
        } catch (const std::exception&) {
          throw user_error("bad ring size in '" + tok + "'");
        }
        continue;
      }
      if (tok == "I") continue;
      char axis = tok[0];
      if (axis != 'X' && axis != 'Y' && axis != 'Z' || tok.size() < 2)
        throw user_error("bad Pauli token '" + tok + "'");
      try {
        letters.emplace_back(axis, std::stoi(tok.substr(1)));
      } catch (const std::exception&) {
        throw user_error("bad Pauli token '" + tok + "'");
      }
    }
    if (!n) throw user_error("Pauli string is missing '@N=<size>'");
    if (*n < 1) throw user_error("ring size must be positive");
    PauliString p(*n);
    for (auto [axis, site] : letters) p.apply_letter(axis, site);
    return p;
  }

 private:
  std::size_t idx(int i) const {
    return std::size_t(((i % n_) + n_) % n_);
  }
  void check_same(const PauliString& o) const {
    if (n_ != o.n_) throw user_error("Pauli ring size mismatch");
  }

  int n_ = 0;
  BitVec x_, z_;
};

// 0 iff the operators commute.
inline bool symplectic_product(const PauliString& a, const PauliString& b) {
  if (a.n() != b.n()) throw user_error("Pauli ring size mismatch");
  return a.xbits().dot(b.zbits()) ^ a.zbits().dot(b.xbits());
}

// The image t * xi reduced mod u^N = 1, mapped back to bit vectors.
// A group homomorphism and an automorphism of the phase-free Pauli group.
inline PauliString apply_cqca(const Cqca& t, const PauliString& p) {
  const int n = p.n();
  auto [px, pz] = p.poly_vector();
  PolyMat2 m = t.mat().reduced(n);
  LaurentPoly qx = m.e[0][0] * px + m.e[0][1] * pz;
  LaurentPoly qz = m.e[1][0] * px + m.e[1][1] * pz;
  return PauliString::from_poly_vector(qx, qz, n);
}

// The orbit [p, T(p), T^2(p), ..., T^steps(p)].
inline std::vector<PauliString> cone_evolution(const Cqca& t,
                                               const PauliString& p,
                                               int steps) {
  if (steps < 0) throw user_error("steps must be non-negative");
  std::vector<PauliString> orbit{p};
  orbit.reserve(std::size_t(steps) + 1);
  for (int s = 0; s < steps; ++s) orbit.push_back(apply_cqca(t, orbit.back()));
  return orbit;
}

struct Glider {
  PauliString op;
  int shift;  // +c or -c
};

// 2N x 2N binary matrix of the symplectic action mod u^N = 1, as rows.
inline std::vector<BitVec> symplectic_matrix(const Cqca& t, int n) {
  std::vector<BitVec> rows(std::size_t(2 * n), BitVec(std::size_t(2 * n)));
  for (int i = 0; i < n; ++i) {
    for (int which = 0; which < 2; ++which) {
      PauliString basis(n);
      if (which == 0)
        basis.set_x(i, true);
      else
        basis.set_z(i, true);
      BitVec img = apply_cqca(t, basis).symplectic();
      std::size_t col = std::size_t(which * n + i);
      for (std::size_t r = 0; r < std::size_t(2 * n); ++r)
        if (img.get(r)) rows[r].set(col, true);
    }
  }
  return rows;
}

// Generators of the glider subspaces: p with T(p) = translate(p, +-c).
// Both chiralities are returned.
inline std::vector<Glider> find_gliders(const Cqca& t, int n) {
  CqcaClass cls = classify(t);
  if (cls.kind != CqcaKind::Glider)
    throw user_error("find_gliders: CQCA is " + cls.str() + ", not a glider");
  const int c = cls.param;
  std::vector<Glider> out;
  for (int sign : {+1, -1}) {
    // Kernel of (S + Shift_{sign*c}) over F2.
    std::vector<BitVec> rows = symplectic_matrix(t, n);
    for (int i = 0; i < n; ++i)
      for (int which = 0; which < 2; ++which) {
        // Shift matrix: basis vector (i) maps to (i + sign*c).
        std::size_t col = std::size_t(which * n + i);
        int j = (((i + sign * c) % n) + n) % n;
        rows[std::size_t(which * n + j)].flip(col);
      }
    for (const BitVec& v : f2_kernel(rows, std::size_t(2 * n))) {
      PauliString p = PauliString::from_symplectic(v, n);
      if (!p.is_identity()) out.push_back({p, sign * c});
    }
  }
  if (out.empty())
    throw internal_error("find_gliders: glider CQCA has no gliders");
  return out;
}

// Glider factorization of Z_i * Z_{i-k} (k even): alternating factors
// Z_m T(Z_{m-1}) and T(Z_{m-1}) Z_{m-2} whose product telescopes.
inline std::vector<PauliString> cone_pair_from_lines(const Cqca& t, int n,
                                                     int i, int k) {
  if (classify(t).kind != CqcaKind::Glider)
    throw user_error("cone_pair_from_lines requires a glider CQCA");
  if (k < 0 || k % 2 != 0) throw user_error("separation k must be even");
  std::vector<PauliString> factors;
  for (int j = 0; j < k; ++j) {
    PauliString zm = PauliString::single(n, 'Z', i - j);
    PauliString zlow = PauliString::single(n, 'Z', i - j - 1);
    if (j % 2 == 0)
      factors.push_back(zm * apply_cqca(t, zlow));
    else
      factors.push_back(apply_cqca(t, zm) * zlow);
  }
  // Sanity: the factors multiply out to Z_i Z_{i-k}.
  PauliString prod = PauliString::identity(n);
  for (const auto& f : factors) prod = prod * f;
  PauliString want =
      PauliString::single(n, 'Z', i) * PauliString::single(n, 'Z', i - k);
  if (!(prod == want))
    throw internal_error("cone_pair_from_lines: factorization check failed");
  return factors;
}

// Smallest set containing the generators and closed under
// p, q anticommuting -> include p*q (the phase-free commutator image).
inline std::set<PauliString> lie_closure(
    const std::vector<PauliString>& generators) {
  std::set<PauliString> closed;
  std::vector<PauliString> work;
  for (const auto& g : generators) {
    if (g.is_identity()) continue;
    if (closed.insert(g).second) work.push_back(g);
  }
  while (!work.empty()) {
    PauliString p = work.back();
    work.pop_back();
    std::vector<PauliString> fresh;
    for (const auto& q : closed) {
      if (!symplectic_product(p, q)) continue;
      PauliString pq = p * q;
      if (!closed.count(pq)) fresh.push_back(pq);
    }
    for (auto& f : fresh)
      if (closed.insert(f).second) work.push_back(f);
  }
  return closed;
}

// Brute-force Lemma-1 injectivity oracle: the F2 span of
// { xi(Z_i), t xi(Z_i) : i } must have full rank 2N.
inline bool injectivity_rank(const Cqca& t, int n) {
  if (n > 16) throw user_error("injectivity_rank is an oracle for N <= 16");
  std::vector<BitVec> rows;
  for (int i = 0; i < n; ++i) {
    PauliString zi = PauliString::single(n, 'Z', i);
    rows.push_back(zi.symplectic());
    rows.push_back(apply_cqca(t, zi).symplectic());
  }
  return f2_rank(rows) == std::size_t(2 * n);
}

}  // namespace cqca
