#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "cqca/f2.hpp"

// Symmetric Laurent polynomials over F2, optionally reduced modulo u^N = 1.
//
// A polynomial is the set of exponents with coefficient 1; adding a term
// twice removes it. Without a modulus, exponents are arbitrary integers
// (the infinite-chain representative); with modulus N they are residues
// in [0, N).

namespace cqca {

class LaurentPoly {
 public:
  LaurentPoly() = default;

  static LaurentPoly zero(std::optional<int> modulus = std::nullopt) {
    LaurentPoly p;
    p.mod_ = modulus;
    return p;
  }
  static LaurentPoly one(std::optional<int> modulus = std::nullopt) {
    return monomial(0, modulus);
  }
  static LaurentPoly monomial(int k, std::optional<int> modulus = std::nullopt) {
    LaurentPoly p;
    p.mod_ = modulus;
    p.toggle(k);
    return p;
  }

  const std::set<int>& terms() const { return terms_; }
  std::optional<int> modulus() const { return mod_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_one() const { return terms_.size() == 1 && *terms_.begin() == 0; }

  // Highest |exponent|; no value for the zero polynomial.
  std::optional<int> degree() const {
    if (terms_.empty()) return std::nullopt;
    int d = 0;
    for (int k : terms_) d = std::max(d, std::abs(k));
    return d;
  }

  void toggle(int k) {
    if (mod_) k = ((k % *mod_) + *mod_) % *mod_;
    auto it = terms_.find(k);
    if (it != terms_.end())
      terms_.erase(it);
    else
      terms_.insert(k);
  }

  friend LaurentPoly operator+(const LaurentPoly& p, const LaurentPoly& q) {
    p.check_compatible(q);
    LaurentPoly r = p;
    for (int k : q.terms_) r.toggle(k);
    return r;
  }

  friend LaurentPoly operator*(const LaurentPoly& p, const LaurentPoly& q) {
    p.check_compatible(q);
    LaurentPoly r;
    r.mod_ = p.mod_;
    for (int a : p.terms_)
      for (int b : q.terms_) r.toggle(a + b);
    return r;
  }

  friend bool operator==(const LaurentPoly& p, const LaurentPoly& q) {
    return p.mod_ == q.mod_ && p.terms_ == q.terms_;
  }

  // p evaluated at u = 1, i.e. the parity of the number of terms.
  bool parity() const { return terms_.size() % 2; }

  LaurentPoly reduced(int n) const {
    if (n < 1) throw user_error("modulus must be positive");
    LaurentPoly r;
    r.mod_ = n;
    for (int k : terms_) r.toggle(k);
    return r;
  }

  // Drop the modulus, keeping representative exponents in [0, N).
  LaurentPoly lifted() const {
    LaurentPoly r;
    for (int k : terms_) r.toggle(k);
    return r;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k : terms_) {
      if (!first) os << "+";
      first = false;
      if (k == 0)
        os << "1";
      else if (k == 1)
        os << "u";
      else
        os << "u^" << k;
    }
    return os.str();
  }

  // Parses the text syntax `u^-1+1+u`. Whitespace ignored. Coefficients
  // other than the implicit 1 are rejected.
  static LaurentPoly parse(const std::string& text,
                           std::optional<int> modulus = std::nullopt) {
    LaurentPoly p;
    p.mod_ = modulus;
    std::string s;
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw user_error("empty polynomial");
    if (s == "0") return p;
    std::size_t pos = 0;
    while (pos < s.size()) {
      std::size_t end = s.find('+', pos);
      if (end == std::string::npos) end = s.size();
      std::string term = s.substr(pos, end - pos);
      if (term == "1") {
        p.toggle(0);
      } else if (term == "u") {
        p.toggle(1);
      } else if (term.rfind("u^", 0) == 0) {
        try {
          std::size_t used = 0;
          int k = std::stoi(term.substr(2), &used);
          if (used != term.size() - 2) throw std::invalid_argument("");
          p.toggle(k);
        } catch (const std::exception&) {
          throw user_error("bad polynomial term '" + term + "'");
        }
      } else {
        throw user_error("bad polynomial term '" + term + "'");
      }
      pos = end + 1;
      if (pos == s.size() && end != s.size())
        throw user_error("trailing '+' in polynomial");
    }
    return p;
  }

 private:
  void check_compatible(const LaurentPoly& o) const {
    if (mod_ != o.mod_)
      throw user_error("polynomial modulus mismatch");
  }

  std::set<int> terms_;
  std::optional<int> mod_;
};

// True iff the exponent set is closed under negation. A property of the
// infinite-chain representative, so a modulus is rejected.
inline bool is_symmetric(const LaurentPoly& p) {
  if (p.modulus())
    throw user_error("is_symmetric applies to modulus-free polynomials");
  for (int k : p.terms())
    if (!p.terms().count(-k)) return false;
  return true;
}

namespace detail {
// Lift a Laurent polynomial (mod-free or mod-N) to an ordinary polynomial
// representative for gcd work: exponents shifted to be non-negative
// (multiplying by a unit u^s does not change invertibility mod u^N - 1).
inline Gf2Poly to_dense(const LaurentPoly& p, int n) {
  Gf2Poly d;
  for (int k : p.terms()) d.add_term(std::size_t(((k % n) + n) % n));
  return d;
}
}  // namespace detail

// Invertibility of p modulo u^N = 1 over F2: gcd with u^N - 1 must be 1.
inline bool is_n_invertible(const LaurentPoly& p, int n) {
  if (n < 1) throw user_error("N must be positive");
  if (p.is_zero()) return false;
  Gf2Poly ring = Gf2Poly::monomial(std::size_t(n));
  ring.add_term(0);  // u^N + 1
  return gcd(detail::to_dense(p, n), ring).is_one();
}

// Multiplicative inverse of p modulo u^N = 1, by solving the N x N
// circulant system over F2.
inline LaurentPoly invert(const LaurentPoly& p, int n) {
  if (!is_n_invertible(p, n))
    throw user_error("polynomial is not N-invertible for N=" +
                     std::to_string(n));
  LaurentPoly pm = p.modulus() ? p : p.reduced(n);
  // Row i of the system: coefficient of u^i in p * q, unknowns q_j.
  const std::size_t un = std::size_t(n);
  std::vector<BitVec> rows(un, BitVec(un));
  for (int k : pm.terms())
    for (int j = 0; j < n; ++j)
      rows[std::size_t((k + j) % n)].flip(std::size_t(j));
  BitVec rhs(un);
  rhs.set(0, true);
  F2Solution sol = f2_solve(rows, rhs, std::size_t(n));
  if (!sol.ok) throw internal_error("invert: circulant solve failed");
  LaurentPoly q = LaurentPoly::zero(n);
  for (int j = 0; j < n; ++j)
    if (sol.x.get(std::size_t(j))) q.toggle(j);
  if (q.modulus() != p.modulus()) q = p.modulus() ? q : q.lifted();
  return q;
}

}  // namespace cqca
