#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

// Bit vectors and linear algebra over the two-element field.

namespace cqca {

// User-facing input or precondition error (CLI exit code 1).
struct user_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Broken internal invariant (CLI exit code 2).
struct internal_error : std::logic_error {
  using std::logic_error::logic_error;
};

class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t nbits) : n_(nbits), w_((nbits + 63) / 64, 0) {}

  std::size_t size() const { return n_; }

  bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool v) {
    uint64_t m = uint64_t(1) << (i & 63);
    if (v)
      w_[i >> 6] |= m;
    else
      w_[i >> 6] &= ~m;
  }
  void flip(std::size_t i) { w_[i >> 6] ^= uint64_t(1) << (i & 63); }

  void operator^=(const BitVec& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
  }

  bool any() const {
    for (uint64_t v : w_)
      if (v) return true;
    return false;
  }

  std::size_t popcount() const {
    std::size_t c = 0;
    for (uint64_t v : w_) c += std::size_t(__builtin_popcountll(v));
    return c;
  }

  // Parity of the AND with another vector; the workhorse of symplectic forms.
  bool dot(const BitVec& o) const {
    uint64_t acc = 0;
    for (std::size_t k = 0; k < w_.size(); ++k) acc ^= w_[k] & o.w_[k];
    return __builtin_popcountll(acc) & 1;
  }

  int lowest_set() const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k]) return int(k * 64 + std::size_t(__builtin_ctzll(w_[k])));
    return -1;
  }

  friend bool operator==(const BitVec& a, const BitVec& b) {
    return a.n_ == b.n_ && a.w_ == b.w_;
  }
  friend bool operator<(const BitVec& a, const BitVec& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_;
    return a.w_ < b.w_;
  }

  std::string to_string() const {
    std::string s(n_, '0');
    for (std::size_t i = 0; i < n_; ++i)
      if (get(i)) s[i] = '1';
    return s;
  }

 private:
  std::size_t n_ = 0;
  std::vector<uint64_t> w_;
};

// Incremental F2 row space: supports rank queries and membership tests
// without re-eliminating from scratch.
class F2Span {
 public:
  // Returns true if the row enlarged the span.
  bool add(BitVec row) {
    reduce(row);
    if (!row.any()) return false;
    basis_.push_back(row);
    pivots_.push_back(row.lowest_set());
    return true;
  }

  bool contains(BitVec row) const {
    reduce(row);
    return !row.any();
  }

  std::size_t rank() const { return basis_.size(); }

 private:
  void reduce(BitVec& row) const {
    for (std::size_t k = 0; k < basis_.size(); ++k)
      if (row.get(std::size_t(pivots_[k]))) row ^= basis_[k];
  }

  std::vector<BitVec> basis_;
  std::vector<int> pivots_;
};

inline std::size_t f2_rank(std::vector<BitVec> rows) {
  F2Span s;
  for (auto& r : rows) s.add(std::move(r));
  return s.rank();
}

// Reduced row echelon form; canonical for span comparison.
inline std::vector<BitVec> f2_rref(std::vector<BitVec> rows) {
  std::vector<BitVec> basis;
  std::vector<int> pivots;
  for (auto& row : rows) {
    for (std::size_t k = 0; k < basis.size(); ++k)
      if (row.get(std::size_t(pivots[k]))) row ^= basis[k];
    if (!row.any()) continue;
    int p = row.lowest_set();
    for (std::size_t k = 0; k < basis.size(); ++k)
      if (basis[k].get(std::size_t(p))) basis[k] ^= row;
    basis.push_back(row);
    pivots.push_back(p);
  }
  // Sort by pivot for a canonical ordering.
  for (std::size_t i = 0; i + 1 < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j)
      if (pivots[j] < pivots[i]) {
        std::swap(pivots[i], pivots[j]);
        std::swap(basis[i], basis[j]);
      }
  return basis;
}

inline bool f2_same_span(const std::vector<BitVec>& a,
                         const std::vector<BitVec>& b) {
  return f2_rref(a) == f2_rref(b);
}

// Solves M x = b where M is given by columns. Returns empty on no solution.
inline std::vector<BitVec> f2_transpose(const std::vector<BitVec>& rows,
                                        std::size_t ncols) {
  std::vector<BitVec> cols(ncols, BitVec(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < ncols; ++c)
      if (rows[r].get(c)) cols[c].set(r, true);
  return cols;
}

struct F2Solution {
  bool ok = false;
  BitVec x;
};

// Solve A x = b over F2 with A given as a list of rows (each of width ncols).
inline F2Solution f2_solve(std::vector<BitVec> rows, BitVec b,
                           std::size_t ncols) {
  const std::size_t m = rows.size();
  // Augment each row with its b bit, eliminate on the first ncols columns.
  struct Row {
    BitVec a;
    bool rhs;
  };
  std::vector<Row> sys;
  sys.reserve(m);
  for (std::size_t r = 0; r < m; ++r) sys.push_back({rows[r], b.get(r)});

  std::vector<int> pivot_col;
  std::vector<std::size_t> pivot_row;
  std::size_t next = 0;
  for (std::size_t c = 0; c < ncols && next < sys.size(); ++c) {
    std::size_t sel = next;
    while (sel < sys.size() && !sys[sel].a.get(c)) ++sel;
    if (sel == sys.size()) continue;
    std::swap(sys[sel], sys[next]);
    for (std::size_t r = 0; r < sys.size(); ++r)
      if (r != next && sys[r].a.get(c)) {
        sys[r].a ^= sys[next].a;
        sys[r].rhs ^= sys[next].rhs;
      }
    pivot_col.push_back(int(c));
    pivot_row.push_back(next);
    ++next;
  }
  for (std::size_t r = next; r < sys.size(); ++r)
    if (sys[r].rhs) return {};  // inconsistent

  F2Solution sol;
  sol.ok = true;
  sol.x = BitVec(ncols);
  for (std::size_t k = 0; k < pivot_col.size(); ++k)
    sol.x.set(std::size_t(pivot_col[k]), sys[pivot_row[k]].rhs);
  return sol;
}

// Kernel basis of the linear map x -> A x, A given as rows of width ncols.
inline std::vector<BitVec> f2_kernel(std::vector<BitVec> rows,
                                     std::size_t ncols) {
  std::vector<int> pivot_of_col(ncols, -1);
  std::vector<BitVec> elim;
  std::size_t next = 0;
  for (std::size_t c = 0; c < ncols; ++c) {
    std::size_t sel = next;
    while (sel < rows.size() && !rows[sel].get(c)) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[sel], rows[next]);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != next && rows[r].get(c)) rows[r] ^= rows[next];
    pivot_of_col[c] = int(next);
    ++next;
  }
  std::vector<BitVec> ker;
  for (std::size_t c = 0; c < ncols; ++c) {
    if (pivot_of_col[c] >= 0) continue;
    BitVec v(ncols);
    v.set(c, true);
    for (std::size_t c2 = 0; c2 < ncols; ++c2)
      if (pivot_of_col[c2] >= 0 && rows[std::size_t(pivot_of_col[c2])].get(c))
        v.set(c2, true);
    ker.push_back(v);
  }
  return ker;
}

// Dense univariate polynomial over F2, little-endian bit packing.
// Used for gcd-based invertibility tests; not a user-facing type.
class Gf2Poly {
 public:
  Gf2Poly() = default;
  static Gf2Poly zero() { return {}; }
  static Gf2Poly monomial(std::size_t d) {
    Gf2Poly p;
    p.bits_.assign(d / 64 + 1, 0);
    p.bits_[d / 64] = uint64_t(1) << (d % 64);
    p.deg_ = int(d);
    return p;
  }

  void add_term(std::size_t d) {
    if (bits_.size() <= d / 64) bits_.resize(d / 64 + 1, 0);
    bits_[d / 64] ^= uint64_t(1) << (d % 64);
    normalize();
  }

  bool is_zero() const { return deg_ < 0; }
  bool is_one() const { return deg_ == 0; }
  int degree() const { return deg_; }
  bool coeff(std::size_t d) const {
    if (d / 64 >= bits_.size()) return false;
    return (bits_[d / 64] >> (d % 64)) & 1;
  }

  friend Gf2Poly operator*(const Gf2Poly& a, const Gf2Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    Gf2Poly r;
    r.bits_.assign(std::size_t(a.deg_ + b.deg_) / 64 + 1, 0);
    for (int i = 0; i <= a.deg_; ++i) {
      if (!a.coeff(std::size_t(i))) continue;
      // xor b shifted left by i
      for (int j = 0; j <= b.deg_; ++j)
        if (b.coeff(std::size_t(j)))
          r.bits_[std::size_t(i + j) / 64] ^= uint64_t(1)
                                             << (std::size_t(i + j) % 64);
    }
    r.normalize();
    return r;
  }

  friend Gf2Poly operator%(Gf2Poly a, const Gf2Poly& m) {
    if (m.is_zero()) throw internal_error("Gf2Poly: modulo by zero");
    while (a.deg_ >= m.deg_) {
      int shift = a.deg_ - m.deg_;
      for (int j = 0; j <= m.deg_; ++j)
        if (m.coeff(std::size_t(j))) {
          std::size_t d = std::size_t(j + shift);
          a.bits_[d / 64] ^= uint64_t(1) << (d % 64);
        }
      a.normalize();
    }
    return a;
  }

  friend Gf2Poly gcd(Gf2Poly a, Gf2Poly b) {
    while (!b.is_zero()) {
      Gf2Poly r = a % b;
      a = b;
      b = r;
    }
    return a;
  }

 private:
  void normalize() {
    deg_ = -1;
    for (std::size_t k = bits_.size(); k-- > 0;)
      if (bits_[k]) {
        deg_ = int(k * 64 + 63 - std::size_t(__builtin_clzll(bits_[k])));
        break;
      }
  }

  std::vector<uint64_t> bits_;
  int deg_ = -1;
};

}  // namespace cqca
