#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cqca/symmetry.hpp"

// The computational layer: the virtual-space Clifford realization of a CQCA,
// logical gate generators, entangling layouts and universality, measurement
// patterns, and exact contraction of the (possibly perturbed) tensor network.
//
// Conventions. The MPS physical basis is the X basis (j = 0 is |+>, j = 1 is
// |->); the column tensor is A^j = B^j_[l] (x) (C^j T) with C^j a product of
// Z_i (one-qubit cell) or Z_i/X_i (two-qubit cell) factors. T is constructed
// so that T V(xi) T^dag = V(t^-1 xi); a basis tilt by d-alpha in column l then
// realizes exp(2i d-alpha T^(L-l+1)(P_i)) exactly at the fixed point.

namespace cqca {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Eigen::Matrix2cd letter_matrix(char l) {
  Eigen::Matrix2cd m;
  const Cplx I(0, 1);
  switch (l) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -I, I, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw internal_error("bad Pauli letter");
  }
  return m;
}

// Hermitian matrix of a Pauli string; qubit 0 is the leftmost tensor factor.
inline Mat pauli_matrix(const PauliString& p) {
  Mat m = Mat::Identity(1, 1);
  for (int i = p.n() - 1; i >= 0; --i) {
    Eigen::Matrix2cd w = letter_matrix(p.letter(i));
    Mat next(m.rows() * 2, m.cols() * 2);
    next.topLeftCorner(m.rows(), m.cols()) = w(0, 0) * m;
    next.topRightCorner(m.rows(), m.cols()) = w(0, 1) * m;
    next.bottomLeftCorner(m.rows(), m.cols()) = w(1, 0) * m;
    next.bottomRightCorner(m.rows(), m.cols()) = w(1, 1) * m;
    m = std::move(next);
  }
  return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat m(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      m.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return m;
}

// Inverse automaton: the adjugate [[t22,t12],[t21,t11]] (det = 1).
inline Cqca inverse_cqca(const Cqca& t) {
  PolyMat2 m;
  m.e[0][0] = t.entry(1, 1);
  m.e[0][1] = t.entry(0, 1);
  m.e[1][0] = t.entry(1, 0);
  m.e[1][1] = t.entry(0, 0);
  return Cqca::make(m);
}

inline double spectral_norm(const Mat& m) {
  return Eigen::JacobiSVD<Mat>(m).singularValues()(0);
}

// min over global phase of || e^{i phi} M/||M|| - target/||target|| ||_2,
// with the phase fixed Frobenius-optimally. Both sides are normalized so the
// comparison is scale-free (rotation targets with complex nu are
// non-unitary).
inline double distance_phase_opt(const Mat& m, const Mat& target) {
  double nrm = spectral_norm(m), tnrm = spectral_norm(target);
  if (nrm < 1e-300 || tnrm < 1e-300)
    throw user_error("zero operator has no direction");
  Mat mh = m / nrm;
  Mat th = target / tnrm;
  Cplx z = (th.adjoint() * mh).trace();
  if (std::abs(z) > 1e-300) mh *= std::conj(z) / std::abs(z);
  return spectral_norm(mh - th);
}

// Additionally minimizes over a supplied set of Pauli-frame corrections
// (P^dag M compared against the target); the identity frame is always tried.
inline double distance_up_to_frame(const Mat& m, const Mat& target,
                                   const std::vector<PauliString>& frames) {
  double best = distance_phase_opt(m, target);
  for (const auto& p : frames)
    best = std::min(best,
                    distance_phase_opt(pauli_matrix(p).adjoint() * m, target));
  return best;
}

// 2^N-dimensional unitary with T V(xi) T^dag = V(t^-1 xi) up to sign,
// built by the stabilizer method: the columns are S^b |psi_0> where
// S_i = V(t^-1 e^X_i) and |psi_0> is the joint +1 eigenstate of the
// commuting involutions R_i = V(t^-1 e^Z_i).
inline Mat virtual_clifford(const Cqca& t, int n) {
  if (n > 12) throw user_error("virtual space dimension budget exceeded");
  const int dim = 1 << n;
  Cqca inv = inverse_cqca(t);
  std::vector<Mat> r, s;
  for (int i = 0; i < n; ++i) {
    r.push_back(pauli_matrix(apply_cqca(inv, PauliString::single(n, 'Z', i))));
    s.push_back(pauli_matrix(apply_cqca(inv, PauliString::single(n, 'X', i))));
  }
  Mat proj = Mat::Identity(dim, dim);
  for (int i = 0; i < n; ++i)
    proj = (proj + r[std::size_t(i)] * proj) / 2.0;
  Eigen::Index best = 0;
  Eigen::VectorXd col_norms = proj.colwise().norm().transpose();
  col_norms.maxCoeff(&best);
  Vec psi0 = proj.col(best);
  double nrm = psi0.norm();
  if (nrm < 1e-12)
    throw internal_error("virtual_clifford: stabilizer projector vanished");
  psi0 /= nrm;
  Mat u(dim, dim);
  for (int b = 0; b < dim; ++b) {
    Vec col = psi0;
    for (int i = 0; i < n; ++i)
      if ((b >> (n - 1 - i)) & 1) col = s[std::size_t(i)] * col;
    u.col(b) = col;
  }
  // b's bit for qubit i must match Z_i's eigenvalue convention: qubit 0 is
  // the leftmost factor, so it is the highest bit of the column index.
  if ((u.adjoint() * u - Mat::Identity(dim, dim)).norm() > 1e-9)
    throw internal_error("virtual_clifford: synthesis is not unitary");
  for (int i = 0; i < n; ++i) {
    Mat lhs = u * pauli_matrix(PauliString::single(n, 'Z', i)) * u.adjoint();
    if (std::min((lhs - r[std::size_t(i)]).norm(),
                 (lhs + r[std::size_t(i)]).norm()) > 1e-9)
      throw internal_error("virtual_clifford: conjugation check failed");
  }
  return u;
}

struct GateGenerator {
  int i = 0;
  int l = 1;
  CellKind cell = CellKind::OneQubit;
  char p = 'Z';
  PauliString image;
};

inline GateGenerator gate_generator(const Cqca& t, int n, int i, int l,
                                    CellKind cell, char p = 'Z') {
  std::uint64_t big_l = period(t, n);
  if (l < 1 || std::uint64_t(l) > big_l)
    throw user_error("row l out of range [1, L]");
  if (cell == CellKind::OneQubit && p != 'Z')
    throw user_error("one-qubit cells only seed Z rotations");
  if (p != 'Z' && p != 'X') throw user_error("seed Pauli must be Z or X");
  GateGenerator g{i, l, cell, p, PauliString::single(n, p, i)};
  for (std::uint64_t k = 0; k < big_l - std::uint64_t(l) + 1; ++k)
    g.image = apply_cqca(t, g.image);
  return g;
}

// Logical layout: every 2n-th qubit is logical; the 2n-1 qubits between a
// pair are ancillas pinned to the +1 eigenstate of the single-site factors
// in the middle of the entangling generator.
struct LogicalLayout {
  int half_width = 0;          // n
  int source_power = 0;        // k with T^k(P_i) the entangling generator
  char source_p = 'Z';
  std::vector<char> ancilla;   // letters at offsets -(n-1)..(n-1)
  char left = 'I', right = 'I';  // letters at offsets -n, +n
};

inline LogicalLayout entangling_layout(const Cqca& t, int n) {
  if (!is_entangling(t))
    throw user_error("CQCA is not entangling: no entangling gate exists");
  auto image_poly = [&](int k, char p) {
    PolyMat2 pw = PolyMat2::identity();
    for (int j = 0; j < k; ++j) pw = pw * t.mat();
    int col = (p == 'X') ? 0 : 1;
    return std::pair<LaurentPoly, LaurentPoly>{pw.e[0][col], pw.e[1][col]};
  };
  auto try_layout = [&](int k, char p) -> std::optional<LogicalLayout> {
    auto [px, pz] = image_poly(k, p);
    int half = 0;
    for (int e : px.terms()) half = std::max(half, std::abs(e));
    for (int e : pz.terms()) half = std::max(half, std::abs(e));
    if (half < 1) return std::nullopt;
    auto letter_at = [&](int d) {
      bool xb = px.terms().count(d), zb = pz.terms().count(d);
      return xb && zb ? 'Y' : xb ? 'X' : zb ? 'Z' : 'I';
    };
    LogicalLayout lay;
    lay.half_width = half;
    lay.source_power = k;
    lay.source_p = p;
    lay.left = letter_at(-half);
    lay.right = letter_at(half);
    for (int d = -(half - 1); d <= half - 1; ++d)
      lay.ancilla.push_back(letter_at(d));
    return lay;
  };
  if (is_simple(t)) {
    auto lay = try_layout(2, 'Z');
    if (lay) return *lay;
  }
  std::uint64_t big_l = period(t, n);
  for (std::uint64_t k = 1; k <= big_l; ++k)
    for (char p : {'X', 'Z'})
      if (auto lay = try_layout(int(k), p)) return *lay;
  throw internal_error("entangling CQCA yielded no spreading generator");
}

struct UniversalityReport {
  bool entangling = false;
  bool universal = false;
  int q = 0;
  std::size_t closure_size = 0;
};

// Builds every gate generator T^k(P_i), restricts to the even-site logical
// qubits by projecting onto the ancilla eigenstates, and closes the
// restricted set under the anticommutator product. Universal iff the
// closure is the full logical Pauli algebra su(2^q).
inline UniversalityReport universality_check(const Cqca& t, int n,
                                             CellKind cell) {
  if (n > 12) throw user_error("closure check is limited to N <= 12");
  UniversalityReport rep;
  if (!is_entangling(t)) return rep;
  rep.entangling = true;
  LogicalLayout lay = entangling_layout(t, n);
  if (lay.half_width != 1)
    throw user_error("closure restriction implemented for spacing-2 layouts");
  const char constraint = lay.ancilla[0];
  rep.q = n / 2;
  std::uint64_t big_l = period(t, n);
  std::vector<PauliString> restricted;
  std::vector<char> seeds =
      cell == CellKind::OneQubit ? std::vector<char>{'Z'}
                                 : std::vector<char>{'Z', 'X'};
  for (char p : seeds) {
    PauliString img = PauliString::single(n, p, 0);
    for (std::uint64_t k = 1; k <= big_l; ++k) {
      img = apply_cqca(t, img);
      for (int shift = 0; shift < n; ++shift) {
        PauliString g = img.translated(shift);
        bool keep = true;
        PauliString logical(rep.q);
        for (int i = 0; i < n && keep; ++i) {
          char l = g.letter(i);
          if (i % 2 == 0) {
            if (i / 2 < rep.q && l != 'I') logical.apply_letter(l, i / 2);
          } else if (l != 'I' && l != constraint) {
            keep = false;
          }
        }
        if (keep && !logical.is_identity()) restricted.push_back(logical);
      }
    }
  }
  rep.closure_size = lie_closure(restricted).size();
  rep.universal =
      rep.closure_size == (std::size_t(1) << (2 * rep.q)) - 1;
  return rep;
}

struct TiltSpec {
  int column = 1;  // 1-based within the block
  int site = 0;
  char p = 'Z';    // Z tilts the a-qubit, X the b-qubit (two-qubit cell)
};

struct MeasurementPattern {
  int n = 0;
  CellKind cell = CellKind::OneQubit;
  int block_columns = 0;
  int buffers = 0;
  double dalpha = 0.0;
  std::optional<TiltSpec> tilt;

  int total_columns() const { return block_columns * (1 + buffers); }
};

inline MeasurementPattern compile_rotation(const Cqca& t, int n, CellKind cell,
                                           int i, int l, char p, double angle,
                                           int buffers = 0) {
  std::uint64_t big_l = period(t, n);
  if (l < 1 || std::uint64_t(l) > big_l)
    throw user_error("no generator at row l: reachable rows are 1.." +
                     std::to_string(big_l));
  if (cell == CellKind::OneQubit && p != 'Z')
    throw user_error("one-qubit cells tilt only a-type (Z) rotations");
  if (buffers < 0) throw user_error("buffer count must be non-negative");
  MeasurementPattern pat;
  pat.n = n;
  pat.cell = cell;
  pat.block_columns = int(big_l);
  pat.buffers = buffers;
  pat.dalpha = angle;
  if (angle != 0.0) pat.tilt = TiltSpec{l, ((i % n) + n) % n, p};
  return pat;
}

// --- tensor-network states -------------------------------------------------

class PhaseState {
 public:
  static PhaseState fixed_point(const Cqca& t, int n, CellKind cell) {
    PhaseState st(t, n, cell, 1);
    Mat one = Mat::Identity(1, 1);
    st.b_.assign(std::size_t(st.l_),
                 std::vector<Mat>(std::size_t(st.nstrings()), one));
    return st;
  }

  // Junk bond dimension 2; B^j_[l] = I + eps * (random complex matrix with
  // entries uniform in the unit square), deterministically seeded.
  static PhaseState perturbed(const Cqca& t, int n, CellKind cell, double eps,
                              std::uint64_t seed) {
    PhaseState st(t, n, cell, 2);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    st.b_.assign(std::size_t(st.l_), {});
    for (int l = 0; l < st.l_; ++l)
      for (int j = 0; j < st.nstrings(); ++j) {
        Mat m = Mat::Identity(2, 2);
        for (int r = 0; r < 2; ++r)
          for (int c = 0; c < 2; ++c)
            m(r, c) += eps * Cplx(uni(rng), uni(rng));
        st.b_[std::size_t(l)].push_back(m);
      }
    return st;
  }

  const Cqca& t() const { return t_; }
  int n() const { return n_; }
  CellKind cell() const { return cell_; }
  int l() const { return l_; }
  int junk_dim() const { return d_; }
  int column_qubits() const {
    return n_ * (cell_ == CellKind::TwoQubit ? 2 : 1);
  }
  int nstrings() const { return 1 << column_qubits(); }
  int virtual_dim() const { return 1 << n_; }
  int total_dim() const { return d_ * virtual_dim(); }
  const Mat& clifford() const { return tmat_; }
  const Mat& junk(int l, int j) const {
    return b_[std::size_t(l)][std::size_t(j)];
  }

  // Bit of qubit (site, sub) within a column string; sub 0 = a (Z-coupled),
  // sub 1 = b (X-coupled).
  int string_bit(int site, int sub) const {
    int nsub = cell_ == CellKind::TwoQubit ? 2 : 1;
    return (((site % n_) + n_) % n_) * nsub + sub;
  }

  // C^j as a Pauli string on the virtual ring.
  PauliString c_of(int j) const {
    PauliString c(n_);
    for (int i = 0; i < n_; ++i) {
      if ((j >> string_bit(i, 0)) & 1) c.apply_letter('Z', i);
      if (cell_ == CellKind::TwoQubit && ((j >> string_bit(i, 1)) & 1))
        c.apply_letter('X', i);
    }
    return c;
  }

  // Full column tensor branch: B^j_[l] (x) (C^j T).
  Mat branch(int l, int j) const {
    return kron(junk(l, j), pauli_matrix(c_of(j)) * tmat_);
  }

 private:
  PhaseState(const Cqca& t, int n, CellKind cell, int d)
      : t_(t), n_(n), cell_(cell), d_(d), l_(int(period(t, n))) {
    if (d_ * (1 << n_) > 4096)
      throw user_error("contraction dimension budget exceeded");
    tmat_ = virtual_clifford(t_, n_);
  }

  Cqca t_;
  int n_;
  CellKind cell_;
  int d_;
  int l_;
  Mat tmat_;
  std::vector<std::vector<Mat>> b_;  // [column mod L][physical string]
};

// Outcome bits, one vector per measured column (empty = all zeros, the
// all-|+> record).
using Outcomes = std::vector<std::vector<int>>;

// Exact column-by-column contraction. Default-basis qubits select the branch
// equal to their outcome bit; the tilted qubit superposes its two branches
// with amplitudes (cos 2da, i sin 2da) (swapped for outcome 1, which is the
// same rotation times a Pauli byproduct).
inline Mat simulate_pattern(const PhaseState& state,
                            const MeasurementPattern& pattern,
                            const Outcomes& outcomes = {}) {
  if (pattern.n != state.n() || pattern.cell != state.cell())
    throw user_error("pattern does not match the state geometry");
  const int cols = pattern.total_columns();
  if (!outcomes.empty() && int(outcomes.size()) != cols)
    throw user_error("outcome record length does not match the pattern");
  const int nq = state.column_qubits();
  const double theta = 2.0 * pattern.dalpha;
  Mat m = Mat::Identity(state.total_dim(), state.total_dim());
  for (int c = 0; c < cols; ++c) {
    int l = c % state.l();
    int base = 0;
    if (!outcomes.empty()) {
      if (int(outcomes[std::size_t(c)].size()) != nq)
        throw user_error("outcome column has wrong qubit count");
      for (int qb = 0; qb < nq; ++qb)
        if (outcomes[std::size_t(c)][std::size_t(qb)]) base |= 1 << qb;
    }
    bool tilted = pattern.tilt && c == pattern.tilt->column - 1;
    Mat col_op;
    if (!tilted) {
      col_op = state.branch(l, base);
    } else {
      int bit = state.string_bit(pattern.tilt->site,
                                 pattern.tilt->p == 'X' ? 1 : 0);
      Cplx amp0(std::cos(theta), 0), amp1(0, std::sin(theta));
      if ((base >> bit) & 1) std::swap(amp0, amp1);
      col_op = amp0 * state.branch(l, base & ~(1 << bit)) +
               amp1 * state.branch(l, base | (1 << bit));
    }
    m = m * col_op;
  }
  if (m.norm() < 1e-300) throw user_error("zero-weight measurement branch");
  return m;
}

// Pauli byproduct accumulated from the outcome record: the column-c branch
// operator C^s is pulled to the front through c-1 copies of T, i.e. mapped
// through t^(L-c+1).
inline PauliString byproduct_frame(const PhaseState& state,
                                   const MeasurementPattern& pattern,
                                   const Outcomes& outcomes) {
  const int cols = pattern.total_columns();
  if (int(outcomes.size()) != cols)
    throw user_error("outcome record length does not match the pattern");
  const int nq = state.column_qubits();
  const int big_l = state.l();
  PauliString frame(state.n());
  for (int c = 0; c < cols; ++c) {
    int j = 0;
    for (int qb = 0; qb < nq; ++qb)
      if (outcomes[std::size_t(c)][std::size_t(qb)]) j |= 1 << qb;
    PauliString p = state.c_of(j);
    int k = (big_l - (c % big_l)) % big_l;
    for (int step = 0; step < k; ++step) p = apply_cqca(state.t(), p);
    frame = frame * p;
  }
  return frame;
}

// Boundary extraction: sandwiches the contracted operator between the
// leading left/right eigenvectors of the all-zero-branch junk product
// P0 = B^0_[1] ... B^0_[L], returning the operator acting on the protected
// 2^N subspace.
namespace detail {

inline void leading_eigvecs(const Mat& m, Vec& left, Vec& right) {
  Eigen::ComplexEigenSolver<Mat> er(m), el(m.adjoint().eval());
  Eigen::Index ir = 0, il = 0;
  er.eigenvalues().cwiseAbs().maxCoeff(&ir);
  el.eigenvalues().cwiseAbs().maxCoeff(&il);
  right = er.eigenvectors().col(ir);
  left = el.eigenvectors().col(il);
}

}  // namespace detail

inline Mat extract_logical(const PhaseState& state, const Mat& m) {
  const int d = state.junk_dim(), dv = state.virtual_dim();
  if (d == 1) return m;
  Mat p0 = Mat::Identity(d, d);
  for (int l = 0; l < state.l(); ++l) p0 = p0 * state.junk(l, 0);
  Vec w, r;
  detail::leading_eigvecs(p0, w, r);
  Mat out = Mat::Zero(dv, dv);
  for (int p = 0; p < d; ++p)
    for (int q = 0; q < d; ++q)
      out += std::conj(w(p)) * r(q) * m.block(p * dv, q * dv, dv, dv);
  return out;
}

// |lambda_2 / lambda_1| of the one-block transfer operator of the full
// tensor; < 1 iff the blocked MPS is injective (unique leading eigenvalue).
inline double transfer_gap_ratio(const PhaseState& state) {
  const int dim = state.total_dim();
  if (dim > 64) throw user_error("transfer-spectrum budget exceeded");
  Mat e = Mat::Identity(dim * dim, dim * dim);
  for (int l = 0; l < state.l(); ++l) {
    Mat col = Mat::Zero(dim * dim, dim * dim);
    for (int j = 0; j < state.nstrings(); ++j) {
      Mat a = state.branch(l, j);
      col += kron(a.conjugate(), a);
    }
    e = e * col;
  }
  Eigen::ComplexEigenSolver<Mat> es(e);
  std::vector<double> mags;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    mags.push_back(std::abs(es.eigenvalues()(i)));
  std::sort(mags.begin(), mags.end(), std::greater<double>());
  if (mags[0] < 1e-300) return 1.0;
  return mags[1] / mags[0];
}

// First-order response coefficient of a tilt at qubit (site, sub) in column
// l: the ratio of the single-flip junk path to the all-zero path, evaluated
// between the boundary eigenvectors. 1 at the fixed point; 0 marks a
// computation-failure point.
inline Cplx estimate_nu(const PhaseState& state, int site, int l,
                        int sub = 0) {
  if (l < 1 || l > state.l()) throw user_error("row l out of range [1, L]");
  if (transfer_gap_ratio(state) > 1.0 - 1e-9)
    throw user_error("state is not injective: nu is undefined");
  const int d = state.junk_dim();
  Mat p0 = Mat::Identity(d, d), path = Mat::Identity(d, d);
  int flip = 1 << state.string_bit(site, sub);
  for (int c = 0; c < state.l(); ++c) {
    p0 = p0 * state.junk(c, 0);
    path = path * state.junk(c, c == l - 1 ? flip : 0);
  }
  Vec w, r;
  detail::leading_eigvecs(p0, w, r);
  Cplx den = (w.adjoint() * p0 * r)(0, 0);
  Cplx num = (w.adjoint() * path * r)(0, 0);
  if (std::abs(den) < 1e-300)
    throw user_error("degenerate boundary overlap: nu is undefined");
  return num / den;
}

// exp(i * theta * nu * V(g)) for a Pauli g (g^2 = I, so the exponential is
// cos + i sin exactly; complex nu is accepted).
inline Mat rotation_target(const PauliString& g, double theta, Cplx nu = 1.0) {
  Cplx a = nu * theta;
  Mat gp = pauli_matrix(g);
  return std::cos(a) * Mat::Identity(gp.rows(), gp.cols()) +
         Cplx(0, 1) * std::sin(a) * gp;
}

struct DecouplingReport {
  std::vector<double> residuals;  // index k = buffer blocks measured
  double rate = 0.0;              // |lambda_2/lambda_1| of the junk channel
  double slope = 0.0;             // fitted d(log residual)/dk
  double r2 = 0.0;
};

// Measures k buffer blocks in the default basis, sums outcomes with the
// Pauli frame corrected; the corrected block channel acts on the junk factor
// alone, so the residual between the evolved state and
// (junk fixed point) (x) (its own reduced logical state) must decay at the
// channel's spectral-gap rate.
inline DecouplingReport oblivious_wire(const PhaseState& state, int kmax,
                                       std::uint64_t probe_seed = 20240817) {
  if (transfer_gap_ratio(state) > 1.0 - 1e-9)
    throw user_error("state is not injective: wire is not oblivious");
  const int d = state.junk_dim(), dv = state.virtual_dim();
  // Kraus operators of the frame-corrected block channel: the junk products
  // over one block, one per outcome string.
  std::vector<Mat> kraus;
  double strings_per_block = std::pow(double(state.nstrings()), state.l());
  if (strings_per_block > 65536.0)
    throw user_error("outcome enumeration budget exceeded");
  for (std::uint64_t big = 0; big < std::uint64_t(strings_per_block); ++big) {
    std::uint64_t rest = big;
    Mat b = Mat::Identity(d, d);
    for (int l = 0; l < state.l(); ++l) {
      b = b * state.junk(l, int(rest % std::uint64_t(state.nstrings())));
      rest /= std::uint64_t(state.nstrings());
    }
    kraus.push_back(b);
  }
  DecouplingReport rep;
  // Channel spectrum (vec(B rho B^dag) = (conj B (x) B) vec(rho)).
  Mat f = Mat::Zero(d * d, d * d);
  for (const Mat& b : kraus) f += kron(b.conjugate(), b);
  Eigen::ComplexEigenSolver<Mat> es(f);
  std::vector<std::pair<double, Eigen::Index>> mags;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    mags.push_back({std::abs(es.eigenvalues()(i)), i});
  std::sort(mags.begin(), mags.end(), std::greater<>());
  rep.rate = d == 1 ? 0.0 : mags[1].first / std::max(mags[0].first, 1e-300);
  // Junk fixed point: leading eigenmatrix, Hermitian part, unit trace.
  Mat sigma = Mat::Identity(d, d);
  if (d > 1) {
    Vec v = es.eigenvectors().col(mags[0].second);
    sigma = Eigen::Map<Mat>(v.data(), d, d).eval();  // column-major vec
    Cplx tr = sigma.trace();
    if (std::abs(tr) < 1e-12)
      throw internal_error("junk fixed point has vanishing trace");
    sigma *= std::conj(tr) / std::abs(tr);  // make the trace real positive
    sigma = ((sigma + sigma.adjoint()) / 2.0).eval();
    sigma /= sigma.trace();
  }
  // Probe: a fixed random pure state on junk (x) logical.
  std::mt19937_64 rng(probe_seed);
  std::normal_distribution<double> gauss;
  Vec psi(d * dv);
  for (int i = 0; i < d * dv; ++i) psi(i) = Cplx(gauss(rng), gauss(rng));
  psi /= psi.norm();
  Mat rho = psi * psi.adjoint();
  auto residual = [&](const Mat& r) {
    Mat red = Mat::Zero(dv, dv);
    for (int p = 0; p < d; ++p) red += r.block(p * dv, p * dv, dv, dv);
    Mat ideal = kron(sigma, red);
    return (r - ideal).norm();
  };
  for (int k = 0; k <= kmax; ++k) {
    rep.residuals.push_back(residual(rho));
    Mat next = Mat::Zero(d * dv, d * dv);
    for (const Mat& b : kraus) {
      Mat kb = kron(b, Mat::Identity(dv, dv));
      next += kb * rho * kb.adjoint();
    }
    Cplx tr = next.trace();
    if (std::abs(tr) < 1e-300) throw internal_error("channel annihilated rho");
    rho = next / tr;
  }
  // Log-linear fit of the decaying residuals over the tail half of the run:
  // the decay is a mixture of channel eigenmodes and is exponential only
  // once the subleading ones have died out.
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = rep.residuals.size() / 2; k < rep.residuals.size(); ++k)
    if (rep.residuals[k] > 1e-14)
      pts.push_back({double(k), std::log(rep.residuals[k])});
  if (pts.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0, m = double(pts.size());
    for (auto [x, y] : pts) {
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      syy += y * y;
    }
    double cov = sxy - sx * sy / m, varx = sxx - sx * sx / m,
           vary = syy - sy * sy / m;
    rep.slope = cov / varx;
    rep.r2 = vary > 1e-300 ? cov * cov / (varx * vary) : 1.0;
  }
  return rep;
}

struct ComputationSize {
  int n_use = 0;
  std::uint64_t l = 0;
  bool linear_guarantee = true;
};

// Usable system size and block length per class: periodic CQCA run at any N
// with L = a + 2; gliders need even N with L = N; fractal CQCA only have a
// linearity guarantee at powers of two.
inline ComputationSize period_for_computation(const Cqca& t, int n) {
  CqcaClass cls = classify(t);
  ComputationSize out;
  switch (cls.kind) {
    case CqcaKind::Periodic:
      out.n_use = n;
      break;
    case CqcaKind::Glider:
      out.n_use = n + (n % 2);
      break;
    case CqcaKind::Fractal: {
      int p = 1;
      while (p < n) p *= 2;
      out.n_use = p;
      if (p != n) out.linear_guarantee = false;
      break;
    }
  }
  out.l = period(t, out.n_use);
  return out;
}

// Measurements per logical gate: one block of N sites x L columns, repeated
// for each buffer block.
inline std::uint64_t measurements_per_gate(const Cqca& t, int n,
                                           int buffers = 0) {
  return std::uint64_t(n) * period(t, n) * std::uint64_t(1 + buffers);
}

// Exact measurement-count ratio numerator/denominator (not reduced).
inline std::pair<std::uint64_t, std::uint64_t> speedup_ratio(const Cqca& ta,
                                                             const Cqca& tb,
                                                             int n) {
  return {measurements_per_gate(ta, n), measurements_per_gate(tb, n)};
}

}  // namespace cqca
