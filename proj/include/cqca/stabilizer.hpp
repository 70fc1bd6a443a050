#pragma once

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cqca/symmetry.hpp"

// Local stabilizer groups of the fixed-point states on an N x M torus,
// for one-qubit and two-qubit unit cells, plus verification utilities.

namespace cqca {

struct TorusSite {
  int i;    // ring index, mod N
  int c;    // column index, mod M
  int sub;  // 0 = a, 1 = b (always 0 for one-qubit cells)
};

class StabilizerTableau {
 public:
  StabilizerTableau(int n, int m, CellKind cell)
      : n_(n), m_(m), cell_(cell) {
    if (n < 1 || m < 1) throw user_error("torus dimensions must be positive");
  }

  int n() const { return n_; }
  int m() const { return m_; }
  CellKind cell() const { return cell_; }
  int nsub() const { return cell_ == CellKind::TwoQubit ? 2 : 1; }
  int qubits() const { return n_ * m_ * nsub(); }

  // Flat qubit index ((c*N)+i)*nsub + sub, coordinates wrapped.
  int qubit(int i, int c, int sub = 0) const {
    i = ((i % n_) + n_) % n_;
    c = ((c % m_) + m_) % m_;
    if (sub < 0 || sub >= nsub()) throw internal_error("bad sublattice index");
    return (c * n_ + i) * nsub() + sub;
  }
  TorusSite site_of(int q) const {
    int sub = q % nsub();
    q /= nsub();
    return {q % n_, q / n_, sub};
  }

  void add_generator(PauliString g, TorusSite center) {
    if (g.n() != qubits())
      throw internal_error("generator size does not match lattice");
    generators_.push_back(std::move(g));
    centers_.push_back(center);
  }

  const std::vector<PauliString>& generators() const { return generators_; }
  const std::vector<TorusSite>& centers() const { return centers_; }

 private:
  int n_, m_;
  CellKind cell_;
  std::vector<PauliString> generators_;
  std::vector<TorusSite> centers_;
};

namespace detail {

// Applies `letter` at the sites i + e for every exponent e of p (reduced
// mod N), at fixed column/sublattice.
inline void toggle_poly(PauliString& g, const StabilizerTableau& lat,
                        const LaurentPoly& p, int i, int c, int sub,
                        char letter) {
  LaurentPoly red = p.reduced(lat.n());
  for (int e : red.terms())
    g.apply_letter(letter, lat.qubit(i + e, c, sub));
}

}  // namespace detail

// One generator per physical qubit.
//
// One-qubit cell (simple t): K_{i,c} = Z_{i,c-1} X_{i,c} Zbar_{i,c} Z_{i,c+1}
// with Zbar_i = prod_k [Z_{i-k} Z_{i+k}]^{alpha_k} Z_i^beta read off
// Tr(t) = beta + sum_k alpha_k (u^k + u^-k).
//
// Two-qubit cell (any t): one generator per virtual seed xi in
// {unit X_i, unit Z_i}. On the local tensor Z^{j_a} X^{j_b} T, the exact
// (sign-free) virtual insertions of the physical Paulis are
//   X^a_i : Z_i  left of the tensor,
//   X^b_i : X_i  right of Z^a X^b, i.e. t^-1(X_i) on the next bond,
//   Z^a_i : X_i  on both sides (conjugation),
//   Z^b_i : Z_i  on both sides (conjugation).
// Cancelling insertions bond by bond yields the two-cell generator
//   K(xi, c) = [X^a at Z-comp(xi)] [Z^b at Z-comp(xi)] [X^b at X-comp(xi)]_c
//            * [X^a at Z-comp(eta)] [Z^a at X-comp(eta)]
//              [X^b at X-comp(eta)]_{c+1},
// where eta = t^-1 xi: cell c deposits V(xi) right of its tensor, and the
// cell-(c+1) factor cancels the transported t^-1 V(xi) on the shared bond.
inline StabilizerTableau fixed_point_stabilizers(const Cqca& t, int n, int m,
                                                 CellKind cell) {
  StabilizerTableau tab(n, m, cell);
  PolyMat2 tm = t.mat().reduced(n);
  if (cell == CellKind::OneQubit) {
    if (!is_simple(t))
      throw user_error(
          "one-qubit-cell stabilizers require a simple CQCA (Tr/1/1/0 form)");
    LaurentPoly tr = tm.trace();
    for (int c = 0; c < m; ++c)
      for (int i = 0; i < n; ++i) {
        PauliString k(tab.qubits());
        k.apply_letter('Z', tab.qubit(i, c - 1));
        k.apply_letter('X', tab.qubit(i, c));
        detail::toggle_poly(k, tab, tr, i, c, 0, 'Z');
        k.apply_letter('Z', tab.qubit(i, c + 1));
        tab.add_generator(std::move(k), {i, c, 0});
      }
  } else {
    for (int c = 0; c < m; ++c)
      for (int i = 0; i < n; ++i)
        for (int which = 0; which < 2; ++which) {
          LaurentPoly xi_x = LaurentPoly::zero(n), xi_z = LaurentPoly::zero(n);
          (which == 0 ? xi_x : xi_z).toggle(i);
          // eta = t^-1 xi via the adjugate [[d,b],[c,a]] (det = 1 over F2).
          LaurentPoly eta_x = tm.e[1][1] * xi_x + tm.e[0][1] * xi_z;
          LaurentPoly eta_z = tm.e[1][0] * xi_x + tm.e[0][0] * xi_z;
          PauliString k(tab.qubits());
          // Cell c: deposit V(xi) right of the tensor.
          detail::toggle_poly(k, tab, xi_z, 0, c, 0, 'Z');
          detail::toggle_poly(k, tab, xi_z, 0, c, 1, 'X');
          detail::toggle_poly(k, tab, xi_x, 0, c, 1, 'Z');
          // Cell c+1: cancel the transported image of V(xi).
          detail::toggle_poly(k, tab, eta_z, 0, c + 1, 0, 'Z');
          detail::toggle_poly(k, tab, eta_x, 0, c + 1, 0, 'X');
          detail::toggle_poly(k, tab, eta_x, 0, c + 1, 1, 'Z');
          tab.add_generator(std::move(k), {i, c, which});
        }
  }
  return tab;
}

struct TableauReport {
  bool all_commute = true;
  std::vector<std::pair<int, int>> commute_failures;
  std::size_t rank = 0;
  bool independent = false;
  int max_radius = 0;
  bool ok() const {
    return all_commute && independent;
  }
};

inline TableauReport verify_tableau(const StabilizerTableau& tab) {
  TableauReport rep;
  const auto& gens = tab.generators();
  for (std::size_t a = 0; a < gens.size(); ++a)
    for (std::size_t b = a + 1; b < gens.size(); ++b)
      if (symplectic_product(gens[a], gens[b])) {
        rep.all_commute = false;
        rep.commute_failures.emplace_back(int(a), int(b));
      }
  std::vector<BitVec> rows;
  rows.reserve(gens.size());
  for (const auto& g : gens) rows.push_back(g.symplectic());
  rep.rank = f2_rank(rows);
  rep.independent = rep.rank == gens.size();
  const int n = tab.n(), m = tab.m();
  for (std::size_t gi = 0; gi < gens.size(); ++gi) {
    TorusSite ctr = tab.centers()[gi];
    for (int q = 0; q < tab.qubits(); ++q) {
      if (gens[gi].letter(q) == 'I') continue;
      TorusSite s = tab.site_of(q);
      int di = std::abs(s.i - ctr.i);
      di = std::min(di, n - di);
      int dc = std::abs(s.c - ctr.c);
      dc = std::min(dc, m - dc);
      rep.max_radius = std::max(rep.max_radius, std::max(di, dc));
    }
  }
  return rep;
}

// The physical operator obtained by tiling the L-cycle pattern around the
// torus starting at `column_offset` (M must be a multiple of the period).
inline PauliString tile_pattern(const StabilizerTableau& tab,
                                const SymmetryPattern& pattern,
                                int column_offset) {
  if (pattern.n() != tab.n() || pattern.cell() != tab.cell())
    throw user_error("pattern does not match the lattice");
  if (pattern.l() == 0 || tab.m() % pattern.l() != 0)
    throw user_error("torus circumference M must be a multiple of the period");
  PauliString op(tab.qubits());
  for (int c = 0; c < tab.m(); ++c) {
    int row = ((c - column_offset) % pattern.l() + pattern.l()) % pattern.l();
    for (int i = 0; i < tab.n(); ++i) {
      int code = pattern.site_code(row, i);
      if (code & 1) op.apply_letter('X', tab.qubit(i, c, 0));
      if (code & 2) op.apply_letter('X', tab.qubit(i, c, 1));
    }
  }
  return op;
}

inline bool symmetry_membership(const StabilizerTableau& tab,
                                const SymmetryPattern& pattern,
                                int column_offset) {
  PauliString op = tile_pattern(tab, pattern, column_offset);
  std::vector<BitVec> rows;
  for (const auto& g : tab.generators()) rows.push_back(g.symplectic());
  return f2_solve(rows, op.symplectic(), std::size_t(2 * tab.qubits())).ok;
}

struct GraphState {
  int qubits = 0;
  std::set<std::pair<int, int>> edges;  // (min, max) flat qubit indices
  bool s_dressed = false;               // global S applied to every site
};

// Recovers the adjacency by normalizing each K to X-center/Z-neighbor form.
// Y centers (trace parity 1) are reported via the global S-dressing flag.
inline GraphState graph_state_extract(const StabilizerTableau& tab) {
  if (tab.cell() != CellKind::OneQubit)
    throw user_error("graph extraction is defined for one-qubit cells");
  GraphState g;
  g.qubits = tab.qubits();
  for (std::size_t gi = 0; gi < tab.generators().size(); ++gi) {
    const PauliString& k = tab.generators()[gi];
    int center = tab.qubit(tab.centers()[gi].i, tab.centers()[gi].c);
    char ctr_letter = k.letter(center);
    if (ctr_letter == 'X') {
      if (g.s_dressed && gi > 0)
        throw user_error("mixed X/Y centers: not a uniformly dressed graph");
    } else if (ctr_letter == 'Y') {
      if (!g.s_dressed && gi > 0)
        throw user_error("mixed X/Y centers: not a uniformly dressed graph");
      g.s_dressed = true;
    } else {
      throw user_error("generator has no X/Y at its center site");
    }
    for (int q = 0; q < tab.qubits(); ++q) {
      if (q == center) continue;
      char l = k.letter(q);
      if (l == 'I') continue;
      if (l != 'Z')
        throw user_error("generator has non-Z support off-center");
      g.edges.insert({std::min(center, q), std::max(center, q)});
    }
  }
  // Adjacency must be consistent: each edge seen from both endpoints.
  for (auto [a, b] : g.edges) {
    TorusSite sa = tab.site_of(a);
    const PauliString& kb =
        tab.generators()[std::size_t(tab.qubit(sa.i, sa.c))];
    // Generator index of qubit b equals its flat index (one generator per
    // qubit, emitted in lattice order).
    TorusSite sb = tab.site_of(b);
    const PauliString& ka =
        tab.generators()[std::size_t(tab.qubit(sb.i, sb.c))];
    if (kb.letter(a) == 'I' || ka.letter(b) == 'I')
      throw user_error("asymmetric adjacency: not a graph state");
  }
  return g;
}

// True iff the one-qubit-cell tableau for t on N x M and the two-qubit-cell
// tableau for t^2 on N x (M/2) span the same F2 group, after pairing the
// one-qubit columns (2k, 2k+1) into site k. Column 2k hosts the a qubit and
// column 2k+1 the b qubit of the pair.
inline bool cross_validate_cells(const Cqca& t, int n, int m) {
  if (!is_simple(t))
    throw user_error("cross_validate_cells requires a simple CQCA");
  if (m % 2 != 0) throw user_error("M must be even to pair columns");
  StabilizerTableau one = fixed_point_stabilizers(t, n, m, CellKind::OneQubit);
  StabilizerTableau two =
      fixed_point_stabilizers(compose(t, t), n, m / 2, CellKind::TwoQubit);
  std::vector<BitVec> span_one, span_two;
  for (const auto& g : one.generators()) {
    PauliString mapped(two.qubits());
    for (int q = 0; q < one.qubits(); ++q) {
      char l = g.letter(q);
      if (l == 'I') continue;
      TorusSite s = one.site_of(q);
      int sub = (s.c % 2 == 0) ? 0 : 1;
      mapped.apply_letter(l, two.qubit(s.i, s.c / 2, sub));
    }
    span_one.push_back(mapped.symplectic());
  }
  for (const auto& g : two.generators()) span_two.push_back(g.symplectic());
  return f2_same_span(span_one, span_two);
}

inline std::string site_label(const StabilizerTableau& tab, int q) {
  TorusSite s = tab.site_of(q);
  std::ostringstream os;
  os << "(" << s.i << "," << s.c << ")";
  std::string coords = os.str();
  if (tab.cell() == CellKind::TwoQubit)
    return (s.sub == 0 ? "a" : "b") + coords;
  return coords;
}

// Text export: one `K[i,c] = Z(0,1) X(0,2) ...` line per generator
// (`K[i,c,a|b]` for two-qubit cells).
inline std::string tableau_text(const StabilizerTableau& tab) {
  std::ostringstream os;
  for (std::size_t gi = 0; gi < tab.generators().size(); ++gi) {
    TorusSite ctr = tab.centers()[gi];
    os << "K[" << ctr.i << "," << ctr.c;
    if (tab.cell() == CellKind::TwoQubit) os << "," << (ctr.sub == 0 ? "x" : "z");
    os << "] =";
    bool any = false;
    for (int q = 0; q < tab.qubits(); ++q) {
      char l = tab.generators()[gi].letter(q);
      if (l == 'I') continue;
      os << " " << l << site_label(tab, q);
      any = true;
    }
    if (!any) os << " I";
    os << "\n";
  }
  return os.str();
}

inline std::string tableau_json(const StabilizerTableau& tab) {
  std::ostringstream os;
  os << "{\n  \"n\": " << tab.n() << ",\n  \"m\": " << tab.m()
     << ",\n  \"cell\": \"" << cell_name(tab.cell()) << "\",\n"
     << "  \"generators\": [";
  for (std::size_t gi = 0; gi < tab.generators().size(); ++gi) {
    os << (gi ? ",\n    \"" : "\n    \"");
    bool any = false;
    for (int q = 0; q < tab.qubits(); ++q) {
      char l = tab.generators()[gi].letter(q);
      if (l == 'I') continue;
      if (any) os << " ";
      os << l << site_label(tab, q);
      any = true;
    }
    if (!any) os << "I";
    os << '"';
  }
  os << "\n  ]\n}\n";
  return os.str();
}

// H = -sum_i K_i: the same generators, each with coefficient -1.
inline std::string hamiltonian_text(const StabilizerTableau& tab) {
  std::ostringstream os;
  std::istringstream lines(tableau_text(tab));
  std::string line;
  while (std::getline(lines, line)) {
    auto eq = line.find('=');
    os << "-1 *" << line.substr(eq + 1) << "\n";
  }
  return os.str();
}

}  // namespace cqca
