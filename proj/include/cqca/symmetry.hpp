#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "cqca/pauli.hpp"

// L-cycle subsystem-symmetry patterns: the on-site representation
// u(xi) = prod_i X_i^{xi^X_i} cycles through u(t^m xi) with the period of t.
// For two-qubit cells the representation is
// u'(xi) = prod_i (X^a_i)^{xi^X_i} (X^b_i)^{xi^Z_i}.

namespace cqca {

enum class CellKind { OneQubit, TwoQubit };

inline std::string cell_name(CellKind c) {
  return c == CellKind::OneQubit ? "one_qubit" : "two_qubit";
}

class SymmetryPattern {
 public:
  SymmetryPattern(int n, CellKind cell, PauliString seed,
                  std::vector<PauliString> states)
      : n_(n), cell_(cell), seed_(std::move(seed)), states_(std::move(states)) {}

  int n() const { return n_; }
  int l() const { return int(states_.size()); }
  CellKind cell() const { return cell_; }
  const PauliString& seed() const { return seed_; }
  const std::vector<PauliString>& states() const { return states_; }

  // Site code in row m: bit 0 = X (a-qubit), bit 1 = b-qubit (two_qubit only).
  int site_code(int m, int i) const {
    const PauliString& s = states_[std::size_t(m)];
    int code = s.x(i) ? 1 : 0;
    if (cell_ == CellKind::TwoQubit && s.z(i)) code |= 2;
    return code;
  }

  // Flattened F2 support vector of the whole cycle (the operator's X-mask);
  // linear in the seed, used for rank/faithfulness arguments.
  BitVec mask() const {
    int per = cell_ == CellKind::TwoQubit ? 2 : 1;
    BitVec v(std::size_t(l()) * std::size_t(n_) * std::size_t(per));
    for (int m = 0; m < l(); ++m)
      for (int i = 0; i < n_; ++i) {
        int code = site_code(m, i);
        std::size_t base = (std::size_t(m) * std::size_t(n_) + std::size_t(i)) *
                           std::size_t(per);
        if (code & 1) v.set(base, true);
        if (per == 2 && (code & 2)) v.set(base + 1, true);
      }
    return v;
  }

 private:
  int n_;
  CellKind cell_;
  PauliString seed_;
  std::vector<PauliString> states_;  // t^m (seed), m = 0..L-1
};

inline SymmetryPattern build_cycle(const Cqca& t, const PauliString& seed,
                                   CellKind cell) {
  const int n = seed.n();
  std::uint64_t l = period(t, n);
  std::vector<PauliString> states;
  states.reserve(std::size_t(l));
  PauliString cur = seed;
  for (std::uint64_t m = 0; m < l; ++m) {
    states.push_back(cur);
    cur = apply_cqca(t, cur);
  }
  if (!(cur == seed))
    throw internal_error("build_cycle: orbit does not close at the period");
  return SymmetryPattern(n, cell, seed, std::move(states));
}

inline bool is_glider_of(const Cqca& t, const PauliString& p) {
  CqcaClass cls = classify(t);
  if (cls.kind != CqcaKind::Glider) return false;
  PauliString img = apply_cqca(t, p);
  return img == p.translated(cls.param) || img == p.translated(-cls.param);
}

inline SymmetryPattern line_symmetry(const Cqca& t, const PauliString& glider) {
  if (!is_glider_of(t, glider))
    throw user_error("line_symmetry: seed is not a glider of this CQCA");
  return build_cycle(t, glider, CellKind::OneQubit);
}

// F2 rank of the line-symmetry group generated by all translates of all
// gliders; 2(N-1) for the glider CQCA on a ring of N.
inline std::size_t line_group_rank(const Cqca& t, int n) {
  std::vector<BitVec> masks;
  for (const Glider& g : find_gliders(t, n))
    for (int s = 0; s < n; ++s)
      masks.push_back(
          build_cycle(t, g.op.translated(s), CellKind::OneQubit).mask());
  return f2_rank(masks);
}

// True iff seed -> cycle pattern has trivial kernel over the 2N seed
// generators (X_i and Z_i), i.e. the representation is faithful.
inline bool faithfulness_check(const Cqca& t, int n, CellKind cell) {
  std::vector<BitVec> masks;
  for (int i = 0; i < n; ++i)
    for (char axis : {'X', 'Z'})
      masks.push_back(
          build_cycle(t, PauliString::single(n, axis, i), cell).mask());
  return f2_rank(masks) == std::size_t(2 * n);
}

enum class RenderFormat { Ascii, Pbm, Json };

inline RenderFormat render_format_from_name(const std::string& s) {
  if (s == "ascii") return RenderFormat::Ascii;
  if (s == "pbm") return RenderFormat::Pbm;
  if (s == "json") return RenderFormat::Json;
  throw user_error("unknown render format '" + s + "'");
}

// Row m of the raster corresponds to u(t^m seed); row index grows downward.
// Two-qubit cells render the a-qubit in the left pixel/character slot.
inline std::string render(const SymmetryPattern& p, RenderFormat format) {
  const bool two = p.cell() == CellKind::TwoQubit;
  std::ostringstream os;
  switch (format) {
    case RenderFormat::Ascii:
      for (int m = 0; m < p.l(); ++m) {
        for (int i = 0; i < p.n(); ++i) {
          static const char one_chars[2] = {'.', 'X'};
          static const char two_chars[4] = {'.', 'A', 'B', '2'};
          int code = p.site_code(m, i);
          os << (two ? two_chars[code] : one_chars[code & 1]);
        }
        os << '\n';
      }
      break;
    case RenderFormat::Pbm: {
      int width = p.n() * (two ? 2 : 1);
      os << "P1\n" << width << " " << p.l() << "\n";
      for (int m = 0; m < p.l(); ++m) {
        for (int i = 0; i < p.n(); ++i) {
          int code = p.site_code(m, i);
          if (i) os << ' ';
          os << ((code & 1) ? '1' : '0');
          if (two) os << ' ' << ((code & 2) ? '1' : '0');
        }
        os << '\n';
      }
      break;
    }
    case RenderFormat::Json: {
      os << "{\n";
      os << "  \"n\": " << p.n() << ",\n";
      os << "  \"l\": " << p.l() << ",\n";
      os << "  \"cell\": \"" << cell_name(p.cell()) << "\",\n";
      os << "  \"seed\": \"" << p.seed().str() << "\",\n";
      os << "  \"rows\": [";
      for (int m = 0; m < p.l(); ++m) {
        os << (m ? ",\n    \"" : "\n    \"");
        for (int i = 0; i < p.n(); ++i) {
          int code = p.site_code(m, i);
          os << ((code & 1) ? '1' : '0');
          if (two) os << ((code & 2) ? '1' : '0');
        }
        os << '"';
      }
      os << "\n  ]\n}\n";
      break;
    }
  }
  return os.str();
}

}  // namespace cqca
