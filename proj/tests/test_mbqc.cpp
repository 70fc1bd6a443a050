#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cqca/mbqc.hpp"

using namespace cqca;

namespace {

// All 4^n Pauli frames on n qubits (letters only; phases are irrelevant to
// distance_phase_opt).
std::vector<PauliString> all_frames(int n) {
  std::vector<PauliString> out;
  for (int xm = 0; xm < (1 << n); ++xm)
    for (int zm = 0; zm < (1 << n); ++zm) {
      PauliString p(n);
      for (int i = 0; i < n; ++i) {
        if ((xm >> i) & 1) p.apply_letter('X', i);
        if ((zm >> i) & 1) p.apply_letter('Z', i);
      }
      out.push_back(p);
    }
  return out;
}

// Distance between the contracted fixed-point block and the ideal rotation
// exp(+-i theta V(image)), minimized over byproduct frames and the generator
// sign (the trailing T^L is itself a Pauli, fixed only up to convention).
double fixed_point_gate_distance(const Cqca& t, int n, CellKind cell, int i,
                                 int l, char p) {
  const double dalpha = 1e-3;
  PhaseState st = PhaseState::fixed_point(t, n, cell);
  MeasurementPattern pat = compile_rotation(t, n, cell, i, l, p, dalpha);
  Mat m = simulate_pattern(st, pat);
  GateGenerator g = gate_generator(t, n, i, l, cell, p);
  std::vector<PauliString> frames = all_frames(n);
  double theta = 2.0 * dalpha;
  return std::min(
      distance_up_to_frame(m, rotation_target(g.image, theta), frames),
      distance_up_to_frame(m, rotation_target(g.image, -theta), frames));
}

}  // namespace

TEST_CASE("gate generator goldens") {
  CHECK(gate_generator(preset_tg(), 4, 1, 4, CellKind::OneQubit).image.str() ==
        "X1 @N=4");
  CHECK(gate_generator(preset_tg(), 4, 1, 1, CellKind::OneQubit).image.str() ==
        "Z1 @N=4");
  CHECK_THROWS_AS(gate_generator(preset_tg(), 4, 0, 5, CellKind::OneQubit),
                  user_error);
  CHECK_THROWS_AS(
      gate_generator(preset_tg(), 4, 0, 1, CellKind::OneQubit, 'X'),
      user_error);
  CHECK_THROWS_AS(
      gate_generator(preset_te(), 4, 0, 1, CellKind::TwoQubit, 'Y'),
      user_error);
}

TEST_CASE("entangling layouts") {
  LogicalLayout g = entangling_layout(preset_tg(), 4);
  CHECK(g.half_width == 1);
  CHECK(g.source_power == 2);
  CHECK(g.source_p == 'Z');
  REQUIRE(g.ancilla.size() == 1);
  CHECK(g.ancilla[0] == 'Z');
  CHECK(g.left == 'X');
  CHECK(g.right == 'X');

  LogicalLayout e = entangling_layout(preset_te(), 4);
  CHECK(e.half_width == 1);
  CHECK(e.source_power == 1);
  CHECK(e.source_p == 'X');
  REQUIRE(e.ancilla.size() == 1);
  CHECK(e.ancilla[0] == 'X');
  CHECK(e.left == 'Z');
  CHECK(e.right == 'Z');

  CHECK_THROWS_AS(entangling_layout(preset_tp(), 4), user_error);
}

TEST_CASE("universality") {
  UniversalityReport tg = universality_check(preset_tg(), 4, CellKind::OneQubit);
  CHECK(tg.entangling);
  CHECK(tg.universal);
  CHECK(tg.q == 2);
  CHECK(tg.closure_size == 15);

  UniversalityReport tf = universality_check(preset_tf(), 4, CellKind::OneQubit);
  CHECK(tf.universal);
  CHECK(tf.closure_size == 15);

  UniversalityReport te = universality_check(preset_te(), 4, CellKind::TwoQubit);
  CHECK(te.universal);
  CHECK(te.closure_size == 15);

  UniversalityReport tp = universality_check(preset_tp(), 4, CellKind::OneQubit);
  CHECK_FALSE(tp.entangling);
  CHECK_FALSE(tp.universal);
  CHECK(tp.closure_size == 0);

  CHECK_THROWS_AS(universality_check(preset_tg(), 14, CellKind::OneQubit),
                  user_error);
}

TEST_CASE("fixed point realizes the compiled rotations") {
  // Two-qubit cell on the periodic entangler: both seed types, both rows.
  for (int l : {1, 2})
    for (char p : {'Z', 'X'})
      CHECK(fixed_point_gate_distance(preset_te(), 4, CellKind::TwoQubit, 1, l,
                                      p) < 1e-8);
  // One-qubit cell on the glider automaton.
  int big_l = int(period(preset_tg(), 3));
  for (int l : {1, big_l})
    CHECK(fixed_point_gate_distance(preset_tg(), 3, CellKind::OneQubit, 0, l,
                                    'Z') < 1e-8);
}

TEST_CASE("compile_rotation argument checks") {
  Cqca tg = preset_tg();
  CHECK_THROWS_AS(compile_rotation(tg, 4, CellKind::OneQubit, 0, 0, 'Z', 0.1),
                  user_error);
  CHECK_THROWS_AS(compile_rotation(tg, 4, CellKind::OneQubit, 0, 5, 'Z', 0.1),
                  user_error);
  CHECK_THROWS_AS(compile_rotation(tg, 4, CellKind::OneQubit, 0, 1, 'X', 0.1),
                  user_error);
  CHECK_THROWS_AS(
      compile_rotation(tg, 4, CellKind::OneQubit, 0, 1, 'Z', 0.1, -1),
      user_error);
  MeasurementPattern flat =
      compile_rotation(tg, 4, CellKind::OneQubit, 0, 1, 'Z', 0.0);
  CHECK_FALSE(flat.tilt.has_value());
  CHECK(flat.total_columns() == 4);
  MeasurementPattern buf =
      compile_rotation(tg, 4, CellKind::OneQubit, 0, 1, 'Z', 0.1, 2);
  CHECK(buf.total_columns() == 12);
}

TEST_CASE("byproduct frames") {
  Cqca tg = preset_tg();
  PhaseState st = PhaseState::fixed_point(tg, 2, CellKind::OneQubit);
  MeasurementPattern pat =
      compile_rotation(tg, 2, CellKind::OneQubit, 0, 1, 'Z', 0.0);
  Outcomes zeros(std::size_t(pat.total_columns()), std::vector<int>(2, 0));
  CHECK(byproduct_frame(st, pat, zeros).is_identity());
  Outcomes one = zeros;
  one[0][0] = 1;  // column 0 needs no transport: the frame is Z_0 itself
  CHECK(byproduct_frame(st, pat, one).str() == "Z0 @N=2");
  CHECK_THROWS_AS(byproduct_frame(st, pat, Outcomes{}), user_error);
}

TEST_CASE("nu is exactly one at the fixed point") {
  PhaseState st = PhaseState::fixed_point(preset_tg(), 2, CellKind::OneQubit);
  CHECK(transfer_gap_ratio(st) < 1.0 - 1e-9);
  for (int l : {1, 2}) CHECK(std::abs(estimate_nu(st, 0, l) - 1.0) < 1e-12);
  CHECK_THROWS_AS(estimate_nu(st, 0, 0), user_error);
}

TEST_CASE("oblivious wire decouples the junk register") {
  PhaseState st =
      PhaseState::perturbed(preset_tg(), 2, CellKind::OneQubit, 0.1, 1);
  CHECK(transfer_gap_ratio(st) < 1.0 - 1e-9);
  DecouplingReport rep = oblivious_wire(st, 20);
  REQUIRE(rep.residuals.size() == 21);
  CHECK(rep.rate < 1.0);
  CHECK(rep.slope < 0.0);
  CHECK(rep.r2 > 0.99);
  CHECK(rep.residuals.back() < rep.residuals.front());
}

TEST_CASE("perturbed states stay injective with a finite nu") {
  PhaseState st =
      PhaseState::perturbed(preset_tg(), 2, CellKind::OneQubit, 0.1, 3);
  Cplx nu = estimate_nu(st, 0, 1);
  CHECK(std::abs(nu) > 0.1);
  CHECK(std::abs(nu - 1.0) < 1.0);  // small perturbation, small shift
}

TEST_CASE("computation sizes per class") {
  ComputationSize g = period_for_computation(preset_tg(), 3);
  CHECK(g.n_use == 4);
  CHECK(g.l == 4);
  CHECK(g.linear_guarantee);
  ComputationSize f = period_for_computation(preset_tf(), 5);
  CHECK(f.n_use == 8);
  CHECK(f.l == 12);
  CHECK_FALSE(f.linear_guarantee);
  ComputationSize f8 = period_for_computation(preset_tf(), 8);
  CHECK(f8.n_use == 8);
  CHECK(f8.linear_guarantee);
  ComputationSize p = period_for_computation(preset_tp(), 7);
  CHECK(p.n_use == 7);
  CHECK(p.l == 2);
}

TEST_CASE("measurement counts and speedup") {
  CHECK(measurements_per_gate(preset_tg(), 16) == 256);
  CHECK(measurements_per_gate(preset_te(), 16) == 32);
  CHECK(measurements_per_gate(preset_tg(), 4, 2) == 48);
  auto [num, den] = speedup_ratio(preset_te(), preset_tg(), 16);
  CHECK(num == 32);
  CHECK(den == 256);
}

TEST_CASE("distance helpers") {
  Mat id = Mat::Identity(2, 2);
  CHECK(distance_phase_opt(id, id) < 1e-12);
  CHECK(distance_phase_opt(2.0 * id, id) < 1e-12);
  Mat x = pauli_matrix(PauliString::single(1, 'X', 0));
  Mat z = pauli_matrix(PauliString::single(1, 'Z', 0));
  CHECK(distance_phase_opt(x, z) > 0.5);
  CHECK(distance_up_to_frame(x, z, {PauliString::parse("Y0 @N=1")}) < 1e-12);
  CHECK_THROWS_AS(distance_phase_opt(Mat::Zero(2, 2), id), user_error);
}
