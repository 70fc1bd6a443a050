#include <catch2/catch_amalgamated.hpp>

#include "cqca/symmetry.hpp"

using namespace cqca;

TEST_CASE("cycle length equals the automaton period") {
  Cqca presets[] = {preset_tg(), preset_tf(), preset_tp(), preset_te()};
  for (const Cqca& t : presets)
    for (int n : {4, 6}) {
      SymmetryPattern p =
          build_cycle(t, PauliString::single(n, 'Z', 0), CellKind::OneQubit);
      CHECK(p.l() == int(period(t, n)));
      CHECK(p.states().front() == PauliString::single(n, 'Z', 0));
    }
}

TEST_CASE("cycle representations are faithful") {
  for (int n : {2, 4, 6}) {
    CHECK(faithfulness_check(preset_tg(), n, CellKind::OneQubit));
    CHECK(faithfulness_check(preset_tf(), n, CellKind::OneQubit));
    CHECK(faithfulness_check(preset_tp(), n, CellKind::OneQubit));
    // Two-qubit cells are faithful even for the non-simple preset.
    CHECK(faithfulness_check(preset_te(), n, CellKind::TwoQubit));
  }
  // One-qubit cells with Te collapse: t(Z) = Z keeps all X-masks empty.
  CHECK_FALSE(faithfulness_check(preset_te(), 4, CellKind::OneQubit));
}

TEST_CASE("line symmetries of the glider preset") {
  Cqca tg = preset_tg();
  for (int n : {4, 6, 8}) {
    auto gliders = find_gliders(tg, n);
    SymmetryPattern line = line_symmetry(tg, gliders.front().op);
    CHECK(line.l() == int(period(tg, n)));
    // A glider line touches at most a bounded strip of sites per row.
    for (int m = 0; m < line.l(); ++m) {
      int count = 0;
      for (int i = 0; i < n; ++i) count += line.site_code(m, i) & 1;
      CHECK(count <= 2);
    }
    CHECK(line_group_rank(tg, n) == std::size_t(2 * (n - 1)));
  }
  CHECK_THROWS_AS(line_symmetry(tg, PauliString::single(6, 'Z', 0)),
                  user_error);
}

TEST_CASE("ascii raster golden") {
  SymmetryPattern p = build_cycle(preset_tg(), PauliString::single(6, 'Z', 0),
                                  CellKind::OneQubit);
  CHECK(render(p, RenderFormat::Ascii) ==
        "......\n"
        "X.....\n"
        ".X...X\n"
        "X.X.X.\n"
        ".X...X\n"
        "X.....\n");
}

TEST_CASE("pbm raster golden") {
  SymmetryPattern p = build_cycle(preset_tf(), PauliString::single(8, 'Z', 0),
                                  CellKind::OneQubit);
  std::string pbm = render(p, RenderFormat::Pbm);
  CHECK(pbm ==
        "P1\n8 12\n"
        "0 0 0 0 0 0 0 0\n"
        "1 0 0 0 0 0 0 0\n"
        "1 1 0 0 0 0 0 1\n"
        "0 0 1 0 0 0 1 0\n"
        "1 0 1 1 0 1 1 0\n"
        "1 0 1 0 0 0 1 0\n"
        "0 0 0 0 0 0 0 0\n"
        "1 0 1 0 0 0 1 0\n"
        "1 0 1 1 0 1 1 0\n"
        "0 0 1 0 0 0 1 0\n"
        "1 1 0 0 0 0 0 1\n"
        "1 0 0 0 0 0 0 0\n");
}

TEST_CASE("rendering is deterministic") {
  for (RenderFormat f :
       {RenderFormat::Ascii, RenderFormat::Pbm, RenderFormat::Json}) {
    SymmetryPattern a = build_cycle(
        preset_tf(), PauliString::single(16, 'Z', 3), CellKind::OneQubit);
    SymmetryPattern b = build_cycle(
        preset_tf(), PauliString::single(16, 'Z', 3), CellKind::OneQubit);
    CHECK(render(a, f) == render(b, f));
  }
}

TEST_CASE("two-qubit cells render both sublattices") {
  SymmetryPattern p = build_cycle(preset_te(), PauliString::single(3, 'X', 0),
                                  CellKind::TwoQubit);
  REQUIRE(p.l() == 2);
  std::string ascii = render(p, RenderFormat::Ascii);
  // Seed X_0: a-qubit at site 0 in row 0; the image X_0 Z_{+-1} mixes
  // sublattices in row 1.
  CHECK(ascii.substr(0, 4) == "A..\n");
  std::string pbm = render(p, RenderFormat::Pbm);
  CHECK(pbm.substr(0, 7) == "P1\n6 2\n");
}

TEST_CASE("format names") {
  CHECK(render_format_from_name("ascii") == RenderFormat::Ascii);
  CHECK(render_format_from_name("pbm") == RenderFormat::Pbm);
  CHECK(render_format_from_name("json") == RenderFormat::Json);
  CHECK_THROWS_AS(render_format_from_name("png"), user_error);
  CHECK(cell_name(CellKind::OneQubit) == "one_qubit");
  CHECK(cell_name(CellKind::TwoQubit) == "two_qubit");
}
