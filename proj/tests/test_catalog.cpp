#include <doctest.h>

#include <filesystem>

#include "edlkit/catalog.hpp"
#include "edlkit/witness_io.hpp"

using namespace edl;

TEST_CASE("catalog holds sixteen witnesses") {
  CHECK(paper_witness_entries().size() == 16);
  CHECK(paper_witness_label(NamedState::D4, 5) == "D4_W5");
  CHECK_THROWS_AS(paper_witness_entry(NamedState::W3, 3), std::invalid_argument);
}

TEST_CASE("expression parser") {
  const ObservableExpr e = parse_witness_expression("-0.5(X1X2+Y1Y2)+0.25Z3", 3);
  CHECK(e.identity_coefficient() == doctest::Approx(1.0 / 8));
  CHECK(e.coefficient(PauliString::parse("XXI")) == doctest::Approx(-0.5 / 8));
  CHECK(e.coefficient(PauliString::parse("YYI")) == doctest::Approx(-0.5 / 8));
  CHECK(e.coefficient(PauliString::parse("IIZ")) == doctest::Approx(0.25 / 8));
  CHECK_THROWS_AS(parse_witness_expression("0.5(X1X2", 3), std::invalid_argument);
  CHECK_THROWS_AS(parse_witness_expression("0.5X4", 3), std::invalid_argument);
}

TEST_CASE("every catalog witness is normalized and supported on its family") {
  for (const auto& entry : paper_witness_entries()) {
    CAPTURE(paper_witness_label(entry.state, entry.id));
    const Witness w = load_paper_witness(entry.state, entry.id);
    CHECK(w.expr.trace() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(w.family.covers(support(w.expr)));
    const double value = evaluate(w.expr, make_state(entry.state));
    CHECK(std::abs(value - entry.alpha) <= 5e-4);
    REQUIRE(w.p_noise.has_value());
    CHECK(std::abs(*w.p_noise - entry.p_noise) <= 2e-3);
  }
}

TEST_CASE("C4 families follow the witness supports") {
  CHECK(load_paper_witness(NamedState::C4, 1).family.str() == "124,134");
  CHECK(load_paper_witness(NamedState::C4, 3).family.str() == "124,134,234");
  CHECK(load_paper_witness(NamedState::C4, 4).family.str() == "123,124,134,234");
}

TEST_CASE("bundled catalog JSON files equal the built-in catalog") {
  const std::filesystem::path dir = std::filesystem::path(EDLKIT_DATA_DIR) / "catalog";
  for (const auto& entry : paper_witness_entries()) {
    std::string name = paper_witness_label(entry.state, entry.id) + ".json";
    for (char& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    CAPTURE(name);
    const Witness file = read_witness_file(dir / name);
    const Witness built = load_paper_witness(entry.state, entry.id);
    CHECK(max_coefficient_difference(file.expr, built.expr) == 0.0);
    CHECK(file.family == built.family);
    CHECK(file.label == built.label);
  }
}
