#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "edlkit/catalog.hpp"
#include "edlkit/measure_io.hpp"
#include "edlkit/witness_io.hpp"

using namespace edl;

TEST_CASE("CSV splitting honours quotes") {
  CHECK(split_csv_line("a,b,c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(split_csv_line("\"[(Z+X)/r2]_1,2\",0.5,0.1") == std::vector<std::string>{"[(Z+X)/r2]_1,2", "0.5", "0.1"});
  CHECK(split_csv_line("\"a\"\"b\",") == std::vector<std::string>{"a\"b", ""});
  CHECK_THROWS(split_csv_line("\"open,1"));
  CHECK(csv_field("x,y") == "\"x,y\"");
  CHECK(csv_field("xy") == "xy");
}

TEST_CASE("expectation tables round-trip") {
  const std::vector<ExpectationRecord> in = {{parse_operator("[(Z-Y)/r2]_1,3", 3), -0.25, 0.01},
                                             {parse_operator("X1X2", 3), 0.125, 0.02}};
  std::stringstream buf;
  write_expectations_csv(buf, in);
  const auto out = read_expectations_csv(buf, 3);
  REQUIRE(out.size() == 2);
  CHECK(out[0].op.approx_equal(in[0].op));
  CHECK(out[0].value == -0.25);
  CHECK(out[1].sigma == 0.02);
}

TEST_CASE("expectation table errors name the line") {
  std::stringstream bad("operator,value,sigma\nX1,0.5,0.1\nX9,0.1,0.1\n");
  try {
    read_expectations_csv(bad, 3);
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  std::stringstream header("op,v,s\n");
  CHECK_THROWS_AS(read_expectations_csv(header, 3), std::invalid_argument);
  std::stringstream unquoted("operator,value,sigma\n[(Z+X)/r2]_1,2,0.5,0.1\n");
  CHECK_THROWS_AS(read_expectations_csv(unquoted, 3), std::invalid_argument);
}

TEST_CASE("bundled fixtures parse") {
  const std::filesystem::path dir = std::filesystem::path(EDLKIT_DATA_DIR) / "fixtures";
  const std::pair<const char*, int> tables[] = {{"d4a", 4}, {"d4b", 4}, {"d4c", 4}, {"d4d", 4},
                                                {"w3a", 3}, {"w3b", 3}, {"w3c", 3}, {"w4a", 4},
                                                {"w4b", 4}, {"w4c", 4}, {"c4a", 4}, {"c4b", 4}};
  for (const auto& [name, n] : tables) {
    CAPTURE(name);
    const auto records = read_expectations_csv(dir / (std::string(name) + ".csv"), n);
    CHECK(records.size() >= 16);
    for (const auto& r : records) CHECK(std::abs(r.value) <= 1 + 3 * r.sigma);
  }
}

TEST_CASE("count tables and manifests round-trip") {
  const DensityMatrix rho = DensityMatrix::from_pure(make_state(NamedState::W3));
  const MeasurementSetting a = MeasurementSetting::from_operator(parse_operator("ZZZ", 3));
  const MeasurementSetting b = MeasurementSetting::from_operator(parse_operator("[(Z-X)/r2]x3", 3));
  const std::vector<CountTable> tables = {sample_counts(rho, a, 500, 1), sample_counts(rho, b, 700, 2)};
  const auto dir = std::filesystem::temp_directory_path() / "edlkit_io_test";
  std::filesystem::remove_all(dir);
  write_count_directory(dir, tables, 77, {1, 2});
  const auto back = read_count_directory(dir);
  REQUIRE(back.size() == 2);
  CHECK(back[0].counts == tables[0].counts);
  CHECK(back[1].shots == 700);
  CHECK(back[1].setting.str() == b.str());

  std::ifstream in(dir / "manifest.json");
  const nlohmann::json j = nlohmann::json::parse(in);
  CHECK(j.at("seed") == 77);
  CHECK(j.at("generator") == "mt19937_64");
  std::filesystem::remove_all(dir);

  std::stringstream bad("outcome,count\n+-,3\n");
  CHECK_THROWS_AS(read_counts_csv(bad, a), std::invalid_argument);
}

TEST_CASE("witness JSON round-trip") {
  Witness w = load_paper_witness(NamedState::C4, 2);
  const Witness back = witness_from_json(witness_to_json(w));
  CHECK(max_coefficient_difference(back.expr, w.expr) == 0.0);
  CHECK(back.family == w.family);
  CHECK(back.alpha == w.alpha);
  CHECK(back.target_state == w.target_state);
  CHECK_THROWS_AS(witness_from_json(nlohmann::json::object()), std::invalid_argument);
  nlohmann::json bad = witness_to_json(w);
  bad["terms"][0]["pauli"] = "XQ";
  CHECK_THROWS_AS(witness_from_json(bad), std::invalid_argument);
}
