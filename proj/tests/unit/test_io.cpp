#include <doctest.h>

#include <cstdlib>
#include <filesystem>

#include "fixtures.hpp"
#include "posthoc/error.hpp"
#include "posthoc/io.hpp"

using namespace posthoc;
using namespace posthoc::testing;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected posthoc::Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("family JSON round trip") {
  const auto family = with_zetas(25, nine_region_forest(), {5, 0, 1, 3, 0, 2, 2, 1, 0});
  const auto text = family_to_json(family);
  const auto back = parse_family(text);
  REQUIRE(back.size() == family.size());
  CHECK(back.m() == 25);
  for (std::size_t k = 0; k < family.size(); ++k) {
    CHECK(back.region(k) == family.region(k));
    CHECK(back.zeta(k) == family.zeta(k));
  }
  CHECK(family_to_json(back) == text);

  const auto open = parse_family(R"({"m": 3, "members": [{"indices": [3, 1], "zeta": null}, {"indices": [2]}]})");
  CHECK_FALSE(open[0].zeta.has_value());
  CHECK_FALSE(open[1].zeta.has_value());
  CHECK(open.region(0) == Region({1, 3}));
  CHECK(family_to_json(open).find("\"zeta\": null") != std::string::npos);
}

TEST_CASE("malformed family files") {
  for (const char* text : {
           "", "{", "[]", R"({"members": []})", R"({"m": "4", "members": []})", R"({"m": 0, "members": []})",
           R"({"m": 4})", R"({"m": 4, "members": {}})", R"({"m": 4, "members": [1]})",
           R"({"m": 4, "members": [{"indices": [5]}]})", R"({"m": 4, "members": [{"indices": [0]}]})",
           R"({"m": 4, "members": [{"indices": []}]})", R"({"m": 4, "members": [{"indices": [1, 1]}]})",
           R"({"m": 4, "members": [{"indices": [1.5]}]})", R"({"m": 4, "members": [{"indices": [1], "zeta": -1}]})",
           R"({"m": 4, "members": [{"indices": [1], "zeta": 0.5}]})",
           R"({"m": 4, "members": [{"indices": [1]}, {"indices": [1]}]})",
           R"({"m": 99999999999, "members": []})", R"({"m": 4, "members": [{"indices": [99999999999]}]})"}) {
    CAPTURE(text);
    CHECK(code_of([&] { (void)parse_family(text); }) == ErrorCode::Parse);
  }
}

TEST_CASE("p-value, index and mask files") {
  const auto p = parse_pvalues("0.5\n\n1e-3\r\n  1 \n0\n");
  REQUIRE(p.size() == 4);
  CHECK(p[2] == 1e-3);
  CHECK(p[3] == 1.0);
  CHECK(code_of([] { (void)parse_pvalues("0.5\nabc\n"); }) == ErrorCode::Parse);
  CHECK(code_of([] { (void)parse_pvalues("1.5\n"); }) == ErrorCode::Parse);
  CHECK(code_of([] { (void)parse_pvalues("nan\n"); }) == ErrorCode::Parse);
  CHECK(code_of([] { (void)parse_pvalues("\n\n"); }) == ErrorCode::Parse);

  CHECK(parse_indices("3\n1\n") == std::vector<Index>{3, 1});
  CHECK(code_of([] { (void)parse_indices("0\n"); }) == ErrorCode::Parse);
  CHECK(code_of([] { (void)parse_indices("2.0\n"); }) == ErrorCode::Parse);

  const auto mask = parse_null_mask("1\n0\n1\n");
  CHECK(mask.size() == 3);
  CHECK_FALSE(mask.is_null(2));
  CHECK(code_of([] { (void)parse_null_mask("2\n"); }) == ErrorCode::Parse);
}

TEST_CASE("file access") {
  CHECK(code_of([] { (void)read_file("/nonexistent/posthoc/file"); }) == ErrorCode::Io);
  const auto path = std::filesystem::temp_directory_path() / "posthoc_io_test.txt";
  write_file(path, "abc\n");
  CHECK(read_file(path) == "abc\n");
  std::filesystem::remove(path);
  CHECK(code_of([] { write_file("/nonexistent/posthoc/file", "x"); }) == ErrorCode::Io);
}

TEST_CASE("doubles print with 17 significant digits") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(0.1) == "0.10000000000000001");
  for (double x : {0.1, 1.0 / 3.0, 123456.789, 1e-300, 0.49210265880625653}) {
    CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
  }
}
