#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "lcvsim/util/angles.hpp"
#include "lcvsim/util/kv_file.hpp"
#include "lcvsim/util/rng.hpp"
#include "lcvsim/util/text.hpp"

using namespace lcvsim;

TEST_CASE("wrap_angle maps into (-pi, pi]") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(std::numbers::pi) == Catch::Approx(std::numbers::pi));
  CHECK(wrap_angle(-std::numbers::pi) == Catch::Approx(std::numbers::pi));
  CHECK(wrap_angle(3.0 * std::numbers::pi) == Catch::Approx(std::numbers::pi));
  CHECK(wrap_angle(2.0 * std::numbers::pi + 0.25) == Catch::Approx(0.25));
  for (int i = -20; i <= 20; ++i) {
    const double a = 0.37 * i;
    const double w = wrap_angle(a);
    CHECK(w > -std::numbers::pi);
    CHECK(w <= std::numbers::pi);
    CHECK(std::abs(std::remainder(w - a, 2.0 * std::numbers::pi)) < 1e-12);
  }
}

TEST_CASE("rng determinism and uniform range") {
  Rng a(42), b(42), c(43);
  bool all_equal = true;
  bool any_differs = false;
  for (int i = 0; i < 1000; ++i) {
    const double ua = a.uniform();
    const double ub = b.uniform();
    const double uc = c.uniform();
    all_equal = all_equal && (ua == ub);
    any_differs = any_differs || (ua != uc);
    CHECK(ua >= 0.0);
    CHECK(ua < 1.0);
  }
  CHECK(all_equal);
  CHECK(any_differs);
}

TEST_CASE("rng normal moments") {
  Rng rng(7);
  const int n = 200000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(var == Catch::Approx(1.0).margin(0.02));
}

TEST_CASE("derive_seed separates streams") {
  const auto s1 = derive_seed(1, "gps");
  const auto s2 = derive_seed(1, "radar");
  const auto s3 = derive_seed(2, "gps");
  CHECK(s1 != s2);
  CHECK(s1 != s3);
  CHECK(derive_seed(1, "gps") == s1);
}

TEST_CASE("kv file parses values and tracks unknown keys") {
  std::istringstream in(
      "# comment\n"
      "m = 2000\n"
      "label = front  # trailing comment\n"
      "list = 1.0 2.0, 3.0\n");
  auto kv = load_kv_file(in, "test");
  CHECK(kv.require_double("m") == 2000.0);
  CHECK(kv.require_string("label") == "front");
  const auto list = kv.get_list("list");
  REQUIRE(list.size() == 3);
  CHECK(list[2] == 3.0);
  CHECK(kv.unconsumed().empty());
}

TEST_CASE("kv file reports missing and malformed entries") {
  std::istringstream bad("novalue\n");
  CHECK_THROWS_AS(load_kv_file(bad, "bad"), ParseError);

  std::istringstream dup("a = 1\na = 2\n");
  CHECK_THROWS_AS(load_kv_file(dup, "dup"), ParseError);

  std::istringstream ok("a = 1\n");
  auto kv = load_kv_file(ok, "ok");
  CHECK_THROWS_AS(kv.require_double("b"), ConfigError);
  CHECK(kv.get_double("b", 5.0) == 5.0);
  CHECK(kv.require_double("a") == 1.0);
}

TEST_CASE("ini file sections and strictness") {
  std::istringstream in(
      "[one]\n"
      "x = 1\n"
      "[two]\n"
      "y = 2\n");
  auto ini = IniFile::load(in, "test.ini");
  CHECK(ini.section("one").require_double("x") == 1.0);
  // [two].y never consumed -> strict check trips.
  CHECK_THROWS_AS(ini.ensure_fully_consumed(), ConfigError);
  CHECK(ini.section("two").require_double("y") == 2.0);
  CHECK_NOTHROW(ini.ensure_fully_consumed());
}

TEST_CASE("format_double round trips") {
  for (const double v : {0.0, 1.0, -1.5, 0.1, 214.375, 1e-9, 3.141592653589793}) {
    CHECK(parse_double(format_double(v)) == v);
  }
}
