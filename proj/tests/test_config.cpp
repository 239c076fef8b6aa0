#include <cmath>

#include "doctest.h"
#include "nsbox/config.hpp"
#include "nsbox/errors.hpp"

using nsbox::Config;

TEST_CASE("config parses keys, comments, and lists") {
  Config cfg = Config::parse(
      "# header comment\n"
      "grid.n = 64\n"
      "grid.length = 16.0   # trailing comment\n"
      "solver.dt=0.01\n"
      "experiment.delta = 0.4, 0.5, 0.6\n"
      "\n"
      "norm.r = inf\n");
  CHECK(cfg.get_int("grid.n") == 64);
  CHECK(cfg.get_double("grid.length") == doctest::Approx(16.0));
  CHECK(cfg.get_double("solver.dt") == doctest::Approx(0.01));
  CHECK(std::isinf(cfg.get_double("norm.r")));
  const auto deltas = cfg.get_double_list("experiment.delta");
  REQUIRE(deltas.size() == 3);
  CHECK(deltas[1] == doctest::Approx(0.5));
  CHECK(cfg.unconsumed().empty());
}

TEST_CASE("config rejects malformed input") {
  CHECK_THROWS_AS(Config::parse("just words\n"), nsbox::InvalidParameter);
  CHECK_THROWS_AS(Config::parse("bad key! = 1\n"), nsbox::InvalidParameter);
  CHECK_THROWS_AS(Config::parse("a = 1\na = 2\n"), nsbox::InvalidParameter);
  Config cfg = Config::parse("grid.n = sixty\n");
  CHECK_THROWS_AS(cfg.get_int("grid.n"), nsbox::InvalidParameter);
  Config cfg2 = Config::parse("solver.dt = 0.01.2\n");
  CHECK_THROWS_AS(cfg2.get_double("solver.dt"), nsbox::InvalidParameter);
  Config cfg3 = Config::parse("");
  CHECK_THROWS_AS(cfg3.get_string("missing.key"), nsbox::InvalidParameter);
}

TEST_CASE("config tracks consumption and overrides") {
  Config cfg = Config::parse("a.x = 1\na.y = 2\n");
  cfg.set("a.x", "3");
  CHECK(cfg.get_int("a.x") == 3);
  CHECK_THROWS_AS(cfg.require_all_consumed(), nsbox::InvalidParameter);
  CHECK(cfg.unconsumed() == std::vector<std::string>{"a.y"});
  CHECK(cfg.get_int("a.y") == 2);
  cfg.require_all_consumed();
  CHECK(cfg.get_bool_or("a.flag", true));
  CHECK(cfg.get_uint64_or("a.seed", 17) == 17);
}
