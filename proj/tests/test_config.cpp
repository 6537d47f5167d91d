#include <doctest.h>

#include <cmath>

#include "risid/config.hpp"
#include "risid/errors.hpp"

namespace cfg = risid::config;

TEST_CASE("parses scalars, arrays, tables and arrays of tables") {
  const auto doc = cfg::parse(R"(
title = "x"   # trailing comment
n = -3
f = 1.5e2
flag = true
list = [1, 2.5,
        3]
[a]
s = "lit"
[[b]]
v = 1
[[b]]
v = 2
)");
  const auto& root = doc.root();
  CHECK(root.find("title")->text == "x");
  CHECK(root.find("n")->integer == -3);
  CHECK(root.find("f")->number == 150.0);
  CHECK(root.find("flag")->boolean);
  REQUIRE(root.find("list")->items.size() == 3);
  CHECK(cfg::as_double(root.find("list")->items[1], "list") == 2.5);
  CHECK(doc.table("a")->find("s")->text == "lit");
  CHECK(doc.array("b").size() == 2);
  CHECK(doc.table("missing") == nullptr);
}

TEST_CASE("special floats") {
  const auto doc = cfg::parse("a = inf\nb = -inf\nc = +inf\n");
  CHECK(std::isinf(cfg::as_double(*doc.root().find("a"), "a")));
  CHECK(cfg::as_double(*doc.root().find("b"), "b") < 0);
  CHECK(std::isinf(cfg::as_double(*doc.root().find("c"), "c")));
}

TEST_CASE("syntax errors are parse errors") {
  CHECK_THROWS_AS(cfg::parse("a = \n"), risid::ParseError);
  CHECK_THROWS_AS(cfg::parse("a = \"unterminated\n"), risid::ParseError);
  CHECK_THROWS_AS(cfg::parse("[a\n"), risid::ParseError);
  CHECK_THROWS_AS(cfg::parse("a = 1\na = 2\n"), risid::ParseError);
  CHECK_THROWS_AS(cfg::parse("[t]\n[t]\n"), risid::ParseError);
  CHECK_THROWS_AS(cfg::parse("a = [1, 2\n"), risid::ParseError);
  CHECK_THROWS_AS(cfg::parse("= 3\n"), risid::ParseError);
}

TEST_CASE("reader enforces types and reports unknown keys") {
  const auto doc = cfg::parse("[t]\nx = 1\ny = \"s\"\nz = 2.5\n");
  cfg::TableReader r(*doc.table("t"));
  CHECK(r.get_double("x") == 1.0);
  CHECK_THROWS_AS(r.get_double("y"), risid::ValidationError);
  CHECK_THROWS_AS(r.get_int("z"), risid::ValidationError);
  CHECK(r.get_int("missing", 7) == 7);
  try {
    cfg::TableReader r2(*doc.table("t"));
    r2.get_double("x");
    r2.finish();
    FAIL("expected an unknown-key error");
  } catch (const risid::ValidationError& e) {
    CHECK(std::string(e.what()).find("[t].y") != std::string::npos);
  }
}

TEST_CASE("format_double round-trips and always reads back as a float") {
  for (double v : {0.0, 1.0, -2.0, 0.1, 1e-300, 123456789.0, 1.0 / 3.0}) {
    const std::string s = cfg::format_double(v);
    const auto doc = cfg::parse("v = " + s + "\n");
    CHECK(doc.root().find("v")->kind == cfg::Value::Kind::Float);
    CHECK(cfg::as_double(*doc.root().find("v"), "v") == v);
  }
  CHECK(cfg::format_double(std::numeric_limits<double>::infinity()) == "inf");
}
