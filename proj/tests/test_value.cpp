#include <limits>

#include "doctest.h"
#include "xc/value.hpp"

using namespace xc;

TEST_CASE("lift wraps a local with no overrides") {
  CHECK(NValue::lift(Local::integer(5)) == NValue(Local::integer(5)));
  CHECK(NValue::lift(Local::boolean(true)).overrides().empty());
  NValue w = NValue::lift(Local::pair(Local::integer(1), Local::integer(2)));
  CHECK(w.defaulted() == Local::pair(Local::integer(1), Local::integer(2)));
  CHECK_FALSE(w.has_overrides());
}

TEST_CASE("nvalue lookup: override if present else default") {
  NValue w(Local::integer(0), {{4, Local::integer(1)}, {3, Local::integer(2)}, {2, Local::integer(3)}});
  CHECK(w.get(3) == Local::integer(2));
  CHECK(w.get(9) == Local::integer(0));
  NValue plain = NValue::lift(Local::integer(7));
  CHECK(plain.get(123) == Local::integer(7));
}

TEST_CASE("overrides are kept sorted and deduplicated, later wins") {
  NValue w(Local::integer(0), {{5, Local::integer(1)}, {1, Local::integer(2)}, {5, Local::integer(3)}});
  REQUIRE(w.overrides().size() == 2);
  CHECK(w.overrides()[0].first == 1);
  CHECK(w.overrides()[1].first == 5);
  CHECK(w.get(5) == Local::integer(3));
}

TEST_CASE("redundant overrides are preserved, lookup_equal ignores them") {
  NValue a(Local::integer(2), {{3, Local::integer(2)}});
  NValue b = NValue::lift(Local::integer(2));
  CHECK(a != b);
  CHECK(NValue::lookup_equal(a, b));
  CHECK_FALSE(NValue::lookup_equal(a, b.with_override(3, Local::integer(9))));
}

TEST_CASE("with_default keeps the overrides") {
  NValue w(Local::boolean(false), {{2, Local::boolean(false)}});
  NValue flipped = w.with_default(Local::boolean(true));
  CHECK(flipped.get(2) == Local::boolean(false));
  CHECK(flipped.get(7) == Local::boolean(true));
}

TEST_CASE("local total order is strict across kinds and payloads") {
  Local xs[] = {Local::unit(),        Local::boolean(false), Local::integer(-1),
                Local::integer(4),    Local::real(0.5),      Local::text("a"),
                Local::device(3),     Local::pair(Local::integer(1), Local::integer(2)),
                Local::set({Local::integer(1)}), Local::map({{Local::integer(1), Local::integer(2)}})};
  for (size_t i = 0; i < std::size(xs); ++i)
    for (size_t j = 0; j < std::size(xs); ++j) {
      if (i == j) CHECK(Local::compare(xs[i], xs[j]) == 0);
      if (i < j) CHECK(Local::compare(xs[i], xs[j]) < 0);
    }
  CHECK(Local::real(std::numeric_limits<double>::quiet_NaN()) ==
        Local::real(std::numeric_limits<double>::quiet_NaN()));
}

TEST_CASE("set and map constructors sort and deduplicate") {
  Local s = Local::set({Local::integer(3), Local::integer(1), Local::integer(3)});
  REQUIRE(s.as_set().size() == 2);
  CHECK(s.as_set()[0] == Local::integer(1));
  Local m = Local::map({{Local::integer(2), Local::text("b")}, {Local::integer(1), Local::text("a")}});
  CHECK(m.as_map()[0].first == Local::integer(1));
}

TEST_CASE("show renders compact deterministic forms") {
  CHECK(Local::integer(5).show() == "5");
  CHECK(Local::real(1.5).show() == "1.5");
  CHECK(Local::device(3).show() == "#3");
  CHECK(Local::pair(Local::integer(1), Local::integer(2)).show() == "(1,2)");
  NValue w(Local::integer(0), {{2, Local::integer(7)}});
  CHECK(w.show() == "0[2:7]");
}
