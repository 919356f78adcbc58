#include "doctest.h"
#include "scenav/geometry.hpp"
#include "scenav/random.hpp"

using namespace scenav;

TEST_SUITE("world") {
  TEST_CASE("wrap_angle lands in (-pi, pi]") {
    CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(3.0 * kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(0.0) == 0.0);
    Rng rng(11);
    for (int i = 0; i < 2000; ++i) {
      const double a = rng.uniform(-50.0, 50.0);
      const double w = wrap_angle(a);
      CHECK(w > -kPi);
      CHECK(w <= kPi);
      // same direction
      CHECK(std::cos(w) == doctest::Approx(std::cos(a)).epsilon(1e-9));
      CHECK(std::sin(w) == doctest::Approx(std::sin(a)).epsilon(1e-9));
    }
  }

  TEST_CASE("point_segment_distance basics") {
    const Segment seg{{0.0, 0.0}, {2.0, 0.0}};
    CHECK(point_segment_distance({1.0, 1.0}, seg) == doctest::Approx(1.0));
    CHECK(point_segment_distance({-1.0, 0.0}, seg) == doctest::Approx(1.0));
    CHECK(point_segment_distance({3.0, 4.0}, seg) == doctest::Approx(std::hypot(1.0, 4.0)));
    CHECK(point_segment_distance({0.5, 0.0}, seg) == 0.0);
  }

  TEST_CASE("rect containment and intersection") {
    const Rect r{-1.0, -2.0, 3.0, 4.0};
    CHECK(r.contains({0.0, 0.0}));
    CHECK(r.contains({-1.0, 4.0}));
    CHECK(!r.contains_strict({-1.0, 0.0}));
    CHECK(r.contains_rect({0.0, 0.0, 1.0, 1.0}));
    CHECK(!r.contains_rect({0.0, 0.0, 5.0, 1.0}));
    CHECK(r.intersects({2.0, 3.0, 9.0, 9.0}));
    CHECK(!r.intersects({4.0, 5.0, 9.0, 9.0}));
  }
}
