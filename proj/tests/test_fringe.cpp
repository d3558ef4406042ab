#include <cmath>
#include <set>

#include "doctest.h"
#include "fringebrush/fringe.hpp"
#include "test_util.hpp"

using namespace fringebrush;

TEST_CASE("phase-shift fringe hits the expected samples at the origin") {
  FringeParams p;
  // Defaults: f_u = f_v = 1/50, phi0 = 3*pi/2, a = 0, b = 1.
  FloatMap i0 = phase_shift_fringe(8, 8, p, 0);
  CHECK(std::fabs(i0(0, 0)) < 1e-15);
  FloatMap i1 = phase_shift_fringe(8, 8, p, 1);
  CHECK(i1(0, 0) == doctest::Approx(1.0));
  FloatMap i2 = phase_shift_fringe(8, 8, p, 2);
  CHECK(std::fabs(i2(0, 0)) < 1e-15);
  FloatMap i3 = phase_shift_fringe(8, 8, p, 3);
  CHECK(i3(0, 0) == doctest::Approx(-1.0));
}

TEST_CASE("phase-shift fringe follows the carrier formula everywhere") {
  FringeParams p;
  p.f_u = 0.013;
  p.f_v = 0.037;
  p.phi0 = 0.4;
  p.a = 0.25;
  p.b = 0.75;
  for (int k = 0; k < 4; ++k) {
    FloatMap img = phase_shift_fringe(11, 7, p, k);
    for (int u = 0; u < 11; ++u) {
      for (int v = 0; v < 7; ++v) {
        double want = p.a + p.b * std::cos(kTwoPi * p.f_u * v +
                                           kTwoPi * p.f_v * u + p.phi0 +
                                           k * kHalfPi);
        CHECK(img(u, v) == doctest::Approx(want).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("phase-shift fringe repeats after one carrier period") {
  FringeParams p;  // 1/50 cycles per pixel -> period 50 pixels
  FloatMap img = phase_shift_fringe(4, 120, p, 0);
  for (int v = 0; v + 50 < 120; ++v) {
    CHECK(img(0, v) == doctest::Approx(img(0, v + 50)).epsilon(1e-12));
  }
}

TEST_CASE("fringe values may be negative and are not clamped") {
  FringeParams p;
  FloatMap img = phase_shift_fringe(50, 50, p, 0);
  CHECK(img.min_value() < -0.9);
  CHECK(img.max_value() > 0.9);
}

TEST_CASE("phase-shift fringe rejects out-of-range shift indices") {
  FringeParams p;
  CHECK_THROWS_AS(phase_shift_fringe(8, 8, p, 4), std::invalid_argument);
  CHECK_THROWS_AS(phase_shift_fringe(8, 8, p, -1), std::invalid_argument);
}

TEST_CASE("arrangement matrix variant 0 is the base Latin square") {
  ArrangementMatrix arr(0);
  const int want[4][4] = {
      {0, 1, 2, 3}, {1, 2, 3, 0}, {2, 3, 0, 1}, {3, 0, 1, 2}};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      CHECK(arr.entry(r, c) == want[r][c]);
    }
  }
}

TEST_CASE("every arrangement variant is a Latin square") {
  for (int s = 0; s < 4; ++s) {
    ArrangementMatrix arr(s);
    for (int r = 0; r < 4; ++r) {
      std::set<int> row, col;
      for (int c = 0; c < 4; ++c) {
        row.insert(arr.entry(r, c));
        col.insert(arr.entry(c, r));
      }
      CHECK(row.size() == 4);
      CHECK(col.size() == 4);
    }
  }
}

TEST_CASE("arrangement anti-diagonal carries a single shift index") {
  for (int s = 0; s < 4; ++s) {
    ArrangementMatrix arr(s);
    int first = arr.entry(0, 3);
    for (int r = 1; r < 4; ++r) {
      CHECK(arr.entry(r, 3 - r) == first);
    }
  }
}

TEST_CASE("variant k shifts every row of variant 0 left by k") {
  ArrangementMatrix base(0);
  for (int s = 1; s < 4; ++s) {
    ArrangementMatrix arr(s);
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        CHECK(arr.entry(r, c) == base.entry(r, (c + s) % 4));
      }
    }
  }
}

TEST_CASE("arrangement rejects out-of-range variants") {
  CHECK_THROWS_AS(ArrangementMatrix(4), std::invalid_argument);
  CHECK_THROWS_AS(ArrangementMatrix(-1), std::invalid_argument);
}

TEST_CASE("per-pixel jigsaw equals the matching plain fringe pixelwise") {
  FringeParams p;
  p.carrier = Carrier::kPerPixel;
  for (int s = 0; s < 4; ++s) {
    ArrangementMatrix arr(s);
    FloatMap jig = jigsaw_fringe(12, 16, p, arr, Mode::kCol);
    FloatMap shifted[4] = {
        phase_shift_fringe(12, 16, p, 0), phase_shift_fringe(12, 16, p, 1),
        phase_shift_fringe(12, 16, p, 2), phase_shift_fringe(12, 16, p, 3)};
    for (int u = 0; u < 12; ++u) {
      for (int v = 0; v < 16; ++v) {
        int k = arr.index_at(u, v);
        // Same shared sample routine, so equality is exact.
        CHECK(jig(u, v) == shifted[k](u, v));
      }
    }
  }
}

TEST_CASE("jigsaw interleaving differs from any single-shift fringe") {
  FringeParams p;
  p.carrier = Carrier::kPerPixel;
  ArrangementMatrix arr(0);
  FloatMap jig = jigsaw_fringe(12, 16, p, arr, Mode::kCol);
  for (int k = 0; k < 4; ++k) {
    FloatMap plain = phase_shift_fringe(12, 16, p, k);
    CHECK_FALSE(testutil::bitwise_equal(jig, plain));
  }
}

TEST_CASE("cell-constant carrier freezes the stretched coordinate per cell") {
  FringeParams p;  // default carrier: cell-constant
  ArrangementMatrix arr(2);

  FloatMap col = jigsaw_fringe(8, 16, p, arr, Mode::kCol);
  for (int u = 0; u < 8; ++u) {
    for (int v = 0; v < 16; ++v) {
      int k = arr.index_at(u, v);
      CHECK(col(u, v) == fringe_sample(p, u, v / 4, k, 0.0));
    }
  }

  FloatMap row = jigsaw_fringe(16, 8, p, arr, Mode::kRow);
  for (int u = 0; u < 16; ++u) {
    for (int v = 0; v < 8; ++v) {
      int k = arr.index_at(u, v);
      CHECK(row(u, v) == fringe_sample(p, u / 4, v, k, 0.0));
    }
  }
}

TEST_CASE("jigsaw sample values at the first cell match hand-computed ones") {
  FringeParams p;
  ArrangementMatrix arr(0);
  FloatMap jig = jigsaw_fringe(8, 8, p, arr, Mode::kCol);
  // Pixel (0,0): k=0, cell carrier 0 -> cos(3*pi/2) = 0.
  CHECK(std::fabs(jig(0, 0)) < 1e-15);
  // Pixel (0,1): k=1, same cell carrier -> cos(2*pi) = 1.
  CHECK(jig(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("jigsaw rejects frames smaller than one cell") {
  FringeParams p;
  ArrangementMatrix arr(0);
  CHECK_THROWS_AS(jigsaw_fringe(3, 8, p, arr, Mode::kCol),
                  std::invalid_argument);
  CHECK_THROWS_AS(jigsaw_fringe(8, 3, p, arr, Mode::kCol),
                  std::invalid_argument);
}
