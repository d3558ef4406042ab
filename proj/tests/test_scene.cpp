#include <cmath>
#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "fringebrush/io.hpp"
#include "fringebrush/scene.hpp"
#include "test_util.hpp"

using namespace fringebrush;

TEST_CASE("ramp phase is linear along rows") {
  Scene s = synthesize_scene("ramp", 8, 8, 0);
  for (int u = 0; u < 8; ++u) {
    const double want = 0.9 * kTwoPi * u / 7.0;
    for (int v = 0; v < 8; ++v) {
      CHECK(s.phase(u, v) == doctest::Approx(want).epsilon(1e-15));
    }
  }
  // Uniform slope means maximal normalized gradient everywhere.
  for (double r : s.reflectivity[0].values()) {
    CHECK(r == doctest::Approx(0.25).epsilon(1e-12));
  }
}

TEST_CASE("gaussian bump peaks at the center with flat far field") {
  Scene s = synthesize_scene("gaussian-bump", 33, 65, 0);
  CHECK(s.phase(16, 32) == 0.9 * kTwoPi);
  CHECK(s.phase(0, 0) < 1e-6);
  double rmin = 1e9, rmax = -1e9;
  for (double r : s.reflectivity[0].values()) {
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  CHECK(rmin == doctest::Approx(0.25).epsilon(1e-12));  // at the steepest spot
  CHECK(rmax <= 0.75 + 1e-12);
  CHECK(rmax > 0.74);  // far corners are essentially flat
  CHECK(s.channels() == 1);
}

TEST_CASE("steps phase uses four quarter-turn bands") {
  Scene s = synthesize_scene("steps", 8, 8, 3);
  CHECK(s.phase(0, 5) == 0.0);
  CHECK(s.phase(1, 5) == 0.0);
  CHECK(s.phase(2, 5) == kHalfPi);
  CHECK(s.phase(4, 5) == 2.0 * kHalfPi);
  CHECK(s.phase(7, 5) == 3.0 * kHalfPi);
}

TEST_CASE("checkerboard tiles reflectivity and borrows the bump phase") {
  Scene s = synthesize_scene("checkerboard", 32, 32, 0);
  CHECK(s.reflectivity[0](0, 0) == 0.2);
  CHECK(s.reflectivity[0](0, 8) == 0.8);
  CHECK(s.reflectivity[0](8, 0) == 0.8);
  CHECK(s.reflectivity[0](8, 8) == 0.2);
  CHECK(s.reflectivity[0](7, 7) == 0.2);
  Scene bump = synthesize_scene("gaussian-bump", 32, 32, 0);
  CHECK(testutil::bitwise_equal(s.phase, bump.phase));
}

TEST_CASE("generators are deterministic and validated") {
  Scene a = synthesize_scene("gaussian-bump", 16, 24, 1);
  Scene b = synthesize_scene("gaussian-bump", 16, 24, 99);  // seed is inert
  CHECK(testutil::bitwise_equal(a.phase, b.phase));
  CHECK(testutil::bitwise_equal(a.reflectivity[0], b.reflectivity[0]));
  CHECK_THROWS_AS(synthesize_scene("perlin", 16, 16, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(synthesize_scene("ramp", 7, 16, 0), std::invalid_argument);
  CHECK_THROWS_AS(synthesize_scene("ramp", 16, 7, 0), std::invalid_argument);
}

TEST_CASE("stretching replicates pixels fourfold along the scanned axis") {
  Scene s = synthesize_scene("gaussian-bump", 9, 13, 0);
  Scene col = stretch_scene(s, Mode::kCol);
  CHECK(col.height() == 9);
  CHECK(col.width() == 52);
  for (int u = 0; u < 9; ++u) {
    for (int v = 0; v < 52; ++v) {
      CHECK(col.phase(u, v) == s.phase(u, v / 4));
      CHECK(col.reflectivity[0](u, v) == s.reflectivity[0](u, v / 4));
    }
  }
  Scene row = stretch_scene(s, Mode::kRow);
  CHECK(row.height() == 36);
  CHECK(row.width() == 13);
  for (int u = 0; u < 36; ++u) {
    for (int v = 0; v < 13; ++v) {
      CHECK(row.phase(u, v) == s.phase(u / 4, v));
    }
  }
}

TEST_CASE("modulating a unit scene reproduces the bare fringe") {
  const int h = 16, w = 64;
  Scene unit;
  unit.reflectivity.push_back(FloatMap(h, w));
  unit.phase = FloatMap(h, w);
  for (double& r : unit.reflectivity[0].values()) r = 1.0;

  for (int variant : {0, 2}) {
    ArrangementMatrix arr(variant);
    for (Mode mode : {Mode::kCol, Mode::kRow}) {
      for (Carrier carrier : {Carrier::kCellConstant, Carrier::kPerPixel}) {
        FringeParams p;
        p.carrier = carrier;
        p.a = 0.4;  // nonzero offset must survive the identity too
        FloatMap modulated =
            modulate_channel(unit.reflectivity[0], unit.phase, p, arr, mode);
        FloatMap bare = jigsaw_fringe(h, w, p, arr, mode);
        CHECK(testutil::bitwise_equal(modulated, bare));
      }
    }
  }
}

TEST_CASE("uniform reflectivity scales the fringe exactly") {
  const int h = 12, w = 20;
  Scene s;
  s.reflectivity.push_back(FloatMap(h, w));
  s.phase = FloatMap(h, w);
  for (double& r : s.reflectivity[0].values()) r = 0.7;
  ArrangementMatrix arr(1);
  FringeParams p;  // a = 0
  FloatMap modulated =
      modulate_channel(s.reflectivity[0], s.phase, p, arr, Mode::kCol);
  FloatMap bare = jigsaw_fringe(h, w, p, arr, Mode::kCol);
  for (int u = 0; u < h; ++u) {
    for (int v = 0; v < w; ++v) {
      CHECK(modulated(u, v) == 0.7 * bare(u, v));
    }
  }
}

TEST_CASE("modulation applies the scene phase inside the cosine") {
  FloatMap r(8, 8);
  FloatMap phi(8, 8);
  for (double& x : r.values()) x = 0.5;
  for (int u = 0; u < 8; ++u) {
    for (int v = 0; v < 8; ++v) phi(u, v) = 0.1 * u + 0.2 * v;
  }
  FringeParams p;
  p.a = 0.3;
  p.b = 0.8;
  p.carrier = Carrier::kPerPixel;
  ArrangementMatrix arr(0);
  FloatMap out = modulate_channel(r, phi, p, arr, Mode::kCol);
  const int u = 3, v = 5;
  const int k = arr.index_at(u, v);
  const double arg = kTwoPi * p.f_u * v + kTwoPi * p.f_v * u + p.phi0 +
                     phi(u, v) + k * kHalfPi;
  CHECK(out(u, v) ==
        doctest::Approx(0.5 * 0.3 + 0.5 * 0.8 * std::cos(arg)).epsilon(1e-15));
}

TEST_CASE("modulate_scene handles every channel against the shared phase") {
  Scene s = synthesize_scene("gaussian-bump", 8, 8, 0);
  s.reflectivity.push_back(s.reflectivity[0]);  // fake a second channel
  Scene stretched = stretch_scene(s, Mode::kCol);
  ArrangementMatrix arr(0);
  FringeParams p;
  auto channels = modulate_scene(stretched, p, arr, Mode::kCol);
  REQUIRE(channels.size() == 2);
  CHECK(testutil::bitwise_equal(channels[0], channels[1]));
  FloatMap direct = modulate_channel(stretched.reflectivity[0],
                                     stretched.phase, p, arr, Mode::kCol);
  CHECK(testutil::bitwise_equal(channels[0], direct));
}

TEST_CASE("modulation validates dimensions") {
  FloatMap small(2, 2);
  CHECK_THROWS_AS(modulate_channel(small, small, FringeParams{},
                                   ArrangementMatrix(0), Mode::kCol),
                  std::invalid_argument);
  FloatMap r(8, 8);
  FloatMap phi(8, 9);
  CHECK_THROWS_AS(modulate_channel(r, phi, FringeParams{},
                                   ArrangementMatrix(0), Mode::kCol),
                  std::invalid_argument);
}

TEST_CASE("scene loading rescales bytes and validates phase range") {
  const std::string rpath = "scene_test_r.pgm";
  const std::string cpath = "scene_test_r.ppm";
  const std::string ppath = "scene_test_phi.fmap";

  ByteImage white(8, 8);
  for (auto& px : white.pixels) px = 255;
  write_pgm(rpath, white);
  FloatMap phi(8, 8);
  for (int u = 0; u < 8; ++u) {
    for (int v = 0; v < 8; ++v) phi(u, v) = 0.5 * u + 0.01 * v;
  }
  write_fmap(ppath, phi);

  Scene s = load_scene(rpath, ppath);
  CHECK(s.channels() == 1);
  for (double r : s.reflectivity[0].values()) CHECK(r == 1.0);
  CHECK(s.phase(3, 4) == doctest::Approx(1.54).epsilon(1e-6));

  // Color source: three distinct channels.
  ByteImage g = white, b = white;
  for (auto& px : g.pixels) px = 128;
  for (auto& px : b.pixels) px = 0;
  write_ppm(cpath, white, g, b);
  Scene color = load_scene(cpath, ppath);
  CHECK(color.channels() == 3);
  CHECK(color.reflectivity[0](0, 0) == 1.0);
  CHECK(color.reflectivity[1](0, 0) == doctest::Approx(128.0 / 255.0));
  CHECK(color.reflectivity[2](0, 0) == 0.0);

  // Phase at or beyond the wrap limit is rejected (half-open interval).
  FloatMap bad = phi;
  bad(0, 0) = kTwoPi;
  write_fmap(ppath, bad);
  CHECK_THROWS_AS(load_scene(rpath, ppath), std::invalid_argument);
  bad(0, 0) = -0.25;
  write_fmap(ppath, bad);
  CHECK_THROWS_AS(load_scene(rpath, ppath), std::invalid_argument);

  // Dimension mismatch.
  FloatMap small(8, 4);
  write_fmap(ppath, small);
  CHECK_THROWS_AS(load_scene(rpath, ppath), std::invalid_argument);

  // Reflectivity can also arrive as a raw float map, taken as stored.
  write_fmap(ppath, phi);
  const std::string rf = "scene_test_r.fmap";
  FloatMap rmap(8, 8);
  for (double& x : rmap.values()) x = 0.31;
  write_fmap(rf, rmap);
  Scene fs = load_scene(rf, ppath);
  CHECK(fs.reflectivity[0](5, 5) == doctest::Approx(0.31));

  std::remove(rpath.c_str());
  std::remove(cpath.c_str());
  std::remove(ppath.c_str());
  std::remove(rf.c_str());
}
