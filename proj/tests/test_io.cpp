#include <filesystem>

#include <gtest/gtest.h>

#include "sessile/error.hpp"
#include "sessile/io.hpp"

using namespace sessile;

TEST(Io, CsvRoundTripIsExact) {
  const Profile p{{0, 0.1, 1.0 / 3.0, 2.5}, {1.25, 1e-17, 0.7, 0}};
  const Profile q = profile_from_csv(profile_to_csv(p));
  EXPECT_EQ(q.t, p.t);
  EXPECT_EQ(q.r, p.r);
}

TEST(Io, CsvRejectsGarbage) {
  EXPECT_THROW(profile_from_csv("t,r\n0,1\n1;2\n"), Error);
  EXPECT_THROW(profile_from_csv("t,r\n0,1\n1,abc\n"), Error);
  EXPECT_THROW(profile_from_csv("t,r\n0,1\n0,1\n"), Error);
  EXPECT_NO_THROW(profile_from_csv("0,1\r\n1,0\r\n"));
}

TEST(Io, SvgPolylineIsMirrored) {
  const std::string svg = profile_svg(Profile{{0, 1, 2}, {1.5, 1, 0}});
  const auto a = svg.find("points=\"") + 8;
  const std::string pts = svg.substr(a, svg.find('"', a) - a);
  EXPECT_EQ(pts.substr(0, 4), "1.5,");
  EXPECT_EQ(pts.substr(pts.rfind(' ') + 1), "-1.5,0");
  EXPECT_NE(svg.find("width=\"800\""), std::string::npos);
}

TEST(Io, AtomicWriteLeavesNoTemporary) {
  const auto dir = std::filesystem::temp_directory_path() / "sessile_io_test";
  std::filesystem::remove_all(dir);
  const std::string path = (dir / "sub" / "x.txt").string();
  write_file_atomic(path, "one");
  write_file_atomic(path, "two");
  EXPECT_EQ(read_file(path), "two");
  EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
  std::filesystem::remove_all(dir);
  EXPECT_THROW(read_file(path), Error);
}

TEST(Io, SlicedSetFromJson) {
  const SurfaceTension f;
  const SlicedSet s = sliced_set_from_json(
      R"({"knots": [0, 1], "scales": [1, 0.5], "base": [[0,0],[1,0],[1,1],[0,1]]})", f);
  EXPECT_NEAR(volume(s), 1.0 * (1 + 0.5 + 0.25) / 3.0, 1e-12);
  ASSERT_EQ(s.centers.size(), 2u);
  EXPECT_THROW(sliced_set_from_json(R"({"knots": [0, 1], "scales": [1]})", f), Error);
  EXPECT_THROW(sliced_set_from_json("{", f), Error);
  const SurfaceTension planar(2, {}, {});
  const SlicedSet t = sliced_set_from_json(R"({"knots": [0, 2], "scales": [1, 1], "base": [-1, 2]})", planar);
  EXPECT_NEAR(volume(t), 6.0, 1e-12);
}

TEST(Io, PresetsAreAdmissible) {
  for (const std::string& name : preset_names()) {
    const SurfaceTension f = preset(name);
    EXPECT_EQ(f.slice_dim(), 2) << name;
    EXPECT_TRUE(f.check_admissible().admissible) << name;
    const SurfaceTension g = tension_from_arg(tension_to_json(f));
    EXPECT_EQ(g.phi(0.3, -0.7), f.phi(0.3, -0.7)) << name;
  }
  EXPECT_THROW(preset("nope"), Error);
  EXPECT_THROW(tension_from_arg("/nonexistent/tension.json"), Error);
}

TEST(Io, FormatDoubleRoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5e17}) EXPECT_EQ(std::stod(format_double(x)), x);
}
