#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "uot/densities.hpp"

using namespace uot;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name, const std::string &content) {
  const fs::path dir = fs::temp_directory_path() / "uot_test_densities";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p, std::ios::binary) << content;
  return p;
}

} // namespace

TEST_CASE("gaussians are normalized on the grid") {
  const SpatialGrid g(35);
  const SpatialField a = make_density(DensitySpec::gaussian(1.0 / 3.0, 0.1), g);
  CHECK(std::abs(integrate(a) - 1.0) <= 1e-12);
  for (double v : a.values()) CHECK(v >= 0.0);

  DensitySpec mix;
  mix.kind = DensitySpec::Kind::mixture;
  mix.components = {{0.0, 0.5, 0.1, 0.1, 1.0}, {1.0 / 3.0, 0.5, 0.1, 0.1, 1.0}};
  CHECK(std::abs(integrate(make_density(mix, g)) - 2.0) <= 1e-12);

  const SpatialField s = make_density(DensitySpec::gaussian(0.5, 0.1), g);
  for (int i = 0; i < 35; ++i) CHECK(std::abs(s(i) - s(34 - i)) <= 1e-12);

  const SpatialField scaled = make_density(DensitySpec::gaussian(0.4, 0.01, 2.5), g);
  CHECK(std::abs(integrate(scaled) - 2.5) <= 1e-12);
}

TEST_CASE("2D gaussians and uniform") {
  const SpatialGrid g(12, 9);
  const SpatialField a = make_density(DensitySpec::gaussian_2d(0.3, 0.7, 0.01, 2.0), g);
  CHECK(std::abs(integrate(a) - 2.0) <= 1e-12);
  const SpatialField u = make_density(DensitySpec::uniform(3.0), g);
  for (double v : u.values()) CHECK(v == 3.0);
}

TEST_CASE("density specs are validated") {
  CHECK_THROWS_WITH_AS(DensitySpec::gaussian(0.5, -1.0).validate(1), doctest::Contains("variance"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(DensitySpec::uniform(-1.0).validate(1), doctest::Contains("scale"),
                       std::invalid_argument);
  DensitySpec img;
  img.kind = DensitySpec::Kind::image;
  CHECK_THROWS_WITH_AS(img.validate(2), doctest::Contains("path"), std::invalid_argument);
  CHECK(density_kind_from_string(to_string(DensitySpec::Kind::csv)) == DensitySpec::Kind::csv);
  CHECK_THROWS(density_kind_from_string("spline"));
}

TEST_CASE("grayscale images") {
  SUBCASE("all black") {
    const auto p = scratch("black.pgm", "P2\n3 2\n255\n0 0 0\n0 0 0\n");
    const SpatialField f = load_grayscale(p.string(), SpatialGrid(3, 2), 1.0);
    for (double v : f.values()) CHECK(v == 0.0);
  }
  SUBCASE("all maxval") {
    std::string body = "P2\n# comment\n4 4\n15\n";
    for (int n = 0; n < 16; ++n) body += "15 ";
    const auto p = scratch("white.pgm", body);
    const SpatialField f = load_grayscale(p.string(), SpatialGrid(5, 3), 2.0);
    for (double v : f.values()) CHECK(v == 2.0);
    CHECK(integrate(f) == doctest::Approx(2.0).epsilon(1e-14));
  }
  SUBCASE("checker") {
    const auto p = scratch("checker.pgm", "P2\n2 2\n255\n0 255\n255 0\n");
    const SpatialField f = load_grayscale(p.string(), SpatialGrid(2, 2), 1.0);
    CHECK(f(0, 0) == 0.0);
    CHECK(f(1, 0) == 1.0);
    CHECK(f(0, 1) == 1.0);
    CHECK(f(1, 1) == 0.0);
  }
  SUBCASE("binary with 16-bit samples") {
    std::string body = "P5\n2 1\n65535\n";
    body += std::string{'\xff', '\xff', '\x80', '\x00'};
    const auto p = scratch("wide.pgm", body);
    const SpatialField f = load_grayscale(p.string(), SpatialGrid(2), 1.0);
    CHECK(f(0) == 1.0);
    CHECK(f(1) == doctest::Approx(32768.0 / 65535.0));
  }
  SUBCASE("errors") {
    CHECK_THROWS_WITH(load_grayscale(scratch("bad.pgm", "P3\n1 1\n255\n0 0 0\n").string(),
                                     SpatialGrid(2), 1.0),
                      doctest::Contains("bad.pgm"));
    CHECK_THROWS(load_grayscale(scratch("short.pgm", "P5\n4 4\n255\nab").string(), SpatialGrid(2),
                                1.0));
    CHECK_THROWS(load_grayscale("/nonexistent/x.pgm", SpatialGrid(2), 1.0));
  }
  SUBCASE("bundled images") {
    const SpatialGrid g(35, 35);
    for (const char *name : {"cat_sitting.pgm", "cat_lying.pgm"}) {
      const SpatialField f = load_grayscale(std::string(UOT_TEST_DATA_DIR) + "/" + name, g, 1.0);
      CHECK(integrate(f) > 0.05);
    }
  }
}

TEST_CASE("csv densities") {
  const auto p = scratch("d.csv", "1,2\n3,4\n");
  const SpatialField f = load_csv_density(p.string(), SpatialGrid(2, 2), 0.5);
  CHECK(f(0, 0) == 0.5);
  CHECK(f(1, 0) == 1.0);
  CHECK(f(0, 1) == 1.5);
  CHECK(f(1, 1) == 2.0);
  CHECK_THROWS(load_csv_density(scratch("neg.csv", "1,-2\n").string(), SpatialGrid(2), 1.0));
  CHECK_THROWS(load_csv_density(scratch("ragged.csv", "1,2\n3\n").string(), SpatialGrid(2, 2), 1.0));
}

TEST_CASE("linear path") {
  const SpatialGrid g(6);
  const SpatialField a = make_density(DensitySpec::gaussian(0.3, 0.02), g);
  const CellField same = linear_path(a, a, TimeGrid(5));
  for (int k = 0; k < 5; ++k) {
    for (int i = 0; i < 6; ++i) CHECK(same(k, i) == doctest::Approx(a(i)).epsilon(1e-15));
  }
  const CellField ramp = linear_path(SpatialField(g, 0.0), SpatialField(g, 1.0), TimeGrid(2));
  CHECK(ramp(0, 3) == 0.25);
  CHECK(ramp(1, 3) == 0.75);

  const SpatialField b = make_density(DensitySpec::gaussian(0.7, 0.02, 3.0), g);
  const CellField path = linear_path(a, b, TimeGrid(7));
  std::vector<double> mass;
  for (int k = 0; k < 7; ++k) mass.push_back(integrate(path.slice(k), g));
  for (int k = 1; k + 1 < 7; ++k) {
    CHECK(mass[k + 1] - mass[k] == doctest::Approx(mass[k] - mass[k - 1]).epsilon(1e-12));
  }
}
