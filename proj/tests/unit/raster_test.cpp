#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "corrdyn/error.hpp"
#include "corrdyn/limit_set.hpp"
#include "corrdyn/raster.hpp"

namespace corrdyn {
namespace {

std::string read_golden(const std::string& name) {
  std::ifstream in(std::string(CORRDYN_GOLDEN_DIR) + "/" + name, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Raster synthetic(int n, auto&& inside) {
  Raster r(GridSpec{Cx{}, 2.0, n, n}, Label::Outside);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x)
      if (inside(r.grid.pixel_center(x, y))) r.at(x, y) = Label::Inside;
  return r;
}

TEST(Grid, PixelCentersAndLocateRoundTrip) {
  const GridSpec g{Cx{0.5, -0.25}, 3.0, 30, 20};
  EXPECT_DOUBLE_EQ(g.step(), 0.1);
  EXPECT_DOUBLE_EQ(g.height(), 2.0);
  const Cx top_left = g.pixel_center(0, 0);
  EXPECT_NEAR(top_left.real(), 0.5 - 1.5 + 0.05, 1e-12);
  EXPECT_NEAR(top_left.imag(), -0.25 + 1.0 - 0.05, 1e-12);
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 30; ++x) {
      int lx = -1, ly = -1;
      ASSERT_TRUE(g.locate(g.pixel_center(x, y), lx, ly));
      EXPECT_EQ(lx, x);
      EXPECT_EQ(ly, y);
    }
  int x, y;
  EXPECT_FALSE(g.locate(Cx{10.0}, x, y));
  EXPECT_THROW((GridSpec{Cx{}, 0.0, 4, 4}.validate()), Error);
  EXPECT_THROW((GridSpec{Cx{}, 1.0, 0, 4}.validate()), Error);
}

TEST(Classify, DiskIsFull) {
  const auto r = synthetic(64, [](Cx z) { return std::abs(z) < 0.7; });
  const auto cls = classify_set(r);
  EXPECT_EQ(cls.verdict, SetVerdict::Full);
  EXPECT_EQ(cls.components_inside, 1);
  EXPECT_EQ(cls.components_complement, 1);
}

TEST(Classify, AnnulusWithHolesIsCarpet) {
  const auto r = synthetic(64, [](Cx z) {
    return std::abs(z) < 0.9 && std::abs(z) > 0.2 && std::abs(z - Cx{0.5}) > 0.1;
  });
  const auto cls = classify_set(r);
  EXPECT_EQ(cls.verdict, SetVerdict::Carpet);
  EXPECT_EQ(cls.components_complement, 3);
}

TEST(Classify, ScatteredDotsAreCantorLike) {
  Raster r(GridSpec{Cx{}, 2.0, 64, 64}, Label::Outside);
  for (int y = 2; y < 64; y += 6)
    for (int x = 2; x < 64; x += 6) r.at(x, y) = Label::Inside;
  EXPECT_EQ(classify_set(r).verdict, SetVerdict::CantorLike);
}

TEST(Classify, DiagonalGapKeepsComplementConnected) {
  // A set touching only diagonally leaves an 8-connected complement.
  Raster r(GridSpec{Cx{}, 2.0, 8, 8}, Label::Outside);
  r.at(3, 3) = Label::Inside;
  r.at(4, 4) = Label::Inside;
  const auto cls = classify_set(r);
  EXPECT_EQ(cls.components_inside, 2);
  EXPECT_EQ(cls.components_complement, 1);
  EXPECT_EQ(cls.verdict, SetVerdict::Inconclusive);
}

TEST(Classify, TooManyUnknownThrows) {
  Raster r(GridSpec{Cx{}, 2.0, 10, 10}, Label::Outside);
  r.at(0, 0) = Label::Unknown;
  try {
    classify_set(r);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::TooManyUnknown);
  }
}

TEST(Render, FilledSetAtZeroParameterIsUnitDisk) {
  const PowerCorr corr{RationalExp(5, 2), Cx{}};
  const GridSpec grid{Cx{}, 2.4, 96, 96};
  const Raster r = render_filled_julia(corr, grid, default_escape_params(corr));
  for (int y = 0; y < 96; ++y)
    for (int x = 0; x < 96; ++x) {
      const double m = std::abs(grid.pixel_center(x, y));
      const Label l = r.at(x, y);
      if (m <= 0.98) EXPECT_TRUE(l == Label::Inside || l == Label::Boundary) << x << "," << y;
      if (m >= 1.02) EXPECT_EQ(l, Label::Outside) << x << "," << y;
    }
  EXPECT_EQ(classify_set(r).verdict, SetVerdict::Full);
}

TEST(Render, BoundaryPixelsTouchOutside) {
  const PowerCorr corr{RationalExp(5, 4), Cx{3.0, 2.0}};
  const Raster filled = render_filled_julia(corr, filled_window(corr, 64), default_escape_params(corr));
  const Raster bd = boundary_of(filled);
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 64; ++x) {
      if (filled.at(x, y) != Label::Boundary) continue;
      EXPECT_EQ(bd.at(x, y), Label::Boundary);
      bool touches = false;
      for (const auto& [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
        const int nx = x + dx, ny = y + dy;
        if (nx >= 0 && ny >= 0 && nx < 64 && ny < 64 && filled.at(nx, ny) == Label::Outside) touches = true;
      }
      EXPECT_TRUE(touches);
    }
}

TEST(Render, BackwardOrbitLandsOnUnitCircle) {
  const PowerCorr corr{RationalExp(5, 2), Cx{}};
  const GridSpec grid{Cx{}, 2.4, 120, 120};
  const Raster r = render_julia_backward(corr, grid, Cx{1.0}, 20000, 3);
  EXPECT_GT(r.count(Label::Boundary), 100u);
  for (int y = 0; y < 120; ++y)
    for (int x = 0; x < 120; ++x)
      if (r.at(x, y) == Label::Boundary)
        EXPECT_LT(std::abs(std::abs(grid.pixel_center(x, y)) - 1.0), 1.5 * grid.step());
  EXPECT_EQ(r.labels, render_julia_backward(corr, grid, Cx{1.0}, 20000, 3).labels);
  EXPECT_THROW(render_julia_backward(corr, grid, Cx{0.5}, 10), Error);
}

TEST(Render, ParameterSetOfQuadraticFamily) {
  const RationalExp quad(2, 1);
  EscapeParams params = default_escape_params(PowerCorr{quad, Cx{}});
  params.max_depth = 40;
  const GridSpec grid{Cx{-0.5}, 3.0, 64, 64};
  const Raster r = render_parameter_set(quad, grid, params, ParameterSet::MBetaZero);
  const auto label_at = [&](Cx c) {
    int x, y;
    EXPECT_TRUE(grid.locate(c, x, y));
    return r.at(x, y);
  };
  EXPECT_NE(label_at(Cx{0.0}), Label::Outside);
  EXPECT_NE(label_at(Cx{-1.0}), Label::Outside);
  EXPECT_EQ(label_at(Cx{0.6}), Label::Outside);
  EXPECT_EQ(label_at(Cx{-1.9, 0.5}), Label::Outside);
  // Conjugation symmetry: the set is mirror-symmetric about the real axis.
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 64; ++x)
      EXPECT_EQ(r.at(x, y) == Label::Outside, r.at(x, 63 - y) == Label::Outside);
}

TEST(Render, WorkerCountDoesNotChangeOutput) {
  const PowerCorr corr{RationalExp(5, 4), Cx{0.4, 0.9}};
  const GridSpec grid = filled_window(corr, 64);
  const EscapeParams params = default_escape_params(corr);
  WorkerPool pool(4);
  EXPECT_EQ(encode_ppm(render_filled_julia(corr, grid, params), default_palette()),
            encode_ppm(render_filled_julia(corr, grid, params, pool), default_palette()));
}

TEST(Ppm, HeaderAndPaletteCoverage) {
  Raster r(GridSpec{Cx{}, 1.0, 3, 2}, Label::Inside);
  r.at(2, 1) = Label::Boundary;
  const std::string bytes = encode_ppm(r, default_palette());
  ASSERT_EQ(bytes.substr(0, 11), "P6\n3 2\n255\n");
  ASSERT_EQ(bytes.size(), 11u + 18u);
  EXPECT_EQ(static_cast<unsigned char>(bytes[11 + 15]), 255);
  Palette<Label> partial{{Label::Inside, Rgb{0, 0, 0}}};
  EXPECT_THROW(encode_ppm(r, partial), Error);
}

TEST(Csv, LabelRows) {
  Raster r(GridSpec{Cx{}, 1.0, 2, 1}, Label::Outside);
  r.at(1, 0) = Label::Inside;
  EXPECT_EQ(encode_label_csv(r), "x,y,label\n0,0,outside\n1,0,inside\n");
}

TEST(Depth, ResolutionDepthGrowsWithPixels) {
  const PowerCorr corr{RationalExp(5, 4), Cx{26.0}};
  const int d256 = resolution_depth(corr, filled_window(corr, 256));
  const int d512 = resolution_depth(corr, filled_window(corr, 512));
  EXPECT_GE(d256, 1);
  EXPECT_GE(d512, d256);
  EXPECT_LE(d512, 60);
}

TEST(Golden, JuliaNearZeroParameter) {
  const PowerCorr corr{RationalExp(5, 2), Cx{0.05}};
  const Raster r = render_julia_boundary(corr, filled_window(corr, 128), default_escape_params(corr));
  EXPECT_EQ(encode_ppm(r, default_palette()), read_golden("julia_beta5_2_c0.05.ppm"));
}

TEST(Golden, QuadraticMandelbrot) {
  const RationalExp quad(2, 1);
  EscapeParams params = default_escape_params(PowerCorr{quad, Cx{}});
  params.max_depth = 40;
  const Raster r = render_parameter_set(quad, GridSpec{Cx{-0.5}, 3.0, 128, 128}, params,
                                        ParameterSet::MBetaZero);
  EXPECT_EQ(encode_ppm(r, default_palette()), read_golden("mandelbrot_quadratic.ppm"));
}

TEST(Golden, MatingLimitSet) {
  const auto render = render_limit_sets(Cx{4.56, 0.42}, GridSpec{Cx{}, 1.0, 128, 128}, 24,
                                        MatingCoords::Original);
  EXPECT_EQ(encode_ppm(render.raster, limit_palette()), read_golden("limitset_a4.56_0.42.ppm"));
}

}  // namespace
}  // namespace corrdyn
