#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "corrdyn/correspondence.hpp"
#include "corrdyn/error.hpp"
#include "corrdyn/executor.hpp"
#include "corrdyn/orbit.hpp"

namespace corrdyn {

/// A square-pixel window over the complex plane. Pixel (0, 0) is top-left
/// and pixels are sampled at their centers.
struct GridSpec {
  Cx center;
  double width = 1.0;
  int pixels_x = 1;
  int pixels_y = 1;

  /// Throws Error{InvalidArgument} for non-positive sizes.
  void validate() const;
  double step() const { return width / pixels_x; }
  double height() const { return width * pixels_y / pixels_x; }
  Cx pixel_center(int x, int y) const;
  /// Pixel containing z, or false when z is outside the window.
  bool locate(Cx z, int& x, int& y) const;
  std::size_t size() const {
    return static_cast<std::size_t>(pixels_x) * static_cast<std::size_t>(pixels_y);
  }
};

template <class L>
struct LabeledGrid {
  GridSpec grid;
  std::vector<L> labels;  // row-major

  LabeledGrid() = default;
  LabeledGrid(const GridSpec& g, L fill) : grid(g), labels(g.size(), fill) {}

  L& at(int x, int y) {
    return labels[static_cast<std::size_t>(y) * static_cast<std::size_t>(grid.pixels_x) +
                  static_cast<std::size_t>(x)];
  }
  const L& at(int x, int y) const {
    return labels[static_cast<std::size_t>(y) * static_cast<std::size_t>(grid.pixels_x) +
                  static_cast<std::size_t>(x)];
  }
  std::size_t count(L label) const {
    std::size_t n = 0;
    for (const L& l : labels) n += (l == label) ? 1 : 0;
    return n;
  }
};

enum class Label : std::uint8_t { Inside, Outside, Boundary, Unknown };
using Raster = LabeledGrid<Label>;

std::string_view to_string(Label label);

// ------------------------------------------------------------------ renders

/// Inside = Bounded, Outside = Escaped, Unknown = BudgetExhausted; Inside
/// pixels with an Outside 4-neighbour become Boundary.
Raster render_filled_julia(const PowerCorr& corr, const GridSpec& grid, const EscapeParams& params,
                           const Executor& executor = sequential_executor());

/// Boundary pixels of the filled render; every other pixel is Outside
/// (Unknown pixels stay Unknown).
Raster render_julia_boundary(const PowerCorr& corr, const GridSpec& grid,
                             const EscapeParams& params,
                             const Executor& executor = sequential_executor());

/// Boundary pixels of an existing filled raster.
Raster boundary_of(const Raster& filled);

/// Backward-orbit render: a random walk through backward branches started at
/// a repelling fixed point; every visited pixel is marked Boundary. The walk
/// is driven by a seeded generator, so output is reproducible.
/// Throws Error{SeedNotRepelling} unless seed is a repelling fixed point.
Raster render_julia_backward(const PowerCorr& corr, const GridSpec& grid, Cx seed,
                             std::size_t nodes, std::uint64_t rng_seed = 1);

enum class ParameterSet { MBetaZero, MBeta };

/// MBetaZero: pixel c is Inside iff the orbit tree of 0 under z^beta + c
/// stays bounded. MBeta: Inside iff the filled set at sub-resolution
/// `sub_pixels`^2 classifies as Full or Carpet, Outside for CantorLike and
/// Unknown when inconclusive (heuristic; see classify_filled_julia). The
/// search radius used per pixel is max(params.radius, escape_radius(c)).
Raster render_parameter_set(const RationalExp& exp, const GridSpec& grid,
                            const EscapeParams& params, ParameterSet variant,
                            const Executor& executor = sequential_executor(),
                            int sub_pixels = 64);

/// Square window of half-width 1.05 * trapping_radius around 0: it contains
/// the whole filled set.
GridSpec filled_window(const PowerCorr& corr, int pixels);

// ------------------------------------------------------------ classification

enum class SetVerdict { Full, Carpet, CantorLike, Inconclusive };
std::string_view to_string(SetVerdict verdict);

struct SetClassification {
  SetVerdict verdict = SetVerdict::Inconclusive;
  int components_inside = 0;
  int components_complement = 0;
  double unknown_fraction = 0.0;
};

/// Pixel-topology signature. Inside and Boundary pixels form the set
/// (4-connected components); Outside pixels plus the window frame form the
/// complement (8-connected). Unknown pixels belong to neither.
/// Full: one set component, one complement component. Carpet: one set
/// component, >= 2 complement components. CantorLike: >= 20 set components,
/// none wider than 3 pixels. Otherwise Inconclusive.
/// Throws Error{TooManyUnknown} when >= 1% of the pixels are Unknown.
SetClassification classify_set(const Raster& raster);

/// Search depth whose pixel-level picture is meaningful for topology: the
/// depth-d approximation of K_c is a neighbourhood of width about
/// r* / lambda^d, with lambda = beta r*^(beta-1) the branch expansion near the
/// trapping circle. Returns ceil(log(r*/step) / log(lambda)) + 1, clamped to
/// [1, 60]. Much deeper renders of a measure-zero set fall apart into
/// isolated pixels.
int resolution_depth(const PowerCorr& corr, const GridSpec& grid);

/// Renders filled_window(corr, pixels) at resolution_depth and classifies it.
SetClassification classify_filled_julia(const PowerCorr& corr, int pixels,
                                        const Executor& executor = sequential_executor());

// ---------------------------------------------------------------- output

using Rgb = std::array<std::uint8_t, 3>;

template <class L>
using Palette = std::map<L, Rgb>;

/// Inside black, Outside white, Boundary red, Unknown gray.
Palette<Label> default_palette();

/// Binary P6 image bytes from row-major RGB pixels.
std::string encode_ppm(int width, int height, const std::vector<Rgb>& pixels);

template <class L>
std::string encode_ppm(const LabeledGrid<L>& raster, const Palette<L>& palette) {
  std::vector<Rgb> pixels;
  pixels.reserve(raster.labels.size());
  for (const L& l : raster.labels) {
    const auto it = palette.find(l);
    if (it == palette.end()) throw Error(Errc::InvalidArgument, "palette does not cover every label");
    pixels.push_back(it->second);
  }
  return encode_ppm(raster.grid.pixels_x, raster.grid.pixels_y, pixels);
}

/// Writes bytes to path; throws Error{IoError}.
void write_file(const std::filesystem::path& path, const std::string& bytes);

template <class L>
void write_ppm(const LabeledGrid<L>& raster, const Palette<L>& palette,
               const std::filesystem::path& path) {
  write_file(path, encode_ppm(raster, palette));
}

/// CSV "x,y,label", one row per pixel, row-major.
template <class L>
std::string encode_label_csv(const LabeledGrid<L>& raster) {
  std::string out = "x,y,label\n";
  for (int y = 0; y < raster.grid.pixels_y; ++y)
    for (int x = 0; x < raster.grid.pixels_x; ++x) {
      out += std::to_string(x);
      out += ',';
      out += std::to_string(y);
      out += ',';
      out += to_string(raster.at(x, y));
      out += '\n';
    }
  return out;
}

}  // namespace corrdyn
