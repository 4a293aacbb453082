#include "corrdyn/raster.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

namespace corrdyn {

void GridSpec::validate() const {
  if (pixels_x < 1 || pixels_y < 1) throw Error(Errc::InvalidArgument, "grid needs at least one pixel");
  if (!(width > 0.0) || !std::isfinite(width))
    throw Error(Errc::InvalidArgument, "grid width must be positive");
  if (!is_finite(center)) throw Error(Errc::InvalidArgument, "grid center must be finite");
}

Cx GridSpec::pixel_center(int x, int y) const {
  const double s = step();
  return {center.real() + (x + 0.5 - 0.5 * pixels_x) * s,
          center.imag() + (0.5 * pixels_y - y - 0.5) * s};
}

bool GridSpec::locate(Cx z, int& x, int& y) const {
  const double s = step();
  const double fx = (z.real() - center.real()) / s + 0.5 * pixels_x;
  const double fy = 0.5 * pixels_y - (z.imag() - center.imag()) / s;
  if (!(fx >= 0.0 && fx < pixels_x && fy >= 0.0 && fy < pixels_y)) return false;
  x = static_cast<int>(fx);
  y = static_cast<int>(fy);
  return true;
}

std::string_view to_string(Label label) {
  switch (label) {
    case Label::Inside: return "inside";
    case Label::Outside: return "outside";
    case Label::Boundary: return "boundary";
    case Label::Unknown: return "unknown";
  }
  return "unknown";
}

std::string_view to_string(SetVerdict verdict) {
  switch (verdict) {
    case SetVerdict::Full: return "Full";
    case SetVerdict::Carpet: return "Carpet";
    case SetVerdict::CantorLike: return "CantorLike";
    case SetVerdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

namespace {

Label label_of(OrbitStatus status) {
  switch (status) {
    case OrbitStatus::Bounded: return Label::Inside;
    case OrbitStatus::Escaped: return Label::Outside;
    case OrbitStatus::BudgetExhausted: return Label::Unknown;
  }
  return Label::Unknown;
}

void mark_boundary(Raster& raster) {
  const int w = raster.grid.pixels_x;
  const int h = raster.grid.pixels_y;
  const auto outside = [&](int x, int y) {
    return x >= 0 && y >= 0 && x < w && y < h && raster.at(x, y) == Label::Outside;
  };
  std::vector<std::size_t> edge;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (raster.at(x, y) == Label::Inside &&
          (outside(x - 1, y) || outside(x + 1, y) || outside(x, y - 1) || outside(x, y + 1)))
        edge.push_back(static_cast<std::size_t>(y) * static_cast<std::size_t>(w) +
                       static_cast<std::size_t>(x));
  for (const auto i : edge) raster.labels[i] = Label::Boundary;
}

}  // namespace

Raster render_filled_julia(const PowerCorr& corr, const GridSpec& grid, const EscapeParams& params,
                           const Executor& executor) {
  grid.validate();
  Raster raster(grid, Label::Unknown);
  executor.parallel_for(static_cast<std::size_t>(grid.pixels_y), [&](std::size_t row) {
    const int y = static_cast<int>(row);
    for (int x = 0; x < grid.pixels_x; ++x)
      raster.at(x, y) = label_of(in_filled_julia(corr, grid.pixel_center(x, y), params).status);
  });
  mark_boundary(raster);
  return raster;
}

Raster boundary_of(const Raster& filled) {
  Raster out(filled.grid, Label::Outside);
  for (std::size_t i = 0; i < filled.labels.size(); ++i) {
    if (filled.labels[i] == Label::Boundary) out.labels[i] = Label::Boundary;
    if (filled.labels[i] == Label::Unknown) out.labels[i] = Label::Unknown;
  }
  return out;
}

Raster render_julia_boundary(const PowerCorr& corr, const GridSpec& grid,
                             const EscapeParams& params, const Executor& executor) {
  return boundary_of(render_filled_julia(corr, grid, params, executor));
}

Raster render_julia_backward(const PowerCorr& corr, const GridSpec& grid, Cx seed,
                             std::size_t nodes, std::uint64_t rng_seed) {
  grid.validate();
  const BranchSet forward = power_forward(corr, seed);
  bool repelling = false;
  for (const auto& b : forward.images)
    if (std::abs(b.value - seed) <= 1e-8 * std::max(1.0, std::abs(seed)) && b.derivative &&
        std::abs(*b.derivative) > 1.0)
      repelling = true;
  if (!repelling)
    throw Error(Errc::SeedNotRepelling, "backward render needs a repelling fixed point as seed");

  Raster raster(grid, Label::Outside);
  std::mt19937_64 rng(rng_seed);
  Cx z = seed;
  for (std::size_t i = 0; i < nodes; ++i) {
    const BranchSet back = power_backward(corr, z);
    std::uniform_int_distribution<std::size_t> pick(0, back.images.size() - 1);
    z = back.images[pick(rng)].value;
    int x = 0;
    int y = 0;
    if (grid.locate(z, x, y)) raster.at(x, y) = Label::Boundary;
  }
  return raster;
}

GridSpec filled_window(const PowerCorr& corr, int pixels) {
  const double half = 1.05 * trapping_radius(corr);
  return GridSpec{Cx{}, 2.0 * half, pixels, pixels};
}

int resolution_depth(const PowerCorr& corr, const GridSpec& grid) {
  const double r = trapping_radius(corr);
  const double beta = corr.exp.beta();
  const double expansion = beta * std::pow(r, beta - 1.0);
  const double ratio = r / grid.step();
  if (ratio <= 1.0 || expansion <= 1.0) return 1;
  const double depth = std::ceil(std::log(ratio) / std::log(expansion)) + 1.0;
  return static_cast<int>(std::clamp(depth, 1.0, 60.0));
}

SetClassification classify_filled_julia(const PowerCorr& corr, int pixels,
                                        const Executor& executor) {
  const GridSpec grid = filled_window(corr, pixels);
  EscapeParams params = default_escape_params(corr);
  params.max_depth = resolution_depth(corr, grid);
  return classify_set(render_filled_julia(corr, grid, params, executor));
}

Raster render_parameter_set(const RationalExp& exp, const GridSpec& grid,
                            const EscapeParams& params, ParameterSet variant,
                            const Executor& executor, int sub_pixels) {
  grid.validate();
  Raster raster(grid, Label::Unknown);
  const auto pixel_label = [&](Cx c) {
    const PowerCorr corr{exp, c};
    EscapeParams local = params;
    local.radius = std::max(params.radius, escape_radius(corr));
    if (variant == ParameterSet::MBetaZero)
      return label_of(in_filled_julia(corr, Cx{}, local).status);
    try {
      const SetClassification cls = classify_filled_julia(corr, sub_pixels);
      switch (cls.verdict) {
        case SetVerdict::Full:
        case SetVerdict::Carpet: return Label::Inside;
        case SetVerdict::CantorLike: return Label::Outside;
        case SetVerdict::Inconclusive: return Label::Unknown;
      }
    } catch (const Error& e) {
      if (e.code() != Errc::TooManyUnknown) throw;
    }
    return Label::Unknown;
  };
  executor.parallel_for(static_cast<std::size_t>(grid.pixels_y), [&](std::size_t row) {
    const int y = static_cast<int>(row);
    for (int x = 0; x < grid.pixels_x; ++x) raster.at(x, y) = pixel_label(grid.pixel_center(x, y));
  });
  if (variant == ParameterSet::MBetaZero) mark_boundary(raster);
  return raster;
}

namespace {

// Union-find over pixel indices.
class Components {
 public:
  explicit Components(std::size_t n) : parent_(n) {
    for (std::size_t i = 0; i < n; ++i) parent_[i] = i;
  }
  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

SetClassification classify_set(const Raster& raster) {
  const int w = raster.grid.pixels_x;
  const int h = raster.grid.pixels_y;
  const std::size_t n = raster.labels.size();
  SetClassification out;
  out.unknown_fraction = static_cast<double>(raster.count(Label::Unknown)) / static_cast<double>(n);
  if (out.unknown_fraction >= 0.01)
    throw Error(Errc::TooManyUnknown, std::to_string(100.0 * out.unknown_fraction) +
                                          "% of pixels are unknown (limit 1%)");

  const auto idx = [w](int x, int y) {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x);
  };
  const auto in_set = [&](int x, int y) {
    const Label l = raster.at(x, y);
    return l == Label::Inside || l == Label::Boundary;
  };
  const auto in_complement = [&](int x, int y) { return raster.at(x, y) == Label::Outside; };

  // Index n is the frame: everything outside the window.
  Components uf(n + 1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (in_set(x, y)) {
        if (x + 1 < w && in_set(x + 1, y)) uf.unite(idx(x, y), idx(x + 1, y));
        if (y + 1 < h && in_set(x, y + 1)) uf.unite(idx(x, y), idx(x, y + 1));
      } else if (in_complement(x, y)) {
        if (x == 0 || y == 0 || x == w - 1 || y == h - 1) uf.unite(idx(x, y), n);
        for (const auto& [dx, dy] : {std::pair{1, 0}, {-1, 1}, {0, 1}, {1, 1}}) {
          const int nx = x + dx;
          const int ny = y + dy;
          if (nx >= 0 && nx < w && ny < h && in_complement(nx, ny)) uf.unite(idx(x, y), idx(nx, ny));
        }
      }
    }
  }

  struct Extent {
    int x0, x1, y0, y1;
  };
  std::map<std::size_t, Extent> set_parts;
  std::map<std::size_t, bool> complement_parts;
  complement_parts[uf.find(n)] = true;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (in_set(x, y)) {
        auto [it, fresh] = set_parts.try_emplace(uf.find(idx(x, y)), Extent{x, x, y, y});
        if (!fresh) {
          it->second.x0 = std::min(it->second.x0, x);
          it->second.x1 = std::max(it->second.x1, x);
          it->second.y0 = std::min(it->second.y0, y);
          it->second.y1 = std::max(it->second.y1, y);
        }
      } else if (in_complement(x, y)) {
        complement_parts[uf.find(idx(x, y))] = true;
      }
    }
  out.components_inside = static_cast<int>(set_parts.size());
  out.components_complement = static_cast<int>(complement_parts.size());

  if (out.components_inside == 1) {
    out.verdict = out.components_complement == 1 ? SetVerdict::Full : SetVerdict::Carpet;
  } else if (out.components_inside >= 20) {
    const bool small = std::all_of(set_parts.begin(), set_parts.end(), [](const auto& kv) {
      const Extent& e = kv.second;
      return e.x1 - e.x0 + 1 <= 3 && e.y1 - e.y0 + 1 <= 3;
    });
    if (small) out.verdict = SetVerdict::CantorLike;
  }
  return out;
}

Palette<Label> default_palette() {
  return {{Label::Inside, Rgb{0, 0, 0}},
          {Label::Outside, Rgb{255, 255, 255}},
          {Label::Boundary, Rgb{255, 0, 0}},
          {Label::Unknown, Rgb{128, 128, 128}}};
}

std::string encode_ppm(int width, int height, const std::vector<Rgb>& pixels) {
  std::string out = "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  out.reserve(out.size() + pixels.size() * 3);
  for (const Rgb& px : pixels)
    for (const auto channel : px) out.push_back(static_cast<char>(channel));
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(Errc::IoError, "cannot open " + path.string() + " for writing");
  file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!file) throw Error(Errc::IoError, "write to " + path.string() + " failed");
}

}  // namespace corrdyn
