#include <chrono>
#include <cmath>
#include <filesystem>
#include <memory>
#include <ostream>

#include <json.hpp>

#include "corrdyn/cifs.hpp"
#include "corrdyn/error.hpp"
#include "corrdyn/executor.hpp"
#include "corrdyn/limit_set.hpp"
#include "corrdyn/orbit.hpp"
#include "corrdyn/raster.hpp"
#include "corrdyn/sturmian.hpp"
#include "corrdyn/yoccoz.hpp"
#include "corrdyn_cli/cli.hpp"

namespace corrdyn::cli {

namespace {

using nlohmann::json;

struct Outcome {
  std::vector<std::string> outputs;
  json metrics = json::object();
  int exit_code = 0;
};

json complex_json(Cx z) { return json::array({z.real(), z.imag()}); }

std::string output_path(const RunConfig& cfg, const char* fallback) {
  return cfg.out.empty() ? std::string(fallback) : cfg.out;
}

// Writes the file and its configuration sidecar.
void emit(const RunConfig& cfg, Outcome& outcome, const std::string& path, const std::string& bytes) {
  write_file(path, bytes);
  write_file(path + ".meta", to_meta(cfg));
  outcome.outputs.push_back(path);
}

// Secondary outputs of one run share the sidecar of the primary file.
void emit_extra(Outcome& outcome, const std::string& path, const std::string& bytes) {
  write_file(path, bytes);
  outcome.outputs.push_back(path);
}

Palette<Label> label_palette(const RunConfig& cfg) {
  if (cfg.palette == "mono")
    return {{Label::Inside, Rgb{0, 0, 0}},
            {Label::Outside, Rgb{255, 255, 255}},
            {Label::Boundary, Rgb{0, 0, 0}},
            {Label::Unknown, Rgb{255, 255, 255}}};
  return default_palette();
}

Palette<LimitLabel> limit_label_palette(const RunConfig& cfg) {
  if (cfg.palette == "mono")
    return {{LimitLabel::LambdaMinus, Rgb{0, 0, 0}},
            {LimitLabel::LambdaPlus, Rgb{0, 0, 0}},
            {LimitLabel::Regular, Rgb{255, 255, 255}},
            {LimitLabel::Unknown, Rgb{255, 255, 255}}};
  return limit_palette();
}

RationalExp exponent(const RunConfig& cfg) { return RationalExp(cfg.p.value_or(3), cfg.q.value_or(2)); }

GridSpec grid_or(const RunConfig& cfg, Cx center, double width) {
  GridSpec grid{cfg.center.value_or(center), cfg.width.value_or(width), cfg.px, cfg.py.value_or(cfg.px)};
  grid.validate();
  return grid;
}

EscapeParams escape_params(const RunConfig& cfg, const PowerCorr& corr) {
  EscapeParams params = default_escape_params(corr);
  if (cfg.depth) params.max_depth = *cfg.depth;
  params.node_budget = cfg.budget;
  if (cfg.radius) {
    if (*cfg.radius < params.radius)
      throw UsageError("radius must be >= the escape radius " + std::to_string(params.radius));
    params.radius = *cfg.radius;
  }
  return params;
}

void label_counts(const Raster& raster, json& metrics) {
  metrics["inside"] = raster.count(Label::Inside);
  metrics["outside"] = raster.count(Label::Outside);
  metrics["boundary"] = raster.count(Label::Boundary);
  metrics["unknown"] = raster.count(Label::Unknown);
}

Outcome run_julia(const RunConfig& cfg, const Executor& executor) {
  const PowerCorr corr{exponent(cfg), cfg.c};
  const GridSpec window = filled_window(corr, cfg.px);
  const GridSpec grid = grid_or(cfg, window.center, window.width);
  Raster raster;
  Outcome outcome;
  if (cfg.mode == "backward") {
    std::optional<Cx> seed;
    for (const FixedPoint& fp : fixed_points(corr))
      if (fp.kind == FixedPointClass::Repelling) {
        seed = fp.point;
        break;
      }
    if (!seed) throw Error(Errc::NoRepellingFixedPoint, "no repelling fixed point to seed the walk");
    raster = render_julia_backward(corr, grid, *seed, cfg.nodes, cfg.rng_seed);
    outcome.metrics["seed"] = complex_json(*seed);
  } else {
    raster = render_julia_boundary(corr, grid, escape_params(cfg, corr), executor);
  }
  outcome.metrics["boundary"] = raster.count(Label::Boundary);
  outcome.metrics["unknown"] = raster.count(Label::Unknown);
  if (cfg.c == Cx{}) {
    // The set is the unit circle; report how far marked pixels stray from it.
    double deviation = 0.0;
    for (int y = 0; y < grid.pixels_y; ++y)
      for (int x = 0; x < grid.pixels_x; ++x)
        if (raster.at(x, y) == Label::Boundary)
          deviation = std::max(deviation, std::abs(std::abs(grid.pixel_center(x, y)) - 1.0));
    outcome.metrics["circle_deviation_px"] = deviation / grid.step();
  }
  emit(cfg, outcome, output_path(cfg, "julia.ppm"), encode_ppm(raster, label_palette(cfg)));
  return outcome;
}

Outcome run_filled(const RunConfig& cfg, const Executor& executor) {
  const PowerCorr corr{exponent(cfg), cfg.c};
  const GridSpec window = filled_window(corr, cfg.px);
  const GridSpec grid = grid_or(cfg, window.center, window.width);
  const Raster raster = render_filled_julia(corr, grid, escape_params(cfg, corr), executor);
  Outcome outcome;
  label_counts(raster, outcome.metrics);
  try {
    const SetClassification cls = classify_set(raster);
    outcome.metrics["verdict"] = std::string(to_string(cls.verdict));
    outcome.metrics["set_components"] = cls.components_inside;
    outcome.metrics["complement_components"] = cls.components_complement;
  } catch (const Error& e) {
    if (e.code() != Errc::TooManyUnknown) throw;
    outcome.metrics["verdict"] = "too_many_unknown";
  }
  emit(cfg, outcome, output_path(cfg, "filled.ppm"), encode_ppm(raster, label_palette(cfg)));
  return outcome;
}

Outcome run_mset(const RunConfig& cfg, const Executor& executor) {
  const RationalExp exp = exponent(cfg);
  const PowerCorr probe{exp, Cx{}};
  EscapeParams params = escape_params(cfg, probe);
  // Parameters with |c| beyond the trapping bound of 0 escape; cover them.
  const double reach = 1.25 * std::max(2.0, std::pow(2.0, 1.0 / (exp.beta() - 1.0)));
  const GridSpec grid = grid_or(cfg, Cx{}, 2.0 * reach);
  const ParameterSet variant =
      cfg.variant == "connected" ? ParameterSet::MBeta : ParameterSet::MBetaZero;
  const Raster raster = render_parameter_set(exp, grid, params, variant, executor, cfg.sub_px);
  Outcome outcome;
  label_counts(raster, outcome.metrics);
  emit(cfg, outcome, output_path(cfg, "mset.ppm"), encode_ppm(raster, label_palette(cfg)));
  return outcome;
}

Outcome run_limitset(const RunConfig& cfg, const Executor& executor) {
  const MatingCoords coords = cfg.coords == "covj" ? MatingCoords::CovJ : MatingCoords::Original;
  const MatingCorr corr(cfg.a, coords);
  const GridSpec grid = grid_or(cfg, corr.parabolic_point(), 1.0);
  LimitSetOptions options;
  options.buffer = cfg.buffer;
  options.node_budget = cfg.budget;
  const LimitSetRaster render =
      render_limit_sets(cfg.a, grid, cfg.depth.value_or(24), coords, options, executor);
  const SymmetryReport sym = j_symmetry(render);
  Outcome outcome;
  auto& m = outcome.metrics;
  m["lambda_minus"] = render.raster.count(LimitLabel::LambdaMinus);
  m["lambda_plus"] = render.raster.count(LimitLabel::LambdaPlus);
  m["regular"] = render.raster.count(LimitLabel::Regular);
  m["unknown"] = render.raster.count(LimitLabel::Unknown);
  m["shared"] = render.shared.size();
  m["symmetry_fraction"] = sym.fraction;
  m["max_contact_distance"] = sym.max_contact_distance;
  m["buffer"] = cfg.buffer;
  emit(cfg, outcome, output_path(cfg, "limitset.ppm"),
       encode_ppm(render.raster, limit_label_palette(cfg)));
  return outcome;
}

Outcome run_yoccoz_disks(const RunConfig& cfg) {
  const DiskVariant variant = cfg.disks == "classical"
                                  ? DiskVariant::classical(cfg.degree, cfg.period)
                                  : DiskVariant::mating();
  const auto rows = emit_disk_family(cfg.q_max, cfg.extra, variant);
  Outcome outcome;
  outcome.metrics["disks"] = rows.size();
  emit(cfg, outcome, output_path(cfg, "disks.csv"), encode_disk_csv(rows));
  return outcome;
}

Outcome run_yoccoz_verify(const RunConfig& cfg) {
  const YoccozReport report = yoccoz_verify(cfg.a, cfg.q_max);
  Outcome outcome;
  auto& m = outcome.metrics;
  m["checks"] = report.checks.size();
  std::size_t admissible = 0;
  for (const auto& check : report.checks) admissible += check.admissible.size();
  m["admissible_disks"] = admissible;
  m["no_repelling_fixed_point"] = report.no_repelling_fixed_point;
  m["passed"] = report.passed();
  emit(cfg, outcome, output_path(cfg, "yoccoz.csv"), encode_yoccoz_csv(report));
  if (!report.passed()) outcome.exit_code = 1;
  return outcome;
}

Outcome run_sturmian(const RunConfig& cfg) {
  const Word word = sturmian_word(*cfg.p, *cfg.q);
  const WordMatrix matrix(word);
  const BigInt bound = eigenvalue_bound(*cfg.p, *cfg.q);
  Outcome outcome;
  auto& m = outcome.metrics;
  m["word"] = word.binary();
  m["letters"] = word.letters_ab();
  json entries = json::array();
  for (const BigInt& e : matrix.entries()) entries.push_back(e.str());
  m["matrix"] = entries;
  m["trace"] = matrix.trace().str();
  if (const auto lambda = matrix.dominant_eigenvalue())
    m["eigenvalue"] = *lambda;
  else
    m["eigenvalue"] = nullptr;
  m["bound"] = bound.str();
  m["within_bound"] = matrix.eigenvalue_at_most(bound);
  m["balanced"] = is_balanced(word);
  return outcome;
}

Outcome run_minkowski(const RunConfig& cfg) {
  const ContinuedFraction cf = ContinuedFraction::parse(cfg.cf).canonical();
  const Dyadic h = minkowski_h(cf, cfg.bits);
  const ConjugacyReport conj = h_conjugacy_check(cf, cfg.bits);
  Outcome outcome;
  auto& m = outcome.metrics;
  m["cf"] = cf.to_string();
  m["bits"] = cfg.bits;
  m["binary"] = h.to_binary();
  m["fraction"] = h.to_fraction();
  m["value"] = h.to_double();
  m["conjugacy_passed"] = conj.passed();
  m["alpha_error"] = conj.alpha_error;
  m["beta_error"] = conj.beta_error;
  return outcome;
}

std::string sibling(const std::string& path, const std::string& suffix) {
  std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix)).string();
}

Outcome run_cifs(const RunConfig& cfg, const Executor& executor) {
  const RationalExp exp = exponent(cfg);
  Outcome outcome;
  auto& m = outcome.metrics;
  const std::string path = output_path(cfg, "attractor.csv");
  if (cfg.c == Cx{}) {
    m["points"] = 1;
    emit(cfg, outcome, path, encode_attractor_csv(AttractorSample{{Cx{}}, 0}));
    return outcome;
  }
  const CifsData cifs = cfg.rho ? cifs_for_radius(exp, cfg.c, *cfg.rho) : build_cifs(exp, cfg.c);
  const int generations = cfg.generations.value_or(generations_for_tolerance(cifs, cfg.tolerance));
  const AttractorSample sample = hutchinson_iterate(cifs, cfg.c, generations, executor);
  m["rho"] = cifs.outer.radius;
  m["r"] = cifs.contraction;
  m["s_star"] = hausdorff_upper_bound(cifs);
  m["generations"] = generations;
  m["points"] = sample.points.size();
  emit(cfg, outcome, path, encode_attractor_csv(sample));
  emit_extra(outcome, sibling(path, "_dimension.csv"), encode_dimension_csv(cifs));
  return outcome;
}

Outcome run_motion(const RunConfig& cfg, const Executor& executor) {
  const RationalExp exp = exponent(cfg);
  std::vector<Cx> path;
  for (int k = 0; k <= cfg.steps; ++k) path.push_back(cfg.c_end * (static_cast<double>(k) / cfg.steps));
  const MotionSample sample = branched_motion_sample(exp, path, cfg.n_points, cfg.period_max, executor);
  Outcome outcome;
  auto& m = outcome.metrics;
  std::size_t collisions = 0;
  std::size_t diverged = 0;
  for (const auto& t : sample.tracks) {
    collisions += t.collision_step ? 1 : 0;
    diverged += t.diverged ? 1 : 0;
  }
  m["seeds"] = sample.base_points.size();
  m["tracks"] = sample.tracks.size();
  m["collisions"] = collisions;
  m["diverged"] = diverged;
  emit(cfg, outcome, output_path(cfg, "motion.csv"), encode_motion_csv(sample));
  return outcome;
}

Outcome dispatch(const RunConfig& cfg, const Executor& executor) {
  switch (cfg.command) {
    case Command::Julia: return run_julia(cfg, executor);
    case Command::Filled: return run_filled(cfg, executor);
    case Command::Mset: return run_mset(cfg, executor);
    case Command::Limitset: return run_limitset(cfg, executor);
    case Command::YoccozDisks: return run_yoccoz_disks(cfg);
    case Command::YoccozVerify: return run_yoccoz_verify(cfg);
    case Command::Sturmian: return run_sturmian(cfg);
    case Command::Minkowski: return run_minkowski(cfg);
    case Command::Cifs: return run_cifs(cfg, executor);
    case Command::Motion: return run_motion(cfg, executor);
  }
  throw UsageError("unknown command");
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  json summary;
  summary["command"] = std::string(to_string(cfg.command));
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  int code = 0;
  try {
    std::unique_ptr<Executor> executor;
    if (cfg.workers > 1)
      executor = std::make_unique<WorkerPool>(cfg.workers);
    else
      executor = std::make_unique<SequentialExecutor>();
    Outcome outcome = dispatch(cfg, *executor);
    summary["outputs"] = outcome.outputs;
    summary["metrics"] = std::move(outcome.metrics);
    code = outcome.exit_code;
  } catch (const UsageError& e) {
    err << "corrdyn: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    summary["error"] = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
    err << "corrdyn: " << e.what() << "\n";
    code = 1;
  }
  summary["wall_time_s"] = elapsed();
  out << summary.dump() << "\n";
  return code;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::optional<RunConfig> cfg;
  try {
    cfg = parse_config(args, out);
  } catch (const UsageError& e) {
    err << "corrdyn: " << e.what() << "\n";
    return 2;
  }
  if (!cfg) return 0;
  return run(*cfg, out, err);
}

}  // namespace corrdyn::cli
