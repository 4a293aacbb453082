#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "corrdyn/types.hpp"

namespace corrdyn::cli {

enum class Command {
  Julia,
  Filled,
  Mset,
  Limitset,
  YoccozDisks,
  YoccozVerify,
  Sturmian,
  Minkowski,
  Cifs,
  Motion,
};

std::string_view to_string(Command command);

/// Bad flags, bad config files and invalid field combinations. Exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses "re,im" or a bare real. Throws UsageError naming `field`.
Cx parse_complex(const std::string& text, const std::string& field);

struct RunConfig {
  Command command = Command::Julia;

  // family
  std::optional<int> p;
  std::optional<int> q;
  Cx c{0.0, 0.0};
  Cx a{4.56, 0.42};

  // grid
  std::optional<Cx> center;
  std::optional<double> width;
  int px = 256;
  std::optional<int> py;

  // engine
  std::optional<int> depth;
  std::size_t budget = 1'000'000;
  std::optional<double> radius;

  std::string out;
  std::string palette = "default";
  std::size_t workers = 1;

  // julia
  std::string mode = "boundary";
  std::size_t nodes = 100'000;
  std::uint64_t rng_seed = 1;
  // mset
  std::string variant = "zero";
  int sub_px = 64;
  // limitset
  std::string coords = "original";
  double buffer = 1e-3;
  // yoccoz
  int q_max = 8;
  std::vector<std::pair<int, int>> extra;
  std::string disks = "mating";
  int degree = 2;
  int period = 1;
  // minkowski
  std::string cf;
  unsigned bits = 64;
  // cifs
  double tolerance = 1e-6;
  std::optional<double> rho;
  std::optional<int> generations;
  // motion
  Cx c_end{0.01, 0.0};
  int steps = 10;
  std::size_t n_points = 64;
  int period_max = 6;
};

/// Flags override keys of the optional --config file (flat "key = value",
/// '#' comments, keys named like the long flags). Unknown keys and invalid
/// values throw UsageError with a one-line message naming the field.
/// Returns nullopt when help was requested (the text goes to `out`).
std::optional<RunConfig> parse_config(const std::vector<std::string>& args, std::ostream& out);

/// Flat "key = value" listing of every field that affects the output;
/// readable back through --config.
std::string to_meta(const RunConfig& config);

/// Executes the command: writes the outputs, prints a one-line JSON summary
/// to `out` and diagnostics to `err`. Returns 0 on success, 1 on a
/// computational failure, 2 on a usage error.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_config + run with exit-code mapping.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace corrdyn::cli
