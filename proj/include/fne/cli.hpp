#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "fne/io.hpp"
#include "fne/mesh.hpp"

namespace fne::cli {

enum class Command { mesh, orbit, cesaro, verify, export_data };
enum class Suite { harmonic, block, aux, curve };
enum class ExportWhat { plot, blocks, summary, coord, l2 };

struct RunConfig {
  Command command = Command::verify;
  MeshKind kind = MeshKind::harmonic;
  double delta = 0.125;
  std::int64_t q1 = 8;
  std::size_t blocks = 4;
  // Harmonic: number of steps. Block: Cesaro cutoff, 0 for the whole mesh.
  std::size_t n = 0;
  std::vector<std::int64_t> q_override;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::size_t pair_budget = 4'000'000;
  std::string out;  // empty picks a default file name, "-" is standard output
  io::Format format = io::Format::csv;
  Suite suite = Suite::harmonic;
  ExportWhat what = ExportWhat::plot;
  double t_max = 2.0;
  std::size_t samples = 21;
  std::size_t k_max = 10;
};

constexpr std::size_t kDefaultHarmonicSteps = 10'000;

constexpr int kExitPass = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCheckFailure = 2;

// A bad flag value or an unparseable command line; `what()` is a single line
// that names the flag.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown for --help; what() is the help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flags given on the command line win over keys from --config.
RunConfig parse_args(int argc, const char* const* argv);

// Executes the pipeline. Artifacts go to files (or `out` for "-"); summary
// lines go to `out`, or to `err` when the artifact itself is on `out`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// parse_args + run with exit-code mapping.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

std::string default_output(const RunConfig& config);

}  // namespace fne::cli
