#ifndef VISCOWAVE_CLI_HPP
#define VISCOWAVE_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>
#include "viscowave/control_synthesis.hpp"
#include "viscowave/memory_kernel.hpp"
#include "viscowave/spectral_basis.hpp"

namespace viscowave::cli
{

inline constexpr int kSchemaVersion = 1;
inline constexpr std::uint64_t kDefaultSeed = 20261015;

// Unreadable or syntactically invalid configuration.
class ConfigParseError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Well-formed configuration with missing, mistyped or out-of-range fields.
class ConfigValidationError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

enum ExitCode
{
  kSuccess = 0,
  kFailure = 1,
  kParseError = 2,
  kValidationError = 3,
  kNumericalError = 4
};

struct KernelConfig
{
  std::string family = "zero";  // zero | constant | exponential | prony | sampled
  double value = 0.0;
  double amplitude = 0.0;
  double rate = 0.0;
  std::vector<ExponentialKernel> terms;
  std::string file;  // sampled kernels, resolved against the config directory
};

struct ControlConfig
{
  std::string kind = "zero";  // zero | constant | tone | file
  double value = 0.0;
  double amplitude = 1.0;
  double frequency = 1.0;
  double phase = 0.0;
  std::string file;
};

struct TargetConfig
{
  std::string kind = "coefficients";  // coefficients | random_smooth
  std::string weighting = "state";    // state: (w(T), w'(T)); terminal: (A w(T), w'(T))
  std::vector<double> xi;
  std::vector<double> eta;
};

struct DiagnosticsConfig
{
  std::vector<int> mode_list;  // defaults to {modes / 4, modes / 2, modes}
  int trials = 10;
  double alpha = 0.55;
  int temporal_functions = 48;
  std::string probe_control = "white_noise";  // white_noise | smooth_tone
};

struct RunConfig
{
  int schema_version = kSchemaVersion;
  Geometry geometry;
  RectangleQuadrature quadrature;
  double b = 0.0;
  KernelConfig kernel;
  double horizon = 0.0;
  int steps = 0;
  int modes = 0;
  std::uint64_t seed = kDefaultSeed;
  double regularization = 0.0;
  ControlConfig control;
  TargetConfig target;
  DiagnosticsConfig diagnostics;
  KernelConfig maccamy;  // N for the maccamy command
  std::string output_dir = "viscowave_out";
  std::filesystem::path base_dir;  // directory of the config file

  TimeGrid Grid() const { return TimeGrid(horizon, steps); }
  SpectralBasis Basis() const { return BuildBasis(geometry, modes, quadrature); }
  MemoryKernel Memory() const;
};

// Parses a JSON document; throws ConfigParseError or ConfigValidationError.
RunConfig ParseConfig(const std::string &text, const std::filesystem::path &base_dir = {});
RunConfig LoadConfig(const std::filesystem::path &path);

// The fully resolved configuration, defaults included, as JSON text.
std::string ResolvedConfigJson(const RunConfig &config);

Kernel BuildKernel(const KernelConfig &config, const std::filesystem::path &base_dir);

const std::vector<std::string> &Commands();

// Runs one command and writes its artifacts plus manifest.json into out_dir. Throws the
// configuration and numerical error types; see RunMain for the exit-code mapping.
void RunCommand(const std::string &command, const RunConfig &config,
                const std::filesystem::path &out_dir);

// Loads the config, runs the command and maps failures to exit codes, reporting them on
// stderr.
int RunMain(const std::string &command, const std::filesystem::path &config_path,
            const std::optional<std::filesystem::path> &out_dir);

}  // namespace viscowave::cli

#endif  // VISCOWAVE_CLI_HPP
