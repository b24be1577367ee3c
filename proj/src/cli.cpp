#include "viscowave/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <json.hpp>
#include "viscowave/csv.hpp"
#include "viscowave/errors.hpp"
#include "viscowave/modal_dynamics.hpp"

namespace viscowave::cli
{

using json = nlohmann::ordered_json;

namespace
{

[[noreturn]] void Invalid(const std::string &what)
{
  throw ConfigValidationError(what);
}

const json *Find(const json &object, const char *key)
{
  const auto it = object.find(key);
  return it == object.end() ? nullptr : &*it;
}

void CheckKeys(const json &object, const std::string &where, std::set<std::string> allowed)
{
  if (!object.is_object())
  {
    Invalid(where + " must be an object");
  }
  for (const auto &[key, value] : object.items())
  {
    if (!allowed.contains(key))
    {
      Invalid("unknown key '" + key + "' in " + where);
    }
  }
}

double Number(const json &object, const char *key, const std::string &where,
              std::optional<double> fallback = std::nullopt)
{
  const json *value = Find(object, key);
  if (!value)
  {
    if (!fallback)
    {
      Invalid(where + "." + key + " is required");
    }
    return *fallback;
  }
  if (!value->is_number() || !std::isfinite(value->get<double>()))
  {
    Invalid(where + "." + key + " must be a finite number");
  }
  return value->get<double>();
}

int Integer(const json &object, const char *key, const std::string &where,
            std::optional<int> fallback = std::nullopt)
{
  const json *value = Find(object, key);
  if (!value)
  {
    if (!fallback)
    {
      Invalid(where + "." + key + " is required");
    }
    return *fallback;
  }
  if (!value->is_number_integer())
  {
    Invalid(where + "." + key + " must be an integer");
  }
  return value->get<int>();
}

std::string String(const json &object, const char *key, const std::string &where,
                   std::optional<std::string> fallback = std::nullopt)
{
  const json *value = Find(object, key);
  if (!value)
  {
    if (!fallback)
    {
      Invalid(where + "." + key + " is required");
    }
    return *fallback;
  }
  if (!value->is_string())
  {
    Invalid(where + "." + key + " must be a string");
  }
  return value->get<std::string>();
}

template <typename T>
std::vector<T> Array(const json &object, const char *key, const std::string &where)
{
  const json *value = Find(object, key);
  if (!value)
  {
    return {};
  }
  if (!value->is_array())
  {
    Invalid(where + "." + key + " must be an array");
  }
  std::vector<T> out;
  for (const auto &item : *value)
  {
    if constexpr (std::is_same_v<T, int>)
    {
      if (!item.is_number_integer())
      {
        Invalid(where + "." + key + " must contain integers");
      }
    }
    else if (!item.is_number() || !std::isfinite(item.get<double>()))
    {
      Invalid(where + "." + key + " must contain finite numbers");
    }
    out.push_back(item.get<T>());
  }
  return out;
}

KernelConfig ParseKernel(const json &block, const std::string &where, bool allow_b)
{
  std::set<std::string> keys = {"family", "value", "amplitude", "rate", "terms", "file"};
  if (allow_b)
  {
    keys.insert("b");
  }
  CheckKeys(block, where, keys);
  KernelConfig k;
  k.family = String(block, "family", where, "zero");
  if (k.family == "constant")
  {
    k.value = Number(block, "value", where);
  }
  else if (k.family == "exponential")
  {
    k.amplitude = Number(block, "amplitude", where);
    k.rate = Number(block, "rate", where);
  }
  else if (k.family == "prony")
  {
    const json *terms = Find(block, "terms");
    if (!terms || !terms->is_array() || terms->empty())
    {
      Invalid(where + ".terms must be a non-empty array");
    }
    for (const auto &term : *terms)
    {
      CheckKeys(term, where + ".terms[]", {"amplitude", "rate"});
      k.terms.push_back(
        {Number(term, "amplitude", where + ".terms[]"), Number(term, "rate", where + ".terms[]")});
    }
  }
  else if (k.family == "sampled")
  {
    k.file = String(block, "file", where);
  }
  else if (k.family != "zero")
  {
    Invalid(where + ".family '" + k.family +
            "' is not one of zero, constant, exponential, prony, sampled");
  }
  return k;
}

json KernelJson(const KernelConfig &k)
{
  json out = {{"family", k.family}};
  if (k.family == "constant")
  {
    out["value"] = k.value;
  }
  else if (k.family == "exponential")
  {
    out["amplitude"] = k.amplitude;
    out["rate"] = k.rate;
  }
  else if (k.family == "prony")
  {
    out["terms"] = json::array();
    for (const auto &term : k.terms)
    {
      out["terms"].push_back({{"amplitude", term.amplitude}, {"rate", term.rate}});
    }
  }
  else if (k.family == "sampled")
  {
    out["file"] = k.file;
  }
  return out;
}

std::filesystem::path Resolve(const std::filesystem::path &base, const std::string &file)
{
  const std::filesystem::path path(file);
  return path.is_absolute() || base.empty() ? path : base / path;
}

void CheckModeList(const std::vector<int> &list, int basis_size)
{
  if (list.empty())
  {
    Invalid("diagnostics.mode_list is empty");
  }
  for (std::size_t i = 0; i < list.size(); i++)
  {
    if (list[i] < 1 || list[i] > basis_size)
    {
      Invalid("diagnostics.mode_list entry " + std::to_string(list[i]) +
              " is outside the basis of " + std::to_string(basis_size) + " modes");
    }
    if (i > 0 && list[i] <= list[i - 1])
    {
      Invalid("diagnostics.mode_list must be increasing");
    }
  }
}

void Validate(RunConfig &config)
{
  if (config.schema_version != kSchemaVersion)
  {
    Invalid("unsupported schema_version " + std::to_string(config.schema_version) +
            " (expected " + std::to_string(kSchemaVersion) + ")");
  }
  try
  {
    config.geometry.Validate();
    (void)config.Grid();
    (void)BuildKernel(config.kernel, config.base_dir);
    if (config.maccamy.family != "zero" || !config.maccamy.file.empty())
    {
      (void)BuildKernel(config.maccamy, config.base_dir);
    }
  }
  catch (const std::invalid_argument &e)
  {
    Invalid(e.what());
  }
  if (config.modes < 1)
  {
    Invalid("modes must be at least 1");
  }
  if (config.quadrature.gauss_nodes < 1 || config.quadrature.panels < 1)
  {
    Invalid("geometry.quadrature needs at least one node and one panel");
  }
  if (config.regularization < 0.0)
  {
    Invalid("regularization must be nonnegative");
  }
  const int basis_size = config.geometry.kind == GeometryKind::Interval
                           ? config.modes
                           : config.modes * config.modes;
  auto &d = config.diagnostics;
  if (d.mode_list.empty())
  {
    for (int m : {basis_size / 4, basis_size / 2, basis_size})
    {
      if (m >= 1 && (d.mode_list.empty() || m > d.mode_list.back()))
      {
        d.mode_list.push_back(m);
      }
    }
  }
  CheckModeList(d.mode_list, basis_size);
  if (d.trials < 1)
  {
    Invalid("diagnostics.trials must be at least 1");
  }
  if (d.temporal_functions < 1)
  {
    Invalid("diagnostics.temporal_functions must be at least 1");
  }
  if (d.probe_control != "white_noise" && d.probe_control != "smooth_tone")
  {
    Invalid("diagnostics.probe_control must be white_noise or smooth_tone");
  }

  const auto &c = config.control;
  static const std::set<std::string> controls = {"zero", "constant", "tone", "file"};
  if (!controls.contains(c.kind))
  {
    Invalid("control.kind must be zero, constant, tone or file");
  }
  if (c.kind == "file" && !std::filesystem::exists(Resolve(config.base_dir, c.file)))
  {
    Invalid("control file '" + c.file + "' does not exist");
  }

  const auto &t = config.target;
  if (t.kind != "coefficients" && t.kind != "random_smooth")
  {
    Invalid("target.kind must be coefficients or random_smooth");
  }
  if (t.weighting != "state" && t.weighting != "terminal")
  {
    Invalid("target.weighting must be state or terminal");
  }
  if (t.xi.size() > static_cast<std::size_t>(basis_size) ||
      t.eta.size() > static_cast<std::size_t>(basis_size))
  {
    Invalid("target has more coefficients than the basis has modes");
  }
  if (config.output_dir.empty())
  {
    Invalid("output_dir must not be empty");
  }
}

std::ofstream OpenOutput(const std::filesystem::path &path)
{
  std::ofstream os(path);
  if (!os)
  {
    throw std::runtime_error("cannot write " + path.string());
  }
  return os;
}

BoundaryControl LoadControl(const std::filesystem::path &path, const SpectralBasis &basis,
                            const TimeGrid &grid)
{
  const auto table = csv::ReadFile(path.string());
  if (table.rows.size() != grid.Size() ||
      table.rows.front().size() != static_cast<std::size_t>(basis.NodeCount()) + 1)
  {
    throw ConfigValidationError(path.string() + ": control needs " + std::to_string(grid.Size()) +
                                " rows of t and " + std::to_string(basis.NodeCount()) +
                                " node values");
  }
  BoundaryControl f = BoundaryControl::Zero(basis, grid);
  for (std::size_t j = 0; j < table.rows.size(); j++)
  {
    if (std::abs(table.rows[j][0] - grid.Time(static_cast<int>(j))) > 1e-9 * grid.Horizon())
    {
      throw ConfigValidationError(path.string() + ": time column does not match the grid");
    }
    for (int q = 0; q < basis.NodeCount(); q++)
    {
      f.values(q, static_cast<Eigen::Index>(j)) = table.rows[j][q + 1];
    }
  }
  return f;
}

BoundaryControl BuildControl(const RunConfig &config, const SpectralBasis &basis,
                             const TimeGrid &grid)
{
  const auto &c = config.control;
  BoundaryControl f = BoundaryControl::Zero(basis, grid);
  if (c.kind == "constant")
  {
    f.values.setConstant(c.value);
  }
  else if (c.kind == "tone")
  {
    for (Eigen::Index j = 0; j < f.values.cols(); j++)
    {
      const double t = grid.Time(static_cast<int>(j));
      f.values.col(j).setConstant(
        c.amplitude * std::sin(2.0 * std::numbers::pi * c.frequency * t + c.phase));
    }
  }
  else if (c.kind == "file")
  {
    f = LoadControl(Resolve(config.base_dir, c.file), basis, grid);
  }
  return f;
}

// Terminal target (A w(T), w'(T)) on the whole basis.
StatePair BuildTarget(const RunConfig &config, const SpectralBasis &basis)
{
  const auto &t = config.target;
  StatePair state = StatePair::Zero(basis.Size());
  if (t.kind == "random_smooth")
  {
    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int n = 0; n < basis.Size(); n++)
    {
      state.xi[n] = normal(rng) / ((n + 1.0) * (n + 1.0));
      state.eta[n] = normal(rng) / (n + 1.0);
    }
  }
  else
  {
    std::copy(t.xi.begin(), t.xi.end(), state.xi.begin());
    std::copy(t.eta.begin(), t.eta.end(), state.eta.begin());
  }
  return t.weighting == "state" ? WeightedTarget(basis, state) : state;
}

json JsonNumber(double value)
{
  return std::isfinite(value) ? json(value) : json(nullptr);
}

class Report
{
public:
  Report(const RunConfig &config, std::filesystem::path out) : config_(config), out_(std::move(out))
  {
    std::filesystem::create_directories(out_);
    summary_["geometry"] = config.geometry.Describe();
    summary_["kernel"] = config.Memory().Describe();
    summary_["T"] = config.horizon;
    summary_["M"] = config.modes;
    summary_["seed"] = config.seed;
  }

  std::ofstream Csv(const std::string &name)
  {
    outputs_.push_back(name);
    return OpenOutput(out_ / name);
  }

  json &Summary() { return summary_; }

  void Finish(const std::string &command)
  {
    outputs_.push_back("summary.json");
    OpenOutput(out_ / "summary.json") << summary_.dump(2) << "\n";
    json manifest;
    manifest["command"] = command;
    manifest["config"] = json::parse(ResolvedConfigJson(config_));
    manifest["outputs"] = outputs_;
    OpenOutput(out_ / "manifest.json") << manifest.dump(2) << "\n";
  }

private:
  const RunConfig &config_;
  std::filesystem::path out_;
  json summary_;
  std::vector<std::string> outputs_;
};

void WriteTerminal(std::ostream &os, const SpectralBasis &basis, const StatePair &terminal,
                   const StatePair *target)
{
  std::vector<std::string> columns = {"index", "mu", "xi", "eta"};
  if (target)
  {
    columns.insert(columns.end(), {"target_xi", "target_eta"});
  }
  csv::WriteHeader(os, columns);
  for (int n = 0; n < basis.Size(); n++)
  {
    std::vector<double> row = {n + 1.0, basis.Mu(n), terminal.xi[n], terminal.eta[n]};
    if (target)
    {
      row.insert(row.end(), {target->xi[n], target->eta[n]});
    }
    csv::WriteRow(os, row);
  }
}

void WriteControl(std::ostream &os, const TimeGrid &grid, const BoundaryControl &f)
{
  std::vector<std::string> columns = {"t"};
  for (Eigen::Index q = 0; q < f.values.rows(); q++)
  {
    columns.push_back("node_" + std::to_string(q + 1));
  }
  csv::WriteHeader(os, columns);
  std::vector<double> row(f.values.rows() + 1);
  for (Eigen::Index j = 0; j < f.values.cols(); j++)
  {
    row[0] = grid.Time(static_cast<int>(j));
    for (Eigen::Index q = 0; q < f.values.rows(); q++)
    {
      row[q + 1] = f.values(q, j);
    }
    csv::WriteRow(os, row);
  }
}

void Simulate(const RunConfig &config, Report &report)
{
  const auto basis = config.Basis();
  const auto grid = config.Grid();
  const auto f = BuildControl(config, basis, grid);
  const auto result = ForwardSimulate(basis, config.Memory(), f, grid);
  {
    auto os = report.Csv("terminal.csv");
    WriteTerminal(os, basis, result.terminal, nullptr);
  }
  {
    auto os = report.Csv("trajectory_w.csv");
    WriteSeriesCsv(os, grid, result.trajectory.w, "mode");
  }
  {
    auto os = report.Csv("trajectory_dw.csv");
    WriteSeriesCsv(os, grid, result.trajectory.dw, "mode");
  }
  report.Summary()["control_norm"] = BoundaryNorm(basis, grid, f);
  report.Summary()["terminal_norm"] = SobolevNorm(result.terminal, basis, 0.0);
}

void Synthesize(const RunConfig &config, Report &report)
{
  const auto basis = config.Basis();
  const auto grid = config.Grid();
  const auto memory = config.Memory();
  const auto target = BuildTarget(config, basis);
  auto gs = AssembleGram(basis, memory, grid, basis.Size());
  gs.regularization = config.regularization;
  if (gs.below_control_time)
  {
    std::cerr << "warning: horizon " << grid.Horizon() << " does not exceed the control time "
              << ControlTimeLowerBound(basis.GetGeometry()) << "\n";
  }
  const auto synthesis = SolveMinNormControl(gs, basis, memory, grid, target);
  const auto check = VerifyControl(basis, memory, grid, synthesis.control, target);
  {
    auto os = report.Csv("control.csv");
    WriteControl(os, grid, synthesis.control);
  }
  {
    auto os = report.Csv("coefficients.csv");
    csv::WriteHeader(os, {"index", "coefficient"});
    for (Eigen::Index i = 0; i < synthesis.coefficients.size(); i++)
    {
      csv::WriteRow(os, std::vector<double>{i + 1.0, synthesis.coefficients(i)});
    }
  }
  {
    auto os = report.Csv("gram_spectrum.csv");
    csv::WriteHeader(os, {"index", "eigenvalue"});
    for (Eigen::Index i = 0; i < gs.eigenvalues.size(); i++)
    {
      csv::WriteRow(os, std::vector<double>{i + 1.0, gs.eigenvalues(i)});
    }
  }
  {
    auto os = report.Csv("terminal.csv");
    WriteTerminal(os, basis, check.terminal, &target);
  }
  auto &s = report.Summary();
  s["min_eig"] = gs.min_eigenvalue;
  s["cond"] = JsonNumber(gs.condition_number);
  s["terminal_error"] = check.relative_error;
  s["terminal_error_abs"] = check.absolute_error;
  s["control_norm"] = BoundaryNorm(basis, grid, synthesis.control);
  s["residual"] = synthesis.residual;
  s["regularization"] = gs.regularization;
  s["below_control_time"] = gs.below_control_time;
}

void Verify(const RunConfig &config, Report &report)
{
  const auto basis = config.Basis();
  const auto grid = config.Grid();
  const auto target = BuildTarget(config, basis);
  const auto f = BuildControl(config, basis, grid);
  const auto check = VerifyControl(basis, config.Memory(), grid, f, target);
  {
    auto os = report.Csv("terminal.csv");
    WriteTerminal(os, basis, check.terminal, &target);
  }
  report.Summary()["terminal_error"] = check.relative_error;
  report.Summary()["terminal_error_abs"] = check.absolute_error;
  report.Summary()["control_norm"] = BoundaryNorm(basis, grid, f);
}

void GramSpectrum(const RunConfig &config, Report &report)
{
  const auto basis = config.Basis();
  const auto rows =
    RieszFisherDiagnostic(basis, config.Memory(), config.Grid(), config.diagnostics.mode_list);
  auto os = report.Csv("gram_spectrum.csv");
  csv::WriteHeader(os, {"modes", "min_eigenvalue", "max_eigenvalue", "condition_number"});
  for (const auto &row : rows)
  {
    csv::WriteRow(os, std::vector<double>{static_cast<double>(row.modes), row.min_eigenvalue,
                                          row.max_eigenvalue, row.condition_number});
  }
  report.Summary()["min_eig"] = rows.back().min_eigenvalue;
  report.Summary()["cond"] = JsonNumber(rows.back().condition_number);
}

BoundaryControl RandomSmoothControl(const SpectralBasis &basis, const TimeGrid &grid,
                                    std::mt19937_64 &rng)
{
  std::normal_distribution<double> normal(0.0, 1.0);
  BoundaryControl f = BoundaryControl::Zero(basis, grid);
  const double omega = std::numbers::pi / grid.Horizon();
  for (Eigen::Index q = 0; q < f.values.rows(); q++)
  {
    for (int k = 0; k < 6; k++)
    {
      const double a = normal(rng) / (k + 1.0), c = normal(rng) / (k + 1.0);
      for (Eigen::Index j = 0; j < f.values.cols(); j++)
      {
        const double t = grid.Time(static_cast<int>(j));
        f.values(q, j) += a * std::cos(k * omega * t) + c * std::sin((k + 1) * omega * t);
      }
    }
  }
  return f;
}

void Duality(const RunConfig &config, Report &report)
{
  const auto basis = config.Basis();
  const auto memory = config.Memory();
  const auto grid = config.Grid();
  const bool halve = config.steps % 2 == 0 && config.steps >= 4;
  std::mt19937_64 rng(config.seed);
  auto os = report.Csv("duality.csv");
  csv::WriteHeader(os, {"trial", "lhs", "rhs", "rel_gap", "rel_gap_half_resolution", "order"});
  double worst = 0.0, worst_order = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < config.diagnostics.trials; trial++)
  {
    const auto seed = rng();
    std::mt19937_64 local(seed);
    const auto f = RandomSmoothControl(basis, grid, local);
    std::normal_distribution<double> normal(0.0, 1.0);
    StatePair v = StatePair::Zero(basis.Size());
    for (int n = 0; n < basis.Size(); n++)
    {
      v.xi[n] = normal(local);
      v.eta[n] = normal(local);
    }
    const auto result = DualityCheck(basis, memory, grid, f, v);
    double coarse_gap = std::numeric_limits<double>::quiet_NaN();
    double order = std::numeric_limits<double>::quiet_NaN();
    if (halve)
    {
      const TimeGrid coarse(grid.Horizon(), grid.Steps() / 2);
      std::mt19937_64 again(seed);
      const auto fc = RandomSmoothControl(basis, coarse, again);
      coarse_gap = DualityCheck(basis, memory, coarse, fc, v).rel_gap;
      order = std::log2(coarse_gap / result.rel_gap);
      worst_order = std::min(worst_order, order);
    }
    worst = std::max(worst, result.rel_gap);
    csv::WriteRow(os, std::vector<double>{trial + 1.0, result.lhs, result.rhs, result.rel_gap,
                                          coarse_gap, order});
  }
  report.Summary()["max_rel_gap"] = worst;
  report.Summary()["min_order"] = JsonNumber(worst_order);
}

void MacCamy(const RunConfig &config, Report &report)
{
  const auto grid = config.Grid();
  const Kernel n = BuildKernel(config.maccamy, config.base_dir);
  const auto system = TransformedMemorySystem(n, grid);
  const auto residuals = CheckResolvent(n, system.resolvent, grid);
  {
    auto os = report.Csv("R.csv");
    csv::WriteHeader(os, {"t", "R", "R_prime", "K"});
    for (int j = 0; j <= grid.Steps(); j++)
    {
      csv::WriteRow(os, std::vector<double>{grid.Time(j), system.resolvent[j],
                                            system.resolvent_derivative[j], system.K.values[j]});
    }
  }
  auto &s = report.Summary();
  s["N"] = n.Name();
  s["velocity_coeff"] = system.velocity_coeff;
  s["b"] = system.b;
  s["data_forcing"] = system.data_forcing;
  s["residual_nodal"] = residuals.nodal;
  s["residual_midpoint"] = residuals.midpoint;
  s["commutator"] = residuals.commutator;
  s["degraded_accuracy"] = system.degraded_accuracy;
  s["warnings"] = system.warnings;
  for (const auto &warning : system.warnings)
  {
    std::cerr << "warning: " << warning << "\n";
  }
}

void Probes(const RunConfig &config, Report &report)
{
  const auto basis = config.Basis();
  const auto memory = config.Memory();
  const auto grid = config.Grid();
  const auto &d = config.diagnostics;
  {
    auto os = report.Csv("basis.csv");
    WriteBasisCsv(os, basis);
  }
  const auto trace = TraceEstimateCheck(basis);
  const auto gronwall = GronwallBoundCheck(basis, memory, grid, d.trials, config.seed);
  {
    auto os = report.Csv("gronwall.csv");
    csv::WriteHeader(os, {"index", "mu", "max_abs_psi", "running_max"});
    for (int n = 0; n < basis.Size(); n++)
    {
      csv::WriteRow(os, std::vector<double>{n + 1.0, basis.Mu(n), gronwall.per_mode_max[n],
                                            gronwall.running_max[n]});
    }
  }
  const auto growth = NormGrowthProbe(basis, memory, grid, d.mode_list, d.trials, config.seed,
                                      d.alpha,
                                      d.probe_control == "white_noise" ? ProbeControl::WhiteNoise
                                                                       : ProbeControl::SmoothTone);
  {
    auto os = report.Csv("norm_growth.csv");
    csv::WriteHeader(os, {"modes", "ratio", "weighted_ratio"});
    for (const auto &row : growth)
    {
      csv::WriteRow(os, std::vector<double>{static_cast<double>(row.modes), row.ratio,
                                            row.weighted_ratio});
    }
  }
  const auto compact =
    PerturbationCompactnessProbe(basis, memory, grid, basis.Size(), d.temporal_functions);
  {
    auto os = report.Csv("compactness.csv");
    csv::WriteHeader(os, {"index", "singular_value"});
    for (Eigen::Index i = 0; i < compact.singular_values.size(); i++)
    {
      csv::WriteRow(os, std::vector<double>{i + 1.0, compact.singular_values(i)});
    }
  }
  auto &s = report.Summary();
  s["trace_ratio_max"] = trace.max_ratio;
  s["weyl_constant"] = WeylConstant(basis);
  s["control_time_lower_bound"] = ControlTimeLowerBound(basis.GetGeometry());
  s["gronwall_m_observed"] = gronwall.m_observed;
  s["sigma_1"] = compact.singular_values.size() > 0 ? compact.singular_values(0) : 0.0;
}

}  // namespace

MemoryKernel RunConfig::Memory() const
{
  return MemoryKernel{b, BuildKernel(kernel, base_dir)};
}

Kernel BuildKernel(const KernelConfig &k, const std::filesystem::path &base_dir)
{
  if (k.family == "constant")
  {
    return Kernel(ConstantKernel{k.value});
  }
  if (k.family == "exponential")
  {
    return Kernel(ExponentialKernel{k.amplitude, k.rate});
  }
  if (k.family == "prony")
  {
    return Kernel(PronyKernel{k.terms});
  }
  if (k.family == "sampled")
  {
    const auto path = Resolve(base_dir, k.file);
    if (!std::filesystem::exists(path))
    {
      throw std::invalid_argument("sampled kernel file '" + path.string() + "' does not exist");
    }
    return Kernel(LoadSampledKernel(path.string()));
  }
  return Kernel();
}

RunConfig ParseConfig(const std::string &text, const std::filesystem::path &base_dir)
{
  json root;
  try
  {
    root = json::parse(text);
  }
  catch (const json::parse_error &e)
  {
    throw ConfigParseError(std::string("invalid JSON: ") + e.what());
  }
  CheckKeys(root, "config",
            {"schema_version", "geometry", "kernel", "grid", "modes", "seed", "regularization",
             "control", "target", "diagnostics", "maccamy", "output_dir"});

  RunConfig config;
  config.base_dir = base_dir;
  config.schema_version = Integer(root, "schema_version", "config");

  const json *geometry = Find(root, "geometry");
  if (!geometry)
  {
    Invalid("config.geometry is required");
  }
  CheckKeys(*geometry, "geometry", {"kind", "lengths", "quadrature"});
  const std::string kind = String(*geometry, "kind", "geometry");
  if (kind != "interval" && kind != "rectangle")
  {
    Invalid("geometry.kind must be interval or rectangle");
  }
  config.geometry.kind = kind == "interval" ? GeometryKind::Interval : GeometryKind::Rectangle;
  config.geometry.lengths = Array<double>(*geometry, "lengths", "geometry");
  if (const json *quad = Find(*geometry, "quadrature"))
  {
    CheckKeys(*quad, "geometry.quadrature", {"gauss_nodes", "panels"});
    config.quadrature.gauss_nodes = Integer(*quad, "gauss_nodes", "geometry.quadrature", 8);
    config.quadrature.panels = Integer(*quad, "panels", "geometry.quadrature", 1);
  }

  if (const json *kernel = Find(root, "kernel"))
  {
    config.kernel = ParseKernel(*kernel, "kernel", true);
    config.b = Number(*kernel, "b", "kernel", 0.0);
  }

  const json *grid = Find(root, "grid");
  if (!grid)
  {
    Invalid("config.grid is required");
  }
  CheckKeys(*grid, "grid", {"T", "steps", "dt"});
  config.horizon = Number(*grid, "T", "grid");
  if (Find(*grid, "steps") && Find(*grid, "dt"))
  {
    Invalid("grid takes either steps or dt, not both");
  }
  if (Find(*grid, "dt"))
  {
    const double dt = Number(*grid, "dt", "grid");
    if (!(dt > 0.0) || !(config.horizon > 0.0))
    {
      Invalid("grid.T and grid.dt must be positive");
    }
    config.steps = static_cast<int>(std::lround(config.horizon / dt));
  }
  else
  {
    config.steps = Integer(*grid, "steps", "grid");
  }

  config.modes = Integer(root, "modes", "config");
  if (const json *seed = Find(root, "seed"))
  {
    if (!seed->is_number_unsigned())
    {
      Invalid("config.seed must be a nonnegative integer");
    }
    config.seed = seed->get<std::uint64_t>();
  }
  config.regularization = Number(root, "regularization", "config", 0.0);

  if (const json *control = Find(root, "control"))
  {
    CheckKeys(*control, "control", {"kind", "value", "amplitude", "frequency", "phase", "file"});
    auto &c = config.control;
    c.kind = String(*control, "kind", "control", "zero");
    c.value = Number(*control, "value", "control", 0.0);
    c.amplitude = Number(*control, "amplitude", "control", 1.0);
    c.frequency = Number(*control, "frequency", "control", 1.0);
    c.phase = Number(*control, "phase", "control", 0.0);
    c.file = String(*control, "file", "control", "");
  }
  if (const json *target = Find(root, "target"))
  {
    CheckKeys(*target, "target", {"kind", "weighting", "xi", "eta"});
    auto &t = config.target;
    t.kind = String(*target, "kind", "target", "coefficients");
    t.weighting = String(*target, "weighting", "target", "state");
    t.xi = Array<double>(*target, "xi", "target");
    t.eta = Array<double>(*target, "eta", "target");
  }
  if (const json *diagnostics = Find(root, "diagnostics"))
  {
    CheckKeys(*diagnostics, "diagnostics",
              {"mode_list", "trials", "alpha", "temporal_functions", "probe_control"});
    auto &d = config.diagnostics;
    d.mode_list = Array<int>(*diagnostics, "mode_list", "diagnostics");
    d.trials = Integer(*diagnostics, "trials", "diagnostics", d.trials);
    d.alpha = Number(*diagnostics, "alpha", "diagnostics", d.alpha);
    d.temporal_functions =
      Integer(*diagnostics, "temporal_functions", "diagnostics", d.temporal_functions);
    d.probe_control = String(*diagnostics, "probe_control", "diagnostics", d.probe_control);
  }
  if (const json *maccamy = Find(root, "maccamy"))
  {
    CheckKeys(*maccamy, "maccamy", {"N"});
    const json *n = Find(*maccamy, "N");
    if (!n)
    {
      Invalid("maccamy.N is required");
    }
    config.maccamy = ParseKernel(*n, "maccamy.N", false);
  }
  config.output_dir = String(root, "output_dir", "config", config.output_dir);

  Validate(config);
  return config;
}

RunConfig LoadConfig(const std::filesystem::path &path)
{
  std::ifstream is(path);
  if (!is)
  {
    throw ConfigParseError("cannot read config file " + path.string());
  }
  std::ostringstream text;
  text << is.rdbuf();
  return ParseConfig(text.str(), path.parent_path());
}

std::string ResolvedConfigJson(const RunConfig &config)
{
  json out;
  out["schema_version"] = config.schema_version;
  out["geometry"] = {
    {"kind", config.geometry.kind == GeometryKind::Interval ? "interval" : "rectangle"},
    {"lengths", config.geometry.lengths},
    {"quadrature",
     {{"gauss_nodes", config.quadrature.gauss_nodes}, {"panels", config.quadrature.panels}}}};
  json kernel = KernelJson(config.kernel);
  kernel["b"] = config.b;
  out["kernel"] = kernel;
  out["grid"] = {{"T", config.horizon}, {"steps", config.steps}};
  out["modes"] = config.modes;
  out["seed"] = config.seed;
  out["regularization"] = config.regularization;
  const auto &c = config.control;
  out["control"] = {{"kind", c.kind},         {"value", c.value}, {"amplitude", c.amplitude},
                    {"frequency", c.frequency}, {"phase", c.phase}, {"file", c.file}};
  const auto &t = config.target;
  out["target"] = {{"kind", t.kind}, {"weighting", t.weighting}, {"xi", t.xi}, {"eta", t.eta}};
  const auto &d = config.diagnostics;
  out["diagnostics"] = {{"mode_list", d.mode_list},
                        {"trials", d.trials},
                        {"alpha", d.alpha},
                        {"temporal_functions", d.temporal_functions},
                        {"probe_control", d.probe_control}};
  out["maccamy"] = {{"N", KernelJson(config.maccamy)}};
  out["output_dir"] = config.output_dir;
  return out.dump(2);
}

const std::vector<std::string> &Commands()
{
  static const std::vector<std::string> commands = {
    "simulate", "synthesize", "verify", "gram-spectrum", "duality-check", "maccamy", "probes"};
  return commands;
}

void RunCommand(const std::string &command, const RunConfig &config,
                const std::filesystem::path &out_dir)
{
  Report report(config, out_dir);
  if (command == "simulate")
  {
    Simulate(config, report);
  }
  else if (command == "synthesize")
  {
    Synthesize(config, report);
  }
  else if (command == "verify")
  {
    Verify(config, report);
  }
  else if (command == "gram-spectrum")
  {
    GramSpectrum(config, report);
  }
  else if (command == "duality-check")
  {
    Duality(config, report);
  }
  else if (command == "maccamy")
  {
    MacCamy(config, report);
  }
  else if (command == "probes")
  {
    Probes(config, report);
  }
  else
  {
    throw std::invalid_argument("unknown command '" + command + "'");
  }
  report.Finish(command);
}

int RunMain(const std::string &command, const std::filesystem::path &config_path,
            const std::optional<std::filesystem::path> &out_dir)
{
  try
  {
    const RunConfig config = LoadConfig(config_path);
    RunCommand(command, config,
               out_dir ? *out_dir : Resolve(config.base_dir, config.output_dir));
    return kSuccess;
  }
  catch (const ConfigParseError &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return kParseError;
  }
  catch (const ConfigValidationError &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return kValidationError;
  }
  catch (const IllPosedSystemError &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericalError;
  }
  catch (const StepSizeError &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericalError;
  }
  catch (const std::invalid_argument &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return kValidationError;
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace viscowave::cli
