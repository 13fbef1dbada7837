#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kp/params.hpp"
#include "kp/shapes.hpp"

namespace kp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNoSolution = 2;
inline constexpr int kExitConfig = 3;

inline constexpr std::size_t kDefaultNodes = 2048;

enum class Command { Solve, Sweep, Region, Emit };
enum class OutputFormat { Json, Csv, Svg };
enum class SweepParam { Sigma, Beta, Area, Radius };

/// Inclusive linear grid. n == 1 requires lo == hi; otherwise lo < hi and n >= 2.
struct Range {
  double lo = 0.0;
  double hi = 0.0;
  int n = 1;

  std::vector<double> values() const;
};

/// "LO:HI:N", "LO:HI" (n = 2, or 1 when LO == HI) or "V". Throws ConfigError.
Range parse_range(std::string_view text);

struct SweepSpec {
  SweepParam param = SweepParam::Sigma;
  Range range;
};

struct RegionSpec {
  Range sigma;
  Range area;
};

struct RunConfig {
  Command command = Command::Solve;
  CaseKind kind = EllipseCase{};
  Params params;
  std::optional<double> a0;  // dilation base axis; solved from the ellipse case when absent
  std::optional<SweepSpec> sweep;
  std::optional<RegionSpec> region;
  OutputFormat format = OutputFormat::Json;
  std::optional<std::string> out_path;
  bool verify = false;
  std::size_t n_nodes = kDefaultNodes;
  std::vector<ShapeKind> shapes;
  bool allow_inadmissible = false;
};

std::string_view sweep_param_name(SweepParam p) noexcept;
SweepParam parse_sweep_param(std::string_view name);
OutputFormat parse_format(std::string_view name);
ShapeKind parse_shape(std::string_view name);

/// Flat JSON config (also accepts a solve output document). Throws ConfigError
/// whose message names the offending line when it can be located.
RunConfig parse_config_json(std::string_view text);

/// Quadrature resolution from KP_NODES, or `fallback` when unset.
std::size_t nodes_from_env(std::size_t fallback = kDefaultNodes);

/// Solves one case. Dilation without a0 first solves the ellipse case.
CaseSolution solve_case(const CaseKind& kind, const Params& params, std::optional<double> a0);

struct VerificationReport {
  double stationarity = 0.0;   // max normalized directional derivative
  double el_residual = 0.0;    // max normalized reduced residual
  bool length_closed = false;
  std::size_t n_nodes = 0;
  bool passed = false;         // stationarity < 1e-5 and residual < 1e-9
};

VerificationReport verify_solution(const CaseSolution& sol, std::size_t n_nodes);

nlohmann::json solution_json(const CaseSolution& sol);

/// Full solve document; parse_config_json on it reproduces the same run.
nlohmann::json solve_document(const RunConfig& cfg, const CaseSolution& sol,
                              const std::optional<VerificationReport>& verification);

std::string format_number(double v);

std::string sweep_csv(const RunConfig& cfg);
std::string region_csv(const RunConfig& cfg);
std::string shapes_svg(const std::vector<ShapeSample>& shapes);
std::string shapes_csv(const std::vector<ShapeSample>& shapes);
nlohmann::json shapes_json(const std::vector<ShapeSample>& shapes);

/// Executes the configured command, writing to cfg.out_path or `out`.
/// Returns kExitOk, kExitNoSolution or kExitConfig.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace kp
