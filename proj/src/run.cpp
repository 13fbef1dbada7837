#include "kp/run.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <regex>
#include <sstream>
#include <thread>

#include "kp/errors.hpp"
#include "kp/variational.hpp"

namespace kp {

using nlohmann::json;

namespace {

constexpr double kStationarityGate = 1e-5;
constexpr double kResidualGate = 1e-9;
constexpr double kPxPerUnit = 100.0;

// 1-based line of the first `"key":` in text, 0 when absent.
std::size_t line_of_key(std::string_view text, std::string_view key) {
  const std::regex pattern("\"" + std::string(key) + "\"\\s*:");
  std::cmatch m;
  if (!std::regex_search(text.data(), text.data() + text.size(), m, pattern)) return 0;
  const auto pos = static_cast<std::size_t>(m.position(0));
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n'));
}

double parse_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ConfigError("invalid number '" + std::string(s) + "' in " + std::string(what));
  }
  return v;
}

// Runs body(i) for i in [0, n) on a few worker threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(n, 1));
  if (workers <= 1 || n < 4) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < n; i += workers) body(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double& param_ref(Params& p, SweepParam which) {
  switch (which) {
    case SweepParam::Sigma: return p.sigma;
    case SweepParam::Beta: return p.beta;
    case SweepParam::Area: return p.area;
    case SweepParam::Radius: return p.radius;
  }
  return p.sigma;
}

std::string csv_bool(bool b) { return b ? "true" : "false"; }

std::string join(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += fields[i];
  }
  return line;
}

void write_output(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (!cfg.out_path) {
    out << text;
    return;
  }
  std::ofstream file(*cfg.out_path);
  if (!file) throw ConfigError("cannot open output file '" + *cfg.out_path + "'");
  file << text;
}

json flags_json(const ConstraintFlags& f) {
  return {{"well_defined", f.well_defined},
          {"no_cusp", f.no_cusp},
          {"no_interpenetration", f.no_interpenetration},
          {"positive", f.positive},
          {"admissible", f.admissible()}};
}

json candidates_json(const std::vector<OvalCandidate>& cands) {
  json arr = json::array();
  for (const auto& c : cands) {
    arr.push_back({{"a", c.point.a},
                   {"b", c.point.b},
                   {"multiplicity", c.point.multiplicity},
                   {"constraints", flags_json(c.flags)}});
  }
  return arr;
}

// Keys a solve document carries besides the configuration itself.
bool is_output_key(const std::string& key) {
  static const std::vector<std::string> keys{"solution", "verification", "status", "admissible",
                                             "warnings", "candidates", "length"};
  return std::find(keys.begin(), keys.end(), key) != keys.end();
}

double require_number(const json& doc, const char* key, std::string_view text) {
  if (!doc.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
  const json& v = doc.at(key);
  if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number", line_of_key(text, key));
  return v.get<double>();
}

Range range_from_json(const json& v, const char* key, std::string_view text) {
  if (v.is_string()) {
    try {
      return parse_range(v.get<std::string>());
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), line_of_key(text, key));
    }
  }
  if (v.is_object() && v.contains("lo") && v.contains("hi")) {
    Range r{v.at("lo").get<double>(), v.at("hi").get<double>(), v.value("n", 2)};
    try {
      r.values();
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), line_of_key(text, key));
    }
    return r;
  }
  throw ConfigError(std::string("'") + key + "' must be \"LO:HI:N\" or {lo, hi, n}", line_of_key(text, key));
}

}  // namespace

std::vector<double> Range::values() const {
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw ConfigError("range bounds must be finite");
  if (n == 1) {
    if (lo != hi) throw ConfigError("a single-point range needs LO == HI");
    return {lo};
  }
  if (n < 2) throw ConfigError("range needs N >= 2");
  if (!(lo < hi)) throw ConfigError("range needs LO < HI");
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  v.back() = hi;
  return v;
}

Range parse_range(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = text.find(':', start);
    parts.push_back(text.substr(start, colon == std::string_view::npos ? colon : colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  Range r;
  if (parts.size() == 1) {
    r.lo = r.hi = parse_double(parts[0], "range");
    r.n = 1;
  } else if (parts.size() == 2 || parts.size() == 3) {
    r.lo = parse_double(parts[0], "range");
    r.hi = parse_double(parts[1], "range");
    if (parts.size() == 3) {
      r.n = static_cast<int>(parse_double(parts[2], "range"));
      if (static_cast<double>(r.n) != parse_double(parts[2], "range")) {
        throw ConfigError("range count must be an integer");
      }
    } else {
      r.n = r.lo == r.hi ? 1 : 2;
    }
  } else {
    throw ConfigError("range must look like LO:HI:N");
  }
  r.values();
  return r;
}

std::string_view sweep_param_name(SweepParam p) noexcept {
  switch (p) {
    case SweepParam::Sigma: return "sigma";
    case SweepParam::Beta: return "beta";
    case SweepParam::Area: return "area";
    case SweepParam::Radius: return "radius";
  }
  return "sigma";
}

SweepParam parse_sweep_param(std::string_view name) {
  if (name == "sigma") return SweepParam::Sigma;
  if (name == "beta") return SweepParam::Beta;
  if (name == "area") return SweepParam::Area;
  if (name == "radius") return SweepParam::Radius;
  throw ConfigError("sweep parameter must be sigma, beta, area or radius");
}

OutputFormat parse_format(std::string_view name) {
  if (name == "json") return OutputFormat::Json;
  if (name == "csv") return OutputFormat::Csv;
  if (name == "svg") return OutputFormat::Svg;
  throw ConfigError("output format must be json, csv or svg");
}

ShapeKind parse_shape(std::string_view name) {
  if (name == "section" || name == "cross_section") return ShapeKind::CrossSection;
  if (name == "midline") return ShapeKind::Midline;
  if (name == "film" || name == "scaled_curve") return ShapeKind::ScaledCurve;
  if (name == "tube") return ShapeKind::Tube;
  throw ConfigError("shape must be section, midline, film or tube");
}

RunConfig parse_config_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 0;
    std::cmatch m;
    const std::string msg = e.what();
    if (std::regex_search(msg.c_str(), m, std::regex("line (\\d+)"))) {
      line = static_cast<std::size_t>(std::stoul(m[1].str()));
    }
    throw ConfigError(std::string("malformed JSON: ") + e.what(), line);
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object", 1);

  static const std::vector<std::string> known{"command", "case", "alpha", "beta", "sigma", "area",
                                              "radius", "a0", "verify", "n_nodes", "output",
                                              "sweep", "region", "emit"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end() && !is_output_key(key)) {
      throw ConfigError("unknown key '" + key + "'", line_of_key(text, key));
    }
  }

  RunConfig cfg;
  try {
    if (!doc.contains("case") || !doc.at("case").is_string()) {
      throw ConfigError("'case' must be one of ellipse, dilation, oval", line_of_key(text, "case"));
    }
    try {
      cfg.kind = parse_case(doc.at("case").get<std::string>());
    } catch (const DomainError& e) {
      throw ConfigError(e.what(), line_of_key(text, "case"));
    }
    cfg.params.alpha = doc.contains("alpha") ? require_number(doc, "alpha", text) : 1.0;
    cfg.params.beta = require_number(doc, "beta", text);
    cfg.params.sigma = require_number(doc, "sigma", text);
    cfg.params.area = require_number(doc, "area", text);
    cfg.params.radius = require_number(doc, "radius", text);
    try {
      validate(cfg.params);
    } catch (const DomainError& e) {
      const std::string msg = e.what();
      throw ConfigError(msg, line_of_key(text, msg.substr(0, msg.find(' '))));
    }
    if (doc.contains("a0")) {
      cfg.a0 = require_number(doc, "a0", text);
      if (!(*cfg.a0 > 0.0)) throw ConfigError("a0 must be positive", line_of_key(text, "a0"));
    }
    if (doc.contains("verify")) {
      if (!doc.at("verify").is_boolean()) throw ConfigError("'verify' must be a boolean", line_of_key(text, "verify"));
      cfg.verify = doc.at("verify").get<bool>();
    }
    if (doc.contains("n_nodes")) {
      const json& v = doc.at("n_nodes");
      if (!v.is_number_unsigned()) throw ConfigError("'n_nodes' must be a positive integer", line_of_key(text, "n_nodes"));
      cfg.n_nodes = v.get<std::size_t>();
      if (cfg.n_nodes < 64 || (cfg.n_nodes & (cfg.n_nodes - 1)) != 0) {
        throw ConfigError("'n_nodes' must be a power of two >= 64", line_of_key(text, "n_nodes"));
      }
    }
    if (doc.contains("output")) {
      const json& o = doc.at("output");
      if (!o.is_object()) throw ConfigError("'output' must be an object", line_of_key(text, "output"));
      if (o.contains("format")) {
        try {
          cfg.format = parse_format(o.at("format").get<std::string>());
        } catch (const ConfigError& e) {
          throw ConfigError(e.what(), line_of_key(text, "format"));
        }
      }
      if (o.contains("path")) cfg.out_path = o.at("path").get<std::string>();
    }
    if (doc.contains("sweep")) {
      const json& s = doc.at("sweep");
      if (!s.is_object() || !s.contains("param")) {
        throw ConfigError("'sweep' needs a 'param' and a range", line_of_key(text, "sweep"));
      }
      SweepSpec spec;
      try {
        spec.param = parse_sweep_param(s.at("param").get<std::string>());
      } catch (const ConfigError& e) {
        throw ConfigError(e.what(), line_of_key(text, "param"));
      }
      spec.range = s.contains("range") ? range_from_json(s.at("range"), "range", text)
                                       : range_from_json(s, "sweep", text);
      cfg.sweep = spec;
      cfg.command = Command::Sweep;
    }
    if (doc.contains("region")) {
      const json& r = doc.at("region");
      if (!r.is_object() || !r.contains("sigma") || !r.contains("area")) {
        throw ConfigError("'region' needs 'sigma' and 'area' ranges", line_of_key(text, "region"));
      }
      cfg.region = RegionSpec{range_from_json(r.at("sigma"), "sigma", text),
                              range_from_json(r.at("area"), "area", text)};
      cfg.command = Command::Region;
    }
    if (doc.contains("emit")) {
      const json& e = doc.at("emit");
      if (!e.is_object()) throw ConfigError("'emit' must be an object", line_of_key(text, "emit"));
      for (const auto& s : e.value("shapes", json::array({"section"}))) {
        try {
          cfg.shapes.push_back(parse_shape(s.get<std::string>()));
        } catch (const ConfigError& err) {
          throw ConfigError(err.what(), line_of_key(text, "shapes"));
        }
      }
      cfg.allow_inadmissible = e.value("allow_inadmissible", false);
      cfg.command = Command::Emit;
    }
    if (doc.contains("command")) {
      const std::string c = doc.at("command").get<std::string>();
      if (c == "solve") {
        cfg.command = Command::Solve;
      } else if (c == "sweep") {
        cfg.command = Command::Sweep;
      } else if (c == "region") {
        cfg.command = Command::Region;
      } else if (c == "emit") {
        cfg.command = Command::Emit;
      } else {
        throw ConfigError("unknown command '" + c + "'", line_of_key(text, "command"));
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value type: ") + e.what());
  }
  if (cfg.command == Command::Sweep && !cfg.sweep) throw ConfigError("sweep command needs a 'sweep' block");
  if (cfg.command == Command::Region && !cfg.region) throw ConfigError("region command needs a 'region' block");
  if (cfg.command == Command::Emit && cfg.shapes.empty()) cfg.shapes.push_back(ShapeKind::CrossSection);
  return cfg;
}

std::size_t nodes_from_env(std::size_t fallback) {
  const char* v = std::getenv("KP_NODES");
  if (!v || !*v) return fallback;
  const double d = parse_double(v, "KP_NODES");
  const auto n = static_cast<std::size_t>(d);
  if (static_cast<double>(n) != d || n < 64 || (n & (n - 1)) != 0) {
    throw ConfigError("KP_NODES must be a power of two >= 64");
  }
  return n;
}

CaseSolution solve_case(const CaseKind& kind, const Params& params, std::optional<double> a0) {
  validate(params);
  if (std::holds_alternative<EllipseCase>(kind)) return {params, solve_equilibrium(params)};
  if (const auto* d = std::get_if<DilationCase>(&kind)) {
    double base = a0.value_or(d->a0);
    if (!(base > 0.0)) base = solve_equilibrium(params).a_bar;
    return {params, solve_dilation(params, base)};
  }
  return {params, solve_oval(params)};
}

VerificationReport verify_solution(const CaseSolution& sol, std::size_t n_nodes) {
  struct Setup {
    CaseKind kind;
    double state;
    double lambda;
  };
  struct Visitor {
    Setup operator()(const EllipseSolution& s) const { return {EllipseCase{}, s.a_bar, s.lambda_bar}; }
    Setup operator()(const DilationSolution& s) const {
      return {DilationCase{s.a0}, s.theta_bar, s.lambda_bar};
    }
    Setup operator()(const OvalSolution& s) const { return {OvalCase{}, s.point_a.a, s.lambda_bar}; }
  };
  const Setup setup = std::visit(Visitor{}, sol.solution);
  const DiscreteFunctional df(setup.kind, sol.params, n_nodes);
  const auto profile = df.constant_profile(setup.state);
  const StationarityReport st = stationarity_check(df, profile, setup.lambda, 17);
  const ElResidual el = el_residual(setup.kind, sol.params, setup.state, setup.lambda);

  VerificationReport r;
  r.stationarity = st.max_normalized_derivative;
  r.el_residual = el.max_normalized();
  r.length_closed = el.length_closed;
  r.n_nodes = n_nodes;
  r.passed = r.stationarity < kStationarityGate && r.el_residual < kResidualGate && r.length_closed;
  return r;
}

json solution_json(const CaseSolution& sol) {
  struct Visitor {
    json operator()(const EllipseSolution& s) const {
      return {{"a_bar", s.a_bar},         {"b_bar", s.b_bar},
              {"lambda_bar", s.lambda_bar}, {"a_star", s.a_star},
              {"admissible", s.admissible}, {"boundary", s.boundary},
              {"elongation_horizontal", s.elongation_horizontal}};
    }
    json operator()(const DilationSolution& s) const {
      return {{"theta_bar", s.theta_bar},       {"lambda_bar", s.lambda_bar},
              {"a0", s.a0},                     {"b0", s.b0},
              {"dilated_axis", s.dilated_axis}, {"is_dilatation", s.is_dilatation}};
    }
    json operator()(const OvalSolution& s) const {
      json pts = json::array();
      for (const auto& p : s.intersections) {
        pts.push_back({{"a", p.a}, {"b", p.b}, {"multiplicity", p.multiplicity}});
      }
      return {{"a", s.point_a.a},
              {"b", s.point_a.b},
              {"lambda_bar", s.lambda_bar},
              {"intersections", pts},
              {"n_intersections", s.n_intersections},
              {"constraints", flags_json(s.constraint_flags)},
              {"tau", s.tau},
              {"xi2", s.xi2}};
    }
  };
  return std::visit(Visitor{}, sol.solution);
}

json solve_document(const RunConfig& cfg, const CaseSolution& sol,
                    const std::optional<VerificationReport>& verification) {
  const Params& p = sol.params;
  json doc = {{"command", "solve"},
              {"case", std::string(case_name(cfg.kind))},
              {"alpha", p.alpha},
              {"beta", p.beta},
              {"sigma", p.sigma},
              {"area", p.area},
              {"radius", p.radius},
              {"n_nodes", cfg.n_nodes},
              {"verify", cfg.verify},
              {"admissible", sol.admissible()},
              {"solution", solution_json(sol)}};
  if (const auto* d = std::get_if<DilationSolution>(&sol.solution)) doc["a0"] = d->a0;
  json warnings = json::array();
  if (!p.sigma_physical()) warnings.push_back("sigma outside the physical range [0, 1]");
  doc["warnings"] = warnings;
  if (verification) {
    doc["verification"] = {{"stationarity", verification->stationarity},
                           {"el_residual", verification->el_residual},
                           {"length_closed", verification->length_closed},
                           {"n_nodes", verification->n_nodes},
                           {"passed", verification->passed}};
  }
  return doc;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

struct SweepRow {
  std::vector<std::string> fields;
  json object;
  double x = 0.0;
  double primary = std::numeric_limits<double>::quiet_NaN();
};

std::vector<std::string> sweep_header(const CaseKind& kind) {
  if (std::holds_alternative<EllipseCase>(kind)) {
    return {"sigma", "beta", "area", "radius", "a_bar", "b_bar", "lambda_bar", "admissible"};
  }
  if (std::holds_alternative<DilationCase>(kind)) {
    return {"sigma", "beta",      "area",         "radius",     "a0",
            "theta_bar", "dilated_axis", "lambda_bar", "is_dilatation"};
  }
  return {"sigma", "beta", "area", "radius", "a", "b", "lambda_bar", "admissible", "n_intersections"};
}

SweepRow sweep_row(const RunConfig& cfg, const Params& p) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> f{format_number(p.sigma), format_number(p.beta), format_number(p.area),
                             format_number(p.radius)};
  SweepRow row;
  if (std::holds_alternative<EllipseCase>(cfg.kind)) {
    const EllipseSolution s = solve_equilibrium(p);
    f.insert(f.end(), {format_number(s.a_bar), format_number(s.b_bar), format_number(s.lambda_bar),
                       csv_bool(s.admissible)});
    row.primary = s.a_bar;
  } else if (std::holds_alternative<DilationCase>(cfg.kind)) {
    const CaseSolution cs = solve_case(cfg.kind, p, cfg.a0);
    const auto& s = std::get<DilationSolution>(cs.solution);
    f.insert(f.end(), {format_number(s.a0), format_number(s.theta_bar), format_number(s.dilated_axis),
                       format_number(s.lambda_bar), csv_bool(s.is_dilatation)});
    row.primary = s.dilated_axis;
  } else {
    try {
      const OvalSolution s = solve_oval(p);
      f.insert(f.end(), {format_number(s.point_a.a), format_number(s.point_a.b),
                         format_number(s.lambda_bar), "true", std::to_string(s.n_intersections)});
      row.primary = s.point_a.a + s.point_a.b;
    } catch (const OvalSolveError& e) {
      f.insert(f.end(), {format_number(nan), format_number(nan), format_number(nan), "false",
                         std::to_string(e.candidates().size())});
    } catch (const DegenerateConicError&) {
      f.insert(f.end(), {format_number(nan), format_number(nan), format_number(nan), "false", "0"});
    }
  }
  const auto header = sweep_header(cfg.kind);
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string& v = f[i];
    if (v == "true" || v == "false") {
      row.object[header[i]] = v == "true";
    } else if (v == "nan") {
      row.object[header[i]] = nullptr;
    } else {
      row.object[header[i]] = std::stod(v);
    }
  }
  row.fields = std::move(f);
  return row;
}

std::vector<SweepRow> sweep_rows(const RunConfig& cfg) {
  const std::vector<double> xs = cfg.sweep->range.values();
  std::vector<SweepRow> rows(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    Params p = cfg.params;
    param_ref(p, cfg.sweep->param) = xs[i];
    validate(p);
    rows[i] = sweep_row(cfg, p);
    rows[i].x = xs[i];
  });
  return rows;
}

std::string sweep_svg(const std::vector<SweepRow>& rows) {
  std::vector<ShapeSample> line(1);
  line[0].closed = false;
  for (const auto& r : rows) {
    if (std::isfinite(r.primary)) line[0].points.push_back({r.x, r.primary, 0.0});
  }
  return shapes_svg(line);
}

}  // namespace

std::string sweep_csv(const RunConfig& cfg) {
  if (!cfg.sweep) throw ConfigError("no sweep configured");
  std::string out = join(sweep_header(cfg.kind)) + "\n";
  for (const SweepRow& r : sweep_rows(cfg)) out += join(r.fields) + "\n";
  return out;
}

std::string region_csv(const RunConfig& cfg) {
  if (!cfg.region) throw ConfigError("no region configured");
  if (!std::holds_alternative<OvalCase>(cfg.kind)) throw ConfigError("region maps are defined for the oval case");
  const auto sigmas = cfg.region->sigma.values();
  const auto areas = cfg.region->area.values();
  std::vector<std::string> lines(sigmas.size() * areas.size());
  parallel_for(lines.size(), [&](std::size_t idx) {
    Params p = cfg.params;
    p.sigma = sigmas[idx / areas.size()];
    p.area = areas[idx % areas.size()];
    validate(p);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double ratio = p.area / (kPi * p.radius * p.radius);
    std::vector<std::string> f{format_number(p.sigma), format_number(p.area), format_number(p.beta),
                               format_number(p.radius), format_number(ratio)};
    if (p.sigma == 0.0) {
      f.insert(f.end(), {format_number(nan), format_number(nan), format_number(nan),
                         format_number(nan), "0", "false"});
    } else {
      f.push_back(format_number(tau_limit(p)));
      try {
        const OvalSolution s = solve_oval(p);
        f.insert(f.end(), {format_number(s.point_a.a), format_number(s.point_a.b),
                           format_number(s.lambda_bar), std::to_string(s.n_intersections), "true"});
      } catch (const OvalSolveError& e) {
        f.insert(f.end(), {format_number(nan), format_number(nan), format_number(nan),
                           std::to_string(e.candidates().size()), "false"});
      }
    }
    lines[idx] = join(f);
  });
  std::string out = "sigma,area,beta,radius,area_ratio,tau,a,b,lambda_bar,n_intersections,admissible\n";
  for (const auto& l : lines) out += l + "\n";
  return out;
}

std::string shapes_svg(const std::vector<ShapeSample>& shapes) {
  // Tube rings are drawn in an oblique projection.
  auto project = [](const Point3& p) { return Point2{p.x + 0.5 * p.z, p.y + 0.35 * p.z}; };
  double minx = std::numeric_limits<double>::infinity();
  double miny = minx;
  double maxx = -minx;
  double maxy = -minx;
  for (const auto& s : shapes) {
    for (const auto& p : s.points) {
      const Point2 q = project(p);
      minx = std::min(minx, q.x);
      maxx = std::max(maxx, q.x);
      miny = std::min(miny, q.y);
      maxy = std::max(maxy, q.y);
    }
  }
  if (!std::isfinite(minx)) minx = miny = maxx = maxy = 0.0;
  const double pad = 0.05 * std::max({maxx - minx, maxy - miny, 1e-9});
  minx -= pad;
  miny -= pad;
  maxx += pad;
  maxy += pad;
  const double w = maxx - minx;
  const double h = maxy - miny;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_number(w) << "mm\" height=\""
     << format_number(h) << "mm\" viewBox=\"0 0 " << format_number(w * kPxPerUnit) << ' '
     << format_number(h * kPxPerUnit) << "\">\n";
  for (const auto& s : shapes) {
    os << "  <path data-kind=\"" << shape_kind_name(s.kind) << "\" data-points=\"" << s.points.size()
       << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\" d=\"";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      const Point2 q = project(s.points[i]);
      os << (i == 0 ? "M " : " L ") << format_number((q.x - minx) * kPxPerUnit) << ' '
         << format_number((maxy - q.y) * kPxPerUnit);
    }
    if (s.closed) os << " Z";
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string shapes_csv(const std::vector<ShapeSample>& shapes) {
  std::string out = "path,kind,index,x,y,z\n";
  for (std::size_t k = 0; k < shapes.size(); ++k) {
    const auto& s = shapes[k];
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      const auto& p = s.points[i];
      out += join({std::to_string(k), std::string(shape_kind_name(s.kind)), std::to_string(i),
                   format_number(p.x), format_number(p.y), format_number(p.z)}) +
             "\n";
    }
  }
  return out;
}

json shapes_json(const std::vector<ShapeSample>& shapes) {
  json arr = json::array();
  for (const auto& s : shapes) {
    json pts = json::array();
    for (const auto& p : s.points) {
      if (s.dimension == 3) {
        pts.push_back({p.x, p.y, p.z});
      } else {
        pts.push_back({p.x, p.y});
      }
    }
    arr.push_back({{"kind", std::string(shape_kind_name(s.kind))},
                   {"closed", s.closed},
                   {"dimension", s.dimension},
                   {"points", pts}});
  }
  return arr;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    switch (cfg.command) {
      case Command::Solve: {
        CaseSolution sol;
        try {
          sol = solve_case(cfg.kind, cfg.params, cfg.a0);
        } catch (const OvalSolveError& e) {
          json doc = {{"command", "solve"},
                      {"case", "oval"},
                      {"status", e.kind() == OvalSolveError::Kind::NoSolution ? "no_solution" : "ambiguous"},
                      {"candidates", candidates_json(e.candidates())}};
          write_output(cfg, doc.dump(2) + "\n", out);
          err << "oval: " << e.what() << "\n";
          return kExitNoSolution;
        }
        std::optional<VerificationReport> report;
        if (cfg.verify) report = verify_solution(sol, cfg.n_nodes);
        if (cfg.format == OutputFormat::Json) {
          write_output(cfg, solve_document(cfg, sol, report).dump(2) + "\n", out);
        } else if (cfg.format == OutputFormat::Csv) {
          const json s = solution_json(sol);
          std::string header = "case";
          std::string values(case_name(cfg.kind));
          for (const auto& [k, v] : s.items()) {
            if (!v.is_number() && !v.is_boolean()) continue;
            header += "," + k;
            values += "," + (v.is_boolean() ? csv_bool(v.get<bool>()) : format_number(v.get<double>()));
          }
          write_output(cfg, header + "\n" + values + "\n", out);
        } else {
          const std::vector<ShapeKind> kinds{ShapeKind::CrossSection};
          write_output(cfg, shapes_svg(emit_shape(sol, SampleCounts{}, kinds)), out);
        }
        if (!sol.admissible()) {
          err << case_name(cfg.kind) << ": solution is not admissible\n";
          return kExitNoSolution;
        }
        return kExitOk;
      }
      case Command::Sweep: {
        if (cfg.format == OutputFormat::Csv) {
          write_output(cfg, sweep_csv(cfg), out);
        } else if (cfg.format == OutputFormat::Json) {
          json rows = json::array();
          for (const auto& r : sweep_rows(cfg)) rows.push_back(r.object);
          json doc = {{"command", "sweep"},
                      {"case", std::string(case_name(cfg.kind))},
                      {"param", std::string(sweep_param_name(cfg.sweep->param))},
                      {"rows", rows}};
          write_output(cfg, doc.dump(2) + "\n", out);
        } else {
          write_output(cfg, sweep_svg(sweep_rows(cfg)), out);
        }
        return kExitOk;
      }
      case Command::Region: {
        if (cfg.format != OutputFormat::Csv) throw ConfigError("region maps are written as CSV");
        write_output(cfg, region_csv(cfg), out);
        return kExitOk;
      }
      case Command::Emit: {
        CaseSolution sol;
        try {
          sol = solve_case(cfg.kind, cfg.params, cfg.a0);
        } catch (const OvalSolveError& e) {
          err << "oval: " << e.what() << "\n";
          return kExitNoSolution;
        }
        if (!sol.admissible() && !cfg.allow_inadmissible) {
          err << case_name(cfg.kind) << ": solution is not admissible (use --allow-inadmissible)\n";
          return kExitNoSolution;
        }
        const auto shapes = emit_shape(sol, SampleCounts{}, cfg.shapes);
        if (cfg.format == OutputFormat::Svg) {
          write_output(cfg, shapes_svg(shapes), out);
        } else if (cfg.format == OutputFormat::Csv) {
          write_output(cfg, shapes_csv(shapes), out);
        } else {
          write_output(cfg, shapes_json(shapes).dump(2) + "\n", out);
        }
        return kExitOk;
      }
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    err << case_name(cfg.kind) << ": invalid parameters: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace kp
