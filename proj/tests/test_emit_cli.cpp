#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "kp/errors.hpp"
#include "kp/run.hpp"

using namespace kp;

namespace {

struct Output {
  int code;
  std::string out;
  std::string err;
};

Output exec(const RunConfig& cfg) {
  std::ostringstream out, err;
  const int code = run(cfg, out, err);
  return {code, out.str(), err.str()};
}

RunConfig solve_cfg(CaseKind kind, Params p) {
  RunConfig cfg;
  cfg.kind = kind;
  cfg.params = p;
  return cfg;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    rows.push_back(f);
  }
  return rows;
}

}  // namespace

TEST_SUITE("emit_cli") {

TEST_CASE("ranges") {
  auto r = parse_range("0:1:5");
  CHECK(r.values().size() == 5);
  CHECK(r.values().back() == 1.0);
  r = parse_range("0:0");
  CHECK(r.values() == std::vector<double>{0.0});
  CHECK_THROWS_AS(parse_range("1:0:3"), ConfigError);
  CHECK_THROWS_AS(parse_range("0:1:1"), ConfigError);
  CHECK_THROWS_AS(parse_range("0:1:2.5"), ConfigError);
  CHECK_THROWS_AS(parse_range("a:b"), ConfigError);
}

TEST_CASE("solve document") {
  const auto o = exec(solve_cfg(EllipseCase{}, Params{1.0, 1.0, 0.1, 10.0, 5.0}));
  CHECK(o.code == kExitOk);
  const auto doc = nlohmann::json::parse(o.out);
  CHECK(std::abs(doc["solution"]["a_bar"].get<double>() - 1.800) < 0.005);
}

TEST_CASE("json round trip is exact") {
  std::vector<RunConfig> cfgs{solve_cfg(EllipseCase{}, Params{1.3, 0.7, 0.123456789, 10.0, 5.0}),
                              solve_cfg(DilationCase{}, Params{1.0, 1.0, 1.0, 10.0, 5.0}),
                              solve_cfg(OvalCase{}, Params{1.0, 1.0, 0.9, 2.0 * 3.141592653589793 / 5.0, 1.0})};
  cfgs[2].verify = true;
  cfgs[2].n_nodes = 256;
  for (const auto& cfg : cfgs) {
    const auto first = exec(cfg);
    REQUIRE(first.code == kExitOk);
    const RunConfig again = parse_config_json(first.out);
    CHECK(again.params == cfg.params);
    const auto second = exec(again);
    CHECK(second.code == kExitOk);
    CHECK(second.out == first.out);
  }
}

TEST_CASE("single point sweep at zero tension") {
  RunConfig cfg = solve_cfg(EllipseCase{}, Params{1.0, 1.0, 0.5, 10.0, 5.0});
  cfg.command = Command::Sweep;
  cfg.format = OutputFormat::Csv;
  cfg.sweep = SweepSpec{SweepParam::Sigma, parse_range("0:0")};
  const auto o = exec(cfg);
  CHECK(o.code == kExitOk);
  const auto rows = csv_rows(o.out);
  REQUIRE(rows.size() == 2);
  CHECK(o.out.rfind("sigma,beta,area,radius,a_bar,b_bar,lambda_bar,admissible\n", 0) == 0);
  CHECK(std::abs(std::stod(rows[1][4]) / std::sqrt(10.0 / 3.141592653589793) - 1.0) < 1e-12);
}

TEST_CASE("sweeps are monotone and clean") {
  for (CaseKind kind : std::vector<CaseKind>{EllipseCase{}, DilationCase{}, OvalCase{}}) {
    for (auto [param, range] : std::vector<std::pair<SweepParam, const char*>>{
             {SweepParam::Sigma, "0.05:10:40"}, {SweepParam::Beta, "0.1:5:30"},
             {SweepParam::Area, "0.2:3:30"}, {SweepParam::Radius, "0.8:6:30"}}) {
      RunConfig cfg = solve_cfg(kind, Params{1.0, 1.0, 0.9, 1.5, 1.0});
      cfg.command = Command::Sweep;
      cfg.format = OutputFormat::Csv;
      cfg.sweep = SweepSpec{param, parse_range(range)};
      const auto o = exec(cfg);
      REQUIRE(o.code == kExitOk);
      const auto rows = csv_rows(o.out);
      const auto& header = rows[0];
      const auto col = static_cast<std::size_t>(
          std::find(header.begin(), header.end(), std::string(sweep_param_name(param))) - header.begin());
      const auto adm = static_cast<std::size_t>(
          std::find_if(header.begin(), header.end(),
                       [](const std::string& h) { return h == "admissible" || h == "is_dilatation"; }) -
          header.begin());
      REQUIRE(rows.size() == static_cast<std::size_t>(parse_range(range).n) + 1);
      for (std::size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i].size() == header.size());
        if (i > 1) CHECK(std::stod(rows[i][col]) > std::stod(rows[i - 1][col]));
        if (rows[i][adm] == "true") {
          for (const auto& cell : rows[i]) CHECK(cell != "nan");
        }
      }
    }
  }
}

TEST_CASE("region map cells re-check") {
  RunConfig cfg = solve_cfg(OvalCase{}, Params{1.0, 1.0, 0.5, 1.0, 1.0});
  cfg.command = Command::Region;
  cfg.format = OutputFormat::Csv;
  cfg.region = RegionSpec{parse_range("0.05:3:12"), parse_range("0.05:3.3:14")};
  const auto o = exec(cfg);
  REQUIRE(o.code == kExitOk);
  const auto rows = csv_rows(o.out);
  REQUIRE(rows.size() == 1 + 12 * 14);
  int admissible = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r[10] != "true") continue;
    ++admissible;
    Params p{1.0, std::stod(r[2]), std::stod(r[0]), std::stod(r[1]), std::stod(r[3])};
    const double ratio = p.area / (3.141592653589793 * p.radius * p.radius);
    CHECK(ratio > tau_limit(p));
    CHECK(ratio <= 1.0);
    CHECK(std::stod(r[5]) == tau_limit(p));
    CHECK(classify_region(p, std::stod(r[6]), std::stod(r[7])).admissible());
  }
  CHECK(admissible > 20);

  cfg.kind = EllipseCase{};
  CHECK(exec(cfg).code == kExitConfig);
}

TEST_CASE("svg paths match the samples") {
  const Params p{1.0, 1.0, 1.0, 10.0, 5.0};
  RunConfig cfg = solve_cfg(EllipseCase{}, p);
  cfg.command = Command::Emit;
  cfg.format = OutputFormat::Svg;
  cfg.shapes = {ShapeKind::CrossSection, ShapeKind::Midline, ShapeKind::ScaledCurve, ShapeKind::Tube};
  const auto o = exec(cfg);
  REQUIRE(o.code == kExitOk);
  const SampleCounts counts;
  auto attr = [](const std::string& tag, const std::string& name) {
    const auto at = tag.find(" " + name + "=\"") + name.size() + 3;
    return tag.substr(at, tag.find('"', at) - at);
  };
  int n = 0;
  for (auto pos = o.out.find("<path "); pos != std::string::npos; pos = o.out.find("<path ", pos + 1), ++n) {
    const std::string tag = o.out.substr(pos, o.out.find("/>", pos) - pos);
    const std::string d = attr(tag, "d");
    CHECK(d.back() == 'Z');
    const long points = 1 + std::count(d.begin(), d.end(), 'L');
    CHECK(points == std::stol(attr(tag, "data-points")));
    const long expect = n == 0 ? counts.section : n < 3 ? counts.midline : counts.tube_ring;
    CHECK(points == expect + 1);
  }
  CHECK(n == 3 + counts.tube_stations);
  CHECK(o.out.find("mm\"") != std::string::npos);
}

TEST_CASE("emitted shapes") {
  const auto ell = solve_case(EllipseCase{}, Params{1.0, 1.0, 1.0, 10.0, 5.0}, std::nullopt);
  const std::vector<ShapeKind> kinds{ShapeKind::CrossSection};
  const auto s = emit_shape(ell, SampleCounts{}, kinds);
  REQUIRE(s.size() == 1);
  CHECK(s[0].points.front().x == std::get<EllipseSolution>(ell.solution).a_bar);
  CHECK(s[0].points.front().y == 0.0);
  CHECK(s[0].points.size() == 257);
  CHECK(s[0].points.back().x == s[0].points.front().x);
  CHECK_THROWS_AS(emit_shape(ell, SampleCounts{100, 512, 48, 128}, kinds), DomainError);

  const auto ov = solve_case(OvalCase{}, Params{1.0, 1.0, 0.9, 2.0 * 3.141592653589793 / 5.0, 1.0}, std::nullopt);
  const auto& a = std::get<OvalSolution>(ov.solution).point_a;
  CHECK(ov.section_point(0.0).x == doctest::Approx(a.a + a.b));
  CHECK(ov.section_point(3.141592653589793).x == doctest::Approx(-(a.a - a.b)));
  CHECK(ov.film_offset() == a.a + a.b);

  const auto film = emit_shape(ell, SampleCounts{}, std::vector<ShapeKind>{ShapeKind::ScaledCurve});
  for (const auto& q : film[0].points) CHECK(std::hypot(q.x, q.y) == doctest::Approx(5.0 - ell.film_offset()));
}

TEST_CASE("exit codes") {
  CHECK(exec(solve_cfg(EllipseCase{}, Params{1.0, 1.0, 1.0, 10.0, 1.0})).code == kExitNoSolution);
  CHECK(exec(solve_cfg(DilationCase{}, Params{1.0, 1.0, 1.0, 10.0, 1.0})).code == kExitNoSolution);
  CHECK(exec(solve_cfg(OvalCase{}, Params{1.0, 1.0, 0.9, 0.1, 1.0})).code == kExitNoSolution);
  CHECK(exec(solve_cfg(OvalCase{}, Params{1.0, 1.0, 0.0, 1.0, 1.0})).code == kExitConfig);
  CHECK(exec(solve_cfg(EllipseCase{}, Params{1.0, -1.0, 1.0, 10.0, 1.0})).code == kExitConfig);

  RunConfig forced = solve_cfg(EllipseCase{}, Params{1.0, 1.0, 1.0, 10.0, 1.0});
  forced.command = Command::Emit;
  forced.shapes = {ShapeKind::CrossSection};
  CHECK(exec(forced).code == kExitNoSolution);
  forced.allow_inadmissible = true;
  CHECK(exec(forced).code == kExitOk);
}

TEST_CASE("config errors carry a line") {
  const char* bad_value = "{\n  \"case\": \"ellipse\",\n  \"beta\": 1,\n  \"sigma\": 1,\n  \"area\": -2,\n  \"radius\": 5\n}";
  try {
    parse_config_json(bad_value);
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 5);
    CHECK(std::string(e.what()).find("line 5") != std::string::npos);
  }
  const char* bad_syntax = "{\n  \"case\": \"ellipse\",\n  \"beta\": 1\n  \"sigma\": 1\n}";
  try {
    parse_config_json(bad_syntax);
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 4);
  }
  const char* unknown = "{\n  \"case\": \"ellipse\",\n  \"beta\": 1,\n  \"sigma\": 1,\n  \"area\": 2,\n  \"radius\": 5,\n  \"gamma\": 3\n}";
  try {
    parse_config_json(unknown);
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 7);
  }
  CHECK_THROWS_AS(parse_config_json("{\"case\": \"ellipse\", \"beta\": 1, \"sigma\": 1, \"area\": 2}"), ConfigError);
}

TEST_CASE("config blocks") {
  const auto cfg = parse_config_json(R"({"case": "oval", "beta": 1, "sigma": 0.9, "area": 1, "radius": 1,
    "sweep": {"param": "area", "range": "0.8:3:5"}, "output": {"format": "csv"}})");
  CHECK(cfg.command == Command::Sweep);
  CHECK(cfg.sweep->param == SweepParam::Area);
  CHECK(cfg.sweep->range.n == 5);
  CHECK(cfg.format == OutputFormat::Csv);

  const auto reg = parse_config_json(R"({"case": "oval", "beta": 1, "sigma": 0.9, "area": 1, "radius": 1,
    "region": {"sigma": {"lo": 0.1, "hi": 1, "n": 3}, "area": "0.5:3:4"}})");
  CHECK(reg.command == Command::Region);
  CHECK(reg.region->sigma.values().size() == 3);
}

TEST_CASE("node count from the environment") {
  ::setenv("KP_NODES", "512", 1);
  CHECK(nodes_from_env() == 512);
  ::setenv("KP_NODES", "500", 1);
  CHECK_THROWS_AS(nodes_from_env(), ConfigError);
  ::unsetenv("KP_NODES");
  CHECK(nodes_from_env() == kDefaultNodes);
}

}
