// Command-line front end: sample, voronoi, features, solve, reach, converge, render.
// Exit status: 0 clean, 2 finished with warnings, 1 error.

#include <cctype>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mcl/mcl.hpp"

namespace {

using mcl::io::json;

struct RunConfig {
  std::string curve;
  std::string curve_file;
  std::vector<double> box{-3, 3, -3, 3};
  std::optional<double> eps;
  std::optional<std::size_t> points;
  std::vector<std::string> singular;
  std::optional<double> delta;
  std::string out;
  std::string format = "json";
  std::string layers = "curve,sample,voronoi";
  int seed_grid = 64;
  // converge
  int halvings = 4;
  std::vector<std::string> probes;
  std::vector<std::string> pins;
  int triangles = 2;
};

struct Outcome {
  std::string text;
  bool warnings = false;
};

mcl::Point parse_xy(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw mcl::ConfigError("expected x,y but got '" + s + "'");
  std::size_t used = 0;
  try {
    const std::string xs = s.substr(0, comma), ys = s.substr(comma + 1);
    const double x = std::stod(xs, &used);
    if (used != xs.size()) throw std::invalid_argument(xs);
    const double y = std::stod(ys, &used);
    if (used != ys.size()) throw std::invalid_argument(ys);
    return {x, y};
  } catch (const std::logic_error&) {
    throw mcl::ConfigError("expected x,y but got '" + s + "'");
  }
}

std::vector<mcl::Point> parse_xys(const std::vector<std::string>& v) {
  std::vector<mcl::Point> out;
  for (const auto& s : v) out.push_back(parse_xy(s));
  return out;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// Everything a subcommand needs, validated before any computation.
struct Setup {
  std::string expr;
  mcl::Curve curve;
  mcl::BoundingBox box;
  std::vector<mcl::Point> singular;
};

Setup setup(const RunConfig& cfg) {
  std::string expr = cfg.curve;
  if (!cfg.curve_file.empty()) {
    std::ifstream in(cfg.curve_file);
    if (!in) throw mcl::ConfigError("cannot read curve file '" + cfg.curve_file + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    expr = buf.str();
  }
  while (!expr.empty() && std::isspace(static_cast<unsigned char>(expr.back()))) expr.pop_back();
  if (expr.empty()) throw mcl::ConfigError("a curve is required (--curve or --curve-file)");
  if (cfg.eps && !(*cfg.eps > 0)) throw mcl::ConfigError("--eps must be positive");
  if (cfg.delta && !(*cfg.delta > 0)) throw mcl::ConfigError("--delta must be positive");
  if (cfg.seed_grid < 2) throw mcl::ConfigError("--seed-grid must be at least 2");
  mcl::Curve curve = mcl::Curve::parse(expr);
  return {expr, std::move(curve), mcl::BoundingBox(cfg.box[0], cfg.box[1], cfg.box[2], cfg.box[3]),
          parse_xys(cfg.singular)};
}

mcl::Sample make_sample(const RunConfig& cfg, const Setup& s) {
  double eps = cfg.eps.value_or(0.05);
  if (cfg.points) eps = mcl::epsilon_for_point_count(s.curve, s.box, *cfg.points, s.singular, cfg.seed_grid);
  return mcl::epsilon_sample(s.curve, s.box, eps, s.singular, cfg.seed_grid);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void require_json(const RunConfig& cfg, const char* cmd) {
  if (cfg.format != "json") throw mcl::ConfigError(std::string(cmd) + " writes JSON only");
}

Outcome cmd_sample(const RunConfig& cfg) {
  const Setup s = setup(cfg);
  const mcl::Sample A = make_sample(cfg, s);
  return {cfg.format == "csv" ? mcl::io::sample_csv(A) : dump(mcl::io::sample_json(A, s.expr)), !A.warnings.empty()};
}

Outcome cmd_voronoi(const RunConfig& cfg) {
  require_json(cfg, "voronoi");
  const Setup s = setup(cfg);
  const mcl::Sample A = make_sample(cfg, s);
  const mcl::Triangulation T = mcl::delaunay_triangulate(A.all_points);
  mcl::VoronoiDiagram V = mcl::voronoi_dual(T);
  const mcl::EdgeClassification cls = mcl::classify_edges(V, s.curve);
  mcl::apply_classes(V, cls);
  return {dump(mcl::io::diagram_json(T, V, s.expr, A.epsilon)), !A.warnings.empty() || !cls.warnings.empty()};
}

Outcome cmd_features(const RunConfig& cfg) {
  require_json(cfg, "features");
  const Setup s = setup(cfg);
  const mcl::Sample A = make_sample(cfg, s);
  const auto r = mcl::io::compute_features(s.curve, A, s.expr, cfg.delta);
  return {dump(mcl::io::features_json(r)), !r.warnings.empty()};
}

Outcome cmd_solve(const RunConfig& cfg) {
  require_json(cfg, "solve");
  const Setup s = setup(cfg);
  const std::vector<mcl::Point> sing = mcl::singular_points(s.curve, s.box, cfg.seed_grid);
  std::optional<mcl::CriticalCurvatureResult> crit;
  std::optional<mcl::BottleneckResult> bott;
  // Curvature and bottleneck equations assume a smooth curve.
  if (sing.empty() && s.singular.empty()) {
    const mcl::Sample A = make_sample(cfg, s);
    crit = mcl::curvature_extrema(s.curve, A);
    bott = mcl::real_bottlenecks(s.curve, A);
  }
  const bool warn = (crit && (!crit->warnings.empty() || !crit->stable)) || (bott && !bott->warnings.empty()) ||
                    !sing.empty() || !s.singular.empty();
  return {dump(mcl::io::solve_json(s.expr, crit, bott, sing)), warn};
}

Outcome cmd_reach(const RunConfig& cfg) {
  require_json(cfg, "reach");
  const Setup s = setup(cfg);
  const mcl::Sample A = make_sample(cfg, s);
  const mcl::ReachReport r = mcl::reach_exact(s.curve, A);
  return {dump(mcl::io::reach_json(r, s.expr)), !r.warnings.empty()};
}

Outcome cmd_converge(const RunConfig& cfg) {
  const Setup s = setup(cfg);
  mcl::ConvergenceOptions opt;
  opt.probes = parse_xys(cfg.probes);
  opt.pins = parse_xys(cfg.pins);
  if (!opt.pins.empty()) opt.anchor = opt.pins.front();
  opt.tracked_triangles = cfg.triangles;
  opt.singular = s.singular;
  opt.grid_n = cfg.seed_grid;
  const auto rows = mcl::convergence_experiment(s.curve, s.box, cfg.eps.value_or(0.2), cfg.halvings, opt);
  return {cfg.format == "csv" ? mcl::io::convergence_csv(rows) : dump(mcl::io::convergence_json(rows, s.expr, opt.probes)),
          false};
}

Outcome cmd_render(const RunConfig& cfg) {
  const Setup s = setup(cfg);
  const mcl::Sample A = make_sample(cfg, s);
  mcl::RenderOptions opt;
  opt.layers = split_csv(cfg.layers);
  opt.delta = cfg.delta;
  opt.tracked_triangles = cfg.triangles;
  return {mcl::render_svg(s.curve, A, s.box, opt), !A.warnings.empty()};
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  auto* curve = sub->add_option("--curve", cfg.curve, "Polynomial in x and y, e.g. \"x^2 + 4*y^2 - 4\"");
  auto* file = sub->add_option("--curve-file", cfg.curve_file, "File holding the polynomial");
  curve->excludes(file);
  sub->add_option("--box", cfg.box, "Bounding box x0 x1 y0 y1")->expected(4)->capture_default_str();
  auto* eps = sub->add_option("--eps", cfg.eps, "Sample density epsilon");
  auto* pts = sub->add_option("--points", cfg.points, "Target sample size (epsilon found by bisection)");
  eps->excludes(pts);
  sub->add_option("--singular", cfg.singular, "Declared singular point x,y (repeatable)")->allow_extra_args(false);
  sub->add_option("--delta", cfg.delta, "Ball radius for local curvature and the evolute cover");
  sub->add_option("--out", cfg.out, "Output path (default: standard output)");
  sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  sub->add_option("--seed-grid", cfg.seed_grid, "Seed grid resolution per axis")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metric features of plane algebraic curves"};
  app.require_subcommand(1);
  RunConfig cfg;
  struct Cmd {
    const char* name;
    const char* help;
    Outcome (*run)(const RunConfig&);
    CLI::App* app = nullptr;
  };
  std::vector<Cmd> cmds{{"sample", "Trace an epsilon-sample of the curve", cmd_sample},
                        {"voronoi", "Delaunay triangulation and Voronoi diagram with edge classes", cmd_voronoi},
                        {"features", "Medial axis, curvature estimates, evolute and bottleneck candidates", cmd_features},
                        {"solve", "Critical curvature points, bottleneck pairs and singular points", cmd_solve},
                        {"reach", "Reach from the solver and both sample-based estimators", cmd_reach},
                        {"converge", "Convergence table over repeated halvings of epsilon", cmd_converge},
                        {"render", "SVG picture of the selected layers", cmd_render}};
  for (Cmd& c : cmds) {
    c.app = app.add_subcommand(c.name, c.help);
    add_common(c.app, cfg);
  }
  auto* conv = cmds[5].app;
  conv->add_option("--halvings", cfg.halvings, "Number of halvings of epsilon (at most 6)")->capture_default_str();
  conv->add_option("--probe", cfg.probes, "Wijsman probe point x,y (repeatable)")->allow_extra_args(false);
  conv->add_option("--pin", cfg.pins, "Curve point forced into the sample and tracked, x,y (repeatable)")
      ->allow_extra_args(false);
  conv->add_option("--triangles", cfg.triangles, "Largest Delaunay triangles to follow")->capture_default_str();
  auto* render = cmds[6].app;
  render->add_option("--layers", cfg.layers, "Comma-separated layers")->capture_default_str();
  render->add_option("--triangles", cfg.triangles, "Largest Delaunay triangles to draw")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    for (const Cmd& c : cmds) {
      if (!c.app->parsed()) continue;
      const Outcome o = c.run(cfg);
      if (cfg.out.empty()) {
        std::cout << o.text;
      } else {
        std::ofstream f(cfg.out, std::ios::binary);
        if (!f) throw mcl::ConfigError("cannot write '" + cfg.out + "'");
        f << o.text;
        if (!f) throw mcl::ConfigError("write to '" + cfg.out + "' failed");
      }
      return o.warnings ? 2 : 0;
    }
  } catch (const mcl::Error& e) {
    std::cerr << "error: " << e.kind() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
