#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <omp.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "jss/baselines.hpp"
#include "jss/collapse.hpp"
#include "jss/jacobi.hpp"
#include "jss/mesh.hpp"
#include "jss/region_graph.hpp"
#include "jss/render.hpp"

namespace jss::cli {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct Input {
  FileKind kind = FileKind::Bsf;
  std::optional<GridField> grid;
  TriField field;
};

Input load_input(const std::string& path) {
  Input in;
  in.kind = detect_file_kind(path);
  if (in.kind == FileKind::Sgf) {
    in.grid = load_sgf(path);
    in.field = triangulate_structured(*in.grid);
  } else {
    in.field = load_bsf(path);
  }
  return in;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  f.flush();
  if (!f) throw IoError("failed writing '" + path + "'");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void write_manifest(const std::string& primary_output, const std::vector<std::string>& argv, const std::string& command,
                    const json& inputs, const json& parameters, const json& outputs, double ms) {
  json m = {{"command", command},    {"argv", argv},       {"inputs", inputs},
            {"parameters", parameters}, {"outputs", outputs}, {"elapsed_ms", ms},
            {"tool_version", kToolVersion}};
  write_text(primary_output + ".manifest.json", dump(m));
}

std::size_t worker_threads() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("JSS_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap > 0) n = std::min(n, static_cast<std::size_t>(cap));
  }
  return n;
}

Boundary parse_boundary(const std::string& s) {
  if (s == "clamp") return Boundary::Clamp;
  if (s == "mirror") return Boundary::Mirror;
  throw CLI::ValidationError("--boundary", "expected clamp or mirror");
}

struct FilterFlags {
  int radius = 1;
  double sigma = 1000.0;
  double truncation = 3.0;
  std::string boundary = "clamp";
  int steps = 4;

  void add_to(CLI::App* app) {
    app->add_option("--radius", radius, "binomial radius in cells")->check(CLI::PositiveNumber);
    app->add_option("--sigma", sigma, "gaussian sigma in grid cells")->check(CLI::PositiveNumber);
    app->add_option("--truncation", truncation, "gaussian support in multiples of sigma")->check(CLI::Range(1.0, 1e9));
    app->add_option("--boundary", boundary, "clamp or mirror")->check(CLI::IsMember({"clamp", "mirror"}));
    app->add_option("--steps", steps, "loop subdivision steps")->check(CLI::NonNegativeNumber);
  }

  FilterSpec spec(FilterKind kind) const {
    FilterSpec s;
    s.kind = kind;
    s.radius = radius;
    s.sigma = sigma;
    s.truncation = truncation;
    s.boundary = parse_boundary(boundary);
    return s;
  }

  json to_json() const {
    return {{"radius", radius}, {"sigma", sigma}, {"truncation", truncation}, {"boundary", boundary}, {"steps", steps}};
  }
};

class GridRequired : public InputError {
 public:
  explicit GridRequired(const std::string& method)
      : InputError(method + " requires structured grid input (SGF); filters only work on structured grids") {}
};

// Result of one method on one input: the field the measures are taken on.
TriField run_method(const Input& in, const std::string& method, const FilterFlags& flags, double threshold,
                    std::ostream& err) {
  if (method == "original") return in.field;
  if (method == "binomial" || method == "gaussian") {
    if (!in.grid) throw GridRequired(method);
    const FilterSpec spec = flags.spec(method == "binomial" ? FilterKind::Binomial : FilterKind::Gaussian);
    if (spec.kind == FilterKind::Gaussian && gaussian_exceeds_grid(*in.grid, spec)) {
      err << "warning: gaussian support (truncation*sigma = " << spec.truncation * spec.sigma
          << " cells) exceeds the grid extent; the filter is close to a global average\n";
    }
    return triangulate_structured(apply_filter(*in.grid, spec));
  }
  if (method == "loop") return loop_subdivide(in.field, flags.steps);
  if (method.size() == 4 && method.rfind("ca-", 0) == 0) {
    CollapseOptions opt;
    opt.variant = parse_variant(method.substr(3));
    opt.threshold = threshold;
    TriField f = in.field;
    simplify(f, opt);
    return f;
  }
  throw std::invalid_argument("unknown method '" + method + "'");
}

const std::vector<std::string> kMethods{"original", "binomial", "gaussian", "loop", "ca-a", "ca-b", "ca-c", "ca-d"};

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (const char* env = std::getenv("JSS_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) omp_set_num_threads(static_cast<int>(n));
  }

  CLI::App app{"Jacobi set analysis and simplification of bivariate fields on triangle meshes", "jss"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  double epsilon = 0.0;
  app.add_option("--epsilon", epsilon, "degeneracy threshold on |det|")->check(CLI::NonNegativeNumber);

  std::string input;
  std::vector<std::string> inputs;
  std::string out_path;
  std::string report_path;
  std::string variant = "A";
  double threshold = 0.0;
  FilterFlags flags;

  auto* stats = app.add_subcommand("stats", "Jacobi set length, component count and region counts");
  stats->add_option("input", input, "BSF or SGF file")->required();
  stats->add_option("--out", out_path, "also write the JSON here");

  auto* simp = app.add_subcommand("simplify", "collapse low-hypervolume regions");
  simp->add_option("input", input, "BSF or SGF file")->required();
  simp->add_option("--variant", variant, "neighbourhood graph A|B|C|D")->check(CLI::IsMember({"A", "B", "C", "D", "a", "b", "c", "d"}));
  simp->add_option("--threshold", threshold, "hypervolume threshold t")->required()->check(CLI::NonNegativeNumber);
  simp->add_option("--out", out_path, "simplified BSF")->required();
  simp->add_option("--report", report_path, "collapse report JSON")->required();

  std::string method;
  auto* base = app.add_subcommand("baseline", "binomial/gaussian smoothing or loop subdivision");
  base->add_option("input", input, "SGF (filters) or BSF/SGF (loop)")->required();
  base->add_option("--method", method, "binomial|gaussian|loop")->required()->check(CLI::IsMember({"binomial", "gaussian", "loop"}));
  base->add_option("--out", out_path, "output file (SGF for filters, BSF for loop)")->required();
  flags.add_to(base);

  bool show_jacobi = false;
  double saturation_scale = 1.0;
  double width_px = 800.0;
  auto* render = app.add_subcommand("render", "SVG of orientations, range area and Jacobi edges");
  render->add_option("input", input, "BSF or SGF file")->required();
  render->add_option("--out", out_path, "SVG file")->required();
  render->add_flag("--show-jacobi", show_jacobi, "stroke Jacobi edges in black");
  render->add_option("--saturation-scale", saturation_scale, "range area (in medians) at full saturation")->check(CLI::PositiveNumber);
  render->add_option("--width", width_px, "image width in pixels")->check(CLI::PositiveNumber);

  std::string format;
  auto* graph = app.add_subcommand("graph", "export the neighbourhood graph");
  graph->add_option("input", input, "BSF or SGF file")->required();
  graph->add_option("--variant", variant, "A|B|C|D")->check(CLI::IsMember({"A", "B", "C", "D", "a", "b", "c", "d"}));
  graph->add_option("--out", out_path, "output file; .dot or .json picks the format");
  graph->add_option("--format", format, "dot|json (overrides the extension)")->check(CLI::IsMember({"dot", "json"}));

  std::vector<std::string> methods;
  std::string table_format = "md";
  double compare_threshold = 0.0001;
  auto* cmp = app.add_subcommand("compare", "method x measure table over several inputs");
  cmp->add_option("inputs", inputs, "BSF or SGF files")->required();
  cmp->add_option("--methods", methods, "original,binomial,gaussian,loop,ca-a..ca-d")->delimiter(',')->check(CLI::IsMember(kMethods));
  cmp->add_option("--threshold", compare_threshold, "threshold for ca-* methods")->check(CLI::NonNegativeNumber);
  cmp->add_option("--format", table_format, "md|csv")->check(CLI::IsMember({"md", "csv"}));
  cmp->add_option("--out", out_path, "also write the table here");
  flags.add_to(cmp);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  const auto start = Clock::now();
  try {
    if (*stats) {
      const Input in = load_input(input);
      const JacobiMeasures m = measure(in.field, epsilon);
      json regions = json::object();
      for (GraphVariant v : kAllVariants) {
        regions[std::string(1, to_char(v))] = decompose(in.field, v, epsilon).regions.size();
      }
      const json j = {{"length", m.length},
                      {"components", m.components},
                      {"triangles", in.field.triangle_count()},
                      {"regions_per_variant", regions}};
      out << dump(j);
      if (!out_path.empty()) {
        write_text(out_path, dump(j));
        write_manifest(out_path, args, "stats", {input}, {{"epsilon", epsilon}}, {out_path}, elapsed_ms(start));
      }
      return kExitOk;
    }

    if (*simp) {
      Input in = load_input(input);
      CollapseOptions opt;
      opt.variant = parse_variant(variant);
      opt.threshold = threshold;
      opt.epsilon = epsilon;
      const CollapseReport report = simplify(in.field, opt);
      save_bsf(in.field, out_path);
      write_text(report_path, dump(to_json(report)));
      const double ms = elapsed_ms(start);
      write_manifest(out_path, args, "simplify", {input},
                     {{"variant", std::string(1, to_char(opt.variant))}, {"threshold", threshold}, {"epsilon", epsilon}},
                     {out_path, report_path}, ms);
      out << "status " << to_string(report.status) << ", components " << report.before.components << " -> "
          << report.after.components << ", length " << fmt_double(report.before.length) << " -> "
          << fmt_double(report.after.length) << " (" << fmt_double(ms) << " ms)\n";
      return kExitOk;
    }

    if (*base) {
      const Input in = load_input(input);
      if (method == "loop") {
        save_bsf(loop_subdivide(in.field, flags.steps), out_path);
      } else {
        if (!in.grid) throw GridRequired(method);
        const FilterSpec spec = flags.spec(method == "binomial" ? FilterKind::Binomial : FilterKind::Gaussian);
        if (spec.kind == FilterKind::Gaussian && gaussian_exceeds_grid(*in.grid, spec)) {
          err << "warning: gaussian support (truncation*sigma = " << spec.truncation * spec.sigma
              << " cells) exceeds the grid extent; the filter is close to a global average\n";
        }
        save_sgf(apply_filter(*in.grid, spec), out_path);
      }
      json params = flags.to_json();
      params["method"] = method;
      write_manifest(out_path, args, "baseline", {input}, params, {out_path}, elapsed_ms(start));
      return kExitOk;
    }

    if (*render) {
      const Input in = load_input(input);
      RenderOptions ro;
      ro.show_jacobi = show_jacobi;
      ro.saturation_scale = saturation_scale;
      ro.width_px = width_px;
      ro.epsilon = epsilon;
      write_text(out_path, render_svg(in.field, ro));
      write_manifest(out_path, args, "render", {input},
                     {{"show_jacobi", show_jacobi}, {"saturation_scale", saturation_scale}, {"width", width_px}},
                     {out_path}, elapsed_ms(start));
      return kExitOk;
    }

    if (*graph) {
      const Input in = load_input(input);
      const GraphVariant v = parse_variant(variant);
      const RegionDecomposition regions = decompose(in.field, v, epsilon);
      const NeighborhoodGraph g = build_graph(in.field, regions, v);
      std::string fmt = format;
      if (fmt.empty()) fmt = out_path.size() >= 4 && out_path.ends_with(".dot") ? "dot" : "json";
      const std::string text = fmt == "dot" ? to_dot(g) : dump(to_json(g));
      if (out_path.empty()) {
        out << text;
      } else {
        write_text(out_path, text);
        write_manifest(out_path, args, "graph", {input}, {{"variant", variant}, {"format", fmt}}, {out_path},
                       elapsed_ms(start));
      }
      return kExitOk;
    }

    if (*cmp) {
      if (methods.empty()) {
        err << "usage error: --methods needs at least one of original,binomial,gaussian,loop,ca-a..ca-d\n";
        return kExitUsage;
      }
      struct Cell {
        std::optional<JacobiMeasures> m;
        std::string error;
      };
      const std::size_t jobs = inputs.size() * methods.size();
      std::vector<Cell> cells(jobs);
      std::vector<std::string> warnings(jobs);
      std::atomic<std::size_t> next{0};
      const auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < jobs;) {
          const std::string& path = inputs[i / methods.size()];
          const std::string& meth = methods[i % methods.size()];
          std::ostringstream warn;
          try {
            const Input in = load_input(path);
            cells[i].m = measure(run_method(in, meth, flags, compare_threshold, warn), epsilon);
          } catch (const std::exception& e) {
            cells[i].error = e.what();
          }
          warnings[i] = warn.str();
        }
      };
      std::vector<std::thread> pool;
      const std::size_t nthreads = std::min(worker_threads(), jobs);
      for (std::size_t t = 1; t < nthreads; ++t) pool.emplace_back(worker);
      worker();
      for (auto& t : pool) t.join();
      for (const auto& w : warnings) err << w;

      std::ostringstream table;
      if (table_format == "csv") {
        table << "dataset,method,length,components,error\n";
      } else {
        table << "| Dataset | Method | Length of Jacobi sets | # of Jacobi set components |\n";
        table << "|---|---|---|---|\n";
      }
      bool any_ok = false;
      for (std::size_t d = 0; d < inputs.size(); ++d) {
        double best_len = std::numeric_limits<double>::infinity();
        std::size_t best_comp = std::numeric_limits<std::size_t>::max();
        for (std::size_t k = 0; k < methods.size(); ++k) {
          const Cell& c = cells[d * methods.size() + k];
          if (!c.m) continue;
          best_len = std::min(best_len, c.m->length);
          best_comp = std::min(best_comp, c.m->components);
        }
        for (std::size_t k = 0; k < methods.size(); ++k) {
          const Cell& c = cells[d * methods.size() + k];
          any_ok |= c.m.has_value();
          if (table_format == "csv") {
            std::string error = c.error;
            std::replace(error.begin(), error.end(), ',', ';');
            table << inputs[d] << ',' << methods[k] << ',' << (c.m ? fmt_double(c.m->length) : "") << ','
                  << (c.m ? std::to_string(c.m->components) : "") << ',' << error << '\n';
            continue;
          }
          std::string len = "error: " + c.error;
          std::string comp = "error";
          if (c.m) {
            len = fmt_double(c.m->length);
            comp = std::to_string(c.m->components);
            if (c.m->length == best_len) len = "**" + len + "**";
            if (c.m->components == best_comp) comp = "**" + comp + "**";
          }
          table << "| " << inputs[d] << " | " << methods[k] << " | " << len << " | " << comp << " |\n";
        }
      }
      out << table.str();
      if (!out_path.empty()) {
        write_text(out_path, table.str());
        json params = flags.to_json();
        params["methods"] = methods;
        params["threshold"] = compare_threshold;
        params["format"] = table_format;
        write_manifest(out_path, args, "compare", inputs, params, {out_path}, elapsed_ms(start));
      }
      return any_ok ? kExitOk : kExitInput;
    }
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitUsage;
}

}  // namespace jss::cli
