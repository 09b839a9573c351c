#include "support.hpp"

#include "hsap/dataset.hpp"
#include "hsap/engine.hpp"
#include "hsap/errors.hpp"
#include "hsap/plot.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

namespace {

using namespace hsap;
using tool::ParamSet;
using tool::UsageError;

ClusterMode parse_mode(const std::string& s) {
  if (s == "linear") return ClusterMode::Linear;
  if (s == "secants") return ClusterMode::Secants;
  throw UsageError("unknown mode '" + s + "' (expected linear|secants)");
}

Metric parse_metric(const std::string& s) {
  if (s == "euclidean") return Metric::Euclidean;
  if (s == "cosine") return Metric::Cosine;
  throw UsageError("unknown metric '" + s + "' (expected euclidean|cosine)");
}

InitStrategy parse_init(const std::string& s) {
  if (s == "pca") return InitStrategy::Pca;
  if (s == "random") return InitStrategy::Random;
  throw UsageError("unknown init '" + s + "' (expected pca|random)");
}

AnchorStrategy parse_anchor_strategy(const std::string& s) {
  if (s == "random") return AnchorStrategy::Random;
  if (s == "extremal") return AnchorStrategy::Extremal;
  throw UsageError("unknown anchor strategy '" + s + "' (expected random|extremal)");
}

FileFormat resolve_format(const std::string& choice, const std::string& path) {
  if (choice == "csv") return FileFormat::Csv;
  if (choice == "binary") return FileFormat::Binary;
  if (choice == "auto")
    return path.ends_with(".csv") ? FileFormat::Csv : FileFormat::Binary;
  throw UsageError("unknown input format '" + choice + "' (expected auto|csv|binary)");
}

std::string render_trace_csv(const std::vector<TraceRecord>& trace) {
  std::string s = "iteration,objective,kind,source_id\n";
  for (const TraceRecord& r : trace) {
    s += std::to_string(r.iteration);
    s += ',';
    s += tool::format_double(r.objective);
    s += ',';
    s += candidate_kind_name(r.kind);
    s += ',';
    s += std::to_string(r.source);
    s += '\n';
  }
  return s;
}

std::string render_report(const HsapReport& r) {
  std::string s;
  s += "final_objective = " + tool::format_double(r.final_objective) + "\n";
  s += "bilipschitz_a = " + tool::format_double(r.bilipschitz_a) + "\n";
  s += "iterations_run = " + std::to_string(r.iterations_run) + "\n";
  s += "wall_time_ms = " + tool::format_double(r.wall_time_ms) + "\n";
  return s;
}

std::string render_profile_csv(const std::vector<ProfileEntry>& profile) {
  std::string s = "k,final_objective\n";
  for (const ProfileEntry& e : profile) {
    s += std::to_string(e.k);
    s += ',';
    s += tool::format_double(e.final_objective);
    s += '\n';
  }
  return s;
}

double parse_csv_field(const std::string& path, Index line_no, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw DataError(path + ":" + std::to_string(line_no) + ": bad numeric field '" +
                    text + "'");
  return v;
}

void load_trace_xy(const std::string& path, std::vector<double>& x,
                   std::vector<double>& y) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open trace file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("trace file is empty: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.rfind("iteration,objective", 0) != 0)
    throw DataError("trace file lacks the iteration,objective header: " + path);

  Index line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    if (c1 == std::string::npos)
      throw DataError(path + ":" + std::to_string(line_no) + ": expected CSV columns");
    const auto c2 = line.find(',', c1 + 1);
    const std::string f0 = line.substr(0, c1);
    const std::string f1 =
        line.substr(c1 + 1, (c2 == std::string::npos ? line.size() : c2) - c1 - 1);
    x.push_back(parse_csv_field(path, line_no, f0));
    y.push_back(parse_csv_field(path, line_no, f1));
  }
  if (x.empty()) throw DataError("trace file has no rows: " + path);
}

struct RunOpts {
  std::string config;
  std::string input;
  std::string format = "auto";
  std::string labels_path;
  std::string out;
  Index dim = 2;
  Index clusters = 0;
  Index cluster_dim = 0;
  std::string mode = "linear";
  double alpha = 0.01;
  Index iters = 80;
  Index anchors = 20;
  std::string anchor_strategy = "random";
  double energy = 0.95;
  std::uint64_t within_count = 1000;
  std::string metric = "euclidean";
  std::string init = "pca";
  std::uint64_t seed = 42;
  std::uint64_t cap = kDefaultSecantCap;
  double stop_tol = 1e-6;
  Index stop_window = 20;
  bool full_svd = false;
  int threads = 0;
};

struct RunOptPtrs {
  CLI::Option* input = nullptr;
  CLI::Option* format = nullptr;
  CLI::Option* labels = nullptr;
  CLI::Option* out = nullptr;
  CLI::Option* dim = nullptr;
  CLI::Option* clusters = nullptr;
  CLI::Option* cluster_dim = nullptr;
  CLI::Option* mode = nullptr;
  CLI::Option* alpha = nullptr;
  CLI::Option* iters = nullptr;
  CLI::Option* anchors = nullptr;
  CLI::Option* anchor_strategy = nullptr;
  CLI::Option* energy = nullptr;
  CLI::Option* within_count = nullptr;
  CLI::Option* metric = nullptr;
  CLI::Option* init = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* cap = nullptr;
  CLI::Option* stop_tol = nullptr;
  CLI::Option* stop_window = nullptr;
  CLI::Option* full_svd = nullptr;
  CLI::Option* threads = nullptr;
};

RunOptPtrs add_run_options(CLI::App* cmd, RunOpts& o, bool with_dim) {
  RunOptPtrs p;
  cmd->add_option("--config", o.config, "key = value config file; flags win over it");
  p.input = cmd->add_option("--input", o.input, "data matrix, one point per row");
  p.format = cmd->add_option("--input-format", o.format, "auto|csv|binary");
  p.labels = cmd->add_option("--labels", o.labels_path,
                             "cluster labels file, one integer (1..N) per point");
  p.out = cmd->add_option("--out", o.out, "output path prefix");
  if (with_dim) p.dim = cmd->add_option("--dim", o.dim, "projection dimension k");
  p.clusters =
      cmd->add_option("--clusters", o.clusters,
                      "number of clusters; required unless --labels is given");
  p.mode = cmd->add_option("--mode", o.mode, "cluster representation: linear|secants");
  p.alpha = cmd->add_option("--alpha", o.alpha, "shift step size, in (0, 1)");
  p.iters = cmd->add_option("--iters", o.iters, "maximum iterations");
  p.anchors = cmd->add_option("--anchors", o.anchors,
                              "anchor points per cluster for cross-cluster secants");
  p.anchor_strategy = cmd->add_option("--anchor-strategy", o.anchor_strategy,
                                      "anchor selection: random|extremal");
  p.energy = cmd->add_option("--energy", o.energy,
                             "spectral energy fraction for cluster bases (linear mode)");
  p.cluster_dim = cmd->add_option("--cluster-dim", o.cluster_dim,
                                  "fixed per-cluster basis dimension (linear mode)");
  p.within_count = cmd->add_option(
      "--within-count", o.within_count,
      "within-cluster secant sample size, 0 = all pairs (secants mode)");
  p.metric = cmd->add_option("--metric", o.metric, "clustering metric: euclidean|cosine");
  p.init = cmd->add_option("--init", o.init, "initial frame: pca|random");
  p.seed = cmd->add_option("--seed", o.seed, "master seed for every random choice");
  p.cap = cmd->add_option("--cap", o.cap, "largest secant set this run may build");
  p.stop_tol = cmd->add_option("--stop-tol", o.stop_tol,
                               "trailing-window relative change tolerance, 0 disables");
  p.stop_window = cmd->add_option("--stop-window", o.stop_window,
                                  "trailing-window length for the stopping rule");
  p.full_svd = cmd->add_flag("--full-svd", o.full_svd,
                             "use full decompositions in the candidate scan");
  p.threads = cmd->add_option("--threads", o.threads, "worker threads, 0 = all cores");
  return p;
}

void resolve_run_options(ParamSet& params, const RunOptPtrs& p, RunOpts& o,
                         bool with_dim) {
  params.resolve(p.input, "input", o.input);
  params.resolve(p.format, "input_format", o.format);
  params.resolve(p.labels, "labels", o.labels_path);
  params.resolve(p.out, "out", o.out);
  if (with_dim) params.resolve(p.dim, "dim", o.dim);
  params.resolve(p.clusters, "clusters", o.clusters);
  params.resolve(p.mode, "mode", o.mode);
  params.resolve(p.alpha, "alpha", o.alpha);
  params.resolve(p.iters, "iters", o.iters);
  params.resolve(p.anchors, "anchors", o.anchors);
  params.resolve(p.anchor_strategy, "anchor_strategy", o.anchor_strategy);
  params.resolve(p.energy, "energy", o.energy);
  params.resolve(p.cluster_dim, "cluster_dim", o.cluster_dim);
  params.resolve(p.within_count, "within_count", o.within_count);
  params.resolve(p.metric, "metric", o.metric);
  params.resolve(p.init, "init", o.init);
  params.resolve(p.seed, "seed", o.seed);
  params.resolve(p.cap, "cap", o.cap);
  params.resolve(p.stop_tol, "stop_tol", o.stop_tol);
  params.resolve(p.stop_window, "stop_window", o.stop_window);
  params.resolve(p.full_svd, "full_svd", o.full_svd);
  params.resolve(p.threads, "threads", o.threads);
}

/// Validates flag combinations, loads labels when given, trims parameters
/// the chosen mode ignores, and assembles the engine configuration.
HsapConfig build_run_config(ParamSet& params, RunOpts& o,
                            std::vector<std::pair<std::string, std::string>>& digests) {
  if (o.input.empty()) throw UsageError("--input is required");
  if (o.out.empty()) throw UsageError("--out is required");

  const ClusterMode mode = parse_mode(o.mode);
  if (mode == ClusterMode::Secants) {
    if (params.was_set("energy"))
      throw UsageError("--energy applies to linear mode only");
    if (params.was_set("cluster_dim"))
      throw UsageError("--cluster-dim applies to linear mode only");
    params.drop("energy");
    params.drop("cluster_dim");
  } else {
    if (params.was_set("within_count"))
      throw UsageError("--within-count applies to secants mode only");
    params.drop("within_count");
    if (params.was_set("cluster_dim")) {
      if (params.was_set("energy"))
        throw UsageError("--cluster-dim and --energy are mutually exclusive");
      params.drop("energy");
    } else {
      params.drop("cluster_dim");
    }
  }

  digests.emplace_back("input", tool::sha256_file_hex(o.input));

  std::vector<int> labels;
  Index clusters = o.clusters;
  if (params.was_set("labels")) {
    labels = load_labels(o.labels_path);
    digests.emplace_back("labels", tool::sha256_file_hex(o.labels_path));
    if (labels.empty()) throw DataError("labels file has no entries: " + o.labels_path);
    if (!params.was_set("clusters")) {
      clusters = *std::max_element(labels.begin(), labels.end());
      params.note("clusters", std::to_string(clusters), "labels-file");
    }
  } else {
    params.drop("labels");
    if (!params.was_set("clusters"))
      throw UsageError("either --clusters or --labels is required");
  }

  HsapConfig hc;
  hc.k = o.dim;
  hc.clusters = clusters;
  hc.mode = mode;
  hc.alpha = o.alpha;
  hc.max_iters = o.iters;
  hc.anchor_count = o.anchors;
  hc.anchor_strategy = parse_anchor_strategy(o.anchor_strategy);
  hc.energy = o.energy;
  if (mode == ClusterMode::Linear && params.was_set("cluster_dim"))
    hc.fixed_cluster_dim = o.cluster_dim;
  hc.within_count = o.within_count;
  hc.metric = parse_metric(o.metric);
  hc.init = parse_init(o.init);
  hc.seed = o.seed;
  hc.labels = std::move(labels);
  hc.stop_tol = o.stop_tol;
  hc.stop_window = o.stop_window;
  hc.cap = o.cap;
  hc.full_svd = o.full_svd;
  hc.threads = o.threads;
  return hc;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"secant-preserving linear dimensionality reduction"};
  app.set_version_flag("--version", std::string(HSAP_TOOL_VERSION));
  app.require_subcommand(1);

  struct {
    std::string config;
    std::string out;
    Index per_line = 100;
    Index plane = 500;
    std::vector<double> range{-5.0, 5.0};
    std::uint64_t seed = 42;
  } sy;
  CLI::App* synth =
      app.add_subcommand("synth", "generate the two-lines-and-a-plane sample set");
  synth->add_option("--config", sy.config, "key = value config file; flags win over it");
  CLI::Option* sy_out = synth->add_option("--out", sy.out, "output path prefix");
  CLI::Option* sy_per_line =
      synth->add_option("--per-line", sy.per_line, "points per line segment");
  CLI::Option* sy_plane = synth->add_option("--plane", sy.plane, "points on the plane patch");
  CLI::Option* sy_range =
      synth->add_option("--range", sy.range, "parameter range, two numbers")->expected(2);
  CLI::Option* sy_seed = synth->add_option("--seed", sy.seed, "sampling seed");

  RunOpts pr;
  CLI::App* project =
      app.add_subcommand("project", "fit a secant-preserving projection to a data matrix");
  const RunOptPtrs pr_ptrs = add_run_options(project, pr, true);

  RunOpts sw;
  Index sw_kmin_v = 1;
  Index sw_kmax_v = 1;
  bool sw_svg_v = false;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "fit projections over a range of dimensions and record the profile");
  const RunOptPtrs sw_ptrs = add_run_options(sweep, sw, false);
  CLI::Option* sw_kmin = sweep->add_option("--kmin", sw_kmin_v, "smallest dimension");
  CLI::Option* sw_kmax = sweep->add_option("--kmax", sw_kmax_v, "largest dimension");
  CLI::Option* sw_svg =
      sweep->add_flag("--svg", sw_svg_v, "also render the profile as an SVG chart");

  struct {
    std::string config;
    std::string trace;
    std::string points;
    std::string labels;
    std::string out;
  } pl;
  CLI::App* plot = app.add_subcommand("plot", "render a trace or a point set as SVG");
  plot->add_option("--config", pl.config, "key = value config file; flags win over it");
  CLI::Option* pl_trace = plot->add_option("--trace", pl.trace, "trace CSV to chart");
  CLI::Option* pl_points =
      plot->add_option("--points", pl.points, "2 or 3 column point matrix to scatter");
  CLI::Option* pl_labels =
      plot->add_option("--labels", pl.labels, "labels file coloring the scatter");
  CLI::Option* pl_out = plot->add_option("--out", pl.out, "output SVG path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(synth)) {
      std::vector<std::pair<std::string, std::string>> digests;
      std::map<std::string, std::string> conf;
      if (!sy.config.empty()) conf = tool::parse_config_file(sy.config);
      ParamSet params(std::move(conf));
      params.resolve(sy_out, "out", sy.out);
      params.resolve(sy_per_line, "per_line", sy.per_line);
      params.resolve(sy_plane, "plane", sy.plane);
      double lo = sy.range[0];
      double hi = sy.range[1];
      params.resolve_range(sy_range, "range", lo, hi);
      params.resolve(sy_seed, "seed", sy.seed);
      params.check_unused_config();
      if (sy.out.empty()) throw UsageError("--out is required");
      if (!sy.config.empty())
        digests.emplace_back("config", tool::sha256_file_hex(sy.config));

      SynthConfig sc;
      sc.per_line = sy.per_line;
      sc.plane = sy.plane;
      sc.range_lo = lo;
      sc.range_hi = hi;
      sc.seed = sy.seed;
      const DataMatrix d = gen_synthetic(sc);

      save_matrix(d.points, sy.out + ".csv", FileFormat::Csv);
      save_labels(d.labels, sy.out + "_labels.csv");
      tool::write_manifest(sy.out + "_manifest.txt", "synth", params.entries(), digests);
      std::cout << "wrote " << d.points.rows() << " points to " << sy.out << ".csv\n";
      return 0;
    }

    if (app.got_subcommand(project)) {
      std::vector<std::pair<std::string, std::string>> digests;
      std::map<std::string, std::string> conf;
      if (!pr.config.empty()) conf = tool::parse_config_file(pr.config);
      ParamSet params(std::move(conf));
      resolve_run_options(params, pr_ptrs, pr, true);
      params.check_unused_config();
      const HsapConfig hc = build_run_config(params, pr, digests);
      if (!pr.config.empty())
        digests.emplace_back("config", tool::sha256_file_hex(pr.config));

      DataMatrix data;
      data.points = load_matrix(pr.input, resolve_format(pr.format, pr.input));

      const HsapResult res = run_hsap(data, hc);
      print_warnings(res.warnings);

      const Matrix projected = data.points * res.projection;
      save_matrix(res.projection, pr.out + "_projection.csv", FileFormat::Csv);
      save_matrix(projected, pr.out + "_projected.csv", FileFormat::Csv);
      tool::write_text_file(pr.out + "_trace.csv", render_trace_csv(res.trace));
      tool::write_text_file(pr.out + "_report.txt", render_report(res.report));
      tool::write_manifest(pr.out + "_manifest.txt", "project", params.entries(), digests);
      std::cout << "final objective " << tool::format_double(res.report.final_objective)
                << " after " << res.report.iterations_run << " iterations\n";
      return 0;
    }

    if (app.got_subcommand(sweep)) {
      std::vector<std::pair<std::string, std::string>> digests;
      std::map<std::string, std::string> conf;
      if (!sw.config.empty()) conf = tool::parse_config_file(sw.config);
      ParamSet params(std::move(conf));
      resolve_run_options(params, sw_ptrs, sw, false);
      params.resolve(sw_kmin, "kmin", sw_kmin_v);
      params.resolve(sw_kmax, "kmax", sw_kmax_v);
      params.resolve(sw_svg, "svg", sw_svg_v);
      params.check_unused_config();
      if (!params.was_set("kmin") || !params.was_set("kmax"))
        throw UsageError("sweep needs --kmin and --kmax");
      const HsapConfig hc = build_run_config(params, sw, digests);
      if (!sw.config.empty())
        digests.emplace_back("config", tool::sha256_file_hex(sw.config));

      DataMatrix data;
      data.points = load_matrix(sw.input, resolve_format(sw.format, sw.input));

      const std::vector<ProfileEntry> profile =
          dimension_sweep(data, hc, sw_kmin_v, sw_kmax_v);
      tool::write_text_file(sw.out + "_profile.csv", render_profile_csv(profile));
      if (sw_svg_v) {
        std::vector<double> x;
        std::vector<double> y;
        for (const ProfileEntry& e : profile) {
          x.push_back(static_cast<double>(e.k));
          y.push_back(e.final_objective);
        }
        tool::write_text_file(sw.out + "_profile.svg",
                              render_line_svg(x, y, "k", "final objective"));
      }
      tool::write_manifest(sw.out + "_manifest.txt", "sweep", params.entries(), digests);
      std::cout << "swept k = " << sw_kmin_v << ".." << sw_kmax_v << ", wrote " << sw.out
                << "_profile.csv\n";
      return 0;
    }

    if (app.got_subcommand(plot)) {
      std::vector<std::pair<std::string, std::string>> digests;
      std::map<std::string, std::string> conf;
      if (!pl.config.empty()) conf = tool::parse_config_file(pl.config);
      ParamSet params(std::move(conf));
      params.resolve(pl_trace, "trace", pl.trace);
      params.resolve(pl_points, "points", pl.points);
      params.resolve(pl_labels, "labels", pl.labels);
      params.resolve(pl_out, "out", pl.out);
      params.check_unused_config();

      if (params.was_set("trace") == params.was_set("points"))
        throw UsageError("plot needs exactly one of --trace or --points");
      if (params.was_set("labels") && !params.was_set("points"))
        throw UsageError("--labels only applies to --points");
      if (pl.out.empty()) throw UsageError("--out is required");
      if (!params.was_set("trace")) params.drop("trace");
      if (!params.was_set("points")) params.drop("points");
      if (!params.was_set("labels")) params.drop("labels");

      std::string svg;
      if (params.was_set("trace")) {
        digests.emplace_back("trace", tool::sha256_file_hex(pl.trace));
        std::vector<double> x;
        std::vector<double> y;
        load_trace_xy(pl.trace, x, y);
        svg = render_line_svg(x, y, "iteration", "objective");
      } else {
        digests.emplace_back("points", tool::sha256_file_hex(pl.points));
        const Matrix pts = load_matrix(pl.points, resolve_format("auto", pl.points));
        if (pts.cols() != 2 && pts.cols() != 3)
          throw DataError("scatter input must have 2 or 3 columns, got " +
                          std::to_string(pts.cols()));
        std::vector<int> labels;
        if (params.was_set("labels")) {
          labels = load_labels(pl.labels);
          digests.emplace_back("labels", tool::sha256_file_hex(pl.labels));
          if (static_cast<Index>(labels.size()) != pts.rows())
            throw DataError("labels count does not match point count");
        } else {
          labels.assign(static_cast<std::size_t>(pts.rows()), 1);
        }
        svg = render_scatter_svg(pts, labels);
      }
      if (!pl.config.empty())
        digests.emplace_back("config", tool::sha256_file_hex(pl.config));

      tool::write_text_file(pl.out, svg);
      tool::write_manifest(pl.out + ".manifest.txt", "plot", params.entries(), digests);
      std::cout << "wrote " << pl.out << "\n";
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }

  return 0;
}
