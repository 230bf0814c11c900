// Command-line front end: lumped | sweep | optimize | gradcheck.
// Exit codes: 0 success, 1 input/config error, 2 runtime failure,
// 3 line-search stall during optimization.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cutplug/config.hpp"
#include "cutplug/driver.hpp"
#include "cutplug/io.hpp"

namespace fs = std::filesystem;
using namespace cutplug;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::string losses;  // "", "on", "off"
  std::string design_path;
  bool dump_grad = false;
};

std::optional<bool> losses_override(const std::string& s) {
  if (s == "on") return true;
  if (s == "off") return false;
  return {};
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

DesignVector start_design(const Benchmark& bench, const CommonArgs& args) {
  if (args.design_path.empty()) return bench.baseline();
  std::ifstream in(args.design_path);
  if (!in)
    throw std::invalid_argument("cannot open design file: " + args.design_path);
  return read_design_csv(bench.poisson(), in, args.design_path);
}

void write_boundary_snapshot(const Benchmark& bench, const DesignVector& x,
                             const fs::path& path) {
  LevelSetField phi = bench.level_set(x);
  const CutGeometry cut = classify_and_cut(bench.mesh(), phi);
  auto out = open_out(path);
  export_boundary_polyline(cut, out);
}

int cmd_lumped(const Config& cfg, const CommonArgs& args) {
  LumpedParams lp;
  lp.d = cfg.geometry.d;
  lp.kappa = cfg.geometry.kappa;
  lp.rho0 = cfg.physics.rho0;
  lp.c0 = cfg.physics.c0;
  lp.a_d = cfg.physics.a_d;
  lp.L = cfg.geometry.axial_length();
  const auto rows =
      lumped_response_table(lp, cfg.frequencies.frequencies_hz());
  auto out = open_out(fs::path(args.out_dir) / "lumped.csv");
  write_lumped_csv(rows, out);
  std::cout << "wrote " << (fs::path(args.out_dir) / "lumped.csv").string()
            << " (" << rows.size() << " rows)\n";
  return 0;
}

int cmd_sweep(const Config& cfg, const CommonArgs& args) {
  const Benchmark bench(cfg);
  const DesignVector design = start_design(bench, args);
  const FrequencyResponse resp =
      bench.sweep(design, cfg.frequencies.frequencies_hz(),
                  losses_override(args.losses));
  {
    auto out = open_out(fs::path(args.out_dir) / "sweep.csv");
    write_response_csv(resp, out);
  }
  {
    auto out = open_out(fs::path(args.out_dir) / "sweep.svg");
    write_sweep_svg(resp, out);
  }
  std::cout << "wrote sweep.csv and sweep.svg in " << args.out_dir << " ("
            << resp.rows.size() << " frequencies)\n";
  return 0;
}

int cmd_optimize(const Config& cfg, const CommonArgs& args) {
  const Benchmark bench(cfg);
  const DesignVector start = start_design(bench, args);
  const fs::path out_dir(args.out_dir);

  int eval_count = 0;
  EvalOptions eval_opts;
  eval_opts.want_gradient = true;
  const Objective fn = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
    EvalResult r = bench.evaluate(x, eval_opts);
    grad = std::move(r.grad);
    if (args.dump_grad) {
      char name[40];
      std::snprintf(name, sizeof(name), "design_gradient_%04d.csv",
                    eval_count);
      auto out = open_out(out_dir / name);
      write_design_gradient_csv(bench.poisson(), grad, out);
    }
    ++eval_count;
    return r.J;
  };
  const auto on_iterate = [&](const BfgsIterate& it, const Eigen::VectorXd& x) {
    char name[40];
    std::snprintf(name, sizeof(name), "boundary_%04d.csv", it.iter);
    write_boundary_snapshot(bench, x, out_dir / name);
    std::cout << "iter " << it.iter << "  J = " << format_sig17(it.J)
              << "  |grad| = " << format_sig17(it.grad_inf) << "\n";
  };

  BfgsOptions opts;
  opts.max_iters = cfg.optimization.max_iters;
  opts.grad_tol = cfg.optimization.grad_tol;
  const BfgsResult res = bfgs_minimize(fn, start, opts, on_iterate);

  {
    auto out = open_out(out_dir / "history.csv");
    write_history_csv(res.history, out);
  }
  {
    auto out = open_out(out_dir / "design_final.csv");
    write_design_csv(bench.poisson(), res.x, out);
  }
  const FrequencyResponse final_resp =
      bench.sweep(res.x, cfg.frequencies.frequencies_hz(), {});
  {
    auto out = open_out(out_dir / "response_final.csv");
    write_response_csv(final_resp, out);
  }
  std::cout << "status " << to_string(res.status) << " after "
            << res.iterations << " iterations, J = " << format_sig17(res.J)
            << ", objective evaluations = " << eval_count << "\n";
  return res.status == BfgsStatus::LineSearchStall ? 3 : 0;
}

int cmd_gradcheck(const Config& cfg, const CommonArgs& args, int components,
                  unsigned seed) {
  const Benchmark bench(cfg);
  const DesignVector design = start_design(bench, args);
  const auto rows = bench.grad_check(design, components, seed);
  {
    auto out = open_out(fs::path(args.out_dir) / "gradcheck.csv");
    write_gradcheck_csv(rows, out);
  }
  if (args.dump_grad) {
    EvalOptions opts;
    opts.want_gradient = true;
    const EvalResult r = bench.evaluate(design, opts);
    auto out = open_out(fs::path(args.out_dir) / "design_gradient_0000.csv");
    write_design_gradient_csv(bench.poisson(), r.grad, out);
  }
  double max_rel = 0.0;
  for (const GradCheckRow& r : rows) max_rel = std::max(max_rel, r.rel_err);
  std::cout << "gradcheck: " << rows.size()
            << " components, max rel_err = " << format_sig17(max_rel) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-plug shape optimization on an embedded-boundary "
               "Helmholtz benchmark"};
  app.require_subcommand(1);

  CommonArgs args;
  int components = 10;
  unsigned seed = 1;

  auto add_common = [&](CLI::App* sub, bool with_design) {
    sub->add_option("--config", args.config_path, "configuration file")
        ->required();
    sub->add_option("--out", args.out_dir, "output directory (created)");
    sub->add_option("--losses", args.losses, "override wall losses")
        ->check(CLI::IsMember({"on", "off"}));
    if (with_design)
      sub->add_option("--design", args.design_path,
                      "start design CSV (default: straight-channel baseline)");
  };

  CLI::App* lumped = app.add_subcommand(
      "lumped", "single-degree-of-freedom response table");
  add_common(lumped, false);
  CLI::App* sweep =
      app.add_subcommand("sweep", "frequency sweep of the current design");
  add_common(sweep, true);
  CLI::App* optimize =
      app.add_subcommand("optimize", "BFGS shape optimization run");
  add_common(optimize, true);
  optimize->add_flag("--dump-grad", args.dump_grad,
                     "write the design gradient of every objective evaluation");
  CLI::App* gradcheck = app.add_subcommand(
      "gradcheck", "adjoint gradient vs central finite differences");
  add_common(gradcheck, true);
  gradcheck->add_option("--components", components,
                        "number of random components to test");
  gradcheck->add_option("--seed", seed, "random seed");
  gradcheck->add_flag("--dump-grad", args.dump_grad,
                      "also write the full adjoint design gradient");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // help/version exit 0, usage errors exit 1
  }

  Config cfg;
  try {
    cfg = parse_config_file(args.config_path);
    if (!args.losses.empty()) cfg.physics.losses = args.losses == "on";
    fs::create_directories(args.out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (lumped->parsed()) return cmd_lumped(cfg, args);
    if (sweep->parsed()) return cmd_sweep(cfg, args);
    if (optimize->parsed()) return cmd_optimize(cfg, args);
    return cmd_gradcheck(cfg, args, components, seed);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
