// Command-line front end: evolve | measure | verify | rescale | report.
//
// Every run is a RunConfig; flags override an optional "key = value" config
// file (--config), and each output embeds the config hash for traceability.

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "csf/commands.hpp"
#include "csf/run_config.hpp"

int main(int argc, char** argv) {
  csf::RunConfig cfg;

  // The config file must apply before flag parsing so flags can override it;
  // scan for --config ahead of CLI11.
  try {
    for (int i = 1; i < argc; ++i) {
      const std::string a = argv[i];
      if (a == "--config" && i + 1 < argc)
        cfg = csf::load_config_file(argv[i + 1], cfg);
      else if (a.rfind("--config=", 0) == 0)
        cfg = csf::load_config_file(a.substr(9), cfg);
    }
  } catch (const std::exception& e) {
    std::cerr << "csflab: " << e.what() << "\n";
    return 1;
  }

  CLI::App app{"curve shortening flow laboratory"};
  app.require_subcommand(1);

  std::string config_path;  // consumed above; declared so CLI11 accepts it
  int status = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("input", cfg.input,
                    "catalog spec (circle:r0=1, grimreaper:rot=0, line:angle=0, oval:, "
                    "logspiral:k=1, sine:x1=6.28) or input file path");
    sub->add_option("--config", config_path, "key = value config file, applied before flags");
    sub->add_option("--out-dir", cfg.out_dir, "output directory");
    sub->add_option("--n-samples", cfg.n_samples, "samples for catalog curves");
    sub->add_option("--slice-t", cfg.slice_t, "time at which a catalog flow is sampled");
    sub->add_option("--window-lo", cfg.window_lo, "parameter window for open catalog flows");
    sub->add_option("--window-hi", cfg.window_hi, "parameter window for open catalog flows");
    sub->add_option("--x0", cfg.x0, "spacetime origin x");
    sub->add_option("--y0", cfg.y0, "spacetime origin y");
    sub->add_option("--t0", cfg.t0, "spacetime origin t");
    sub->add_option("--seed", cfg.seed, "seed for randomized sampling");
  };

  auto* ev = app.add_subcommand("evolve", "run the flow and record a history");
  add_common(ev);
  ev->add_option("--scheme", cfg.scheme, "explicit_euler | semi_implicit");
  ev->add_option("--dt", cfg.dt, "time step (0 = auto from spacing)");
  ev->add_option("--t-end", cfg.t_end, "final time");
  ev->add_option("--record-stride", cfg.record_stride, "record every k-th step");
  ev->callback([&] {
    cfg.command = "evolve";
    status = csf::cmd_evolve(cfg);
  });

  auto* me = app.add_subcommand("measure", "entropy and total curvature of one curve");
  add_common(me);
  me->callback([&] {
    cfg.command = "measure";
    status = csf::cmd_measure(cfg);
  });

  auto* ve = app.add_subcommand("verify", "run invariant checks over a history");
  add_common(ve);
  ve->add_option("--analyzers", cfg.analyzers,
                 "comma list: length,huisken,theta2,sturm_theta,sturm_phi_s,sturm_kappa,"
                 "extrema,angle_range,divergence (default all applicable)");
  ve->add_option("--t-end", cfg.t_end, "end time for analytic catalog histories");
  ve->add_option("--n-tau", cfg.n_tau, "slice count for analytic catalog histories");
  ve->callback([&] {
    cfg.command = "verify";
    status = csf::cmd_verify(cfg);
  });

  auto* re = app.add_subcommand("rescale", "parabolic rescaling about (x0, y0, t0)");
  add_common(re);
  re->add_option("--tau-lo", cfg.tau_lo, "rescaled-time window start");
  re->add_option("--tau-hi", cfg.tau_hi, "rescaled-time window end");
  re->add_option("--n-tau", cfg.n_tau, "number of rescaled slices");
  re->add_option("--ball-radius", cfg.ball_radius, "clip ball for sheet counting");
  re->add_option("--sheet-eps", cfg.sheet_eps, "graph tolerance for sheet counting");
  re->add_flag("--svg", cfg.svg, "also write an overlay SVG of the rescaled slices");
  re->callback([&] {
    cfg.command = "rescale";
    status = csf::cmd_rescale(cfg);
  });

  auto* rp = app.add_subcommand("report", "render a report JSON to CSV");
  add_common(rp);
  rp->callback([&] {
    cfg.command = "report";
    status = csf::cmd_report(cfg);
  });

  CLI11_PARSE(app, argc, argv);
  return status;
}
