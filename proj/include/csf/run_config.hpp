#pragma once

#include <cstdint>
#include <string>

#include "csf/catalog.hpp"
#include "csf/curve.hpp"

namespace csf {

// Flat bag of command parameters. Every output file embeds hash() of the
// canonical serialization, so identical configs reproduce outputs byte-exactly
// and any result can be traced to the exact invocation that made it.
struct RunConfig {
  std::string command;            // evolve | measure | verify | rescale | report
  std::string input;              // catalog spec ("circle:r0=1") or file path
  std::string out_dir = "out";
  std::string scheme = "semi_implicit";
  double dt = 0.0;                // 0 = auto from spacing
  double t_end = 0.1;
  int record_stride = 10;
  int n_samples = 512;
  double window_lo = 0.0;         // parameter window for open catalog flows
  double window_hi = 0.0;         // (both 0 = per-flow default)
  double slice_t = 0.0;           // time at which a flow is sampled into a curve
  std::string analyzers = "all";  // comma list for verify
  double x0 = 0.0, y0 = 0.0;      // spacetime origin for monotone series / rescaling
  double t0 = 0.0;
  double tau_lo = -10.0, tau_hi = -5.0;
  int n_tau = 20;
  double ball_radius = 1.0;
  double sheet_eps = 0.05;
  std::uint64_t seed = 20210417;  // pseudo-random center sampling
  bool svg = false;

  // "key=value" lines, keys sorted, doubles at full round-trip precision.
  std::string canonical_text() const;
  std::string hash() const;  // FNV-1a 64 over canonical_text, 16 hex digits

  // Accepts any canonical key; unknown keys throw. Used by the config-file
  // reader and by CLI flag handlers.
  void set(const std::string& key, const std::string& value);
};

// Simple "key = value" file, '#' comments, later keys override earlier ones.
RunConfig load_config_file(const std::string& path, RunConfig base = {});

// Catalog specs: name[:k=v[,k=v...]].
//   circle:r0=1
//   grimreaper:rot=0,shiftx=0,shifty=0
//   line:angle=0,offset=0,mult=1
//   oval:
//   logspiral:a=1,k=1,phi0=0,phi1=12.566
//   sine:x0=0,x1=6.2832
// Flows (circle, grimreaper, line, oval) support parse_catalog_flow; any name
// supports parse_catalog_curve, which samples flows at time t (key t=...,
// default 0, oval defaults to -0.5) with n samples. Window keys for open
// flows: halfwidth (parameter units), or height / x for the grim reaper.
bool is_catalog_spec(const std::string& spec);
AnalyticFlow parse_catalog_flow(const std::string& spec);
DiscreteCurve parse_catalog_curve(const std::string& spec, int n_samples);

}  // namespace csf
