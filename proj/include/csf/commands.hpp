#pragma once

#include "csf/run_config.hpp"

namespace csf {

// Command entry points, one per CLI subcommand. Each returns a process exit
// status (0 on success; verify additionally requires every check to pass) and
// writes its outputs under config.out_dir:
//
//   evolve   history.jsonl + history.jsonl.meta.json
//   measure  measure.json (entropy, total curvature both ways, bound checks)
//   verify   verify.json + verify.csv (selected analyzer checks)
//   rescale  rescale.csv (+ rescale.svg when config.svg), per-slice tau rows
//   report   report.csv rendered from an existing report JSON given as input
//
// Errors surface as a message on stderr and a nonzero status; no partial
// output file is left behind on failure.
int cmd_evolve(const RunConfig& cfg);
int cmd_measure(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);
int cmd_rescale(const RunConfig& cfg);
int cmd_report(const RunConfig& cfg);

}  // namespace csf
