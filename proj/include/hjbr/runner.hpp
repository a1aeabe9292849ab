#pragma once

#include "hjbr/config.hpp"

namespace hjbr {

/// Execute one subcommand and write its artifacts under config.output_dir.
/// Returns 0 on success, nonzero when a check fails or a solver errors.
///
/// solve    -> value.csv, convergence.csv
/// simulate -> path_<i>.csv per path (under the extracted optimal policy)
/// estimate -> estimate.txt (family of constant policies + extracted policy)
/// verify   -> viscosity.txt, dpp.txt, mc_vs_pde.txt, equicontinuity.txt
/// sweep    -> value_<param>_<k>.csv per swept value + index.csv
int run(const RunConfig& config);

}  // namespace hjbr
