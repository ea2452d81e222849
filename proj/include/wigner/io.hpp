#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wigner/kernels.hpp"
#include "wigner/observables.hpp"
#include "wigner/simulation.hpp"

namespace wigner {

/// '#'-prefixed metadata lines written above the CSV header.
using CsvMeta = std::vector<std::pair<std::string, std::string>>;

/// Columns t,mass,pr,mean_x,mean_p,var_x,var_p,uncertainty.
void write_series_csv(const std::string& path, const ObservableSeries& series, const CsvMeta& meta = {});

/// Columns x,k,f on the collocation points (each shared element end point
/// once), or on the uniform mesh when n_um > 0.
void write_snapshot_csv(const std::string& path, const WignerState& state, int n_um = 0, const CsvMeta& meta = {});

/// Columns x1,x2,fsm on the collocation points (shared end points once).
void write_marginal_csv(const std::string& path, const PhaseGrid& grid, const MarginalSnapshot& snap,
                        const CsvMeta& meta = {});

/// Columns x,nu,re_c,im_c; one row per spatial point and mode (1-D tables).
void write_table_csv(const std::string& path, const KernelTable& table, const CsvMeta& meta = {});

/// Snapshot file name for a time, e.g. snapshot_t2.5.csv.
std::string snapshot_file_name(double t);

}  // namespace wigner
