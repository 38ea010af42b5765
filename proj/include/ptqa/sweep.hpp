#pragma once

#include "ptqa/result_table.hpp"
#include "ptqa/sweep_config.hpp"

#include <optional>

namespace ptqa {

/// Evaluates every grid point of the job.  Rows follow the axis order (first
/// axis slowest, inner sample grid fastest) whatever the worker count.  Points
/// that fail carry their message in the error column and nan in the computed
/// cells.  `workers` overrides job.jobs; 0 means hardware concurrency.
ResultTable run_sweep(const SweepJob& job, std::optional<unsigned> workers = std::nullopt);

/// Column to colour by in a heatmap of this job: its primary observable.
std::string primary_column(const SweepJob& job);

/// Basis-state label used in population column names, e.g. "ud" for |up down>.
std::string basis_label(std::size_t index, int n_qubits);

}  // namespace ptqa
