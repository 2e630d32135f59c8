#pragma once

// Comparison allocators. None of them look at the latency or reliability
// bounds; their allocations are scored with evaluate() afterwards.

#include <span>
#include <vector>

#include "fcsd/model.hpp"
#include "fcsd/solver.hpp"

namespace fcsd {

inline constexpr int kDefaultChunks = 100;

/// rho ~ U[0,1]; lambda is p uniform draws normalized to sum 1.
Allocation random_alloc(const Scenario& scn, const TaskSpec& task, Rng& rng);

/// Shares proportional to CPU frequency, the initiator included.
Allocation wrr_alloc(const Scenario& scn, const TaskSpec& task);

enum class ListRule { MinMin, MaxMin };

/// Classic batch list scheduling of `pieces` (task fractions) onto processors
/// whose time to finish the whole task is `unit_time[j]`. Each round computes
/// every unassigned piece's minimum completion time; Min-Min commits the piece
/// with the smallest of those, Max-Min the largest. Ties go to the lower index.
/// Returns the fraction of the task assigned to each processor.
std::vector<double> list_schedule(std::span<const double> unit_time,
                                  std::span<const double> pieces, ListRule rule);

/// Time for each processor to finish the whole task alone: index 0 is the
/// initiator, index i+1 is fog node i (upload plus compute).
std::vector<double> processor_unit_times(const Scenario& scn, const TaskSpec& task);

/// Task split into `chunks` equal pieces and list-scheduled. Throws
/// std::invalid_argument when chunks < p.
Allocation max_min_alloc(const Scenario& scn, const TaskSpec& task, int chunks = kDefaultChunks);
Allocation min_min_alloc(const Scenario& scn, const TaskSpec& task, int chunks = kDefaultChunks);

/// Converts per-processor fractions (initiator first) to rho and lambda.
Allocation allocation_from_fractions(std::span<const double> fractions);

}  // namespace fcsd
