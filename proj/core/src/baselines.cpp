#include "fcsd/baselines.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace fcsd {

namespace {

void require_fog_nodes(const Scenario& scn) {
  if (scn.size() == 0) throw std::invalid_argument("baseline allocators need at least one fog node");
}

Allocation chunked(const Scenario& scn, const TaskSpec& task, int chunks, ListRule rule) {
  require_fog_nodes(scn);
  if (chunks < static_cast<int>(scn.size())) {
    throw std::invalid_argument("chunks must be >= number of fog nodes");
  }
  const std::vector<double> unit = processor_unit_times(scn, task);
  const std::vector<double> pieces(static_cast<std::size_t>(chunks), 1.0 / chunks);
  return allocation_from_fractions(list_schedule(unit, pieces, rule));
}

}  // namespace

Allocation random_alloc(const Scenario& scn, const TaskSpec&, Rng& rng) {
  require_fog_nodes(scn);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Allocation a;
  a.rho = u(rng);
  a.lambda.resize(scn.size());
  double sum = 0.0;
  for (double& l : a.lambda) {
    l = u(rng);
    sum += l;
  }
  if (sum > 0.0) {
    for (double& l : a.lambda) l /= sum;
  } else {
    std::fill(a.lambda.begin(), a.lambda.end(), 1.0 / static_cast<double>(scn.size()));
  }
  return a;
}

Allocation wrr_alloc(const Scenario& scn, const TaskSpec&) {
  require_fog_nodes(scn);
  double fog_total = 0.0;
  for (const DroneNode& n : scn.fog_nodes()) fog_total += n.cpu_freq_hz;
  const double f0 = scn.initiator().cpu_freq_hz;
  Allocation a;
  a.rho = f0 / (f0 + fog_total);
  a.lambda.reserve(scn.size());
  for (const DroneNode& n : scn.fog_nodes()) a.lambda.push_back(n.cpu_freq_hz / fog_total);
  return a;
}

std::vector<double> processor_unit_times(const Scenario& scn, const TaskSpec& task) {
  std::vector<double> unit;
  unit.reserve(scn.size() + 1);
  unit.push_back(local_latency(task, scn.initiator().cpu_freq_hz, 1.0));
  for (std::size_t i = 0; i < scn.size(); ++i) {
    const double rate = scn.link_rate(i);
    const double up = rate > 0.0 ? upload_latency(task, scn.channel(), rate, 0.0, 1.0)
                                 : std::numeric_limits<double>::infinity();
    unit.push_back(up + compute_latency(task, scn.fog_nodes()[i].cpu_freq_hz, 0.0, 1.0));
  }
  return unit;
}

std::vector<double> list_schedule(std::span<const double> unit_time,
                                  std::span<const double> pieces, ListRule rule) {
  if (unit_time.empty()) throw std::invalid_argument("list_schedule needs a processor");
  const std::size_t m = unit_time.size();
  std::vector<double> ready(m, 0.0);
  std::vector<double> assigned(m, 0.0);
  std::vector<bool> done(pieces.size(), false);

  for (std::size_t round = 0; round < pieces.size(); ++round) {
    std::size_t pick_piece = pieces.size();
    std::size_t pick_proc = 0;
    double pick_time = 0.0;
    for (std::size_t t = 0; t < pieces.size(); ++t) {
      if (done[t]) continue;
      std::size_t best = 0;
      double best_time = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < m; ++j) {
        const double c = ready[j] + pieces[t] * unit_time[j];
        if (c < best_time) {
          best_time = c;
          best = j;
        }
      }
      const bool better = pick_piece == pieces.size() ||
                          (rule == ListRule::MinMin ? best_time < pick_time
                                                    : best_time > pick_time);
      if (better) {
        pick_piece = t;
        pick_proc = best;
        pick_time = best_time;
      }
    }
    done[pick_piece] = true;
    ready[pick_proc] = pick_time;
    assigned[pick_proc] += pieces[pick_piece];
  }
  return assigned;
}

Allocation allocation_from_fractions(std::span<const double> fractions) {
  if (fractions.size() < 2) throw std::invalid_argument("need initiator and fog fractions");
  const double total = std::accumulate(fractions.begin(), fractions.end(), 0.0);
  if (!(total > 0.0)) throw std::invalid_argument("fractions must have a positive sum");
  Allocation a;
  a.rho = std::clamp(fractions[0] / total, 0.0, 1.0);
  const std::size_t p = fractions.size() - 1;
  const double offloaded = std::accumulate(fractions.begin() + 1, fractions.end(), 0.0);
  if (offloaded > 0.0) {
    for (std::size_t i = 0; i < p; ++i) a.lambda.push_back(fractions[i + 1] / offloaded);
  } else {
    // Nothing offloaded: any split satisfies the assignment equality.
    a.lambda.assign(p, 1.0 / static_cast<double>(p));
    a.rho = 1.0;
  }
  return a;
}

Allocation max_min_alloc(const Scenario& scn, const TaskSpec& task, int chunks) {
  return chunked(scn, task, chunks, ListRule::MaxMin);
}

Allocation min_min_alloc(const Scenario& scn, const TaskSpec& task, int chunks) {
  return chunked(scn, task, chunks, ListRule::MinMin);
}

}  // namespace fcsd
