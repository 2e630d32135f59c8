#pragma once

// System model for fog-assisted offloading in a drone swarm: link rates,
// latencies, reliabilities, energies and constraint feasibility.
//
// All quantities are SI: bits, seconds, joules, hertz, watts, meters.
// Every function here is pure; a Scenario is immutable once constructed
// and may be shared freely between threads.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace fcsd {

inline constexpr double kBitsPerMegabyte = 8e6;
/// Absolute tolerance on rho + sum(lambda)(1 - rho) == 1.
inline constexpr double kNormalizationTolerance = 1e-9;
/// Link distances are clamped to at least this before path loss.
inline constexpr double kMinLinkDistanceM = 1.0;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

double distance(const Vec3& a, const Vec3& b) noexcept;

double dbm_to_watts(double dbm) noexcept;

/// A divisible computing task.
struct TaskSpec {
  double data_size_bits = kBitsPerMegabyte;
  double complexity = 1900.0 / 8.0;  // CPU cycles per bit
  double latency_bound_s = 0.8;
  double reliability_bound = 0.99;

  double total_cycles() const noexcept { return complexity * data_size_bits; }
  TaskSpec with_data_size(double bits) const;
  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

struct DroneNode {
  int id = 0;
  Vec3 position;
  double cpu_freq_hz = 0.5e9;
  double fail_rate = 0.0;  // failures per second
};

/// Drone-to-drone radio link parameters. `fading_gain` and `link_fail_rate`
/// are defaults used when a Scenario is built without per-link values.
struct ChannelModel {
  double bandwidth_hz = 1e6;
  double tx_power_w = 1.258;
  double rx_power_w = 1.181;
  double noise_w = 1e-13;
  double path_loss_exp = 3.0;
  double fading_gain = 1.0;
  double overhead_ratio = 1.0;
  double link_fail_rate = 0.0;
  double max_radius_m = 100.0;

  void validate() const;
};

/// Dynamic CPU power kappa * f^exponent.
struct CpuPowerModel {
  double kappa = 1.25e-26;
  double exponent = 3.0;

  double power_w(double freq_hz) const noexcept;
  void validate() const;
};

struct CloudSpec {
  Vec3 position{2000.0, 2000.0, 2000.0};
  double cpu_freq_hz = 1e9;
  double bandwidth_hz = 2e6;
  double fail_rate = 1e-5;
  double link_fail_rate = 0.17;

  void validate() const;
};

/// Offloading decision: `rho` stays local, `lambda[i]` of the remainder goes
/// to fog node i.
struct Allocation {
  double rho = 1.0;
  std::vector<double> lambda;

  /// rho + sum(lambda) * (1 - rho); equals 1 for a complete assignment.
  double assigned_fraction() const noexcept;
  bool nonnegative() const noexcept;
  bool normalized(double tol = kNormalizationTolerance) const noexcept;
};

struct Metrics {
  double t_total_s = 0.0;
  double r_total = 1.0;
  double e_total_j = 0.0;
  bool feasible = false;
};

/// Initiator drone, its fog neighbours and the radio environment.
///
/// Construction validates every component and rejects fog nodes outside the
/// communication radius. Uplink rates are computed once here.
class Scenario {
 public:
  Scenario(DroneNode initiator, std::vector<DroneNode> fog_nodes,
           ChannelModel channel, std::vector<double> per_link_fading = {},
           std::vector<double> per_link_fail = {},
           std::optional<CloudSpec> cloud = std::nullopt,
           CpuPowerModel cpu_power = {});

  const DroneNode& initiator() const noexcept { return initiator_; }
  const std::vector<DroneNode>& fog_nodes() const noexcept { return fog_nodes_; }
  const ChannelModel& channel() const noexcept { return channel_; }
  const std::vector<double>& per_link_fading() const noexcept { return fading_; }
  const std::vector<double>& per_link_fail() const noexcept { return link_fail_; }
  const std::optional<CloudSpec>& cloud() const noexcept { return cloud_; }
  const CpuPowerModel& cpu_power() const noexcept { return cpu_power_; }

  /// Number of fog nodes (p).
  std::size_t size() const noexcept { return fog_nodes_.size(); }
  double link_rate(std::size_t i) const { return rates_.at(i); }
  const std::vector<double>& link_rates() const noexcept { return rates_; }
  double initiator_power_w() const noexcept { return initiator_power_; }
  /// Computing power of fog node i under cpu_power().
  double fog_power_w(std::size_t i) const { return fog_power_.at(i); }

 private:
  DroneNode initiator_;
  std::vector<DroneNode> fog_nodes_;
  ChannelModel channel_;
  std::vector<double> fading_;
  std::vector<double> link_fail_;
  std::optional<CloudSpec> cloud_;
  CpuPowerModel cpu_power_;
  std::vector<double> rates_;
  double initiator_power_ = 0.0;
  std::vector<double> fog_power_;
};

/// Shannon rate W log2(1 + P d^-gamma |h| / N0). Distances below
/// kMinLinkDistanceM are clamped; negative or NaN distance throws
/// std::domain_error.
double uplink_rate(const ChannelModel& ch, double dist_m, double fading);

double local_latency(const TaskSpec& task, double f0_hz, double rho);
/// Throws std::domain_error when rate <= 0.
double upload_latency(const TaskSpec& task, const ChannelModel& ch,
                      double rate_bps, double rho, double lambda_i);
double compute_latency(const TaskSpec& task, double fi_hz, double rho,
                       double lambda_i);

/// Per-branch times for one allocation. Upload time is +inf when data is sent
/// over a link whose rate is zero.
struct BranchTimes {
  double local_s = 0.0;
  std::vector<double> upload_s;
  std::vector<double> compute_s;
};

BranchTimes branch_times(const Scenario& scn, const TaskSpec& task,
                         const Allocation& alloc);

double total_latency(const Scenario& scn, const TaskSpec& task,
                     const Allocation& alloc);
double total_reliability(const Scenario& scn, const TaskSpec& task,
                         const Allocation& alloc);
double total_energy(const Scenario& scn, const TaskSpec& task,
                    const Allocation& alloc);

Metrics evaluate(const Scenario& scn, const TaskSpec& task,
                 const Allocation& alloc);
/// Allocation-free form used on hot paths; `lambda` must have size() entries.
Metrics evaluate(const Scenario& scn, const TaskSpec& task, double rho,
                 std::span<const double> lambda);

/// Whole task uploaded to the cloud over W^c (unit fading) and computed there.
/// Throws std::logic_error when the scenario has no cloud.
double cloud_latency(const Scenario& scn, const TaskSpec& task);
double local_only_latency(const Scenario& scn, const TaskSpec& task);

}  // namespace fcsd
