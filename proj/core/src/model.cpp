#include "fcsd/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fcsd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }
bool finite_nonnegative(double v) { return std::isfinite(v) && v >= 0.0; }

void check_dimensions(const Scenario& scn, std::size_t n) {
  if (n != scn.size()) {
    throw std::invalid_argument("allocation has " + std::to_string(n) +
                                " shares but scenario has " +
                                std::to_string(scn.size()) + " fog nodes");
  }
}

}  // namespace

double distance(const Vec3& a, const Vec3& b) noexcept {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double dbm_to_watts(double dbm) noexcept {
  return std::pow(10.0, (dbm - 30.0) / 10.0);
}

TaskSpec TaskSpec::with_data_size(double bits) const {
  TaskSpec t = *this;
  t.data_size_bits = bits;
  return t;
}

void TaskSpec::validate() const {
  require(finite_positive(data_size_bits), "data_size_bits must be > 0");
  require(finite_positive(complexity), "complexity must be > 0");
  require(finite_positive(latency_bound_s), "latency_bound_s must be > 0");
  require(reliability_bound > 0.0 && reliability_bound <= 1.0,
          "reliability_bound must be in (0,1]");
  require(std::isfinite(total_cycles()), "total cycles overflow");
}

void ChannelModel::validate() const {
  require(finite_positive(bandwidth_hz), "bandwidth_hz must be > 0");
  require(finite_positive(tx_power_w), "tx_power_w must be > 0");
  require(finite_positive(rx_power_w), "rx_power_w must be > 0");
  require(finite_positive(noise_w), "noise_w must be > 0");
  require(path_loss_exp >= 2.0 && path_loss_exp <= 5.0,
          "path_loss_exp must be in [2,5]");
  require(finite_nonnegative(fading_gain), "fading_gain must be >= 0");
  require(std::isfinite(overhead_ratio) && overhead_ratio >= 1.0,
          "overhead_ratio must be >= 1");
  require(finite_nonnegative(link_fail_rate), "link_fail_rate must be >= 0");
  require(finite_positive(max_radius_m), "max_radius_m must be > 0");
}

double CpuPowerModel::power_w(double freq_hz) const noexcept {
  return kappa * std::pow(freq_hz, exponent);
}

void CpuPowerModel::validate() const {
  require(finite_positive(kappa), "kappa must be > 0");
  require(std::isfinite(exponent) && exponent >= 1.0, "exponent must be >= 1");
}

void CloudSpec::validate() const {
  require(finite_positive(cpu_freq_hz), "cloud cpu_freq_hz must be > 0");
  require(finite_positive(bandwidth_hz), "cloud bandwidth_hz must be > 0");
  require(finite_nonnegative(fail_rate), "cloud fail_rate must be >= 0");
  require(finite_nonnegative(link_fail_rate),
          "cloud link_fail_rate must be >= 0");
}

double Allocation::assigned_fraction() const noexcept {
  double sum = 0.0;
  for (double l : lambda) sum += l;
  return rho + sum * (1.0 - rho);
}

bool Allocation::nonnegative() const noexcept {
  return rho >= 0.0 &&
         std::all_of(lambda.begin(), lambda.end(), [](double l) { return l >= 0.0; });
}

bool Allocation::normalized(double tol) const noexcept {
  return std::abs(assigned_fraction() - 1.0) <= tol;
}

Scenario::Scenario(DroneNode initiator, std::vector<DroneNode> fog_nodes,
                   ChannelModel channel, std::vector<double> per_link_fading,
                   std::vector<double> per_link_fail,
                   std::optional<CloudSpec> cloud, CpuPowerModel cpu_power)
    : initiator_(initiator),
      fog_nodes_(std::move(fog_nodes)),
      channel_(channel),
      fading_(std::move(per_link_fading)),
      link_fail_(std::move(per_link_fail)),
      cloud_(std::move(cloud)),
      cpu_power_(cpu_power) {
  channel_.validate();
  cpu_power_.validate();
  if (cloud_) cloud_->validate();

  const std::size_t p = fog_nodes_.size();
  if (fading_.empty()) fading_.assign(p, channel_.fading_gain);
  if (link_fail_.empty()) link_fail_.assign(p, channel_.link_fail_rate);
  require(fading_.size() == p, "per_link_fading must have one entry per fog node");
  require(link_fail_.size() == p, "per_link_fail must have one entry per fog node");

  auto check_node = [](const DroneNode& n) {
    require(finite_positive(n.cpu_freq_hz),
            "drone " + std::to_string(n.id) + ": cpu_freq_hz must be > 0");
    require(finite_nonnegative(n.fail_rate),
            "drone " + std::to_string(n.id) + ": fail_rate must be >= 0");
  };
  check_node(initiator_);
  initiator_power_ = cpu_power_.power_w(initiator_.cpu_freq_hz);

  rates_.reserve(p);
  fog_power_.reserve(p);
  for (std::size_t i = 0; i < p; ++i) {
    const DroneNode& n = fog_nodes_[i];
    check_node(n);
    require(finite_nonnegative(fading_[i]), "fading gains must be >= 0");
    require(finite_nonnegative(link_fail_[i]), "link failure rates must be >= 0");
    const double d = distance(initiator_.position, n.position);
    require(d <= channel_.max_radius_m,
            "drone " + std::to_string(n.id) + " is outside the communication radius");
    rates_.push_back(uplink_rate(channel_, d, fading_[i]));
    fog_power_.push_back(cpu_power_.power_w(n.cpu_freq_hz));
  }
}

double uplink_rate(const ChannelModel& ch, double dist_m, double fading) {
  if (!(dist_m >= 0.0)) throw std::domain_error("link distance must be >= 0");
  const double d = std::max(dist_m, kMinLinkDistanceM);
  const double snr = ch.tx_power_w * std::pow(d, -ch.path_loss_exp) * fading / ch.noise_w;
  return ch.bandwidth_hz * std::log2(1.0 + snr);
}

double local_latency(const TaskSpec& task, double f0_hz, double rho) {
  return rho * task.complexity * task.data_size_bits / f0_hz;
}

double upload_latency(const TaskSpec& task, const ChannelModel& ch,
                      double rate_bps, double rho, double lambda_i) {
  if (!(rate_bps > 0.0)) throw std::domain_error("uplink rate must be > 0");
  return ch.overhead_ratio * lambda_i * (1.0 - rho) * task.data_size_bits / rate_bps;
}

double compute_latency(const TaskSpec& task, double fi_hz, double rho,
                       double lambda_i) {
  return task.complexity * lambda_i * (1.0 - rho) * task.data_size_bits / fi_hz;
}

BranchTimes branch_times(const Scenario& scn, const TaskSpec& task,
                         const Allocation& alloc) {
  check_dimensions(scn, alloc.lambda.size());
  BranchTimes bt;
  bt.local_s = local_latency(task, scn.initiator().cpu_freq_hz, alloc.rho);
  const std::size_t p = scn.size();
  bt.upload_s.resize(p);
  bt.compute_s.resize(p);
  for (std::size_t i = 0; i < p; ++i) {
    const double lambda = alloc.lambda[i];
    const double rate = scn.link_rate(i);
    if (lambda * (1.0 - alloc.rho) == 0.0) {
      bt.upload_s[i] = 0.0;
    } else if (rate > 0.0) {
      bt.upload_s[i] = upload_latency(task, scn.channel(), rate, alloc.rho, lambda);
    } else {
      bt.upload_s[i] = kInf;
    }
    bt.compute_s[i] = compute_latency(task, scn.fog_nodes()[i].cpu_freq_hz, alloc.rho, lambda);
  }
  return bt;
}

double total_latency(const Scenario& scn, const TaskSpec& task,
                     const Allocation& alloc) {
  return evaluate(scn, task, alloc.rho, alloc.lambda).t_total_s;
}

double total_reliability(const Scenario& scn, const TaskSpec& task,
                         const Allocation& alloc) {
  return evaluate(scn, task, alloc.rho, alloc.lambda).r_total;
}

double total_energy(const Scenario& scn, const TaskSpec& task,
                    const Allocation& alloc) {
  return evaluate(scn, task, alloc.rho, alloc.lambda).e_total_j;
}

Metrics evaluate(const Scenario& scn, const TaskSpec& task,
                 const Allocation& alloc) {
  return evaluate(scn, task, alloc.rho, alloc.lambda);
}

Metrics evaluate(const Scenario& scn, const TaskSpec& task, double rho,
                 std::span<const double> lambda) {
  check_dimensions(scn, lambda.size());
  const ChannelModel& ch = scn.channel();
  const DroneNode& self = scn.initiator();
  const double bits = task.data_size_bits;
  const double cycles = task.complexity * bits;
  const double offloaded = 1.0 - rho;
  const double radio_power = ch.tx_power_w + ch.rx_power_w;

  const double t_local = rho * cycles / self.cpu_freq_hz;
  double t_total = t_local;
  double log_r = -self.fail_rate * t_local;
  double energy = scn.initiator_power_w() * t_local;
  double lambda_sum = 0.0;
  bool nonnegative = rho >= 0.0;

  for (std::size_t i = 0; i < lambda.size(); ++i) {
    const DroneNode& node = scn.fog_nodes()[i];
    const double share = lambda[i] * offloaded;
    const double rate = scn.link_rates()[i];
    double t_up = 0.0;
    if (share != 0.0) t_up = rate > 0.0 ? ch.overhead_ratio * share * bits / rate : kInf;
    const double t_comp = share * cycles / node.cpu_freq_hz;

    t_total = std::max(t_total, t_up + t_comp);
    log_r -= node.fail_rate * t_comp;
    const double mu = scn.per_link_fail()[i];
    if (mu != 0.0) log_r -= mu * t_up;
    energy += scn.fog_power_w(i) * t_comp;
    if (t_up != 0.0) energy += radio_power * t_up;

    lambda_sum += lambda[i];
    nonnegative = nonnegative && lambda[i] >= 0.0;
  }

  Metrics m;
  m.t_total_s = t_total;
  m.r_total = std::exp(log_r);
  m.e_total_j = energy;
  const double assigned = rho + lambda_sum * offloaded;
  m.feasible = nonnegative &&
               std::abs(assigned - 1.0) <= kNormalizationTolerance &&
               t_total <= task.latency_bound_s &&
               m.r_total >= task.reliability_bound;
  return m;
}

double cloud_latency(const Scenario& scn, const TaskSpec& task) {
  if (!scn.cloud()) throw std::logic_error("scenario has no cloud configured");
  const CloudSpec& cloud = *scn.cloud();
  ChannelModel link = scn.channel();
  link.bandwidth_hz = cloud.bandwidth_hz;
  const double d = distance(scn.initiator().position, cloud.position);
  const double rate = uplink_rate(link, d, 1.0);
  const double upload = link.overhead_ratio * task.data_size_bits / rate;
  return upload + task.total_cycles() / cloud.cpu_freq_hz;
}

double local_only_latency(const Scenario& scn, const TaskSpec& task) {
  return local_latency(task, scn.initiator().cpu_freq_hz, 1.0);
}

}  // namespace fcsd
