#include "fcsd/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace fcsd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Lambda sums closer to 1 than this are left untouched, so that repair and
// decode are idempotent on already-normalized genes.
constexpr double kRenormalizeSlack = 1e-12;

double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

void rescale_lambda(std::span<double> lambda) {
  double sum = 0.0;
  for (double l : lambda) sum += l;
  if (sum > 0.0 && std::abs(sum - 1.0) > kRenormalizeSlack) {
    for (double& l : lambda) l /= sum;
  }
}

Chromosome random_chromosome(std::size_t genes, Rng& rng) {
  Chromosome c;
  c.genes.resize(genes);
  for (double& g : c.genes) g = uniform01(rng);
  return c;
}

}  // namespace

Chromosome Chromosome::from_allocation(const Allocation& a) {
  Chromosome c;
  c.genes.reserve(a.lambda.size() + 1);
  c.genes.push_back(a.rho);
  c.genes.insert(c.genes.end(), a.lambda.begin(), a.lambda.end());
  return c;
}

void GaConfig::validate() const {
  auto fail = [](const char* what) { throw std::invalid_argument(what); };
  if (generations < 1) fail("generations must be >= 1");
  if (pop_size < 2) fail("pop_size must be >= 2");
  if (elite_count < 1 || elite_count >= pop_size) fail("elite_count must be in [1, pop_size)");
  if (!(crossover_prob >= 0.0 && crossover_prob <= 1.0)) fail("crossover_prob must be in [0,1]");
  if (!(mutation_prob >= 0.0 && mutation_prob <= 1.0)) fail("mutation_prob must be in [0,1]");
  if (!(mutation_shape >= 2.0 && mutation_shape <= 5.0)) fail("mutation_shape must be in [2,5]");
  if (!(worst_init > 0.0) || !std::isfinite(worst_init)) fail("worst_init must be > 0");
  if (!(penalty.base > 0.0) || !std::isfinite(penalty.base)) fail("penalty base must be > 0");
  if (!(penalty_cap > 0.0) || !std::isfinite(penalty_cap)) fail("penalty_cap must be > 0");
}

std::vector<double> constraint_violations(const Chromosome& x, const Scenario& scn,
                                          const TaskSpec& task) {
  const double rho = x.rho();
  const auto lambda = x.lambda();
  const Metrics m = evaluate(scn, task, rho, lambda);

  std::vector<double> rows;
  rows.reserve(x.genes.size() + 3);
  for (double g : x.genes) rows.push_back(std::max(0.0, -g));
  const double lambda_sum = std::accumulate(lambda.begin(), lambda.end(), 0.0);
  rows.push_back(std::abs(rho + lambda_sum * (1.0 - rho) - 1.0));
  rows.push_back(std::max(0.0, m.t_total_s - task.latency_bound_s));
  rows.push_back(std::max(0.0, task.reliability_bound - m.r_total));
  return rows;
}

Appraisal appraise(const Chromosome& x, const Scenario& scn, const TaskSpec& task) {
  const double rho = x.rho();
  const auto lambda = x.lambda();
  const Metrics m = evaluate(scn, task, rho, lambda);

  double violation = 0.0;
  double lambda_sum = 0.0;
  for (double g : x.genes) violation += std::max(0.0, -g);
  for (double l : lambda) lambda_sum += l;
  violation += std::abs(rho + lambda_sum * (1.0 - rho) - 1.0);
  violation += std::max(0.0, m.t_total_s - task.latency_bound_s);
  violation += std::max(0.0, task.reliability_bound - m.r_total);
  return Appraisal{m.e_total_j, violation, m.feasible};
}

double penalized_objective(const Appraisal& a, double penalty_factor, double cap) noexcept {
  const double penalty = std::min(penalty_factor * a.violation, cap);
  return std::min(a.energy + penalty, cap);
}

FitnessContext make_fitness_context(std::span<const Appraisal> generation, int g,
                                    double worst_feasible, const GaConfig& cfg) {
  FitnessContext ctx;
  ctx.penalty_factor = cfg.penalty.at(g);
  ctx.worst_feasible = worst_feasible;
  ctx.penalty_cap = cfg.penalty_cap;
  ctx.min_infeasible_penalized = kInf;
  for (const Appraisal& a : generation) {
    if (!a.feasible) {
      ctx.min_infeasible_penalized =
          std::min(ctx.min_infeasible_penalized,
                   penalized_objective(a, ctx.penalty_factor, ctx.penalty_cap));
    }
  }
  return ctx;
}

double fitness(const Appraisal& a, const FitnessContext& ctx) noexcept {
  if (a.feasible) return a.energy;
  const double penalized = penalized_objective(a, ctx.penalty_factor, ctx.penalty_cap);
  // Written as Wor + (P - min P) rather than P + (Wor - min P) so the
  // generation's best infeasible individual lands exactly on Wor.
  const double floor = std::isfinite(ctx.min_infeasible_penalized)
                           ? ctx.min_infeasible_penalized
                           : penalized;
  return ctx.worst_feasible + (penalized - floor);
}

double update_worst(double previous, std::span<const double> feasible_energies) noexcept {
  double worst = previous;
  for (double e : feasible_energies) worst = std::max(worst, e);
  return worst;
}

std::size_t tournament_pick(std::span<const double> fitness, Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, fitness.size() - 1);
  const std::size_t a = pick(rng);
  const std::size_t b = pick(rng);
  return fitness[b] < fitness[a] ? b : a;
}

std::vector<Chromosome> select(std::span<const Chromosome> population,
                               std::span<const double> fitness, int elite_count,
                               Rng& rng) {
  if (population.size() != fitness.size()) {
    throw std::invalid_argument("population and fitness sizes differ");
  }
  if (population.size() < 2) throw std::invalid_argument("population needs >= 2 individuals");
  const std::size_t n = population.size();
  const std::size_t elites = std::min<std::size_t>(std::max(elite_count, 0), n);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return fitness[a] < fitness[b]; });

  std::vector<Chromosome> next;
  next.reserve(n);
  for (std::size_t i = 0; i < elites; ++i) next.push_back(population[order[i]]);
  while (next.size() < n) next.push_back(population[tournament_pick(fitness, rng)]);
  return next;
}

std::pair<Chromosome, Chromosome> blend(const Chromosome& x1, const Chromosome& x2,
                                        double delta) {
  if (x1.genes.size() != x2.genes.size()) {
    throw std::invalid_argument("crossover parents differ in length");
  }
  std::pair<Chromosome, Chromosome> kids{x1, x2};
  for (std::size_t j = 0; j < x1.genes.size(); ++j) {
    const double a = x1.genes[j];
    const double b = x2.genes[j];
    kids.first.genes[j] = std::clamp(delta * a + (1.0 - delta) * b, 0.0, 1.0);
    kids.second.genes[j] = std::clamp(delta * b + (1.0 - delta) * a, 0.0, 1.0);
  }
  return kids;
}

std::pair<Chromosome, Chromosome> crossover(const Chromosome& x1, const Chromosome& x2,
                                            Rng& rng) {
  double delta = 0.0;
  while (delta == 0.0) delta = uniform01(rng);
  return blend(x1, x2, delta);
}

double mutate_gene(double x, double q, bool toward_one, int g, int max_generation,
                   double shape, MutationExponent exponent) {
  const double progress = 1.0 - static_cast<double>(g) / max_generation;
  const double power = exponent == MutationExponent::Product ? progress * shape
                                                             : std::pow(progress, shape);
  const double step = 1.0 - std::pow(q, power);
  const double y = toward_one ? x + (1.0 - x) * step : x - x * step;
  return std::clamp(y, 0.0, 1.0);
}

Chromosome mutate(const Chromosome& x, int g, int max_generation, double shape, Rng& rng,
                  MutationExponent exponent) {
  Chromosome y = x;
  if (y.genes.empty()) return y;
  const double per_gene = 1.0 / static_cast<double>(y.genes.size());
  std::bernoulli_distribution coin(0.5);
  for (double& gene : y.genes) {
    if (uniform01(rng) >= per_gene) continue;
    const double q = uniform01(rng);
    const bool toward_one = !coin(rng);
    gene = mutate_gene(gene, q, toward_one, g, max_generation, shape, exponent);
  }
  return y;
}

void repair(Chromosome& x) {
  if (x.genes.size() < 2) return;
  rescale_lambda(std::span<double>(x.genes).subspan(1));
}

Allocation decode(const Chromosome& x) {
  Allocation a;
  a.rho = x.rho();
  a.lambda.assign(x.genes.begin() + 1, x.genes.end());
  rescale_lambda(a.lambda);
  return a;
}

SolveResult solve(const Scenario& scn, const TaskSpec& task, const GaConfig& cfg,
                  const SolveOptions& options) {
  cfg.validate();
  task.validate();

  SolveResult result;
  const std::size_t p = scn.size();
  if (p == 0) {
    result.allocation = Allocation{1.0, {}};
    result.metrics = evaluate(scn, task, result.allocation);
    result.found_feasible = result.metrics.feasible;
    result.best_fitness = result.metrics.e_total_j;
    return result;
  }

  const std::size_t genes = p + 1;
  const auto pop_size = static_cast<std::size_t>(cfg.pop_size);
  const auto elites = static_cast<std::size_t>(cfg.elite_count);
  Rng rng(cfg.rng_seed);

  std::vector<Chromosome> population;
  population.reserve(pop_size);
  for (const Allocation& seed : options.seeds) {
    if (population.size() == pop_size) break;
    if (seed.lambda.size() != p) throw std::invalid_argument("seed allocation has wrong size");
    population.push_back(Chromosome::from_allocation(seed));
  }
  while (population.size() < pop_size) {
    population.push_back(random_chromosome(genes, rng));
    if (cfg.repair) repair(population.back());
  }

  std::vector<Appraisal> appraisals(pop_size);
  std::vector<double> fit(pop_size);
  std::vector<double> feasible_energies;
  feasible_energies.reserve(pop_size);
  std::vector<std::size_t> order(pop_size - elites);

  double worst = cfg.worst_init;
  double global_best = kInf;
  bool have_feasible = false;
  Chromosome best_feasible;
  double best_feasible_energy = kInf;
  Chromosome least_violating;
  Appraisal least_violating_score{kInf, kInf, false};

  result.trace.reserve(static_cast<std::size_t>(cfg.generations));
  for (int g = 1; g <= cfg.generations; ++g) {
    feasible_energies.clear();
    for (std::size_t i = 0; i < pop_size; ++i) {
      appraisals[i] = appraise(population[i], scn, task);
      if (appraisals[i].feasible) feasible_energies.push_back(appraisals[i].energy);
    }
    worst = update_worst(worst, feasible_energies);
    const FitnessContext ctx = make_fitness_context(appraisals, g, worst, cfg);

    for (std::size_t i = 0; i < pop_size; ++i) {
      const Appraisal& a = appraisals[i];
      fit[i] = fitness(a, ctx);
      global_best = std::min(global_best, fit[i]);
      if (a.feasible && a.energy < best_feasible_energy) {
        have_feasible = true;
        best_feasible_energy = a.energy;
        best_feasible = population[i];
      }
      if (a.violation < least_violating_score.violation ||
          (a.violation == least_violating_score.violation &&
           a.energy < least_violating_score.energy)) {
        least_violating_score = a;
        least_violating = population[i];
      }
    }

    result.trace.push_back(TraceRecord{g, global_best,
                                       static_cast<int>(feasible_energies.size()), worst});
    if (options.observer) {
      options.observer(GenerationReport{g, ctx.penalty_factor, worst, global_best,
                                        population, appraisals, fit});
    }
    if (g == cfg.generations) break;

    std::vector<Chromosome> next = select(population, fit, cfg.elite_count, rng);
    std::iota(order.begin(), order.end(), elites);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t k = 0; k + 1 < order.size(); k += 2) {
      if (uniform01(rng) < cfg.crossover_prob) {
        auto kids = crossover(next[order[k]], next[order[k + 1]], rng);
        next[order[k]] = std::move(kids.first);
        next[order[k + 1]] = std::move(kids.second);
      }
    }
    for (std::size_t i = elites; i < pop_size; ++i) {
      if (uniform01(rng) < cfg.mutation_prob) {
        next[i] = mutate(next[i], g, cfg.generations, cfg.mutation_shape, rng,
                         cfg.mutation_exponent);
      }
      if (cfg.repair) repair(next[i]);
    }
    population = std::move(next);
  }

  result.best_fitness = global_best;
  result.found_feasible = have_feasible;
  result.allocation = decode(have_feasible ? best_feasible : least_violating);
  result.metrics = evaluate(scn, task, result.allocation);
  return result;
}

}  // namespace fcsd
