#pragma once

// Real-coded genetic algorithm for the minimum-energy offloading problem with
// latency and reliability constraints.
//
// Constraints are handled with an exterior penalty whose factor grows with the
// generation, plus a per-generation offset that lifts every infeasible
// individual above the worst feasible energy seen so far. With that offset,
// feasible individuals always rank ahead of infeasible ones.
//
// Chromosome layout: genes[0] = rho, genes[1..p] = lambda_1..lambda_p, all in
// [0,1].

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "fcsd/model.hpp"

namespace fcsd {

using Rng = std::mt19937_64;

struct Chromosome {
  std::vector<double> genes;

  double rho() const { return genes.at(0); }
  std::span<const double> lambda() const {
    return std::span<const double>(genes).subspan(1);
  }
  std::size_t fog_count() const noexcept { return genes.empty() ? 0 : genes.size() - 1; }

  static Chromosome from_allocation(const Allocation& a);
  friend bool operator==(const Chromosome&, const Chromosome&) = default;
};

/// How the mutation step exponent combines generation progress and shape b:
/// Product reads q^((1 - g/G) * b), Power reads q^((1 - g/G)^b).
enum class MutationExponent { Product, Power };

/// Penalty factor h(g) = base * (1 + g).
struct PenaltySchedule {
  double base = 1e3;
  double at(int generation) const noexcept { return base * (1.0 + generation); }
};

struct GaConfig {
  int generations = 300;
  int pop_size = 100;
  double crossover_prob = 0.8;
  double mutation_prob = 0.1;
  double mutation_shape = 3.0;
  double worst_init = 1e5;
  PenaltySchedule penalty;
  int elite_count = 2;
  std::uint64_t rng_seed = 0;
  MutationExponent mutation_exponent = MutationExponent::Product;
  // Rescale lambda to sum 1 after every variation step. With this off the
  // equality constraint is left entirely to the penalty term.
  bool repair = true;
  // Upper bound on penalized objectives so fitness stays finite.
  double penalty_cap = 1e12;

  void validate() const;
};

/// Constraint violations E_j, j = 1..p+4: gene nonnegativity (p+1 rows),
/// the assignment equality, latency excess and reliability deficit.
std::vector<double> constraint_violations(const Chromosome& x, const Scenario& scn,
                                          const TaskSpec& task);

/// Objective and violation summary of one individual.
struct Appraisal {
  double energy = 0.0;
  double violation = 0.0;  // sum of constraint_violations()
  bool feasible = false;
};

Appraisal appraise(const Chromosome& x, const Scenario& scn, const TaskSpec& task);

/// E + h * sum(E_j), capped at `cap`.
double penalized_objective(const Appraisal& a, double penalty_factor, double cap) noexcept;

/// Generation-wide quantities an individual's fitness depends on.
struct FitnessContext {
  double penalty_factor = 0.0;
  double worst_feasible = 0.0;
  // Minimum penalized objective over this generation's infeasible individuals;
  // +inf when there are none.
  double min_infeasible_penalized = 0.0;
  double penalty_cap = 1e12;
};

FitnessContext make_fitness_context(std::span<const Appraisal> generation,
                                    int g, double worst_feasible,
                                    const GaConfig& cfg);

/// Feasible: energy. Infeasible: worst_feasible plus the amount by which the
/// penalized objective exceeds the generation's best infeasible one.
double fitness(const Appraisal& a, const FitnessContext& ctx) noexcept;

/// Running maximum of the worst feasible energy.
double update_worst(double previous, std::span<const double> feasible_energies) noexcept;

/// Index of the lower-fitness individual among two uniform draws.
std::size_t tournament_pick(std::span<const double> fitness, Rng& rng);

/// Elitist 2-tournament selection. The `elite_count` lowest-fitness
/// individuals come first, unchanged; every other slot holds the winner of a
/// tournament between two uniformly drawn individuals.
std::vector<Chromosome> select(std::span<const Chromosome> population,
                               std::span<const double> fitness, int elite_count,
                               Rng& rng);

/// Arithmetic crossover with a fixed mixing weight.
std::pair<Chromosome, Chromosome> blend(const Chromosome& x1, const Chromosome& x2,
                                        double delta);
/// Arithmetic crossover with delta drawn from (0,1).
std::pair<Chromosome, Chromosome> crossover(const Chromosome& x1, const Chromosome& x2,
                                            Rng& rng);

/// Non-uniform mutation of one gene given its random draws.
double mutate_gene(double x, double q, bool toward_one, int g, int max_generation,
                   double shape, MutationExponent exponent = MutationExponent::Product);

/// Mutates each gene independently with probability 1/genes.size().
Chromosome mutate(const Chromosome& x, int g, int max_generation, double shape, Rng& rng,
                  MutationExponent exponent = MutationExponent::Product);

/// Rescales the lambda genes to sum to 1 when their sum is positive.
void repair(Chromosome& x);

/// Allocation with lambda renormalized to sum 1 (when the sum is positive).
Allocation decode(const Chromosome& x);

struct TraceRecord {
  int generation = 0;
  double best_fitness = 0.0;
  int feasible_count = 0;
  double worst_feasible = 0.0;
};

/// Everything an observer may inspect after a generation has been scored.
struct GenerationReport {
  int generation = 0;
  double penalty_factor = 0.0;
  double worst_feasible = 0.0;
  double best_fitness = 0.0;  // global best so far
  std::span<const Chromosome> population;
  std::span<const Appraisal> appraisals;
  std::span<const double> fitness;
};

struct SolveOptions {
  std::function<void(const GenerationReport&)> observer;
  // Allocations placed into the initial population ahead of random ones.
  std::vector<Allocation> seeds;
};

struct SolveResult {
  Allocation allocation;
  Metrics metrics;
  bool found_feasible = false;
  double best_fitness = 0.0;
  std::vector<TraceRecord> trace;
};

/// Runs the GA. Returns the lowest-energy feasible individual ever seen or,
/// when none was feasible, the least-violating one. With no fog nodes the
/// all-local allocation is evaluated directly.
SolveResult solve(const Scenario& scn, const TaskSpec& task, const GaConfig& cfg,
                  const SolveOptions& options = {});

}  // namespace fcsd
