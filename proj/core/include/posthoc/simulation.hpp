#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "posthoc/calibration.hpp"
#include "posthoc/envelope.hpp"
#include "posthoc/family.hpp"

namespace posthoc {

/// Gaussian one-sided test bed: m = s 2^q hypotheses in 2^q blocks of size
/// s; K1 blocks carry signal in a fraction r of their hypotheses with mean mu.
struct SimulationConfig {
  Index m = 12800;
  Index s = 100;
  int q = 7;
  int K1 = 8;
  double r = 0.9;
  double mu = 3.0;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  std::size_t reps = 1;
  // Signal blocks are P_1..P_K1 when true, evenly spread otherwise.
  bool adjacent_signal = true;

  void validate() const;
  std::vector<std::size_t> signal_blocks() const;  // 0-based
  Index non_nulls_per_block() const;               // ceil(r s)
};

struct Instance {
  PValueVector pvalues;
  NullMask mask;
};

/// Replicate `rep`: X_i ~ N(0,1) for nulls and N(mu,1) for non-nulls, drawn
/// from a stream keyed by (seed, rep, i); p_i = P(Z > X_i).
Instance generate_instance(const SimulationConfig& config, std::uint64_t rep);

/// Blocks {1+(k-1)s, ..., ks}, k = 1..m/s. Throws SNotDividingM.
std::vector<Region> build_partition_regions(Index m, Index s);

/// Perfect binary tree over 2^q equal blocks, root first then level by
/// level: 2^(q+1) - 1 regions. Throws QNotCompatible.
std::vector<Region> build_tree_regions(Index m, int q);

/// True when some region holds more true nulls than its local bound.
bool jer_violated(const ReferenceFamily& family, const NullMask& mask);

struct JerResult {
  double alpha = 0.0;
  std::size_t reps = 0;
  std::size_t violations = 0;
  double rate = 0.0;
};

/// Monte Carlo estimate of the joint error rate of `regions` calibrated at
/// config.alpha on each replicate. Requires config.reps >= 100.
JerResult jer_empirical(const SimulationConfig& config, std::span<const Region> regions,
                        ZetaMethod method = ZetaMethod::Dkw, std::size_t threads = 0);

struct RatioCurveInput {
  double m = 1e7;
  double s = 0.0;
  double K = 0.0;
  double r = 0.6;
  double alpha = 0.1;
  std::vector<double> mu_grid;

  void validate() const;
};

/// Upper bound on E V_DKW(R_1) / E V_Simes(R_1) at effect size mu.
double ratio_at(const RatioCurveInput& input, double mu);

/// (mu, ratio) for every mu of the grid. Throws DomainError when the Simes
/// lower bound in the denominator is not positive.
std::vector<std::pair<double, double>> ratio_curve(const RatioCurveInput& input);

/// Settings for the full envelope comparison on one configuration.
struct ExperimentConfig {
  SimulationConfig sim;
  double gamma = 0.02;
  std::size_t threads = 0;
};

struct ReplicateEnvelopes {
  Envelope oracle;
  Envelope simes;
  Envelope part;
  Envelope tree;
  Envelope hybrid;
  bool part_violated = false;
  bool tree_violated = false;
};

struct ExperimentResult {
  std::size_t part_regions = 0;
  std::size_t tree_regions = 0;
  std::vector<ReplicateEnvelopes> replicates;
  JerResult coverage_part;
  JerResult coverage_tree;
};

/// Oracle, Simes, partition, tree and hybrid envelopes for every replicate,
/// plus the joint error coverage of both calibrated families. Output does not
/// depend on the number of threads.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Pointwise mean of envelope values over replicates.
std::vector<double> mean_values(std::span<const Envelope> envelopes);

}  // namespace posthoc
