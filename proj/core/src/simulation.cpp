#include "posthoc/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "posthoc/error.hpp"
#include "posthoc/normal.hpp"
#include "posthoc/parallel.hpp"
#include "posthoc/random.hpp"

namespace posthoc {
namespace {

Envelope to_envelope(const std::vector<Count>& values) {
  Envelope out;
  out.points.reserve(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    out.points.push_back(EnvelopePoint{static_cast<Index>(k + 1), values[k]});
  }
  return out;
}

bool violated(std::span<const Region> regions, std::span<const Count> zetas,
              const NullMask& mask) {
  for (std::size_t k = 0; k < regions.size(); ++k) {
    if (mask.null_count(regions[k]) > zetas[k]) return true;
  }
  return false;
}

std::shared_ptr<const CompletedFamily> structure_of(Index m, std::span<const Region> regions) {
  std::vector<Member> members;
  members.reserve(regions.size());
  for (const auto& r : regions) members.push_back(Member{r, std::nullopt});
  return std::make_shared<const CompletedFamily>(
      complete_family(ReferenceFamily(m, std::move(members))));
}

}  // namespace

void SimulationConfig::validate() const {
  if (m < 1 || s < 1) throw Error(ErrorCode::InvalidArgument, "m and s must be >= 1");
  if (m % s != 0) throw Error(ErrorCode::SNotDividingM, "s must divide m");
  if (q < 0 || q > 30) throw Error(ErrorCode::InvalidArgument, "q must lie in 0..30");
  if (K1 < 0 || K1 > m / s) {
    throw Error(ErrorCode::InvalidArgument, "K1 must lie in 0..m/s");
  }
  if (!(r > 0.0 && r <= 1.0)) throw Error(ErrorCode::InvalidArgument, "r must lie in (0, 1]");
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw Error(ErrorCode::InvalidArgument, "mu must be finite and >= 0");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  }
  if (reps < 1) throw Error(ErrorCode::InvalidArgument, "reps must be >= 1");
}

std::vector<std::size_t> SimulationConfig::signal_blocks() const {
  const auto blocks = static_cast<std::size_t>(m / s);
  const auto count = static_cast<std::size_t>(K1);
  std::vector<std::size_t> out(count);
  const std::size_t stride = adjacent_signal || count == 0 ? 1 : blocks / count;
  for (std::size_t b = 0; b < count; ++b) out[b] = b * stride;
  return out;
}

Index SimulationConfig::non_nulls_per_block() const {
  return static_cast<Index>(std::ceil(r * static_cast<double>(s) - 1e-9));
}

Instance generate_instance(const SimulationConfig& config, std::uint64_t rep) {
  config.validate();
  const auto m = static_cast<std::size_t>(config.m);
  std::vector<bool> is_null(m, true);
  const auto per_block = static_cast<std::size_t>(config.non_nulls_per_block());
  for (std::size_t b : config.signal_blocks()) {
    const std::size_t start = b * static_cast<std::size_t>(config.s);
    for (std::size_t j = 0; j < per_block; ++j) is_null[start + j] = false;
  }
  std::vector<double> p(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double x = keyed_normal(StreamKey{config.seed, rep, i}) + (is_null[i] ? 0.0 : config.mu);
    p[i] = normal_sf(x);
  }
  return Instance{PValueVector(std::move(p)), NullMask(std::move(is_null))};
}

std::vector<Region> build_partition_regions(Index m, Index s) {
  if (m < 1 || s < 1 || m % s != 0) {
    throw Error(ErrorCode::SNotDividingM, "s = " + std::to_string(s) +
                                              " does not divide m = " + std::to_string(m));
  }
  std::vector<Region> out;
  out.reserve(static_cast<std::size_t>(m / s));
  for (Index start = 1; start <= m; start += s) out.push_back(Region::range(start, start + s - 1));
  return out;
}

std::vector<Region> build_tree_regions(Index m, int q) {
  if (q < 0 || q > 30 || m < 1 || m % (Index{1} << q) != 0) {
    throw Error(ErrorCode::QNotCompatible, "2^q must divide m (q = " + std::to_string(q) +
                                               ", m = " + std::to_string(m) + ")");
  }
  std::vector<Region> out;
  out.reserve((std::size_t{1} << (q + 1)) - 1);
  for (int level = 0; level <= q; ++level) {
    const Index width = m >> level;
    for (Index start = 1; start <= m; start += width) {
      out.push_back(Region::range(start, start + width - 1));
    }
  }
  return out;
}

bool jer_violated(const ReferenceFamily& family, const NullMask& mask) {
  for (std::size_t k = 0; k < family.size(); ++k) {
    if (mask.null_count(family.region(k)) > family.zeta(k)) return true;
  }
  return false;
}

JerResult jer_empirical(const SimulationConfig& config, std::span<const Region> regions,
                        ZetaMethod method, std::size_t threads) {
  config.validate();
  if (config.reps < 100) throw Error(ErrorCode::InvalidArgument, "jer_empirical needs reps >= 100");
  const CalibrationConfig calibration{config.alpha, regions.size(), method};
  calibration.validate();
  std::vector<char> hit(config.reps, 0);
  parallel_for(config.reps, threads, [&](std::size_t rep) {
    const Instance inst = generate_instance(config, rep);
    const auto zetas = calibrate_zetas(regions, inst.pvalues, calibration);
    hit[rep] = violated(regions, zetas, inst.mask) ? 1 : 0;
  });
  JerResult out;
  out.alpha = config.alpha;
  out.reps = config.reps;
  out.violations = static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1));
  out.rate = static_cast<double>(out.violations) / static_cast<double>(out.reps);
  return out;
}

void RatioCurveInput::validate() const {
  if (!(m > 0.0 && s > 0.0 && K > 0.0)) {
    throw Error(ErrorCode::DomainError, "m, s and K must be positive");
  }
  if (!(r >= 0.0 && r <= 1.0)) throw Error(ErrorCode::DomainError, "r must lie in [0, 1]");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::DomainError, "alpha must lie in (0, 1)");
  const double level = alpha * s / m;
  if (!(level > 0.0 && level < 1.0)) throw Error(ErrorCode::DomainError, "alpha s / m must lie in (0, 1)");
  if (!(K / alpha > 1.0)) throw Error(ErrorCode::DomainError, "K / alpha must exceed 1");
}

double ratio_at(const RatioCurveInput& input, double mu) {
  input.validate();
  const double C = std::sqrt(0.5 * std::log(input.K / input.alpha));
  const double root_s = std::sqrt(input.s);
  const double r = input.r;
  const double numerator =
      std::min(1.0, 1.0 - r + 2.0 * r * normal_sf(mu) + (4.0 * C / root_s) * (1.0 + C / root_s));
  const double level = input.alpha * input.s / input.m;
  const double denominator = (1.0 - r) * (1.0 - level) + r * normal_sf(mu - normal_isf(level));
  if (!(denominator > 0.0)) {
    throw Error(ErrorCode::DomainError, "non-positive denominator at mu = " + std::to_string(mu));
  }
  return numerator / denominator;
}

std::vector<std::pair<double, double>> ratio_curve(const RatioCurveInput& input) {
  input.validate();
  if (input.mu_grid.empty()) throw Error(ErrorCode::DomainError, "empty mu grid");
  std::vector<std::pair<double, double>> out;
  out.reserve(input.mu_grid.size());
  for (double mu : input.mu_grid) out.emplace_back(mu, ratio_at(input, mu));
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const SimulationConfig& sim = config.sim;
  sim.validate();
  if (sim.m != sim.s * (Index{1} << sim.q)) {
    throw Error(ErrorCode::QNotCompatible, "m must equal s * 2^q");
  }
  if (!(config.gamma >= 0.0 && config.gamma <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "gamma must lie in [0, 1]");
  }
  const auto part_regions = build_partition_regions(sim.m, sim.s);
  const auto tree_regions = build_tree_regions(sim.m, sim.q);
  const auto part_structure = structure_of(sim.m, part_regions);
  const auto tree_structure = structure_of(sim.m, tree_regions);

  const CalibrationConfig part_cal{sim.alpha, part_regions.size(), ZetaMethod::Dkw};
  const CalibrationConfig tree_cal{sim.alpha, tree_regions.size(), ZetaMethod::Dkw};
  const CalibrationConfig hybrid_tree_cal{config.gamma * sim.alpha, tree_regions.size(),
                                          ZetaMethod::Dkw};
  part_cal.validate();
  tree_cal.validate();
  if (config.gamma > 0.0) hybrid_tree_cal.validate();

  ExperimentResult result;
  result.part_regions = part_regions.size();
  result.tree_regions = tree_regions.size();
  result.replicates.resize(sim.reps);

  parallel_for(sim.reps, config.threads, [&](std::size_t rep) {
    const Instance inst = generate_instance(sim, rep);
    const auto order = topk_order(inst.pvalues);
    ReplicateEnvelopes& out = result.replicates[rep];

    out.oracle = to_envelope(OracleEvaluator().evaluate_topk(order, &inst.mask));
    out.simes = to_envelope(SimesEvaluator(inst.pvalues, sim.alpha).evaluate_topk(order, nullptr));

    const auto part_zetas = calibrate_zetas(part_regions, inst.pvalues, part_cal);
    out.part = to_envelope(ForestEvaluator(part_structure, part_zetas).evaluate_topk(order, nullptr));
    out.part_violated = violated(part_regions, part_zetas, inst.mask);

    const auto tree_zetas = calibrate_zetas(tree_regions, inst.pvalues, tree_cal);
    out.tree = to_envelope(ForestEvaluator(tree_structure, tree_zetas).evaluate_topk(order, nullptr));
    out.tree_violated = violated(tree_regions, tree_zetas, inst.mask);

    std::vector<Count> hybrid(order.size());
    for (std::size_t k = 0; k < hybrid.size(); ++k) hybrid[k] = static_cast<Count>(k + 1);
    if (config.gamma < 1.0) {
      const auto simes_side = SimesEvaluator(inst.pvalues, (1.0 - config.gamma) * sim.alpha)
                                  .evaluate_topk(order, nullptr);
      for (std::size_t k = 0; k < hybrid.size(); ++k) hybrid[k] = std::min(hybrid[k], simes_side[k]);
    }
    if (config.gamma > 0.0) {
      const auto zetas = calibrate_zetas(tree_regions, inst.pvalues, hybrid_tree_cal);
      const auto tree_side = ForestEvaluator(tree_structure, zetas).evaluate_topk(order, nullptr);
      for (std::size_t k = 0; k < hybrid.size(); ++k) hybrid[k] = std::min(hybrid[k], tree_side[k]);
    }
    out.hybrid = to_envelope(hybrid);
  });

  auto coverage = [&](bool ReplicateEnvelopes::*flag) {
    JerResult jr;
    jr.alpha = sim.alpha;
    jr.reps = sim.reps;
    for (const auto& rep : result.replicates) jr.violations += (rep.*flag) ? 1 : 0;
    jr.rate = static_cast<double>(jr.violations) / static_cast<double>(jr.reps);
    return jr;
  };
  result.coverage_part = coverage(&ReplicateEnvelopes::part_violated);
  result.coverage_tree = coverage(&ReplicateEnvelopes::tree_violated);
  return result;
}

std::vector<double> mean_values(std::span<const Envelope> envelopes) {
  if (envelopes.empty()) return {};
  const std::size_t n = envelopes.front().size();
  std::vector<double> sum(n, 0.0);
  for (const auto& env : envelopes) {
    if (env.size() != n) throw Error(ErrorCode::InvalidArgument, "envelope sizes differ");
    for (std::size_t k = 0; k < n; ++k) sum[k] += static_cast<double>(env.points[k].value);
  }
  for (double& v : sum) v /= static_cast<double>(envelopes.size());
  return sum;
}

}  // namespace posthoc
