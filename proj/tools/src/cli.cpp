#include "posthoc_cli/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "posthoc/bounds.hpp"
#include "posthoc/calibration.hpp"
#include "posthoc/envelope.hpp"
#include "posthoc/error.hpp"
#include "posthoc/family.hpp"
#include "posthoc/io.hpp"
#include "posthoc/simulation.hpp"

namespace posthoc::cli {
namespace {

namespace fs = std::filesystem;

struct ValidateArgs {
  std::string family;
};

struct BoundArgs {
  std::string family;
  std::string method = "star";
  std::string selection;
  std::string pvalues;
  std::string all_topk;
  Index topk = 0;
  std::size_t q = 0;
};

struct CalibrateArgs {
  std::string regions;
  std::string pvalues;
  double alpha = 0.05;
  std::string method = "dkw";
};

struct EnvelopeArgs {
  std::string pvalues;
  double alpha = 0.05;
  Index part_size = 0;
  int tree_depth = -1;
  std::optional<double> gamma;
  std::string mask;
};

struct SimulateArgs {
  SimulationConfig sim;
  double gamma = 0.02;
  std::string out_dir;
  bool spread = false;
};

struct RatioArgs {
  RatioCurveInput input;
  double mu_from = 0.0;
  double mu_to = 6.0;
  double mu_step = 0.1;
};

std::string join_ranges(const Region& r) {
  // Compact 1-based listing: runs of consecutive indices as a-b.
  std::ostringstream os;
  const auto idx = r.indices();
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && idx[j + 1] == idx[j] + 1) ++j;
    if (i > 0) os << ',';
    os << idx[i];
    if (j > i) os << '-' << idx[j];
    i = j + 1;
  }
  return os.str();
}

std::size_t threads_from_env() {
  const char* raw = std::getenv("POSTHOC_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  char* end = nullptr;
  const long n = std::strtol(raw, &end, 10);
  if (*end != '\0' || n < 1 || n > 1024) {
    throw Error(ErrorCode::InvalidArgument, "POSTHOC_THREADS must be an integer in 1..1024");
  }
  return static_cast<std::size_t>(n);
}

int run_validate(const ValidateArgs& a, std::ostream& out) {
  const auto family = parse_family(read_file(a.family));
  const auto report = validate_forest(family);
  if (!report.is_forest) {
    out << "forest: no\n"
        << "witness: " << report.witness->first + 1 << ' ' << report.witness->second + 1 << '\n';
    return kExitDomain;
  }
  const auto index = build_index(family);
  out << "forest: yes\n"
      << "m: " << family.m() << '\n'
      << "members: " << family.size() << '\n'
      << "atoms: " << index.atoms.size() << '\n'
      << "max_depth: " << index.max_depth << '\n'
      << "max_disjoint: " << index.leaf_count << '\n';
  for (std::size_t n = 0; n < index.atoms.size(); ++n) {
    out << "atom " << n + 1 << ": " << join_ranges(index.atoms[n]) << '\n';
  }
  for (std::size_t k = 0; k < family.size(); ++k) {
    out << "member " << k + 1 << ": depth " << index.depth_of[k] << ", atoms "
        << index.interval_of[k].first + 1 << '-' << index.interval_of[k].last + 1 << '\n';
  }
  return kExitOk;
}

Count bound_of(const std::string& method, const ReferenceFamily& family, const Selection& s,
               std::size_t q) {
  if (method == "star") return v_star_forest(family, s);
  if (method == "tilde") return q == 0 ? v_tilde(family, s) : v_tilde_q(family, s, q);
  if (method == "bar") return v_bar(family, s);
  return v_star_bruteforce(family, s);
}

int run_bound(const BoundArgs& a, std::ostream& out) {
  const auto family = parse_family(read_file(a.family));
  const int sources = (a.selection.empty() ? 0 : 1) + (a.topk > 0 ? 1 : 0) + (a.all_topk.empty() ? 0 : 1);
  if (sources != 1) {
    throw Error(ErrorCode::Parse, "give exactly one of --selection, --topk, --all-topk");
  }
  if (a.method == "brute" && family.m() > kBruteForceMaxM) {
    throw Error(ErrorCode::ProblemTooLarge, "brute force needs m <= 20");
  }
  if (!family.has_all_zetas()) throw Error(ErrorCode::MissingZeta, "every member needs a zeta");
  if (a.method == "star" && !validate_forest(family).is_forest) {
    throw Error(ErrorCode::NotAForest, "method star needs a forest family");
  }

  if (!a.all_topk.empty()) {
    const auto p = parse_pvalues(read_file(a.all_topk));
    if (p.m() != family.m()) throw Error(ErrorCode::InvalidArgument, "p-value count differs from m");
    std::unique_ptr<BoundEvaluator> evaluator;
    if (a.method == "star") {
      evaluator = std::make_unique<ForestEvaluator>(family);
    } else {
      evaluator = std::make_unique<SelectionEvaluator>(
          [&](const Selection& s) { return bound_of(a.method, family, s, a.q); });
    }
    const auto env = envelope(p, *evaluator);
    std::string csv = "k," + a.method + "\n";
    for (const auto& point : env.points) csv += std::to_string(point.k) + ',' + std::to_string(point.value) + '\n';
    out << csv;
    return kExitOk;
  }

  std::vector<Index> indices;
  if (!a.selection.empty()) {
    indices = parse_indices(read_file(a.selection));
  } else {
    if (a.pvalues.empty()) throw Error(ErrorCode::Parse, "--topk needs --pvalues");
    const auto p = parse_pvalues(read_file(a.pvalues));
    if (p.m() != family.m()) throw Error(ErrorCode::InvalidArgument, "p-value count differs from m");
    if (a.topk > p.m()) throw Error(ErrorCode::InvalidArgument, "--topk exceeds m");
    const auto order = topk_order(p);
    indices.assign(order.begin(), order.begin() + a.topk);
  }
  const Selection s(normalize_indices(std::move(indices), family.m()));
  out << bound_of(a.method, family, s, a.q) << '\n';
  return kExitOk;
}

int run_calibrate(const CalibrateArgs& a, std::ostream& out) {
  const auto regions_family = parse_family(read_file(a.regions));
  if (regions_family.empty()) throw Error(ErrorCode::Parse, "region list is empty");
  const auto p = parse_pvalues(read_file(a.pvalues));
  if (p.m() != regions_family.m()) {
    throw Error(ErrorCode::InvalidArgument, "p-value count differs from m");
  }
  std::vector<Region> regions;
  for (const auto& member : regions_family.members()) regions.push_back(member.region);
  const CalibrationConfig config{a.alpha, regions.size(), a.method == "gw" ? ZetaMethod::Gw : ZetaMethod::Dkw};
  out << family_to_json(calibrate_family(regions, p, config));
  return kExitOk;
}

std::string envelope_csv(const std::vector<std::string>& names,
                         const std::vector<const Envelope*>& columns) {
  std::string csv = "k";
  for (const auto& name : names) csv += ',' + name;
  csv += '\n';
  const std::size_t rows = columns.empty() ? 0 : columns.front()->size();
  for (std::size_t k = 0; k < rows; ++k) {
    csv += std::to_string(k + 1);
    for (const Envelope* column : columns) csv += ',' + std::to_string(column->points[k].value);
    csv += '\n';
  }
  return csv;
}

int run_envelope(const EnvelopeArgs& a, std::ostream& out) {
  const auto p = parse_pvalues(read_file(a.pvalues));
  std::optional<NullMask> mask;
  if (!a.mask.empty()) {
    mask = parse_null_mask(read_file(a.mask));
    if (mask->size() != p.size()) throw Error(ErrorCode::InvalidArgument, "mask length differs from m");
  }
  if (a.gamma && a.tree_depth < 0) throw Error(ErrorCode::InvalidArgument, "--gamma needs --tree-depth");

  std::vector<std::string> names;
  std::vector<Envelope> columns;
  columns.reserve(5);
  if (mask) {
    names.push_back("oracle");
    columns.push_back(envelope(p, OracleEvaluator(), &*mask));
  }
  names.push_back("simes");
  columns.push_back(envelope(p, SimesEvaluator(p, a.alpha)));
  auto forest_at = [&](const std::vector<Region>& regions, double level) {
    return envelope(p, ForestEvaluator(calibrate_family(regions, p, {level, regions.size(), ZetaMethod::Dkw})));
  };
  if (a.part_size > 0) {
    names.push_back("part");
    columns.push_back(forest_at(build_partition_regions(p.m(), a.part_size), a.alpha));
  }
  if (a.tree_depth >= 0) {
    const auto tree = build_tree_regions(p.m(), a.tree_depth);
    names.push_back("tree");
    columns.push_back(forest_at(tree, a.alpha));
    if (a.gamma) {
      const double g = *a.gamma;
      if (!(g >= 0.0 && g <= 1.0)) throw Error(ErrorCode::InvalidArgument, "gamma must lie in [0, 1]");
      Envelope hybrid;
      for (Index k = 1; k <= p.m(); ++k) hybrid.points.push_back({k, k});
      if (g < 1.0) {
        const auto simes = envelope(p, SimesEvaluator(p, (1.0 - g) * a.alpha));
        for (std::size_t k = 0; k < hybrid.size(); ++k) {
          hybrid.points[k].value = std::min(hybrid.points[k].value, simes.points[k].value);
        }
      }
      if (g > 0.0) {
        const auto side = forest_at(tree, g * a.alpha);
        for (std::size_t k = 0; k < hybrid.size(); ++k) {
          hybrid.points[k].value = std::min(hybrid.points[k].value, side.points[k].value);
        }
      }
      names.push_back("hybrid");
      columns.push_back(std::move(hybrid));
    }
  }
  std::vector<const Envelope*> pointers;
  for (const auto& c : columns) pointers.push_back(&c);
  out << envelope_csv(names, pointers);
  return kExitOk;
}

std::string coverage_json(const JerResult& r) {
  return "{\"alpha\": " + format_double(r.alpha) + ", \"reps\": " + std::to_string(r.reps) +
         ", \"violations\": " + std::to_string(r.violations) + ", \"rate\": " + format_double(r.rate) + "}\n";
}

int run_simulate(SimulateArgs a, std::ostream& out) {
  a.sim.adjacent_signal = !a.spread;
  a.sim.validate();
  ExperimentConfig config{a.sim, a.gamma, threads_from_env()};
  const auto result = run_experiment(config);

  const fs::path dir(a.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());

  const std::vector<std::string> names{"oracle", "simes", "part", "tree", "hybrid"};
  const std::size_t width = std::to_string(a.sim.reps).size();
  for (std::size_t r = 0; r < result.replicates.size(); ++r) {
    const auto& rep = result.replicates[r];
    std::string number = std::to_string(r + 1);
    number.insert(0, width - number.size(), '0');
    write_file(dir / ("envelope_rep" + number + ".csv"),
               envelope_csv(names, {&rep.oracle, &rep.simes, &rep.part, &rep.tree, &rep.hybrid}));
  }

  std::vector<std::vector<double>> means;
  for (auto member : {&ReplicateEnvelopes::oracle, &ReplicateEnvelopes::simes, &ReplicateEnvelopes::part,
                      &ReplicateEnvelopes::tree, &ReplicateEnvelopes::hybrid}) {
    std::vector<Envelope> column;
    column.reserve(result.replicates.size());
    for (const auto& rep : result.replicates) column.push_back(rep.*member);
    means.push_back(mean_values(column));
  }
  std::string mean_csv = "k,oracle,simes,part,tree,hybrid\n";
  for (std::size_t k = 0; k < means.front().size(); ++k) {
    mean_csv += std::to_string(k + 1);
    for (const auto& column : means) mean_csv += ',' + format_double(column[k]);
    mean_csv += '\n';
  }
  write_file(dir / "envelope_mean.csv", mean_csv);
  write_file(dir / "coverage.json", coverage_json(result.coverage_tree));
  write_file(dir / "coverage_part.json", coverage_json(result.coverage_part));

  out << "partition regions: " << result.part_regions << '\n'
      << "tree regions: " << result.tree_regions << '\n'
      << "replicates: " << result.replicates.size() << '\n'
      << "tree violations: " << result.coverage_tree.violations << '\n'
      << "partition violations: " << result.coverage_part.violations << '\n';
  return kExitOk;
}

int run_ratio_curve(RatioArgs a, std::ostream& out) {
  if (!(a.mu_step > 0.0) || !(a.mu_to >= a.mu_from) || !std::isfinite(a.mu_to - a.mu_from)) {
    throw Error(ErrorCode::DomainError, "need mu-step > 0 and mu-to >= mu-from");
  }
  const double span = (a.mu_to - a.mu_from) / a.mu_step;
  if (span > 1e7) throw Error(ErrorCode::DomainError, "mu grid too large");
  const auto points = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  for (std::size_t i = 0; i < points; ++i) {
    a.input.mu_grid.push_back(a.mu_from + static_cast<double>(i) * a.mu_step);
  }
  std::string csv = "mu,ratio\n";
  for (const auto& [mu, ratio] : ratio_curve(a.input)) csv += format_double(mu) + ',' + format_double(ratio) + '\n';
  out << csv;
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Post hoc false positive bounds over forest-structured reference families", "posthoc"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  ValidateArgs validate;
  auto* validate_cmd = app.add_subcommand("validate", "Check the forest property and list atoms and depths");
  validate_cmd->add_option("family", validate.family, "Family JSON file")->required();

  BoundArgs bound;
  auto* bound_cmd = app.add_subcommand("bound", "Bound the false positives of a selection");
  bound_cmd->add_option("family", bound.family, "Calibrated family JSON file")->required();
  bound_cmd->add_option("--method", bound.method, "star, tilde, bar or brute")
      ->check(CLI::IsMember({"star", "tilde", "bar", "brute"}));
  bound_cmd->add_option("--selection", bound.selection, "File of 1-based indices, one per line");
  bound_cmd->add_option("--topk", bound.topk, "Select the k smallest p-values of --pvalues")
      ->check(CLI::PositiveNumber);
  bound_cmd->add_option("--pvalues", bound.pvalues, "p-value file used with --topk");
  bound_cmd->add_option("--all-topk", bound.all_topk, "p-value file; print the bound for every k as CSV");
  bound_cmd->add_option("--q", bound.q, "Member budget for method tilde (default: all members)");

  CalibrateArgs calibrate;
  auto* calibrate_cmd = app.add_subcommand("calibrate", "Attach local bounds to regions from p-values");
  calibrate_cmd->add_option("regions", calibrate.regions, "Family JSON file (zetas ignored)")->required();
  calibrate_cmd->add_option("pvalues", calibrate.pvalues, "p-value file")->required();
  calibrate_cmd->add_option("--alpha", calibrate.alpha, "Joint error level");
  calibrate_cmd->add_option("--method", calibrate.method, "dkw or gw")->check(CLI::IsMember({"dkw", "gw"}));

  EnvelopeArgs env;
  auto* envelope_cmd = app.add_subcommand("envelope", "Bounds on the k smallest p-values for every k, as CSV");
  envelope_cmd->add_option("pvalues", env.pvalues, "p-value file")->required();
  envelope_cmd->add_option("--alpha", env.alpha, "Level");
  envelope_cmd->add_option("--part-size", env.part_size, "Add a partition family with blocks of this size")
      ->check(CLI::PositiveNumber);
  envelope_cmd->add_option("--tree-depth", env.tree_depth, "Add a dyadic tree family of this depth")
      ->check(CLI::NonNegativeNumber);
  envelope_cmd->add_option("--gamma", env.gamma, "Add the hybrid of Simes and the tree family");
  envelope_cmd->add_option("--mask", env.mask, "File of 0/1 flags, 1 for a true null; adds the oracle column");

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Gaussian simulation: envelopes and joint error coverage");
  simulate_cmd->add_option("--m", sim.sim.m, "Number of hypotheses");
  simulate_cmd->add_option("--s", sim.sim.s, "Block size");
  simulate_cmd->add_option("--q", sim.sim.q, "Tree depth; m = s 2^q");
  simulate_cmd->add_option("--K1", sim.sim.K1, "Number of signal blocks");
  simulate_cmd->add_option("--r", sim.sim.r, "Fraction of non-nulls in a signal block");
  simulate_cmd->add_option("--mu", sim.sim.mu, "Signal mean");
  simulate_cmd->add_option("--alpha", sim.sim.alpha, "Level");
  simulate_cmd->add_option("--gamma", sim.gamma, "Hybrid split");
  simulate_cmd->add_option("--reps", sim.sim.reps, "Replicates");
  simulate_cmd->add_option("--seed", sim.sim.seed, "Seed");
  simulate_cmd->add_flag("--spread", sim.spread, "Spread signal blocks evenly instead of adjacently");
  simulate_cmd->add_option("--out-dir", sim.out_dir, "Output directory")->required();

  RatioArgs ratio;
  ratio.input.m = 1e7;
  ratio.input.s = std::pow(1e7, 2.0 / 3.0);
  ratio.input.K = ratio.input.m / ratio.input.s;
  auto* ratio_cmd = app.add_subcommand("ratio-curve", "Analytic DKW over Simes ratio as a function of mu");
  ratio_cmd->add_option("--m", ratio.input.m, "Number of hypotheses");
  ratio_cmd->add_option("--s", ratio.input.s, "Region size");
  ratio_cmd->add_option("--K", ratio.input.K, "Number of regions");
  ratio_cmd->add_option("--r", ratio.input.r, "Non-null fraction in the region");
  ratio_cmd->add_option("--alpha", ratio.input.alpha, "Level");
  ratio_cmd->add_option("--mu-from", ratio.mu_from, "First mu");
  ratio_cmd->add_option("--mu-to", ratio.mu_to, "Last mu");
  ratio_cmd->add_option("--mu-step", ratio.mu_step, "Grid step");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }

  try {
    if (validate_cmd->parsed()) return run_validate(validate, out);
    if (bound_cmd->parsed()) return run_bound(bound, out);
    if (calibrate_cmd->parsed()) return run_calibrate(calibrate, out);
    if (envelope_cmd->parsed()) return run_envelope(env, out);
    if (simulate_cmd->parsed()) return run_simulate(sim, out);
    if (ratio_cmd->parsed()) return run_ratio_curve(ratio, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::Parse || e.code() == ErrorCode::Io ? kExitIo : kExitDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitIo;
}

}  // namespace posthoc::cli
