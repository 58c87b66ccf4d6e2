#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ginidep/csv.hpp"
#include "ginidep/error.hpp"
#include "ginidep/inference.hpp"
#include "ginidep/kernels.hpp"
#include "ginidep/parallel.hpp"
#include "ginidep/report.hpp"
#include "ginidep/screening.hpp"
#include "ginidep/simgen.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitInfeasible = 3;

using namespace ginidep;

Statistic require_statistic(const std::string& name, bool allow_plugin = false) {
  const auto s = parse_statistic(name);
  if (!s || (*s == Statistic::dcov_plugin && !allow_plugin)) {
    throw InvalidInput("unknown statistic '" + name + "' (expected gcov, gcor, dcov, dcor, eta2)");
  }
  return *s;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) {
    throw InvalidInput("cannot write '" + path + "'");
  }
}

struct ScreenArgs {
  ScreeningConfig config;
  std::string input;
  std::string statistic = "gcor";
  std::optional<std::size_t> top_k;
  std::optional<std::size_t> sample_cap;
  std::string out_dir = ".";
};

struct SimulateArgs {
  std::string family = "normal";
  std::size_t k = 3;
  std::size_t n = 100;
  std::size_t m = 10000;
  double sigma2 = kDefaultSigma2;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  std::vector<std::string> statistics = {"dcov", "dcor", "gcov", "gcor"};
  std::string out;
};

struct TestArgs {
  std::string input;
  std::string label = "label";
  std::string feature;
  std::string statistic = "gcov";
  double sigma2 = kDefaultSigma2;
  bool standardize = true;
  std::size_t permutations = 999;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  std::string out;
};

int run_screen(ScreenArgs& a) {
  a.config.input = a.input;
  a.config.statistic = require_statistic(a.statistic);
  a.config.top_k = a.top_k;
  a.config.sample_cap = a.sample_cap;
  a.config.out_dir = a.out_dir;
  const auto result = run_screening(a.config);
  for (const auto& w : result.warnings) {
    std::cerr << "warning: " << w << '\n';
  }
  std::cout << "ranked " << result.ranking.features.size() << " features; selected";
  for (const auto& s : result.selected) {
    std::cout << ' ' << s;
  }
  std::cout << "\nwrote " << (a.config.out_dir / "ranking.csv").string() << " and "
            << (a.config.out_dir / "report.json").string() << '\n';
  return kExitOk;
}

int run_simulate(const SimulateArgs& a) {
  PowerConfig config;
  const auto family = parse_family(a.family);
  if (!family) {
    throw InvalidInput("unknown family '" + a.family + "' (expected normal, exponential, gamma)");
  }
  config.family = *family;
  config.classes = a.k;
  config.n = a.n;
  config.m = a.m;
  config.kernel = BoundedKernel::weighted_gaussian(a.sigma2);
  config.alpha = a.alpha;
  config.seed = a.seed;
  std::vector<Statistic> statistics;
  for (const auto& s : a.statistics) {
    statistics.push_back(require_statistic(s, true));
  }
  emit(to_json(power_and_auc(config, statistics)), a.out);
  return kExitOk;
}

int run_test(const TestArgs& a) {
  const Statistic statistic = require_statistic(a.statistic);
  auto loaded = load_csv(a.input, a.label);
  for (const auto& w : loaded.warnings) {
    std::cerr << "warning: " << w << '\n';
  }
  LabeledDataset data = std::move(loaded.data);
  std::size_t column = 0;
  if (a.feature.empty()) {
    if (data.feature_count() != 1) {
      throw InvalidInput("--feature is required when the file has more than one feature");
    }
  } else {
    column = resolve_column(data.feature_names, a.feature);
  }
  if (a.standardize) {
    data = standardize(data).data;
  }
  const std::vector<double> x = data.features.column_copy(column);
  TestReport report;
  if (a.permutations == 0) {
    if (statistic != Statistic::gcov) {
      throw InvalidInput("--permutations 0 selects the distribution-free test, which is "
                         "defined for gcov only");
    }
    const auto d = pairwise_matrix(BoundedKernel::weighted_gaussian(a.sigma2), x);
    report = critical_value_test(gcov_n(d, data.labels), a.alpha, data.size());
    report.seed = a.seed;
  } else if (statistic == Statistic::eta2) {
    report = permutation_test(LabelStatistic(Statistic::eta2, x), data.labels, a.permutations,
                              a.alpha, a.seed);
  } else {
    const auto d = pairwise_matrix(BoundedKernel::weighted_gaussian(a.sigma2), x);
    report = permutation_test(statistic, d, data.labels, a.permutations, a.alpha, a.seed);
  }
  emit(to_json(report), a.out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gini distance dependence statistics for feature screening"};
  app.set_version_flag("--version", std::string(ginidep::kVersion));
  app.require_subcommand(1);
  app.fallthrough();
  std::optional<unsigned> threads;
  app.add_option("--threads", threads, "Worker threads (default: GINIDEP_THREADS or all cores)");

  ScreenArgs screen;
  auto* sc = app.add_subcommand("screen", "Rank CSV features by dependence on a label");
  sc->add_option("--input", screen.input, "CSV file with a header row")->required();
  sc->add_option("--label", screen.config.label, "Label column name or 0-based index")
      ->capture_default_str();
  sc->add_option("--statistic", screen.statistic, "gcov, gcor, dcov, dcor or eta2")
      ->capture_default_str();
  sc->add_option("--sigma2", screen.config.sigma2, "Gaussian kernel width")->capture_default_str();
  sc->add_flag("--standardize,!--no-standardize", screen.config.standardize,
               "Standardize features before scoring (default on)");
  sc->add_option("--top-k", screen.top_k, "Number of features to select");
  sc->add_option("--permutations", screen.config.permutations,
                 "Permutations for p-values (0 = none)")
      ->capture_default_str();
  sc->add_option("--alpha", screen.config.alpha, "Test level")->capture_default_str();
  sc->add_option("--seed", screen.config.seed, "Random seed")->capture_default_str();
  sc->add_option("--sample-cap", screen.sample_cap, "Subsample at most this many rows");
  sc->add_flag("--drop-small-classes", screen.config.drop_small_classes,
               "Drop classes with fewer than 2 rows");
  sc->add_option("--out-dir", screen.out_dir, "Directory for ranking.csv and report.json")
      ->capture_default_str();

  SimulateArgs sim;
  auto* si = app.add_subcommand("simulate", "Monte Carlo power and AUC study");
  si->add_option("--family", sim.family, "normal, exponential or gamma")->capture_default_str();
  si->add_option("--k", sim.k, "Number of classes")->capture_default_str();
  si->add_option("--n", sim.n, "Samples per dataset")->capture_default_str();
  si->add_option("--m", sim.m, "Datasets per hypothesis")->capture_default_str();
  si->add_option("--sigma2", sim.sigma2, "Gaussian kernel width")->capture_default_str();
  si->add_option("--alpha", sim.alpha, "Type I error for the power column")
      ->capture_default_str();
  si->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
  si->add_option("--statistics", sim.statistics, "Statistics to compare")->capture_default_str();
  si->add_option("--out", sim.out, "Output file (default stdout)");

  TestArgs test;
  auto* te = app.add_subcommand("test", "Independence test of one feature against the label");
  te->add_option("--input", test.input, "CSV file with a header row")->required();
  te->add_option("--label", test.label, "Label column name or 0-based index")
      ->capture_default_str();
  te->add_option("--feature", test.feature, "Feature name or 0-based feature index");
  te->add_option("--statistic", test.statistic, "gcov, gcor, dcov, dcor or eta2")
      ->capture_default_str();
  te->add_option("--sigma2", test.sigma2, "Gaussian kernel width")->capture_default_str();
  te->add_flag("--standardize,!--no-standardize", test.standardize,
               "Standardize the feature first (default on)");
  te->add_option("--permutations", test.permutations,
                 "Permutations (0 = distribution-free gcov critical value)")
      ->capture_default_str();
  te->add_option("--alpha", test.alpha, "Test level")->capture_default_str();
  te->add_option("--seed", test.seed, "Random seed")->capture_default_str();
  te->add_option("--out", test.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (threads) {
      ginidep::set_thread_count(*threads);
    }
    if (sc->parsed()) {
      return run_screen(screen);
    }
    if (si->parsed()) {
      return run_simulate(sim);
    }
    return run_test(test);
  } catch (const ginidep::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.is_statistical() ? kExitInfeasible : kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
}
