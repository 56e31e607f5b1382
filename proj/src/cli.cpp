#include "bestsubset/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "bestsubset/baselines.hpp"
#include "bestsubset/bounds.hpp"
#include "bestsubset/ingest.hpp"
#include "bestsubset/moments.hpp"
#include "bestsubset/simulate.hpp"
#include "bestsubset/subset.hpp"

namespace bestsubset {

namespace {

using nlohmann::json;

// Bad flag values; reported together with the subcommand usage.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

void require_open_unit(double value, const std::string& flag) {
  if (!(value > 0.0 && value < 1.0)) {
    std::ostringstream msg;
    msg << flag << " must lie in (0, 1), got " << value;
    throw UsageError(msg.str());
  }
}

std::optional<int> parse_m(const std::string& text) {
  if (text == "auto") return std::nullopt;
  std::size_t used = 0;
  int m = 0;
  try {
    m = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || m < 2 || m % 2 != 0) {
    throw UsageError("--m must be 'auto' or an even integer >= 2, got '" + text + "'");
  }
  return m;
}

std::string sig6(double x) {
  std::ostringstream s;
  s << std::setprecision(6) << x;
  return s.str();
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

json exact_integer(const BigInt& value) {
  if (value >= std::numeric_limits<std::int64_t>::min() &&
      value <= std::numeric_limits<std::int64_t>::max()) {
    return value.convert_to<std::int64_t>();
  }
  return value.str();
}

json to_json(const WidthResult& w) {
  json j;
  j["method"] = to_string(w.method);
  j["width"] = w.width;
  j["vacuous"] = w.vacuous;
  j["m"] = w.m_used ? json(*w.m_used) : json(nullptr);
  j["delta_1"] = w.delta_1 ? json(*w.delta_1) : json(nullptr);
  j["delta_2"] = w.delta_2 ? json(*w.delta_2) : json(nullptr);
  j["epsilon_n"] = w.epsilon_n ? json(*w.epsilon_n) : json(nullptr);
  j["diagnostics"] = w.diagnostics;
  return j;
}

void emit(const json& report, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << report.dump(2) << '\n';
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot write '" + path + "'");
  file << report.dump(2) << '\n';
}

json header(const std::string& command, std::uint64_t seed) {
  return json{{"schema_version", kSchemaVersion}, {"command", command}, {"seed", seed}};
}

// "zipf:s=1,A=20", "simplex:A=20"
Distribution parse_distribution(const std::string& descriptor, std::uint64_t seed,
                                std::string& canonical) {
  const auto colon = descriptor.find(':');
  const std::string kind = descriptor.substr(0, colon);
  std::map<std::string, std::string> params;
  if (colon != std::string::npos) {
    std::stringstream rest(descriptor.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw UsageError("malformed --dist parameter '" + item + "'");
      params[item.substr(0, eq)] = item.substr(eq + 1);
    }
  }
  auto take = [&](const std::string& key, double fallback) {
    const auto it = params.find(key);
    if (it == params.end()) return fallback;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(it->second, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != it->second.size()) throw UsageError("bad value for --dist parameter " + key);
    params.erase(it);
    return v;
  };
  auto alphabet = [&](double raw) {
    if (raw < 1 || raw != static_cast<double>(static_cast<std::size_t>(raw))) {
      throw UsageError("--dist A must be a positive integer");
    }
    return static_cast<std::size_t>(raw);
  };

  if (kind == "zipf") {
    const double s = take("s", 1.0);
    const std::size_t A = alphabet(take("A", 20));
    if (!params.empty()) throw UsageError("unknown zipf parameter '" + params.begin()->first + "'");
    canonical = "zipf:s=" + sig6(s) + ",A=" + std::to_string(A);
    return zipf_distribution(s, A);
  }
  if (kind == "simplex") {
    const std::size_t A = alphabet(take("A", 20));
    if (!params.empty()) {
      throw UsageError("unknown simplex parameter '" + params.begin()->first + "'");
    }
    canonical = "simplex:A=" + std::to_string(A);
    return uniform_simplex(A, seed);
  }
  throw UsageError("unknown distribution '" + kind + "' (expected zipf or simplex)");
}

struct AnalyzeArgs {
  std::string counts, scores, direction = "higher_better", tie_policy = "random";
  std::string method = "finite", m = "auto", constant = "normal_quantile", output;
  double delta = 0.05, delta_split = 0.9;
  std::uint64_t seed = 0;
  int m_scan = 0;
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
  require_open_unit(a.delta, "--delta");
  require_open_unit(a.delta_split, "--delta-split");
  if (a.counts.empty() == a.scores.empty()) {
    throw UsageError("give exactly one of --counts or --scores");
  }
  SubsetConfig config;
  config.m = parse_m(a.m);
  config.delta_split = a.delta_split;
  if (a.constant == "normal_quantile") {
    config.asymptotic_constant = AsymptoticConstant::normal_quantile;
  } else if (a.constant == "log_approximation") {
    config.asymptotic_constant = AsymptoticConstant::log_approximation;
  } else {
    throw UsageError("--constant must be normal_quantile or log_approximation");
  }
  const SubsetMethod method = parse_subset_method(a.method);

  json report = header("analyze", a.seed);
  std::optional<WinCounts> counts;
  if (!a.counts.empty()) {
    counts = parse_counts_csv(a.counts);
    report["input"] = {{"kind", "counts"}, {"path", a.counts}};
  } else {
    const Direction direction = parse_direction(a.direction);
    const TiePolicy policy = parse_tie_policy(a.tie_policy);
    const ScoreMatrix scores = parse_scores_csv(a.scores, direction);
    counts = wins_from_scores(scores, policy, a.seed);
    report["input"] = {{"kind", "scores"}, {"path", a.scores}, {"direction", to_string(direction)}};
    report["tie_audit"] = {{"policy", to_string(policy)},
                           {"tied_rows", count_tied_rows(scores)},
                           {"dropped_rows", scores.dropped_rows},
                           {"datasets", scores.scores.size()}};
  }

  const ConfidenceSubset subset = select_subset(*counts, a.delta, method, config);
  const Distribution p_hat = mle(*counts);

  report["labels"] = counts->labels();
  report["counts"] = counts->counts();
  report["n"] = counts->n();
  report["p_hat"] = std::vector<double>(p_hat.probs().begin(), p_hat.probs().end());
  report["method"] = to_string(method);
  report["delta"] = a.delta;
  report["delta_split"] = a.delta_split;
  report["delta_1"] = subset.detail.delta_1 ? json(*subset.detail.delta_1) : json(nullptr);
  report["delta_2"] = subset.detail.delta_2 ? json(*subset.detail.delta_2) : json(nullptr);
  report["m"] = subset.detail.m_used ? json(*subset.detail.m_used) : json(nullptr);
  report["m_selection"] = a.m == "auto" ? "auto" : "fixed";
  report["width"] = subset.width;
  report["members"] = subset.members;
  report["subset_size"] = subset.members.size();
  report["argmax_set"] = subset.argmax_set;
  report["saturated"] = subset.saturated;
  report["vacuous"] = subset.detail.vacuous;
  report["detail"] = to_json(subset.detail);
  report["advisory"] = subset.advisory ? json(*subset.advisory) : json(nullptr);

  if (a.m_scan > 0) {
    if (method != SubsetMethod::finite) throw UsageError("--m-scan applies to --method finite");
    if (a.m_scan < 2 || a.m_scan % 2 != 0) throw UsageError("--m-scan must be an even integer >= 2");
    const auto [d1, d2] = split_delta(a.delta, a.delta_split);
    json scan = json::array();
    for (const auto& [m, r] : scan_m_widths(p_hat, counts->n(), d1, d2, a.m_scan)) {
      scan.push_back({{"m", m}, {"width", 2.0 * r}});
    }
    report["m_scan"] = {{"note", "diagnostic only; the subset above uses the m shown in 'm'"},
                        {"widths", scan}};
  }

  emit(report, a.output, out);

  err << "subset (" << subset.members.size() << " of " << counts->size()
      << "): " << join(subset.members) << '\n'
      << "width " << sig6(subset.width) << " below p_hat max " << sig6(p_hat.max()) << " ("
      << to_string(method);
  if (subset.detail.m_used) err << ", m=" << *subset.detail.m_used;
  err << ", delta=" << sig6(a.delta) << ")\n";
  if (subset.detail.vacuous) err << "note: width is vacuous\n";
  if (subset.advisory) err << "advisory: " << *subset.advisory << '\n';
  return kExitOk;
}

struct SimulateArgs {
  std::string dist = "zipf:s=1,A=20", plot_data, m = "auto", output;
  std::vector<std::int64_t> n_grid{50, 200, 1000};
  std::vector<std::string> methods{"finite", "asymptotic", "oracle"};
  std::int64_t reps = 1000, oracle_reps = 100000;
  double delta = 0.05, delta_split = 0.9;
  std::uint64_t seed = 0;
  int threads = 0;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  require_open_unit(a.delta, "--delta");
  require_open_unit(a.delta_split, "--delta-split");
  if (a.reps < 1) throw UsageError("--reps must be >= 1");
  if (a.oracle_reps < 1) throw UsageError("--oracle-reps must be >= 1");
  if (a.n_grid.empty()) throw UsageError("--n-grid is empty");
  std::set<CoverageMethod> methods;
  for (const auto& name : a.methods) methods.insert(parse_coverage_method(name));

  std::string label;
  const Distribution p = parse_distribution(a.dist, a.seed, label);
  if (methods.contains(CoverageMethod::oracle) && p.max_multiplicity() != 1) {
    throw std::invalid_argument("distribution " + label + " has " +
                                std::to_string(p.max_multiplicity()) +
                                " tied maxima at p = " + sig6(p.max()) +
                                "; the oracle needs a unique best symbol");
  }

  ExperimentOptions options;
  options.threads = a.threads;
  options.oracle_replicates = a.oracle_reps;
  options.subset.m = parse_m(a.m);
  options.subset.delta_split = a.delta_split;
  options.distribution_label = label;
  const CoverageReport result =
      coverage_experiment(p, a.n_grid, a.delta, methods, a.reps, a.seed, options);

  json report = header("simulate", a.seed);
  std::vector<std::string> method_names;
  for (auto mth : methods) method_names.push_back(to_string(mth));
  report["distribution"] = {{"descriptor", result.distribution},
                            {"A", result.probs.size()},
                            {"probs", result.probs},
                            {"p1", p.max()},
                            {"best", result.best + 1}};
  report["delta"] = result.delta;
  report["delta_split"] = a.delta_split;
  report["m"] = a.m;
  report["replicates"] = result.replicates;
  report["oracle_replicates"] = result.oracle_replicates;
  report["n_grid"] = a.n_grid;
  report["methods"] = method_names;
  json rows = json::array();
  for (const auto& r : result.rows) {
    json row = {{"method", to_string(r.method)}, {"n", r.n},
                {"coverage", r.coverage},       {"mean_size", r.mean_size},
                {"se_coverage", r.se_coverage}, {"se_size", r.se_size},
                {"replicates", r.replicates}};
    if (r.oracle_width) row["oracle_width"] = *r.oracle_width;
    rows.push_back(row);
  }
  report["rows"] = rows;

  if (!a.plot_data.empty()) {
    std::ofstream csv(a.plot_data, std::ios::binary);
    if (!csv) throw InputError("cannot write '" + a.plot_data + "'");
    write_coverage_csv(result, csv);
  }
  emit(report, a.output, out);

  err << result.distribution << "  p1 = " << sig6(p.max()) << "  delta = " << sig6(a.delta)
      << "  reps = " << a.reps << '\n';
  for (const auto& r : result.rows) {
    err << "  " << std::left << std::setw(10) << to_string(r.method) << " n=" << std::setw(7)
        << r.n << " coverage " << std::setw(10) << sig6(r.coverage) << " mean size "
        << sig6(r.mean_size) << '\n';
  }
  return kExitOk;
}

struct BaselinesArgs {
  std::string scores, counts, direction = "higher_better", tie_policy = "random", output;
  double delta = 0.05;
  std::uint64_t seed = 0;
};

int cmd_baselines(const BaselinesArgs& a, std::ostream& out, std::ostream& err) {
  require_open_unit(a.delta, "--delta");
  if (a.scores.empty() && a.counts.empty()) {
    throw UsageError("give --scores and/or --counts");
  }
  json report = header("baselines", a.seed);
  report["delta"] = a.delta;

  std::optional<WinCounts> counts;
  if (!a.scores.empty()) {
    const Direction direction = parse_direction(a.direction);
    const ScoreMatrix scores = parse_scores_csv(a.scores, direction);
    const RankMatrix ranks = ranks_from_scores(scores);
    const FriedmanResult f = friedman_test(ranks, a.delta);
    const NemenyiResult nem = nemenyi_test(ranks, a.delta);

    report["scores"] = {{"path", a.scores},
                        {"direction", to_string(direction)},
                        {"datasets", ranks.datasets()},
                        {"dropped_rows", scores.dropped_rows},
                        {"rows_with_ties", ranks.rows_with_ties}};
    report["average_ranks"] = json::object();
    for (std::size_t i = 0; i < ranks.size(); ++i) {
      report["average_ranks"][ranks.algorithms[i]] = ranks.average_ranks[i];
    }
    report["friedman"] = {{"chi2", f.chi2},       {"df", f.df},         {"p_value", f.p_value},
                          {"iman_f", f.iman_f},   {"iman_p", f.iman_p}, {"reject", f.reject}};
    json pairs = json::array();
    for (std::size_t i = 0; i < ranks.size(); ++i) {
      for (std::size_t j = i + 1; j < ranks.size(); ++j) {
        pairs.push_back({{"a", ranks.algorithms[i]},
                         {"b", ranks.algorithms[j]},
                         {"rank_difference", ranks.average_ranks[i] - ranks.average_ranks[j]},
                         {"significant", static_cast<bool>(nem.significant[i][j])}});
      }
    }
    report["nemenyi"] = {{"cd", nem.cd},
                         {"q_over_sqrt2", nem.q_over_sqrt2},
                         {"comparable_to_best", nem.comparable_to_best},
                         {"pairs", pairs}};
    err << "Friedman chi2 " << sig6(f.chi2) << " (p " << sig6(f.p_value) << "), Iman F "
        << sig6(f.iman_f) << " (p " << sig6(f.iman_p) << ")" << (f.reject ? ", reject" : "")
        << '\n'
        << "Nemenyi CD " << sig6(nem.cd) << "; " << nem.comparable_to_best.size() << " of "
        << ranks.size() << " not significantly worse than the best\n";

    if (a.counts.empty()) {
      const TiePolicy policy = parse_tie_policy(a.tie_policy);
      counts = wins_from_scores(scores, policy, a.seed);
      report["counts_source"] = {{"kind", "scores"}, {"tie_policy", to_string(policy)}};
    }
  }
  if (!a.counts.empty()) {
    counts = parse_counts_csv(a.counts);
    report["counts_source"] = {{"kind", "counts"}, {"path", a.counts}};
  }

  if (counts->size() >= 2) {
    const VerificationChain chain = rank_verification(*counts, a.delta);
    json comparisons = json::array();
    for (const auto& c : chain.comparisons) {
      comparisons.push_back({{"leader", c.leader},
                             {"follower", c.follower},
                             {"leader_count", c.leader_count},
                             {"follower_count", c.follower_count},
                             {"tail_probability", c.tail_probability},
                             {"p_value", c.p_value},
                             {"reject", c.reject}});
    }
    report["rank_verification"] = {{"comparisons", comparisons},
                                   {"verified_prefix_length", chain.verified_prefix_length}};
    err << "rank verification: " << chain.verified_prefix_length << " leading comparison(s) verified\n";
  }
  emit(report, a.output, out);
  return kExitOk;
}

struct MomentsArgs {
  int m = 0;
  std::int64_t n = 0;
  std::optional<double> theta;
  std::uint64_t seed = 0;
  std::string output;
};

int cmd_moments(const MomentsArgs& a, std::ostream& out, std::ostream& err) {
  if (a.m < 1) throw UsageError("--m must be >= 1");
  if (a.n < 1) throw UsageError("--n must be >= 1");
  if (a.theta && !(*a.theta >= 0.0 && *a.theta <= 1.0)) {
    throw UsageError("--theta must lie in [0, 1]");
  }
  const bool even = a.m % 2 == 0;
  if (!even && !a.theta) {
    throw UsageError("coefficients are defined for even m only; pass --theta to evaluate odd m");
  }
  const MomentPolynomial& poly = central_moment_poly(a.m);

  json report = header("moments", a.seed);
  report["m"] = a.m;
  report["n"] = a.n;
  report["parity"] = even ? "even" : "odd";
  json polys = json::array();
  for (std::size_t k = 1; k <= poly.coeffs().size(); ++k) {
    polys.push_back({{"k", k}, {"c", poly.coeff(static_cast<int>(k)).to_string()}});
  }
  report["polynomials"] = polys;

  if (even) {
    json values = json::array();
    for (const auto& c : poly.instantiate(a.n)) values.push_back(exact_integer(c));
    report["coefficients"] = values;
    const auto holds = coefficient_bound_holds(a.m, a.n);
    report["bound_check"] = {
        {"per_k", holds},
        {"all", std::all_of(holds.begin(), holds.end(), [](bool b) { return b; })}};
    report["sup_derivative_term"] = sup_derivative_term(a.m, a.n);
    err << "c_k for m=" << a.m << ", n=" << a.n << ": " << values.dump() << '\n';
  }
  if (a.theta) {
    const double value = eval_central_moment(a.m, a.n, *a.theta);
    report["theta"] = *a.theta;
    report["central_moment"] = value;
    err << "E(Y - n theta)^" << a.m << " at theta=" << sig6(*a.theta) << ": " << sig6(value) << '\n';
  }
  emit(report, a.output, out);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Confidence subsets for the most probable winner among competing algorithms",
               "best_subset"};
  app.require_subcommand(1);

  AnalyzeArgs analyze;
  auto* an = app.add_subcommand("analyze", "Confidence subset from win counts or a score matrix");
  an->add_option("--counts", analyze.counts, "CSV with header algorithm,count");
  an->add_option("--scores", analyze.scores, "CSV with header dataset,<alg1>,<alg2>,...");
  an->add_option("--direction", analyze.direction, "higher_better or lower_better")
      ->capture_default_str();
  an->add_option("--tie-policy", analyze.tie_policy, "random, first or all_fractional_rounded")
      ->capture_default_str();
  an->add_option("--delta", analyze.delta, "Miscoverage level in (0, 1)")->capture_default_str();
  an->add_option("--method", analyze.method, "finite or asymptotic")->capture_default_str();
  an->add_option("--m", analyze.m, "Moment order: auto or an even integer")->capture_default_str();
  an->add_option("--delta-split", analyze.delta_split, "Share of delta spent on the moment bound")
      ->capture_default_str();
  an->add_option("--constant", analyze.constant,
                 "Asymptotic constant: normal_quantile or log_approximation")
      ->capture_default_str();
  an->add_option("--seed", analyze.seed, "Seed for random tie breaking")->capture_default_str();
  an->add_option("--m-scan", analyze.m_scan, "Also report widths for even m up to this value");
  an->add_option("--output", analyze.output, "Write the JSON report here instead of stdout");

  SimulateArgs simulate;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo coverage and subset size study");
  sim->add_option("--dist", simulate.dist, "zipf:s=<s>,A=<A> or simplex:A=<A>")
      ->capture_default_str();
  sim->add_option("--n-grid", simulate.n_grid, "Comma-separated sample sizes")
      ->delimiter(',')
      ->capture_default_str();
  sim->add_option("--reps", simulate.reps, "Replicates per sample size")->capture_default_str();
  sim->add_option("--methods", simulate.methods, "Comma-separated: finite, asymptotic, oracle")
      ->delimiter(',')
      ->capture_default_str();
  sim->add_option("--delta", simulate.delta, "Miscoverage level in (0, 1)")->capture_default_str();
  sim->add_option("--delta-split", simulate.delta_split, "Share of delta spent on the moment bound")
      ->capture_default_str();
  sim->add_option("--m", simulate.m, "Moment order: auto or an even integer")->capture_default_str();
  sim->add_option("--seed", simulate.seed, "Master seed")->capture_default_str();
  sim->add_option("--oracle-reps", simulate.oracle_reps, "Calibration replicates for the oracle")
      ->capture_default_str();
  sim->add_option("--plot-data", simulate.plot_data, "Write long-format CSV here");
  sim->add_option("--threads", simulate.threads,
                  "Worker threads (0: BEST_SUBSET_THREADS or hardware)");
  sim->add_option("--output", simulate.output, "Write the JSON report here instead of stdout");

  BaselinesArgs baselines;
  auto* base = app.add_subcommand("baselines", "Friedman, Nemenyi and rank verification");
  base->add_option("--scores", baselines.scores, "CSV with header dataset,<alg1>,<alg2>,...");
  base->add_option("--counts", baselines.counts, "CSV with header algorithm,count");
  base->add_option("--direction", baselines.direction, "higher_better or lower_better")
      ->capture_default_str();
  base->add_option("--tie-policy", baselines.tie_policy,
                   "Tie policy when wins are derived from --scores")
      ->capture_default_str();
  base->add_option("--delta", baselines.delta, "Test level in (0, 1)")->capture_default_str();
  base->add_option("--seed", baselines.seed, "Seed for random tie breaking")->capture_default_str();
  base->add_option("--output", baselines.output, "Write the JSON report here instead of stdout");

  MomentsArgs moments;
  auto* mom = app.add_subcommand("moments", "Binomial central moment coefficients");
  mom->add_option("--m", moments.m, "Moment order")->required();
  mom->add_option("--n", moments.n, "Number of trials")->required();
  mom->add_option("--theta", moments.theta, "Evaluate the moment at this success probability");
  mom->add_option("--seed", moments.seed, "Echoed only")->capture_default_str();
  mom->add_option("--output", moments.output, "Write the JSON report here instead of stdout");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* active = app.get_subcommands().front();
  try {
    if (active == an) return cmd_analyze(analyze, out, err);
    if (active == sim) return cmd_simulate(simulate, out, err);
    if (active == base) return cmd_baselines(baselines, out, err);
    return cmd_moments(moments, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << active->help();
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace bestsubset
