#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "mpot/mpot.hpp"

namespace mpot::cli {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

enum class CliMethod { Bipartite, Multipartite, Sinkhorn, ImprovedSinkhorn };

const std::map<std::string, CliMethod> kMethodNames{{"bipartite", CliMethod::Bipartite},
                                                    {"multipartite", CliMethod::Multipartite},
                                                    {"sinkhorn", CliMethod::Sinkhorn},
                                                    {"improved-sinkhorn", CliMethod::ImprovedSinkhorn}};

const std::map<std::string, CostNormalization> kNormalizationNames{
    {"none", CostNormalization::None}, {"median", CostNormalization::Median}, {"max", CostNormalization::Max}};

bool is_exact(CliMethod m) { return m == CliMethod::Bipartite || m == CliMethod::Multipartite; }

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}

std::pair<double, double> mean_stddev(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

// Runs fn(0..count-1) on up to `jobs` threads.
template <typename Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || count < 2) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < count; k = next++) fn(k);
    });
  }
}

GridShape parse_shape(const std::string& text) {
  std::vector<Index> dims;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    try {
      std::size_t used = 0;
      dims.push_back(std::stoll(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::InvalidArgument, "bad shape '" + text + "'");
    }
  }
  return GridShape(dims);
}

std::vector<std::pair<double, double>> parse_bounds(const std::string& text) {
  std::vector<std::pair<double, double>> out;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    const auto colon = part.find(':');
    try {
      if (colon == std::string::npos) throw std::invalid_argument(part);
      out.emplace_back(std::stod(part.substr(0, colon)), std::stod(part.substr(colon + 1)));
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::InvalidArgument, "bad bounds '" + text + "', expected lo:hi,lo:hi,...");
    }
  }
  return out;
}

struct ExactOptions {
  int p = 2;
  std::int64_t total = kDefaultTargetTotal;
  double spacing = 1.0;
  std::string cost_file;
};

struct SinkhornOptions {
  double lambda = 1.0;
  int max_iters = 10'000;
  double tol = 1e-9;
  std::string normalization = "median";

  SinkhornConfig config() const {
    SinkhornConfig cfg;
    cfg.lambda = lambda;
    cfg.max_iters = max_iters;
    cfg.marginal_tol = tol;
    cfg.normalization = kNormalizationNames.at(normalization);
    return cfg;
  }
};

SeparableCost make_cost(const ExactOptions& o, const GridShape& shape) {
  return o.cost_file.empty() ? power_cost(shape, o.p) : load_cost_tables(o.cost_file, shape);
}

// Distance from a cost normalized to unit mass.
double distance_of(const ExactOptions& o, double unit_cost) {
  if (!o.cost_file.empty()) return unit_cost;
  return o.spacing * std::pow(std::max(unit_cost, 0.0), 1.0 / o.p);
}

struct PairResult {
  std::string objective;
  std::int64_t total = 0;
  double distance = 0.0;
  double seconds = 0.0;
  std::int64_t pivots = 0;
  std::int64_t nodes = 0;
  std::int64_t arcs = 0;
  std::optional<SinkhornResult> sinkhorn;
  std::optional<TransportPlan> plan;
};

PairResult compute_pair(const Histogram& mu, const Histogram& nu, CliMethod method, const ExactOptions& eo,
                        const SinkhornOptions& so, bool want_plan) {
  if (!(mu.shape() == nu.shape())) throw Error(ErrorKind::ShapeMismatch, "histograms live on different grids");
  PairResult r;
  const auto start = Clock::now();
  const auto cost = make_cost(eo, mu.shape());
  const auto muI = integerize(mu, eo.total);
  const auto nuI = integerize(nu, eo.total);
  r.total = eo.total;
  if (is_exact(method)) {
    TransportOptions to;
    to.method = method == CliMethod::Bipartite ? Method::Bipartite : Method::Multipartite;
    to.target_total = eo.total;
    to.want_plan = want_plan;
    auto d = optimal_transport(muI, nuI, cost, to);
    r.seconds = seconds_since(start);
    r.objective = std::to_string(d.cost);
    r.distance = distance_of(eo, static_cast<double>(d.cost) / static_cast<double>(d.total));
    r.pivots = d.stats.pivots;
    r.nodes = d.nodes;
    r.arcs = d.arcs;
    r.plan = std::move(d.plan);
  } else {
    const auto muR = muI.cast<double>();
    const auto nuR = nuI.cast<double>();
    r.sinkhorn = method == CliMethod::Sinkhorn ? sinkhorn(muR, nuR, cost, so.config())
                                               : improved_sinkhorn_2d(muR, nuR, cost, so.config());
    r.seconds = seconds_since(start);
    r.objective = fmt(r.sinkhorn->upper_bound * static_cast<double>(eo.total));
    r.distance = distance_of(eo, r.sinkhorn->upper_bound);
    r.arcs = r.sinkhorn->kernel_entries;
  }
  return r;
}

void add_exact_flags(CLI::App* cmd, ExactOptions& o) {
  cmd->add_option("--p", o.p, "order of the distance")->check(CLI::Range(1, 16));
  cmd->add_option("--total", o.total, "integer mass both histograms are scaled to")->check(CLI::PositiveNumber);
  cmd->add_option("--spacing", o.spacing, "physical distance between adjacent bins")->check(CLI::PositiveNumber);
  cmd->add_option("--cost", o.cost_file, "per-axis cost tables (replaces |a-b|^p)")->check(CLI::ExistingFile);
}

void add_sinkhorn_flags(CLI::App* cmd, SinkhornOptions& o) {
  cmd->add_option("--lambda", o.lambda, "Sinkhorn regularization")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iters", o.max_iters, "Sinkhorn iteration cap")->check(CLI::PositiveNumber);
  cmd->add_option("--tol", o.tol, "Sinkhorn L1 marginal tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--normalization", o.normalization, "cost scaling before exponentiation")
      ->check(CLI::IsMember({"none", "median", "max"}));
}

// ---------------------------------------------------------------------------

struct ComputeArgs {
  std::string first;
  std::string second;
  std::string method = "multipartite";
  std::string plan_out;
  bool gap = false;
  ExactOptions exact;
  SinkhornOptions sink;
};

void cmd_compute(const ComputeArgs& a, std::ostream& out) {
  const auto method = kMethodNames.at(a.method);
  if (!a.plan_out.empty() && !is_exact(method)) {
    throw Error(ErrorKind::InvalidArgument, "--plan-out needs an exact method");
  }
  const auto mu = load_histogram(a.first);
  const auto nu = load_histogram(a.second);
  const auto r = compute_pair(mu, nu, method, a.exact, a.sink, !a.plan_out.empty());
  out << "method: " << a.method << '\n';
  if (r.sinkhorn) {
    out << "upper_bound: " << fmt(r.sinkhorn->upper_bound) << '\n'
        << "objective: " << r.objective << '\n'
        << "total: " << r.total << '\n'
        << "distance: " << fmt(r.distance) << '\n'
        << "iterations: " << r.sinkhorn->iterations << '\n'
        << "converged: " << (r.sinkhorn->converged ? "true" : "false") << '\n'
        << "marginal_error: " << fmt(r.sinkhorn->marginal_error) << '\n'
        << "kernel_entries: " << r.sinkhorn->kernel_entries << '\n'
        << "runtime_s: " << fmt(r.seconds) << '\n';
    if (a.gap) {
      const auto exact = compute_pair(mu, nu, CliMethod::Multipartite, a.exact, a.sink, false);
      const double opt = std::stod(exact.objective) / static_cast<double>(exact.total);
      out << "exact_objective: " << exact.objective << '\n' << "gap_percent: " << fmt(gap(opt, r.sinkhorn->upper_bound)) << '\n';
    }
    return;
  }
  out << "nodes: " << r.nodes << '\n'
      << "arcs: " << r.arcs << '\n'
      << "objective: " << r.objective << '\n'
      << "total: " << r.total << '\n'
      << "distance: " << fmt(r.distance) << '\n'
      << "runtime_s: " << fmt(r.seconds) << '\n'
      << "pivots: " << r.pivots << '\n';
  if (!a.plan_out.empty()) {
    std::ofstream file(a.plan_out);
    if (!file) throw Error(ErrorKind::IoError, "cannot write " + a.plan_out);
    write_plan_csv(file, *r.plan);
    if (!file) throw Error(ErrorKind::IoError, "write failed for " + a.plan_out);
  }
}

// ---------------------------------------------------------------------------

struct BatchArgs {
  std::string dir;
  std::string method = "multipartite";
  int jobs = 1;
  ExactOptions exact;
  SinkhornOptions sink;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

void cmd_batch(const BatchArgs& a, std::ostream& out) {
  const auto method = kMethodNames.at(a.method);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(a.dir)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".pgm" || ext == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.size() < 2) throw Error(ErrorKind::EmptyInput, "batch needs at least two .pgm or .csv files in " + a.dir);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < files.size(); ++i) {
    for (std::size_t j = i + 1; j < files.size(); ++j) pairs.emplace_back(i, j);
  }
  struct Row {
    std::optional<PairResult> result;
    std::string error;
  };
  std::vector<Row> rows(pairs.size());
  parallel_for(pairs.size(), a.jobs, [&](std::size_t k) {
    try {
      const auto mu = load_histogram(files[pairs[k].first]);
      const auto nu = load_histogram(files[pairs[k].second]);
      rows[k].result = compute_pair(mu, nu, method, a.exact, a.sink, false);
    } catch (const std::exception& e) {
      rows[k].error = e.what();
    }
  });

  out << "mu,nu,method,objective,total,distance,runtime_s,stddev_runtime_s,status,message\n";
  std::vector<double> times;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    out << csv_field(files[pairs[k].first].filename().string()) << ','
        << csv_field(files[pairs[k].second].filename().string()) << ',' << a.method << ',';
    if (const auto& r = rows[k].result) {
      times.push_back(r->seconds);
      out << r->objective << ',' << r->total << ',' << fmt(r->distance) << ',' << fmt(r->seconds) << ",,ok,\n";
    } else {
      out << ",,,,,error," << csv_field(rows[k].error) << '\n';
    }
  }
  const auto [mean, sd] = mean_stddev(times);
  out << "SUMMARY," << times.size() << ',' << a.method << ",,,," << fmt(mean) << ',' << fmt(sd) << ','
      << (times.size() == pairs.size() ? "ok" : "partial") << ",\n";
}

// ---------------------------------------------------------------------------

struct BenchArgs {
  std::vector<Index> sizes{16};
  std::vector<int> dims{2};
  std::vector<std::string> methods{"bipartite", "multipartite"};
  int reps = 3;
  int p = 2;
  std::uint64_t seed = 1;
  std::int64_t total = kDefaultTargetTotal;
  std::int64_t arc_budget = std::int64_t{1} << 27;
  int jobs = 1;
};

IntegerHistogram white_noise(std::mt19937_64& rng, const GridShape& shape, std::int64_t total) {
  std::uniform_int_distribution<int> level(0, 255);
  std::vector<double> v(static_cast<std::size_t>(shape.size()));
  for (auto& x : v) x = level(rng);
  if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) v[0] = 1.0;
  return integerize(from_dense(shape, v), total);
}

void cmd_bench(const BenchArgs& a, std::ostream& out) {
  for (const auto& m : a.methods) {
    if (!kMethodNames.contains(m) || !is_exact(kMethodNames.at(m))) {
      throw Error(ErrorKind::InvalidArgument, "bench supports bipartite and multipartite, got '" + m + "'");
    }
  }
  out << "N,d,method,nodes,arcs,mean_runtime_s,stddev_runtime_s,status\n";
  std::mt19937_64 rng(a.seed);
  for (const Index n : a.sizes) {
    for (const int d : a.dims) {
      const GridShape shape(std::vector<Index>(static_cast<std::size_t>(d), n));
      // instances are shared by every method in this row group
      std::vector<std::pair<IntegerHistogram, IntegerHistogram>> instances;
      for (int r = 0; r < a.reps; ++r) {
        auto mu = white_noise(rng, shape, a.total);
        auto nu = white_noise(rng, shape, a.total);
        instances.emplace_back(std::move(mu), std::move(nu));
      }
      const auto cost = power_cost(shape, a.p);
      for (const auto& name : a.methods) {
        const bool bip = name == "bipartite";
        const std::int64_t arcs = bip ? bipartite_arc_count(shape) : multipartite_arc_count(shape);
        const std::int64_t nodes = shape.size() * (bip ? 2 : d + 1);
        out << n << ',' << d << ',' << name << ',' << nodes << ',' << arcs << ',';
        if (arcs > a.arc_budget) {
          out << ",,oom\n";
          continue;
        }
        std::vector<double> times(instances.size());
        std::vector<std::string> errors(instances.size());
        parallel_for(instances.size(), a.jobs, [&](std::size_t k) {
          try {
            TransportOptions to;
            to.method = bip ? Method::Bipartite : Method::Multipartite;
            const auto start = Clock::now();
            optimal_transport(instances[k].first, instances[k].second, cost, to);
            times[k] = seconds_since(start);
          } catch (const std::bad_alloc&) {
            errors[k] = "oom";
          } catch (const std::exception&) {
            errors[k] = "error";
          }
        });
        const auto failed = std::find_if(errors.begin(), errors.end(), [](const auto& e) { return !e.empty(); });
        if (failed != errors.end()) {
          out << ",," << *failed << '\n';
          continue;
        }
        const auto [mean, sd] = mean_stddev(times);
        out << fmt(mean) << ',' << fmt(sd) << ",ok\n";
      }
    }
  }
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::uint64_t seed = 1;
  int trials = 20;
};

bool cmd_verify(const VerifyArgs& a, std::ostream& out) {
  std::mt19937_64 rng(a.seed);
  bool all = true;
  auto report = [&](const std::string& name, int passed, int total) {
    const bool ok = passed == total;
    all = all && ok;
    out << (ok ? "PASS " : "FAIL ") << name << " (" << passed << '/' << total << ")\n";
  };
  auto random_hist = [&](const GridShape& shape, std::int64_t total, int hi) {
    std::uniform_int_distribution<int> level(0, hi);
    std::vector<double> v(static_cast<std::size_t>(shape.size()));
    for (auto& x : v) x = level(rng);
    v[0] += 1.0;
    return integerize(from_dense(shape, v), total);
  };
  auto certified = [](const FlowNetwork& net, const FlowSolution& sol) {
    return sol.status == SolveStatus::Optimal && check_certificates(net, sol).ok();
  };

  {
    int passed = 0;
    for (int t = 0; t < a.trials; ++t) {
      const GridShape shape = t % 2 ? GridShape{4} : GridShape{2, 2};
      const auto mu = random_hist(shape, 4, 3);
      const auto nu = random_hist(shape, 4, 3);
      const auto cost = power_cost(shape, 1 + t % 3);
      const auto brute = oracle::enumerate_tiny(mu, nu, cost).objective;
      bool ok = true;
      for (const auto& net : {build_bipartite(mu, nu, cost), build_multipartite(mu, nu, cost)}) {
        const auto sol = solve(net);
        ok = ok && certified(net, sol) && sol.objective == brute && oracle::ssp_solve(net).objective == brute;
      }
      passed += ok;
    }
    report("enumeration = shortest paths = simplex on tiny grids", passed, a.trials);
  }
  {
    int passed = 0;
    const std::vector<GridShape> shapes{GridShape{8, 8}, GridShape{4, 4, 4}, GridShape{4, 4, 4, 4}};
    for (int t = 0; t < a.trials; ++t) {
      const auto& shape = shapes[static_cast<std::size_t>(t) % shapes.size()];
      const auto mu = random_hist(shape, 1000, 255);
      const auto nu = random_hist(shape, 1000, 255);
      const auto cost = power_cost(shape, 1 + t % 3);
      const auto bnet = build_bipartite(mu, nu, cost);
      const auto mnet = build_multipartite(mu, nu, cost);
      const auto bsol = solve(bnet);
      const auto msol = solve(mnet);
      passed += certified(bnet, bsol) && certified(mnet, msol) && bsol.objective == msol.objective &&
                oracle::ssp_solve(mnet).objective == msol.objective;
    }
    report("bipartite = multipartite = shortest paths on grids", passed, a.trials);
  }
  {
    int passed = 0;
    for (int t = 0; t < a.trials; ++t) {
      const GridShape shape = t % 2 ? GridShape{5, 5} : GridShape{3, 3, 3};
      const auto mu = random_hist(shape, 500, 255);
      const auto nu = random_hist(shape, 500, 255);
      const auto cost = power_cost(shape, 2);
      const auto net = build_multipartite(mu, nu, cost);
      const auto sol = solve(net);
      const auto flows = flow_chart_from_solution(net, sol);
      const auto plan = flows_to_plan(flows);
      const auto src = source_marginal(plan);
      const auto dst = target_marginal(plan);
      bool ok = plan_cost(plan, cost) == Rational(sol.objective) && flow_cost(plan_to_flows(plan), cost) == sol.objective;
      for (Index x = 0; x < shape.size(); ++x) {
        ok = ok && src[static_cast<std::size_t>(x)] == mu[x] && dst[static_cast<std::size_t>(x)] == nu[x];
      }
      passed += ok;
    }
    report("glued plans have exact marginals and cost", passed, a.trials);
  }
  out << (all ? "verify: all checks passed\n" : "verify: FAILED\n");
  return all;
}

// ---------------------------------------------------------------------------

struct BinArgs {
  std::string points;
  std::string shape;
  std::string bounds;
  std::string out_file;
};

void cmd_bin(const BinArgs& a, std::ostream& out) {
  const auto pts = load_points(a.points);
  const auto shape = parse_shape(a.shape);
  if (pts.cols() != shape.rank()) {
    throw Error(ErrorKind::ShapeMismatch, "points have " + std::to_string(pts.cols()) + " columns, shape has " +
                                              std::to_string(shape.rank()) + " axes");
  }
  std::vector<std::pair<double, double>> bounds;
  if (a.bounds.empty()) {
    for (Eigen::Index c = 0; c < pts.cols(); ++c) bounds.emplace_back(pts.col(c).minCoeff(), pts.col(c).maxCoeff());
  } else {
    bounds = parse_bounds(a.bounds);
  }
  const auto h = bin_points(pts, shape, bounds);
  if (a.out_file.empty()) {
    write_csv(out, h);
    return;
  }
  std::ofstream file(a.out_file);
  if (!file) throw Error(ErrorKind::IoError, "cannot write " + a.out_file);
  write_csv(file, h);
}

struct DimacsArgs {
  std::string first;
  std::string second;
  std::string method = "multipartite";
  ExactOptions exact;
};

void cmd_dimacs(const DimacsArgs& a, std::ostream& out) {
  const auto mu = load_histogram(a.first);
  const auto nu = load_histogram(a.second);
  if (!(mu.shape() == nu.shape())) throw Error(ErrorKind::ShapeMismatch, "histograms live on different grids");
  const auto cost = make_cost(a.exact, mu.shape());
  const auto muI = integerize(mu, a.exact.total);
  const auto nuI = integerize(nu, a.exact.total);
  write_dimacs(out, a.method == "bipartite" ? build_bipartite(muI, nuI, cost) : build_multipartite(muI, nuI, cost));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact Wasserstein distances between histograms on regular grids", "mpot"};
  app.require_subcommand(1);

  ComputeArgs compute;
  auto* c = app.add_subcommand("compute", "distance between two histogram files");
  c->add_option("first", compute.first, "first histogram (.pgm or .csv)")->required();
  c->add_option("second", compute.second, "second histogram")->required();
  c->add_option("--method", compute.method)->check(CLI::IsMember(kMethodNames));
  c->add_option("--plan-out", compute.plan_out, "write the optimal plan as CSV");
  c->add_flag("--gap", compute.gap, "for Sinkhorn methods, also solve exactly and report the gap");
  add_exact_flags(c, compute.exact);
  add_sinkhorn_flags(c, compute.sink);

  BatchArgs batch;
  auto* b = app.add_subcommand("batch", "all pairwise distances among the histograms in a directory");
  b->add_option("dir", batch.dir)->required()->check(CLI::ExistingDirectory);
  b->add_option("--method", batch.method)->check(CLI::IsMember(kMethodNames));
  b->add_option("--jobs", batch.jobs, "pairs solved in parallel")->check(CLI::PositiveNumber);
  add_exact_flags(b, batch.exact);
  add_sinkhorn_flags(b, batch.sink);

  BenchArgs bench;
  auto* k = app.add_subcommand("bench", "time both network constructions on random instances");
  k->add_option("--sizes", bench.sizes, "grid side lengths")->delimiter(',');
  k->add_option("--dims", bench.dims, "grid dimensions")->delimiter(',');
  k->add_option("--methods", bench.methods)->delimiter(',');
  k->add_option("--reps", bench.reps, "instances per row")->check(CLI::PositiveNumber);
  k->add_option("--p", bench.p)->check(CLI::Range(1, 16));
  k->add_option("--seed", bench.seed);
  k->add_option("--total", bench.total)->check(CLI::PositiveNumber);
  k->add_option("--arc-budget", bench.arc_budget, "largest network built; bigger rows report oom")
      ->check(CLI::PositiveNumber);
  k->add_option("--jobs", bench.jobs)->check(CLI::PositiveNumber);

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "cross-check the solver against the reference oracles");
  v->add_option("--seed", verify.seed);
  v->add_option("--trials", verify.trials)->check(CLI::PositiveNumber);

  BinArgs bin;
  auto* h = app.add_subcommand("bin", "bin a CSV point cloud into a histogram CSV");
  h->add_option("points", bin.points)->required();
  h->add_option("--shape", bin.shape, "bins per axis, e.g. 32,32")->required();
  h->add_option("--bounds", bin.bounds, "lo:hi per axis; defaults to the data range");
  h->add_option("--out", bin.out_file);

  DimacsArgs dimacs;
  auto* x = app.add_subcommand("dimacs", "write the flow network in DIMACS min-cost-flow format");
  x->add_option("first", dimacs.first)->required();
  x->add_option("second", dimacs.second)->required();
  x->add_option("--method", dimacs.method)->check(CLI::IsMember({"bipartite", "multipartite"}));
  add_exact_flags(x, dimacs.exact);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  try {
    if (*c) cmd_compute(compute, out);
    if (*b) cmd_batch(batch, out);
    if (*k) cmd_bench(bench, out);
    if (*v && !cmd_verify(verify, out)) return 1;
    if (*h) cmd_bin(bin, out);
    if (*x) cmd_dimacs(dimacs, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace mpot::cli
