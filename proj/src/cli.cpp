#include "atspp/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "atspp/atspp.hpp"
#include "atspp/errors.hpp"
#include "atspp/latency.hpp"
#include "atspp/metric.hpp"
#include "atspp/oracle.hpp"
#include "atspp/relaxations.hpp"

namespace atspp {

namespace {

std::string approx(const Rational& r) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << r.to_double();
  return os.str();
}

std::string both(const Rational& r) { return r.str() + " (" + approx(r) + ")"; }

std::string seq_text(const NodeSeq& nodes) {
  std::string s;
  for (int v : nodes) s += (s.empty() ? "" : " ") + std::to_string(v);
  return s;
}

std::string passed(const CheckLog& log) {
  return std::to_string(log.size() - log.failures()) + "/" + std::to_string(log.size());
}

MetricInstance load(const std::string& path) {
  if (path.empty()) throw ArgumentError("--in FILE is required");
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(path + ": " + e.what());
  }
  return instance_from_json(j);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw ArgumentError("cannot write " + path);
  f << text;
}

// JSON goes to --out when given; otherwise to stdout only if `always`.
void emit(const nlohmann::json& j, const std::string& path, bool always, std::ostream& out) {
  if (!path.empty()) {
    write_text(path, j.dump(2) + "\n");
  } else if (always) {
    out << j.dump(2) << "\n";
  }
}

nlohmann::json paths_json(const std::vector<NodeSeq>& paths) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& p : paths) a.push_back(p);
  return a;
}

struct Options {
  std::string in;
  std::string out;
  bool trace = false;
  int iters = 0;
  int k = 2;
  bool weighted = false;
  std::string alpha;
  bool latency = false;
  std::string problem;

  bool random = false;
  long long bad_gap = 0;
  int n = 8;
  std::uint64_t seed = 1;
  int max_weight = 100;
  int node_weights = 0;

  int count = 20;
  int nmin = 6;
  int nmax = 9;
  std::vector<std::string> algorithms{"atspp"};
  bool timing = false;
  bool no_oracle = false;
};

std::optional<int> iteration_override(const Options& o) {
  if (o.iters > 0) return o.iters;
  return std::nullopt;
}

int cmd_gen(const Options& o, std::ostream& out) {
  if (o.random == (o.bad_gap != 0)) throw ArgumentError("gen: choose exactly one of --random and --bad-gap D");
  MetricInstance inst = o.random ? gen_random(o.n, o.seed, o.max_weight) : gen_bad_gap(o.bad_gap);
  if (o.node_weights > 0) {
    std::mt19937_64 rng(o.seed ^ 0x77656967687473ULL);
    std::uniform_int_distribution<int> pick(1, o.node_weights);
    std::vector<Rational> w(inst.n);
    for (auto& c : w) c = Rational(pick(rng));
    inst.weights = std::move(w);
  }
  emit(instance_to_json(inst), o.out, true, out);
  return kExitOk;
}

int cmd_atspp(const Options& o, std::ostream& out) {
  MetricInstance inst = load(o.in);
  AtsppResult r = solve_atspp(inst, iteration_override(o));
  out << "path " << seq_text(r.path.nodes) << "\n"
      << "cost " << both(r.path.cost) << "\n"
      << "iterations " << r.iterations << "\n"
      << "checks " << passed(r.checks) << "\n";
  nlohmann::json j{{"algorithm", "atspp"},
                   {"path", r.path.nodes},
                   {"cost", rational_to_json(r.path.cost)},
                   {"iterations", r.iterations},
                   {"cover_cost_total", rational_to_json(r.total_cover_cost)},
                   {"checks", r.checks.to_json()}};
  if (o.trace) j["trace"] = trace_to_json(r.trace);
  emit(j, o.out, o.trace, out);
  return kExitOk;
}

int cmd_kperson(const Options& o, std::ostream& out) {
  MetricInstance inst = load(o.in);
  KPersonResult r = solve_k_person(inst, o.k, iteration_override(o));
  for (const auto& p : r.paths) out << "path " << seq_text(p) << "\n";
  out << "cost " << both(r.cost) << "\n"
      << "iterations " << r.iterations << "\n"
      << "max_arc_usage " << r.max_arc_usage << "\n"
      << "checks " << passed(r.checks) << "\n";
  nlohmann::json j{{"algorithm", "kperson"},         {"k", o.k},
                   {"paths", paths_json(r.paths)},   {"cost", rational_to_json(r.cost)},
                   {"iterations", r.iterations},     {"chains", r.chains},
                   {"max_arc_usage", r.max_arc_usage}, {"checks", r.checks.to_json()}};
  if (o.trace) j["trace"] = trace_to_json(r.trace);
  emit(j, o.out, o.trace, out);
  return kExitOk;
}

int cmd_multipath(const Options& o, std::ostream& out) {
  MetricInstance inst = load(o.in);
  MultipathResult r = multipath_cover(inst, o.k);
  for (const auto& p : r.paths) out << "path " << seq_text(p) << "\n";
  out << "cost " << both(r.cost) << "\n"
      << "iterations " << r.iterations << "\n"
      << "checks " << passed(r.checks) << "\n";
  nlohmann::json covers = nlohmann::json::array();
  for (const auto& c : r.cover_costs) covers.push_back(rational_to_json(c));
  nlohmann::json j{{"algorithm", "multipath"},     {"k", o.k},
                   {"paths", paths_json(r.paths)}, {"cost", rational_to_json(r.cost)},
                   {"iterations", r.iterations},   {"cover_costs", covers},
                   {"checks", r.checks.to_json()}};
  emit(j, o.out, o.trace, out);
  return kExitOk;
}

int cmd_latency(const Options& o, std::ostream& out) {
  MetricInstance inst = load(o.in);
  LatencyResult r = solve_latency(inst, {o.weighted});
  out << "order " << seq_text(r.order.order) << "\n"
      << "total " << both(r.order.total) << "\n"
      << "lp " << both(r.lp_value) << "\n";
  if (r.lp_value.sign() > 0) out << "ratio_lp " << both(r.order.total / r.lp_value) << "\n";
  out << "checks " << passed(r.checks) << "\n";
  nlohmann::json lat = nlohmann::json::array();
  for (const auto& l : r.order.latency) lat.push_back(rational_to_json(l));
  nlohmann::json j{{"algorithm", "latency"},
                   {"weighted", o.weighted},
                   {"order", r.order.order},
                   {"latency", lat},
                   {"total", rational_to_json(r.order.total)},
                   {"lp_value", rational_to_json(r.lp_value)},
                   {"checks", r.checks.to_json()}};
  if (o.trace) j["trace"] = bucket_state_to_json(r.trace);
  emit(j, o.out, o.trace, out);
  return kExitOk;
}

int cmd_lp_bound(const Options& o, std::ostream& out) {
  if (o.alpha.empty() == !o.latency) throw ArgumentError("lp-bound: choose exactly one of --alpha and --latency");
  MetricInstance inst = load(o.in);
  nlohmann::json j;
  if (o.latency) {
    LatencyLpSolution sol = solve_latency_lp(inst, {o.weighted, false});
    out << sol.objective << "\n";
    j = latency_solution_to_json(sol);
  } else {
    Rational alpha = Rational::parse(o.alpha);
    LpAlphaResult r = solve_lp_alpha(inst, alpha);
    out << r.value << "\n";
    nlohmann::json x = nlohmann::json::array();
    for (const auto& [arc, value] : r.x) x.push_back({arc.first, arc.second, rational_to_json(value)});
    j = {{"alpha", rational_to_json(alpha)}, {"value", rational_to_json(r.value)}, {"x", x},
         {"rounds", r.rounds},                {"cuts", r.cuts}};
  }
  emit(j, o.out, false, out);
  return kExitOk;
}

int cmd_oracle(const Options& o, std::ostream& out) {
  MetricInstance inst = load(o.in);
  nlohmann::json j{{"problem", o.problem}};
  if (o.problem == "atspp" || o.problem == "latency") {
    ExactResult r = o.problem == "atspp" ? exact_atspp(inst) : exact_latency(inst, o.weighted);
    out << "order " << seq_text(r.order) << "\n" << "value " << both(r.value) << "\n";
    j["order"] = r.order;
    j["value"] = rational_to_json(r.value);
  } else if (o.problem == "kperson") {
    ExactKPerson r = exact_k_person(inst, o.k);
    for (const auto& p : r.paths) out << "path " << seq_text(p) << "\n";
    out << "value " << both(r.value) << "\n";
    j["paths"] = paths_json(r.paths);
    j["value"] = rational_to_json(r.value);
  } else {
    throw ArgumentError("oracle: --problem must be atspp, latency or kperson");
  }
  emit(j, o.out, false, out);
  return kExitOk;
}

struct Row {
  Rational value;
  Rational lp;
  std::optional<Rational> opt;
  std::string checks;
};

Row evaluate(const std::string& algorithm, const MetricInstance& inst, const Options& o) {
  Row row;
  if (algorithm == "atspp") {
    AtsppResult r = solve_atspp(inst, iteration_override(o));
    row.value = r.path.cost;
    row.checks = passed(r.checks);
    row.lp = solve_lp_alpha(inst, Rational(1)).value;
    if (!o.no_oracle && inst.n <= kAtsppOracleCap) row.opt = exact_atspp(inst).value;
  } else if (algorithm == "latency") {
    LatencyResult r = solve_latency(inst);
    row.value = r.order.total;
    row.checks = passed(r.checks);
    row.lp = r.lp_value;
    if (!o.no_oracle && inst.n <= kLatencyOracleCap) row.opt = exact_latency(inst).value;
  } else if (algorithm == "kperson") {
    KPersonResult r = solve_k_person(inst, o.k, iteration_override(o));
    row.value = r.cost;
    row.checks = passed(r.checks);
    row.lp = Rational(o.k) * solve_lp_alpha(inst, Rational(1, o.k)).value;
    if (!o.no_oracle && inst.n <= kKPersonOracleCap) row.opt = exact_k_person(inst, o.k).value;
  } else {
    throw ArgumentError("gap-report: unknown algorithm " + algorithm);
  }
  return row;
}

int cmd_gap_report(const Options& o, std::ostream& out) {
  if (o.count < 1 || o.nmin < 2 || o.nmax < o.nmin) throw ArgumentError("gap-report: need count >= 1 and 2 <= nmin <= nmax");
  for (const auto& a : o.algorithms) {
    if (a != "atspp" && a != "latency" && a != "kperson") throw ArgumentError("gap-report: unknown algorithm " + a);
  }
  std::ostringstream csv;
  csv << gap_report_header() << "\n";
  const int span = o.nmax - o.nmin + 1;
  for (int id = 0; id < o.count; ++id) {
    const int n = o.nmin + id % span;
    const std::uint64_t seed = o.seed + static_cast<std::uint64_t>(id);
    MetricInstance inst = gen_random(n, seed, o.max_weight);
    for (const auto& algorithm : o.algorithms) {
      auto start = std::chrono::steady_clock::now();
      Row row = evaluate(algorithm, inst, o);
      long long ms = 0;
      if (o.timing) {
        ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
      }
      std::optional<Rational> ratio_lp;
      std::optional<Rational> ratio_opt;
      if (row.lp.sign() > 0) ratio_lp = row.value / row.lp;
      if (row.opt && row.opt->sign() > 0) ratio_opt = row.value / *row.opt;
      auto exact = [](const std::optional<Rational>& r) { return r ? r->str() : std::string(); };
      auto dec = [](const std::optional<Rational>& r) { return r ? approx(*r) : std::string(); };
      csv << id << ',' << n << ',' << seed << ',' << algorithm << ',' << row.value << ',' << row.lp << ','
          << exact(row.opt) << ',' << exact(ratio_lp) << ',' << exact(ratio_opt) << ',' << row.checks << ','
          << ms << ',' << approx(row.value) << ',' << approx(row.lp) << ',' << dec(row.opt) << ','
          << dec(ratio_lp) << ',' << dec(ratio_opt) << "\n";
    }
  }
  if (o.out.empty()) {
    out << csv.str();
  } else {
    write_text(o.out, csv.str());
  }
  return kExitOk;
}

}  // namespace

const char* gap_report_header() {
  return "id,n,seed,algorithm,value,lp_bound,opt,ratio_lp,ratio_opt,checks_passed,ms,"
         "value_approx,lp_bound_approx,opt_approx,ratio_lp_approx,ratio_opt_approx";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Approximation algorithms for ATSPP, k-person ATSPP and directed latency", "atspp"};
  app.require_subcommand(1);

  auto add_io = [&](CLI::App* sub) {
    sub->add_option("--in", o.in, "instance JSON file");
    sub->add_option("--out", o.out, "write the JSON result here");
    sub->add_flag("--trace", o.trace, "include the solver trace in the JSON result");
  };

  auto* gen = app.add_subcommand("gen", "generate an instance");
  gen->add_flag("--random", o.random, "random complete digraph closed under shortest paths");
  gen->add_option("--bad-gap", o.bad_gap, "six-node bad-gap instance with parameter D >= 10");
  gen->add_option("--n", o.n, "node count");
  gen->add_option("--seed", o.seed, "generator seed");
  gen->add_option("--max-weight", o.max_weight, "largest arc weight");
  gen->add_option("--node-weights", o.node_weights, "attach random node weights in [1, W]");
  gen->add_option("--out", o.out, "instance file (stdout when omitted)");

  auto* atspp = app.add_subcommand("atspp", "Hamiltonian s-t path by iterated path-cycle covers");
  add_io(atspp);
  atspp->add_option("--iters", o.iters, "override the iteration count");

  auto* kperson = app.add_subcommand("kperson", "k s-t paths covering every node");
  add_io(kperson);
  kperson->add_option("--k", o.k, "number of paths")->check(CLI::PositiveNumber);
  kperson->add_option("--iters", o.iters, "override the iteration count");

  auto* multipath = app.add_subcommand("multipath", "at most k log n s-t paths covering every node");
  add_io(multipath);
  multipath->add_option("--k", o.k, "paths per cover")->check(CLI::PositiveNumber);

  auto* latency = app.add_subcommand("latency", "directed latency order");
  add_io(latency);
  latency->add_flag("--weighted", o.weighted, "minimize weighted latency");

  auto* lp = app.add_subcommand("lp-bound", "LP lower bounds");
  lp->add_option("--in", o.in, "instance JSON file");
  lp->add_option("--out", o.out, "write the LP solution here");
  lp->add_option("--alpha", o.alpha, "LP(alpha) value, alpha in (0, 1]");
  lp->add_flag("--latency", o.latency, "latency LP value");
  lp->add_flag("--weighted", o.weighted, "weighted latency objective");

  auto* oracle = app.add_subcommand("oracle", "exact exponential-time optimum");
  oracle->add_option("--in", o.in, "instance JSON file");
  oracle->add_option("--out", o.out, "write the result here");
  oracle->add_option("--problem", o.problem, "atspp, latency or kperson")->required();
  oracle->add_option("--k", o.k, "paths for kperson")->check(CLI::PositiveNumber);
  oracle->add_flag("--weighted", o.weighted, "weighted latency objective");

  auto* gap = app.add_subcommand("gap-report", "batch of random instances as CSV");
  gap->add_option("--count", o.count, "instances");
  gap->add_option("--nmin", o.nmin, "smallest n");
  gap->add_option("--nmax", o.nmax, "largest n");
  gap->add_option("--seed", o.seed, "seed of instance 0; instance i uses seed + i");
  gap->add_option("--max-weight", o.max_weight, "largest arc weight");
  gap->add_option("--algorithm", o.algorithms, "atspp, latency, kperson (comma separated)")->delimiter(',');
  gap->add_option("--k", o.k, "paths for kperson")->check(CLI::PositiveNumber);
  gap->add_option("--iters", o.iters, "override the iteration count");
  gap->add_flag("--timing", o.timing, "fill the ms column (otherwise 0)");
  gap->add_flag("--no-oracle", o.no_oracle, "skip exact optima");
  gap->add_option("--out", o.out, "CSV file (stdout when omitted)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitArgument;
  }

  try {
    if (gen->parsed()) return cmd_gen(o, out);
    if (atspp->parsed()) return cmd_atspp(o, out);
    if (kperson->parsed()) return cmd_kperson(o, out);
    if (multipath->parsed()) return cmd_multipath(o, out);
    if (latency->parsed()) return cmd_latency(o, out);
    if (lp->parsed()) return cmd_lp_bound(o, out);
    if (oracle->parsed()) return cmd_oracle(o, out);
    if (gap->parsed()) return cmd_gap_report(o, out);
  } catch (const InvariantViolation& e) {
    err << "invariant violated: " << e.what() << "\n" << e.state().dump(2) << "\n";
    return kExitInvariant;
  } catch (const AcyclicityViolation& e) {
    err << "invariant violated: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitArgument;
  }
  return kExitArgument;
}

}  // namespace atspp
