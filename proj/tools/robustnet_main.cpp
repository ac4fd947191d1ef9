// robustnet command-line interface: generators, solvers, oracles, bench.
//
// Exit codes: 0 success, 1 usage/input error, 2 solver infeasible or failed,
// 3 internal invariant violation.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "robustnet/robustnet.hpp"

namespace {

using namespace robustnet;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw validation_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw validation_error("cannot write file: " + path);
  out << bytes;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

nlohmann::json solution_to_json(const DiscreteSolution& sol) {
  nlohmann::json j;
  j["edges"] = sol.edges;
  nlohmann::json costs = nlohmann::json::array();
  for (const Rational& c : sol.per_scenario_cost)
    costs.push_back(c.is_integer() ? nlohmann::json(c.num()) : nlohmann::json(c.str()));
  j["per_scenario_cost"] = std::move(costs);
  j["max_cost"] =
      sol.max_cost.is_integer() ? nlohmann::json(sol.max_cost.num()) : nlohmann::json(sol.max_cost.str());
  return j;
}

void print_result(const Instance& inst, const DiscreteSolution& sol, const RunReport& report) {
  nlohmann::json j;
  j["instance"] = inst.name;
  j["solution"] = solution_to_json(sol);
  j["report"] = report.to_json();
  std::cout << j.dump(2) << "\n";
}

int run_solve(const std::string& algo, const std::string& in_file,
              std::optional<std::uint64_t> seed, double gamma, std::optional<int> practical_k,
              int retries) {
  Instance inst = parse_instance(read_file(in_file));

  const bool wants_sp = algo == "sp-alg1" || algo == "sp-avg";
  const bool wants_mst = algo == "mst-det" || algo == "mst-rand";
  if (wants_sp && inst.kind != Kind::shortest_path)
    throw validation_error("algorithm " + algo + " needs an \"sp\" instance");
  if (wants_mst && inst.kind != Kind::spanning_tree)
    throw validation_error("algorithm " + algo + " needs an \"mst\" instance");

  if (algo == "sp-alg1") {
    auto [sol, report] = solve_sp(inst);
    print_result(inst, sol, report);
    return 0;
  }
  if (algo == "sp-avg") {
    const auto t0 = std::chrono::steady_clock::now();
    auto [l_star, fs] = minimize_l(inst);
    DiscreteSolution sol = solve_sp_average_baseline(inst);
    RunReport report;
    report.algorithm = "sp-avg";
    report.l_star = l_star;
    report.max_cost = sol.max_cost;
    report.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    print_result(inst, sol, report);
    return 0;
  }
  if (algo == "mst-det") {
    auto [sol, report] = solve_mst_deterministic(inst);
    print_result(inst, sol, report);
    return 0;
  }
  if (algo == "mst-rand") {
    if (!seed)
      throw CLI::ValidationError("--seed", "mst-rand is randomized; pass an explicit --seed "
                                           "so the run is reproducible");
    CoinConfig coin;
    coin.seed = *seed;
    coin.gamma = gamma;
    if (practical_k) {
      coin.mode = CoinConfig::Mode::practical;
      coin.practical_k = *practical_k;
      coin.max_retries = retries;
    }
    RandomizedMstResult res = solve_mst_randomized(inst, coin);
    if (!res.solution) {
      nlohmann::json j;
      j["instance"] = inst.name;
      j["error"] = "randomized rounding left the graph disconnected on every attempt";
      j["report"] = res.report.to_json();
      std::cout << j.dump(2) << "\n";
      return 2;
    }
    print_result(inst, *res.solution, res.report);
    return 0;
  }
  if (algo == "exact") {
    const auto t0 = std::chrono::steady_clock::now();
    auto [l_star, fs] = minimize_l(inst);
    DiscreteSolution sol = brute_force_opt(inst);
    RunReport report;
    report.algorithm = "exact";
    report.l_star = l_star;
    report.max_cost = sol.max_cost;
    report.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    print_result(inst, sol, report);
    return 0;
  }
  throw CLI::ValidationError("--algo", "unknown algorithm: " + algo);
}

void echo_instance(const std::string& path, const Instance& inst) {
  std::cout << "wrote " << path << " (n=" << inst.n << ", m=" << inst.num_edges()
            << ", K=" << inst.num_scenarios() << ")\n";
}

// One bench row per (instance, algorithm). Wall time is reported only with
// --timing so that default CSV output is byte-identical across runs.
struct BenchContext {
  std::uint64_t seed = 0;
  bool timing = false;
  std::ostream& out;
};

void bench_row(BenchContext& ctx, const Instance& inst, const std::string& algo) {
  const auto t0 = std::chrono::steady_clock::now();
  auto [l_star, fs] = minimize_l(inst);
  DiscreteSolution sol;
  int rounds = 0;
  std::uint64_t row_seed = 0;
  if (algo == "exact") {
    sol = brute_force_opt(inst);
  } else if (algo == "sp-alg1") {
    auto [s, rep] = solve_sp(inst);
    sol = std::move(s);
    rounds = rep.rounds;
  } else if (algo == "sp-avg") {
    sol = solve_sp_average_baseline(inst);
  } else if (algo == "mst-det") {
    auto [s, rep] = solve_mst_deterministic(inst);
    sol = std::move(s);
    rounds = rep.rounds;
  } else if (algo == "mst-rand") {
    CoinConfig coin;
    coin.seed = row_seed = ctx.seed;
    RandomizedMstResult res = solve_mst_randomized(inst, coin);
    check_invariant(res.solution.has_value(), "paper-mode run disconnected in bench");
    sol = std::move(*res.solution);
    rounds = res.report.rounds;
  }
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  const double ratio = l_star > 0.0 ? sol.max_cost.to_double() / l_star
                                    : (sol.max_cost.is_zero() ? 1.0 : -1.0);
  ctx.out << inst.name << ',' << kind_name(inst.kind) << ',' << inst.n << ','
          << inst.num_edges() << ',' << inst.num_scenarios() << ',' << fmt_double(l_star) << ','
          << algo << ',' << fmt_double(sol.max_cost.to_double()) << ',' << fmt_double(ratio)
          << ',' << rounds << ',' << row_seed << ','
          << (ctx.timing ? static_cast<long long>(ms + 0.5) : 0LL) << "\n";
}

int run_bench(const std::string& suite, int trials, std::uint64_t seed, bool timing) {
  BenchContext ctx{seed, timing, std::cout};
  ctx.out << "instance,kind,n,m,K,L_star,algorithm,max_cost,ratio,rounds,seed,millis\n";
  std::vector<Instance> instances;
  if (suite == "gaps") {
    instances.push_back(gen_gap_sp(0));
    instances.push_back(gen_gap_sp(1));
    instances.push_back(gen_gap_mst(2));
    instances.push_back(gen_gap_mst(3));
  } else if (suite == "random") {
    for (int i = 0; i < trials; ++i)
      instances.push_back(gen_random({Kind::shortest_path, 10, 0.5, 6, seed + i}));
    for (int i = 0; i < trials; ++i)
      instances.push_back(gen_random({Kind::spanning_tree, 9, 0.5, 6, seed + 1000 + i}));
  } else {
    throw CLI::ValidationError("--suite", "unknown suite: " + suite);
  }
  for (const Instance& inst : instances) {
    if (inst.kind == Kind::shortest_path) {
      for (const char* algo : {"exact", "sp-alg1", "sp-avg"}) bench_row(ctx, inst, algo);
    } else {
      for (const char* algo : {"exact", "mst-det", "mst-rand"}) bench_row(ctx, inst, algo);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robustnet: LP-rounding approximation toolkit for min-max shortest path "
               "and spanning tree under cost scenarios"};
  app.require_subcommand(1);
  bool debug = false;
  app.add_flag("--debug", debug, "dump LP pivot/cut trace as JSON lines on stderr");

  // solve
  auto* solve = app.add_subcommand("solve", "run a solver on an instance file");
  std::string algo, in_file;
  std::optional<std::uint64_t> seed;
  double gamma = 1.0;
  std::optional<int> practical_k;
  int retries = 0;
  solve->add_option("--algo", algo, "sp-alg1 | sp-avg | mst-det | mst-rand | exact")
      ->required()
      ->check(CLI::IsMember({"sp-alg1", "sp-avg", "mst-det", "mst-rand", "exact"}));
  solve->add_option("--in", in_file, "instance JSON file")->required();
  solve->add_option("--seed", seed, "RNG seed (required for mst-rand)");
  solve->add_option("--gamma", gamma, "paper-mode slack constant (default 1)");
  solve->add_option("--practical-k", practical_k, "use practical mode with this many coin flips");
  solve->add_option("--retries", retries, "practical-mode retries after a disconnected draw");

  // generate
  auto* generate = app.add_subcommand("generate", "emit instance files");
  generate->require_subcommand(1);
  std::string out_path;
  int gap_r = 0, gap_k = 2;
  auto* g_sp = generate->add_subcommand("gap-sp", "recursive SP integrality-gap family");
  g_sp->add_option("--r", gap_r, "recursion level (0..2)")->required();
  g_sp->add_option("--out", out_path, "output file")->required();
  auto* g_mst = generate->add_subcommand("gap-mst", "series-composition MST gap family");
  g_mst->add_option("--k", gap_k, "parameter k (2..4)")->required();
  g_mst->add_option("--out", out_path, "output file")->required();

  auto* g_rand = generate->add_subcommand("random", "seeded random instance");
  std::string rand_kind = "sp", rand_dist = "u1000";
  int rand_n = 10, rand_scen = 4;
  double rand_density = 0.5;
  std::uint64_t rand_seed = 0;
  g_rand->add_option("--kind", rand_kind)->check(CLI::IsMember({"sp", "mst"}))->required();
  g_rand->add_option("--n", rand_n, "node count")->required();
  g_rand->add_option("--K", rand_scen, "scenario count")->required();
  g_rand->add_option("--seed", rand_seed, "generator seed")->required();
  g_rand->add_option("--density", rand_density, "optional-edge probability (default 0.5)");
  g_rand->add_option("--dist", rand_dist, "cost distribution: u1000 (k/1000) or int10")
      ->check(CLI::IsMember({"u1000", "int10"}));
  g_rand->add_option("--out", out_path, "output file")->required();

  auto* g_cst = generate->add_subcommand("cst", "crossing-spanning-tree adapter");
  std::string cst_graph, cst_cuts;
  g_cst->add_option("--in", cst_graph, "instance JSON supplying the graph (scenarios ignored)")
      ->required();
  g_cst->add_option("--cuts", cst_cuts, "JSON file: list of node-id lists")->required();
  g_cst->add_option("--out", out_path, "output file")->required();

  auto* g_fix = generate->add_subcommand("fixtures", "write the golden instance suite");
  g_fix->add_option("--out", out_path, "output directory")->required();

  // bench
  auto* bench = app.add_subcommand("bench", "CSV benchmark over a suite");
  std::string suite;
  int trials = 3;
  std::uint64_t bench_seed = 0;
  bool timing = false;
  bench->add_option("--suite", suite, "gaps | random")->required()
      ->check(CLI::IsMember({"gaps", "random"}));
  bench->add_option("--trials", trials, "instances per kind for the random suite");
  bench->add_option("--seed", bench_seed, "base seed");
  bench->add_flag("--timing", timing, "report wall time (breaks byte-identical output)");

  try {
    app.parse(argc, argv);
    if (debug) robustnet::log::set_level(robustnet::log::Level::debug);

    if (solve->parsed()) return run_solve(algo, in_file, seed, gamma, practical_k, retries);

    if (generate->parsed()) {
      if (g_sp->parsed()) {
        Instance inst = gen_gap_sp(gap_r);
        write_file(out_path, serialize_instance(inst));
        echo_instance(out_path, inst);
      } else if (g_mst->parsed()) {
        Instance inst = gen_gap_mst(gap_k);
        write_file(out_path, serialize_instance(inst));
        echo_instance(out_path, inst);
      } else if (g_rand->parsed()) {
        RandomSpec spec;
        spec.kind = rand_kind == "sp" ? Kind::shortest_path : Kind::spanning_tree;
        spec.n = rand_n;
        spec.density = rand_density;
        spec.scenarios = rand_scen;
        spec.seed = rand_seed;
        spec.dist = rand_dist == "u1000" ? CostDist::milli_uniform : CostDist::small_int;
        Instance inst = gen_random(spec);
        write_file(out_path, serialize_instance(inst));
        echo_instance(out_path, inst);
      } else if (g_cst->parsed()) {
        Instance base = parse_instance(read_file(cst_graph));
        nlohmann::json cuts_json = nlohmann::json::parse(read_file(cst_cuts));
        if (!cuts_json.is_array()) throw validation_error("cuts file must be a JSON array");
        std::vector<std::vector<int>> cuts;
        for (const auto& c : cuts_json) cuts.push_back(c.get<std::vector<int>>());
        Instance inst = gen_cst(base.n, base.edges, base.name + "-cst", cuts);
        write_file(out_path, serialize_instance(inst));
        echo_instance(out_path, inst);
      } else if (g_fix->parsed()) {
        for (int r : {0, 1}) {
          Instance inst = gen_gap_sp(r);
          const std::string path = out_path + "/" + inst.name + ".json";
          write_file(path, serialize_instance(inst));
          echo_instance(path, inst);
        }
        for (int k : {2, 3}) {
          Instance inst = gen_gap_mst(k);
          const std::string path = out_path + "/" + inst.name + ".json";
          write_file(path, serialize_instance(inst));
          echo_instance(path, inst);
        }
        for (std::uint64_t s : {1, 2, 3}) {
          for (Kind kind : {Kind::shortest_path, Kind::spanning_tree}) {
            Instance inst = gen_random({kind, 10, 0.5, 8, s});
            const std::string path = out_path + "/" + inst.name + ".json";
            write_file(path, serialize_instance(inst));
            echo_instance(path, inst);
          }
        }
      }
      return 0;
    }

    if (bench->parsed()) return run_bench(suite, trials, bench_seed, timing);
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 1;
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const infeasible_error& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const cap_exceeded_error& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 2;
  } catch (const cut_limit_error& e) {
    std::cerr << "failed: " << e.what() << "\n";
    return 2;
  } catch (const invariant_error& e) {
    std::cerr << "internal invariant violated: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
