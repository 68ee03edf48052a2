// drgkit: analyze, verify and tabulate vertex decompositions of
// distance-regular graphs.  See README.md for the full interface.

#include <CLI11.hpp>
#include <json.hpp>

#include <drgkit/drgkit.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace dk = drgkit;
using json = nlohmann::ordered_json;

namespace {

struct RunConfig {
  std::string graph_spec;
  std::string mode = "auto";
  double tol = 0.0;  // 0 = use default (or DRGKIT_TOL)
  std::uint64_t seed = 1;
  std::string base = "representatives";
  long long base_vertex = -1;
  std::size_t ordering_index = 0;
  std::string format;
  bool oracle = true;
  std::size_t oracle_cap = dk::kDefaultOracleCap;
  std::size_t size_cap = dk::kDefaultSizeCap;

  // dualwidth only
  std::string vector_file;
  std::size_t random_count = 0;
};

dk::Tols resolve_tols(const RunConfig& cfg) {
  dk::Tols t;
  double tol = 0.0;
  if (const char* env = std::getenv("DRGKIT_TOL"); env && *env) {
    try {
      tol = std::stod(env);
    } catch (const std::exception&) {
      dk::fail(dk::errc::bad_argument, std::string("DRGKIT_TOL is not a number: ") + env);
    }
  }
  if (cfg.tol > 0.0) tol = cfg.tol;
  if (tol < 0.0) dk::fail(dk::errc::bad_argument, "tolerance must be positive");
  if (tol > 0.0) {
    t.contain = tol;
    t.rank = tol / 10.0;
  }
  return t;
}

template <class S>
std::vector<int> select_vertices(const dk::DrgProfile<S>& pr, const RunConfig& cfg) {
  const long long n = static_cast<long long>(pr.n());
  if (cfg.base_vertex >= 0) {
    if (cfg.base_vertex >= n)
      dk::fail(dk::errc::vertex_out_of_range,
               "base vertex " + std::to_string(cfg.base_vertex) + " with n = " +
                   std::to_string(n));
    return {static_cast<int>(cfg.base_vertex)};
  }
  if (cfg.base == "all") {
    std::vector<int> v(pr.n());
    for (std::size_t i = 0; i < pr.n(); ++i) v[i] = static_cast<int>(i);
    return v;
  }
  if (cfg.base == "representatives") return dk::representatives(pr.dist);
  std::vector<int> v;
  std::stringstream ss(cfg.base);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    long long x = -1;
    try {
      x = std::stoll(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != item.size() || x < 0)
      dk::fail(dk::errc::bad_argument, "bad vertex list entry '" + item + "'");
    if (x >= n)
      dk::fail(dk::errc::vertex_out_of_range,
               "base vertex " + std::to_string(x) + " with n = " + std::to_string(n));
    v.push_back(static_cast<int>(x));
  }
  if (v.empty()) dk::fail(dk::errc::bad_argument, "empty base vertex list");
  return v;
}

json scal(const dk::Rational& v) { return dk::scalar_str(v); }
json scal(double v) { return v; }

template <class S>
json graph_json(const dk::DrgProfile<S>& pr) {
  json g;
  g["name"] = pr.g.name;
  g["n"] = pr.n();
  g["diameter"] = pr.D;
  g["valency"] = pr.kdeg[1];
  g["mode"] = dk::mode_name(dk::is_exact_v<S>);
  return g;
}

template <class S>
json spectrum_json(const dk::DrgProfile<S>& pr) {
  json s;
  json theta = json::array();
  for (const S& t : pr.theta) theta.push_back(scal(t));
  s["theta"] = theta;
  s["mult"] = pr.mult;
  double qmax = 0.0;
  for (const auto& qh : pr.q)
    for (const auto& qi : qh)
      for (const S& x : qi) qmax = std::max(qmax, std::fabs(dk::to_double(x)));
  json kz = json::array();
  for (int h = 0; h <= pr.D; ++h) {
    json row = json::array();
    for (int i = 0; i <= pr.D; ++i) {
      json cell = json::array();
      for (int j = 0; j <= pr.D; ++j)
        cell.push_back(dk::krein_is_zero(pr, h, i, j, qmax) ? 0 : 1);
      row.push_back(cell);
    }
    kz.push_back(row);
  }
  s["krein_nonzero"] = kz;
  return s;
}

template <class S>
json vertex_json(const dk::VertexAnalysis<S>& va, const RunConfig& cfg) {
  json pv;
  pv["x"] = va.local.x;
  json ts = json::array();
  for (const S& t : va.local.theta_star) ts.push_back(scal(t));
  pv["theta_star"] = ts;
  pv["vij_dims"] = va.split.vdims;
  pv["vtilde_dims"] = va.split.vtdims;
  pv["veta_dims"] = va.disp.dims;
  if (va.oracle) {
    json mods = json::array();
    for (const dk::ModuleRecord& r : va.oracle->records) {
      json m;
      m["rho"] = r.rho;
      m["tau"] = r.tau;
      m["d"] = r.d;
      m["d_star"] = r.dstar;
      m["eta"] = r.eta;
      m["dim"] = r.basis.dim();
      mods.push_back(m);
    }
    pv["modules"] = mods;
  }
  pv["ordering_index"] = cfg.ordering_index;
  pv["seed"] = cfg.seed;
  return pv;
}

json check_json(int x, const dk::CheckResult& c) {
  json e;
  e["x"] = x;
  e["name"] = c.name;
  e["pass"] = c.pass;
  e["worst_residual"] = c.worst_residual;
  e["witness"] = c.witness;
  return e;
}

template <class S>
void print_dim_table(std::ostream& os, const std::string& label,
                     const std::vector<std::vector<long>>& t) {
  os << "  " << label << ":\n";
  for (const auto& row : t) {
    os << "   ";
    for (long d : row) os << " " << d;
    os << "\n";
  }
}

template <class S>
void print_vertex_table(std::ostream& os, const dk::VertexAnalysis<S>& va) {
  os << "vertex " << va.local.x << ":\n";
  os << "  theta*:";
  for (const S& t : va.local.theta_star) os << " " << dk::scalar_str(t);
  os << "\n";
  print_dim_table<S>(os, "dim V_ij", va.split.vdims);
  print_dim_table<S>(os, "dim Vtilde_ij", va.split.vtdims);
  os << "  dim V_eta:";
  for (long d : va.disp.dims) os << " " << d;
  os << "\n";
  if (va.oracle) {
    os << "  modules (rho,tau,d,d*,eta,dim):";
    for (const dk::ModuleRecord& r : va.oracle->records)
      os << " (" << r.rho << "," << r.tau << "," << r.d << "," << r.dstar << ","
         << r.eta << "," << r.basis.dim() << ")";
    os << "\n    commutant dim " << va.oracle->commutant_dim << ", attempts "
       << va.oracle->attempts << "\n";
  }
  if (va.report) {
    for (const dk::CheckResult& c : va.report->checks) {
      os << "  " << (c.pass ? "PASS" : "FAIL") << " " << c.name
         << "  worst_residual=" << c.worst_residual;
      if (!c.witness.empty()) os << "  at " << c.witness;
      os << "\n";
    }
  }
}

template <class S>
void print_graph_table(std::ostream& os, const dk::DrgProfile<S>& pr,
                       const RunConfig& cfg) {
  os << "graph " << pr.g.name << ": n=" << pr.n() << " D=" << pr.D
     << " valency=" << pr.kdeg[1] << " mode=" << dk::mode_name(dk::is_exact_v<S>) << "\n";
  os << "theta:";
  for (const S& t : pr.theta) os << " " << dk::scalar_str(t);
  os << "\nmult: ";
  for (long m : pr.mult) os << " " << m;
  os << "\nq-polynomial orderings (" << pr.orderings.size() << "), using index "
     << cfg.ordering_index << ":";
  for (int e : pr.orderings[cfg.ordering_index]) os << " " << e;
  os << "\n";
}

// analyze and verify share the whole pipeline; verify additionally runs
// the check battery and folds failures into the exit code.
template <class S>
int run_analysis(const dk::DrgProfile<S>& pr, const RunConfig& cfg, bool with_verify) {
  if (cfg.ordering_index >= pr.orderings.size())
    dk::fail(dk::errc::bad_argument,
             "ordering index " + std::to_string(cfg.ordering_index) + " of " +
                 std::to_string(pr.orderings.size()));
  const std::vector<int>& ord = pr.orderings[cfg.ordering_index];
  std::vector<int> xs = select_vertices(pr, cfg);
  bool oracle = cfg.oracle || with_verify;

  std::vector<dk::VertexAnalysis<S>> results;
  results.reserve(xs.size());
  for (int x : xs)
    results.push_back(dk::analyze_vertex(pr, ord, x, oracle, with_verify, cfg.seed,
                                         cfg.oracle_cap));

  bool all_pass = true;
  for (const auto& va : results)
    if (va.report && !va.report->all_pass) all_pass = false;

  const std::string format = cfg.format.empty() ? "table" : cfg.format;
  if (format == "json") {
    json out;
    out["graph"] = graph_json(pr);
    out["spectrum"] = spectrum_json(pr);
    out["orderings"] = pr.orderings;
    json pvs = json::array();
    for (const auto& va : results) pvs.push_back(vertex_json(va, cfg));
    out["per_vertex"] = pvs;
    json checks = json::array();
    for (const auto& va : results)
      if (va.report)
        for (const dk::CheckResult& c : va.report->checks)
          checks.push_back(check_json(va.local.x, c));
    out["checks"] = checks;
    std::cout << out.dump(2) << "\n";
  } else if (format == "csv") {
    const int D = pr.D;
    std::cout << "x";
    for (int i = 0; i <= D; ++i)
      for (int j = 0; j <= D; ++j) std::cout << ",vt_" << i << "_" << j;
    for (int e = 0; e <= D; ++e) std::cout << ",veta_" << e;
    std::cout << "\n";
    for (const auto& va : results) {
      std::cout << va.local.x;
      for (const auto& row : va.split.vtdims)
        for (long d : row) std::cout << "," << d;
      for (long d : va.disp.dims) std::cout << "," << d;
      std::cout << "\n";
    }
  } else {
    print_graph_table(std::cout, pr, cfg);
    for (const auto& va : results) print_vertex_table(std::cout, va);
    if (with_verify)
      std::cout << (all_pass ? "all checks passed" : "CHECK FAILURES") << " ("
                << results.size() << " vertices)\n";
  }
  return all_pass ? 0 : 1;
}

// census: dimension tables only, one row per vertex, no oracle
template <class S>
int run_census(const dk::DrgProfile<S>& pr, const RunConfig& cfg) {
  RunConfig c = cfg;
  if (c.format.empty()) c.format = "csv";
  c.oracle = false;
  return run_analysis(pr, c, false);
}

template <class S>
std::vector<std::vector<S>> load_vectors(const dk::DrgProfile<S>& pr,
                                         const RunConfig& cfg) {
  std::vector<std::vector<S>> vs;
  if (!cfg.vector_file.empty()) {
    std::ifstream in(cfg.vector_file);
    if (!in) dk::fail(dk::errc::parse_error, "cannot open " + cfg.vector_file);
    std::vector<S> v;
    std::string line;
    while (std::getline(in, line)) {
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      v.push_back(dk::parse_scalar<S>(line));
    }
    if (v.size() != pr.n())
      dk::fail(dk::errc::bad_argument,
               "vector has " + std::to_string(v.size()) + " entries, n = " +
                   std::to_string(pr.n()));
    vs.push_back(std::move(v));
  }
  std::mt19937_64 rng(dk::mix_seed(cfg.seed));
  for (std::size_t t = 0; t < cfg.random_count; ++t) {
    const std::size_t n = pr.n();
    std::size_t nnz = 1 + rng() % std::max<std::size_t>(1, n / 4);
    std::vector<S> v(n, dk::scalar_from_int<S>(0));
    std::size_t placed = 0;
    while (placed < nnz) {
      std::size_t y = rng() % n;
      if (!dk::scalar_is_zero(v[y])) continue;
      long num = 1 + static_cast<long>(rng() % 9);
      if (rng() & 1) num = -num;
      long den = 1 + static_cast<long>(rng() % 9);
      if constexpr (dk::is_exact_v<S>) {
        v[y] = dk::rat(num, den);
      } else {
        v[y] = static_cast<double>(num) / static_cast<double>(den);
      }
      ++placed;
    }
    vs.push_back(std::move(v));
  }
  if (vs.empty())
    dk::fail(dk::errc::bad_argument, "dualwidth needs a vector file or --random N");
  return vs;
}

template <class S>
int run_dualwidth(const dk::DrgProfile<S>& pr, const RunConfig& cfg) {
  if (cfg.ordering_index >= pr.orderings.size())
    dk::fail(dk::errc::bad_argument,
             "ordering index " + std::to_string(cfg.ordering_index) + " of " +
                 std::to_string(pr.orderings.size()));
  const std::vector<int>& ord = pr.orderings[cfg.ordering_index];
  std::vector<std::vector<S>> vs = load_vectors(pr, cfg);

  bool all_ok = true;
  json checks = json::array();
  for (std::size_t t = 0; t < vs.size(); ++t) {
    dk::DualWidthResult r = dk::check_dual_width_bound(pr, ord, vs[t]);
    all_ok = all_ok && r.ok;
    if (cfg.format == "json") {
      json e;
      e["name"] = "dual_width_bound";
      e["vector"] = t;
      e["g"] = r.g;
      e["support"] = r.support.size();
      e["margin"] = r.min_margin;
      e["tight_x"] = r.tight_x;
      e["pass"] = r.ok;
      checks.push_back(e);
    } else {
      std::cout << "vector " << t << ": g=" << r.g << " support=" << r.support.size()
                << " margin=" << r.min_margin << " tight_x=" << r.tight_x << " "
                << (r.ok ? "PASS" : "FAIL") << "\n";
    }
  }
  if (cfg.format == "json") {
    json out;
    out["graph"] = graph_json(pr);
    out["spectrum"] = spectrum_json(pr);
    out["orderings"] = pr.orderings;
    out["per_vertex"] = json::array();
    out["checks"] = checks;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << vs.size() << " vectors, " << (all_ok ? "all bounds hold" : "BOUND VIOLATION")
              << "\n";
  }
  return all_ok ? 0 : 1;
}

// Mode dispatch: exact / float on request, auto tries exact and falls back
// to float only when the spectrum is not rational.
template <class F>
int dispatch(const RunConfig& cfg, F&& f) {
  dk::Graph g = dk::graph_from_spec(cfg.graph_spec, cfg.size_cap);
  dk::Tols tols = resolve_tols(cfg);
  if (cfg.mode == "exact") {
    auto pr = dk::certify<dk::Rational>(g, tols);
    return f(pr);
  }
  if (cfg.mode == "float") {
    auto pr = dk::certify<double>(g, tols);
    return f(pr);
  }
  try {
    auto pr = dk::certify<dk::Rational>(g, tols);
    return f(pr);
  } catch (const dk::error& e) {
    if (e.kind() != dk::errc::exact_mode_unsupported) throw;
  }
  auto pr = dk::certify<double>(g, tols);
  return f(pr);
}

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("graph", cfg.graph_spec,
                  "family:params (hamming:D,q | johnson:n,k | cycle:n) or an edge-list file")
      ->required();
  cmd->add_option("--mode", cfg.mode, "scalar mode")
      ->check(CLI::IsMember({"exact", "float", "auto"}))
      ->capture_default_str();
  cmd->add_option("--tol", cfg.tol, "containment tolerance (rank tolerance = tol/10)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", cfg.seed, "seed for the module oracle")->capture_default_str();
  cmd->add_option("--base-vertices", cfg.base,
                  "all | representatives | comma-separated ids")
      ->capture_default_str();
  cmd->add_option("--base-vertex", cfg.base_vertex, "single base vertex id");
  cmd->add_option("--ordering-index", cfg.ordering_index,
                  "which Q-polynomial ordering to use")
      ->capture_default_str();
  cmd->add_option("--format", cfg.format, "json | csv | table");
  cmd->add_option("--oracle-cap", cfg.oracle_cap,
                  "refuse the module oracle on graphs larger than this")
      ->capture_default_str();
  cmd->add_option("--size-cap", cfg.size_cap, "refuse graphs larger than this")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"split and displacement decompositions of distance-regular graphs"};
  app.require_subcommand(1);

  RunConfig acfg, vcfg, ccfg, dcfg;
  CLI::App* analyze = app.add_subcommand("analyze", "decomposition tables for chosen base vertices");
  add_common(analyze, acfg);
  analyze->add_flag("--oracle,!--no-oracle", acfg.oracle, "run the module oracle");

  CLI::App* verify = app.add_subcommand("verify", "run the full check battery");
  add_common(verify, vcfg);

  CLI::App* census = app.add_subcommand("census", "dimension tables for every selected vertex");
  ccfg.base = "all";
  add_common(census, ccfg);

  CLI::App* dualwidth = app.add_subcommand("dualwidth", "dual width and distance bound for vectors");
  add_common(dualwidth, dcfg);
  dualwidth->add_option("vectors", dcfg.vector_file, "file with one coordinate per line");
  dualwidth->add_option("--random", dcfg.random_count, "check N seeded random sparse vectors");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (analyze->parsed())
      return dispatch(acfg, [&](const auto& pr) { return run_analysis(pr, acfg, false); });
    if (verify->parsed())
      return dispatch(vcfg, [&](const auto& pr) { return run_analysis(pr, vcfg, true); });
    if (census->parsed())
      return dispatch(ccfg, [&](const auto& pr) { return run_census(pr, ccfg); });
    if (dualwidth->parsed())
      return dispatch(dcfg, [&](const auto& pr) { return run_dualwidth(pr, dcfg); });
  } catch (const dk::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return dk::is_input_error(e.kind()) ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
