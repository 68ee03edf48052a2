// Acceptance gate: ten scripted criteria, one PASS/FAIL line each,
// nonzero exit if anything fails.

#include <drgkit/drgkit.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

using namespace drgkit;

namespace {

int g_failures = 0;

void report(int num, const std::string& label, bool ok, const std::string& detail = "") {
  std::printf("%s criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", num, label.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

void criterion(int num, const std::string& label, const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = e.what();
    ok = false;
  }
  report(num, label, ok, ok ? "" : detail);
}

const std::vector<std::string> kCorpus = {
    "hamming:3,2", "hamming:3,3", "hamming:4,2",
    "johnson:6,3", "johnson:7,3", "cycle:6", "cycle:7"};

// auto mode: exact when the spectrum is rational, float otherwise
bool rational_spectrum(const std::string& spec) { return spec != "cycle:7"; }

template <class S>
VertexAnalysis<S> analyzed(const DrgProfile<S>& pr, int x, bool verify, std::uint64_t seed = 1) {
  return analyze_vertex(pr, pr.orderings[0], x, true, verify, seed);
}

const CheckResult* find_check(const VerificationReport& rep, const std::string& name) {
  for (const CheckResult& c : rep.checks)
    if (c.name == name) return &c;
  return nullptr;
}

template <class S>
std::vector<S> sparse_vector(std::size_t n, std::mt19937_64& rng) {
  std::size_t nnz = 1 + rng() % std::max<std::size_t>(1, n / 4);
  std::vector<S> v(n, scalar_from_int<S>(0));
  std::size_t placed = 0;
  while (placed < nnz) {
    std::size_t y = rng() % n;
    if (!scalar_is_zero(v[y])) continue;
    long num = 1 + static_cast<long>(rng() % 9);
    if (rng() & 1) num = -num;
    long den = 1 + static_cast<long>(rng() % 9);
    if constexpr (is_exact_v<S>) {
      v[y] = rat(num, den);
    } else {
      v[y] = static_cast<double>(num) / static_cast<double>(den);
    }
    ++placed;
  }
  return v;
}

}  // namespace

int main() {
  criterion(1, "hypercube golden table, both modes, all vertices, < 5 s", [](std::string& why) {
    auto t0 = std::chrono::steady_clock::now();
    const std::vector<std::vector<long>> want_vt = {
        {0, 0, 0, 1}, {0, 0, 3, 0}, {0, 3, 0, 0}, {1, 0, 0, 0}};
    auto run_mode = [&](auto tag, std::string& why) {
      using S = decltype(tag);
      auto pr = certify<S>(hamming(3, 2));
      for (std::size_t x = 0; x < 8; ++x) {
        VertexAnalysis<S> va = analyzed(pr, static_cast<int>(x), false);
        if (va.split.vtdims != want_vt) {
          why = "vtilde table mismatch at vertex " + std::to_string(x);
          return false;
        }
        if (va.disp.dims != std::vector<long>{8, 0, 0, 0}) {
          why = "displacement table mismatch at vertex " + std::to_string(x);
          return false;
        }
        for (const ModuleRecord& r : va.oracle->records)
          if (r.eta != 0) {
            why = "oracle module with nonzero displacement at vertex " + std::to_string(x);
            return false;
          }
      }
      return true;
    };
    if (!run_mode(Rational{}, why)) return false;
    if (!run_mode(double{}, why)) return false;
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= 5.0) {
      why = "took " + std::to_string(secs) + " s";
      return false;
    }
    return true;
  });

  criterion(2, "conservation of dimension across the corpus", [](std::string& why) {
    for (const std::string& spec : kCorpus) {
      auto check = [&](auto tag) {
        using S = decltype(tag);
        auto pr = certify<S>(graph_from_spec(spec));
        for (int x : representatives(pr.dist)) {
          VertexAnalysis<S> va =
              analyze_vertex(pr, pr.orderings[0], x, false, false, 1);
          long st = 0;
          for (const auto& row : va.split.vtdims)
            for (long d : row) st += d;
          long se = 0;
          for (long d : va.disp.dims) se += d;
          if (st != static_cast<long>(pr.n()) || se != static_cast<long>(pr.n())) {
            why = spec + " vertex " + std::to_string(x) + ": " + std::to_string(st) +
                  " / " + std::to_string(se) + " vs n = " + std::to_string(pr.n());
            return false;
          }
        }
        return true;
      };
      bool ok = rational_spectrum(spec) ? check(Rational{}) : check(double{});
      if (!ok) return false;
    }
    return true;
  });

  criterion(3, "vanishing below the main anti-diagonal", [](std::string& why) {
    for (const std::string& spec : kCorpus) {
      auto check = [&](auto tag) {
        using S = decltype(tag);
        auto pr = certify<S>(graph_from_spec(spec));
        for (int x : representatives(pr.dist)) {
          LocalAlgebra<S> la = local_algebra(pr, pr.orderings[0], x);
          SplitDecomposition<S> sd = split_decomposition(la);
          bool hit_diag = false;
          for (int i = 0; i <= pr.D; ++i)
            for (int j = 0; j <= pr.D; ++j) {
              if (i + j < pr.D && sd.vdims[i][j] != 0) {
                why = spec + ": dim V_" + std::to_string(i) + std::to_string(j) + " = " +
                      std::to_string(sd.vdims[i][j]);
                return false;
              }
              if (i + j == pr.D && sd.vdims[i][j] > 0) hit_diag = true;
            }
          if (!hit_diag) {
            why = spec + ": anti-diagonal entirely zero";
            return false;
          }
        }
        return true;
      };
      bool ok = rational_spectrum(spec) ? check(Rational{}) : check(double{});
      if (!ok) return false;
    }
    return true;
  });

  criterion(4, "shift actions on the refined cells", [](std::string& why) {
    for (const std::string& spec : kCorpus) {
      auto check = [&](auto tag, bool exact) {
        using S = decltype(tag);
        auto pr = certify<S>(graph_from_spec(spec));
        for (int x : representatives(pr.dist)) {
          VertexAnalysis<S> va = analyzed(pr, x, true);
          const CheckResult* c = find_check(*va.report, "split_shift");
          if (!c || !c->pass) {
            why = spec + ": split_shift failed at vertex " + std::to_string(x) +
                  (c ? " (" + c->witness + ")" : "");
            return false;
          }
          double bound = exact ? 0.0 : 1e-7;
          if (c->worst_residual > bound) {
            why = spec + ": residual " + std::to_string(c->worst_residual);
            return false;
          }
        }
        return true;
      };
      bool ok = rational_spectrum(spec) ? check(Rational{}, true) : check(double{}, false);
      if (!ok) return false;
    }
    return true;
  });

  criterion(5, "split and oracle displacement subspaces coincide", [](std::string& why) {
    auto run = [&](const std::string& spec, const std::vector<int>& xs, std::string& why) {
      auto pr = certify<double>(graph_from_spec(spec));
      for (int x : xs) {
        VertexAnalysis<double> va = analyzed(pr, x, true, 1);
        const CheckResult* c = find_check(*va.report, "displacement_match");
        if (!c || !c->pass || c->worst_residual > 1e-6) {
          why = spec + " vertex " + std::to_string(x) + ": residual " +
                (c ? std::to_string(c->worst_residual) : std::string("missing"));
          return false;
        }
      }
      return true;
    };
    std::vector<int> all20(20), all6(6);
    for (int i = 0; i < 20; ++i) all20[i] = i;
    for (int i = 0; i < 6; ++i) all6[i] = i;
    return run("johnson:6,3", all20, why) && run("cycle:6", all6, why) &&
           run("hamming:3,3", {0}, why);
  });

  criterion(6, "per-module laws across the corpus", [](std::string& why) {
    for (const std::string& spec : kCorpus) {
      auto pr = certify<double>(graph_from_spec(spec));
      const int D = pr.D;
      for (int x : representatives(pr.dist)) {
        VertexAnalysis<double> va = analyzed(pr, x, true);
        for (std::size_t k = 0; k < va.oracle->records.size(); ++k) {
          const ModuleRecord& r = va.oracle->records[k];
          auto bad = [&](const std::string& what) {
            why = spec + " module " + std::to_string(k) + ": " + what;
            return false;
          };
          if (2 * r.rho + r.d < D) return bad("2*rho + d < D");
          if (2 * r.tau + r.d < D) return bad("2*tau + d < D");
          if (r.eta < 0 || r.eta > D) return bad("displacement out of range");
          if (r.d != r.dstar) return bad("d != d*");
          if (!r.contiguous) return bad("support not an interval");
          std::size_t whsum = 0;
          for (const auto& w : r.Wh) whsum += w.dim();
          if (whsum != r.basis.dim()) return bad("W_h do not add up");
        }
        const CheckResult* c = find_check(*va.report, "module_split_containment");
        if (!c || !c->pass || c->worst_residual > 1e-6) {
          why = spec + ": module split containment residual " +
                (c ? std::to_string(c->worst_residual) : std::string("missing"));
          return false;
        }
      }
    }
    return true;
  });

  criterion(7, "dual-width distance bound on random and structured vectors", [](std::string& why) {
    int checked = 0;
    for (const std::string& spec : {std::string("johnson:6,3"), std::string("hamming:4,2")}) {
      auto pr = certify<Rational>(graph_from_spec(spec));
      const auto& ord = pr.orderings[0];
      std::mt19937_64 rng(mix_seed(1));
      for (int t = 0; t < 100; ++t) {
        std::vector<Rational> v = sparse_vector<Rational>(pr.n(), rng);
        DualWidthResult r = check_dual_width_bound(pr, ord, v);
        ++checked;
        if (!r.ok) {
          why = spec + ": bound violated on random vector " + std::to_string(t);
          return false;
        }
      }
      std::vector<std::vector<Rational>> structured;
      std::vector<Rational> ex(pr.n(), rat(0)), ones(pr.n(), rat(1)), diff(pr.n(), rat(0));
      ex[0] = rat(1);
      diff[1] = rat(1);
      diff[2] = rat(-1);
      structured = {ex, ones, diff};
      for (const auto& v : structured) {
        DualWidthResult r = check_dual_width_bound(pr, ord, v);
        ++checked;
        if (!r.ok) {
          why = spec + ": bound violated on a structured vector";
          return false;
        }
      }
    }
    if (checked != 206) {
      why = "expected 206 vectors, checked " + std::to_string(checked);
      return false;
    }
    return true;
  });

  criterion(8, "exact and float dimension tables are identical", [](std::string& why) {
    for (const std::string& spec : kCorpus) {
      if (!rational_spectrum(spec)) continue;
      auto pe = certify<Rational>(graph_from_spec(spec));
      auto pf = certify<double>(graph_from_spec(spec));
      for (int x : representatives(pe.dist)) {
        VertexAnalysis<Rational> ve = analyze_vertex(pe, pe.orderings[0], x, false, false, 1);
        VertexAnalysis<double> vf = analyze_vertex(pf, pf.orderings[0], x, false, false, 1);
        if (ve.split.vdims != vf.split.vdims || ve.split.vtdims != vf.split.vtdims ||
            ve.disp.dims != vf.disp.dims) {
          why = spec + ": tables differ at vertex " + std::to_string(x);
          return false;
        }
      }
    }
    return true;
  });

  criterion(9, "negative controls reject and name witnesses", [](std::string& why) {
    // near-miss graph
    std::vector<std::pair<int, int>> edges = {
        {1, 2}, {2, 3}, {3, 4}, {0, 4}, {0, 5}, {1, 6}, {2, 7},
        {3, 8}, {4, 9}, {5, 7}, {7, 9}, {6, 9}, {6, 8}, {5, 8}};
    Graph near_miss = make_graph(10, edges, "petersen minus an edge");
    try {
      certify<double>(near_miss);
      why = "near-miss graph was accepted";
      return false;
    } catch (const not_drg_error& e) {
      if (e.witness().count1 == e.witness().count2) {
        why = "witness counts do not differ";
        return false;
      }
    }
    try {
      cycle(5);
      why = "cycle(5) was accepted";
      return false;
    } catch (const error& e) {
      if (e.kind() != errc::diameter_too_small) {
        why = "cycle(5) rejected for the wrong reason";
        return false;
      }
    }
    // corrupted refined grid
    auto pr = certify<double>(hamming(3, 2));
    LocalAlgebra<double> la = local_algebra(pr, pr.orderings[0], 0);
    SplitDecomposition<double> sd = split_decomposition(la);
    Displacement<double> disp = displacement_from_split(sd, pr.tols);
    LocalView lv = make_view(la);
    OracleResult res = decompose_irreducible(lv, 1, kDefaultOracleCap, pr.tols);
    Matrix<double> badv(8, 1);
    badv(0, 0) = 1.0 / std::sqrt(2.0);
    badv(1, 0) = -1.0 / std::sqrt(2.0);
    sd.Vt[0][3] = make_subspace<double>(8, std::move(badv), pr.tols.rank);
    VerificationReport rep = verify_all(la, sd, disp, res);
    const CheckResult* c = find_check(rep, "split_shift");
    if (!c || c->pass) {
      why = "corrupted grid passed the shift check";
      return false;
    }
    if (c->witness.find("(0,3)") == std::string::npos) {
      why = "shift check witness does not name the cell: " + c->witness;
      return false;
    }
    return true;
  });

  criterion(10, "full corpus verification under five minutes", [](std::string& why) {
    auto t0 = std::chrono::steady_clock::now();
    for (const std::string& spec : kCorpus) {
      auto check = [&](auto tag) {
        using S = decltype(tag);
        auto pr = certify<S>(graph_from_spec(spec));
        for (int x : representatives(pr.dist)) {
          VertexAnalysis<S> va = analyzed(pr, x, true);
          if (!va.report->all_pass) {
            why = spec + ": checks failed at vertex " + std::to_string(x);
            return false;
          }
        }
        return true;
      };
      bool ok = rational_spectrum(spec) ? check(Rational{}) : check(double{});
      if (!ok) return false;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("  (corpus verification took %.1f s)\n", secs);
    if (secs >= 300.0) {
      why = "took " + std::to_string(secs) + " s";
      return false;
    }
    return true;
  });

  if (g_failures == 0) {
    std::printf("acceptance: all 10 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
  return 1;
}
