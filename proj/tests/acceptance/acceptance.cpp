// Acceptance suite: one line per criterion, nonzero exit if any fails.
// `hmono_acceptance 3 7` runs only criteria 3 and 7.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hmono/cost.hpp"
#include "hmono/density.hpp"
#include "hmono/estimates.hpp"
#include "hmono/fluid.hpp"
#include "hmono/green.hpp"
#include "hmono/interpolation.hpp"
#include "hmono/monotone.hpp"
#include "hmono/ot_solver.hpp"
#include "hmono/report.hpp"
#include "hmono/zoo.hpp"

using namespace hmono;

namespace {

struct Verdict {
  bool ok = true;
  std::string detail;
};

// Accumulates the first few failure reasons of a criterion.
class Tally {
 public:
  void expect(bool cond, const std::string& what) {
    if (cond) return;
    ++failures_;
    if (failures_ <= 3) notes_ += (notes_.empty() ? "" : "; ") + what;
  }
  Verdict verdict(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    return {false, std::to_string(failures_) + " failures: " + notes_};
  }

 private:
  int failures_ = 0;
  std::string notes_;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

Vector random_point(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

// Volume of the unit ball, written out for the dimensions used here.
double omega(int n) {
  switch (n) {
    case 1:
      return 2.0;
    case 2:
      return std::numbers::pi;
    case 3:
      return 4.0 * std::numbers::pi / 3.0;
  }
  return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

Verdict optimality_implies_monotonicity() {
  Tally t;
  const auto start = std::chrono::steady_clock::now();
  std::size_t instances = 0;
  for (int n : {1, 2, 3}) {
    for (double p : {2.0, 3.0, 4.0}) {
      const auto cost = CostFunction::isotropic(n, p);
      for (int k = 0; k < 100; ++k) {
        std::mt19937_64 rng(1000 * n + 100 * static_cast<int>(p) + k);
        PointCloud xs, ys;
        for (int i = 0; i < 8; ++i) xs.push_back(random_point(rng, n));
        for (int i = 0; i < 8; ++i) ys.push_back(random_point(rng, n));
        const auto exact = solve_exact(xs, ys, cost);
        const auto brute = solve_bruteforce(xs, ys, cost);
        CheckOptions opt;
        opt.tolerance = 1e-9;
        const auto rep = check_map(assignment_map(xs, ys, exact), cost, HForm{}, opt);
        const std::string tag = "n=" + std::to_string(n) + " p=" + fmt(p) + " #" + std::to_string(k);
        t.expect(rep.pairs_checked == 56, tag + " checked " + std::to_string(rep.pairs_checked) + " pairs");
        t.expect(rep.passed, tag + " defect " + fmt(rep.worst_defect));
        t.expect(exact.cost == brute.cost, tag + " cost differs from brute force");
        ++instances;
      }
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  t.expect(secs < 60.0, "runtime " + fmt(secs) + " s");
  return t.verdict(std::to_string(instances) + " instances, 56 pairs each, " + fmt(secs) + " s");
}

Verdict defect_equivalence() {
  Tally t;
  double worst = 0.0;
  for (int n : {2, 3}) {
    for (double p : {2.0, 3.0, 4.0}) {
      const auto cost = CostFunction::isotropic(n, p);
      std::mt19937_64 rng(77 + 10 * n + static_cast<int>(p));
      for (int k = 0; k < 1000; ++k) {
        const Vector x = random_point(rng, n), y = random_point(rng, n);
        const Vector tx = random_point(rng, n), ty = random_point(rng, n);
        const double gap = std::abs(h_defect(cost, x, y, tx, ty) -
                                    bilinear_defect(cost, x, y, tx, ty, QuadratureSpec{16}));
        worst = std::max(worst, gap);
        t.expect(gap < 1e-6, "n=" + std::to_string(n) + " p=" + fmt(p) + " gap " + fmt(gap));
      }
    }
  }
  return t.verdict("6000 tuples, max gap " + fmt(worst));
}

Verdict linfty_certification() {
  Tally t;
  std::size_t runs = 0;
  for (int n : {1, 3}) {
    for (double p : {2.0, 4.0}) {
      const auto cost = CostFunction::isotropic(n, p);
      for (const auto& name : zoo_names()) {
        if (!zoo_is_monotone(name) || (name == "piecewise_linear" && n != 1)) continue;
        ZooSpec spec;
        spec.name = name;
        spec.dimension = n;
        if (name == "translation") spec.params = {0.1};
        const auto map = analytic_zoo(spec);
        for (double beta : {0.3, 0.5, 0.7}) {
          const auto consts = EstimateConstants::from_cost(cost, beta);
          // independent constants for m = M = 1
          const double c1 = std::pow(2.0, p + 1.0) / omega(n);
          const double c2 = std::pow(2.0, p + 2.0) * (std::pow(2.0, p - 1.0) + 1.0);
          for (double radius : {0.5, 1.0}) {
            const double delta0 = std::pow((1.0 - beta) * radius / 2.0, n + p) * (p - 1.0) * c2 /
                                  ((n + 1.0) * c1);
            CertifyOptions opt;
            opt.budget = 20000;
            const auto rep = certify(map, cost, Ball{Vector::Zero(n), radius, 3}, consts, opt);
            const std::string tag = name + " n=" + std::to_string(n) + " p=" + fmt(p) +
                                    " beta=" + fmt(beta) + " R=" + fmt(radius);
            t.expect(rep.passed, tag + ": sup " + fmt(rep.empirical_sup) + " > bound " + fmt(rep.bound));
            t.expect(std::abs(rep.delta0 - delta0) <= 1e-12 * delta0, tag + ": delta0 mismatch");
            t.expect((rep.delta <= delta0) == (rep.branch == Branch::Small), tag + ": branch");
            ++runs;
          }
        }
      }
    }
  }
  const auto c = EstimateConstants::from_cost(CostFunction::isotropic(3, 2.0), 0.5);
  const double d0 = linfty_bound(1.0, 1.0, c).delta0;
  t.expect(std::abs(d0 - std::numbers::pi / 512.0) <= 1e-12,
           "Delta0 " + fmt(d0) + " != pi/512");
  return t.verdict(std::to_string(runs) + " certifications, Delta0 - pi/512 = " +
                   fmt(d0 - std::numbers::pi / 512.0));
}

Verdict lower_bound_probe() {
  Tally t;
  const Vector base = (Vector(3) << 0.3, -0.7, 0.2).finished();
  for (int n : {1, 2, 3}) {
    for (double p : {2.0, 3.0, 4.0}) {
      const auto cost = CostFunction::isotropic(n, p);
      const Vector u = base.head(n);
      const auto a = probe_lower_bound(cost, u);
      const auto b = probe_lower_bound(cost, Vector(3.7 * u));
      const std::string tag = "n=" + std::to_string(n) + " p=" + fmt(p);
      t.expect(a.delta0 > 0.0, tag + ": delta0 = 0");
      t.expect(std::abs(a.delta0 - b.delta0) <= 1e-12, tag + ": not scale invariant");
      for (std::size_t k = 0; k < a.deltas.size(); ++k) {
        const double d = a.deltas[k];
        // -G(du, u) / (d |u|^p) for h = |z|^p, written out
        const double expected = (std::pow(d, p) + 1.0 - std::pow(1.0 - d, p)) / d;
        if (std::abs(a.ratios[k] - expected) > 1e-12 * std::max(1.0, expected)) {
          t.expect(false, tag + ": ratio at delta " + fmt(d));
          break;
        }
        if (p == 2.0 && std::abs(a.ratios[k] - 2.0) > 1e-12) {
          t.expect(false, tag + ": ratio " + fmt(a.ratios[k]) + " != 2");
          break;
        }
      }
    }
  }
  return t.verdict("9 (n,p) pairs, delta0 > 0 and scale invariant, p=2 ratio == 2");
}

Verdict lemma51() {
  Tally t;
  int small = 0, large = 0, runs = 0;
  struct Case {
    std::string name;
    std::vector<double> params;
  };
  const std::vector<Case> one_d = {{"identity", {}},        {"translation", {0.01}},
                                   {"translation", {0.3}},  {"dilation", {2.0}},
                                   {"dilation", {1.05}},    {"piecewise_linear", {}},
                                   {"grad_quartic", {1.0}}};
  const std::vector<Case> convex = {{"identity", {}},       {"translation", {0.01}},
                                    {"dilation", {2.0}},    {"dilation", {1.05}},
                                    {"grad_quartic", {1.0}}};
  for (int n : {1, 2, 3}) {
    for (const auto& c : n == 1 ? one_d : convex) {
      ZooSpec spec;
      spec.name = c.name;
      spec.dimension = n;
      spec.params = c.params;
      const auto map = analytic_zoo(spec);
      for (double a : {0.0, 1.0, 2.0}) {
        for (double radius : {0.5, 1.0}) {
          CertifyOptions opt;
          opt.budget = 20000;
          const auto rep = lemma51_bound(map, a * Matrix::Identity(n, n), Vector::Zero(n),
                                         Ball{Vector::Zero(n), radius, 5}, 0.5, opt);
          (rep.branch == Branch::Small ? small : large)++;
          ++runs;
          t.expect(rep.passed, c.name + " n=" + std::to_string(n) + " A=" + fmt(a) + "I: sup " +
                                   fmt(rep.empirical_sup) + " > bound " + fmt(rep.bound));
        }
      }
    }
  }
  t.expect(small > 0 && large > 0, "both branches must be exercised");

  // u = x on [-1, 1] with A = 0: Delta' = (2/omega_1) int |x| = 1, r = (1 - 1/2)/2,
  // so the bound is Delta' / r = 4.
  ZooSpec id;
  id.dimension = 1;
  const auto rep = lemma51_bound(analytic_zoo(id), Matrix::Zero(1, 1), Vector::Zero(1),
                                 Ball{Vector::Zero(1), 1.0, 0}, 0.5);
  t.expect(std::abs(rep.bound - 4.0) <= 1e-9, "worked example bound " + fmt(rep.bound));
  t.expect(rep.passed, "worked example sup " + fmt(rep.empirical_sup));
  return t.verdict(std::to_string(runs) + " runs (" + std::to_string(small) + " small, " +
                   std::to_string(large) + " large), worked example bound " +
                   fmt(rep.bound));
}

Verdict interpolation_inclusion() {
  Tally t;
  const std::vector<double> t_grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::size_t translations = 0;
  for (int n : {2, 3}) {
    const auto cost = CostFunction::isotropic(n, 2.0);
    for (double mag : {0.001, 0.005, 0.01}) {
      for (int dir = 0; dir < n; ++dir) {
        ZooSpec spec;
        spec.name = "translation";
        spec.dimension = n;
        Vector c = Vector::Zero(n);
        c(dir) = (dir % 2 ? -mag : mag);
        spec.params.assign(c.data(), c.data() + n);
        const auto res = inclusion_check(analytic_zoo(spec), cost, 0.5, 0.75, t_grid, 20000);
        t.expect(res.inclusion_holds(), "translation |c|=" + fmt(mag) + " has " +
                                            std::to_string(res.violation_count) + " violations");
        ++translations;
      }
    }
  }
  ZooSpec shrink;
  shrink.name = "dilation";
  shrink.dimension = 2;
  shrink.params = {0.25};
  const auto neg = inclusion_check(analytic_zoo(shrink), CostFunction::isotropic(2, 2.0), 0.5,
                                   0.75, t_grid, 20000);
  t.expect(neg.violation_count > 0, "dilation 0.25x shows no violations");

  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const int n = 2 + k % 3;
    Matrix sa(n, n), sb(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        sa(i, j) = g(rng);
        sb(i, j) = g(rng);
      }
    }
    sa = 0.5 * (sa + sa.transpose()).eval();
    sb = 0.5 * (sb + sb.transpose()).eval();
    const Matrix a = sa * sa + 1e-3 * Matrix::Identity(n, n);
    const Matrix b = sb * sb + 1e-3 * Matrix::Identity(n, n);
    for (int s = 1; s <= 9; ++s) {
      const double r = det_logconcavity_residual(a, b, s / 10.0);
      worst = std::min(worst, r);
      t.expect(r >= -1e-10, "det residual " + fmt(r));
    }
  }
  return t.verdict(std::to_string(translations) + " translations clean, negative control " +
                   std::to_string(neg.violation_count) + " violations, min det residual " +
                   fmt(worst));
}

Verdict density_formula() {
  Tally t;
  ZooSpec spec;
  spec.name = "dilation";
  spec.dimension = 2;
  spec.params = {2.0};
  const auto map = analytic_zoo(spec);
  const Density rho0 = Density::uniform(2, 1.0);
  const Grid grid = Grid::cube(2, 1.0, 16);
  double worst_rel = 0.0, worst_exact = 0.0;
  for (double time : {0.25, 0.5, 0.75}) {
    const double expected = 1.0 / ((1.0 + time) * (1.0 + time));
    const auto closed = density_closed_form(map, rho0, time, grid);
    const auto hist = density_pushforward(map, rho0, time, grid, 1000000, 7);
    t.expect(closed.failed_cells.empty(), "closed form failed cells");
    for (std::size_t c = 0; c < grid.cell_count(); ++c) {
      const double exact_gap = std::abs(closed.values[c] - expected);
      worst_exact = std::max(worst_exact, exact_gap);
      t.expect(exact_gap <= 1e-9, "closed form " + fmt(closed.values[c]) + " at t=" + fmt(time));
      const double rel = std::abs(hist.values[c] - closed.values[c]) / closed.values[c];
      worst_rel = std::max(worst_rel, rel);
      t.expect(rel < 0.05, "histogram rel error " + fmt(rel) + " at t=" + fmt(time));
    }
  }
  return t.verdict("256 cells x 3 times, max histogram rel error " + fmt(worst_rel) +
                   ", max |closed - 1/(1+t)^2| " + fmt(worst_exact));
}

Verdict fluid_sandwich() {
  Tally t;
  ZooSpec spec;
  spec.name = "translation";
  spec.dimension = 2;
  spec.params = {0.02, 0.0};
  const auto res = sandwich_check(analytic_zoo(spec), CostFunction::isotropic(2, 2.0),
                                  Density::uniform(2, 2.0), 0.4, 0.5, 0.6);
  const double c2pi = 0.02 * 0.02 * std::numbers::pi;
  const double want[3] = {c2pi * 0.16, c2pi * 0.25, c2pi * 0.36};
  const double got[3] = {res.lower, res.action, res.upper};
  const char* names[3] = {"lower", "action", "upper"};
  t.expect(res.regime_met, "regime: " + res.message);
  t.expect(res.passed, "sandwich: " + res.message);
  for (int i = 0; i < 3; ++i) {
    t.expect(std::abs(got[i] - want[i]) <= 0.02 * want[i],
             std::string(names[i]) + " " + fmt(got[i]) + " vs " + fmt(want[i]));
  }
  t.expect(res.lower < res.action && res.action < res.upper, "not strictly ordered");
  return t.verdict("lower " + fmt(res.lower) + " < action " + fmt(res.action) + " < upper " +
                   fmt(res.upper));
}

Verdict green_identity() {
  Tally t;
  const Vector origin = Vector::Zero(3);
  const auto sq = TestFunction::square_norm();
  const double r_sq = identity_residual(sq, 3, origin, 1.0);
  t.expect(r_sq < 1e-4, "|x|^2 residual " + fmt(r_sq));
  // int_{B_rho} (Gamma - Gamma(rho)) = -rho^2 / (2n), so the correction is
  // (n / r^n) int_0^r rho^{n-1} (2n) (-rho^2 / (2n)) d rho = -n r^2 / (n + 2).
  const double want = -3.0 / 5.0;
  const auto terms = representation_terms(sq.value, sq.laplacian, 3, origin, 1.0);
  t.expect(std::abs(terms.correction - want) < 1e-4, "correction " + fmt(terms.correction));

  const Vector y = (Vector(3) << 0.3, -0.2, 0.5).finished();
  double harmonic = 0.0;
  for (const auto& f : {TestFunction::coordinate(0), TestFunction::coordinate(2),
                        TestFunction::saddle()}) {
    harmonic = std::max(harmonic, identity_residual(f, 3, y, 0.7));
  }
  t.expect(harmonic < 1e-6, "harmonic residual " + fmt(harmonic));

  const Vector yg = (Vector(3) << 0.2, 0.0, 0.0).finished();
  const auto gauss = TestFunction::gaussian();
  const auto study = convergence_study(
      [&](std::size_t b) { return identity_residual(gauss, 3, yg, 0.5, b); }, {8, 16, 32, 64});
  t.expect(study.order >= 1.0, "self-convergence order " + fmt(study.order));
  t.expect(study.decreasing, "residual not decreasing under budget doubling");
  const double r_gauss = identity_residual(gauss, 3, yg, 0.5, 2048);
  t.expect(r_gauss < 1e-3, "gaussian residual " + fmt(r_gauss));

  const Vector u = (Vector(3) << 0.7, -0.2, 0.4).finished();
  const auto probe = proof_decomposition_probe(CostFunction::isotropic(3, 2.0), u, 0.3);
  t.expect(probe.residual < 1e-8, "p=2 probe residual " + fmt(probe.residual));
  t.expect(probe.b_term == 0.0, "p=2 probe B term " + fmt(probe.b_term));
  return t.verdict("|x|^2 residual " + fmt(r_sq) + ", correction " + fmt(terms.correction) +
                   ", harmonic " + fmt(harmonic) + ", order " + fmt(study.order) +
                   ", probe " + fmt(probe.residual));
}

std::vector<std::pair<std::string, std::string>> read_tree(const std::filesystem::path& dir) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    out.emplace_back(std::filesystem::relative(e.path(), dir).string(), ss.str());
  }
  std::sort(out.begin(), out.end());
  return out;
}

Verdict determinism() {
  Tally t;
  const auto root = std::filesystem::temp_directory_path() / "hmono_acceptance_determinism";
  std::filesystem::remove_all(root);
  const std::string checks = R"([
      {"kind": "check"},
      {"kind": "check", "mode": "bilinear"},
      {"kind": "certify", "budget": 5000, "probe_points": 50},
      {"kind": "lemma51", "a": [[1, 0], [0, 1]], "budget": 5000},
      {"kind": "interp", "budget": 2000, "cells": 8, "particles": 20000, "holder_pairs": 2000},
      {"kind": "fluid", "budget": 4000},
      {"kind": "green-check", "n": 3, "function": "gaussian", "y": [0.2, 0, 0], "r": 0.5,
       "budgets": [8, 32]}
    ])";
  std::vector<std::string> maps = {
      R"({"zoo": {"name": "translation", "params": [0.01, 0], "samples": 64}})",
      R"({"assignment": {"points": 24, "seed": 4, "noise": 0.02}})"};
  std::size_t files = 0;
  for (std::size_t m = 0; m < maps.size(); ++m) {
    std::vector<std::vector<std::pair<std::string, std::string>>> trees;
    for (const char* threads : {"1", "3", "1"}) {
      setenv("HMONO_THREADS", threads, 1);
      const auto dir = root / ("map" + std::to_string(m) + "_run" + std::to_string(trees.size()));
      const std::string cfg = R"({"seed": 42, "cost": {"family": "isotropic", "n": 2, "p": 2},
          "map": )" + maps[m] + R"(, "checks": )" + checks + R"(, "output_dir": ")" +
                              dir.generic_string() + "\"}";
      const auto res = run(parse_config(cfg));
      t.expect(res.exit_code != 2, "run failed for map " + std::to_string(m));
      trees.push_back(read_tree(dir));
    }
    unsetenv("HMONO_THREADS");
    t.expect(!trees[0].empty(), "no output files");
    for (std::size_t k = 1; k < trees.size(); ++k) {
      t.expect(trees[k] == trees[0], "map " + std::to_string(m) + " run " + std::to_string(k) +
                                         " differs from run 0");
    }
    files += trees[0].size();
  }
  std::filesystem::remove_all(root);
  return t.verdict(std::to_string(files) + " files identical across 3 runs (1 and 3 threads)");
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"optimality implies h-monotonicity", optimality_implies_monotonicity},
      {"pairwise and bilinear defects agree", defect_equivalence},
      {"L-infinity certification", linfty_certification},
      {"lower-bound probe", lower_bound_probe},
      {"classical monotone estimate", lemma51},
      {"interpolation inclusion and det concavity", interpolation_inclusion},
      {"transported density formula", density_formula},
      {"fluid action sandwich", fluid_sandwich},
      {"Green representation identity", green_identity},
      {"run determinism", determinism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && !only.count(id)) continue;
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %2d %s: %s (%.1fs)\n", v.ok ? "PASS" : "FAIL", id,
                criteria[i].first.c_str(), v.detail.c_str(), secs);
    std::fflush(stdout);
    if (!v.ok) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
