// Acceptance checks. Prints one line per criterion and exits nonzero if any
// of them fails. Tolerances and time budgets are fixed here on purpose.

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "common/random_systems.hpp"
#include "lqo_cli/demo.hpp"

namespace {

using namespace lqo;
using lqo::testing::rel_diff;
using lqo::testing::Rng;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Accumulates the worst value seen for a named quantity.
class Tally {
 public:
  void check(const std::string& what, double value, double limit) {
    if (!(value <= limit)) {
      ok_ = false;
      if (first_failure_.empty()) {
        std::ostringstream s;
        s << what << " = " << value << " > " << limit;
        first_failure_ = s.str();
      }
    }
    worst_ = std::max(worst_, limit > 0.0 ? value / limit : value);
  }
  void require(const std::string& what, bool cond) {
    if (!cond) {
      ok_ = false;
      if (first_failure_.empty()) first_failure_ = what;
    }
  }
  Outcome outcome(const std::string& summary) const {
    std::ostringstream s;
    if (ok_) {
      s << summary << std::setprecision(3) << " (worst/limit " << worst_ << ")";
    } else {
      s << summary << "; " << first_failure_;
    }
    return {ok_, s.str()};
  }

 private:
  bool ok_ = true;
  double worst_ = 0.0;
  std::string first_failure_;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---- 1 and 2 share the demo run ----

cli::DemoResult demo_result;
double demo_seconds = 0.0;

void run_demo_once() {
  const auto start = Clock::now();
  demo_result = cli::run_demo(cli::DemoOptions{});
  demo_seconds = seconds_since(start);
}

Outcome criterion1() {
  Tally t;
  const ReductionReport& r = demo_result.reports.at("tlhnoia");
  t.require("tlhnoia did not converge", r.converged);
  t.check("iterations", r.iterations, 200);
  t.require("no residuals", r.residuals.has_value());
  if (r.residuals) {
    double op2 = 0.0;
    for (const Residual& x : r.residuals->op2) op2 = std::max(op2, x.norm);
    t.check("||op2||", op2, 1e-6);
    t.check("||op3||", r.residuals->op3.norm, 1e-3);
    t.check("||op4||", r.residuals->op4.norm, 1e-3);
  }
  t.check("demo seconds", demo_seconds, 10.0);
  std::ostringstream s;
  s << "TLHNOIA on the sixth-order example: " << r.iterations << " iterations";
  return t.outcome(s.str());
}

Outcome criterion2() {
  Tally t;
  const auto& e = demo_result.mean_rel_err;
  const double worst_good = std::max(e.at("tlhnoia"), e.at("tlbt"));
  const double best_bad = std::min(e.at("bt"), e.at("homora"));
  t.require("time-limited methods not strictly better", worst_good < best_bad);
  t.check("demo seconds", demo_seconds, 30.0);
  std::ostringstream s;
  s << std::setprecision(4) << "mean rel err bt " << e.at("bt") << ", tlbt " << e.at("tlbt")
    << ", homora " << e.at("homora") << ", tlhnoia " << e.at("tlhnoia");
  return t.outcome(s.str());
}

// ---- 3 ----

Outcome criterion3() {
  const auto start = Clock::now();
  Tally t;
  Rng rng(1003);
  for (int k = 0; k < 20; ++k) {
    const LqoSystem s = rng.system(rng.integer(1, 6), rng.integer(1, 2), rng.integer(1, 2));
    const double t0 = k % 2 == 0 ? 0.0 : 0.5 * rng.uniform();
    const TimeInterval iv(t0, t0 + 0.5 + 1.5 * rng.uniform());
    const double exact = h2tau_norm(s, iv).value;
    const double quad = h2tau_norm_quadrature(s, iv, 400).value;
    t.check("relative difference", std::abs(exact - quad) / exact, 1e-5);
  }
  t.check("seconds", seconds_since(start), 60.0);
  return t.outcome("Gramian norm vs quadrature on 20 random systems");
}

// ---- 4 ----

Matrix fd_gradient(const Matrix& x, const std::function<double(const Matrix&)>& f) {
  const double h = 1e-6 * std::max(1.0, x.norm());
  Matrix g(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      Matrix p = x, m = x;
      p(i, j) += h;
      m(i, j) -= h;
      g(i, j) = (f(p) - f(m)) / (2.0 * h);
    }
  }
  return g;
}

Outcome criterion4() {
  const auto start = Clock::now();
  Tally t;
  Rng rng(1004);
  for (int k = 0; k < 10; ++k) {
    const Eigen::Index n_full = rng.integer(2, 5);
    const Eigen::Index n = rng.integer(1, 2);
    const Eigen::Index m = rng.integer(1, 2);
    const Eigen::Index p = rng.integer(1, 2);
    const LqoSystem h = rng.system(n_full, m, p);
    const LqoSystem r = rng.system(n, m, p);
    const double t0 = k % 2 == 0 ? 0.0 : 0.3 * rng.uniform();
    const TimeInterval iv(t0, t0 + 0.5 + rng.uniform());
    const GradientReport g = gradients(h, r, iv);
    const auto j = [&](const LqoSystem& rom) { return objective_j(h, rom, iv); };

    t.check("grad A", rel_diff(g.grad_a, fd_gradient(r.a(), [&](const Matrix& x) {
                                 return j(LqoSystem(x, r.b(), r.c(), r.m()));
                               })),
            1e-5);
    t.check("grad B", rel_diff(g.grad_b, fd_gradient(r.b(), [&](const Matrix& x) {
                                 return j(LqoSystem(r.a(), x, r.c(), r.m()));
                               })),
            1e-5);
    t.check("grad C", rel_diff(g.grad_c, fd_gradient(r.c(), [&](const Matrix& x) {
                                 return j(LqoSystem(r.a(), r.b(), x, r.m()));
                               })),
            1e-5);
    for (std::size_t i = 0; i < r.m().size(); ++i) {
      t.check("grad M", rel_diff(g.grad_m[i], fd_gradient(r.m(i), [&](const Matrix& x) {
                                   std::vector<Matrix> ms = r.m();
                                   ms[i] = x;
                                   return j(LqoSystem(r.a(), r.b(), r.c(), ms));
                                 })),
              1e-5);
    }
  }
  t.check("seconds", seconds_since(start), 120.0);
  return t.outcome("analytic gradients vs central differences on 10 random pairs");
}

// ---- 5 ----

Outcome criterion5() {
  Tally t;
  Rng rng(1005);
  for (int k = 0; k < 5; ++k) {
    const LqoSystem h = rng.system(5, rng.integer(1, 2), rng.integer(1, 2));
    const LqoSystem r = rng.system(2, h.inputs(), h.outputs());
    const double slow =
        std::min(std::abs(spectral_abscissa(h.a())), std::abs(spectral_abscissa(r.a())));
    const TimeInterval fin = TimeInterval::finite(100.0 / slow);
    const TimeInterval inf = TimeInterval::infinite();
    constexpr double tol = 1e-6;

    const GramianSet gf = timelimited_gramians(h, fin), gi = timelimited_gramians(h, inf);
    t.check("P", rel_diff(gf.p, gi.p), tol);
    t.check("Y", rel_diff(gf.y, gi.y), tol);
    t.check("Z", rel_diff(gf.z, gi.z), tol);
    const CrossGramianSet cf = cross_gramians(h, r, fin), ci = cross_gramians(h, r, inf);
    t.check("Pt", rel_diff(cf.pt, ci.pt), tol);
    t.check("Ph", rel_diff(cf.ph, ci.ph), tol);
    t.check("Qt", rel_diff(cf.qt, ci.qt), tol);
    t.check("Qh", rel_diff(cf.qh, ci.qh), tol);

    t.check("norm", rel_diff(h2tau_norm(h, fin).value, h2tau_norm(h, inf).value), tol);
    t.check("error", rel_diff(h2tau_error(h, r, fin).value, h2tau_error(h, r, inf).value), tol);

    const OptimalityReport rf = tl_residuals(h, r, fin);
    const OptimalityReport ri = h2_residuals(h, r);
    t.check("op1", rel_diff(rf.op1.matrix, ri.op1.matrix), tol);
    for (std::size_t i = 0; i < rf.op2.size(); ++i) {
      t.check("op2", rel_diff(rf.op2[i].matrix, ri.op2[i].matrix), tol);
    }
    t.check("op3", rel_diff(rf.op3.matrix, ri.op3.matrix), tol);
    t.check("op4", rel_diff(rf.op4.matrix, ri.op4.matrix), tol);
    t.check("||L_tau|| / op1 scale", norm2(rf.l_tau) / rf.op1.scale, tol);
  }
  return t.outcome("long horizon vs infinite horizon on 5 random pairs");
}

// ---- 6 ----

Outcome criterion6() {
  Tally t;
  Rng rng(1006);
  int attempts = 0;
  for (int k = 0; k < 5; ++k) {
    const LqoSystem h = rng.system(6, 1, 1);
    bool done = false;
    for (int attempt = 0; attempt < 20 && !done; ++attempt) {
      ++attempts;
      const ReductionReport r = homora(h, rng.system(2, 1, 1), {1e-9, 500});
      if (!r.converged) continue;
      done = true;
      t.require("missing residuals", r.residuals.has_value());
      const OptimalityReport& res = *r.residuals;
      t.check("op1/scale", res.op1.relative(), 1e-6);
      for (const Residual& x : res.op2) t.check("op2/scale", x.relative(), 1e-6);
      t.check("op3/scale", res.op3.relative(), 1e-6);
      t.check("op4/scale", res.op4.relative(), 1e-6);
    }
    t.require("no converged run for system " + std::to_string(k), done);
  }
  return t.outcome("HOMORA fixed points on 5 random systems, " + std::to_string(attempts) +
                   " starts");
}

// ---- 7 ----

Outcome criterion7() {
  Tally t;
  Rng rng(1007);
  for (int k = 0; k < 6; ++k) {
    const LqoSystem s = rng.system(rng.integer(3, 7), rng.integer(1, 2), rng.integer(1, 2));
    const int order = rng.integer(1, static_cast<int>(s.states()) - 1);
    const TimeInterval iv = k % 2 == 0 ? TimeInterval::infinite() : TimeInterval(0.1, 1.2);
    const ReductionReport r = iv.is_infinite() ? bt(s, order) : tlbt(s, order, iv);
    const GramianSet g = timelimited_gramians(s, iv);
    const std::vector<double>& sig = r.hsv->sigma;
    const Vector head = Eigen::Map<const Vector>(sig.data(), order);
    const Matrix target = head.asDiagonal();
    t.check("W^T P W - diag", norm2(r.projection.w.transpose() * g.p * r.projection.w - target) /
                                  sig[0],
            1e-8);
    t.check("V^T Q V - diag", norm2(r.projection.v.transpose() * g.q * r.projection.v - target) /
                                  sig[0],
            1e-8);
    for (std::size_t i = 1; i < sig.size(); ++i) t.require("sigma increases", sig[i] <= sig[i - 1]);
  }
  return t.outcome("BT/TLBT balancing on 6 random systems");
}

// ---- 8 ----

Outcome criterion8() {
  Tally t;
  Rng rng(1008);
  for (int k = 0; k < 10; ++k) {
    const LqoSystem h = rng.system(rng.integer(2, 6), rng.integer(1, 2), rng.integer(1, 2));
    const LqoSystem r = rng.system(rng.integer(1, 3), h.inputs(), h.outputs());
    const TimeInterval iv = k % 3 == 2 ? TimeInterval::infinite() : TimeInterval(0.1 * k, 1.0 + k);

    // All three terms from one cross set: Qt/Qh give <H,Hr> and ||Hr||^2, and
    // the full-model Gramian gives ||H||^2.
    const CrossGramianSet c = cross_gramians(h, r, iv);
    const GramianSet g = timelimited_gramians(h, iv);
    const double full = (h.b().transpose() * g.q * h.b()).trace();
    const double inner = (h.b().transpose() * c.qt * r.b()).trace();
    const double rom = (r.b().transpose() * c.qh * r.b()).trace();
    const double direct = h2tau_norm(error_system(h, r), iv).value;
    t.check("||E||^2 expansion", rel_diff(direct * direct, full - 2.0 * inner + rom), 1e-12);
    t.check("h2tau_error", rel_diff(h2tau_error(h, r, iv).value, direct), 1e-10);
  }
  return t.outcome("error expansion and error-system norm on 10 random pairs");
}

// ---- 9 ----

Outcome criterion9() {
  Tally t;
  Rng rng(1009);
  for (int k = 0; k < 10; ++k) {
    const Eigen::Index n = rng.integer(2, 12);
    const Eigen::Index q = rng.integer(1, 8);
    const Matrix a = rng.stable(n);
    const Matrix ar = rng.stable(q);
    const Matrix rhs = rng.normal(n, n);
    const Matrix sym = rhs * rhs.transpose();

    const Matrix xc = solve_lyapunov(a, sym, LyapunovSide::controllability);
    t.check("Lyapunov (ctrb)",
            norm2(a * xc + xc * a.transpose() + sym) / (2 * norm2(a) * norm2(xc) + norm2(sym)),
            1e-10);
    const Matrix xo = solve_lyapunov(a, sym, LyapunovSide::observability);
    t.check("Lyapunov (obsv)",
            norm2(a.transpose() * xo + xo * a + sym) / (2 * norm2(a) * norm2(xo) + norm2(sym)),
            1e-10);

    const Matrix c = rng.normal(n, q);
    const Matrix xs = solve_sylvester(a, ar.transpose(), c);
    t.check("Sylvester", norm2(a * xs + xs * ar.transpose() + c) /
                             ((norm2(a) + norm2(ar)) * norm2(xs) + norm2(c)),
            1e-10);
    // Spectral separation is all the solver needs.
    const Matrix unstable = -rng.stable(q);
    const Matrix xu = solve_sylvester(a, unstable.transpose() + 0.1 * Matrix::Identity(q, q), c);
    const Matrix bu = unstable.transpose() + 0.1 * Matrix::Identity(q, q);
    t.check("Sylvester (separated)",
            norm2(a * xu + xu * bu + c) / ((norm2(a) + norm2(bu)) * norm2(xu) + norm2(c)), 1e-10);
  }
  for (int k = 0; k < 10; ++k) {
    const Matrix a = rng.normal(4, 4);
    const Matrix v = rng.normal(4, 4);
    const double tau = 0.2 + rng.uniform();
    const double h = 1e-6;
    const Matrix fd = (expm(a + h * v, tau) - expm(a - h * v, tau)) / (2 * h);
    t.check("Frechet", rel_diff(expm_frechet(a, v, tau), fd), 1e-5);
  }
  return t.outcome("Lyapunov/Sylvester re-substitution and Frechet derivative");
}

}  // namespace

int main() {
  run_demo_once();
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"example residuals", criterion1},
      {"output error ordering", criterion2},
      {"norm vs quadrature", criterion3},
      {"gradient finite differences", criterion4},
      {"long-horizon limit", criterion5},
      {"HOMORA stationarity", criterion6},
      {"balancing identities", criterion7},
      {"error expansion", criterion8},
      {"matrix equation solvers", criterion9},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = Clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << i + 1 << ' ' << criteria[i].first << ": "
              << o.detail << std::fixed << std::setprecision(2) << " [" << seconds_since(start)
              << " s]" << std::defaultfloat << '\n';
    if (!o.pass) ++failed;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << '\n';
  return failed == 0 ? 0 : 1;
}
