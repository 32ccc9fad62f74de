#include "lqo/optimality.hpp"

#include "lqo/errors.hpp"

namespace lqo {

namespace {

Matrix printed_integral(const Matrix& a, const Matrix& v, double t) {
  const Eigen::Index n = a.rows();
  Matrix block = Matrix::Zero(2 * n, 2 * n);
  block.topLeftCorner(n, n) = a;
  block.topRightCorner(n, n) = v;
  block.bottomRightCorner(n, n) = a + v;
  return expm(block, t).topRightCorner(n, n);
}

Residual make_residual(Matrix first, const Matrix& second) {
  Residual r;
  r.scale = norm2(first) + norm2(second);
  r.matrix = std::move(first) + second;
  r.norm = norm2(r.matrix);
  return r;
}

// Everything shared by the gradient and the residual assembly.
struct Auxiliary {
  CrossGramianSet g;
  Matrix pt_inf;
  Matrix ph_inf;
  Matrix zbar;
  Matrix zbar_n;
  Matrix w;  // boundary term, zero on the infinite horizon
};

Auxiliary auxiliary(const LqoSystem& full, const LqoSystem& rom, const TimeInterval& interval,
                    FrechetVariant variant) {
  Auxiliary x;
  x.g = cross_gramians(full, rom, interval);

  const Matrix& a = full.a();
  const Matrix& ar = rom.a();
  const Matrix& b = full.b();
  const Matrix& br = rom.b();
  const Matrix& c = full.c();
  const Matrix& cr = rom.c();

  const SylvesterSolver cross_ctrl(a, ar.transpose());
  const SylvesterSolver rom_ctrl(ar, ar.transpose());
  const SylvesterSolver cross_obs(a.transpose(), ar);
  const SylvesterSolver rom_obs(ar.transpose(), ar);

  x.pt_inf = cross_ctrl.solve(b * br.transpose());
  x.ph_inf = symmetrize(rom_ctrl.solve(br * br.transpose()));
  x.zbar = cross_obs.solve(quadratic_sum(full.m(), x.g.pt, rom.m()));
  const Matrix zn_rhs = quadratic_sum(rom.m(), x.g.ph, rom.m());
  x.zbar_n = rom_obs.solve(zn_rhs);
  if (is_symmetric(zn_rhs)) x.zbar_n = symmetrize(x.zbar_n);

  x.w = Matrix::Zero(ar.rows(), ar.cols());
  if (interval.is_infinite()) return x;

  // The end point enters with +, a nonzero start point with -.
  struct Boundary {
    double t;
    double sign;
  };
  const Boundary boundaries[] = {{interval.end(), 1.0}, {interval.start(), -1.0}};
  for (const Boundary& bd : boundaries) {
    if (bd.t == 0.0) continue;
    const Matrix s = expm(a, bd.t);
    const Matrix sr = expm(ar, bd.t);
    Matrix v = br * b.transpose() * s.transpose() * x.zbar -
               br * br.transpose() * sr.transpose() * x.zbar_n +
               x.pt_inf.transpose() * s.transpose() * c.transpose() * cr -
               x.ph_inf * sr.transpose() * cr.transpose() * cr;
    for (std::size_t i = 0; i < full.m().size(); ++i) {
      v += x.pt_inf.transpose() * s.transpose() * full.m(i) * x.g.pt * rom.m(i) -
           x.ph_inf * sr.transpose() * rom.m(i) * x.g.ph * rom.m(i);
    }
    const Matrix term = variant == FrechetVariant::exact ? expm_frechet(ar, v, bd.t)
                                                         : printed_integral(ar, v, bd.t);
    x.w += bd.sign * term;
  }
  return x;
}

std::vector<Residual> quadratic_residuals(const LqoSystem& full, const LqoSystem& rom,
                                          const Matrix& pt, const Matrix& ph) {
  std::vector<Residual> out;
  for (std::size_t i = 0; i < full.m().size(); ++i) {
    out.push_back(make_residual(-pt.transpose() * full.m(i) * pt, ph * rom.m(i) * ph));
  }
  return out;
}

void fill_common(OptimalityReport& r, const LqoSystem& full, const LqoSystem& rom,
                 const CrossGramianSet& g) {
  const Matrix k = g.combined_tilde();
  const Matrix kh = g.combined_hat();
  r.petrov_galerkin_term = -k.transpose() * g.pt + kh * g.ph;
  r.op2 = quadratic_residuals(full, rom, g.pt, g.ph);
  r.op3 = make_residual(-k.transpose() * full.b(), kh * rom.b());
  r.op4 = make_residual(-full.c() * g.pt, rom.c() * g.ph);
}

}  // namespace

std::string to_string(FrechetVariant variant) {
  return variant == FrechetVariant::exact ? "exact" : "printed_integral";
}

double objective_j(const LqoSystem& full, const LqoSystem& rom, const TimeInterval& interval) {
  const CrossGramianSet g = cross_gramians(full, rom, interval);
  return (-2.0 * full.b().transpose() * g.qt * rom.b() + rom.b().transpose() * g.qh * rom.b())
      .trace();
}

GradientReport gradients(const LqoSystem& full, const LqoSystem& rom, const TimeInterval& interval,
                         FrechetVariant variant) {
  require_compatible(full, rom);
  const Auxiliary x = auxiliary(full, rom, interval, variant);
  const CrossGramianSet& g = x.g;

  GradientReport out;
  out.objective =
      (-2.0 * full.b().transpose() * g.qt * rom.b() + rom.b().transpose() * g.qh * rom.b()).trace();
  out.grad_a = 2.0 * (-g.qt.transpose() * x.pt_inf + g.qh * x.ph_inf -
                      x.zbar.transpose() * g.pt + x.zbar_n * g.ph + x.w.transpose());
  out.grad_b = 2.0 * (-g.combined_tilde().transpose() * full.b() + g.combined_hat() * rom.b());
  out.grad_c = 2.0 * (-full.c() * g.pt + rom.c() * g.ph);
  for (const Residual& r : quadratic_residuals(full, rom, g.pt, g.ph)) {
    out.grad_m.push_back(2.0 * r.matrix.transpose());
  }
  return out;
}

OptimalityReport tl_residuals(const LqoSystem& full, const LqoSystem& rom,
                              const TimeInterval& interval, FrechetVariant variant) {
  require_compatible(full, rom);
  const Auxiliary x = auxiliary(full, rom, interval, variant);
  const CrossGramianSet& g = x.g;

  OptimalityReport r;
  r.interval = interval;
  r.limited = true;
  r.variant = variant;
  fill_common(r, full, rom, g);

  r.splits.p12 = x.pt_inf - g.pt;
  r.splits.pn = x.ph_inf - g.ph;
  r.splits.z12 = x.zbar - g.zt;
  r.splits.zn = x.zbar_n - g.zh;
  r.l_tau = -g.qt.transpose() * r.splits.p12 + g.qh * r.splits.pn -
            r.splits.z12.transpose() * g.pt + r.splits.zn * g.ph + x.w.transpose();

  const Matrix k = g.combined_tilde();
  const Matrix kh = g.combined_hat();
  r.op1.matrix = r.petrov_galerkin_term + r.l_tau;
  r.op1.norm = norm2(r.op1.matrix);
  r.op1.scale = norm2(k.transpose() * g.pt) + norm2(kh * g.ph);
  return r;
}

OptimalityReport h2_residuals(const LqoSystem& full, const LqoSystem& rom) {
  require_compatible(full, rom);
  const CrossGramianSet g = cross_gramians(full, rom, TimeInterval::infinite());

  OptimalityReport r;
  r.interval = TimeInterval::infinite();
  r.limited = false;
  fill_common(r, full, rom, g);
  const Matrix k = g.combined_tilde();
  const Matrix kh = g.combined_hat();
  r.op1 = make_residual(-k.transpose() * g.pt, kh * g.ph);
  r.l_tau = Matrix::Zero(rom.states(), rom.states());
  return r;
}

ProjectionPremiseDiagnostic projection_premise_check(const LqoSystem& full, const LqoSystem& rom,
                                  const ProjectionPair& pair, const TimeInterval& interval) {
  require_compatible(full, rom);
  if (pair.v.rows() != full.states() || pair.w.rows() != full.states() ||
      pair.v.cols() != rom.states() || pair.w.cols() != rom.states()) {
    throw ValidationError("projection pair does not match the system dimensions");
  }
  ProjectionPremiseDiagnostic d;
  d.quadratic_premise.assign(full.m().size(), 0.0);

  std::vector<double> times{interval.start()};
  if (!interval.is_infinite()) times.push_back(interval.end());
  for (double t : times) {
    const Matrix s = expm(full.a(), t);
    const Matrix sr = expm(rom.a(), t);
    d.input_premise =
        std::max(d.input_premise, norm2(pair.w.transpose() * s * full.b() - sr * rom.b()));
    d.output_premise =
        std::max(d.output_premise, norm2(full.c() * s * pair.v - rom.c() * sr));
    for (std::size_t i = 0; i < full.m().size(); ++i) {
      d.quadratic_premise[i] =
          std::max(d.quadratic_premise[i],
                   norm2(pair.v.transpose() * full.m(i) * s * pair.v - rom.m(i) * sr));
    }
  }

  const CrossGramianSet g = cross_gramians(full, rom, interval);
  const Matrix eye = Matrix::Identity(rom.states(), rom.states());
  d.controllability_conclusion = norm2(g.ph - eye);
  d.observability_conclusion = norm2(g.combined_hat() - eye);
  return d;
}

}  // namespace lqo
