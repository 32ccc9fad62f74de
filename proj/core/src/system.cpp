#include "lqo/system.hpp"

#include <cmath>
#include <sstream>

#include "lqo/errors.hpp"

namespace lqo {

namespace {

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

LqoSystem::LqoSystem(Matrix a, Matrix b, Matrix c, std::vector<Matrix> m)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), m_(std::move(m)) {
  require_square(a_, "A");
  const Eigen::Index n = a_.rows();
  if (n == 0) throw ValidationError("system must have at least one state");
  if (b_.rows() != n) {
    throw ValidationError("B is " + shape(b_) + " but A has " + std::to_string(n) + " states");
  }
  if (c_.cols() != n) {
    throw ValidationError("C is " + shape(c_) + " but A has " + std::to_string(n) + " states");
  }
  if (static_cast<Eigen::Index>(m_.size()) != c_.rows()) {
    throw ValidationError("M length " + std::to_string(m_.size()) + " ≠ p " +
                          std::to_string(c_.rows()));
  }
  for (std::size_t i = 0; i < m_.size(); ++i) {
    if (m_[i].rows() != n || m_[i].cols() != n) {
      throw ValidationError("M[" + std::to_string(i) + "] is " + shape(m_[i]) + ", expected " +
                            std::to_string(n) + "x" + std::to_string(n));
    }
    require_finite(m_[i], "M[" + std::to_string(i) + "]");
  }
  require_finite(a_, "A");
  require_finite(b_, "B");
  require_finite(c_, "C");
}

LqoSystem validate(LqoSystem system) {
  require_hurwitz(system.a(), "A");
  return system;
}

std::vector<std::string> warnings(const LqoSystem& system) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < system.m().size(); ++i) {
    if (!is_symmetric(system.m(i))) {
      out.push_back("M[" + std::to_string(i) +
                    "] is not symmetric; values are used as given");
    }
  }
  if (!system.empty() && !is_hurwitz(system.a())) {
    out.push_back("A is not Hurwitz");
  }
  return out;
}

TimeInterval::TimeInterval(double start, double end) : start_(start), end_(end) {
  if (!std::isfinite(start) || start < 0.0) {
    throw ValidationError("interval start must be finite and nonnegative");
  }
  if (std::isnan(end) || end == -kInfinite || !(end > start)) {
    throw ValidationError("interval end must exceed its start");
  }
}

Vector eval_output(const LqoSystem& system, const Vector& x) {
  if (x.size() != system.states()) {
    throw ValidationError("state vector has length " + std::to_string(x.size()) + ", expected " +
                          std::to_string(system.states()));
  }
  Vector y = system.c() * x;
  for (std::size_t i = 0; i < system.m().size(); ++i) {
    y(static_cast<Eigen::Index>(i)) += x.dot(system.m(i) * x);
  }
  return y;
}

std::vector<double> uniform_grid(double start, double end, double step) {
  if (!(step > 0.0) || !std::isfinite(step) || !(end >= start)) {
    throw ValidationError("grid needs step > 0 and end >= start");
  }
  const auto intervals = static_cast<std::size_t>(std::llround((end - start) / step));
  std::vector<double> grid(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k) {
    grid[k] = start + static_cast<double>(k) * step;
  }
  return grid;
}

Trajectory simulate(const LqoSystem& system, const InputSignal& u, std::span<const double> grid,
                    const Vector& x0, SimulationOptions options) {
  if (grid.empty()) throw ValidationError("simulation grid is empty");
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) {
      throw ValidationError("simulation grid must be strictly increasing");
    }
  }
  if (!(options.max_step > 0.0)) throw ValidationError("simulation step must be positive");
  const Eigen::Index n = system.states();
  Vector x = x0.size() == 0 ? Vector::Zero(n) : x0;
  if (x.size() != n) {
    throw ValidationError("initial state has length " + std::to_string(x.size()) +
                          ", expected " + std::to_string(n));
  }

  auto input = [&](double t) {
    Vector v = u(t);
    if (v.size() != system.inputs()) {
      throw ValidationError("input signal has " + std::to_string(v.size()) +
                            " components, expected " + std::to_string(system.inputs()));
    }
    if (!v.allFinite()) {
      std::ostringstream os;
      os << "input signal is not finite at t = " << t;
      throw ValidationError(os.str());
    }
    return v;
  };
  auto rhs = [&](double t, const Vector& state) -> Vector {
    return system.a() * state + system.b() * input(t);
  };

  Trajectory out;
  out.times.assign(grid.begin(), grid.end());
  out.states.resize(static_cast<Eigen::Index>(grid.size()), n);
  out.outputs.resize(static_cast<Eigen::Index>(grid.size()), system.outputs());

  out.states.row(0) = x.transpose();
  out.outputs.row(0) = eval_output(system, x).transpose();
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double span = grid[k] - grid[k - 1];
    const auto substeps = static_cast<long>(std::ceil(span / options.max_step - 1e-9));
    const double h = span / static_cast<double>(std::max(1L, substeps));
    double t = grid[k - 1];
    for (long s = 0; s < std::max(1L, substeps); ++s) {
      const Vector k1 = rhs(t, x);
      const Vector k2 = rhs(t + 0.5 * h, x + 0.5 * h * k1);
      const Vector k3 = rhs(t + 0.5 * h, x + 0.5 * h * k2);
      const Vector k4 = rhs(t + h, x + h * k3);
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t = grid[k - 1] + static_cast<double>(s + 1) * h;
    }
    const auto row = static_cast<Eigen::Index>(k);
    out.states.row(row) = x.transpose();
    out.outputs.row(row) = eval_output(system, x).transpose();
  }
  return out;
}

void require_compatible(const LqoSystem& full, const LqoSystem& rom) {
  if (full.inputs() != rom.inputs() || full.outputs() != rom.outputs()) {
    throw ValidationError("systems differ in input/output counts: (" +
                          std::to_string(full.inputs()) + ", " + std::to_string(full.outputs()) +
                          ") vs (" + std::to_string(rom.inputs()) + ", " +
                          std::to_string(rom.outputs()) + ")");
  }
}

LqoSystem error_system(const LqoSystem& full, const LqoSystem& rom) {
  require_compatible(full, rom);
  const Eigen::Index n_full = full.states();
  const Eigen::Index n_rom = rom.states();
  const Eigen::Index n = n_full + n_rom;

  Matrix a = Matrix::Zero(n, n);
  a.topLeftCorner(n_full, n_full) = full.a();
  a.bottomRightCorner(n_rom, n_rom) = rom.a();

  Matrix b(n, full.inputs());
  b << full.b(), rom.b();

  Matrix c(full.outputs(), n);
  c << full.c(), -rom.c();

  std::vector<Matrix> m;
  m.reserve(full.m().size());
  for (std::size_t i = 0; i < full.m().size(); ++i) {
    Matrix mi = Matrix::Zero(n, n);
    mi.topLeftCorner(n_full, n_full) = full.m(i);
    mi.bottomRightCorner(n_rom, n_rom) = -rom.m(i);
    m.push_back(std::move(mi));
  }
  return LqoSystem(std::move(a), std::move(b), std::move(c), std::move(m));
}

}  // namespace lqo
