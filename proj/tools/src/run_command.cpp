#include "lqo_cli/run_command.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lqo/lqo.hpp"
#include "lqo_cli/demo.hpp"

namespace lqo::cli {

namespace {

using nlohmann::json;

double parse_time(const std::string& text, const char* flag) {
  std::string lower = text;
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "inf" || lower == "infinity") return TimeInterval::kInfinite;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    throw UsageError(std::string(flag) + " expects a number or 'inf', got '" + text + "'", flag);
  }
  return v;
}

json interval_json(const TimeInterval& t) {
  json j;
  j["t0"] = t.start();
  if (t.is_infinite()) {
    j["t1"] = "inf";
  } else {
    j["t1"] = t.end();
  }
  return j;
}

void emit_warnings(std::ostream& err, const LqoSystem& system, const std::string& label) {
  for (const std::string& w : warnings(system)) err << "warning: " << label << ": " << w << '\n';
}

struct IntervalFlags {
  std::string t0 = "0";
  std::string t1;

  void add_to(CLI::App* cmd, bool t1_required) {
    cmd->add_option("--t0", t0, "interval start in seconds")->capture_default_str();
    auto* opt = cmd->add_option("--t1", t1, "interval end in seconds, or 'inf'");
    if (t1_required) opt->required();
  }

  TimeInterval interval() const {
    return TimeInterval(parse_time(t0, "--t0"), parse_time(t1.empty() ? "inf" : t1, "--t1"));
  }

  TimeInterval finite_interval(const char* what) const {
    const TimeInterval t = interval();
    if (t.is_infinite()) throw UsageError(std::string(what) + " needs a finite --t1", "--t1");
    return t;
  }
};

void write_or_print(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

int cmd_reduce(const std::string& method_name, int order, const std::string& system_path,
               const std::string& init_path, const IntervalFlags& flags, double tol, int max_iter,
               const std::string& out_path, const std::string& report_path, std::ostream& out,
               std::ostream& err) {
  const Method method = [&] {
    try {
      return parse_method(method_name);
    } catch (const ValidationError& e) {
      throw UsageError(e.what(), "--method");
    }
  }();
  const LqoSystem full = load_system(system_path, true);
  emit_warnings(err, full, "system");
  const IterationOptions iter{tol, max_iter};

  ReductionReport report;
  switch (method) {
    case Method::bt:
    case Method::tlbt: {
      if (order <= 0) throw UsageError("--order is required for " + method_name, "--order");
      report = method == Method::bt ? bt(full, order)
                                    : tlbt(full, order, flags.interval());
      break;
    }
    case Method::homora:
    case Method::tlhnoia: {
      if (init_path.empty()) throw UsageError("--init is required for " + method_name, "--init");
      const LqoSystem init = load_system(init_path, false);
      emit_warnings(err, init, "initial guess");
      if (order > 0 && order != init.states()) {
        throw UsageError("--order " + std::to_string(order) + " disagrees with the " +
                             std::to_string(init.states()) + "-state initial guess",
                         "--order");
      }
      report = method == Method::homora
                   ? homora(full, init, iter)
                   : tlhnoia(full, init, flags.finite_interval("tlhnoia"), iter);
      break;
    }
  }

  if (!out_path.empty()) save_system(out_path, report.rom);
  write_or_print(report_path, serialize_report(report), out);
  for (const std::string& d : report.diagnostics) err << "note: " << d << '\n';

  if (report.termination == Termination::non_hurwitz_abort ||
      report.termination == Termination::numerical_abort) {
    throw NumericalError(method_name + " stopped early (" + to_string(report.termination) +
                             "); the last accepted iterate was written",
                         report.diagnostics.empty() ? std::string() : report.diagnostics.back());
  }
  if (!report.converged) {
    err << "warning: " << method_name << " did not converge within " << max_iter
        << " iterations\n";
  }
  return kSuccess;
}

int cmd_norm(const std::string& system_path, const IntervalFlags& flags, int quadrature,
             std::ostream& out, std::ostream& err) {
  const LqoSystem sys = load_system(system_path, true);
  emit_warnings(err, sys, "system");
  const TimeInterval t = flags.interval();
  const NormReport r = h2tau_norm(sys, t);
  json doc{{"value", r.value}, {"method", "gramian"}, {"interval", interval_json(t)}};
  if (quadrature > 0) {
    if (t.is_infinite()) throw UsageError("--quadrature needs a finite --t1", "--quadrature");
    const NormReport q = h2tau_norm_quadrature(sys, t, quadrature);
    const double rel = r.value > 0.0 ? std::abs(q.value - r.value) / r.value : std::abs(q.value);
    doc["quadrature"] = {{"value", q.value},
                         {"resolution", quadrature + quadrature % 2},
                         {"relative_difference", rel}};
  }
  out << doc.dump(2) << '\n';
  return kSuccess;
}

int cmd_error(const std::string& system_path, const std::string& rom_path,
              const IntervalFlags& flags, std::ostream& out, std::ostream& err) {
  const LqoSystem full = load_system(system_path, true);
  const LqoSystem rom = load_system(rom_path, false);
  emit_warnings(err, full, "system");
  emit_warnings(err, rom, "rom");
  const TimeInterval t = flags.interval();
  const NormReport r = h2tau_error(full, rom, t);
  json doc{{"value", r.value}, {"interval", interval_json(t)}};
  doc["decomposition"] = {{"full_squared", r.decomposition->full},
                          {"inner", r.decomposition->inner},
                          {"rom_squared", r.decomposition->rom}};
  out << doc.dump(2) << '\n';
  return kSuccess;
}

int cmd_residuals(const std::string& system_path, const std::string& rom_path,
                  const IntervalFlags& flags, const std::string& horizon, std::ostream& out,
                  std::ostream& err) {
  const LqoSystem full = load_system(system_path, true);
  const LqoSystem rom = load_system(rom_path, false);
  emit_warnings(err, rom, "rom");
  OptimalityReport r;
  if (horizon == "limited") {
    r = tl_residuals(full, rom, flags.finite_interval("--horizon limited"));
  } else {
    r = h2_residuals(full, rom);
  }
  out << serialize_residuals(r);
  return kSuccess;
}

int cmd_hsv(const std::string& system_path, const IntervalFlags& flags, std::ostream& out,
            std::ostream& err) {
  const LqoSystem sys = load_system(system_path, true);
  emit_warnings(err, sys, "system");
  const TimeInterval t = flags.interval();
  const GramianSet g = timelimited_gramians(sys, t);
  const HankelSpectrum h = hankel_singular_values(g.p, g.q);
  json doc{{"sigma", h.sigma}, {"clamp_magnitude", h.clamp_magnitude},
           {"interval", interval_json(t)}};
  out << doc.dump(2) << '\n';
  return kSuccess;
}

int cmd_simulate(const std::string& system_path, const std::string& rom_path,
                 const std::vector<std::string>& inputs, const IntervalFlags& flags, double step,
                 double substep, const std::string& out_path, std::ostream& out,
                 std::ostream& err) {
  const LqoSystem full = load_system(system_path, true);
  emit_warnings(err, full, "system");
  const TimeInterval t = flags.finite_interval("simulate");
  if (!(step > 0.0)) throw UsageError("--step must be positive", "--step");

  std::vector<SignalExpr> exprs;
  for (const std::string& s : inputs) exprs.push_back(parse_signal(s));
  const InputSignal u = make_input(exprs, full.inputs());
  const std::vector<double> grid = uniform_grid(t.start(), t.end(), step);
  SimulationOptions sim;
  sim.max_step = substep > 0.0 ? substep : std::min(step, 1e-3);

  std::ostringstream csv;
  if (rom_path.empty()) {
    write_trajectory_csv(csv, simulate(full, u, grid, Vector(), sim));
  } else {
    const LqoSystem rom = load_system(rom_path, false);
    emit_warnings(err, rom, "rom");
    write_comparison_csv(csv, compare_outputs(full, rom, u, grid, sim));
  }
  write_or_print(out_path, csv.str(), out);
  return kSuccess;
}

int cmd_demo(const DemoOptions& options, std::ostream& out) {
  const DemoResult result = run_demo(options);
  const ReductionReport& tl = result.reports.at("tlhnoia");

  out << std::setprecision(6);
  out << "tlhnoia: " << (tl.converged ? "converged" : "not converged") << " after "
      << tl.iterations << " iterations\n";
  if (tl.residuals) {
    double op2 = 0.0;
    for (const Residual& r : tl.residuals->op2) op2 = std::max(op2, r.norm);
    out << "  ||op1||_2 = " << tl.residuals->op1.norm << "  (||L_tau||_2 = "
        << norm2(tl.residuals->l_tau) << ")\n";
    out << "  ||op2||_2 = " << op2 << '\n';
    out << "  ||op3||_2 = " << tl.residuals->op3.norm << '\n';
    out << "  ||op4||_2 = " << tl.residuals->op4.norm << '\n';
  }
  out << "poles:";
  const ComplexVector& poles = tl.pole_history.back();
  for (Eigen::Index i = 0; i < poles.size(); ++i) {
    out << ' ' << poles(i).real() << (poles(i).imag() < 0 ? "-" : "+") << std::abs(poles(i).imag())
        << 'i';
  }
  out << "\nmean relative output error over [0, " << options.t_end << "] s:\n";
  for (const char* name : {"bt", "tlbt", "homora", "tlhnoia"}) {
    out << "  " << std::left << std::setw(8) << name << ' ' << result.mean_rel_err.at(name);
    const ReductionReport& r = result.reports.at(name);
    if (r.termination == Termination::non_hurwitz_abort) out << "  (last stable iterate)";
    out << '\n';
  }
  if (!options.out_dir.empty()) {
    out << "wrote outputs_<method>.csv and report_<method>.json to " << options.out_dir.string()
        << '\n';
  }
  return kSuccess;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::usage: return kUsage;
    case ErrorKind::validation: return kValidation;
    case ErrorKind::numerical: return kNumerical;
  }
  return kNumerical;
}

int report_error(std::ostream& err, int code, const std::string& message,
                 const std::string& context) {
  json doc{{"code", code}, {"message", message}, {"context", context}};
  err << doc.dump() << '\n';
  return code;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Model order reduction for linear systems with quadratic outputs", "lqo"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  // reduce
  std::string method, system_path, init_path, rom_path, out_path, report_path;
  int order = 0;
  double tol = 1e-6;
  int max_iter = 200;
  IntervalFlags flags;
  auto* reduce = app.add_subcommand("reduce", "compute a reduced-order model");
  reduce->add_option("--method", method, "bt | tlbt | homora | tlhnoia")->required();
  reduce->add_option("--order", order, "reduced order (bt, tlbt)");
  reduce->add_option("--system", system_path, "full model JSON")->required();
  reduce->add_option("--init", init_path, "initial ROM JSON (homora, tlhnoia)");
  flags.add_to(reduce, false);
  reduce->add_option("--tol", tol, "pole-change tolerance")->capture_default_str();
  reduce->add_option("--max-iter", max_iter, "iteration cap")->capture_default_str();
  reduce->add_option("--out", out_path, "write the ROM as JSON");
  reduce->add_option("--report", report_path, "write the report JSON (default: stdout)");

  // norm
  int quadrature = 0;
  auto* norm = app.add_subcommand("norm", "time-limited H2 norm");
  norm->add_option("--system", system_path, "system JSON")->required();
  flags.add_to(norm, true);
  norm->add_option("--quadrature", quadrature, "also evaluate by quadrature with N subintervals");

  auto* error = app.add_subcommand("error", "time-limited H2 norm of H - Hrom");
  error->add_option("--system", system_path, "full model JSON")->required();
  error->add_option("--rom", rom_path, "reduced model JSON")->required();
  flags.add_to(error, true);

  std::string horizon = "limited";
  auto* residuals = app.add_subcommand("residuals", "optimality-condition residuals");
  residuals->add_option("--system", system_path, "full model JSON")->required();
  residuals->add_option("--rom", rom_path, "reduced model JSON")->required();
  flags.add_to(residuals, false);
  residuals->add_option("--horizon", horizon, "limited | infinite")
      ->check(CLI::IsMember({"limited", "infinite"}))
      ->capture_default_str();

  auto* hsv = app.add_subcommand("hsv", "time-limited Hankel singular values");
  hsv->add_option("--system", system_path, "system JSON")->required();
  flags.add_to(hsv, true);

  std::vector<std::string> inputs;
  double step = 1e-3;
  double substep = 0.0;
  auto* simulate_cmd = app.add_subcommand("simulate", "simulate and write CSV");
  simulate_cmd->add_option("--system", system_path, "full model JSON")->required();
  simulate_cmd->add_option("--rom", rom_path, "reduced model JSON to compare against");
  simulate_cmd->add_option("--input", inputs, "u(t) expression; repeat once per input")
      ->required();
  flags.add_to(simulate_cmd, true);
  simulate_cmd->add_option("--step", step, "output grid spacing")->capture_default_str();
  simulate_cmd->add_option("--substep", substep, "RK4 step bound (default min(step, 1e-3))");
  simulate_cmd->add_option("--out", out_path, "CSV path (default: stdout)");

  DemoOptions demo;
  std::string demo_dir = "demo_out";
  auto* demo_cmd = app.add_subcommand("demo", "run the sixth-order example end to end");
  demo_cmd->add_option("--out-dir", demo_dir, "directory for CSVs and reports")
      ->capture_default_str();
  demo_cmd->add_option("--step", demo.step, "simulation grid spacing")->capture_default_str();
  demo_cmd->add_option("--tol", demo.tol, "pole-change tolerance")->capture_default_str();
  demo_cmd->add_option("--max-iter", demo.max_iter, "iteration cap")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    return report_error(err, kUsage, e.what(), "arguments");
  }

  try {
    if (reduce->parsed()) {
      return cmd_reduce(method, order, system_path, init_path, flags, tol, max_iter, out_path,
                        report_path, out, err);
    }
    if (norm->parsed()) return cmd_norm(system_path, flags, quadrature, out, err);
    if (error->parsed()) return cmd_error(system_path, rom_path, flags, out, err);
    if (residuals->parsed()) {
      return cmd_residuals(system_path, rom_path, flags, horizon, out, err);
    }
    if (hsv->parsed()) return cmd_hsv(system_path, flags, out, err);
    if (simulate_cmd->parsed()) {
      return cmd_simulate(system_path, rom_path, inputs, flags, step, substep, out_path, out,
                          err);
    }
    if (demo_cmd->parsed()) {
      demo.out_dir = demo_dir;
      return cmd_demo(demo, out);
    }
  } catch (const Error& e) {
    return report_error(err, exit_code(e.kind()), e.what(), e.context());
  } catch (const std::filesystem::filesystem_error& e) {
    return report_error(err, kValidation, e.what(), e.path1().string());
  } catch (const std::exception& e) {
    return report_error(err, kNumerical, e.what(), "");
  }
  return report_error(err, kUsage, "no subcommand given", "arguments");
}

}  // namespace lqo::cli
