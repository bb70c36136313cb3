// Command-line front end: one subcommand per library operation, records on
// stdout (JSON lines or CSV), effective configuration and errors on stderr.
//
// Exit codes: 0 success, 2 usage/configuration error, 3 numeric or budget
// failure.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cmath>
#include <iostream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hlz/config.hpp"
#include "hlz/errors.hpp"
#include "hlz/harness.hpp"
#include "hlz/omp.hpp"
#include "hlz/report.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

int fail(const std::string& kind, const std::string& message, int code) {
  hlz::Record r;
  r.add("error", kind).add("message", message).add("exit_code", static_cast<std::int64_t>(code));
  std::cerr << hlz::to_json(r) << '\n';
  return code;
}

struct Args {
  bool json = false;
  bool csv = false;
  std::string config_path;
  std::string checkpoint;
  int threads = -1;

  double t = 0.0;
  double from = 0.0;
  double to = 0.0;
  double u = 0.0;
  double gamma_near = 0.0;
  double tan = 0.0;
  double len = 0.0;
  int count = 0;
  std::string formula;
  std::vector<double> t_grid = {1000.0, 3000.0, 10000.0};
};

hlz::IntegratorOptions integrator_options(const hlz::Config& c) {
  hlz::IntegratorOptions o;
  o.terms = c.rs_terms;
  o.height_budget = c.height_budget;
  o.checkpoint_path = c.checkpoint_path;
  o.mu = c.mu;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  Args a;
  CLI::App app{"Hardy Z-function, Hardy-Littlewood integral and Jacob's ladder toolkit"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  auto* json = app.add_flag("--json", a.json, "Write JSON lines (default)");
  app.add_flag("--csv", a.csv, "Write CSV")->excludes(json);
  app.add_option("--config", a.config_path, "key=value configuration file");
  app.add_option("--checkpoint", a.checkpoint, "Checkpoint file for I(T) (created if missing)");
  app.add_option("--threads", a.threads, "OpenMP threads (0: runtime default)")->check(CLI::NonNegativeNumber);

  auto* z = app.add_subcommand("z", "Z(t) with its error bound");
  z->add_option("--t", a.t, "Height")->required();
  auto* zeros = app.add_subcommand("zeros", "Zeros of Z in [from, to]");
  zeros->add_option("--from", a.from)->required();
  zeros->add_option("--to", a.to)->required();
  auto* integrate = app.add_subcommand("integrate", "Integral of Z^2 over [from, to]");
  integrate->add_option("--from", a.from)->required();
  integrate->add_option("--to", a.to)->required();
  auto* hl = app.add_subcommand("hl", "I(T), the integral of Z^2 over [0, T]");
  hl->add_option("--t", a.t)->required();
  auto* ladder = app.add_subcommand("ladder", "phi(T) and dphi/dT");
  ladder->add_option("--t", a.t)->required();
  auto* chord = app.add_subcommand("chord", "Chord of phi/2 over [T, T+U]");
  chord->add_option("--t", a.t)->required();
  chord->add_option("--u", a.u)->required();
  auto* rotate = app.add_subcommand("rotate", "Chord from the zero nearest G with slope X");
  rotate->add_option("--gamma-near", a.gamma_near)->required();
  rotate->add_option("--tan", a.tan)->required();
  auto* verify = app.add_subcommand("verify", "Formula checks over a height grid");
  verify->add_option("formula", a.formula, "Formula id (F1_1 F1_2 F1_5 C2_2 C2_3 C2_4 L3_1 F3_5 F4_3) or all")
      ->required();
  verify->add_option("--t-grid", a.t_grid, "Comma-separated heights")->delimiter(',');
  auto* scan = app.add_subcommand("scan-mean", "Intervals whose mean of Z^2 is close to ln T");
  scan->add_option("--t", a.t)->required();
  scan->add_option("--len", a.len)->required();
  scan->add_option("--count", a.count)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), kExitUsage);
  }

  hlz::Config cfg;
  try {
    if (!a.config_path.empty()) hlz::load_config_file(cfg, a.config_path);
    hlz::apply_environment(cfg);
    if (!a.checkpoint.empty()) cfg.checkpoint_path = a.checkpoint;
    if (a.threads >= 0) cfg.threads = a.threads;
    hlz::validate(cfg);
  } catch (const hlz::ConfigError& e) {
    return fail("config", e.what(), kExitUsage);
  }
  std::cerr << "# effective configuration\n" << hlz::to_text(cfg);
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);

  hlz::RecordWriter out(std::cout, a.csv ? hlz::OutputFormat::csv : hlz::OutputFormat::json);
  try {
    std::unique_ptr<hlz::Integrator> integrator;
    auto get_integrator = [&]() -> hlz::Integrator& {
      if (!integrator) integrator = std::make_unique<hlz::Integrator>(integrator_options(cfg));
      return *integrator;
    };
    auto make_ladder = [&] { return hlz::Ladder(get_integrator(), cfg.mu, hlz::EpsilonConfig{cfg.epsilon}, cfg.tol); };

    if (z->parsed()) {
      const hlz::ZSample s = hlz::z_eval(a.t, cfg.rs_terms);
      out.write(hlz::Record().add("t", s.t).add("z", s.z).add("z2", s.z2).add("err", s.err));
    } else if (zeros->parsed()) {
      for (const auto& zr : hlz::zeros_in(a.from, a.to, cfg.rs_terms)) {
        out.write(hlz::Record().add("gamma", zr.gamma).add("bracket_width", zr.bracket_width));
      }
    } else if (integrate->parsed()) {
      const auto r = get_integrator().integrate_z2({a.from, a.to}, cfg.tol);
      out.write(hlz::Record()
                    .add("a", a.from)
                    .add("b", a.to)
                    .add("value", r.value)
                    .add("err_est", r.err_est)
                    .add("evals", r.evals)
                    .add("tolerance_met", r.tolerance_met));
    } else if (hl->parsed()) {
      const auto r = get_integrator().hl_integral(a.t, cfg.tol);
      out.write(hlz::Record()
                    .add("T", a.t)
                    .add("value", r.value)
                    .add("err_est", r.err_est)
                    .add("evals", r.evals)
                    .add("tolerance_met", r.tolerance_met));
    } else if (ladder->parsed()) {
      auto l = make_ladder();
      const auto p = l.solve_phi(a.t);
      out.write(hlz::Record().add("T", p.T).add("phi", p.phi).add("dphi_dT", p.dphi_dT).add("residual", p.residual));
    } else if (chord->parsed()) {
      auto l = make_ladder();
      const auto c = l.chord(a.t, a.u);
      out.write(hlz::Record()
                    .add("N", c.N)
                    .add("M", c.M)
                    .add("tan_alpha", c.tan_alpha)
                    .add("is_fundamental", c.is_fundamental)
                    .add("is_almost_parallel", c.is_almost_parallel));
    } else if (rotate->parsed()) {
      if (!(a.tan > 0.0 && a.tan < 1.0)) return fail("usage", "--tan must lie in (0, 1)", kExitUsage);
      auto l = make_ladder();
      const hlz::Zero g = hlz::nearest_zero(a.gamma_near, cfg.rs_terms);
      const double eta = std::min({hlz::kDefaultParallelEta, a.tan, 1.0 - a.tan});
      const auto c = l.find_chord_with_angle(g, a.tan, eta);
      const double U = c.M - c.N;
      const double mean = get_integrator().integrate_z2({c.N, c.M}, cfg.tol).value;
      out.write(hlz::Record()
                    .add("gamma", g.gamma)
                    .add("U", U)
                    .add("U0", l.eps().u0(g.gamma))
                    .add("tan_alpha", c.tan_alpha)
                    .add("mean_ratio", mean / (U * std::log(g.gamma))));
    } else if (verify->parsed()) {
      std::vector<hlz::FormulaId> ids;
      if (a.formula == "all") {
        ids.assign(std::begin(hlz::kAllFormulas), std::end(hlz::kAllFormulas));
      } else if (auto id = hlz::parse_formula_id(a.formula)) {
        ids.push_back(*id);
      } else {
        return fail("usage", "unknown formula id '" + a.formula + "'", kExitUsage);
      }
      if (a.t_grid.empty()) return fail("usage", "--t-grid is empty", kExitUsage);
      auto l = make_ladder();
      hlz::HarnessOptions ho;
      ho.sieve_budget = cfg.sieve_budget;
      hlz::Harness h(l, ho);
      for (auto id : ids) {
        for (const auto& r : h.verify(id, a.t_grid)) out.write(hlz::to_record(r));
      }
    } else if (scan->parsed()) {
      auto l = make_ladder();
      for (const auto& iv : l.find_intervals_with_mean(a.t, a.len, a.count)) {
        const double mean = get_integrator().integrate_z2(iv, cfg.tol).value / (iv.b - iv.a);
        out.write(hlz::Record().add("N", iv.a).add("M", iv.b).add("mean", mean).add("mean_over_lnT", mean / std::log(a.t)));
      }
    }
  } catch (const hlz::BudgetError& e) {
    return fail("budget", e.what(), kExitNumeric);
  } catch (const hlz::ProximityError& e) {
    return fail("proximity", e.what(), kExitNumeric);
  } catch (const hlz::NumericError& e) {
    return fail("numeric", e.what(), kExitNumeric);
  } catch (const hlz::CheckpointError& e) {
    return fail("checkpoint", e.what(), kExitUsage);
  } catch (const std::domain_error& e) {
    return fail("usage", e.what(), kExitUsage);
  } catch (const std::invalid_argument& e) {
    return fail("usage", e.what(), kExitUsage);
  } catch (const std::exception& e) {
    return fail("numeric", e.what(), kExitNumeric);
  }
  std::cout.flush();
  return 0;
}
