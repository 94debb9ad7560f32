#include "tripod/cli/experiments.hpp"

#include "tripod/analysis.hpp"
#include "tripod/analytic.hpp"
#include "tripod/goursat.hpp"
#include "tripod/maxwell_bloch.hpp"
#include "tripod/protocol.hpp"
#include "tripod/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <thread>

namespace tripod::cli {

using nlohmann::json;

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

namespace {

std::string cell(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

struct Tuple {
  double nu0_tau_p;
  double zeta_L_over_tau_p;
};

std::string describe(const Tuple& t) {
  return "nu0_tau_p=" + format_number(t.nu0_tau_p) + ", zeta_L_over_tau_p=" + format_number(t.zeta_L_over_tau_p);
}

std::string suffix(const Tuple& t) {
  return "nu" + format_number(t.nu0_tau_p) + "_zl" + format_number(t.zeta_L_over_tau_p);
}

std::vector<Tuple> tuples(const ExperimentConfig& c) {
  std::vector<Tuple> out;
  for (double nu : c.nu0_tau_p)
    for (double zl : c.zeta_L_over_tau_p) out.push_back({nu, zl});
  return out;
}

/// Runs job(k) for k < n on a small pool and returns the results in order.
template <class R>
std::vector<R> parallel_map(std::size_t n, const std::function<R(std::size_t)>& job) {
  std::vector<R> out(n);
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
  std::vector<std::future<void>> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t k = w; k < n; k += workers) out[k] = job(k);
    }));
  std::exception_ptr first;
  for (auto& f : pool) {
    try {
      f.get();
    } catch (...) {
      if (!first) first = std::current_exception();
    }
  }
  if (first) std::rethrow_exception(first);
  return out;
}

template <class F>
auto guarded(const Tuple& t, F&& f) {
  try {
    return f();
  } catch (const SolverError&) {
    throw;
  } catch (const std::exception& e) {
    throw SolverError(describe(t) + ": " + e.what());
  }
}

std::string header(const ExperimentConfig& c, json extra) {
  extra["config"] = to_json(c);
  return "# " + extra.dump() + "\n";
}

analytic::ConvolutionQuadrature quadrature(const ExperimentConfig& c) {
  analytic::ConvolutionQuadrature q;
  q.rel_tol = c.rel_tol;
  return q;
}

std::vector<double> tau_samples(const ExperimentConfig& c) {
  std::vector<double> t;
  for (std::size_t k = 0; k < c.tau_samples; ++k)
    t.push_back(c.tau_max * static_cast<double>(k) / static_cast<double>(c.tau_samples - 1));
  if (c.long_tail) {
    const double r = std::log(c.long_tail_max / c.tau_max);
    for (std::size_t k = 1; k <= c.long_tail_samples; ++k)
      t.push_back(c.tau_max * std::exp(r * static_cast<double>(k) / static_cast<double>(c.long_tail_samples)));
  }
  return t;
}

double pulse_peak(const BoundarySignal& s) {
  const double end = s.support_end();
  auto f = [&](double t) { return std::abs(s(t)); };
  double best = 0.0, best_t = 0.0;
  const int n = 4000;
  for (int k = 0; k <= n; ++k) {
    const double t = end * k / n;
    if (f(t) > best) best = f(t), best_t = t;
  }
  const double h = end / n;
  return std::max(best, f(quad::golden_max(f, std::max(0.0, best_t - h), best_t + h, 1e-12 * end)));
}

PolaritonField goursat_field(const ExperimentConfig& c, const BoundarySignal& s, double zeta_L, double tau_end,
                             std::size_t n_tau, std::size_t n_zeta, bool richardson) {
  pde::GoursatScheme scheme;
  scheme.richardson = richardson;
  const Grid g{n_zeta, n_tau, zeta_L, tau_end};
  return pde::solve_goursat(s, DetuningProfile::constant(s.nu0()), c.beta, g, scheme);
}

// ---------------------------------------------------------------- efficiency

RunResult run_efficiency(const ExperimentConfig& c) {
  const auto ts = tuples(c);
  const double tp = c.pulse.tau_p;
  const auto q = quadrature(c);
  auto job = [&](std::size_t k) {
    const Tuple t = ts[k];
    return guarded(t, [&] {
      const BoundarySignal s(c.pulse, t.nu0_tau_p / tp, c.beta);
      const double zl = t.zeta_L_over_tau_p * tp;
      if (c.solver == Solver::Goursat) {
        const double tau_end = (c.long_tail ? c.long_tail_max : c.tau_max) * tp;
        const auto f = goursat_field(c, s, zl, tau_end, c.grid_n_tau, c.grid_n_zeta, c.richardson);
        return analysis::efficiency_curve(f, s);
      }
      std::vector<double> taus = tau_samples(c);
      for (auto& x : taus) x *= tp;
      return analysis::efficiency_curve(s, zl, taus, q);
    });
  };
  const auto curves = parallel_map<analysis::EfficiencyCurve>(ts.size(), job);

  RunResult r;
  r.summary = {{"experiment", to_string(c.experiment)}, {"solver", to_string(c.solver)}, {"curves", json::array()}};
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const auto& cv = curves[k];
    json info = {{"nu0_tau_p", ts[k].nu0_tau_p},
                 {"zeta_L_over_tau_p", ts[k].zeta_L_over_tau_p},
                 {"provenance", to_string(cv.provenance)},
                 {"normalization", cv.normalization},
                 {"max_eta", cv.max()},
                 {"tau_at_max_over_tau_p", cv.argmax() / tp}};
    std::string body = header(c, info) + "tau_over_tau_p,eta\n";
    for (std::size_t i = 0; i < cv.tau.size(); ++i) body += format_number(cv.tau[i] / tp) + "," + cell(cv.eta[i]) + "\n";
    const std::string name = "eta_" + suffix(ts[k]) + ".csv";
    r.files.push_back({name, std::move(body)});
    info["file"] = name;
    r.summary["curves"].push_back(info);
  }
  return r;
}

// --------------------------------------------------------------- convergence

RunResult run_convergence(const ExperimentConfig& c) {
  const auto ts = tuples(c);
  const double tp = c.pulse.tau_p;
  const auto q = quadrature(c);
  RunResult r;
  r.summary = {{"experiment", to_string(c.experiment)}, {"solver", to_string(c.solver)}, {"runs", json::array()}};
  for (const auto& t : ts) {
    json run = guarded(t, [&] {
      const BoundarySignal s(c.pulse, t.nu0_tau_p / tp, c.beta);
      const double zl = t.zeta_L_over_tau_p * tp;
      const double tau_end = c.tau_max * tp;
      const double peak = pulse_peak(s);
      const Grid ref_grid{c.reference_n_zeta, c.reference_n_tau, zl, tau_end};
      const PolaritonField ref = analytic::field_on_grid(ref_grid, s, q);

      auto deviation = [&](const PolaritonField& f) {
        const std::size_t sz = f.grid.n_zeta / c.reference_n_zeta;
        const std::size_t st = f.grid.n_tau / c.reference_n_tau;
        double e = 0.0;
        for (std::size_t i = 0; i < ref_grid.zeta_nodes(); ++i)
          for (std::size_t j = 0; j < ref_grid.tau_nodes(); ++j) {
            e = std::max(e, std::abs(f.psi_at(i * sz, j * st) - ref.psi_at(i, j)));
            e = std::max(e, std::abs(f.upsilon_at(i * sz, j * st) - ref.upsilon_at(i, j)));
          }
        return e / peak;
      };

      json ladder = json::array();
      std::vector<double> errs, hs;
      for (const auto& [nt, nz] : c.ladder) {
        const auto f = goursat_field(c, s, zl, tau_end, nt, nz, false);
        errs.push_back(deviation(f));
        hs.push_back(tau_end / static_cast<double>(nt));
        ladder.push_back({{"n_tau", nt}, {"n_zeta", nz}, {"max_deviation", errs.back()}});
      }
      json orders = json::array();
      for (std::size_t k = 1; k < errs.size(); ++k)
        orders.push_back(std::log(errs[k - 1] / errs[k]) / std::log(hs[k - 1] / hs[k]));
      // least-squares slope of log(err) against log(h)
      analysis::EfficiencyCurve ladder_fit;
      ladder_fit.tau = hs;
      ladder_fit.eta = errs;
      const double fitted = analysis::asymptotic_exponent_fit(ladder_fit, 0.0, hs.front());

      const auto plain = goursat_field(c, s, zl, tau_end, c.grid_n_tau, c.grid_n_zeta, false);
      json out = {{"nu0_tau_p", t.nu0_tau_p},
                  {"zeta_L_over_tau_p", t.zeta_L_over_tau_p},
                  {"reference_grid", {c.reference_n_tau, c.reference_n_zeta}},
                  {"pulse_peak", peak},
                  {"ladder", ladder},
                  {"pairwise_orders", orders},
                  {"fitted_order", fitted},
                  {"default_grid", {c.grid_n_tau, c.grid_n_zeta}},
                  {"default_deviation_plain", deviation(plain)},
                  {"default_conservation_residual_plain", analysis::conservation_residual(plain, s, tau_end)}};
      if (c.richardson) {
        const auto rich = goursat_field(c, s, zl, tau_end, c.grid_n_tau, c.grid_n_zeta, true);
        out["default_deviation_richardson"] = deviation(rich);
        out["default_conservation_residual_richardson"] = analysis::conservation_residual(rich, s, tau_end);
      }
      return out;
    });
    r.summary["runs"].push_back(run);
  }
  return r;
}

// -------------------------------------------------------------------- regime

json regime_json(const analysis::RegimeReport& rep) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  return {{"cond1_value", rep.cond1_value}, {"cond1_ok", rep.cond1_ok},
          {"cond2_value", rep.cond2_value}, {"cond2_ok", rep.cond2_ok},
          {"cond3_value", opt(rep.cond3_value)}, {"cond3_ok", rep.cond3_ok},
          {"K_p", opt(rep.K_p)}, {"K_p_ok", rep.K_p_ok},
          {"cond4_lhs", opt(rep.cond4_lhs)}, {"cond4_rhs", opt(rep.cond4_rhs)}, {"cond4_ok", rep.cond4_ok},
          {"nu_in_window", opt(rep.nu_in_window)}, {"nu_in_window_ok", rep.nu_in_window_ok}};
}

RunResult run_regime(const ExperimentConfig& c) {
  const double tp = c.pulse.tau_p;
  RunResult r;
  r.summary = {{"experiment", to_string(c.experiment)}, {"reports", json::array()}};
  for (const auto& t : tuples(c)) {
    analysis::RegimeInputs in;
    in.nu0 = t.nu0_tau_p / tp;
    in.beta = c.beta;
    in.zeta_L = t.zeta_L_over_tau_p * tp;
    in.tau = c.regime_tau * tp;
    in.tau_p = tp;
    in.optical_density = c.optical_density;
    if (c.delta_omega_eit) in.delta_omega_eit = *c.delta_omega_eit / tp;
    json rep = regime_json(analysis::regime_report(in));
    rep["nu0_tau_p"] = t.nu0_tau_p;
    rep["zeta_L_over_tau_p"] = t.zeta_L_over_tau_p;
    rep["tau_over_tau_p"] = c.regime_tau;
    r.summary["reports"].push_back(rep);
  }
  return r;
}

// ------------------------------------------------------------------ protocol

protocol::ProtocolReport goursat_protocol(const ExperimentConfig& c, const BoundarySignal& s, double zl) {
  const double tp = c.pulse.tau_p;
  const double tau_end = c.tau_max * tp;
  const auto f = goursat_field(c, s, zl, tau_end, c.grid_n_tau, c.grid_n_zeta, c.richardson);
  double t_s = c.storage_time * tp;
  if (t_s <= 0.0) {
    auto stored = [&](double t) { return protocol::snapshot(f, t).upsilon_norm(); };
    const int n = 200;
    const double h = tau_end / n;
    double best = -1.0, best_t = h;
    for (int k = 1; k <= n; ++k)
      if (stored(h * k) > best) best = stored(h * k), best_t = h * k;
    const double t = quad::golden_max(stored, best_t - h, std::min(tau_end, best_t + h), 1e-6 * tp);
    t_s = stored(t) >= best ? t : best_t;
  }
  protocol::ProtocolReport rep;
  rep.t_s = t_s;
  rep.input_energy = s.energy();
  rep.state = protocol::apply_storage_switch(protocol::snapshot(f, t_s), c.switch_kind);
  rep.retrieval = protocol::retrieve(rep.state, c.beta, c.retrieval_omega);
  rep.stored_norm = rep.state.stored_norm;
  rep.retrieved_energy = rep.retrieval.output_energy;
  rep.efficiency = rep.retrieved_energy / rep.input_energy;
  rep.unitarity_error = rep.state.upsilon_norm > 0
                            ? std::abs(rep.retrieved_energy - rep.state.upsilon_norm) / rep.state.upsilon_norm
                            : std::abs(rep.retrieved_energy);
  rep.bookkeeping_residual = rep.state.bookkeeping_residual();
  for (const auto& v : rep.retrieval.orthogonal) rep.orthogonal_max = std::max(rep.orthogonal_max, std::abs(v));
  return rep;
}

RunResult run_protocol(const ExperimentConfig& c) {
  const auto ts = tuples(c);
  const double tp = c.pulse.tau_p;
  const auto q = quadrature(c);
  auto job = [&](std::size_t k) {
    const Tuple t = ts[k];
    return guarded(t, [&] {
      const BoundarySignal s(c.pulse, t.nu0_tau_p / tp, c.beta);
      const double zl = t.zeta_L_over_tau_p * tp;
      if (c.solver == Solver::Goursat) return goursat_protocol(c, s, zl);
      protocol::ProtocolSchedule sched{c.storage_time * tp, c.switch_kind, c.retrieval_omega};
      return protocol::run_protocol(s, zl, sched, c.beta, c.protocol_n_zeta, c.tau_max * tp, q);
    });
  };
  const auto reps = parallel_map<protocol::ProtocolReport>(ts.size(), job);
  RunResult r;
  r.summary = {{"experiment", to_string(c.experiment)}, {"solver", to_string(c.solver)}, {"runs", json::array()}};
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const auto& rep = reps[k];
    const auto ctl = rep.retrieval.controls;
    json info = {{"nu0_tau_p", ts[k].nu0_tau_p},
                 {"zeta_L_over_tau_p", ts[k].zeta_L_over_tau_p},
                 {"switch", protocol::to_string(rep.state.kind)},
                 {"storage_time_over_tau_p", rep.t_s / tp},
                 {"input_energy", rep.input_energy},
                 {"input_flux_to_switch", rep.state.input_flux},
                 {"output_flux_to_switch", rep.state.output_flux},
                 {"stored_norm", rep.stored_norm},
                 {"drained_norm", rep.state.drained_norm},
                 {"retrieved_energy", rep.retrieved_energy},
                 {"efficiency", rep.efficiency},
                 {"unitarity_error", rep.unitarity_error},
                 {"bookkeeping_residual", rep.bookkeeping_residual},
                 {"orthogonal_max", rep.orthogonal_max},
                 {"retrieval_controls", {{"omega1", ctl.omega1}, {"omega2", ctl.omega2}, {"nu", ctl.nu}}}};
    std::string body = header(c, info) + "delta_over_tau_p,re_output,im_output,abs2_output\n";
    const auto& rt = rep.retrieval;
    for (std::size_t i = 0; i < rt.delta.size(); ++i)
      body += format_number(rt.delta[i] / tp) + "," + cell(rt.output[i].real()) + "," + cell(rt.output[i].imag()) +
              "," + cell(std::norm(rt.output[i])) + "\n";
    const std::string name = "retrieval_" + suffix(ts[k]) + ".csv";
    r.files.push_back({name, std::move(body)});
    info["file"] = name;
    r.summary["runs"].push_back(info);
  }
  return r;
}

// ------------------------------------------------------------- Maxwell-Bloch

RunResult run_maxwell_bloch(const ExperimentConfig& c) {
  MediumParams m = c.medium;
  m.beta = c.beta;
  const DerivedParams d = derive_params(m);
  const double tp = c.pulse.tau_p;
  const double ct = std::cos(d.theta);
  pde::MaxwellBlochConfig cfg;
  cfg.n_z = c.mb_n_z;
  cfg.dt = c.mb_dt;
  cfg.t_max = c.mb_duration * tp;

  auto run = [&](double nu0) {
    const BoundarySignal s(c.pulse, nu0, c.beta);
    return pde::solve_maxwell_bloch(m, [&](double t) { return ct * s(t); }, DetuningProfile::constant(nu0), cfg);
  };
  auto peak_time = [](const std::vector<double>& t, const std::vector<cplx>& v) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < v.size(); ++k)
      if (std::norm(v[k]) > std::norm(v[best])) best = k;
    return t[best];
  };

  RunResult r;
  r.summary = {{"experiment", to_string(c.experiment)},
               {"solver", to_string(c.solver)},
               {"derived",
                {{"kappa", d.kappa},
                 {"theta", d.theta},
                 {"v_g", d.v_g},
                 {"zeta_L", d.zeta_L},
                 {"delta_omega_eit", d.delta_omega_eit},
                 {"slow_light_ratio", d.slow_light_ratio},
                 {"slow_light", d.slow_light}}},
               {"runs", json::array()}};

  // index 0 is the undetuned reference for the delay
  const auto solves = parallel_map<pde::MaxwellBlochResult>(c.nu0_tau_p.size() + 1, [&](std::size_t k) {
    const double x = k ? c.nu0_tau_p[k - 1] : 0.0;
    return guarded(Tuple{x, d.zeta_L / tp}, [&] { return run(x / tp); });
  });
  const auto& ref = solves[0];
  const BoundarySignal s0(c.pulse, 0.0, c.beta);
  double t_in = 0.0, in_peak = 0.0;
  for (int k = 0; k <= 20000; ++k) {
    const double t = s0.support_end() * k / 20000.0;
    if (std::abs(s0(t)) > in_peak) in_peak = std::abs(s0(t)), t_in = t;
  }
  const double delay = peak_time(ref.t_out, ref.E_out) - t_in;
  const double halfwidth = pde::transparency_halfwidth(m);
  r.summary["delay"] = {{"measured", delay},
                        {"expected", d.zeta_L},
                        {"relative_error", std::abs(delay - d.zeta_L) / d.zeta_L}};
  r.summary["transparency"] = {{"halfwidth", halfwidth},
                               {"delta_omega_eit", d.delta_omega_eit},
                               {"ratio", halfwidth / d.delta_omega_eit}};

  for (std::size_t n = 0; n < c.nu0_tau_p.size(); ++n) {
    const double x = c.nu0_tau_p[n];
    const Tuple t{x, d.zeta_L / tp};
    const double nu0 = x / tp;
    json info = guarded(t, [&] {
      const auto& res = solves[n + 1];
      const BoundarySignal s(c.pulse, nu0, c.beta);
      const double zeta = res.z_last / d.v_g;
      double err = 0.0, mx = 0.0;
      std::string body = "t_over_tau_p,abs2_E_out,re_psi,im_psi,re_psi_reduced,im_psi_reduced\n";
      for (std::size_t k = 0; k < res.t_state.size(); k += c.mb_output_stride) {
        const double tau = res.t_state[k] - zeta;
        const cplx red = tau > 0 ? analytic::evaluate_psi(zeta, tau, s).value : cplx(0.0);
        err = std::max(err, std::abs(res.psi_last[k] - red));
        mx = std::max(mx, std::abs(red));
        body += format_number(res.t_state[k] / tp) + "," + cell(std::norm(res.E_out[k])) + "," +
                cell(res.psi_last[k].real()) + "," + cell(res.psi_last[k].imag()) + "," + cell(red.real()) + "," +
                cell(red.imag()) + "\n";
      }
      const auto& L = res.ledger;
      json j = {{"nu0_tau_p", x},
                {"psi_max_deviation", mx > 0 ? err / mx : err},
                {"ledger",
                 {{"inflow", L.inflow},
                  {"outflow", L.outflow},
                  {"decay", L.decay},
                  {"final", L.final},
                  {"balance_residual", std::abs(L.initial + L.inflow - L.outflow - L.decay - L.final) /
                                           std::max(L.inflow, 1e-300)}}},
                {"csv", body}};
      return j;
    });
    const std::string name = "mb_nu" + format_number(x) + ".csv";
    std::string body = info["csv"].get<std::string>();
    info.erase("csv");
    analysis::RegimeInputs in = analysis::regime_inputs(m, c.pulse, nu0, c.mb_duration * tp);
    info["regime"] = regime_json(analysis::regime_report(in));
    info["file"] = name;
    r.files.push_back({name, header(c, info) + body});
    r.summary["runs"].push_back(info);
  }
  return r;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  RunResult r;
  switch (config.experiment) {
    case Experiment::Efficiency: r = run_efficiency(config); break;
    case Experiment::Convergence: r = run_convergence(config); break;
    case Experiment::Regime: r = run_regime(config); break;
    case Experiment::Protocol: r = run_protocol(config); break;
    case Experiment::MaxwellBloch: r = run_maxwell_bloch(config); break;
  }
  r.summary["config"] = to_json(config);
  if (config.experiment != Experiment::Efficiency)
    r.files.push_back({std::string(to_string(config.experiment)) + ".json", r.summary.dump(2) + "\n"});
  return r;
}

void write_outputs(const std::string& dir, const RunResult& result) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto put = [&](const std::string& name, const std::string& content) {
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (fs::path(dir) / name).string());
    out << content;
  };
  for (const auto& f : result.files) put(f.name, f.content);
  put("summary.json", result.summary.dump(2) + "\n");
}

std::string output_help() {
  return "Outputs (in --out DIR, each CSV starts with a '#' line holding a JSON header\n"
         "with the effective config and run metadata):\n"
         "  fig2, fig3 / efficiency   eta_nu<X>_zl<Y>.csv   tau_over_tau_p,eta\n"
         "  convergence               convergence.json      deviation ladder, orders\n"
         "  regime                    regime.json           condition values and flags\n"
         "  protocol                  retrieval_nu<X>_zl<Y>.csv\n"
         "                              delta_over_tau_p,re_output,im_output,abs2_output\n"
         "                            protocol.json         energy ledger\n"
         "  maxwell-bloch             mb_nu<X>.csv\n"
         "                              t_over_tau_p,abs2_E_out,re_psi,im_psi,re_psi_reduced,im_psi_reduced\n"
         "                            maxwell_bloch.json    delay, window width, ledgers\n"
         "  every run                 summary.json\n";
}

}  // namespace tripod::cli
