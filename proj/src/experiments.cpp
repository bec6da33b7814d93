#include "prethermo/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <thread>

#include <fmt/format.h>

#include "prethermo/csv.hpp"
#include "prethermo/dynamics.hpp"
#include "prethermo/errors.hpp"
#include "prethermo/metrology.hpp"
#include "prethermo/probes.hpp"
#include "prethermo/propagation.hpp"
#include "prethermo/sampling.hpp"
#include "prethermo/svg.hpp"

namespace prethermo {

namespace {

std::vector<double> lin_spaced(double start, double stop, std::size_t points) {
  std::vector<double> out;
  out.reserve(points);
  if (points == 1) {
    out.push_back(start);
    return out;
  }
  for (std::size_t i = 0; i < points; ++i)
    out.push_back(start + (stop - start) * static_cast<double>(i) /
                              static_cast<double>(points - 1));
  return out;
}

struct NamedInit {
  std::string name;
  InitialSpec spec;
};

std::vector<NamedInit> initial_conditions(const ExperimentConfig& cfg) {
  std::vector<NamedInit> out;
  auto add = [&](const std::string& name) {
    InitialSpec spec;
    if (name == "ground") spec.kind = InitialKind::ground;
    if (name == "mixed") spec.kind = InitialKind::maximally_mixed;
    if (name == "ambient") {
      spec.kind = InitialKind::ambient_thermal;
      spec.beta_ambient = cfg.beta_ambient;
    }
    if (name == "custom") {
      spec.kind = InitialKind::custom;
      spec.p2 = cfg.p2;
      spec.p3 = cfg.p3;
      spec.a = cfg.a;
      spec.b = cfg.b;
      spec.sigma0R = cfg.sigma0R;
    }
    out.push_back({name, spec});
  };
  if (cfg.init == "all") {
    add("ground");
    add("mixed");
    add("ambient");
  } else {
    add(cfg.init);
  }
  return out;
}

double effective_cluster_tol(const ExperimentConfig& cfg) {
  if (cfg.cluster_tol > 0.0) return cfg.cluster_tol;
  return 100.0 * std::max(cfg.delta, cfg.spread);
}

RedfieldVariant parse_variant(const std::string& name) {
  if (name == "unified") return RedfieldVariant::unified;
  if (name == "full_secular") return RedfieldVariant::full_secular;
  return RedfieldVariant::nonsecular;
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += threads) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);
}

}  // namespace

std::vector<std::string> run_dynamics(const ExperimentConfig& cfg) {
  ProbeModel model = ProbeModel::v_model(cfg.nu, cfg.delta, cfg.gamma, cfg.beta);
  Rates rates = thermal_rates(model);
  Generator gen = reduced_generator(rates, cfg.delta);
  std::vector<double> times = log_spaced(cfg.t_start, cfg.t_stop, cfg.t_points);
  LepeResult lepe = lepe_eigenvalues(rates, cfg.delta);

  std::vector<std::string> files;
  for (const NamedInit& init : initial_conditions(cfg)) {
    InitialState is0 = initial_state(model, init.spec);
    EvolveResult ev = evolve(gen, is0.rho, times);
    ReducedState v0{is0.p0, is0.sigma0R, is0.sigma0I};
    PrethermalState pre = prethermal_state(cfg.beta, cfg.nu, is0.xi);

    std::string name = fmt::format("dynamics_{}.csv", init.name);
    CsvWriter csv(cfg.out_dir + "/" + name);
    csv.header({"t", "p", "sigmaR", "sigmaI", "ground_pop", "trace_err", "min_eig",
                "p_closed", "sigmaR_closed"});
    double dev_p = 0.0, dev_s = 0.0;
    std::vector<double> ps, srs;
    for (std::size_t i = 0; i < times.size(); ++i) {
      ReducedState num = reduce(ev.states[i]);
      ReducedState cf = closed_form_evolution(rates, cfg.delta, v0, times[i]);
      dev_p = std::max(dev_p, std::abs(num.p - cf.p));
      dev_s = std::max(dev_s, std::abs(num.sigmaR - cf.sigmaR));
      ps.push_back(num.p);
      srs.push_back(num.sigmaR);
      csv.row({times[i], num.p, num.sigmaR, num.sigmaI,
               ev.states[i](0, 0).real(), ev.trace_errors[i], ev.min_eigenvalues[i],
               cf.p, cf.sigmaR});
    }
    csv.footer(fmt::format("xi = {}", format_number(is0.xi)));
    csv.footer(fmt::format("max_dev_p = {}", format_number(dev_p)));
    csv.footer(fmt::format("max_dev_sigmaR = {}", format_number(dev_s)));
    csv.footer(fmt::format("plateau_p = {}", format_number(pre.p_tilde)));
    csv.footer(fmt::format("plateau_sigmaR = {}", format_number(pre.sigma_tilde)));
    csv.footer(fmt::format("t_plateau = {}", format_number(std::sqrt(lepe.tau1 * lepe.tau2))));
    files.push_back(name);

    if (cfg.plots) {
      LineChart chart(fmt::format("V-model dynamics, {} start", init.name), "t",
                      "population / coherence");
      chart.log_x(true);
      chart.add_series("p(t)", times, ps);
      chart.add_series("sigmaR(t)", times, srs);
      std::string plot = fmt::format("dynamics_{}.svg", init.name);
      chart.write(cfg.out_dir + "/" + plot);
      files.push_back(plot);
    }
  }
  return files;
}

std::vector<std::string> run_fisher_sweep(const ExperimentConfig& cfg) {
  std::vector<double> betas = lin_spaced(cfg.beta_start, cfg.beta_stop, cfg.beta_points);

  // xi of each start does not depend on the sample temperature.
  ProbeModel ref = ProbeModel::v_model(cfg.nu, cfg.delta, cfg.gamma, cfg.beta);
  struct Start {
    std::string name;
    double xi;
  };
  std::vector<Start> starts;
  for (const NamedInit& init : initial_conditions(cfg))
    starts.push_back({init.name, initial_state(ref, init.spec).xi});

  struct SweepRow {
    std::vector<std::string> cells;
    std::string kind;
    double beta = 0.0, tqfi = 0.0;
  };
  std::vector<std::vector<SweepRow>> blocks(betas.size());
  parallel_for(betas.size(), cfg.threads, [&](std::size_t i) {
    double beta = betas[i];
    ProbeModel model = ProbeModel::v_model(cfg.nu, cfg.delta, cfg.gamma, beta);
    LepeResult lepe = lepe_eigenvalues(thermal_rates(model), cfg.delta);
    auto emit = [&](double xi_or_n, const std::string& kind, double cfi, double qfi,
                    double tau_prep, const std::string& method) {
      SweepRow row;
      row.kind = kind;
      row.beta = beta;
      row.tqfi = qfi / tau_prep;
      row.cells = {format_number(beta),         format_number(xi_or_n),
                   kind,                        format_number(cfi),
                   format_number(qfi),          format_number(lepe.tau1),
                   format_number(lepe.tau2),    format_number(cfi / tau_prep),
                   format_number(qfi / tau_prep), method};
      blocks[i].push_back(std::move(row));
    };
    for (const Start& s : starts) {
      emit(s.xi, "prethermal_" + s.name, cfi_prethermal_analytic(beta, cfg.nu, s.xi),
           qfi_prethermal_analytic(beta, cfg.nu, s.xi), lepe.tau2, "analytic");
      PrethermalState pre = prethermal_state(beta, cfg.nu, s.xi);
      ComplexMatrix rho = pre.matrix();
      ComplexMatrix drho = pre.matrix_dbeta();
      std::vector<double> pops, dpops;
      for (std::size_t j = 0; j < 3; ++j) {
        pops.push_back(rho(j, j).real());
        dpops.push_back(drho(j, j).real());
      }
      emit(s.xi, "prethermal_" + s.name, cfi_from_populations(pops, dpops),
           qfi_from_state(rho, drho), lepe.tau2, "numeric");
    }
    double qeq = qfi_equilibrium_v(beta, cfg.nu);
    emit(2.0, "equilibrium_v", qeq, qeq, lepe.tau1, "analytic");
    OptimalDegeneracy opt = optimal_degeneracy(beta, cfg.nu);
    double qstar = qfi_equilibrium_n(beta, cfg.nu, static_cast<double>(opt.n_integer));
    emit(static_cast<double>(opt.n_integer), "equilibrium_nstar", qstar, qstar,
         lepe.tau1, "analytic");
  });

  std::string name = "fisher_sweep.csv";
  {
    CsvWriter csv(cfg.out_dir + "/" + name);
    csv.header({"beta", "xi_or_N", "kind", "cfi", "qfi", "tau1", "tau2", "tcfi", "tqfi",
                "method"});
    for (const auto& block : blocks)
      for (const SweepRow& row : block) csv.row(row.cells);
  }

  std::vector<std::string> files{name};
  if (cfg.plots) {
    LineChart chart("Time-weighted Fisher information", "beta", "F / tau");
    chart.log_y(true);
    std::vector<std::string> kinds;
    for (const auto& block : blocks)
      for (const SweepRow& row : block)
        if (std::find(kinds.begin(), kinds.end(), row.kind) == kinds.end())
          kinds.push_back(row.kind);
    for (const std::string& kind : kinds) {
      std::vector<double> xs, ys;
      for (const auto& block : blocks)
        for (const SweepRow& row : block)
          if (row.kind == kind && row.cells.back() == "analytic") {
            xs.push_back(row.beta);
            ys.push_back(row.tqfi);
          }
      chart.add_series(kind, xs, ys);
    }
    chart.write(cfg.out_dir + "/fisher_sweep.svg");
    files.push_back("fisher_sweep.svg");
  }
  return files;
}

std::vector<std::string> run_nlevel(const ExperimentConfig& cfg) {
  double h = cfg.fd_step > 0.0 ? cfg.fd_step : 1e-5 * cfg.beta;
  double ct = effective_cluster_tol(cfg);
  RedfieldVariant variant = parse_variant(cfg.variant);
  std::vector<double> times = log_spaced(cfg.t_start, cfg.t_stop, cfg.t_points);
  std::vector<std::string> files;

  struct PerN {
    std::vector<double> qfi;
    double tau1 = 0.0, tau2 = 0.0;
    double plateau_qfi = 0.0, long_time_qfi = 0.0;
  };
  std::vector<PerN> results(cfg.n_list.size());

  parallel_for(cfg.n_list.size(), cfg.threads, [&](std::size_t idx) {
    std::size_t n = static_cast<std::size_t>(cfg.n_list[idx]);
    auto probe_at = [&](double beta) {
      return ProbeModel::n_level(n, cfg.nu, cfg.gamma, beta, cfg.spread);
    };
    ProbeModel model = probe_at(cfg.beta);
    Generator gc = build_redfield_generator(model, variant, ct);
    Generator gp = build_redfield_generator(probe_at(cfg.beta + h), variant, ct);
    Generator gm = build_redfield_generator(probe_at(cfg.beta - h), variant, ct);
    InitialState is0 = initial_state(model, InitialSpec{});
    EvolveResult ec = evolve(gc, is0.rho, times);
    EvolveResult ep = evolve(gp, is0.rho, times);
    EvolveResult em = evolve(gm, is0.rho, times);

    PerN& r = results[idx];
    for (std::size_t i = 0; i < times.size(); ++i) {
      ComplexMatrix drho = ep.states[i];
      drho -= em.states[i];
      drho *= 1.0 / (2.0 * h);
      ComplexMatrix adj = drho.adjoint();
      drho += adj;
      drho *= 0.5;
      r.qfi.push_back(qfi_truncated(ec.states[i], drho));
    }
    TimescaleReport rep = analyze_timescales(gc, &is0.rho, cfg.gap_threshold);
    r.tau1 = rep.tau1;
    r.tau2 = rep.tau_window_fast;
    double tstar = rep.t_plateau;
    if (!std::isfinite(tstar) || tstar <= 0.0) tstar = times.back();
    ComplexMatrix rc = evolve(gc, is0.rho, {tstar}).states[0];
    ComplexMatrix rp = evolve(gp, is0.rho, {tstar}).states[0];
    ComplexMatrix rm = evolve(gm, is0.rho, {tstar}).states[0];
    rp -= rm;
    rp *= 1.0 / (2.0 * h);
    ComplexMatrix adj = rp.adjoint();
    rp += adj;
    rp *= 0.5;
    r.plateau_qfi = qfi_truncated(rc, rp);
    r.long_time_qfi = r.qfi.back();
  });

  for (std::size_t idx = 0; idx < cfg.n_list.size(); ++idx) {
    long long n = cfg.n_list[idx];
    const PerN& r = results[idx];
    std::string name = fmt::format("nlevel_qfi_N{}.csv", n);
    CsvWriter csv(cfg.out_dir + "/" + name);
    csv.header({"t", "qfi"});
    for (std::size_t i = 0; i < times.size(); ++i) csv.row({times[i], r.qfi[i]});
    csv.footer(fmt::format("tau1 = {}", format_number(r.tau1)));
    csv.footer(fmt::format("tau2 = {}", format_number(r.tau2)));
    csv.footer(fmt::format("plateau_qfi = {}", format_number(r.plateau_qfi)));
    csv.footer(fmt::format("long_time_qfi = {}", format_number(r.long_time_qfi)));
    csv.footer(fmt::format("equilibrium_qfi = {}",
                           format_number(qfi_equilibrium_n(cfg.beta, cfg.nu,
                                                           static_cast<double>(n)))));
    files.push_back(name);
  }

  if (cfg.plots) {
    LineChart chart("N-level QFI dynamics", "t", "QFI");
    chart.log_x(true);
    for (std::size_t idx = 0; idx < cfg.n_list.size(); ++idx)
      chart.add_series(fmt::format("N = {}", cfg.n_list[idx]), times, results[idx].qfi);
    chart.write(cfg.out_dir + "/nlevel_qfi.svg");
    files.push_back("nlevel_qfi.svg");
  }

  // Equilibrium TQFI vs beta, with exact per-N relaxation times next to the
  // fixed (single-splitting estimate) variant, plus the optimal-N* curve.
  std::string tname = "nlevel_tqfi.csv";
  CsvWriter tcsv(cfg.out_dir + "/" + tname);
  tcsv.header({"beta", "N", "qfi_eq", "tau1_fixed", "tau1_exact", "tqfi_fixed",
               "tqfi_exact"});
  std::vector<double> betas = lin_spaced(cfg.beta_start, cfg.beta_stop, cfg.beta_points);
  double split = std::max(cfg.spread, cfg.delta);
  for (double beta : betas) {
    ProbeModel vref = ProbeModel::v_model(cfg.nu, split, cfg.gamma, beta);
    double tau_fixed = lepe_eigenvalues(thermal_rates(vref), split).tau1;
    for (long long n : cfg.n_list) {
      ProbeModel model =
          ProbeModel::n_level(static_cast<std::size_t>(n), cfg.nu, cfg.gamma, beta,
                              cfg.spread);
      Generator gen = build_redfield_generator(model, variant, ct);
      TimescaleReport rep = analyze_timescales(gen, nullptr, cfg.gap_threshold);
      double q = qfi_equilibrium_n(beta, cfg.nu, static_cast<double>(n));
      tcsv.row({beta, static_cast<double>(n), q, tau_fixed, rep.tau1, q / tau_fixed,
                q / rep.tau1});
    }
    OptimalDegeneracy opt = optimal_degeneracy(beta, cfg.nu);
    double q = qfi_equilibrium_n(beta, cfg.nu, static_cast<double>(opt.n_integer));
    tcsv.row({beta, static_cast<double>(opt.n_integer), q, tau_fixed,
              std::numeric_limits<double>::quiet_NaN(), q / tau_fixed,
              std::numeric_limits<double>::quiet_NaN()});
  }
  files.push_back(tname);
  return files;
}

std::vector<std::string> run_xi_bound(const ExperimentConfig& cfg) {
  XiBoundStudy study =
      xi_bound_study(cfg.samples, cfg.seed, cfg.threads, cfg.grid_mode, cfg.grid_bins);

  std::string name = "xi_bound_samples.csv";
  CsvWriter csv(cfg.out_dir + "/" + name);
  csv.header({"sigma0R", "p2", "p3", "a", "b", "xi", "physical", "min_eig"});
  for (const CandidateState& c : study.samples)
    csv.row({c.sigma0R, c.p2, c.p3, c.a, c.b, c.xi, c.physical ? 1.0 : 0.0, c.min_eig});

  const XiBoundSummary& s = study.summary;
  std::string sname = "xi_bound_summary.txt";
  std::ofstream sum(cfg.out_dir + "/" + sname, std::ios::binary);
  if (!sum) throw ConfigError("cannot write xi bound summary");
  sum << fmt::format("requested = {}\n", s.requested);
  sum << fmt::format("physical_count = {}\n", s.physical_count);
  sum << fmt::format("xi_min = {}\n", format_number(s.xi_min));
  sum << fmt::format("xi_max = {}\n", format_number(s.xi_max));
  sum << fmt::format("sigma_abs_max = {}\n", format_number(s.sigma_abs_max));
  sum << fmt::format("xi_within_bounds = {}\n", s.xi_within_bounds ? "true" : "false");
  sum << fmt::format("sigma_within_bounds = {}\n",
                     s.sigma_within_bounds ? "true" : "false");
  sum << fmt::format("ground_witness_ok = {}\n", s.ground_witness_ok ? "true" : "false");
  sum << fmt::format("superposition_witness_ok = {}\n",
                     s.superposition_witness_ok ? "true" : "false");
  return {name, sname};
}

std::vector<std::string> run_spectrum(const ExperimentConfig& cfg) {
  ProbeModel model = cfg.probe == "qubit"
                         ? ProbeModel::qubit(cfg.nu, cfg.gamma, cfg.beta)
                         : ProbeModel::v_model(cfg.nu, cfg.delta, cfg.gamma, cfg.beta);
  Generator gen =
      build_redfield_generator(model, parse_variant(cfg.variant), effective_cluster_tol(cfg));
  // Restrict to the modes the configured start actually excites; the optical
  // coherence branch is dark for every diagonal-plus-sigma start.
  InitialState is0 = initial_state(model, initial_conditions(cfg).front().spec);
  TimescaleReport rep = analyze_timescales(gen, &is0.rho, cfg.gap_threshold);

  std::vector<double> lepe_values;
  if (cfg.probe == "v") {
    LepeResult lepe = lepe_eigenvalues(thermal_rates(model), cfg.delta);
    lepe_values = {lepe.lambda1, lepe.lambda2, lepe.lambda3};
  }

  std::string name = "spectrum.csv";
  CsvWriter csv(cfg.out_dir + "/" + name);
  csv.header({"index", "re", "im", "lepe", "rel_err"});
  for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) {
    double re = rep.eigenvalues[i].real();
    std::vector<std::string> cells{fmt::format("{}", i), format_number(re),
                                   format_number(rep.eigenvalues[i].imag()), "", ""};
    double best = std::numeric_limits<double>::infinity();
    double best_val = 0.0;
    for (double lv : lepe_values) {
      double err = std::abs(re - lv) / std::max(std::abs(lv), 1e-300);
      if (err < best) {
        best = err;
        best_val = lv;
      }
    }
    if (!lepe_values.empty() && best < 0.5) {
      cells[3] = format_number(best_val);
      cells[4] = format_number(best);
    }
    csv.row(cells);
  }
  csv.footer(fmt::format("tau1 = {}", format_number(rep.tau1)));
  csv.footer(fmt::format("tau2 = {}", format_number(rep.tau2)));
  csv.footer(fmt::format("separation_ratio = {}", format_number(rep.separation_ratio)));
  csv.footer(fmt::format("window_nonempty = {}", rep.window_nonempty ? "true" : "false"));
  csv.footer(fmt::format("nonrelaxing = {}", rep.nonrelaxing ? "true" : "false"));
  return {name};
}

void run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  std::filesystem::create_directories(cfg.out_dir);
  std::vector<std::string> files;
  if (cfg.experiment == "dynamics") files = run_dynamics(cfg);
  if (cfg.experiment == "fisher-sweep") files = run_fisher_sweep(cfg);
  if (cfg.experiment == "nlevel") files = run_nlevel(cfg);
  if (cfg.experiment == "xi-bound") files = run_xi_bound(cfg);
  if (cfg.experiment == "spectrum") files = run_spectrum(cfg);
  write_manifest(cfg, files);
}

}  // namespace prethermo
