#pragma once

#include <atomic>
#include <cmath>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "sqpump/observables.hpp"
#include "sqpump/steady_state.hpp"

namespace sqpump {

enum class SolverKind { secular, exact_dense, exact_iterative };

/// Sweep over the (mu/U, J/U) grid. All frequencies and rates are in units
/// of U unless stated otherwise; omega_cav is fixed to 0 and mu moves
/// omega_plus (gauge-equivalent to moving omega_cav instead).
struct SweepConfig {
  int sites = 7;
  int n_max = 3;
  Boundary boundary = Boundary::periodic;

  double gamma_l = 1e-11;
  double gamma_em0 = 1e-8;
  double delta_em = 1e-6;
  double omega_minus_offset = -40.0;  // omega_- = omega_+ + offset

  bool loss_enabled = false;
  double gamma_l0 = 0.0;   // Gamma_L^0
  double delta_l = 0.0;
  bool loss_window_from_plus = true;  // omega_L = omega_+ + loss_span (else omega_cav + loss_span)
  double loss_span = 0.0;             // 0 = omega_+ - omega_-

  double mu_lo = 0.0, mu_hi = 2.5;
  int mu_n = 30;
  double j_lo = 0.0, j_hi = 0.12;
  int j_n = 30;

  SolverKind solver = SolverKind::secular;
  std::vector<int> layout;      // empty = all sites emit
  double layout_rescale = 0.0;  // 0 = automatic L/|layout|
  bool lamb_shift = true;
  int workers = 0;              // 0 = hardware concurrency

  double mu_at(int k) const { return mu_n > 1 ? mu_lo + (mu_hi - mu_lo) * k / (mu_n - 1) : mu_lo; }
  double j_at(int k) const { return j_n > 1 ? j_lo + (j_hi - j_lo) * k / (j_n - 1) : j_lo; }

  DissipationParams dissipation(double mu) const {
    DissipationParams dp;
    dp.gamma_loss = gamma_l;
    dp.emission = SpectralFunction::square_emission(mu + omega_minus_offset, mu, delta_em, gamma_em0);
    dp.emission.lamb_shift = lamb_shift;
    if (loss_enabled) {
      double span = loss_span != 0.0 ? loss_span : -omega_minus_offset;
      double w_hi = loss_window_from_plus ? mu + span : span;
      dp.loss_spectrum = SpectralFunction::square_loss(mu, w_hi, delta_l, gamma_l0);
      dp.loss_spectrum->lamb_shift = lamb_shift;
    }
    dp.emitting_sites = layout;
    dp.layout_rescale = layout_rescale;
    return dp;
  }
};

inline SweepConfig preset_config(const std::string& name) {
  SweepConfig c;  // defaults are the idealized set
  if (name == "idealized") return c;
  if (name == "plateau") {
    c.sites = 1;
    c.n_max = 6;
    c.boundary = Boundary::open;
    c.gamma_l = 1e-5;
    c.gamma_em0 = 3e-4;
    c.delta_em = 1e-2;
    c.mu_lo = -0.5;
    c.mu_hi = 3.5;
    c.mu_n = 161;
    c.j_lo = c.j_hi = 0.0;
    c.j_n = 1;
    return c;
  }
  if (name == "circuit-qed") {
    // circuit-QED scale: U = 200 x 2pi MHz
    c.sites = 3;
    c.n_max = 4;
    c.gamma_l = 1e-3 / 200.0;      // 1 x 2pi kHz
    c.gamma_em0 = 0.03 / 200.0;    // 30 x 2pi kHz
    c.delta_em = 0.5 / 200.0;      // 0.5 x 2pi MHz
    c.mu_lo = 0.0;
    c.mu_hi = 2.5;
    c.mu_n = 30;
    c.j_lo = 0.0;
    c.j_hi = 0.12;
    c.j_n = 30;
    c.solver = SolverKind::exact_iterative;
    return c;
  }
  if (name == "transition") {
    c.sites = 5;
    c.mu_lo = c.mu_hi = 0.55;
    c.mu_n = 1;
    c.j_lo = 0.0;
    c.j_hi = 0.1;
    c.j_n = 21;
    c.solver = SolverKind::exact_iterative;
    return c;
  }
  if (name == "square-loss") {
    c.loss_enabled = true;
    c.gamma_l0 = c.gamma_em0;
    c.delta_l = c.delta_em;
    return c;
  }
  if (name == "two-site") {
    c.sites = 4;
    c.layout = {0, 1};
    c.mu_lo = 0.0;
    c.mu_hi = 0.95;
    c.mu_n = 20;
    c.j_lo = 0.0;
    c.j_hi = 0.1;
    c.j_n = 11;
    c.solver = SolverKind::exact_iterative;
    return c;
  }
  throw std::invalid_argument("unknown preset: " + name);
}

struct SweepRow {
  double mu = 0.0;
  double j = 0.0;
  SteadyStateReport report;
  bool ok = false;
  std::string error;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // grid order: J outer, mu inner
  int failures = 0;
  bool degeneracy_warning = false;
};

namespace detail {

inline void solve_point(const SweepConfig& cfg, const EigenSystem& es, const TransitionWeights& tw,
                        const ObservableContext& ctx, double mu, SweepRow& row,
                        std::atomic<bool>* degen) {
  row.mu = mu;
  try {
    DissipationParams dp = cfg.dissipation(mu);
    GroundStateInfo gs = grand_canonical_ground_state(es, mu);
    SteadyStateResult ss;
    if (cfg.solver == SolverKind::secular) {
      RateMatrix rm = secular_rates(tw, es, dp);
      if (!rm.degenerate_sectors.empty() && degen) degen->store(true);
      Eigen::VectorXd p = secular_steady_state(rm);
      ss.rho = BlockDiagonal::zero(es);
      Eigen::Index g = 0;
      for (auto& b : ss.rho.blocks)
        for (Eigen::Index k = 0; k < b.rows(); ++k) b(k, k) = p(g++);
    } else {
      JumpOperatorSet js = build_jump_operators(es, dp, cfg.lamb_shift);
      ExactSolveOptions opts;
      if (cfg.solver == SolverKind::exact_dense) opts.dense_threshold = 40000;
      ss = exact_steady_state(js, dp, opts);
      if (!ss.degenerate_sectors.empty() && degen) degen->store(true);
      if (!ss.converged)
        throw std::runtime_error("exact solver did not converge (residual " +
                                 std::to_string(ss.residual) + ")");
    }
    row.report = compute_report(ss.rho, es, gs, ctx);
    row.ok = true;
  } catch (const std::exception& e) {
    row.ok = false;
    row.error = e.what();
  }
}

}  // namespace detail

inline SweepResult run_sweep(const SweepConfig& cfg) {
  if (cfg.mu_n < 1 || cfg.j_n < 1) throw std::invalid_argument("run_sweep: empty grid");
  auto basis = std::make_shared<const FockBasis>(cfg.sites, cfg.n_max, cfg.boundary);
  SweepResult result;
  result.rows.resize(std::size_t(cfg.mu_n) * std::size_t(cfg.j_n));
  std::atomic<bool> degen{false};

  int workers = cfg.workers > 0 ? cfg.workers : int(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;

  for (int jk = 0; jk < cfg.j_n; ++jk) {
    double j = cfg.j_at(jk);
    BoseHubbardParams params{0.0, 1.0, j, cfg.sites, cfg.boundary};
    EigenSystem es = diagonalize(params, basis);
    TransitionWeights tw;
    if (cfg.solver == SolverKind::secular)
      tw = transition_weights(es, cfg.dissipation(0.0).layout(cfg.sites));
    ObservableContext ctx = ObservableContext::build(es);

    auto run_range = [&](int lo, int hi) {
      for (int mk = lo; mk < hi; ++mk) {
        SweepRow& row = result.rows[std::size_t(jk) * std::size_t(cfg.mu_n) + std::size_t(mk)];
        row.j = j;
        detail::solve_point(cfg, es, tw, ctx, cfg.mu_at(mk), row, &degen);
      }
    };
    if (workers == 1 || cfg.mu_n == 1) {
      run_range(0, cfg.mu_n);
    } else {
      std::vector<std::thread> pool;
      int chunk = (cfg.mu_n + workers - 1) / workers;
      for (int w = 0; w < workers; ++w) {
        int lo = w * chunk, hi = std::min(cfg.mu_n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(run_range, lo, hi);
      }
      for (auto& t : pool) t.join();
    }
  }
  for (const auto& r : result.rows)
    if (!r.ok) ++result.failures;
  result.degeneracy_warning = degen.load();
  return result;
}

/// T=0 grand-canonical ground-state observables on the same grid.
inline SweepResult equilibrium_reference(const SweepConfig& cfg) {
  if (cfg.mu_n < 1 || cfg.j_n < 1) throw std::invalid_argument("equilibrium_reference: empty grid");
  auto basis = std::make_shared<const FockBasis>(cfg.sites, cfg.n_max, cfg.boundary);
  SweepResult result;
  result.rows.resize(std::size_t(cfg.mu_n) * std::size_t(cfg.j_n));
  for (int jk = 0; jk < cfg.j_n; ++jk) {
    double j = cfg.j_at(jk);
    BoseHubbardParams params{0.0, 1.0, j, cfg.sites, cfg.boundary};
    EigenSystem es = diagonalize(params, basis);
    ObservableContext ctx = ObservableContext::build(es);
    for (int mk = 0; mk < cfg.mu_n; ++mk) {
      SweepRow& row = result.rows[std::size_t(jk) * std::size_t(cfg.mu_n) + std::size_t(mk)];
      row.j = j;
      row.mu = cfg.mu_at(mk);
      GroundStateInfo gs = grand_canonical_ground_state(es, row.mu);
      row.report = ground_state_report(es, gs, ctx);
      row.ok = true;
    }
  }
  return result;
}

/// Plateau scan: one single-cavity sweep per edge width.
inline std::vector<std::pair<double, SweepResult>> single_cavity_scan(
    const SweepConfig& base, const std::vector<double>& delta_list) {
  if (base.sites != 1) throw std::invalid_argument("single_cavity_scan: requires L = 1");
  std::vector<std::pair<double, SweepResult>> out;
  for (double d : delta_list) {
    SweepConfig c = base;
    c.delta_em = d;
    out.emplace_back(d, run_sweep(c));
  }
  return out;
}

}  // namespace sqpump
