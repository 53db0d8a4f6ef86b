// Acceptance gate: each criterion is one invocation (argv[1] = 1..8) and
// prints a single [PASS]/[FAIL] line followed by indented detail lines.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sqpump/sqpump.hpp"

namespace {

using namespace sqpump;
using Clock = std::chrono::steady_clock;

struct Gate {
  int id;
  std::string summary;
  bool ok = true;
  std::vector<std::string> details;

  explicit Gate(int n, std::string s) : id(n), summary(std::move(s)) {}

  void require(bool cond, const std::string& what) {
    if (!cond) ok = false;
    details.push_back(std::string(cond ? "ok:   " : "FAIL: ") + what);
  }
  void note(const std::string& what) { details.push_back("note: " + what); }

  int finish() const {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", id, summary.c_str());
    for (const auto& d : details) std::printf("    %s\n", d.c_str());
    std::fflush(stdout);
    return ok ? 0 : 1;
  }
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double elapsed_s(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

const SweepRow* row_at(const SweepResult& res, double mu, double j) {
  for (const auto& r : res.rows)
    if (std::abs(r.mu - mu) < 1e-9 && std::abs(r.j - j) < 1e-9) return &r;
  return nullptr;
}

// ---------------------------------------------------------------- criterion 1
int criterion1() {
  Gate g(1, "single-cavity plateaus: densities at mu/U = 0.5, 1.5, 2.5 and step sharpening");
  auto t0 = Clock::now();
  SweepConfig cfg = preset_config("plateau");
  const std::vector<double> deltas = {3.0, 1.0, 0.1, 0.01};
  auto scans = single_cavity_scan(cfg, deltas);
  double runtime = elapsed_s(t0);

  const SweepResult& sharpest = scans.back().second;
  g.require(sharpest.failures == 0, "all grid points solved");
  for (int k = 1; k <= 3; ++k) {
    const SweepRow* r = row_at(sharpest, 0.5 + (k - 1), 0.0);
    if (!r || !r->ok) {
      g.require(false, fmt("row at mu = %.1f present", 0.5 + (k - 1)));
      continue;
    }
    g.require(std::abs(r->report.n_ph - k) <= 0.02,
              fmt("n_ph(mu = %.1f U) = %.4f, target %d +/- 0.02", r->mu, r->report.n_ph, k));
  }

  // step sharpening: maximum |d n_ph / d mu| must grow as the edge narrows
  std::vector<double> slopes;
  for (const auto& [delta, res] : scans) {
    double worst = 0.0;
    for (std::size_t i = 1; i < res.rows.size(); ++i) {
      double dmu = res.rows[i].mu - res.rows[i - 1].mu;
      if (res.rows[i].ok && res.rows[i - 1].ok && dmu > 0)
        worst = std::max(worst, std::abs(res.rows[i].report.n_ph - res.rows[i - 1].report.n_ph) / dmu);
    }
    slopes.push_back(worst);
    g.note(fmt("delta = %-4g  max |d n_ph/d mu| = %.4g", delta, worst));
  }
  for (std::size_t i = 1; i < slopes.size(); ++i)
    g.require(slopes[i] > slopes[i - 1],
              fmt("steps sharpen from delta = %g to delta = %g", deltas[i - 1], deltas[i]));
  g.require(runtime < 1.0, fmt("runtime %.3f s < 1 s", runtime));
  return g.finish();
}

// ---------------------------------------------------------------- criterion 2
int criterion2() {
  Gate g(2, "idealized phase diagram: L = 7 secular 30 x 30 grid");
  auto t0 = Clock::now();
  SweepConfig cfg = preset_config("idealized");
  SweepResult res = run_sweep(cfg);
  g.note(fmt("sweep runtime %.0f s", elapsed_s(t0)));
  g.require(res.failures == 0, fmt("all %zu grid points solved", res.rows.size()));

  int count1 = 0, count2 = 0, bad_int = 0, bad_xbec = 0;
  double worst_int = 0.0, worst_xbec = 0.0;
  for (const auto& r : res.rows) {
    if (!r.ok || !(r.report.delta_n <= 0.05) || r.report.n_ph < 0.5) continue;
    int n = int(std::lround(r.report.n_ph));
    double dist = std::abs(r.report.n_ph - n);
    worst_int = std::max(worst_int, dist);
    worst_xbec = std::max(worst_xbec, r.report.x_bec);
    if (dist > 0.02) ++bad_int;
    if (!(r.report.x_bec <= 2.0 / 7.0)) ++bad_xbec;
    if (n == 1) ++count1;
    if (n == 2) ++count2;
  }
  g.require(count1 >= 20 && count2 >= 20,
            fmt("insulating regions detected (delta_n <= 0.05): n=1 at %d points, n=2 at %d",
                count1, count2));
  g.require(bad_int == 0,
            fmt("density integer to +/- 0.02 inside them (worst deviation %.4f)", worst_int));
  g.require(bad_xbec == 0,
            fmt("x_BEC <= 2/L inside them (worst %.4f vs %.4f)", worst_xbec, 2.0 / 7.0));

  int frag = 0, bad_sf = 0;
  double min_sf = 1.0;
  for (const auto& r : res.rows) {
    if (!r.ok || std::abs(r.j - 0.12) > 1e-9) continue;
    double dist = std::abs(r.report.n_ph - std::lround(r.report.n_ph));
    if (dist < 0.1) continue;  // integer density, not the superfluid-like check
    ++frag;
    min_sf = std::min(min_sf, r.report.x_bec);
    if (!(r.report.x_bec >= 0.8)) ++bad_sf;
  }
  g.require(frag > 0, fmt("non-integer-density points exist at J/U = 0.12 (%d found)", frag));
  g.require(bad_sf == 0, fmt("x_BEC >= 0.8 at those points (min %.4f)", min_sf));
  return g.finish();
}

// ---------------------------------------------------------------- criterion 3
int criterion3() {
  Gate g(3, "entropic transition: L = 5, mu = 0.55 U, exact solver over J/U in [0, 0.1]");
  auto t0 = Clock::now();
  SweepConfig cfg = preset_config("transition");
  SweepResult res = run_sweep(cfg);
  g.note(fmt("scan runtime %.0f s", elapsed_s(t0)));
  g.require(res.failures == 0, fmt("all %zu points solved", res.rows.size()));
  if (res.failures != 0) return g.finish();

  // locate the transition at the largest adjacent-step entropy rise
  int jump = -1;
  double rise = 0.0;
  for (std::size_t i = 1; i < res.rows.size(); ++i) {
    double d = res.rows[i].report.entropy - res.rows[i - 1].report.entropy;
    if (d > rise) {
      rise = d;
      jump = int(i);
    }
  }
  g.require(jump > 0 && rise > 0.2,
            jump > 0 ? fmt("transition located between J = %.3f and %.3f (step rise %.3f nats)",
                           res.rows[std::size_t(jump) - 1].j, res.rows[std::size_t(jump)].j, rise)
                     : "entropy step found on the J grid");
  if (jump <= 0 || rise <= 0.2) return g.finish();
  g.require(rise >= 0.5, fmt("discontinuous entropy rise %.3f nats >= 0.5", rise));

  double worst_f = 0.0, worst_pi = 0.0, lo_dn_min = 1e9, lo_dn_max = 0.0;
  for (int i = 0; i < jump; ++i) {
    const SteadyStateReport& r = res.rows[std::size_t(i)].report;
    worst_f = std::max(worst_f, std::abs(r.fidelity - 0.993));
    worst_pi = std::max(worst_pi, std::abs(r.pi0 - 0.993));
    lo_dn_min = std::min(lo_dn_min, r.delta_n);
    lo_dn_max = std::max(lo_dn_max, r.delta_n);
  }
  g.require(worst_f <= 0.01, fmt("below jump: F = 0.993 +/- 0.01 (worst |F-0.993| = %.4f)", worst_f));
  g.require(worst_pi <= 0.01,
            fmt("below jump: pi0 = 0.993 +/- 0.01 (worst |pi0-0.993| = %.4f)", worst_pi));
  g.require(lo_dn_min >= 0.006 && lo_dn_max <= 0.026,
            fmt("below jump: delta_n = 0.016 +/- 0.01 (range [%.4f, %.4f])", lo_dn_min, lo_dn_max));

  double hi_dn_min = 1e9, hi_dn_max = 0.0;
  for (std::size_t i = std::size_t(jump); i < res.rows.size(); ++i) {
    hi_dn_min = std::min(hi_dn_min, res.rows[i].report.delta_n);
    hi_dn_max = std::max(hi_dn_max, res.rows[i].report.delta_n);
  }
  // the fluctuating phase is characterized at the top of the scan; points
  // just past the jump are still crossing over
  double hi_dn = res.rows.back().report.delta_n;
  g.require(hi_dn >= 0.10 && hi_dn <= 0.16,
            fmt("above jump: delta_n = 0.13 +/- 0.03 at J = %.2f (%.4f)", res.rows.back().j, hi_dn));
  g.note(fmt("delta_n over the whole above-jump region: [%.4f, %.4f]", hi_dn_min, hi_dn_max));

  double min_ov = 1.0;
  for (const auto& r : res.rows) min_ov = std::min(min_ov, r.report.overlap);
  g.require(min_ov >= 0.999, fmt("|<psi_+|GS>|^2 >= 0.999 on both sides (min %.5f)", min_ov));
  return g.finish();
}

// ---------------------------------------------------------------- criterion 4
int criterion4() {
  Gate g(4, "realistic circuit-QED parameters: L = 3, J = 0, mu = 0.5 U");
  auto t0 = Clock::now();
  SweepConfig cfg = preset_config("circuit-qed");
  cfg.mu_lo = cfg.mu_hi = 0.5;
  cfg.mu_n = 1;
  cfg.j_lo = cfg.j_hi = 0.0;
  cfg.j_n = 1;
  SweepResult res = run_sweep(cfg);
  double runtime = elapsed_s(t0);
  g.require(res.failures == 0 && res.rows.size() == 1, "point solved");
  if (res.failures != 0) return g.finish();
  const SteadyStateReport& r = res.rows[0].report;
  g.require(std::abs(r.delta_n - 0.13) <= 0.03, fmt("delta_n = %.4f, target 0.13 +/- 0.03", r.delta_n));
  g.require(std::abs(r.t_eff - 0.10) <= 0.03, fmt("T_eff = %.4f U, target 0.10 +/- 0.03", r.t_eff));
  g.require(runtime < 60.0, fmt("runtime %.1f s < 1 min", runtime));
  return g.finish();
}

// ---------------------------------------------------------------- criterion 5
int criterion5() {
  Gate g(5, "improved scheme with square losses: purity and equilibrium match over the grid");
  auto t0 = Clock::now();
  SweepConfig cfg = preset_config("square-loss");
  SweepResult res = run_sweep(cfg);
  SweepResult ref = equilibrium_reference(cfg);
  g.note(fmt("sweep runtime %.0f s", elapsed_s(t0)));
  g.require(res.failures == 0, fmt("all %zu grid points solved", res.rows.size()));

  double max_s = 0.0, max_infid = 0.0, worst_n = 0.0, worst_x = 0.0;
  int skipped = 0;
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    if (!res.rows[i].ok) continue;
    const SteadyStateReport& r = res.rows[i].report;
    const SteadyStateReport& e = ref.rows[i].report;
    max_s = std::max(max_s, r.entropy);
    max_infid = std::max(max_infid, 1.0 - r.fidelity);
    worst_n = std::max(worst_n, std::abs(r.n_ph - e.n_ph) / std::max(e.n_ph, 1.0));
    if (e.x_bec_defined && r.x_bec_defined)
      worst_x = std::max(worst_x, std::abs(r.x_bec - e.x_bec) / e.x_bec);
    else
      ++skipped;
  }
  if (skipped > 0) g.note(fmt("%d points skipped in the x_BEC match (reference vacuum)", skipped));
  g.require(max_s <= 0.12, fmt("entropy <= 0.12 over the grid (max %.4f)", max_s));
  g.require(max_infid <= 0.012, fmt("1 - F <= 0.012 over the grid (max %.4f)", max_infid));
  g.require(worst_n <= 0.01, fmt("n_ph matches T = 0 reference to 1%% (worst %.4f)", worst_n));
  g.require(worst_x <= 0.01, fmt("x_BEC matches T = 0 reference to 1%% (worst %.4f)", worst_x));
  return g.finish();
}

// ---------------------------------------------------------------- criterion 6
int criterion6() {
  Gate g(6, "restricted emitter layouts on L = 4");
  auto t0 = Clock::now();

  // (a) two adjacent emitting sites, rate x L/2: first Mott lobe intact.
  // The lobe is the driven system's own n = 1 insulating region (small
  // number fluctuation, density rounding to one); at J = 0 the unpumped
  // sites are disconnected, so those points never qualify
  SweepConfig cfg = preset_config("two-site");
  SweepResult res = run_sweep(cfg);
  g.require(res.failures == 0, fmt("layout {0,1}: all %zu points solved", res.rows.size()));
  int lobe = 0, bad_n = 0, bad_s = 0;
  double worst_n = 0.0, worst_s = 0.0;
  for (const auto& row : res.rows) {
    if (!row.ok) continue;
    const SteadyStateReport& r = row.report;
    if (!(r.delta_n <= 0.05) || std::abs(r.n_ph - 1.0) >= 0.25) continue;
    ++lobe;
    worst_n = std::max(worst_n, std::abs(r.n_ph - 1.0));
    worst_s = std::max(worst_s, r.entropy);
    if (std::abs(r.n_ph - 1.0) > 0.02) ++bad_n;
    if (r.entropy > 0.1) ++bad_s;
  }
  g.require(lobe >= 20, fmt("first lobe contains %d grid points", lobe));
  g.require(bad_n == 0, fmt("density 1 +/- 0.02 in the lobe (worst deviation %.4f)", worst_n));
  g.require(bad_s == 0, fmt("entropy <= 0.1 in the lobe (worst %.4f)", worst_s));

  // (b) single emitting site on the ring: density profile peaks there
  auto basis_p = std::make_shared<const FockBasis>(4, 3, Boundary::periodic);
  EigenSystem es_p = diagonalize({0.0, 1.0, 0.05, 4, Boundary::periodic}, basis_p);
  DissipationParams dp = cfg.dissipation(0.55);
  dp.emitting_sites = {0};
  JumpOperatorSet js = build_jump_operators(es_p, dp);
  SteadyStateResult ss = exact_steady_state(js, dp);
  g.require(ss.converged, "layout {0} periodic: solver converged");
  ObservableContext ctx_p = ObservableContext::build(es_p);
  Eigen::VectorXd ni = density_profile(ss.rho, es_p, ctx_p);
  g.note(fmt("ring profile with emitter at site 0: %.4f %.4f %.4f %.4f", ni(0), ni(1), ni(2), ni(3)));
  g.require(ni(0) > ni(1) && ni(0) > ni(2) && ni(0) > ni(3),
            "density profile peaked at the emitting site");

  // (c) single end-site emitter on an open chain vs uniform pumping
  auto basis_o = std::make_shared<const FockBasis>(4, 3, Boundary::open);
  EigenSystem es_o = diagonalize({0.0, 1.0, 0.05, 4, Boundary::open}, basis_o);
  ObservableContext ctx_o = ObservableContext::build(es_o);
  GroundStateInfo gs_o = grand_canonical_ground_state(es_o, 0.55);
  DissipationParams dp_end = cfg.dissipation(0.55);
  dp_end.emitting_sites = {0};
  JumpOperatorSet js_end = build_jump_operators(es_o, dp_end);
  SteadyStateResult ss_end = exact_steady_state(js_end, dp_end);
  DissipationParams dp_uni = cfg.dissipation(0.55);
  dp_uni.emitting_sites.clear();
  JumpOperatorSet js_uni = build_jump_operators(es_o, dp_uni);
  SteadyStateResult ss_uni = exact_steady_state(js_uni, dp_uni);
  g.require(ss_end.converged && ss_uni.converged, "open-chain solves converged");
  double n_end = compute_report(ss_end.rho, es_o, gs_o, ctx_o).n_ph;
  double n_uni = compute_report(ss_uni.rho, es_o, gs_o, ctx_o).n_ph;
  g.require(std::abs(n_end - n_uni) <= 0.02 * n_uni,
            fmt("end-site pump n_ph = %.4f vs uniform %.4f (within 2%%)", n_end, n_uni));
  g.note(fmt("total runtime %.0f s", elapsed_s(t0)));
  return g.finish();
}

// ---------------------------------------------------------------- criterion 7
struct ModTrace {
  std::vector<double> t, n, var, p_target;
};

ModTrace run_modulated(int target, double speed, double rabi, double t_end, int samples) {
  // raw units: 2 pi MHz; U = 200, Gamma_p = 0.5, Gamma_l = 1e-3
  EmitterConfig cfg;
  cfg.n_max = target + 2;
  cfg.num_emitters = 1;
  cfg.interaction = 200.0;
  cfg.rabi = rabi;
  cfg.gamma_pump = 0.5;
  cfg.gamma_loss = 1e-3;
  MicroscopicModel model = build_microscopic(cfg);
  ModulationProfile prof{-20.0, target == 1 ? 100.0 : 300.0, speed};

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(model.dim, model.dim);
  rho(0, 0) = 1.0;
  std::vector<double> grid(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) grid[std::size_t(k)] = t_end * double(k + 1) / samples;

  ModTrace out;
  auto deriv = [&](double t, const Eigen::MatrixXcd& r) { return model.apply(prof.value(t), r); };
  auto record = [&](double t, const Eigen::MatrixXcd& r) {
    double n1 = (model.n_ph * r).trace().real();
    double n2 = (model.n_ph * model.n_ph * r).trace().real();
    double pt = 0.0;
    for (Eigen::Index s = 0; s < 2; ++s) pt += r(target * 2 + s, target * 2 + s).real();
    out.t.push_back(t);
    out.n.push_back(n1);
    out.var.push_back(std::max(0.0, n2 - n1 * n1));
    out.p_target.push_back(pt);
  };
  IntegrationOptions opts;
  opts.rtol = 1e-5;
  opts.atol = 1e-10;
  time_evolve(deriv, rho, 0.0, t_end, grid, record, opts);
  return out;
}

struct LateStats {
  double mean_dn = 0.0, mean_pi = 0.0, n_min = 1e9, n_max = -1e9;
};

LateStats late_window(const ModTrace& tr, double frac) {
  LateStats s;
  int count = 0;
  double t_lo = tr.t.back() * (1.0 - frac);
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    if (tr.t[i] < t_lo) continue;
    ++count;
    s.mean_dn += tr.n[i] > 1e-9 ? std::sqrt(tr.var[i]) / tr.n[i] : 0.0;
    s.mean_pi += 1.0 - tr.p_target[i];
    s.n_min = std::min(s.n_min, tr.n[i]);
    s.n_max = std::max(s.n_max, tr.n[i]);
  }
  s.mean_dn /= count;
  s.mean_pi /= count;
  return s;
}

int criterion7() {
  Gate g(7, "modulated emitter: late-time statistics and slow-sweep oscillations");
  const double t_end = 2400.0, frac = 0.25;
  const int samples = 1200;
  auto t0 = Clock::now();

  ModTrace n1 = run_modulated(1, 30.0, 0.97, t_end, samples);
  LateStats s1 = late_window(n1, frac);
  LateStats s1_prev = late_window(n1, 2.0 * frac);
  g.note(fmt("n = 1, v = 30: <N> = %.4f, delta_n = %.4f, non-target = %.4f",
             0.5 * (s1.n_min + s1.n_max), s1.mean_dn, s1.mean_pi));
  g.require(std::abs(s1.mean_dn - s1_prev.mean_dn) < 0.02,
            "late-time window is stationary (n = 1 run)");
  g.require(std::abs(s1.mean_dn - 0.17) <= 0.03,
            fmt("n = 1 target: late delta_n = %.4f, target 0.17 +/- 0.03", s1.mean_dn));
  g.require(std::abs(s1.mean_pi - 0.03) <= 0.02,
            fmt("n = 1 target: non-target-Fock probability = %.4f, target 0.03 +/- 0.02", s1.mean_pi));

  ModTrace n2 = run_modulated(2, 30.0, 1.15, t_end, samples);
  LateStats s2 = late_window(n2, frac);
  g.note(fmt("n = 2, v = 30: <N> = %.4f, delta_n = %.4f, non-target = %.4f",
             0.5 * (s2.n_min + s2.n_max), s2.mean_dn, s2.mean_pi));
  g.require(std::abs(s2.mean_dn - 0.12) <= 0.03,
            fmt("n = 2 target: late delta_n = %.4f, target 0.12 +/- 0.03", s2.mean_dn));
  g.require(std::abs(s2.mean_pi - 0.05) <= 0.02,
            fmt("n = 2 target: non-target-Fock probability = %.4f, target 0.05 +/- 0.02", s2.mean_pi));

  // slowest sweep: the n = 2 window leaves ~27 time units between resonance
  // crossings, so the loss-driven dip alone gives a resolvable peak-to-peak
  ModTrace slow = run_modulated(2, 7.5, 1.0, t_end, samples);
  LateStats ss = late_window(slow, frac);
  g.require(ss.n_max - ss.n_min >= 0.05,
            fmt("v = 7.5: persistent late-time oscillations, peak-to-peak = %.4f >= 0.05",
                ss.n_max - ss.n_min));
  g.note(fmt("total runtime %.0f s", elapsed_s(t0)));
  return g.finish();
}

// ---------------------------------------------------------------- criterion 8
int criterion8() {
  Gate g(8, "property suite: generator structure, oracles, gauge and kernel consistency");
  auto t0 = Clock::now();

  // trace preservation and Hermiticity on a random state
  {
    auto basis = std::make_shared<const FockBasis>(3, 2, Boundary::periodic);
    EigenSystem es = diagonalize({0.0, 1.0, 0.07, 3, Boundary::periodic}, basis);
    DissipationParams dp;
    dp.gamma_loss = 1e-4;
    dp.emission = SpectralFunction::square_emission(-39.45, 0.55, 1e-2, 1e-3);
    JumpOperatorSet js = build_jump_operators(es, dp);
    BlockDiagonal rho = BlockDiagonal::zero(es);
    unsigned state = 12345u;
    for (auto& b : rho.blocks) {
      for (Eigen::Index c = 0; c < b.cols(); ++c)
        for (Eigen::Index r = 0; r < b.rows(); ++r) {
          state = state * 1664525u + 1013904223u;
          double re = double(state >> 8) / double(1u << 24) - 0.5;
          state = state * 1664525u + 1013904223u;
          double im = double(state >> 8) / double(1u << 24) - 0.5;
          b(r, c) = Complex(re, im);
        }
      b = (b * b.adjoint()).eval();
    }
    Complex tr = rho.trace();
    for (auto& b : rho.blocks) b /= tr;
    BlockDiagonal out = apply_generator(js, rho);
    g.require(std::abs(out.trace()) < 1e-14, "generator preserves the trace on random input");
    double herm = 0.0;
    for (const auto& b : out.blocks) herm = std::max(herm, (b - b.adjoint()).norm());
    g.require(herm < 1e-13, "generator preserves Hermiticity on random input");
  }

  // flat spectrum: modified jumps reduce to the bare ones
  {
    auto basis = std::make_shared<const FockBasis>(2, 3, Boundary::open);
    EigenSystem es = diagonalize({0.0, 1.0, 0.11, 2, Boundary::open}, basis);
    DissipationParams dp;
    dp.gamma_loss = 0.1;
    dp.emission = SpectralFunction::flat_spectrum(0.4);
    JumpOperatorSet js = build_jump_operators(es, dp);
    double worst = 0.0;
    for (std::size_t k = 0; k < js.em_mod.size(); ++k)
      for (std::size_t N = 0; N < js.em_mod[k].size(); ++N)
        worst = std::max(worst, (js.em_mod[k][N] - js.bare[js.sites[k]][N]).norm());
    g.require(worst <= 1e-12, fmt("flat spectrum: atilde = a (max deviation %.2g)", worst));
  }

  // geometric single-cavity distribution vs the analytic oracle
  {
    auto basis = std::make_shared<const FockBasis>(1, 5, Boundary::open);
    EigenSystem es = diagonalize({0.0, 1.0, 0.0, 1, Boundary::open}, basis);
    DissipationParams dp;
    dp.gamma_loss = 1e-4;
    dp.emission = SpectralFunction::square_emission(-30.0, 30.0, 1e-6, 3e-4);
    JumpOperatorSet js = build_jump_operators(es, dp);
    SteadyStateResult ss = exact_steady_state(js, dp);
    double r = 3.0, norm = 0.0, q = 1.0;
    for (int N = 0; N <= 5; ++N, q *= r) norm += q;
    double worst = 0.0;
    q = 1.0;
    for (int N = 0; N <= 5; ++N, q *= r)
      worst = std::max(worst, std::abs(ss.rho.blocks[std::size_t(N)](0, 0).real() - q / norm));
    g.require(ss.converged && worst <= 1e-6,
              fmt("geometric single-cavity distribution (max deviation %.2g)", worst));
  }

  // secular = exact at J = 0
  {
    auto basis = std::make_shared<const FockBasis>(2, 3, Boundary::open);
    EigenSystem es = diagonalize({0.0, 1.0, 0.0, 2, Boundary::open}, basis);
    DissipationParams dp;
    dp.gamma_loss = 1e-10;  // keeps the dense-solve round-off below 1e-9
    dp.emission = SpectralFunction::square_emission(-39.45, 0.55, 1e-6, 1e-8);
    JumpOperatorSet js = build_jump_operators(es, dp);
    SteadyStateResult exact = exact_steady_state(js, dp);
    SteadyStateResult secular = secular_steady_state_blocks(es, dp);
    double worst = 0.0;
    for (std::size_t N = 0; N < exact.rho.blocks.size(); ++N)
      worst = std::max(worst, (exact.rho.blocks[N] - secular.rho.blocks[N]).norm());
    g.require(exact.converged && worst <= 1e-9,
              fmt("secular = exact at J = 0 (max block deviation %.2g)", worst));
  }

  // secular vs exact observables at the idealized L = 3 point
  {
    SweepConfig cfg = preset_config("idealized");
    cfg.sites = 3;
    cfg.mu_lo = cfg.mu_hi = 0.55;
    cfg.mu_n = 1;
    cfg.j_lo = cfg.j_hi = 0.05;
    cfg.j_n = 1;
    cfg.solver = SolverKind::secular;
    SweepResult sec = run_sweep(cfg);
    cfg.solver = SolverKind::exact_dense;
    SweepResult exa = run_sweep(cfg);
    bool ok = sec.failures == 0 && exa.failures == 0;
    double worst = 0.0;
    if (ok) {
      const SteadyStateReport& a = sec.rows[0].report;
      const SteadyStateReport& b = exa.rows[0].report;
      worst = std::max({std::abs(a.n_ph - b.n_ph), std::abs(a.x_bec - b.x_bec),
                        std::abs(a.delta_n - b.delta_n), std::abs(a.entropy - b.entropy),
                        std::abs(a.fidelity - b.fidelity)});
    }
    g.require(ok && worst <= 1e-4,
              fmt("secular vs exact observables at L = 3 (max deviation %.2g)", worst));
  }

  // rotating-frame gauge invariance
  {
    auto basis = std::make_shared<const FockBasis>(3, 2, Boundary::periodic);
    DissipationParams dp;
    // rates sized so the bordered solve stays well conditioned at 1e-10
    dp.gamma_loss = 1e-4;
    dp.emission = SpectralFunction::square_emission(-39.45, 0.55, 1e-6, 2e-4);
    EigenSystem es0 = diagonalize({0.0, 1.0, 0.05, 3, Boundary::periodic}, basis);
    SteadyStateResult s0 = exact_steady_state(build_jump_operators(es0, dp), dp);
    DissipationParams dp1 = dp;
    dp1.emission.omega_lo += 0.73;
    dp1.emission.omega_hi += 0.73;
    EigenSystem es1 = diagonalize({0.73, 1.0, 0.05, 3, Boundary::periodic}, basis);
    SteadyStateResult s1 = exact_steady_state(build_jump_operators(es1, dp1), dp1);
    // compare in the Fock basis (eigenvector conventions may differ)
    double worst = 0.0;
    for (std::size_t N = 0; N < s0.rho.blocks.size(); ++N) {
      const Eigen::MatrixXd& v0 = es0.vectors[int(N)];
      const Eigen::MatrixXd& v1 = es1.vectors[int(N)];
      worst = std::max(worst, (v0 * s0.rho.blocks[N] * v0.transpose() -
                               v1 * s1.rho.blocks[N] * v1.transpose())
                                  .norm());
    }
    g.require(s0.converged && s1.converged && worst <= 1e-10,
              fmt("gauge invariance under global frequency shift (deviation %.2g)", worst));
  }

  // kernel <-> spectrum Fourier consistency (trapezoidal half transform)
  {
    auto s = SpectralFunction::square_emission(-5.0, 0.0, 1.0, 0.9);
    double worst = 0.0;
    for (double w : {-2.5, -0.3, 1.0}) {
      std::complex<double> acc = 0.0;
      const double upper = 40.0, h = 2e-4;  // envelope decays as exp(-tau/2)
      std::complex<double> prev = 0.0;      // kernel(0+) term handled by the tiny offset
      for (double tau = h; tau <= upper; tau += h) {
        std::complex<double> cur =
            s.memory_kernel(tau) * std::exp(std::complex<double>(0.0, w * tau));
        acc += 0.5 * (prev + cur) * h;
        prev = cur;
      }
      acc += 0.5 * s.memory_kernel(h * 0.5) * h;  // leading sliver
      worst = std::max(worst, std::abs(acc - s.kernel_ft(w)));
    }
    g.require(worst <= 1e-4 * s.peak_rate,
              fmt("kernel half-Fourier transform matches S/2 - i delta (deviation %.2g)", worst));
  }

  // Lamb shift bound on the idealized preset
  {
    SweepConfig cfg = preset_config("idealized");
    DissipationParams dp = cfg.dissipation(0.55);
    double worst = 0.0;
    for (double w = dp.emission.omega_lo - 1.0; w <= dp.emission.omega_hi + 1.0; w += 1e-4)
      worst = std::max(worst, std::abs(dp.emission.lamb(w)));
    g.require(worst <= 10.0 * cfg.gamma_em0,
              fmt("|lamb shift| <= 10 Gamma_em^0 everywhere (max %.3g vs %.3g)", worst,
                  10.0 * cfg.gamma_em0));
  }

  double runtime = elapsed_s(t0);
  g.require(runtime < 60.0, fmt("property suite runtime %.1f s < 1 min", runtime));
  return g.finish();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: acceptance <criterion 1..8>\n";
    return 2;
  }
  switch (std::atoi(argv[1])) {
    case 1: return criterion1();
    case 2: return criterion2();
    case 3: return criterion3();
    case 4: return criterion4();
    case 5: return criterion5();
    case 6: return criterion6();
    case 7: return criterion7();
    case 8: return criterion8();
    default:
      std::cerr << "usage: acceptance <criterion 1..8>\n";
      return 2;
  }
}
