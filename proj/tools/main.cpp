#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/program_options.hpp>
#include <nlohmann/json.hpp>

#include "sqpump/sqpump.hpp"

namespace po = boost::program_options;
using nlohmann::json;

namespace {

const char* kUsage = R"(usage: sqpump <command> [options]

commands:
  spectrum       sample the reservoir spectral function and Lamb shift
  single-cavity  single-site density scan for a list of edge widths
  steady         steady state at one (mu, J) point
  sweep          steady-state scan over the (mu, J) grid
  equilibrium    T = 0 grand-canonical reference on the same grid
  modulated      time evolution of the modulated cavity-emitter model
  crosscheck     joint cavity-emitter model vs. the reservoir description

run 'sqpump <command> --help' for the command options.
)";

sqpump::SolverKind parse_solver(const std::string& s) {
  if (s == "secular") return sqpump::SolverKind::secular;
  if (s == "exact_dense") return sqpump::SolverKind::exact_dense;
  if (s == "exact_iterative") return sqpump::SolverKind::exact_iterative;
  throw std::invalid_argument("unknown solver '" + s +
                              "' (expected secular, exact_dense or exact_iterative)");
}

void apply_json(const json& j, sqpump::SweepConfig& c) {
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("sites", c.sites);
  get("n_max", c.n_max);
  if (j.contains("boundary")) {
    std::string b = j.at("boundary").get<std::string>();
    if (b == "open")
      c.boundary = sqpump::Boundary::open;
    else if (b == "periodic")
      c.boundary = sqpump::Boundary::periodic;
    else
      throw std::invalid_argument("boundary must be 'open' or 'periodic'");
  }
  get("gamma_l", c.gamma_l);
  get("gamma_em0", c.gamma_em0);
  get("delta_em", c.delta_em);
  get("omega_minus_offset", c.omega_minus_offset);
  get("loss_enabled", c.loss_enabled);
  get("gamma_l0", c.gamma_l0);
  get("delta_l", c.delta_l);
  get("loss_window_from_plus", c.loss_window_from_plus);
  get("loss_span", c.loss_span);
  get("mu_lo", c.mu_lo);
  get("mu_hi", c.mu_hi);
  get("mu_n", c.mu_n);
  get("j_lo", c.j_lo);
  get("j_hi", c.j_hi);
  get("j_n", c.j_n);
  get("layout", c.layout);
  get("layout_rescale", c.layout_rescale);
  get("lamb_shift", c.lamb_shift);
  get("workers", c.workers);
  if (j.contains("solver")) c.solver = parse_solver(j.at("solver").get<std::string>());
}

struct CommonArgs {
  sqpump::SweepConfig cfg;
  std::string out;
  json extra;  // full config document, for command-specific sections
};

po::options_description common_options(CommonArgs& a, std::optional<double>& mu,
                                       std::optional<double>& jj, std::optional<int>& sites,
                                       std::optional<int>& nmax, std::optional<std::string>& solver,
                                       std::optional<int>& workers, std::string& config_path,
                                       std::string& preset) {
  po::options_description desc("options");
  desc.add_options()
      ("help,h", "show help")
      ("config", po::value<std::string>(&config_path), "JSON configuration file")
      ("preset", po::value<std::string>(&preset),
       "named parameter set (plateau, idealized, circuit-qed, transition, square-loss, two-site)")
      ("out", po::value<std::string>(&a.out), "output file (default: stdout)")
      ("mu", po::value<double>()->notifier([&](double v) { mu = v; }),
       "chemical potential mu/U (collapses the mu grid to one point)")
      ("j", po::value<double>()->notifier([&](double v) { jj = v; }),
       "hopping J/U (collapses the J grid to one point)")
      ("sites", po::value<int>()->notifier([&](int v) { sites = v; }), "number of lattice sites")
      ("nmax", po::value<int>()->notifier([&](int v) { nmax = v; }), "per-site photon cutoff")
      ("solver", po::value<std::string>()->notifier([&](const std::string& v) { solver = v; }),
       "secular | exact_dense | exact_iterative")
      ("workers", po::value<int>()->notifier([&](int v) { workers = v; }),
       "worker threads (0 = hardware concurrency)");
  return desc;
}

CommonArgs parse_common(const std::vector<std::string>& args, const std::string& cmd,
                        const po::options_description* cmd_extra, po::variables_map& vm) {
  CommonArgs a;
  std::optional<double> mu, jj;
  std::optional<int> sites, nmax, workers;
  std::optional<std::string> solver;
  std::string config_path, preset;
  po::options_description desc =
      common_options(a, mu, jj, sites, nmax, solver, workers, config_path, preset);
  if (cmd_extra) desc.add(*cmd_extra);
  po::store(po::command_line_parser(args).options(desc).run(), vm);
  if (vm.count("help")) {
    std::cout << "usage: sqpump " << cmd << " [options]\n" << desc << "\n";
    std::exit(0);
  }
  po::notify(vm);

  if (!preset.empty()) a.cfg = sqpump::preset_config(preset);
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open config file: " + config_path);
    in >> a.extra;
    apply_json(a.extra, a.cfg);
  }
  if (sites) a.cfg.sites = *sites;
  if (nmax) a.cfg.n_max = *nmax;
  if (solver) a.cfg.solver = parse_solver(*solver);
  if (workers) a.cfg.workers = *workers;
  if (mu) {
    a.cfg.mu_lo = a.cfg.mu_hi = *mu;
    a.cfg.mu_n = 1;
  }
  if (jj) {
    a.cfg.j_lo = a.cfg.j_hi = *jj;
    a.cfg.j_n = 1;
  }
  return a;
}

struct OutputStream {
  std::ofstream file;
  std::ostream* os = &std::cout;
  explicit OutputStream(const std::string& path) {
    if (!path.empty()) {
      file.open(path);
      if (!file) throw std::runtime_error("cannot open output file: " + path);
      os = &file;
    }
  }
  std::ostream& get() { return *os; }
};

int emit_sweep_result(const sqpump::SweepResult& res, const std::string& out,
                      const std::string& title) {
  OutputStream stream(out);
  sqpump::write_csv(stream.get(), res, title);
  if (res.degeneracy_warning)
    std::cerr << "warning: near-degenerate eigenfrequencies encountered; "
                 "secular rates may be inaccurate there\n";
  if (res.failures > 0) {
    std::cerr << "error: " << res.failures << " of " << res.rows.size()
              << " grid points failed\n";
    return 1;
  }
  return 0;
}

int cmd_spectrum(const std::vector<std::string>& args) {
  double lo = 0.0, hi = 0.0, mu = 0.55;
  int samples = 1000;
  po::options_description extra("spectrum options");
  extra.add_options()
      ("omega-lo", po::value<double>(&lo), "sample range start (default: window - 10 %)")
      ("omega-hi", po::value<double>(&hi), "sample range end")
      ("samples", po::value<int>(&samples), "number of sample points");
  po::variables_map vm;
  CommonArgs a = parse_common(args, "spectrum", &extra, vm);
  if (vm.count("mu")) mu = vm["mu"].as<double>();

  sqpump::DissipationParams dp = a.cfg.dissipation(mu);
  double width = dp.emission.omega_hi - dp.emission.omega_lo;
  if (!vm.count("omega-lo")) lo = dp.emission.omega_lo - 0.1 * width;
  if (!vm.count("omega-hi"))
    hi = (dp.loss_spectrum ? dp.loss_spectrum->omega_hi : dp.emission.omega_hi) + 0.1 * width;
  if (samples < 2 || !(lo < hi)) throw std::invalid_argument("invalid sample range");

  OutputStream stream(a.out);
  std::ostream& os = stream.get();
  os << "omega_over_U,s_em,S_em,lamb_em";
  if (dp.loss_spectrum) os << ",s_loss,S_loss,lamb_loss";
  os << "\n";
  char buf[256];
  for (int k = 0; k < samples; ++k) {
    double w = lo + (hi - lo) * k / (samples - 1);
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g", w, dp.emission.shape(w),
                  dp.emission.value(w), dp.emission.lamb(w));
    os << buf;
    if (dp.loss_spectrum) {
      std::snprintf(buf, sizeof buf, ",%.12g,%.12g,%.12g", dp.loss_spectrum->shape(w),
                    dp.loss_spectrum->value(w), dp.loss_spectrum->lamb(w));
      os << buf;
    }
    os << "\n";
  }
  return 0;
}

int cmd_single_cavity(const std::vector<std::string>& args) {
  std::string delta_arg = "3,1,0.1,0.01";
  po::options_description extra("single-cavity options");
  extra.add_options()("delta", po::value<std::string>(&delta_arg),
                      "comma-separated list of edge widths Delta/U");
  po::variables_map vm;
  CommonArgs a = parse_common(args, "single-cavity", &extra, vm);
  if (!vm.count("preset") && !vm.count("config")) a.cfg = sqpump::preset_config("plateau");

  std::vector<double> deltas;
  std::stringstream ss(delta_arg);
  for (std::string tok; std::getline(ss, tok, ',');) deltas.push_back(std::stod(tok));
  if (deltas.empty()) throw std::invalid_argument("empty --delta list");

  auto scans = sqpump::single_cavity_scan(a.cfg, deltas);
  OutputStream stream(a.out);
  int failures = 0;
  for (const auto& [delta, res] : scans) {
    std::ostringstream title;
    title << "single-cavity delta=" << delta;
    sqpump::write_csv(stream.get(), res, title.str());
    failures += res.failures;
  }
  if (failures > 0) {
    std::cerr << "error: " << failures << " grid points failed\n";
    return 1;
  }
  return 0;
}

int cmd_steady(const std::vector<std::string>& args) {
  po::variables_map vm;
  CommonArgs a = parse_common(args, "steady", nullptr, vm);
  if (!vm.count("mu") || !vm.count("j"))
    throw std::invalid_argument("steady requires --mu and --j");
  return emit_sweep_result(sqpump::run_sweep(a.cfg), a.out, "steady");
}

int cmd_sweep(const std::vector<std::string>& args) {
  po::variables_map vm;
  CommonArgs a = parse_common(args, "sweep", nullptr, vm);
  return emit_sweep_result(sqpump::run_sweep(a.cfg), a.out, "sweep");
}

int cmd_equilibrium(const std::vector<std::string>& args) {
  po::variables_map vm;
  CommonArgs a = parse_common(args, "equilibrium", nullptr, vm);
  return emit_sweep_result(sqpump::equilibrium_reference(a.cfg), a.out, "equilibrium");
}

sqpump::EmitterConfig emitter_from_json(const json& j) {
  sqpump::EmitterConfig cfg;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("n_max", cfg.n_max);
  get("num_emitters", cfg.num_emitters);
  get("omega_cav", cfg.omega_cav);
  get("interaction", cfg.interaction);
  get("omega_at", cfg.omega_at);
  get("rabi", cfg.rabi);
  get("gamma_pump", cfg.gamma_pump);
  get("gamma_loss", cfg.gamma_loss);
  return cfg;
}

int cmd_modulated(const std::vector<std::string>& args) {
  // defaults: the n = 1 stabilization point in units of U = 1 (2 pi x 200 MHz)
  int target = 1;
  double speed = 30.0 / 200.0, rabi = 0.97 / 200.0, t_end = 0.0;
  int samples = 400;
  po::options_description extra("modulated options");
  extra.add_options()
      ("target", po::value<int>(&target), "target photon number (1 or 2), sets the defaults")
      ("speed", po::value<double>(&speed), "sweep speed |d omega/dt| in U^2")
      ("rabi", po::value<double>(&rabi), "Rabi coupling Omega_R / U")
      ("t-end", po::value<double>(&t_end), "evolution time in 1/U (default: 4 / gamma_loss)")
      ("samples", po::value<int>(&samples), "number of recorded samples");
  po::variables_map vm;
  CommonArgs a = parse_common(args, "modulated", &extra, vm);

  sqpump::EmitterConfig cfg;
  cfg.interaction = 1.0;
  cfg.gamma_pump = 0.5 / 200.0;
  cfg.gamma_loss = 1e-3 / 200.0;
  cfg.n_max = target + 2;
  double omega_lo = -20.0 / 200.0;
  double omega_hi = target == 1 ? 100.0 / 200.0 : 300.0 / 200.0;  // W = 0.6 U or 1.6 U
  if (target == 2 && !vm.count("rabi")) rabi = 1.15 / 200.0;
  if (a.extra.contains("modulated")) {
    const json& m = a.extra.at("modulated");
    cfg = emitter_from_json(m);
    cfg.interaction = cfg.interaction == 0.0 ? 1.0 : cfg.interaction;
    if (m.contains("omega_lo")) omega_lo = m.at("omega_lo").get<double>();
    if (m.contains("omega_hi")) omega_hi = m.at("omega_hi").get<double>();
    if (m.contains("speed")) speed = m.at("speed").get<double>();
    if (m.contains("t_end")) t_end = m.at("t_end").get<double>();
    if (m.contains("samples")) samples = m.at("samples").get<int>();
  }
  if (vm.count("rabi") || !a.extra.contains("modulated")) cfg.rabi = rabi;
  if (t_end <= 0.0) t_end = 4.0 / cfg.gamma_loss;

  sqpump::MicroscopicModel model = sqpump::build_microscopic(cfg);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(model.dim, model.dim);
  rho(0, 0) = 1.0;  // photon vacuum, emitter ground state
  sqpump::ModulationProfile profile{omega_lo, omega_hi, speed};
  auto trace = sqpump::evolve_modulated(model, profile, rho, t_end, samples);

  OutputStream stream(a.out);
  std::ostream& os = stream.get();
  os << "time,n_mean,n_var,delta_n\n";
  char buf[160];
  for (const auto& s : trace) {
    double dn = s.n_mean > 1e-12 ? std::sqrt(s.n_var) / s.n_mean
                                 : std::numeric_limits<double>::quiet_NaN();
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g\n", s.time, s.n_mean, s.n_var, dn);
    os << buf;
  }
  return 0;
}

int cmd_crosscheck(const std::vector<std::string>& args) {
  double rabi = 0.005, gamma_pump = 0.1, gamma_loss = 2.5e-5, omega_at = 0.0;
  int n_max = 3;
  po::options_description extra("crosscheck options");
  extra.add_options()
      ("rabi", po::value<double>(&rabi), "Rabi coupling Omega_R / U")
      ("gamma-pump", po::value<double>(&gamma_pump), "emitter pump rate / U")
      ("gamma-loss", po::value<double>(&gamma_loss), "photon loss rate / U")
      ("omega-at", po::value<double>(&omega_at), "static emitter frequency / U")
      ("cutoff", po::value<int>(&n_max), "photon cutoff");
  po::variables_map vm;
  CommonArgs a = parse_common(args, "crosscheck", &extra, vm);
  if (a.extra.contains("crosscheck")) {
    sqpump::EmitterConfig c = emitter_from_json(a.extra.at("crosscheck"));
    n_max = c.n_max;
    rabi = c.rabi;
    gamma_pump = c.gamma_pump;
    gamma_loss = c.gamma_loss;
    omega_at = c.omega_at;
  }

  sqpump::EmitterConfig cfg;
  cfg.n_max = n_max;
  cfg.num_emitters = 1;
  cfg.interaction = 1.0;
  cfg.omega_at = omega_at;
  cfg.rabi = rabi;
  cfg.gamma_pump = gamma_pump;
  cfg.gamma_loss = gamma_loss;
  sqpump::MicroscopicModel model = sqpump::build_microscopic(cfg);
  Eigen::MatrixXcd joint = sqpump::microscopic_steady_state(model, omega_at);
  Eigen::MatrixXcd ph = sqpump::photon_reduced(joint, n_max, 1);

  auto basis = std::make_shared<const sqpump::FockBasis>(1, n_max, sqpump::Boundary::open);
  sqpump::EigenSystem es = sqpump::diagonalize({0.0, 1.0, 0.0, 1, sqpump::Boundary::open}, basis);
  sqpump::DissipationParams dp;
  dp.gamma_loss = gamma_loss;
  dp.emission = cfg.emission_line();
  sqpump::JumpOperatorSet js = sqpump::build_jump_operators(es, dp);
  sqpump::SteadyStateResult ss = sqpump::exact_steady_state(js, dp);
  if (!ss.converged) throw std::runtime_error("reservoir steady-state solve did not converge");

  OutputStream stream(a.out);
  std::ostream& os = stream.get();
  os << "n,p_microscopic,p_reservoir\n";
  double n_micro = 0.0, n_res = 0.0, worst = 0.0;
  char buf[128];
  for (int N = 0; N <= n_max; ++N) {
    double pm = ph(N, N).real();
    double pr = ss.rho.blocks[std::size_t(N)](0, 0).real();
    n_micro += N * pm;
    n_res += N * pr;
    worst = std::max(worst, std::abs(pm - pr));
    std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g\n", N, pm, pr);
    os << buf;
  }
  std::snprintf(buf, sizeof buf,
                "# n_ph microscopic = %.6g, reservoir = %.6g, max population deviation = %.3g\n",
                n_micro, n_res, worst);
  os << buf;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << kUsage;
    return 2;
  }
  std::string cmd = argv[1];
  std::vector<std::string> args(argv + 2, argv + argc);
  try {
    if (cmd == "spectrum") return cmd_spectrum(args);
    if (cmd == "single-cavity") return cmd_single_cavity(args);
    if (cmd == "steady") return cmd_steady(args);
    if (cmd == "sweep") return cmd_sweep(args);
    if (cmd == "equilibrium") return cmd_equilibrium(args);
    if (cmd == "modulated") return cmd_modulated(args);
    if (cmd == "crosscheck") return cmd_crosscheck(args);
    if (cmd == "--help" || cmd == "-h" || cmd == "help") {
      std::cout << kUsage;
      return 0;
    }
    std::cerr << "unknown command '" << cmd << "'\n" << kUsage;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
