#include "gfc/cli.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "gfc/arma1.hpp"
#include "gfc/cover_pombra.hpp"
#include "gfc/filter.hpp"
#include "gfc/sk_coding.hpp"
#include "gfc/spectrum.hpp"
#include "gfc/variational.hpp"
#include "gfc/waterfilling.hpp"

namespace gfc {
namespace {

constexpr double kLn2 = 0.69314718055994531;

// Shortest round-trip decimal form, independent of the global locale.
std::string fmt17(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

using Value = std::variant<double, long long, bool>;

struct Field {
  std::string key;
  Value value;
};

std::string render(const Value& v) {
  if (std::holds_alternative<double>(v)) return fmt17(std::get<double>(v));
  if (std::holds_alternative<long long>(v)) return std::to_string(std::get<long long>(v));
  return std::get<bool>(v) ? "true" : "false";
}

void emit_fields(std::ostream& out, const std::vector<Field>& fields, bool json) {
  if (json) {
    out << '{';
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out << ',';
      out << '"' << fields[i].key << "\":" << render(fields[i].value);
    }
    out << "}\n";
    return;
  }
  for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << fields[i].key;
  out << '\n';
  for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << render(fields[i].value);
  out << '\n';
}

void emit_table(std::ostream& out, const std::vector<std::string>& names,
                const std::vector<std::vector<double>>& cols, bool json) {
  if (json) {
    out << '{';
    for (std::size_t c = 0; c < names.size(); ++c) {
      if (c) out << ',';
      out << '"' << names[c] << "\":[";
      for (std::size_t r = 0; r < cols[c].size(); ++r) {
        if (r) out << ',';
        out << fmt17(cols[c][r]);
      }
      out << ']';
    }
    out << "}\n";
    return;
  }
  for (std::size_t c = 0; c < names.size(); ++c) out << (c ? "," : "") << names[c];
  out << '\n';
  for (std::size_t r = 0; r < cols.front().size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << fmt17(cols[c][r]);
    out << '\n';
  }
}

// Arguments whose first non-space character is '{' are inline JSON; anything
// else is a file path.
std::string load_text_arg(const std::string& arg, const char* what) {
  auto i = arg.find_first_not_of(" \t\r\n");
  if (i != std::string::npos && arg[i] == '{') return arg;
  std::ifstream in(arg);
  if (!in) throw std::invalid_argument(std::string(what) + ": cannot read file '" + arg + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

struct Globals {
  bool bits = false;
  std::uint64_t seed = 0;
  int grid = kDefaultGrid;
  bool json = false;
  bool csv = false;

  void check() const {
    if (grid < 8 || (grid & (grid - 1)) != 0)
      throw std::invalid_argument("grid-size must be a power of two >= 8");
  }
  bool use_json(bool fallback) const { return json ? true : (csv ? false : fallback); }
  // Rates are computed in nats; --bits only rescales the report.
  double rate_out(double nats) const { return bits ? nats / kLn2 : nats; }
  double rate_in(double value) const { return bits ? value * kLn2 : value; }
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"capacity toolkit for stationary additive Gaussian noise channels"};
  app.require_subcommand(1);

  Globals g;
  app.add_flag("--bits", g.bits, "report rates in bits instead of nats");
  app.add_option("--seed", g.seed, "base seed for all randomized commands");
  app.add_option("--grid-size", g.grid, "spectral quadrature grid size (power of two >= 8)");
  auto* opt_json = app.add_flag("--json", g.json, "force JSON output");
  auto* opt_csv = app.add_flag("--csv", g.csv, "force CSV output");
  opt_json->excludes(opt_csv);
  opt_csv->excludes(opt_json);

  auto* cap = app.add_subcommand("capacity", "capacity computations");
  cap->require_subcommand(1);
  auto* ver = app.add_subcommand("verify", "optimality certificates");
  ver->require_subcommand(1);
  auto* evl = app.add_subcommand("eval", "objective evaluation");
  evl->require_subcommand(1);
  auto* sim = app.add_subcommand("simulate", "coding-scheme simulations");
  sim->require_subcommand(1);
  for (auto* s : {cap, ver, evl, sim}) s->fallthrough();

  // --- capacity nofb ---------------------------------------------------
  struct {
    std::string channel;
    double power = 0.0;
    double tol = 1e-10;
  } nofb;
  auto* c_nofb = cap->add_subcommand("nofb", "nonfeedback capacity by water-filling");
  c_nofb->add_option("--channel", nofb.channel, "noise spectrum (JSON file or inline)")->required();
  c_nofb->add_option("--power", nofb.power, "average power constraint")->required();
  c_nofb->add_option("--tol", nofb.tol, "water-level power tolerance");
  c_nofb->callback([&] {
    g.check();
    auto spec = spectrum_from_json(load_text_arg(nofb.channel, "channel"));
    auto res = capacity_nofb(spec, nofb.power, g.grid, nofb.tol);
    emit_fields(out,
                {{"lambda", res.lambda},
                 {"capacity", g.rate_out(res.capacity)},
                 {"power_used", res.power_used}},
                g.use_json(true));
  });

  // --- capacity fb-arma1 -----------------------------------------------
  struct {
    double power = 0.0, alpha = 0.0, beta = 0.0;
    std::string emit_filter;
  } fa;
  auto* c_fa = cap->add_subcommand("fb-arma1", "closed-form ARMA(1) feedback capacity");
  c_fa->add_option("--power", fa.power, "average power constraint")->required();
  c_fa->add_option("--alpha", fa.alpha, "moving-average coefficient")->required();
  c_fa->add_option("--beta", fa.beta, "autoregressive coefficient")->required();
  c_fa->add_option("--emit-filter", fa.emit_filter, "write the optimal feedback filter as JSON");
  c_fa->callback([&] {
    g.check();
    auto sol = solve_x0(fa.power, fa.alpha, fa.beta);
    if (!fa.emit_filter.empty()) {
      if (!sol.filter)
        throw std::runtime_error("no rational filter available at |alpha| = 1");
      write_file(fa.emit_filter, filter_to_json(*sol.filter));
    }
    emit_fields(out,
                {{"x0", sol.x0},
                 {"capacity", g.rate_out(sol.capacity)},
                 {"sigma", sol.sigma},
                 {"y", sol.y},
                 {"implied_power", sol.implied_power}},
                g.use_json(true));
  });

  // --- capacity fb-block -----------------------------------------------
  struct {
    std::string channel, emit_strategy;
    double power = 0.0;
    int n = 0;
    int restarts = 8;
  } fb;
  auto* c_fb = cap->add_subcommand("fb-block", "finite-block feedback lower bound");
  c_fb->add_option("--channel", fb.channel, "noise spectrum (JSON file or inline)")->required();
  c_fb->add_option("--power", fb.power, "average power constraint")->required();
  c_fb->add_option("--n", fb.n, "block length")->required();
  c_fb->add_option("--restarts", fb.restarts, "optimizer restarts (first is deterministic)");
  c_fb->add_option("--emit-strategy", fb.emit_strategy, "write the best strategy as JSON");
  c_fb->callback([&] {
    g.check();
    auto spec = spectrum_from_json(load_text_arg(fb.channel, "channel"));
    OptimizeOptions opts;
    opts.restarts = fb.restarts;
    opts.seed = g.seed;
    auto res = optimize(spec, fb.n, fb.power, opts);
    if (!fb.emit_strategy.empty()) write_file(fb.emit_strategy, strategy_to_json(res.strategy));
    emit_fields(out,
                {{"n", static_cast<long long>(fb.n)},
                 {"rate", g.rate_out(res.rate)},
                 {"power", res.power},
                 {"iterations", static_cast<long long>(res.iterations)},
                 {"converged", res.converged}},
                g.use_json(true));
  });

  // --- capacity fb-block-eval ------------------------------------------
  struct {
    std::string strategy, channel;
  } fe;
  auto* c_fe = cap->add_subcommand("fb-block-eval", "rate and power of a stored block strategy");
  c_fe->add_option("--strategy", fe.strategy, "strategy (JSON file or inline)")->required();
  c_fe->add_option("--channel", fe.channel, "noise spectrum (JSON file or inline)")->required();
  c_fe->callback([&] {
    g.check();
    auto strat = strategy_from_json(load_text_arg(fe.strategy, "strategy"));
    auto spec = spectrum_from_json(load_text_arg(fe.channel, "channel"));
    auto kz = noise_covariance(spec, strat.n, g.grid);
    auto br = evaluate_block_rate(strat, kz);
    emit_fields(out,
                {{"n", static_cast<long long>(strat.n)},
                 {"rate", g.rate_out(br.rate)},
                 {"power", br.power}},
                g.use_json(true));
  });

  // --- verify filter ----------------------------------------------------
  struct {
    std::string channel, filter;
    double power = 0.0;
    double lambda = 0.0;
  } vf;
  auto* v_f = ver->add_subcommand("filter", "sufficient optimality condition for a feedback filter");
  v_f->add_option("--channel", vf.channel, "noise spectrum (JSON file or inline)")->required();
  v_f->add_option("--filter", vf.filter, "feedback filter (JSON file or inline)")->required();
  v_f->add_option("--power", vf.power, "average power constraint")->required();
  auto* opt_lambda = v_f->add_option("--lambda", vf.lambda, "multiplier (default: least-squares fit)");
  v_f->callback([&] {
    g.check();
    auto spec = spectrum_from_json(load_text_arg(vf.channel, "channel"));
    auto filt = filter_from_json(load_text_arg(vf.filter, "filter"));
    std::optional<double> lam;
    if (opt_lambda->count() > 0) lam = vf.lambda;
    auto rep = verify_sufficient_condition(filt, spec, vf.power, lam, g.grid);
    emit_fields(out,
                {{"power", rep.power},
                 {"power_gap", rep.power_gap},
                 {"lambda_used", rep.lambda_used},
                 {"essinf_value", rep.essinf_value},
                 {"anticausal_residual", rep.anticausal_residual},
                 {"residual_scale", rep.residual_scale},
                 {"pass", rep.pass}},
                g.use_json(true));
  });

  // --- eval variational -------------------------------------------------
  struct {
    std::string channel, filter, sv;
  } ev;
  auto* e_v = evl->add_subcommand("variational", "rate and power of a spectral candidate");
  e_v->add_option("--channel", ev.channel, "noise spectrum (JSON file or inline)")->required();
  e_v->add_option("--filter", ev.filter, "feedback filter (JSON file or inline)")->required();
  e_v->add_option("--sv", ev.sv, "message spectrum (JSON file or inline; default zero)");
  e_v->callback([&] {
    g.check();
    auto spec = spectrum_from_json(load_text_arg(ev.channel, "channel"));
    VariationalCandidate cand;
    cand.b = filter_from_json(load_text_arg(ev.filter, "filter"));
    if (!ev.sv.empty()) cand.sv = spectrum_from_json(load_text_arg(ev.sv, "sv"));
    auto obj = eval_objective(cand, spec, g.grid);
    emit_fields(out, {{"rate", g.rate_out(obj.rate)}, {"power", obj.power}}, g.use_json(true));
  });

  // --- simulate sk ------------------------------------------------------
  struct {
    double power = 0.0, alpha = 0.0, beta = 0.0;
    int n = 100;
  } sk;
  auto* s_sk = sim->add_subcommand("sk", "exact second-moment trace of the feedback coding scheme");
  s_sk->add_option("--power", sk.power, "average power constraint")->required();
  s_sk->add_option("--alpha", sk.alpha, "moving-average coefficient")->required();
  s_sk->add_option("--beta", sk.beta, "autoregressive coefficient")->required();
  s_sk->add_option("--n", sk.n, "number of steps");
  s_sk->callback([&] {
    g.check();
    auto tr = exact_trace({sk.power, sk.alpha, sk.beta}, sk.n);
    std::vector<double> ks(tr.power.size());
    for (std::size_t i = 0; i < ks.size(); ++i) ks[i] = static_cast<double>(i + 1);
    std::vector<double> rates = tr.rate;
    for (double& r : rates) r = g.rate_out(r);
    emit_table(out, {"k", "power", "mse", "ratio", "rate"},
               {ks, tr.power, tr.mse, tr.ratio, rates}, g.use_json(false));
  });

  // --- simulate pam -----------------------------------------------------
  struct {
    double power = 0.0, alpha = 0.0, beta = 0.0, rate = 0.0;
    int n = 20;
    long trials = 10000;
  } pm;
  auto* s_pm = sim->add_subcommand("pam", "Monte Carlo message-point decoding experiment");
  s_pm->add_option("--power", pm.power, "average power constraint")->required();
  s_pm->add_option("--alpha", pm.alpha, "moving-average coefficient")->required();
  s_pm->add_option("--beta", pm.beta, "autoregressive coefficient")->required();
  s_pm->add_option("--rate", pm.rate, "target rate (nats, or bits with --bits)")->required();
  s_pm->add_option("--n", pm.n, "horizon");
  s_pm->add_option("--trials", pm.trials, "number of independent trials");
  s_pm->callback([&] {
    g.check();
    PamExperiment e;
    e.rate = g.rate_in(pm.rate);
    e.n = pm.n;
    e.trials = pm.trials;
    e.seed = g.seed;
    auto res = pam_simulate(e, {pm.power, pm.alpha, pm.beta});
    emit_fields(out,
                {{"pe", res.pe},
                 {"ci_low", res.ci_low},
                 {"ci_high", res.ci_high},
                 {"c0_fit", res.c0_fit},
                 {"err_std", res.err_std},
                 {"errors", static_cast<long long>(res.errors)},
                 {"trials", static_cast<long long>(res.trials)}},
                g.use_json(true));
  });

  try {
    app.parse(argc, argv);
    return 0;
  } catch (const CLI::CallForHelp&) {
    const CLI::App* a = &app;
    while (!a->get_subcommands().empty()) a = a->get_subcommands().front();
    out << a->help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace gfc
