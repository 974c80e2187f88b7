// Command-line front end for the expmoment library.
//
// Exit codes: 0 ok, 2 invalid input, 3 quadrature did not converge,
// 4 term or table budget exceeded, 5 an inequality was violated.

#include <CLI11.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "expmoment/expmoment.hpp"

namespace em = expmoment;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 2;
constexpr int kNotConverged = 3;
constexpr int kBudget = 4;
constexpr int kViolated = 5;

int exit_code(em::ErrorKind kind) {
  switch (kind) {
    case em::ErrorKind::NotConverged: return kNotConverged;
    case em::ErrorKind::TermBudgetExceeded:
    case em::ErrorKind::BudgetExceeded: return kBudget;
    default: return kInvalid;
  }
}

const std::string& fmt_engine_list() {
  static const std::string s = "auto|spectral|quadrature|both";
  return s;
}

em::Engine parse_engine(const std::string& name) {
  if (name == "auto") return em::Engine::auto_select;
  if (name == "spectral") return em::Engine::spectral;
  if (name == "quadrature") return em::Engine::quadrature;
  if (name == "both") return em::Engine::both;
  throw em::Error(em::ErrorKind::InvalidArgument, "engine must be one of " + fmt_engine_list());
}

// Output goes to --output when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw em::Error(em::ErrorKind::InvalidArgument, "cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

std::string num(double x) { return em::io::format_double(x); }

struct SourceArgs {
  std::string instance_path;
  std::string inline_spec;
  std::uint64_t zeta_N = 0;

  void add_to(CLI::App* app, bool with_zeta = false) {
    auto* i = app->add_option("--instance", instance_path, "instance JSON file");
    auto* l = app->add_option("--inline", inline_spec, "inline instance \"a=1,2;phi=0,1\"");
    i->excludes(l);
    if (with_zeta) app->add_option("--zeta-N", zeta_N, "use the partial zeta sum with N terms")->excludes(i)->excludes(l);
  }

  bool given() const { return !instance_path.empty() || !inline_spec.empty() || zeta_N > 0; }

  em::Instance load() const {
    if (zeta_N > 0) return em::zeta::zeta_instance(zeta_N);
    if (!instance_path.empty()) return em::io::load_instance(instance_path);
    if (!inline_spec.empty()) return em::io::parse_inline(inline_spec);
    throw em::Error(em::ErrorKind::InvalidArgument, "an instance is required (--instance or --inline)");
  }
};

// ---------------------------------------------------------------- moment

struct MomentArgs {
  SourceArgs source;
  int q = 1;
  double T = 0.0;
  double center = 0.0;
  std::string engine = "auto";
  std::string format = "json";
  std::string output;
};

int cmd_moment(const MomentArgs& args) {
  const em::Instance instance = args.source.load();
  const em::MomentOrder q(args.q);
  const em::Window window(args.center, args.T);
  em::VerifyConfig cfg;
  cfg.engine = parse_engine(args.engine);
  const auto [use_spectral, use_quadrature] = em::detail::engines_for(instance.size(), q, cfg);

  std::optional<em::MomentResult> spectral, quadrature;
  if (use_spectral) spectral = em::windowed_average_exact(em::expand(instance, q, {.term_budget = cfg.term_budget}), window);
  if (use_quadrature) quadrature = em::windowed_average(instance, q, window, cfg.quadrature);

  json j;
  j["q"] = args.q;
  j["T"] = args.T;
  j["center"] = args.center;
  j["engine"] = em::detail::engine_name(use_spectral, use_quadrature);
  const em::MomentResult& primary = spectral ? *spectral : *quadrature;
  j["value"] = primary.value;
  j["method"] = std::string(em::to_string(primary.method));
  j["error_estimate"] = primary.error_estimate;
  j["work_count"] = primary.work_count;
  if (spectral && quadrature) {
    j["spectral"] = spectral->value;
    j["quadrature"] = quadrature->value;
    j["quadrature_error"] = quadrature->error_estimate;
    const double scale = std::max({std::abs(spectral->value), std::abs(quadrature->value), 1e-300});
    j["disagreement"] = std::abs(spectral->value - quadrature->value) / scale;
  }

  Output out(args.output);
  auto& os = out.stream();
  if (args.format == "json") {
    os << em::io::dump(j) << '\n';
  } else if (args.format == "csv" || args.format == "table") {
    std::vector<std::string> keys{"engine", "q", "T", "center", "value", "method", "error_estimate", "work_count"};
    if (j.contains("disagreement")) {
      for (const char* k : {"spectral", "quadrature", "quadrature_error", "disagreement"}) keys.emplace_back(k);
    }
    const auto text = [&](const std::string& k) {
      const auto& v = j[k];
      return v.is_string() ? v.get<std::string>() : em::io::dump(v);
    };
    if (args.format == "csv") {
      for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << keys[i];
      os << '\n';
      for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << text(keys[i]);
      os << '\n';
    } else {
      for (const auto& k : keys) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%-18s", k.c_str());
        os << buf << text(k) << '\n';
      }
    }
  } else {
    throw em::Error(em::ErrorKind::InvalidArgument, "format must be json, csv or table");
  }
  return kOk;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::string check;
  SourceArgs source;
  std::uint64_t random = 0;
  std::uint64_t seed = 0;
  int q = 1;
  double T = 10.0;
  double T0 = 0.0;
  double H = 0.0;
  double gamma = 0.0;
  std::size_t index = 1;
  std::vector<double> Ts{10.0, 100.0, 1000.0};
  std::vector<double> phases;
  int nu = 2;
  std::uint64_t N = 10;
  std::string engine = "auto";
  bool quick = false;
  std::string output;
};

em::ComplexCoefficients coefficients_for(const em::Instance& a, const std::vector<double>& phases) {
  if (!phases.empty() && phases.size() != a.size()) {
    throw em::Error(em::ErrorKind::LengthMismatch, "--phases needs one phase per term");
  }
  std::vector<std::complex<double>> c(a.size());
  for (std::size_t n = 0; n < a.size(); ++n) c[n] = std::polar(a.amplitude(n), phases.empty() ? 0.0 : phases[n]);
  return em::ComplexCoefficients(std::move(c), a);
}

struct Tally {
  std::uint64_t total = 0;
  std::uint64_t failed = 0;
};

int cmd_verify(const VerifyArgs& args) {
  em::VerifyConfig cfg;
  cfg.engine = parse_engine(args.engine);
  cfg.seed = args.seed;
  Output out(args.output);
  auto& os = out.stream();
  Tally tally;
  const em::campaigns::Sink sink = [&](const em::VerificationReport& r) {
    ++tally.total;
    if (!r.passed) ++tally.failed;
    os << em::io::dump(r.to_json()) << '\n';
  };

  const std::string& check = args.check;
  if (check == "all") {
    const std::uint64_t n = args.quick ? 20 : (args.random ? args.random : 100);
    const std::uint64_t slow = args.quick ? 3 : std::max<std::uint64_t>(1, n / 4);
    em::campaigns::lower_bound(n, args.seed, cfg, sink);
    em::campaigns::covering_majorization(n, args.seed, cfg, sink);
    em::campaigns::kernel_majorization(n, args.seed, cfg, sink);
    em::campaigns::engines(n, args.seed, cfg, sink);
    em::campaigns::sup_chain(slow, args.seed, cfg, sink);
    em::campaigns::ingham(n, args.seed, cfg, sink);
    em::campaigns::bohr(n, args.seed, cfg, sink);
    sink(em::zeta::zeta_moment_lower_bound(10, 1, 1e3, cfg));
    sink(em::zeta::zeta_moment_lower_bound(args.quick ? 10 : 30, 2, 1e3, cfg));
  } else if (check == "corollary") {
    sink(em::zeta::zeta_moment_lower_bound(args.N, args.nu, args.T, cfg));
  } else if (args.random > 0) {
    if (args.source.given()) throw em::Error(em::ErrorKind::InvalidArgument, "--random and an instance are exclusive");
    if (check == "theorem1") em::campaigns::lower_bound(args.random, args.seed, cfg, sink);
    else if (check == "lemma") em::campaigns::covering_majorization(args.random, args.seed, cfg, sink);
    else if (check == "eq45") em::campaigns::kernel_majorization(args.random, args.seed, cfg, sink);
    else if (check == "engines") em::campaigns::engines(args.random, args.seed, cfg, sink);
    else if (check == "sup-chain") em::campaigns::sup_chain(args.random, args.seed, cfg, sink);
    else if (check == "ingham") em::campaigns::ingham(args.random, args.seed, cfg, sink);
    else if (check == "bohr") em::campaigns::bohr(args.random, args.seed, cfg, sink);
  } else {
    const em::Instance instance = args.source.load();
    const em::MomentOrder q(args.q);
    if (check == "theorem1") sink(em::check_lower_bound(instance, q, args.T, cfg));
    else if (check == "lemma") sink(em::check_covering_majorization(coefficients_for(instance, args.phases), q, args.T, args.T0, cfg));
    else if (check == "eq45") sink(em::check_kernel_majorization(coefficients_for(instance, args.phases), q, args.T, args.H, cfg));
    else if (check == "engines") sink(em::check_engine_agreement(instance, q, em::Window(args.T0, args.T), cfg));
    else if (check == "sup-chain") sink(em::check_sup_chain(instance, args.Ts, cfg));
    else if (check == "bohr") sink(em::check_bohr_bound(instance, args.index, cfg));
    else if (check == "ingham") {
      double gamma = args.gamma;
      if (!(gamma > 0.0)) {
        gamma = std::numeric_limits<double>::infinity();
        for (std::size_t n = 1; n < instance.size(); ++n)
          gamma = std::min(gamma, instance.frequency(n) - instance.frequency(n - 1));
      }
      sink(em::check_ingham_mordell(instance, gamma, cfg));
    }
  }
  std::cerr << tally.total - tally.failed << "/" << tally.total << " checks passed\n";
  return tally.failed ? kViolated : kOk;
}

// ---------------------------------------------------------------- zeta

struct ZetaArgs {
  int nu = 1;
  std::uint64_t N = 10;
  double T = 1e3;
  std::string sweep;
  bool divisor_sum_only = false;
  double x = 1e6;
  double x_min = 1e3;
  std::size_t points = 41;
  std::string format = "json";
  std::string engine = "auto";
  std::string output;
};

std::vector<std::uint64_t> parse_sweep(const std::string& text) {
  unsigned long long a = 0, b = 0, s = 0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%llu:%llu:%llu%c", &a, &b, &s, &tail) != 3 || a < 1 || b < a || s < 1) {
    throw em::Error(em::ErrorKind::InvalidArgument, "sweep must be start:stop:step with 1 <= start <= stop, step >= 1");
  }
  std::vector<std::uint64_t> values;
  for (unsigned long long N = a; N <= b; N += s) values.push_back(N);
  return values;
}

std::uint64_t as_count(double x, const char* what) {
  if (!(x >= 1.0) || x > 1e15 || x != std::floor(x)) {
    throw em::Error(em::ErrorKind::InvalidArgument, std::string(what) + " must be a positive integer");
  }
  return static_cast<std::uint64_t>(x);
}

int cmd_zeta(const ZetaArgs& args) {
  Output out(args.output);
  auto& os = out.stream();
  if (args.divisor_sum_only) {
    const auto fit = em::zeta::divisor_sum_growth_fit(args.nu, as_count(args.x_min, "--x-min"), as_count(args.x, "--x"),
                                                      args.points);
    if (args.format == "csv") {
      os << "x,divisor_sum\n";
      for (std::size_t i = 0; i < fit.xs.size(); ++i) os << fit.xs[i] << ',' << num(fit.sums[i]) << '\n';
    } else {
      os << em::io::dump(fit.to_json()) << '\n';
    }
    return kOk;
  }
  em::VerifyConfig cfg;
  cfg.engine = parse_engine(args.engine);
  const std::vector<std::uint64_t> Ns = args.sweep.empty() ? std::vector<std::uint64_t>{args.N} : parse_sweep(args.sweep);
  bool all_passed = true;
  if (args.format == "csv") os << "N,nu,T,lhs,rhs,margin,divisor_sum,passed\n";
  for (std::uint64_t N : Ns) {
    const auto r = em::zeta::zeta_moment_lower_bound(N, args.nu, args.T, cfg);
    all_passed = all_passed && r.passed;
    if (args.format == "csv") {
      os << N << ',' << args.nu << ',' << num(args.T) << ',' << num(r.lhs) << ',' << num(r.rhs) << ',' << num(r.margin)
         << ',' << num(*r.detail("divisor_sum")) << ',' << (r.passed ? "true" : "false") << '\n';
    } else {
      auto j = r.to_json();
      j["N"] = N;
      j["nu"] = args.nu;
      j["T"] = args.T;
      os << em::io::dump(j) << '\n';
    }
  }
  return all_passed ? kOk : kViolated;
}

// ---------------------------------------------------------------- plotdata

struct PlotArgs {
  SourceArgs source;
  int q = 1;
  double tmin = -std::numbers::pi;
  double tmax = std::numbers::pi;
  std::size_t points = 1001;
  std::string output;
};

int cmd_plotdata(const PlotArgs& args) {
  const em::Instance instance = args.source.load();
  const em::MomentOrder q(args.q);
  if (args.points < 1) throw em::Error(em::ErrorKind::InvalidArgument, "the grid is empty");
  if (args.points > 1 && !(args.tmax > args.tmin)) throw em::Error(em::ErrorKind::InvalidArgument, "need tmin < tmax");
  const auto grid = args.points == 1 ? em::EvaluationGrid(std::vector<double>{args.tmin})
                                     : em::EvaluationGrid::uniform(args.tmin, args.tmax, args.points);
  const auto values = em::eval_batch(instance, grid, q);
  Output out(args.output);
  auto& os = out.stream();
  os << "t,value\n";
  for (std::size_t i = 0; i < values.size(); ++i) os << num(grid.points()[i]) << ',' << num(values[i]) << '\n';
  return kOk;
}

// ---------------------------------------------------------------- expand

struct ExpandArgs {
  SourceArgs source;
  int q = 1;
  bool rational = false;
  std::string output;
};

int cmd_expand(const ExpandArgs& args) {
  const em::Instance instance = args.source.load();
  const em::MomentOrder q(args.q);
  const auto e = args.rational ? em::rational_mode_expand(instance, q) : em::expand(instance, q);
  Output out(args.output);
  em::write_expansion_csv(e, out.stream());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Windowed moments of exponential sums and their lower bounds"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "expmoment 1.0.0");

  MomentArgs moment;
  auto* m = app.add_subcommand("moment", "(1/2T) int_{|t-center|<=T} |S(t)|^{2q} dt");
  moment.source.add_to(m);
  m->add_option("--q", moment.q, "moment order q >= 1")->capture_default_str();
  m->add_option("--T", moment.T, "window half-width")->required();
  m->add_option("--center", moment.center, "window center")->capture_default_str();
  m->add_option("--engine", moment.engine, fmt_engine_list())->capture_default_str();
  m->add_option("--format", moment.format, "json|csv|table")->capture_default_str();
  m->add_option("--output", moment.output, "write to file instead of stdout");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "check an inequality on one instance or a seeded random campaign");
  v->add_option("check", verify.check, "theorem1|lemma|eq45|sup-chain|ingham|bohr|corollary|engines|all")
      ->required()
      ->check(CLI::IsMember({"theorem1", "lemma", "eq45", "sup-chain", "ingham", "bohr", "corollary", "engines", "all"}));
  verify.source.add_to(v);
  v->add_option("--random", verify.random, "number of random cases");
  v->add_option("--seed", verify.seed, "campaign seed")->capture_default_str();
  v->add_option("--q", verify.q, "moment order")->capture_default_str();
  v->add_option("--T", verify.T, "window half-width")->capture_default_str();
  v->add_option("--T0", verify.T0, "shifted window center (lemma, engines)")->capture_default_str();
  v->add_option("--H", verify.H, "kernel shift")->capture_default_str();
  v->add_option("--gamma", verify.gamma, "frequency gap (ingham; default: smallest gap)");
  v->add_option("--index", verify.index, "1-based term index (bohr)")->capture_default_str();
  v->add_option("--Ts", verify.Ts, "window half-widths (sup-chain)")->delimiter(',');
  v->add_option("--phases", verify.phases, "coefficient phases, c_n = a_n e^{i phase_n}")->delimiter(',');
  v->add_option("--nu", verify.nu, "power nu (corollary)")->capture_default_str();
  v->add_option("--N", verify.N, "number of zeta terms (corollary)")->capture_default_str();
  v->add_option("--engine", verify.engine, fmt_engine_list())->capture_default_str();
  v->add_flag("--quick", verify.quick, "small campaign sizes");
  v->add_option("--output", verify.output, "write to file instead of stdout");

  ZetaArgs zeta;
  auto* z = app.add_subcommand("zeta", "moment lower bound for partial zeta sums");
  z->add_option("--nu", zeta.nu, "power nu")->capture_default_str();
  z->add_option("--N", zeta.N, "number of terms")->capture_default_str();
  z->add_option("--T", zeta.T, "window half-width")->capture_default_str();
  z->add_option("--sweep", zeta.sweep, "start:stop:step over N");
  z->add_flag("--divisor-sum-only", zeta.divisor_sum_only, "only the divisor-sum growth fit");
  z->add_option("--x", zeta.x, "upper end of the growth fit")->capture_default_str();
  z->add_option("--x-min", zeta.x_min, "lower end of the growth fit")->capture_default_str();
  z->add_option("--points", zeta.points, "sample points of the growth fit")->capture_default_str();
  z->add_option("--engine", zeta.engine, fmt_engine_list())->capture_default_str();
  z->add_option("--format", zeta.format, "json|csv")->capture_default_str();
  z->add_option("--output", zeta.output, "write to file instead of stdout");

  PlotArgs plot;
  auto* p = app.add_subcommand("plotdata", "CSV samples of |S(t)|^{2q}");
  plot.source.add_to(p, true);
  p->add_option("--q", plot.q, "moment order")->capture_default_str();
  p->add_option("--tmin", plot.tmin, "grid start")->capture_default_str();
  p->add_option("--tmax", plot.tmax, "grid end")->capture_default_str();
  p->add_option("--points", plot.points, "grid size")->capture_default_str();
  p->add_option("--output", plot.output, "write to file instead of stdout");

  ExpandArgs expand;
  auto* e = app.add_subcommand("expand", "CSV of the merged spectral expansion");
  expand.source.add_to(e);
  e->add_option("--q", expand.q, "moment order")->capture_default_str();
  e->add_flag("--rational", expand.rational, "integer frequencies with exact merging");
  e->add_option("--output", expand.output, "write to file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*m) return cmd_moment(moment);
    if (*v) return cmd_verify(verify);
    if (*z) return cmd_zeta(zeta);
    if (*p) return cmd_plotdata(plot);
    if (*e) return cmd_expand(expand);
  } catch (const em::NotConvergedError& err) {
    std::cerr << "error: " << err.what() << " (best estimate " << num(err.best().value) << ")\n";
    return kNotConverged;
  } catch (const em::Error& err) {
    std::cerr << "error: " << err.what() << '\n';
    return exit_code(err.kind());
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kInvalid;
  }
  return kInvalid;
}
