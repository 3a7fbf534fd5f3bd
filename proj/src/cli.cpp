#include "qsix/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>

#include "CLI11.hpp"
#include "qsix/identities.hpp"
#include "qsix/sampler.hpp"
#include "qsix/series.hpp"
#include "qsix/sweep.hpp"

namespace qsix {

namespace {

// Thrown for a missing or malformed parameter after CLI11 has parsed.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Complex-valued flags shared by eval and check. Keys are the flag names.
const char* const kComplexFlags[] = {"q", "a", "b", "c", "d", "e", "x", "z", "z0",
                                     "A", "B", "C", "D", "E", "X"};

struct ParamFlags {
  std::map<std::string, std::string> raw;
  std::vector<std::string> num, den, U, V;
  std::optional<long> n, N, M, steps, m, n_max;
  std::optional<std::uint64_t> seed;
  bool theta = false;

  void attach(CLI::App* app) {
    for (const char* f : kComplexFlags) {
      app->add_option_function<std::string>(
             std::string("--") + f, [this, f](const std::string& v) { raw[f] = v; },
             "complex value re,im")
          ->type_name("RE,IM");
    }
    app->add_option("--num", num, "series numerator parameter (repeatable)")->type_name("RE,IM");
    app->add_option("--den", den, "series denominator parameter (repeatable)")->type_name("RE,IM");
    app->add_option("--U", U, "Abel U sequence on [-M, N+1] (repeatable)")->type_name("RE,IM");
    app->add_option("--V", V, "Abel V sequence on [-M, N] (repeatable)")->type_name("RE,IM");
    app->add_option("--n", n, "Pochhammer length / sequence index");
    app->add_option("--N", N, "truncation order");
    app->add_option("--M", M, "lower window for abel");
    app->add_option("--steps", steps, "q-constancy scalings");
    app->add_option("--m", m, "t-iteration steps");
    app->add_option("--n-max", n_max, "kn-decay: largest N");
    app->add_option("--seed", seed, "abel: seed for a random pair when --U/--V are absent");
    app->add_flag("--theta", theta, "weierstrass: theta-function form");
  }

  bool has(const std::string& k) const { return raw.count(k) != 0; }

  Complex get(const std::string& k) const {
    const auto it = raw.find(k);
    if (it == raw.end()) throw UsageError("missing required flag --" + k);
    try {
      return parse_complex(it->second);
    } catch (const std::invalid_argument&) {
      throw UsageError("--" + k + ": expected re,im, got '" + it->second + "'");
    }
  }

  Complex get_or(const std::string& k, Complex fallback) const {
    return has(k) ? get(k) : fallback;
  }

  long need(const std::optional<long>& v, const char* name) const {
    if (!v) throw UsageError(std::string("missing required flag --") + name);
    return *v;
  }

  std::vector<Complex> list(const std::vector<std::string>& xs, const char* name) const {
    std::vector<Complex> out;
    for (const std::string& s : xs) {
      try {
        out.push_back(parse_complex(s));
      } catch (const std::invalid_argument&) {
        throw UsageError(std::string("--") + name + ": expected re,im, got '" + s + "'");
      }
    }
    return out;
  }

  TruncParams trunc() const {
    return TruncParams{get("q"), get("A"), get("B"), get("C"), get("D"), get("E"), N.value_or(0)};
  }
  TParams tparams() const {
    return TParams{get("q"), get("X"), get("B"), get("C"), get("D"), get("E")};
  }
  BaileyParams bailey() const {
    return BaileyParams{get("q"), get("a"), get("b"), get("c"), get("d"), get("e")};
  }
};

struct Globals {
  std::optional<double> tail_tol;
  std::optional<std::size_t> max_terms;
  std::optional<double> atol, rtol;
  std::string precision = std::string(precision_name);

  TruncationPolicy policy() const {
    TruncationPolicy p;
    if (tail_tol) p.tail_tol = Real(*tail_tol);
    if (max_terms) p.max_terms = *max_terms;
    p.validate();
    return p;
  }

  std::optional<Tolerance> tolerance() const {
    if (!atol && !rtol) return std::nullopt;
    Tolerance t;
    if (atol) t.atol = Real(*atol);
    if (rtol) t.rtol = Real(*rtol);
    return t;
  }
};

void print_eval(std::ostream& out, const EvalResult& r) {
  out << "value: " << format_complex(r.value) << '\n'
      << "est_error: " << format_real(r.est_error) << '\n'
      << "terms_used: " << r.terms_used << '\n'
      << "terminated: " << (r.terminated ? "true" : "false") << '\n';
}

void print_exact(std::ostream& out, Complex v, std::size_t terms) {
  print_eval(out, EvalResult{v, 0, terms, true});
}

int cmd_eval(const std::string& what, const ParamFlags& f, const Globals& g, std::ostream& out) {
  const TruncationPolicy policy = g.policy();
  auto ctx = [&] { return QContext(f.get("q"), policy); };

  if (what == "pochhammer") {
    const long n = f.need(f.n, "n");
    print_exact(out, qpochhammer(f.get("a"), ctx(), n), static_cast<std::size_t>(std::abs(n)));
  } else if (what == "pochhammer-inf") {
    print_eval(out, qpochhammer_inf(f.get("a"), ctx()));
  } else if (what == "theta") {
    print_eval(out, theta(f.get("x"), ctx()));
  } else if (what == "phi" || what == "psi") {
    SeriesSpec s{f.list(f.num, "num"), f.list(f.den, "den"), f.get("z"), what == "psi"};
    print_eval(out, what == "phi" ? eval_phi(s, ctx()) : eval_psi(s, ctx()));
  } else if (what == "s-trunc") {
    const TruncParams p = f.trunc();
    print_exact(out, truncated_S(p), static_cast<std::size_t>(2 * p.N + 1));
  } else if (what == "t") {
    print_eval(out, eval_T(f.tparams(), policy));
  } else if (what == "rogers-closed") {
    print_eval(out, rogers_closed(f.get("B"), f.get("C"), f.get("D"), f.get("E"), ctx()));
  } else if (what == "bailey-closed-a") {
    print_eval(out, bailey_closed_a(f.bailey(), policy));
  } else if (what == "bailey-closed-x") {
    print_eval(out, bailey_closed_X(f.tparams(), policy));
  } else if (what == "q-factor") {
    print_eval(out, q_factor(f.get("X"), f.get("B"), f.get("D"), f.get("E"), ctx()));
  } else if (what == "f") {
    print_eval(out, F_function(f.tparams(), policy));
  } else {
    throw UsageError("unknown eval target '" + what + "'");
  }
  return exit_code::ok;
}

ParamTuple check_params(const IdentityInfo& info, const ParamFlags& f, const SampleConstraints& c) {
  switch (info.kind) {
    case SampleKind::trunc:
    case SampleKind::kn_decay:
      return f.trunc();
    case SampleKind::bailey_a:
      return f.bailey();
    case SampleKind::t_params:
      if (info.name == "rogers" || info.name == "t-iteration") {
        const Complex q = f.get("q");
        return TParams{q, q, f.get("B"), f.get("C"), f.get("D"), f.get("E")};
      }
      return f.tparams();
    case SampleKind::weierstrass:
      return WeierstrassParams{f.get_or("q", Complex{0.5}), f.get("b"), f.get("c"), f.get("x"),
                               f.get("z")};
    case SampleKind::abel: {
      if (f.U.empty() && f.V.empty()) {
        return sample(SampleKind::abel, c, f.seed.value_or(0), 1).front();
      }
      AbelInput in;
      in.M = f.need(f.M, "M");
      in.U = f.list(f.U, "U");
      in.V = f.list(f.V, "V");
      in.N = static_cast<long>(in.V.size()) - in.M - 1;
      if (in.N < 0) throw UsageError("abel: --V must hold at least M + 1 values");
      try {
        in.validate();
      } catch (const DomainError& e) {
        throw UsageError(e.what());
      }
      return in;
    }
  }
  throw UsageError("unsupported identity");
}

int cmd_check(std::string name, const ParamFlags& f, const Globals& g, std::ostream& out) {
  if (name == "weierstrass" && f.theta) name = "weierstrass-theta";
  const IdentityInfo* info = find_identity(name);
  if (info == nullptr) throw UsageError("unknown identity '" + name + "'");

  CheckOptions o;
  o.tol = g.tolerance();
  o.policy = g.policy();
  if (f.N) o.n_min = o.n_max = *f.N;
  if (f.n) o.n_lo = o.n_hi = *f.n;
  if (f.steps) o.steps = *f.steps;
  if (f.m) o.iterations = *f.m;
  if (f.n_max) {
    o.decay.n_max = *f.n_max;
    o.decay.decay_by = std::min(o.decay.decay_by, *f.n_max);
  }

  const ParamTuple params = check_params(*info, f, default_constraints(name));
  const ResidualReport r = run_check(name, params, o);
  out << "identity: " << name << '\n'
      << "lhs: " << format_complex(r.lhs) << '\n'
      << "rhs: " << format_complex(r.rhs) << '\n'
      << "abs_err: " << format_real(r.abs_err) << '\n'
      << "rel_err: " << format_real(r.rel_err) << '\n'
      << "pass: " << (r.pass ? "true" : "false") << '\n';
  if (!r.note.empty()) out << "note: " << r.note << '\n';
  return r.pass ? exit_code::ok : exit_code::check_failed;
}

struct SweepFlags {
  std::string identity;
  std::size_t samples = 100;
  std::uint64_t seed = 0;
  std::string out_path;
  std::string format = "json";
  unsigned workers = 0;
};

int cmd_sweep(const SweepFlags& s, const Globals& g, std::ostream& out, std::ostream& err) {
  if (find_identity(s.identity) == nullptr) {
    throw UsageError("unknown identity '" + s.identity + "'");
  }
  SweepOptions o;
  o.identity = s.identity;
  o.samples = s.samples;
  o.seed = s.seed;
  o.workers = s.workers;
  o.check.tol = g.tolerance();
  o.check.policy = g.policy();

  const SweepReport rep = run_sweep(o);
  const std::string body = s.format == "csv" ? to_csv(rep) : to_json(rep);

  if (s.out_path.empty() || s.out_path == "-") {
    out << body;
  } else {
    std::ofstream file(s.out_path, std::ios::binary | std::ios::trunc);
    file << body;
    file.close();
    if (!file) {
      err << "qsix: cannot write " << s.out_path << '\n';
      return exit_code::io;
    }
  }
  std::ostream& summary = (s.out_path.empty() || s.out_path == "-") ? err : out;
  summary << "identity: " << rep.identity << '\n'
          << "total: " << rep.summary.total << '\n'
          << "passed: " << rep.summary.passed << '\n'
          << "failed: " << rep.summary.failed << '\n'
          << "errored: " << rep.summary.errored << '\n'
          << "max_rel_err: " << format_real(rep.summary.max_rel_err) << '\n';
  return rep.all_passed() ? exit_code::ok : exit_code::check_failed;
}

}  // namespace

Complex parse_complex(const std::string& s) {
  auto parse_real = [](const std::string& t) {
    if (t.empty()) throw std::invalid_argument("empty number");
    const char* begin = t.c_str();
    char* end = nullptr;
    const long double v = std::strtold(begin, &end);
    if (end != begin + t.size()) throw std::invalid_argument("bad number '" + t + "'");
    return static_cast<Real>(v);
  };
  const auto comma = s.find(',');
  if (comma == std::string::npos) return Complex(parse_real(s), 0);
  if (s.find(',', comma + 1) != std::string::npos) {
    throw std::invalid_argument("too many components in '" + s + "'");
  }
  return Complex(parse_real(s.substr(0, comma)), parse_real(s.substr(comma + 1)));
}

std::string format_real(Real v) {
  char buf[128];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_complex(Complex z) { return format_real(z.real()) + "," + format_real(z.imag()); }

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Basic hypergeometric series evaluator and identity checker", "qsix"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--tail-tol", g.tail_tol, "tail tolerance for infinite sums and products");
  app.add_option("--max-terms", g.max_terms, "term budget per infinite sum or product");
  app.add_option("--atol", g.atol, "absolute tolerance for checks (replaces per-check default)");
  app.add_option("--rtol", g.rtol, "relative tolerance for checks (replaces per-check default)");
  app.add_option("--precision", g.precision, "working precision; must match the build")
      ->check(CLI::IsMember({"double", "long-double"}));

  std::string eval_target;
  ParamFlags eval_flags;
  CLI::App* eval = app.add_subcommand("eval", "evaluate a series or closed form");
  eval->add_option("target", eval_target,
                   "pochhammer | pochhammer-inf | theta | phi | psi | s-trunc | t | "
                   "rogers-closed | bailey-closed-a | bailey-closed-x | q-factor | f")
      ->required();
  eval_flags.attach(eval);

  std::string check_name;
  ParamFlags check_flags;
  CLI::App* check = app.add_subcommand("check", "run one identity check");
  std::vector<std::string> names;
  for (const IdentityInfo& i : identities()) names.push_back(i.name);
  check->add_option("identity", check_name)->required()->check(CLI::IsMember(names));
  check_flags.attach(check);

  SweepFlags sf;
  CLI::App* sweep = app.add_subcommand("sweep", "randomized identity sweep");
  sweep->add_option("--identity", sf.identity)->required()->check(CLI::IsMember(names));
  sweep->add_option("--samples", sf.samples, "number of draws");
  sweep->add_option("--seed", sf.seed, "sampler seed");
  sweep->add_option("--out", sf.out_path, "report file ('-' or absent: standard output)");
  sweep->add_option("--format", sf.format)->check(CLI::IsMember({"json", "csv"}));
  sweep->add_option("--workers", sf.workers, "worker threads (0: hardware concurrency)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? exit_code::ok : exit_code::usage;
  }

  if (g.precision != precision_name) {
    err << "qsix: this build uses " << precision_name << " precision (rebuild with "
        << "-DQSIX_PRECISION=" << g.precision << ")\n";
    return exit_code::usage;
  }

  try {
    if (eval->parsed()) return cmd_eval(eval_target, eval_flags, g, out);
    if (check->parsed()) return cmd_check(check_name, check_flags, g, out);
    return cmd_sweep(sf, g, out, err);
  } catch (const UsageError& e) {
    err << "qsix: " << e.what() << '\n';
    return exit_code::usage;
  } catch (const NonConvergence& e) {
    err << "qsix: " << e.kind() << ": " << e.what() << '\n';
    return exit_code::nonconvergence;
  } catch (const Error& e) {
    err << "qsix: " << e.kind() << ": " << e.what() << '\n';
    return exit_code::domain;
  }
}

}  // namespace qsix
