#include "qsix/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace qsix {

namespace {

using Json = nlohmann::ordered_json;

const std::vector<IdentityInfo> kIdentities = {
    {"abel", SampleKind::abel, "summation by parts on random sequences"},
    {"weierstrass", SampleKind::weierstrass, "four-term nabla identity"},
    {"weierstrass-theta", SampleKind::weierstrass, "four-term theta identity"},
    {"udiff", SampleKind::trunc, "U_n - U_{n+1} closed form, n = -5..5"},
    {"vdiff", SampleKind::trunc, "V_n - V_{n-1} closed form, n = -5..5"},
    {"recurrence", SampleKind::trunc, "S_{N+1}(A;C) against K_N and S_N(Aq;Cq), N = 0..8"},
    {"kn-printed", SampleKind::trunc, "assembled K_N against the three-term printed form"},
    {"kn-decay", SampleKind::kn_decay, "K_N/(Cq^3)^N -> 0 and K_N -> theta-ratio limit"},
    {"t-recursion", SampleKind::t_params, "T(X;C) = R T(X;Cq)"},
    {"t-iteration", SampleKind::t_params, "T(q;C) after six C -> Cq steps"},
    {"rogers", SampleKind::t_params, "6phi5 series against Rogers' product"},
    {"q-constancy", SampleKind::t_params, "T/F independent of C and equal to Q"},
    {"bailey-a", SampleKind::bailey_a, "6psi6 against Bailey's product"},
    {"bailey-x", SampleKind::t_params, "T(X;C) against the X-form product"},
    {"remark1", SampleKind::bailey_a, "a-form and mapped X-form agree"},
};

bool worse(const ResidualReport& a, const ResidualReport& b) {
  if (a.pass != b.pass) return !a.pass;
  return a.rel_err > b.rel_err;
}

std::string with_note(std::string base, const std::string& extra) {
  if (base.empty()) return extra;
  if (extra.empty()) return base;
  return base + "; " + extra;
}

// Re-raises an error from an inner index with that index in the message.
template <class Fn>
auto at_index(const std::string& label, Fn&& fn) {
  try {
    return fn();
  } catch (const PoleError& e) {
    throw PoleError(e.factor(), label);
  } catch (const BudgetExceeded& e) {
    throw BudgetExceeded(std::string(e.what()) + " (" + label + ")");
  } catch (const NonConvergence& e) {
    throw NonConvergence(std::string(e.what()) + " (" + label + ")");
  } catch (const DomainError& e) {
    throw DomainError(std::string(e.what()) + " (" + label + ")");
  }
}

template <class Fn>
ResidualReport worst_over(const std::string& var, long lo, long hi, Fn&& fn) {
  ResidualReport worst;
  bool first = true;
  for (long k = lo; k <= hi; ++k) {
    const std::string label = var + " = " + std::to_string(k);
    ResidualReport r = at_index(label, [&] { return fn(k); });
    r.note = label;
    if (first || worse(r, worst)) worst = std::move(r);
    first = false;
  }
  worst.note = "worst at " + worst.note;
  return worst;
}

template <class T>
T tol_or(const CheckOptions& o, T fallback) {
  return o.tol ? *o.tol : fallback;
}

ResidualReport check_kn_decay_report(const TruncParams& p, const CheckOptions& o) {
  KnDecayOptions d = o.decay;
  if (o.tol) d.limit_rtol = o.tol->rtol;
  const KnDecayReport r = check_KN_decay(p, d, o.policy);
  ResidualReport out =
      ResidualReport::compare(r.kn_at_max, r.limit, Tolerance{0, d.limit_rtol}, "");
  out.pass = r.pass();
  std::ostringstream os;
  os << "|K_N/(Cq^3)^N| at N=" << d.decay_by << ": "
     << static_cast<double>(r.magnitudes[static_cast<std::size_t>(d.decay_by)])
     << ", at N=" << d.n_max << ": " << static_cast<double>(r.magnitudes.back())
     << ", decreasing: " << (r.eventually_decreasing ? "yes" : "no")
     << "; lhs = K_" << d.n_max << ", rhs = limit";
  out.note = os.str();
  return out;
}

Json complex_json(Complex z) {
  return Json{{"re", static_cast<double>(z.real())}, {"im", static_cast<double>(z.imag())}};
}

Json params_json(const ParamTuple& t) {
  return std::visit(
      [](const auto& p) -> Json {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, TruncParams>) {
          return Json{{"q", complex_json(p.q)}, {"A", complex_json(p.A)},
                      {"B", complex_json(p.B)}, {"C", complex_json(p.C)},
                      {"D", complex_json(p.D)}, {"E", complex_json(p.E)}};
        } else if constexpr (std::is_same_v<P, BaileyParams>) {
          return Json{{"q", complex_json(p.q)}, {"a", complex_json(p.a)},
                      {"b", complex_json(p.b)}, {"c", complex_json(p.c)},
                      {"d", complex_json(p.d)}, {"e", complex_json(p.e)}};
        } else if constexpr (std::is_same_v<P, TParams>) {
          return Json{{"q", complex_json(p.q)}, {"X", complex_json(p.X)},
                      {"B", complex_json(p.B)}, {"C", complex_json(p.C)},
                      {"D", complex_json(p.D)}, {"E", complex_json(p.E)}};
        } else if constexpr (std::is_same_v<P, WeierstrassParams>) {
          return Json{{"q", complex_json(p.q)}, {"b", complex_json(p.b)},
                      {"c", complex_json(p.c)}, {"x", complex_json(p.x)},
                      {"z", complex_json(p.z)}};
        } else {
          Json u = Json::array();
          Json v = Json::array();
          for (const Complex& x : p.U) u.push_back(complex_json(x));
          for (const Complex& x : p.V) v.push_back(complex_json(x));
          return Json{{"M", p.M}, {"N", p.N}, {"U", u}, {"V", v}};
        }
      },
      t);
}

// Scalar parameters of a tuple as (name, value) pairs; sequences are skipped.
std::vector<std::pair<std::string, Complex>> flat_params(const ParamTuple& t) {
  return std::visit(
      [](const auto& p) -> std::vector<std::pair<std::string, Complex>> {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, TruncParams>) {
          return {{"q", p.q}, {"A", p.A}, {"B", p.B}, {"C", p.C}, {"D", p.D}, {"E", p.E}};
        } else if constexpr (std::is_same_v<P, BaileyParams>) {
          return {{"q", p.q}, {"a", p.a}, {"b", p.b}, {"c", p.c}, {"d", p.d}, {"e", p.e}};
        } else if constexpr (std::is_same_v<P, TParams>) {
          return {{"q", p.q}, {"X", p.X}, {"B", p.B}, {"C", p.C}, {"D", p.D}, {"E", p.E}};
        } else if constexpr (std::is_same_v<P, WeierstrassParams>) {
          return {{"q", p.q}, {"b", p.b}, {"c", p.c}, {"x", p.x}, {"z", p.z}};
        } else {
          return {};
        }
      },
      t);
}

std::vector<std::string> param_names(SampleKind k) {
  switch (k) {
    case SampleKind::trunc:
    case SampleKind::kn_decay:
      return {"q", "A", "B", "C", "D", "E"};
    case SampleKind::bailey_a:
      return {"q", "a", "b", "c", "d", "e"};
    case SampleKind::t_params:
      return {"q", "X", "B", "C", "D", "E"};
    case SampleKind::weierstrass:
      return {"q", "b", "c", "x", "z"};
    case SampleKind::abel:
      return {"M", "N"};
  }
  return {};
}

std::string fmt(Real v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, static_cast<double>(v));
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

const char* status_of(const DrawResult& d) {
  if (d.errored()) return "error";
  return d.report->pass ? "pass" : "fail";
}

}  // namespace

const std::vector<IdentityInfo>& identities() { return kIdentities; }

const IdentityInfo* find_identity(std::string_view name) {
  for (const IdentityInfo& i : kIdentities) {
    if (i.name == name) return &i;
  }
  return nullptr;
}

SampleConstraints default_constraints(std::string_view name) {
  SampleConstraints c;
  if (name == "weierstrass" || name == "weierstrass-theta") {
    c.convergence_caps["cancellation_max"] = 10;
    if (name == "weierstrass-theta") {
      c.q_modulus = {Real(0.2), Real(0.7)};
      c.convergence_caps["theta_cancellation_max"] = 10;
    }
  } else if (name == "abel") {
    c.convergence_caps["abel_max_len"] = 20;
  } else if (name == "kn-decay") {
    c.q_modulus = {Real(0.2), Real(0.7)};
    c.convergence_caps["cq3_min"] = Real(1.5);
  } else if (name == "t-recursion" || name == "q-constancy" || name == "bailey-x") {
    c.convergence_caps["t_argument"] = Real(0.8);
  } else if (name == "t-iteration") {
    c.convergence_caps["t_argument"] = Real(0.8);
    c.x_equals_q = true;
  } else if (name == "rogers") {
    c.convergence_caps["t_argument"] = Real(0.9);
    c.x_equals_q = true;
  } else if (name == "bailey-a" || name == "remark1") {
    c.convergence_caps["bailey_argument"] = Real(0.9);
  }
  return c;
}

ResidualReport run_check(std::string_view name, const ParamTuple& params, const CheckOptions& o) {
  const IdentityInfo* info = find_identity(name);
  if (info == nullptr) throw DomainError("unknown identity: " + std::string(name));

  if (name == "abel") return check_abel(std::get<AbelInput>(params), tol_or(o, Tolerance{}));
  if (name == "weierstrass" || name == "weierstrass-theta") {
    const auto& w = std::get<WeierstrassParams>(params);
    const QContext ctx(w.q, o.policy);
    return check_weierstrass(w.b, w.c, w.x, w.z, ctx, name == "weierstrass-theta", o.tol);
  }
  if (name == "udiff" || name == "vdiff") {
    const auto& p = std::get<TruncParams>(params);
    const Tolerance tol = tol_or(o, Tolerance{Real(1e-12), Real(1e-12)});
    return worst_over("n", o.n_lo, o.n_hi, [&](long n) {
      return name == "udiff" ? check_U_difference(n, p, tol) : check_V_difference(n, p, tol);
    });
  }
  if (name == "recurrence" || name == "kn-printed") {
    const auto& p = std::get<TruncParams>(params);
    const Tolerance tol = tol_or(o, Tolerance{Real(1e-12), Real(1e-9)});
    return worst_over("N", o.n_min, o.n_max, [&](long n) {
      return name == "recurrence" ? check_recurrence(p.with_N(n), tol)
                                  : check_KN_printed(p.with_N(n), tol);
    });
  }
  if (name == "kn-decay") return check_kn_decay_report(std::get<TruncParams>(params), o);

  if (name == "bailey-a") {
    return check_bailey_a(std::get<BaileyParams>(params),
                          tol_or(o, Tolerance{Real(1e-12), Real(1e-7)}), o.policy);
  }
  if (name == "remark1") {
    const Remark1Report r = check_remark1_equivalence(
        std::get<BaileyParams>(params), tol_or(o, Tolerance{Real(1e-12), Real(1e-10)}), true,
        tol_or(o, Tolerance{Real(1e-12), Real(1e-8)}), o.policy);
    ResidualReport worst = r.closed;
    if (worse(r.argument, worst)) worst = r.argument;
    if (r.series && worse(*r.series, worst)) worst = *r.series;
    worst.pass = r.pass();
    worst.note = with_note("worst part: " + worst.note,
                           "argument rel_err " + fmt(r.argument.rel_err) + ", closed rel_err " +
                               fmt(r.closed.rel_err) +
                               (r.series ? ", series rel_err " + fmt(r.series->rel_err) : ""));
    return worst;
  }

  const auto& t = std::get<TParams>(params);
  if (name == "t-recursion") {
    return check_T_recursion(t, tol_or(o, Tolerance{Real(1e-12), Real(1e-8)}), o.policy);
  }
  if (name == "t-iteration") {
    return check_T_iteration(t.B, t.C, t.D, t.E, QContext(t.q, o.policy), o.iterations,
                             tol_or(o, Tolerance{Real(1e-12), Real(1e-7)}));
  }
  if (name == "rogers") {
    return check_rogers(t.B, t.C, t.D, t.E, QContext(t.q, o.policy),
                        tol_or(o, Tolerance{Real(1e-12), Real(1e-8)}));
  }
  if (name == "q-constancy") {
    const QConstancyReport r =
        check_Q_constancy(t, o.steps, tol_or(o, Tolerance{Real(1e-12), Real(1e-8)}),
                          tol_or(o, Tolerance{Real(1e-12), Real(1e-7)}), o.policy);
    ResidualReport worst = worse(r.spread, r.closed_form) ? r.spread : r.closed_form;
    worst.pass = r.pass();
    worst.note = with_note(worst.note, "spread rel_err " + fmt(r.spread.rel_err) +
                                           ", closed-form rel_err " + fmt(r.closed_form.rel_err));
    return worst;
  }
  if (name == "bailey-x") {
    return check_bailey_X(t, tol_or(o, Tolerance{Real(1e-12), Real(1e-7)}), o.policy);
  }
  throw DomainError("identity has no checker: " + std::string(name));
}

SweepReport run_sweep(const SweepOptions& opts) {
  const IdentityInfo* info = find_identity(opts.identity);
  if (info == nullptr) throw DomainError("unknown identity: " + opts.identity);

  SweepReport rep;
  rep.identity = opts.identity;
  rep.seed = opts.seed;
  rep.samples = opts.samples;
  rep.constraints = opts.constraints.value_or(default_constraints(opts.identity));
  rep.check = opts.check;

  std::vector<ParamTuple> draws = sample(info->kind, rep.constraints, opts.seed, opts.samples);
  rep.results.resize(draws.size());
  for (std::size_t i = 0; i < draws.size(); ++i) {
    rep.results[i].draw_index = i;
    rep.results[i].params = std::move(draws[i]);
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rep.results.size(); i = next++) {
      DrawResult& d = rep.results[i];
      try {
        d.report = run_check(opts.identity, d.params, opts.check);
      } catch (const PoleError& e) {
        d.error_kind = e.kind();
        d.error_message = e.what();
        d.error_factor = e.factor();
      } catch (const Error& e) {
        d.error_kind = e.kind();
        d.error_message = e.what();
      }
    }
  };

  unsigned n = opts.workers != 0 ? opts.workers : std::max(1u, std::thread::hardware_concurrency());
  n = static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(rep.results.size(), 1)));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < n; ++k) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  SweepSummary& s = rep.summary;
  s.total = rep.results.size();
  for (const DrawResult& d : rep.results) {
    if (d.errored()) {
      ++s.errored;
      continue;
    }
    d.report->pass ? ++s.passed : ++s.failed;
    s.max_rel_err = std::max(s.max_rel_err, d.report->rel_err);
  }
  return rep;
}

std::string to_json(const SweepReport& r) {
  Json constraints{
      {"q_modulus", {static_cast<double>(r.constraints.q_modulus.lo),
                     static_cast<double>(r.constraints.q_modulus.hi)}},
      {"param_modulus", {static_cast<double>(r.constraints.param_modulus.lo),
                         static_cast<double>(r.constraints.param_modulus.hi)}},
      {"pole_margin", static_cast<double>(r.constraints.pole_margin)},
      {"lattice_window", r.constraints.lattice_window},
      {"convergence_caps", Json::object()},
      {"max_rejections", r.constraints.max_rejections},
      {"x_equals_q", r.constraints.x_equals_q},
  };
  for (const auto& [k, v] : r.constraints.convergence_caps) {
    constraints["convergence_caps"][k] = static_cast<double>(v);
  }

  Json check{
      {"tolerance", r.check.tol ? Json{{"atol", static_cast<double>(r.check.tol->atol)},
                                       {"rtol", static_cast<double>(r.check.tol->rtol)}}
                                : Json(nullptr)},
      {"policy",
       {{"tail_tol", static_cast<double>(r.check.policy.tail_tol)},
        {"max_terms", r.check.policy.max_terms},
        {"stagnation_window", r.check.policy.stagnation_window}}},
  };

  Json results = Json::array();
  for (const DrawResult& d : r.results) {
    Json row{{"draw_index", d.draw_index}, {"status", status_of(d)}, {"params", params_json(d.params)}};
    if (d.report) {
      const ResidualReport& rr = *d.report;
      row["report"] = Json{{"lhs", complex_json(rr.lhs)},
                           {"rhs", complex_json(rr.rhs)},
                           {"abs_err", static_cast<double>(rr.abs_err)},
                           {"rel_err", static_cast<double>(rr.rel_err)},
                           {"pass", rr.pass},
                           {"note", rr.note}};
    } else {
      row["error"] = Json{{"kind", d.error_kind}, {"message", d.error_message}};
      if (!d.error_factor.empty()) row["error"]["factor"] = d.error_factor;
    }
    results.push_back(std::move(row));
  }

  Json doc{
      {"schema", kReportSchema},
      {"identity", r.identity},
      {"seed", r.seed},
      {"samples", r.samples},
      {"precision", precision_name},
      {"constraints", constraints},
      {"check", check},
      {"results", results},
      {"summary",
       {{"total", r.summary.total},
        {"passed", r.summary.passed},
        {"failed", r.summary.failed},
        {"errored", r.summary.errored},
        {"max_rel_err", static_cast<double>(r.summary.max_rel_err)}}},
  };
  return doc.dump(2) + "\n";
}

std::string to_csv(const SweepReport& r) {
  const IdentityInfo* info = find_identity(r.identity);
  const std::vector<std::string> names = param_names(info ? info->kind : SampleKind::trunc);
  const bool abel = info && info->kind == SampleKind::abel;

  std::ostringstream os;
  os << "draw_index,status";
  for (const std::string& n : names) {
    if (abel) {
      os << ',' << n;
    } else {
      os << ',' << n << "_re," << n << "_im";
    }
  }
  os << ",lhs_re,lhs_im,rhs_re,rhs_im,abs_err,rel_err,error_kind,error_factor,note\n";

  for (const DrawResult& d : r.results) {
    os << d.draw_index << ',' << status_of(d);
    if (abel) {
      const auto& in = std::get<AbelInput>(d.params);
      os << ',' << in.M << ',' << in.N;
    } else {
      for (const auto& [name, v] : flat_params(d.params)) {
        (void)name;
        os << ',' << fmt(v.real()) << ',' << fmt(v.imag());
      }
    }
    if (d.report) {
      const ResidualReport& rr = *d.report;
      os << ',' << fmt(rr.lhs.real()) << ',' << fmt(rr.lhs.imag()) << ',' << fmt(rr.rhs.real())
         << ',' << fmt(rr.rhs.imag()) << ',' << fmt(rr.abs_err) << ',' << fmt(rr.rel_err) << ",,,"
         << csv_field(rr.note);
    } else {
      os << ",,,,,,," << d.error_kind << ',' << csv_field(d.error_factor) << ','
         << csv_field(d.error_message);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace qsix
