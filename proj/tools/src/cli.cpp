#include "nsdp/tools/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "nsdp/driver.hpp"
#include "nsdp/error.hpp"
#include "nsdp/optimality.hpp"
#include "nsdp/problems.hpp"
#include "nsdp/tools/report.hpp"

namespace nsdp::tools {

namespace {

constexpr int kExitIo = 74;

struct SolveOptions {
  std::string problem;
  PenaltyConfig cfg;
  int b_count = -1;
  std::uint64_t seed = 0;
  std::string trace;
  std::string report;
};

struct CheckOptions {
  std::string problem;
  std::string at = "start";
  double gamma = 1.0;
  std::string json;
};

std::string known_problems() {
  std::string s;
  for (const std::string& name : list_problems()) {
    if (!s.empty()) s += ", ";
    s += name;
  }
  return s;
}

const CorpusEntry* lookup(const std::string& name, std::ostream& err) {
  try {
    return &get_problem(name);
  } catch (const Error&) {
    err << "nsdp: unknown problem '" << name << "' (known: " << known_problems()
        << ")\n";
    return nullptr;
  }
}

std::string format_vec(const Vec& v) {
  std::ostringstream s;
  s << std::setprecision(10) << '[';
  for (Index i = 0; i < v.size(); ++i) s << (i ? ", " : "") << v[i];
  s << ']';
  return s.str();
}

// "start" or comma-separated reals. Returns nullopt on a malformed token.
std::optional<Vec> parse_point(const std::string& text, const Vec& start) {
  if (text == "start") return start;
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) return std::nullopt;
    while (*end == ' ') ++end;
    if (*end != '\0') return std::nullopt;
    vals.push_back(v);
  }
  if (vals.empty()) return std::nullopt;
  return Eigen::Map<const Vec>(vals.data(), static_cast<Index>(vals.size()));
}

int exit_for(SolveStatus status) {
  switch (status) {
    case SolveStatus::FeasOptReached:
      return kExitOk;
    case SolveStatus::MaxOuter:
      return kExitMaxOuter;
    case SolveStatus::InnerFailure:
      return kExitSolveFailed;
  }
  return kExitSolveFailed;
}

int cmd_solve(SolveOptions opt, const std::string& usage, std::ostream& out,
              std::ostream& err, bool seed_given) {
  if (opt.b_count >= 0) opt.cfg.b_count = opt.b_count;
  try {
    opt.cfg.validate();
  } catch (const Error& e) {
    err << "nsdp solve: " << e.what() << "\n\n" << usage;
    return kExitUsage;
  }
  const CorpusEntry* entry = lookup(opt.problem, err);
  if (!entry) return kExitUnknownProblem;

  std::optional<std::uint64_t> seed;
  if (seed_given) seed = opt.seed;

  SolveReport result;
  std::vector<ReportRecord> trace;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    result = solve(entry->problem, opt.cfg,
                   [&trace](const IterateRecord& rec) {
                     trace.push_back(make_record(rec));
                   });
  } catch (const Error& e) {
    err << "nsdp solve: " << e.what() << '\n';
    return e.code() == ErrorCode::StartNotFeasible ? kExitSolveFailed : kExitUsage;
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const ReportDocument doc = make_report(result, seed, wall);
  try {
    if (!opt.trace.empty()) write_atomic(opt.trace, serialize_trace(trace));
    if (!opt.report.empty()) write_atomic(opt.report, serialize(doc));
  } catch (const std::exception& e) {
    err << "nsdp solve: " << e.what() << '\n';
    return kExitIo;
  }

  out << "problem     " << doc.problem << '\n'
      << "status      " << doc.status;
  if (!doc.message.empty()) out << " (" << doc.message << ')';
  out << '\n' << "iterations  " << doc.iterations.size() << '\n';
  if (!doc.iterations.empty()) {
    const ReportRecord& last = doc.iterations.back();
    out << std::setprecision(6) << "gamma       " << last.gamma << '\n'
        << "delta       " << last.delta << '\n'
        << "u           " << last.u << '\n'
        << "f           " << last.f_value << '\n'
        << "x           " << format_vec(doc.x) << '\n';
  }
  return exit_for(result.status);
}

int cmd_check(const CheckOptions& opt, const std::string& usage,
              std::ostream& out, std::ostream& err) {
  const CorpusEntry* entry = lookup(opt.problem, err);
  if (!entry) return kExitUnknownProblem;
  const NsdpProblem& prob = entry->problem;

  const std::optional<Vec> x = parse_point(opt.at, prob.start_point());
  if (!x) {
    err << "nsdp check: cannot parse --at '" << opt.at << "'\n\n" << usage;
    return kExitUsage;
  }
  if (x->size() != prob.n()) {
    err << "nsdp check: --at has " << x->size() << " entries, problem '"
        << prob.name() << "' has n = " << prob.n() << "\n\n"
        << usage;
    return kExitUsage;
  }
  if (!(opt.gamma > 0.0)) {
    err << "nsdp check: --gamma must be > 0\n\n" << usage;
    return kExitUsage;
  }

  const DerivativeAuditReport audit = audit_derivatives(prob, *x);
  const Index b_count = estimate_b_count(prob, *x);
  const MultiplierPair mult = recover_multipliers(prob, *x, opt.gamma);
  const OptimalityResiduals res =
      evaluate_residuals(prob, *x, opt.gamma, b_count, 0.0);

  out << std::setprecision(6);
  out << "problem  " << prob.name() << '\n'
      << "x        " << format_vec(*x) << '\n'
      << "audit    " << (audit.passed ? "PASS" : "FAIL") << " (step "
      << audit.step << ")\n";
  for (const HookAudit& a : audit.entries) {
    out << "  " << std::left << std::setw(8) << a.hook << std::right;
    if (a.i >= 0) out << " i=" << a.i;
    if (a.j >= 0) out << " j=" << a.j;
    out << "  err " << a.error << " / " << a.threshold
        << (a.passed ? "  ok" : "  FAIL") << '\n';
  }
  out << "residuals (gamma " << opt.gamma << ", b_count " << b_count << ")\n"
      << "  stationarity     " << res.stationarity << '\n'
      << "  feasibility_u    " << res.feasibility_u << '\n'
      << "  complementarity  " << res.complementarity << '\n'
      << "  second_order     " << res.second_order << '\n'
      << "  subspace_dim     " << res.subspace_dim << '\n';

  if (!opt.json.empty()) {
    Json entries = Json::array();
    for (const HookAudit& a : audit.entries) {
      entries.push_back(Json{{"hook", a.hook},
                             {"i", a.i},
                             {"j", a.j},
                             {"error", a.finite ? Json(a.error) : Json(nullptr)},
                             {"threshold", a.threshold},
                             {"finite", a.finite},
                             {"passed", a.passed}});
    }
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["problem"] = prob.name();
    doc["x"] = vec_to_json(*x);
    doc["gamma"] = opt.gamma;
    doc["audit"] = Json{{"passed", audit.passed},
                        {"step", audit.step},
                        {"entries", std::move(entries)}};
    doc["b_count"] = b_count;
    doc["residuals"] = Json{{"stationarity", res.stationarity},
                            {"feasibility_u", res.feasibility_u},
                            {"complementarity", res.complementarity},
                            {"second_order", res.second_order},
                            {"subspace_dim", res.subspace_dim}};
    doc["multipliers"] = Json{{"y", vec_to_json(mult.y)}, {"Z", sym_to_json(mult.Z)}};
    try {
      write_atomic(opt.json, doc.dump(2) + "\n");
    } catch (const std::exception& e) {
      err << "nsdp check: " << e.what() << '\n';
      return kExitIo;
    }
  }
  return audit.passed ? kExitOk : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Penalty method for nonlinear semidefinite programs", "nsdp"};
  app.require_subcommand(1);

  SolveOptions so;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Run the penalty method on a corpus problem");
  solve_cmd->add_option("--problem", so.problem, "Corpus problem name")->required();
  solve_cmd->add_option("--gamma0", so.cfg.gamma0, "Initial penalty weight")->capture_default_str();
  solve_cmd->add_option("--eta", so.cfg.eta, "Infeasibility decrease factor in (0,1)")->capture_default_str();
  solve_cmd->add_option("--theta", so.cfg.theta, "Penalty growth factor > 1")->capture_default_str();
  solve_cmd->add_option("--delta0", so.cfg.delta0, "Initial inner tolerance in (0,1)")->capture_default_str();
  solve_cmd->add_option("--beta", so.cfg.beta, "Tolerance decay factor in (0,1)")->capture_default_str();
  solve_cmd->add_option("--tol-feas", so.cfg.tol_feas, "Stop when u <= tol-feas ...")->capture_default_str();
  solve_cmd->add_option("--tol-opt", so.cfg.tol_opt, "... and delta <= tol-opt")->capture_default_str();
  solve_cmd->add_option("--max-outer", so.cfg.max_outer, "Outer iteration limit")->capture_default_str();
  solve_cmd->add_option("--b-count", so.b_count, "Zero-block size at the limit (estimated if omitted)");
  CLI::Option* seed_opt =
      solve_cmd->add_option("--seed", so.seed, "Reserved for randomized starts");
  solve_cmd->add_option("--trace", so.trace, "JSONL trace path, one record per iterate");
  solve_cmd->add_option("--report", so.report, "JSON report path");

  CheckOptions co;
  CLI::App* check_cmd =
      app.add_subcommand("check", "Audit derivatives and residuals at a point");
  check_cmd->add_option("--problem", co.problem, "Corpus problem name")->required();
  check_cmd->add_option("--at", co.at, "\"start\" or comma-separated coordinates")->capture_default_str();
  check_cmd->add_option("--gamma", co.gamma, "Penalty weight for multiplier recovery")->capture_default_str();
  check_cmd->add_option("--json", co.json, "Write the audit as JSON");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* which = solve_cmd->parsed()   ? solve_cmd
                            : check_cmd->parsed() ? check_cmd
                                                  : &app;
    out << which->help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    const CLI::App* which = solve_cmd->parsed()   ? solve_cmd
                            : check_cmd->parsed() ? check_cmd
                                                  : &app;
    err << "nsdp: " << e.what() << "\n\n" << which->help();
    return kExitUsage;
  }

  if (solve_cmd->parsed()) {
    return cmd_solve(so, solve_cmd->help(), out, err, seed_opt->count() > 0);
  }
  return cmd_check(co, check_cmd->help(), out, err);
}

}  // namespace nsdp::tools
