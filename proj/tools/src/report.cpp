#include "nsdp/tools/report.hpp"

#include <fstream>
#include <system_error>

#include "nsdp/error.hpp"

namespace nsdp::tools {

ReportRecord make_record(const IterateRecord& rec) {
  ReportRecord r;
  r.k = rec.k;
  r.gamma = rec.gamma;
  r.gamma_next = rec.gamma_next;
  r.delta = rec.delta;
  r.u = rec.u;
  r.stationarity = rec.residuals.stationarity;
  r.complementarity = rec.residuals.complementarity;
  r.second_order = rec.residuals.second_order;
  r.epsilon = rec.residuals.epsilon;
  r.subspace_dim = rec.residuals.subspace_dim;
  r.subspace_stable = rec.subspace_stable;
  r.f_value = rec.f_value;
  r.script_F_value = rec.penalty_value;
  r.script_F_at_start = rec.penalty_at_start;
  r.xhat_branch = rec.xhat_reset ? "reset" : "keep";
  r.inner_iterations = rec.inner.iterations;
  r.inner_status = to_string(rec.inner.status);
  r.inner_grad_norm = rec.inner.grad_norm;
  r.inner_min_hess_eig = rec.inner.min_hess_eig;
  r.x = rec.x;
  r.y = rec.multipliers.y;
  r.Z = rec.multipliers.Z;
  return r;
}

ReportDocument make_report(const SolveReport& report,
                           std::optional<std::uint64_t> seed,
                           double wall_time_seconds) {
  ReportDocument doc;
  doc.problem = report.problem;
  doc.config = report.config;
  doc.seed = seed;
  doc.b_count = report.b_count;
  doc.f_start = report.f_start;
  for (const IterateRecord& rec : report.iterates) {
    doc.iterations.push_back(make_record(rec));
  }
  doc.status = to_string(report.status);
  doc.message = report.message;
  if (!doc.iterations.empty()) {
    const ReportRecord& last = doc.iterations.back();
    doc.x = last.x;
    doc.y = last.y;
    doc.Z = last.Z;
  }
  doc.wall_time_seconds = wall_time_seconds;
  return doc;
}

Json vec_to_json(const Vec& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Vec vec_from_json(const Json& j) {
  if (!j.is_array()) throw_invalid("report: expected an array");
  Vec v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Index>(i)] = j[i].get<double>();
  }
  return v;
}

Json sym_to_json(const SymMatrix& m) {
  Json lower = Json::array();
  for (Index i = 0; i < m.dim(); ++i) {
    for (Index j = 0; j <= i; ++j) lower.push_back(m(i, j));
  }
  return Json{{"dim", m.dim()}, {"lower", std::move(lower)}};
}

SymMatrix sym_from_json(const Json& j) {
  const Index d = j.at("dim").get<Index>();
  const Json& lower = j.at("lower");
  if (d < 1 || static_cast<Index>(lower.size()) != d * (d + 1) / 2) {
    throw_invalid("report: matrix 'lower' has the wrong length");
  }
  Mat m(d, d);
  std::size_t idx = 0;
  for (Index r = 0; r < d; ++r) {
    for (Index c = 0; c <= r; ++c) {
      m(r, c) = m(c, r) = lower[idx++].get<double>();
    }
  }
  return SymMatrix(m);
}

Json to_json(const ReportRecord& rec) {
  Json j;
  j["k"] = rec.k;
  j["gamma"] = rec.gamma;
  j["gamma_next"] = rec.gamma_next;
  j["delta"] = rec.delta;
  j["u"] = rec.u;
  j["stationarity"] = rec.stationarity;
  j["complementarity"] = rec.complementarity;
  j["second_order"] = rec.second_order;
  j["epsilon"] = rec.epsilon;
  j["subspace_dim"] = rec.subspace_dim;
  j["subspace_stable"] = rec.subspace_stable;
  j["f_value"] = rec.f_value;
  j["script_F_value"] = rec.script_F_value;
  j["script_F_at_start"] = rec.script_F_at_start;
  j["xhat_branch"] = rec.xhat_branch;
  j["inner"] = Json{{"iterations", rec.inner_iterations},
                    {"status", rec.inner_status},
                    {"grad_norm", rec.inner_grad_norm},
                    {"min_hess_eig", rec.inner_min_hess_eig}};
  j["x"] = vec_to_json(rec.x);
  j["y"] = vec_to_json(rec.y);
  j["Z"] = sym_to_json(rec.Z);
  return j;
}

ReportRecord record_from_json(const Json& j) {
  ReportRecord r;
  r.k = j.at("k").get<int>();
  r.gamma = j.at("gamma").get<double>();
  r.gamma_next = j.at("gamma_next").get<double>();
  r.delta = j.at("delta").get<double>();
  r.u = j.at("u").get<double>();
  r.stationarity = j.at("stationarity").get<double>();
  r.complementarity = j.at("complementarity").get<double>();
  r.second_order = j.at("second_order").get<double>();
  r.epsilon = j.at("epsilon").get<double>();
  r.subspace_dim = j.at("subspace_dim").get<Index>();
  r.subspace_stable = j.at("subspace_stable").get<bool>();
  r.f_value = j.at("f_value").get<double>();
  r.script_F_value = j.at("script_F_value").get<double>();
  r.script_F_at_start = j.at("script_F_at_start").get<double>();
  r.xhat_branch = j.at("xhat_branch").get<std::string>();
  const Json& inner = j.at("inner");
  r.inner_iterations = inner.at("iterations").get<int>();
  r.inner_status = inner.at("status").get<std::string>();
  r.inner_grad_norm = inner.at("grad_norm").get<double>();
  r.inner_min_hess_eig = inner.at("min_hess_eig").get<double>();
  r.x = vec_from_json(j.at("x"));
  r.y = vec_from_json(j.at("y"));
  r.Z = sym_from_json(j.at("Z"));
  return r;
}

Json to_json(const PenaltyConfig& cfg, std::optional<std::uint64_t> seed) {
  Json j;
  j["eta"] = cfg.eta;
  j["theta"] = cfg.theta;
  j["gamma0"] = cfg.gamma0;
  j["delta0"] = cfg.delta0;
  j["beta"] = cfg.beta;
  j["tol_feas"] = cfg.tol_feas;
  j["tol_opt"] = cfg.tol_opt;
  j["max_outer"] = cfg.max_outer;
  j["feas_check_tol"] = cfg.feas_check_tol;
  j["gamma_cap"] = cfg.gamma_cap;
  j["b_count"] = cfg.b_count ? Json(*cfg.b_count) : Json(nullptr);
  j["seed"] = seed ? Json(*seed) : Json(nullptr);
  const TrConfig& in = cfg.inner;
  j["inner"] = Json{{"delta0_radius", in.delta0_radius},
                    {"max_iter", in.max_iter},
                    {"eta1", in.eta1},
                    {"eta2", in.eta2},
                    {"shrink", in.shrink},
                    {"grow", in.grow},
                    {"radius_min", in.radius_min},
                    {"radius_max", in.radius_max}};
  return j;
}

namespace {

PenaltyConfig config_from_json(const Json& j) {
  PenaltyConfig cfg;
  cfg.eta = j.at("eta").get<double>();
  cfg.theta = j.at("theta").get<double>();
  cfg.gamma0 = j.at("gamma0").get<double>();
  cfg.delta0 = j.at("delta0").get<double>();
  cfg.beta = j.at("beta").get<double>();
  cfg.tol_feas = j.at("tol_feas").get<double>();
  cfg.tol_opt = j.at("tol_opt").get<double>();
  cfg.max_outer = j.at("max_outer").get<int>();
  cfg.feas_check_tol = j.at("feas_check_tol").get<double>();
  cfg.gamma_cap = j.at("gamma_cap").get<double>();
  if (!j.at("b_count").is_null()) cfg.b_count = j.at("b_count").get<Index>();
  const Json& in = j.at("inner");
  cfg.inner.delta0_radius = in.at("delta0_radius").get<double>();
  cfg.inner.max_iter = in.at("max_iter").get<int>();
  cfg.inner.eta1 = in.at("eta1").get<double>();
  cfg.inner.eta2 = in.at("eta2").get<double>();
  cfg.inner.shrink = in.at("shrink").get<double>();
  cfg.inner.grow = in.at("grow").get<double>();
  cfg.inner.radius_min = in.at("radius_min").get<double>();
  cfg.inner.radius_max = in.at("radius_max").get<double>();
  return cfg;
}

}  // namespace

Json to_json(const ReportDocument& doc) {
  Json j;
  j["schema_version"] = doc.schema_version;
  j["problem"] = doc.problem;
  j["config"] = to_json(doc.config, doc.seed);
  j["b_count"] = doc.b_count;
  j["f_start"] = doc.f_start;
  Json iters = Json::array();
  for (const ReportRecord& rec : doc.iterations) iters.push_back(to_json(rec));
  j["iterations"] = std::move(iters);
  j["status"] = doc.status;
  j["message"] = doc.message;
  j["final"] = Json{{"x", vec_to_json(doc.x)},
                    {"y", vec_to_json(doc.y)},
                    {"Z", sym_to_json(doc.Z)}};
  j["wall_time_seconds"] = doc.wall_time_seconds;
  return j;
}

ReportDocument report_from_json(const Json& j) {
  try {
    ReportDocument doc;
    doc.schema_version = j.at("schema_version").get<std::string>();
    if (doc.schema_version != kSchemaVersion) {
      throw_invalid("report: unsupported schema_version '" + doc.schema_version +
                    "'");
    }
    doc.problem = j.at("problem").get<std::string>();
    doc.config = config_from_json(j.at("config"));
    const Json& seed = j.at("config").at("seed");
    if (!seed.is_null()) doc.seed = seed.get<std::uint64_t>();
    doc.b_count = j.at("b_count").get<Index>();
    doc.f_start = j.at("f_start").get<double>();
    for (const Json& rec : j.at("iterations")) {
      doc.iterations.push_back(record_from_json(rec));
    }
    doc.status = j.at("status").get<std::string>();
    doc.message = j.at("message").get<std::string>();
    const Json& fin = j.at("final");
    doc.x = vec_from_json(fin.at("x"));
    doc.y = vec_from_json(fin.at("y"));
    doc.Z = sym_from_json(fin.at("Z"));
    doc.wall_time_seconds = j.at("wall_time_seconds").get<double>();
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("report: ") + e.what());
  }
}

std::string serialize(const ReportDocument& doc) {
  return to_json(doc).dump(2) + "\n";
}

std::string serialize_trace(const std::vector<ReportRecord>& records) {
  std::string out;
  for (const ReportRecord& rec : records) {
    out += to_json(rec).dump();
    out += '\n';
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename " + tmp.string() + " to " +
                             path.string() + ": " + ec.message());
  }
}

}  // namespace nsdp::tools
