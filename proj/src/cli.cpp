#include "radial/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "radial/errors.hpp"

namespace radial {

const char* kProfileGrammar =
    "profile grammar:\n"
    "  expr    := term ((\"+\"|\"-\") term)* ;\n"
    "  term    := factor (\"*\" factor)* ;\n"
    "  factor  := NUMBER | \"y\" (\"^\" SNUMBER)? | \"exp\" \"(\" SNUMBER \"*\" \"y\" \")\" ;\n"
    "  SNUMBER := (\"-\")? NUMBER ;  NUMBER := decimal literal.\n"
    "examples: \"y - y^2 + y^3\", \"0.5*y + 0.2*y^-2\", \"y + 0.3*y^-1*exp(-1*y)\"\n";

namespace {

std::vector<Complex> parse_complex_list(const std::string& text) {
  std::vector<Complex> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    try {
      if (colon == std::string::npos)
        out.emplace_back(std::stod(item), 0.0);
      else
        out.emplace_back(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
    } catch (const std::exception&) {
      throw ParamError("malformed complex component '" + item + "' (expected re or re:im)");
    }
  }
  if (out.empty()) throw ParamError("empty coordinate list");
  return out;
}

RadialMetric metric_from_config(const RunConfig& c) {
  if (c.psi_text.empty()) throw ParamError("--psi is required");
  if (c.dim < 1) throw ParamError("--dim is required and must be >= 1");
  const ExpLaurentExpr psi = parse(c.psi_text);
  if (c.y_range) return make_symbolic_metric(c.dim, psi, c.y_range->first, c.y_range->second);
  return metric_from_profile(c.dim, psi);
}

Json json_of(const ExtremalParams& p) {
  Json j = Json::object();
  j.set("A", p.A).set("B", p.B).set("C", p.C).set("D", p.D);
  return j;
}

Json json_of_complex(const Complex& z) {
  Json j = Json::array();
  j.push(z.real()).push(z.imag());
  return j;
}

Json json_of_matrix(const HermitianMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push(json_of_complex(m(i, j)));
    rows.push(std::move(row));
  }
  return rows;
}

const char* status_name(ImplicationStatus s) {
  switch (s) {
    case ImplicationStatus::vacuous: return "vacuous";
    case ImplicationStatus::confirmed: return "confirmed";
    default: return "VIOLATED";
  }
}

}  // namespace

Json json_of(const ClassificationReport& rep) {
  Json j = Json::object();
  j.set("dim", rep.dim);
  Json range = Json::object();
  range.set("lo", rep.y_lo).set("hi", rep.y_hi);
  j.set("y_range", std::move(range));

  Json ext = Json::object();
  ext.set("member", rep.extremal.member)
      .set("params", json_of(rep.extremal.params))
      .set("residual", rep.extremal.residual)
      .set("flat", rep.extremal.flat);
  j.set("extremal", std::move(ext));

  Json ke = Json::object();
  ke.set("member", rep.ke.member)
      .set("lambda_ke", rep.ke.lambda_ke)
      .set("residual", rep.ke.residual)
      .set("defined_at_origin", rep.ke.defined_at_origin)
      .set("space_form", rep.ke.space_form);
  j.set("ke", std::move(ke));

  Json krs = Json::object();
  Json kp = Json::object();
  kp.set("mu", rep.krs.params.mu)
      .set("lambda", rep.krs.params.lambda)
      .set("nu", rep.krs.params.nu)
      .set("k1", rep.krs.params.k1);
  krs.set("member", rep.krs.member)
      .set("params", std::move(kp))
      .set("residual", rep.krs.residual)
      .set("trivial", rep.krs.trivial)
      .set("lambda_solitonic", rep.krs.lambda_solitonic);
  j.set("krs", std::move(krs));

  Json ks = Json::array();
  for (const auto& kr : rep.kcsck) {
    Json e = Json::object();
    e.set("k", kr.params.k)
        .set("member", kr.member)
        .set("A_k", kr.params.A_k)
        .set("B_k", kr.params.B_k)
        .set("rho_k", kr.params.rho_k)
        .set("residual", kr.residual);
    ks.push(std::move(e));
  }
  j.set("kcsck", std::move(ks));

  Json notes = Json::array();
  for (const auto& n : rep.notes) notes.push(n);
  j.set("notes", std::move(notes));
  return j;
}

Json json_of(const TheoremReport& rep) {
  Json j = Json::object();
  Json imps = Json::array();
  for (const auto& imp : rep.implications) {
    Json e = Json::object();
    e.set("name", imp.name).set("status", status_name(imp.status)).set("detail", imp.detail);
    imps.push(std::move(e));
  }
  j.set("implications", std::move(imps));
  j.set("any_violation", rep.any_violation);
  j.set("classification", json_of(rep.classification));
  return j;
}

Json json_of(const OracleReport& rep) {
  Json j = Json::object();
  j.set("quantity", rep.quantity)
      .set("max_rel_err", rep.max_rel_err)
      .set("threshold", rep.threshold)
      .set("pass", rep.pass);
  Json pts = Json::array();
  for (const auto& p : rep.points) pts.push(p);
  j.set("points", std::move(pts));
  Json ref = Json::array(), ora = Json::array();
  for (double v : rep.reference) ref.push(v);
  for (double v : rep.oracle) ora.push(v);
  j.set("reference", std::move(ref));
  j.set("oracle", std::move(ora));
  return j;
}

Json json_of(const CurvatureSample& s) {
  Json j = Json::object();
  Json pt = Json::array();
  for (const auto& z : s.point) pt.push(json_of_complex(z));
  j.set("point", std::move(pt));
  j.set("g", json_of_matrix(s.g));
  j.set("ric", json_of_matrix(s.ric));
  if (s.riemann_valid) {
    Json r = Json::object();
    r.set("r1111", s.riemann.r1111).set("r11ii", s.riemann.r11ii).set("riiii", s.riemann.riiii);
    j.set("riemann_axis", std::move(r));
  }
  if (s.hsc_valid) {
    j.set("hsc", s.hsc_value);
    Json xi = Json::array();
    for (const auto& x : s.xi) xi.push(json_of_complex(x));
    j.set("xi", std::move(xi));
  }
  return j;
}

Json json_of(const SuiteResult& s) {
  Json j = Json::object();
  j.set("name", s.name).set("draws", s.draws).set("violations", s.violations);
  Json f = Json::array();
  for (const auto& msg : s.failures) f.push(msg);
  j.set("failures", std::move(f));
  return j;
}

std::string potential_csv(const PotentialTable& table) {
  Csv csv({"t", "r", "y", "f", "f_prime"});
  for (const auto& row : table.rows) csv.row({row.t, row.r, row.y, row.f, row.f_prime});
  return csv.str();
}

namespace {

std::string classification_text(const ClassificationReport& rep) {
  std::ostringstream os;
  os << "dim " << rep.dim << ", validity interval (" << format_sig17(rep.y_lo) << ", "
     << format_sig17(rep.y_hi) << ")\n";
  os << "extremal: " << (rep.extremal.member ? "member" : "not a member");
  if (rep.extremal.member)
    os << "  A=" << format_sig17(rep.extremal.params.A) << " B=" << format_sig17(rep.extremal.params.B)
       << " C=" << format_sig17(rep.extremal.params.C) << " D=" << format_sig17(rep.extremal.params.D)
       << (rep.extremal.flat ? " (flat)" : "");
  os << "\n";
  os << "einstein: " << (rep.ke.member ? "member" : "not a member");
  if (rep.ke.member) os << "  lambda_ke=" << format_sig17(rep.ke.lambda_ke);
  os << "\n";
  os << "soliton: " << (rep.krs.member ? "member" : "not a member");
  if (rep.krs.member)
    os << "  mu=" << format_sig17(rep.krs.params.mu) << " lambda=" << format_sig17(rep.krs.params.lambda)
       << " nu=" << format_sig17(rep.krs.params.nu) << (rep.krs.trivial ? " (trivial)" : "");
  os << "\n";
  for (const auto& kr : rep.kcsck) {
    os << "rho_" << kr.params.k << " constant: " << (kr.member ? "yes" : "no");
    if (kr.member)
      os << "  A_k=" << format_sig17(kr.params.A_k) << " B_k=" << format_sig17(kr.params.B_k)
         << " rho_k=" << format_sig17(kr.params.rho_k);
    os << "\n";
  }
  for (const auto& n : rep.notes) os << "note: " << n << "\n";
  return os.str();
}

int run_classify(const RunConfig& c, std::ostream& out) {
  const RadialMetric m = metric_from_config(c);
  const ClassificationReport rep = classify_all(m, {c.tol, c.samples});
  if (c.format == "text") {
    out << classification_text(rep);
  } else if (c.format == "csv") {
    Csv csv({"key", "value"});
    csv.row_text({"extremal", rep.extremal.member ? "1" : "0"});
    csv.row_text({"A", format_sig17(rep.extremal.params.A)});
    csv.row_text({"B", format_sig17(rep.extremal.params.B)});
    csv.row_text({"C", format_sig17(rep.extremal.params.C)});
    csv.row_text({"D", format_sig17(rep.extremal.params.D)});
    csv.row_text({"ke", rep.ke.member ? "1" : "0"});
    csv.row_text({"lambda_ke", format_sig17(rep.ke.lambda_ke)});
    csv.row_text({"krs", rep.krs.member ? "1" : "0"});
    csv.row_text({"mu", format_sig17(rep.krs.params.mu)});
    csv.row_text({"lambda", format_sig17(rep.krs.params.lambda)});
    csv.row_text({"nu", format_sig17(rep.krs.params.nu)});
    for (const auto& kr : rep.kcsck)
      csv.row_text({"kcsck_" + std::to_string(kr.params.k), kr.member ? "1" : "0"});
    out << csv.str();
  } else {
    out << json_of(rep).dump() << "\n";
  }
  const bool any = rep.extremal.member || rep.ke.member || rep.krs.member ||
                   std::any_of(rep.kcsck.begin(), rep.kcsck.end(),
                               [](const KcsckResult& r) { return r.member; });
  return (c.strict && !any) ? 1 : 0;
}

int run_rho(const RunConfig& c, std::ostream& out) {
  const RadialMetric m = metric_from_config(c);
  std::vector<int> ks;
  if (c.k)
    ks.push_back(*c.k);
  else
    for (int k = 1; k <= m.dim; ++k) ks.push_back(k);
  std::vector<YFunction> rhos;
  for (int k : ks) rhos.push_back(rho_k(m, k));
  const auto grid = default_grid(m, c.samples);

  if (c.format == "json") {
    Json j = Json::object();
    Json ys = Json::array();
    for (double y : grid) ys.push(y);
    j.set("y", std::move(ys));
    for (std::size_t i = 0; i < ks.size(); ++i) {
      Json vals = Json::array();
      for (double y : grid) vals.push(rhos[i](y));
      j.set("rho_" + std::to_string(ks[i]), std::move(vals));
    }
    out << j.dump() << "\n";
  } else {
    std::vector<std::string> header{"y"};
    for (int k : ks) header.push_back("rho_" + std::to_string(k));
    Csv csv(header);
    for (double y : grid) {
      std::vector<double> row{y};
      for (auto& r : rhos) row.push_back(r(y));
      csv.row(row);
    }
    out << csv.str();
  }
  return 0;
}

int run_curvature(const RunConfig& c, std::ostream& out) {
  const RadialMetric m = metric_from_config(c);
  if (c.z_text.empty()) throw ParamError("curvature requires --z");
  if (!c.y_at) throw ParamError("curvature requires --y-at");
  const std::vector<Complex> z = parse_complex_list(c.z_text);
  std::vector<Complex> xi;
  if (!c.xi_text.empty()) xi = parse_complex_list(c.xi_text);
  const CurvatureSample s = curvature_sample(m, z, *c.y_at, xi);
  if (c.format == "text") {
    out << "g:\n" << s.g << "\nric:\n" << s.ric << "\n";
    if (s.riemann_valid)
      out << "riemann axis: r1111=" << format_sig17(s.riemann.r1111)
          << " r11ii=" << format_sig17(s.riemann.r11ii)
          << " riiii=" << format_sig17(s.riemann.riiii) << "\n";
    if (s.hsc_valid) out << "hsc: " << format_sig17(s.hsc_value) << "\n";
  } else {
    out << json_of(s).dump() << "\n";
  }
  return 0;
}

int run_potential(const RunConfig& c, std::ostream& out) {
  const RadialMetric m = metric_from_config(c);
  IntegrateOptions opt;
  opt.tol = std::min(c.tol, 1e-6);
  opt.rows = std::max(c.samples, 257);
  PotentialTable table = integrate_y(m, c.t0, c.y0, c.t_range.first, c.t_range.second, opt);
  reconstruct_potential(table);
  if (c.format == "json") {
    Json j = Json::object();
    Json rows = Json::array();
    for (const auto& r : table.rows) {
      Json row = Json::object();
      row.set("t", r.t).set("r", r.r).set("y", r.y).set("f", r.f).set("f_prime", r.f_prime);
      rows.push(std::move(row));
    }
    j.set("rows", std::move(rows));
    j.set("y_inf", table.y_inf).set("y_sup", table.y_sup);
    j.set("hit_inf", table.hit_inf).set("hit_sup", table.hit_sup);
    out << j.dump() << "\n";
  } else {
    out << potential_csv(table);
  }
  return 0;
}

int run_scan_hsc(const RunConfig& c, std::ostream& out) {
  const RadialMetric m = metric_from_config(c);
  double lo, hi;
  if (c.y_range) {
    lo = c.y_range->first;
    hi = c.y_range->second;
  } else {
    const auto grid = default_grid(m, 2);
    lo = grid.front();
    hi = grid.back();
  }
  const auto brackets = hsc_sign_scan(m, lo, hi, std::max(c.samples, 8));
  if (c.format == "csv") {
    Csv csv({"bracket_lo", "bracket_hi", "root", "psi_at_root", "psi_positive"});
    for (const auto& b : brackets)
      csv.row({b.bracket_lo, b.bracket_hi, b.root, b.psi_at_root, b.psi_positive ? 1.0 : 0.0});
    out << csv.str();
  } else if (c.format == "text") {
    if (brackets.empty()) out << "no sign change of psi_ddot on the scanned interval\n";
    for (const auto& b : brackets)
      out << "psi_ddot changes sign at y=" << format_sig17(b.root)
          << " (psi=" << format_sig17(b.psi_at_root) << ")\n";
  } else {
    Json j = Json::object();
    Json arr = Json::array();
    for (const auto& b : brackets) {
      Json e = Json::object();
      e.set("bracket_lo", b.bracket_lo)
          .set("bracket_hi", b.bracket_hi)
          .set("root", b.root)
          .set("psi_at_root", b.psi_at_root)
          .set("psi_positive", b.psi_positive);
      arr.push(std::move(e));
    }
    j.set("sign_changes", std::move(arr));
    out << j.dump() << "\n";
  }
  return (c.strict && brackets.empty()) ? 1 : 0;
}

int run_verify(const RunConfig& c, std::ostream& out) {
  if (c.random_draws > 0) {
    const int d = c.random_draws;
    std::vector<SuiteResult> suites{
        suite_extremal_not_krs(d, c.seed),
        suite_kcsck_single_k(d, c.seed + 1),
        suite_kcsck_not_extremal(d, c.seed + 2),
        suite_krs_nonconstant_rho(d, c.seed + 3),
    };
    int total = 0;
    Json arr = Json::array();
    for (const auto& s : suites) {
      total += s.violations;
      arr.push(json_of(s));
    }
    if (c.format == "text") {
      for (const auto& s : suites)
        out << s.name << ": " << s.draws << " draws, " << s.violations << " violations\n";
    } else {
      Json j = Json::object();
      j.set("suites", std::move(arr));
      j.set("seed", static_cast<long long>(c.seed));
      j.set("total_violations", total);
      out << j.dump() << "\n";
    }
    return total > 0 ? 1 : 0;
  }
  const RadialMetric m = metric_from_config(c);
  const TheoremReport rep = verify_theorem(m, {c.tol, c.samples});
  if (c.format == "text") {
    for (const auto& imp : rep.implications)
      out << imp.name << ": " << status_name(imp.status) << " (" << imp.detail << ")\n";
  } else {
    out << json_of(rep).dump() << "\n";
  }
  return rep.any_violation ? 1 : 0;
}

int run_oracle(const RunConfig& c, std::ostream& out) {
  const RadialMetric m = metric_from_config(c);
  const auto grid = default_grid(m, 16);

  std::vector<RhoSite> sites;
  if (!c.z_text.empty() && c.y_at) {
    sites.push_back({parse_complex_list(c.z_text), *c.y_at});
  } else {
    // Default sites: mid-domain y values at two radii, dimension-n points.
    for (double frac : {0.35, 0.65}) {
      const double y = grid[static_cast<std::size_t>(frac * (grid.size() - 1))];
      std::vector<Complex> z(m.dim, Complex(0.1, 0.05));
      z[0] = Complex(1.0, 0.2);
      sites.push_back({z, y});
    }
  }
  std::vector<OracleReport> reports;
  reports.push_back(rho_oracle_report(m, sites));

  const double y_mid = grid[grid.size() / 2];
  PotentialTable table = integrate_y(m, 0.0, y_mid, -1.0, 1.0, {1e-6, 257});
  reconstruct_potential(table);
  reports.push_back(ricci_fd_oracle(m, table));
  reports.push_back(riemann_fd_oracle(m, 1.0, y_mid));

  bool all_pass = true;
  Json arr = Json::array();
  for (const auto& r : reports) {
    all_pass &= r.pass;
    arr.push(json_of(r));
  }
  if (c.format == "text") {
    for (const auto& r : reports)
      out << r.quantity << ": " << (r.pass ? "pass" : "FAIL")
          << " (max_rel_err=" << format_sig17(r.max_rel_err) << ")\n";
  } else {
    Json j = Json::object();
    j.set("reports", std::move(arr));
    j.set("all_pass", all_pass);
    out << j.dump() << "\n";
  }
  return (c.strict && !all_pass) ? 1 : 0;
}

}  // namespace

int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err) {
  RunConfig c = config;
  if (c.format.empty()) c.format = (c.command == "potential" || c.command == "rho") ? "csv" : "json";
  try {
    std::ostringstream buffer;
    int code;
    if (c.command == "classify")
      code = run_classify(c, buffer);
    else if (c.command == "rho")
      code = run_rho(c, buffer);
    else if (c.command == "curvature")
      code = run_curvature(c, buffer);
    else if (c.command == "potential")
      code = run_potential(c, buffer);
    else if (c.command == "scan-hsc")
      code = run_scan_hsc(c, buffer);
    else if (c.command == "verify")
      code = run_verify(c, buffer);
    else if (c.command == "oracle")
      code = run_oracle(c, buffer);
    else
      throw ParamError("unknown command '" + c.command + "'");

    if (!c.out_path.empty()) {
      std::ofstream f(c.out_path, std::ios::binary);
      if (!f) throw Error("cannot open output file " + c.out_path);
      f << buffer.str();
    } else {
      out << buffer.str();
    }
    return code;
  } catch (const SyntaxError& e) {
    err << "error: " << e.what() << "\n" << kProfileGrammar;
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace radial
