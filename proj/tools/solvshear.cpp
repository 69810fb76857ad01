#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "solvshear/builtins.hpp"
#include "solvshear/g2.hpp"
#include "solvshear/notation.hpp"

using nlohmann::json;
using namespace solvshear;

namespace {

constexpr int kPass = 0;
constexpr int kUsageError = 1;
constexpr int kCheckFailed = 2;

struct Options {
  std::string alg;
  std::string a_sub;
  std::string omega0;
  std::string nu;
  std::string set;
  std::string form;
  std::string mode;            // check positional
  std::string target = "all";  // reproduce positional
  bool json_out = false;
  double tol = kTolConsistency;
};

std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

/// Collects the machine-readable document (stable keys) and, unless --json
/// was passed, mirrors progress as human-readable lines on stdout.
struct Output {
  json doc;
  bool json_only;
  Output(const std::string& command, bool js)
      : doc{{"command", command},   {"inputs", json::object()},
            {"conditions", json::array()}, {"algebra_out", ""},
            {"forms_out", json::array()},  {"checks", json::array()},
            {"chain", json::array()}},
        json_only(js) {}
  void text(const std::string& line) const {
    if (!json_only) std::cout << line << "\n";
  }
  void condition(const Condition& c) {
    doc["conditions"].push_back({{"name", c.name},
                                 {"ok", c.ok},
                                 {"required", c.required},
                                 {"detail", c.detail}});
    if (json_only) return;
    std::string line = "  " + pad(c.name, 30) + (c.ok ? "pass" : "FAIL");
    if (!c.required) line += "  (informational)";
    if (!c.detail.empty()) line += "  [" + c.detail + "]";
    std::cout << line << "\n";
  }
  void check(const std::string& name, bool ok, const std::string& detail = {}) {
    doc["checks"].push_back({{"name", name}, {"ok", ok}, {"detail", detail}});
  }
  void flush() const {
    if (json_only) std::cout << doc.dump(2) << "\n";
  }
};

std::string load_text(const std::string& arg) {
  if (arg.empty() || arg[0] != '@') return arg;
  std::ifstream in(arg.substr(1));
  if (!in) throw std::invalid_argument("cannot read file: " + arg.substr(1));
  std::stringstream ss;
  ss << in.rdbuf();
  std::string s = ss.str();
  auto space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
  while (!s.empty() && space(s.back())) s.pop_back();
  std::size_t b = 0;
  while (b < s.size() && space(s[b])) ++b;
  return s.substr(b);
}

std::map<int, Rational> parse_set(const std::string& text) {
  std::map<int, Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--set entries must be name=value: " + item);
    Scalar v = parse_scalar(item.substr(eq + 1));
    if (!v.is_constant())
      throw std::invalid_argument("--set values must be rational: " + item);
    out[Params::id(item.substr(0, eq))] = v.constant_value();
  }
  return out;
}

std::vector<int> parse_indices(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stoi(item));
  return out;
}

LieAlgebra load_algebra(const Options& o) {
  if (o.alg.empty()) throw std::invalid_argument("--alg is required");
  LieAlgebra g = parse_algebra(load_text(o.alg));
  if (!o.set.empty()) g = g.instantiate(parse_set(o.set));
  return g;
}

VForm make_omega0(int n, const std::vector<int>& a, const std::string& text) {
  VForm om(n, 2, static_cast<int>(a.size()));
  for (auto& [k, form] : parse_valued_form(text, n)) {
    auto it = std::find(a.begin(), a.end(), k);
    if (it == a.end())
      throw std::invalid_argument("--omega0 value index outside --a-sub");
    om.comps[it - a.begin()] = form;
  }
  return om;
}

ShearData make_data(const LieAlgebra& g, const Options& o) {
  if (o.a_sub.empty() || o.omega0.empty())
    throw std::invalid_argument("--a-sub and --omega0 are required for shear data");
  std::vector<int> a = parse_indices(o.a_sub);
  int n = g.dim();
  Mat nu(n, n);
  if (!o.nu.empty())
    for (auto& [k, img] : parse_endo(o.nu, n))
      for (int i = 0; i < n; ++i) nu.at(i, k - 1) = img[i];
  ShearData d = aa_build_data(g, a, make_omega0(n, a, o.omega0), nu);
  if (!o.set.empty()) d = d.instantiate(parse_set(o.set));
  return d;
}

std::string endo_string(const Mat& m) {
  std::string out;
  for (int j = 0; j < m.cols(); ++j) {
    Vec col(m.rows());
    bool nonzero = false;
    for (int i = 0; i < m.rows(); ++i) {
      col[i] = m.at(i, j);
      nonzero = nonzero || !col[i].is_zero();
    }
    if (!nonzero) continue;
    if (!out.empty()) out += ";";
    out += std::to_string(j + 1) + ":" + print_vector(col);
  }
  return out.empty() ? "0" : out;
}

std::string mat_string(const Mat& m) {
  std::string out = "[";
  for (int i = 0; i < m.rows(); ++i) {
    out += i ? "; " : "";
    for (int j = 0; j < m.cols(); ++j)
      out += (j ? "," : "") + print_scalar(m.at(i, j));
  }
  return out + "]";
}

int run_validate(const Options& o, Output& out) {
  ShearData d = make_data(load_algebra(o), o);
  ValidationReport rep = validate(d);
  out.text("conditions:");
  for (const Condition& c : rep.items) out.condition(c);
  out.check("valid", rep.ok());
  out.text(rep.ok() ? "shear data valid" : "shear data invalid");
  return rep.ok() ? kPass : kCheckFailed;
}

int run_shear(const Options& o, Output& out) {
  LieAlgebra g = load_algebra(o);
  ShearData d = make_data(g, o);
  ValidationReport rep = validate(d);
  for (const Condition& c : rep.items) out.condition(c);
  out.check("valid", rep.ok());
  if (!rep.ok()) {
    out.text("shear data invalid");
    return kCheckFailed;
  }
  std::string hs = print_algebra(shear(d, true));
  out.doc["algebra_out"] = hs;
  out.text("shear: " + hs);
  if (!o.form.empty()) {
    KForm b = parse_form(load_text(o.form), g.dim());
    std::string db = print_form(transfer_d(d, b));
    out.doc["forms_out"].push_back(db);
    out.text("transferred differential: " + db);
  }
  return kPass;
}

int run_invert(const Options& o, Output& out) {
  LieAlgebra g = load_algebra(o);
  ShearData d = make_data(g, o);
  ValidationReport rep = validate(d);
  for (const Condition& c : rep.items) out.condition(c);
  out.check("valid", rep.ok());
  if (!rep.ok()) {
    out.text("shear data invalid");
    return kCheckFailed;
  }
  out.text("shear:     " + print_algebra(shear(d, true)));
  std::string back = print_algebra(shear(invert(d), true));
  out.doc["algebra_out"] = back;
  out.text("recovered: " + back);
  bool match = same_algebra(back, print_algebra(g));
  out.check("round_trip", match);
  out.text(match ? "round trip recovers the original algebra"
                 : "round trip FAILED to recover the original algebra");
  return match ? kPass : kCheckFailed;
}

int run_abelianize(const Options& o, Output& out) {
  LieAlgebra g = load_algebra(o);
  out.text("start:  " + print_algebra(g) + "  (derived length " +
           std::to_string(g.derived_length()) + ")");
  if (g.is_abelian()) {
    out.check("final_abelian", true);
    out.text("already abelian");
    return kPass;
  }
  std::vector<LieAlgebra> chain = abelianize_chain(g);
  for (std::size_t i = 0; i < chain.size(); ++i) {
    std::string s = print_algebra(chain[i]);
    out.doc["chain"].push_back(s);
    out.text("step " + std::to_string(i + 1) + ": " + s + "  (derived length " +
             std::to_string(chain[i].derived_length()) + ")");
  }
  bool fin = !chain.empty() && chain.back().is_abelian();
  out.check("final_abelian", fin);
  return fin ? kPass : kCheckFailed;
}

int run_check(const Options& o, Output& out) {
  if (o.mode == "g2") {
    KForm phi =
        o.form.empty() ? standard_phi_calibrated() : parse_form(load_text(o.form), 7, 3);
    G2Metric m = g2_metric(phi);
    out.check("positive", true);
    out.check("metric_exact_identity", m.exact_identity, mat_string(m.b));
    out.text("positive 3-form; bilinear form " + mat_string(m.b));
    if (!o.alg.empty()) {
      LieAlgebra g = load_algebra(o);
      bool cal = is_calibrated(g, phi);
      bool cocal = is_cocalibrated(g, phi, o.tol);
      out.check("calibrated", cal);
      out.check("cocalibrated", cocal);
      out.text(std::string("calibrated: ") + (cal ? "yes" : "no") +
               ", cocalibrated: " + (cocal ? "yes" : "no"));
    }
    return kPass;
  }
  if (o.mode == "cocal" || o.mode == "cal") {
    bool cocal = o.mode == "cocal";
    LieAlgebra g = load_algebra(o);
    KForm phi = o.form.empty()
                    ? (cocal ? standard_phi_cocalibrated() : standard_phi_calibrated())
                    : parse_form(load_text(o.form), 7, 3);
    if (!o.a_sub.empty()) {
      if (o.omega0.empty()) throw std::invalid_argument("--omega0 is required with --a-sub");
      std::vector<int> a = parse_indices(o.a_sub);
      VForm om = make_omega0(g.dim(), a, o.omega0);
      if (!o.set.empty()) om = om.instantiate(parse_set(o.set));
      NuFamily fam = cocal ? cocalibrated_family(g, phi, a, om)
                           : calibrated_family(g, phi, a, om);
      for (const Condition& c : fam.conditions.items) out.condition(c);
      out.check("family_found", fam.ok(), fam.case_label);
      if (!fam.ok()) return kCheckFailed;
      out.text("case: " + fam.case_label);
      out.text("nu: " + endo_string(fam.nu));
      out.text("freedom dimension: " + std::to_string(fam.freedom.size()));
      std::string hs = print_algebra(shear(aa_build_data(g, a, om, fam.nu), true));
      out.doc["algebra_out"] = hs;
      out.text("shear with this nu: " + hs);
      return kPass;
    }
    bool ok = cocal ? is_cocalibrated(g, phi, o.tol) : is_calibrated(g, phi);
    out.check(cocal ? "cocalibrated" : "calibrated", ok);
    out.text(std::string(cocal ? "cocalibrated: " : "calibrated: ") + (ok ? "yes" : "no"));
    return ok ? kPass : kCheckFailed;
  }
  if (o.mode == "ask") {
    LieAlgebra g = load_algebra(o);
    KForm sigma = o.form.empty() ? standard_sigma_6d()
                                 : parse_form(load_text(o.form), g.dim(), 2);
    if (!o.a_sub.empty()) {
      ShearData d = make_data(g, o);
      SemiKahlerShearReport rep = semi_kahler_shear_conditions(d, sigma);
      for (const Condition& c : rep.conditions.items) out.condition(c);
      out.check("conditions_hold", rep.ok(), print_scalar(rep.lambda));
      out.check("sheared_closed", rep.sheared_closed);
      out.text("lambda: " + print_scalar(rep.lambda));
      if (rep.ok()) {
        std::string hs = print_algebra(shear(d, true));
        out.doc["algebra_out"] = hs;
        out.text("shear: " + hs);
      }
      return rep.ok() ? kPass : kCheckFailed;
    }
    SemiKahlerReport rep = semi_kahler_check(g, sigma);
    out.check("sigma_power_closed", rep.closed);
    out.check("frame_condition", rep.frame_condition);
    out.check("tests_agree", rep.agree);
    out.text(std::string("almost semi-Kahler: ") + (rep.closed ? "yes" : "no"));
    return (rep.closed && rep.agree) ? kPass : kCheckFailed;
  }
  // h3r3
  LieAlgebra g = load_algebra(o);
  KForm phi =
      o.form.empty() ? standard_phi_calibrated() : parse_form(load_text(o.form), 7, 3);
  H3R3Report rep = check_calibrated_h3r3(g, phi);
  for (const Condition& c : rep.conditions.items) out.condition(c);
  out.check("calibrated_two_step", rep.ok(), rep.case_label);
  if (!rep.case_label.empty()) out.text("case: " + rep.case_label);
  out.text(rep.ok() ? "calibrated (all case conditions hold)" : "conditions fail");
  return rep.ok() ? kPass : kCheckFailed;
}

int run_reproduce(const Options& o, Output& out) {
  std::vector<ReproduceResult> results;
  if (o.target == "all") {
    results = reproduce_all();
  } else {
    const BuiltinExample* ex = find_builtin(o.target);
    if (!ex) throw std::invalid_argument("unknown example id: " + o.target);
    results.push_back(reproduce(*ex));
  }
  bool all_ok = true;
  out.text(pad("id", 22) + pad("status", 8) + "result");
  for (const ReproduceResult& r : results) {
    all_ok = all_ok && r.ok();
    out.check(r.id, r.ok(), r.produced);
    out.text(pad(r.id, 22) + pad(r.ok() ? "pass" : "FAIL", 8) + r.produced);
    if (!r.ok())
      for (const Condition& c : r.steps.items)
        if (!c.ok)
          out.text("  failed: " + c.name + (c.detail.empty() ? "" : " [" + c.detail + "]"));
  }
  if (results.size() == 1) {
    for (const Condition& c : results[0].steps.items) out.condition(c);
    out.doc["algebra_out"] = results[0].produced;
  }
  out.text(all_ok ? "all examples reproduced" : "some examples FAILED");
  return all_ok ? kPass : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shear construction and special geometry on Lie algebras"};
  app.require_subcommand(1);
  Options o;

  CLI::App* v = app.add_subcommand("validate", "check the defining conditions of shear data");
  CLI::App* s = app.add_subcommand("shear", "compute the sheared algebra and transfer differentials");
  CLI::App* i = app.add_subcommand("invert", "invert shear data and verify the round trip");
  CLI::App* a = app.add_subcommand("abelianize", "print the abelianisation chain");
  CLI::App* c = app.add_subcommand("check", "check geometric structures");
  CLI::App* r = app.add_subcommand("reproduce", "re-derive built-in worked examples");
  c->add_option("mode", o.mode, "one of g2|cocal|cal|ask|h3r3")
      ->required()
      ->check(CLI::IsMember({"g2", "cocal", "cal", "ask", "h3r3"}));
  r->add_option("target", o.target, "'all' or an example id");

  std::vector<CLI::Option*> tol_opts;
  for (CLI::App* sub : {v, s, i, a, c, r}) {
    sub->add_option("--alg", o.alg, "algebra in structure-constant notation, or @file");
    sub->add_option("--a-sub", o.a_sub, "1-based shear directions, e.g. 1,4");
    sub->add_option("--omega0", o.omega0, "2-form with values, e.g. '36-25@1'");
    sub->add_option("--nu", o.nu, "endomorphism into the shear subspace, e.g. '1:-a1*e1;4:a1*e4'");
    sub->add_option("--set", o.set, "parameter values, e.g. a1=2,a2=1/3");
    sub->add_option("--form", o.form, "differential form (defaults per subcommand)");
    sub->add_flag("--json", o.json_out, "machine-readable output");
    tol_opts.push_back(sub->add_option("--tol", o.tol, "numeric tolerance"));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  bool tol_given = std::any_of(tol_opts.begin(), tol_opts.end(),
                               [](CLI::Option* t) { return t->count() > 0; });
  if (!tol_given) {
    if (const char* env = std::getenv("SOLVSHEAR_TOL")) {
      try {
        o.tol = std::stod(env);
      } catch (const std::exception&) {
        std::cerr << "error: SOLVSHEAR_TOL is not a number: " << env << "\n";
        return kUsageError;
      }
    }
  }

  std::string cmd = app.get_subcommands().front()->get_name();
  Output out(cmd == "check" ? "check " + o.mode : cmd, o.json_out);
  for (auto [key, val] : std::initializer_list<std::pair<const char*, const std::string*>>{
           {"algebra", &o.alg}, {"a_sub", &o.a_sub}, {"omega0", &o.omega0},
           {"nu", &o.nu},       {"set", &o.set},     {"form", &o.form}})
    if (!val->empty()) out.doc["inputs"][key] = *val;
  out.doc["inputs"]["tol"] = o.tol;

  int code = kPass;
  try {
    if (cmd == "validate") code = run_validate(o, out);
    else if (cmd == "shear") code = run_shear(o, out);
    else if (cmd == "invert") code = run_invert(o, out);
    else if (cmd == "abelianize") code = run_abelianize(o, out);
    else if (cmd == "check") code = run_check(o, out);
    else code = run_reproduce(o, out);
  } catch (const NotationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    out.flush();
    return kCheckFailed;
  }
  out.flush();
  return code;
}
