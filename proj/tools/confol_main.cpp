// confol: command-line workbench for plane fields, characteristic
// foliations, holonomy, confoliation perturbations, product filling forms
// and the open-book cap pipeline.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "confol/mcg.hpp"
#include "confol/perturb.hpp"
#include "confol/planefields.hpp"
#include "confol/surfdyn.hpp"
#include "confol/symplectic.hpp"

using json = nlohmann::ordered_json;
using namespace confol;

namespace {

constexpr const char* kVersion = "0.1.0";

struct GlobalOpts {
  int grid = 21;
  double margin = 1e-6;
  double tol = 1e-9;
  unsigned seed = 0;
  std::string out;
  std::string format = "json";
};

Margins margins_of(const GlobalOpts& g) { return Margins{g.margin, g.tol}; }

// --- chart specs -----------------------------------------------------

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t");
  auto b = s.find_last_not_of(" \t");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

// domain entries look like "-1:1" with an optional trailing p for periodic
ChartPtr chart_from_specs(const std::string& vars, const std::string& domain,
                          const std::string& singular) {
  std::vector<std::string> names;
  for (auto& v : split(vars, ',')) names.push_back(trim(v));
  std::vector<Interval> intervals;
  std::vector<bool> periodic;
  for (auto& piece : split(domain, ',')) {
    std::string d = trim(piece);
    bool per = false;
    if (!d.empty() && (d.back() == 'p' || d.back() == 'P')) {
      per = true;
      d.pop_back();
    }
    auto sep = d.find(':', 1);  // skip a leading minus sign
    if (sep == std::string::npos)
      throw ParseError("domain entry '" + piece + "' is not lo:hi", 0);
    intervals.push_back(
        {std::stod(d.substr(0, sep)), std::stod(d.substr(sep + 1))});
    periodic.push_back(per);
  }
  std::vector<std::pair<std::string, double>> loci;
  if (!singular.empty()) {
    for (auto& piece : split(singular, ',')) {
      auto eq = piece.find('=');
      if (eq == std::string::npos)
        throw ParseError("singular entry '" + piece + "' is not var=value", 0);
      loci.emplace_back(trim(piece.substr(0, eq)),
                        std::stod(piece.substr(eq + 1)));
    }
  }
  return make_chart("chart", names, intervals, periodic, loci);
}

// "u,v -> (e1, e2, e3)" with the parameter domain given separately
ChartMap map_from_spec(const std::string& spec, const std::string& domain,
                       const ChartPtr& target) {
  auto arrow = spec.find("->");
  if (arrow == std::string::npos)
    throw ParseError("map spec needs 'params -> (components)'", 0);
  auto param_chart = chart_from_specs(trim(spec.substr(0, arrow)), domain, "");
  std::string body = trim(spec.substr(arrow + 2));
  if (body.size() < 2 || body.front() != '(' || body.back() != ')')
    throw ParseError("map components must be parenthesized", arrow);
  body = body.substr(1, body.size() - 2);
  // split at top-level commas
  std::vector<std::string> pieces;
  int depth = 0;
  std::string cur;
  for (char c : body) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      pieces.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  pieces.push_back(cur);
  std::vector<ScalarExpr> comps;
  for (auto& piece : pieces)
    comps.push_back(parse_expr(trim(piece), param_chart));
  return ChartMap(param_chart, target, comps);
}

PlaneFieldChart field_from_options(const std::string& example_name,
                                   const std::string& params,
                                   const std::string& form,
                                   const std::string& vars,
                                   const std::string& domain,
                                   const std::string& singular) {
  if (!example_name.empty()) {
    std::map<std::string, double> p;
    if (!params.empty()) {
      for (auto& piece : split(params, ',')) {
        auto eq = piece.find('=');
        if (eq == std::string::npos)
          throw ParseError("param '" + piece + "' is not key=value", 0);
        p[trim(piece.substr(0, eq))] = std::stod(piece.substr(eq + 1));
      }
    }
    return example(example_name, p);
  }
  if (form.empty() || vars.empty() || domain.empty())
    throw ParseError("need either --example or --form/--chart/--domain", 0);
  auto chart = chart_from_specs(vars, domain, singular);
  return PlaneFieldChart(parse_form_literal(form, chart), "cli");
}

// --- report emission -------------------------------------------------

void render_text(const json& node, std::ostream& os, int indent = 0) {
  const std::string pad(indent, ' ');
  if (node.is_object()) {
    for (auto it = node.begin(); it != node.end(); ++it) {
      if (it.value().is_object() || it.value().is_array()) {
        os << pad << it.key() << ":\n";
        render_text(it.value(), os, indent + 2);
      } else {
        os << pad << it.key() << ": " << it.value().dump() << "\n";
      }
    }
  } else if (node.is_array()) {
    for (const auto& item : node) {
      if (item.is_object() || item.is_array()) {
        os << pad << "-\n";
        render_text(item, os, indent + 2);
      } else {
        os << pad << "- " << item.dump() << "\n";
      }
    }
  } else {
    os << pad << node.dump() << "\n";
  }
}

void emit(const GlobalOpts& g, const std::string& command, const json& config,
          const json& result) {
  json report;
  report["tool"] = "confol";
  report["version"] = kVersion;
  report["command"] = command;
  report["config"] = config;
  report["result"] = result;

  std::ostringstream body;
  if (g.format == "text")
    render_text(report, body);
  else
    body << report.dump(2) << "\n";

  if (g.out.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream file(g.out);
    if (!file) throw Error("cannot open output file " + g.out);
    file << body.str();
  }
}

json classification_json(const ClassificationReport& r) {
  json out;
  out["verdict"] = verdict_name(r.verdict);
  out["min_density"] = r.min_density;
  out["max_density"] = r.max_density;
  out["margin"] = r.margins.margin;
  out["zero_tol"] = r.margins.zero_tol;
  out["grid"] = r.grid_n;
  out["samples"] = r.samples;
  return out;
}

// --- charfol output --------------------------------------------------

void write_streamline_csv(const CharFoliation& fol, const ChartMap& surface,
                          std::ostream& os) {
  os << "curve_id,s,u,v";
  for (int i = 0; i < surface.target->dim(); ++i)
    os << "," << surface.target->variable(i);
  os << "\n";
  char buf[64];
  for (std::size_t id = 0; id < fol.streamlines.size(); ++id) {
    for (const auto& s : fol.streamlines[id].samples) {
      auto mapped = surface.eval(std::span<const double>(&s[1], 2));
      os << id;
      for (double v : {s[0], s[1], s[2]}) {
        std::snprintf(buf, sizeof buf, ",%.12g", v);
        os << buf;
      }
      for (double v : mapped) {
        std::snprintf(buf, sizeof buf, ",%.12g", v);
        os << buf;
      }
      os << "\n";
    }
  }
}

void write_streamline_svg(const CharFoliation& fol, const ChartPtr& param,
                          std::ostream& os) {
  const double width = 640, height = 640;
  const auto& iu = param->interval(0);
  const auto& iv = param->interval(1);
  auto X = [&](double u) { return (u - iu.lo) / (iu.hi - iu.lo) * width; };
  auto Y = [&](double v) {
    return height - (v - iv.lo) / (iv.hi - iv.lo) * height;
  };
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
     << height << "\">\n";
  os << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  char buf[64];
  for (const auto& line : fol.streamlines) {
    os << "  <polyline fill=\"none\" stroke=\"#336699\" stroke-width=\"1\" "
          "points=\"";
    for (const auto& s : line.samples) {
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", X(s[1]), Y(s[2]));
      os << buf;
    }
    os << "\"/>\n";
  }
  for (const auto& p : fol.singular_nodes) {
    std::snprintf(
        buf, sizeof buf,
        "  <circle cx=\"%.2f\" cy=\"%.2f\" r=\"2.5\" fill=\"#cc3333\"/>\n",
        X(p.u), Y(p.v));
    os << buf;
  }
  os << "</svg>\n";
}

// --- subcommand wiring -----------------------------------------------

struct FieldOpts {
  std::string example, params, form, vars, domain, singular;
  void attach(CLI::App* cmd) {
    cmd->add_option("--example", example, "catalog plane field name");
    cmd->add_option("--param", params, "catalog parameters k=v[,k=v...]");
    cmd->add_option("--form", form, "1-form literal, e.g. 'dz - y*dx'");
    cmd->add_option("--chart", vars, "chart variables, e.g. x,y,z");
    cmd->add_option("--domain", domain, "per-variable lo:hi[p], p = periodic");
    cmd->add_option("--singular", singular, "singular loci var=value,...");
  }
  PlaneFieldChart build() const {
    return field_from_options(example, params, form, vars, domain, singular);
  }
};

int run(int argc, char** argv) {
  CLI::App app{"confoliation workbench"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--grid", g.grid, "grid resolution per axis")
      ->capture_default_str();
  app.add_option("--margin", g.margin, "positivity margin")
      ->capture_default_str();
  app.add_option("--tol", g.tol, "zero tolerance")->capture_default_str();
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--out", g.out, "output file (default stdout)");
  app.add_option("--format", g.format, "json | text | csv | svg")
      ->check(CLI::IsMember({"json", "text", "csv", "svg"}))
      ->capture_default_str();

  json config;
  auto echo = [&](const std::string& key, const auto& value) {
    config[key] = value;
  };

  // classify ----------------------------------------------------------
  auto* c_classify = app.add_subcommand("classify", "classify a plane field");
  FieldOpts classify_field;
  classify_field.attach(c_classify);

  // charfol -----------------------------------------------------------
  auto* c_charfol =
      app.add_subcommand("charfol", "characteristic foliation on a surface");
  FieldOpts charfol_field;
  charfol_field.attach(c_charfol);
  std::string surface_spec, surface_domain;
  int n_seeds = 8;
  c_charfol->add_option("--surface", surface_spec, "patch 'u,v -> (e1,e2,e3)'")
      ->required();
  c_charfol
      ->add_option("--surface-domain", surface_domain,
                   "parameter domain lo:hi[p],lo:hi[p]")
      ->required();
  c_charfol->add_option("--seeds", n_seeds, "number of streamline seeds")
      ->capture_default_str();

  // holonomy ----------------------------------------------------------
  auto* c_holonomy =
      app.add_subcommand("holonomy", "return map on a transverse annulus");
  FieldOpts holonomy_field;
  holonomy_field.attach(c_holonomy);
  std::string annulus_spec, annulus_domain;
  int direction = 1, h_seeds = 21, h_steps = 1000, h_loops = 1;
  c_holonomy->add_option("--annulus", annulus_spec, "'w,v -> (e1,e2,e3)'")
      ->required();
  c_holonomy
      ->add_option("--annulus-domain", annulus_domain, "'-eps:eps,lo:hip'")
      ->required();
  c_holonomy->add_option("--direction", direction, "+1 or -1")
      ->capture_default_str();
  c_holonomy->add_option("--seeds", h_seeds, "transversal seeds")
      ->capture_default_str();
  c_holonomy->add_option("--steps", h_steps, "integrator steps per loop")
      ->capture_default_str();
  c_holonomy->add_option("--loops", h_loops, "number of loops")
      ->capture_default_str();

  // perturb -----------------------------------------------------------
  auto* c_perturb = app.add_subcommand("perturb", "confoliation deformations");
  c_perturb->require_subcommand(1);

  auto* p_arc = c_perturb->add_subcommand(
      "tangent-arc", "deform along a tangent arc neighborhood");
  std::string arc_slope;
  double arc_t = 0.05, arc_delta = 0.2, arc_bound = 0.1, arc_m = 0.0075;
  p_arc->add_option("--slope", arc_slope, "slope a(x,y,z)")->required();
  p_arc->add_option("--t", arc_t, "initial deformation size")
      ->capture_default_str();
  p_arc->add_option("--delta", arc_delta, "contact band width below y=1")
      ->capture_default_str();
  p_arc->add_option("--bound", arc_bound, "sup bound for the profile")
      ->capture_default_str();
  p_arc->add_option("--m", arc_m, "band slope floor fed to the profile")
      ->capture_default_str();

  auto* p_hol = c_perturb->add_subcommand(
      "holonomy", "contactize a linear-holonomy neighborhood");
  std::string hol_slope;
  double hol_eps = 0.1;
  p_hol->add_option("--slope", hol_slope, "slope a(x,z), vanishing at z=0")
      ->required();
  p_hol->add_option("--eps", hol_eps, "perturbation size")
      ->capture_default_str();

  auto* p_shear = c_perturb->add_subcommand(
      "shear", "shear foliation with one-sided holonomy");
  double shear_depth = 1.0;
  p_shear->add_option("--depth", shear_depth, "shear profile depth")
      ->capture_default_str();

  auto* p_interp = c_perturb->add_subcommand(
      "interpolate", "monotone interpolation of slope fields");
  std::string interp_a0, interp_a1;
  p_interp->add_option("--a0", interp_a0, "upper slope a0(x,z)")->required();
  p_interp->add_option("--a1", interp_a1, "lower slope a1(x,z)")->required();

  auto* p_diffeo = c_perturb->add_subcommand(
      "diffeo", "monotone graph-shear diffeomorphism");
  std::string diffeo_v = "z";
  double diffeo_eps = 1.0;
  int diffeo_members = 5, diffeo_samples = 101;
  p_diffeo->add_option("--v", diffeo_v, "velocity profile v(z)")
      ->capture_default_str();
  p_diffeo->add_option("--eps", diffeo_eps, "bump support half width")
      ->capture_default_str();
  p_diffeo->add_option("--members", diffeo_members, "family size")
      ->capture_default_str();
  p_diffeo->add_option("--samples", diffeo_samples, "z samples")
      ->capture_default_str();

  // symplectic ----------------------------------------------------------
  auto* c_symp = app.add_subcommand("symplectic", "4-dimensional checks");
  c_symp->require_subcommand(1);

  auto* s_fill = c_symp->add_subcommand("fill", "product filling certificate");
  std::string fill_alpha, fill_v, fill_omega, fill_vars, fill_domain,
      fill_singular;
  double fill_eps = -1.0;
  s_fill->add_option("--chart", fill_vars, "3-chart variables")->required();
  s_fill->add_option("--domain", fill_domain, "3-chart domain")->required();
  s_fill->add_option("--singular", fill_singular, "singular loci");
  s_fill->add_option("--alpha", fill_alpha, "defining 1-form literal")
      ->required();
  s_fill->add_option("--v", fill_v, "vector field components e1,e2,e3")
      ->required();
  s_fill->add_option("--omega", fill_omega, "volume form literal")->required();
  s_fill->add_option("--eps", fill_eps, "eps (omit to scan downward from 1)");

  auto* s_dil = c_symp->add_subcommand("dilating", "check L_v omega = omega");
  std::string dil_omega, dil_v, dil_vars, dil_domain;
  s_dil->add_option("--chart", dil_vars, "4-chart variables")->required();
  s_dil->add_option("--domain", dil_domain, "4-chart domain")->required();
  s_dil->add_option("--omega", dil_omega, "2-form literal")->required();
  s_dil->add_option("--v", dil_v, "vector field components")->required();

  auto* s_bdry =
      c_symp->add_subcommand("boundary-form", "induced form on a slice");
  std::string bdry_omega, bdry_v, bdry_vars, bdry_domain, bdry_slice,
      bdry_slice_domain;
  s_bdry->add_option("--chart", bdry_vars, "4-chart variables")->required();
  s_bdry->add_option("--domain", bdry_domain, "4-chart domain")->required();
  s_bdry->add_option("--omega", bdry_omega, "2-form literal")->required();
  s_bdry->add_option("--v", bdry_v, "vector field components")->required();
  s_bdry->add_option("--slice", bdry_slice, "'a,b,c -> (e1,e2,e3,e4)'")
      ->required();
  s_bdry->add_option("--slice-domain", bdry_slice_domain, "slice domain")
      ->required();

  auto* s_dom = c_symp->add_subcommand("dominate", "omega restricted to ker");
  FieldOpts dom_field;
  dom_field.attach(s_dom);
  std::string dom_omega;
  s_dom->add_option("--omega", dom_omega, "2-form literal on the 3-chart")
      ->required();

  // mcg -----------------------------------------------------------------
  auto* c_mcg = app.add_subcommand("mcg", "twist words and the cap pipeline");
  c_mcg->require_subcommand(1);
  int genus = 1;
  std::string word_text;
  auto add_word_opts = [&](CLI::App* cmd, bool need_word) {
    cmd->add_option("--genus", genus, "page genus")->required();
    auto* o =
        cmd->add_option("--word", word_text, "twist word, e.g. 'c^2 * s1^-1'");
    if (need_word) o->required();
  };
  auto* m_rep = c_mcg->add_subcommand("rep", "homological representation");
  add_word_opts(m_rep, true);
  auto* m_reduce = c_mcg->add_subcommand("reduce", "word reduction");
  add_word_opts(m_reduce, true);
  auto* m_chain = c_mcg->add_subcommand("chain", "chain relation word");
  m_chain->add_option("--genus", genus, "page genus")->required();
  auto* m_stab = c_mcg->add_subcommand("stabilize", "positive stabilization");
  add_word_opts(m_stab, false);
  auto* m_surg = c_mcg->add_subcommand("surgery", "Legendrian surgery");
  add_word_opts(m_surg, false);
  std::string surgery_curve = "g1";
  m_surg->add_option("--curve", surgery_curve, "attaching curve name")
      ->capture_default_str();
  auto* m_cap = c_mcg->add_subcommand("cap", "run the cap pipeline");
  add_word_opts(m_cap, true);
  auto* m_hom = c_mcg->add_subcommand("homsphere", "|det(psi - I)|");
  add_word_opts(m_hom, true);

  // examples ------------------------------------------------------------
  auto* c_examples = app.add_subcommand("examples", "catalog listing");

  CLI11_PARSE(app, argc, argv);

  echo("grid", g.grid);
  echo("margin", g.margin);
  echo("tol", g.tol);
  echo("seed", g.seed);
  echo("format", g.format);

  const Margins margins = margins_of(g);

  if (*c_classify) {
    echo("example", classify_field.example);
    echo("form", classify_field.form);
    auto pf = classify_field.build();
    auto report = classify(pf, g.grid, margins);
    emit(g, "classify", config, classification_json(report));
    return 0;
  }

  if (*c_charfol) {
    echo("surface", surface_spec);
    echo("seeds", n_seeds);
    auto pf = charfol_field.build();
    auto map = map_from_spec(surface_spec, surface_domain, pf.chart());
    SurfacePatch patch(map);
    std::vector<std::array<double, 2>> seeds;
    for (int k = 0; k < n_seeds; ++k) {
      const double fu = (k + 1.0) / (n_seeds + 1.0);
      const auto& iu = map.source->interval(0);
      const auto& iv = map.source->interval(1);
      seeds.push_back(
          {iu.lo + fu * (iu.hi - iu.lo), iv.lo + 0.37 * (iv.hi - iv.lo)});
    }
    CharFoliationOptions opts;
    opts.singular_grid_n = g.grid > 3 ? g.grid : 41;
    auto fol = characteristic_foliation(pf, patch, seeds, opts);

    if (g.format == "csv" || g.format == "svg") {
      std::ostringstream body;
      if (g.format == "csv")
        write_streamline_csv(fol, map, body);
      else
        write_streamline_svg(fol, map.source, body);
      if (g.out.empty()) {
        std::cout << body.str();
      } else {
        std::ofstream file(g.out);
        file << body.str();
      }
      return 0;
    }
    json result;
    result["singular_nodes"] = fol.singular_nodes.size();
    result["clusters"] = json::array();
    for (const auto& cl : fol.clusters) {
      json c;
      c["size"] = cl.nodes.size();
      c["representative"] = {cl.representative.u, cl.representative.v};
      result["clusters"].push_back(c);
    }
    result["streamlines"] = json::array();
    for (const auto& line : fol.streamlines) {
      json l;
      l["samples"] = line.samples.size();
      switch (line.reason) {
        case Termination::Boundary:
          l["stop"] = "boundary";
          break;
        case Termination::Singularity:
          l["stop"] = "singularity";
          break;
        case Termination::Closed:
          l["stop"] = "closed";
          break;
        case Termination::StepLimit:
          l["stop"] = "step-limit";
          break;
      }
      result["streamlines"].push_back(l);
    }
    emit(g, "charfol", config, result);
    return 0;
  }

  if (*c_holonomy) {
    echo("annulus", annulus_spec);
    echo("direction", direction);
    auto pf = holonomy_field.build();
    TransverseAnnulus annulus(
        map_from_spec(annulus_spec, annulus_domain, pf.chart()));
    HolonomyOptions opts;
    opts.seeds = h_seeds;
    opts.steps_per_loop = h_steps;
    opts.loops = h_loops;
    auto rm = holonomy_return_map(pf, annulus, direction, opts);
    auto cls = classify_holonomy(rm);

    json result;
    result["samples"] = json::array();
    for (const auto& [x, y] : rm.samples) result["samples"].push_back({x, y});
    result["derivative_at_zero"] = rm.derivative_at_zero;
    result["classification"] = cls.label();
    result["linear"] = cls.linear;
    result["attracting"] = cls.attracting();
    result["repelling"] = cls.repelling();
    result["one_sided"] = cls.one_sided();
    result["fixed_points"] = json::array();
    for (const auto& fp : rm.fixed_points)
      result["fixed_points"].push_back(
          {{"x", fp.x}, {"derivative", fp.derivative}});
    emit(g, "holonomy", config, result);
    return 0;
  }

  if (*p_arc) {
    echo("slope", arc_slope);
    echo("t", arc_t);
    auto chart = make_chart("N", {"x", "y", "z"}, {{-1, 1}, {0, 1}, {-1, 1}});
    auto a = parse_expr(arc_slope, chart);
    CutoffSpec cut;
    cut.g = plateau_bump(0.9, 1.0);
    cut.delta = arc_delta;
    cut.f = build_f(arc_m, arc_delta, arc_bound);
    PerturbOptions opts;
    opts.grid_n = g.grid;
    opts.margins = margins;
    auto result = tangent_arc_contactize(a, arc_t, cut, opts);
    json r;
    r["t_used"] = result.parameter;
    r["before"] = classification_json(result.before);
    r["after_interior"] = classification_json(result.after);
    emit(g, "perturb tangent-arc", config, r);
    return 0;
  }

  if (*p_hol) {
    echo("slope", hol_slope);
    echo("eps", hol_eps);
    auto chart = make_chart("U", {"x", "y", "z"}, {{-1, 1}, {-1, 1}, {-1, 1}},
                            {true, false, false});
    auto a = parse_expr(hol_slope, chart);
    HolonomyContactizeOptions opts;
    opts.grid_n = g.grid;
    opts.margins = margins;
    auto result = holonomy_contactize(a, quadratic_decay(), hol_eps, opts);
    json r;
    r["eps"] = result.parameter;
    r["before"] = classification_json(result.before);
    r["after_tube"] = classification_json(result.after);
    r["form"] = result.field.form.str();
    emit(g, "perturb holonomy", config, r);
    return 0;
  }

  if (*p_shear) {
    echo("depth", shear_depth);
    auto pf = shear_foliation(symmetric_bump(1.0), shear_profile(shear_depth));
    auto report = classify(pf, g.grid, margins);
    json r;
    r["classification"] = classification_json(report);
    r["form"] = pf.form.str();
    emit(g, "perturb shear", config, r);
    return 0;
  }

  if (*p_interp) {
    echo("a0", interp_a0);
    echo("a1", interp_a1);
    auto chart = make_chart("U", {"x", "y", "z"}, {{-1, 1}, {-1, 1}, {-1, 1}});
    PerturbOptions opts;
    opts.grid_n = g.grid;
    opts.margins = margins;
    auto result = interpolate_plane_fields(parse_expr(interp_a0, chart),
                                           parse_expr(interp_a1, chart), opts);
    json r;
    r["before"] = classification_json(result.before);
    r["transition"] = classification_json(result.after);
    emit(g, "perturb interpolate", config, r);
    return 0;
  }

  if (*p_diffeo) {
    echo("v", diffeo_v);
    echo("eps", diffeo_eps);
    auto line = make_chart("line", {"z"}, {{-1, 1}});
    auto v = parse_expr(diffeo_v, line);
    SampledFamily fam;
    for (int i = 0; i < diffeo_samples; ++i)
      fam.zs.push_back(-1.0 + 2.0 * i / (diffeo_samples - 1));
    for (int k = 0; k < diffeo_members; ++k) {
      std::vector<double> vals;
      for (double zz : fam.zs) {
        const double p[1] = {zz};
        vals.push_back((1.0 + 0.1 * k) *
                       v.eval_unchecked(std::span<const double>(p, 1)));
      }
      fam.members.push_back(std::move(vals));
    }
    auto f = monotone_graph_diffeo(fam, diffeo_eps);
    json r;
    r["c"] = f.c;
    r["f"] = f.f_expr.str();
    r["samples"] = json::array();
    for (std::size_t i = 0; i < f.zs.size(); ++i)
      r["samples"].push_back({f.zs[i], f.fs[i]});
    emit(g, "perturb diffeo", config, r);
    return 0;
  }

  if (*s_fill) {
    echo("alpha", fill_alpha);
    echo("omega", fill_omega);
    echo("v", fill_v);
    auto chart = chart_from_specs(fill_vars, fill_domain, fill_singular);
    auto alpha = parse_form_literal(fill_alpha, chart);
    auto vol = parse_form_literal(fill_omega, chart);
    std::vector<ScalarExpr> comps;
    for (auto& piece : split(fill_v, ','))
      comps.push_back(parse_expr(trim(piece), chart));
    VectorFieldChart v(chart, comps);
    SymplecticOptions opts;
    opts.grid_n = g.grid;
    opts.margins = margins;
    auto cert = weak_filling_form(
        alpha, v, vol,
        fill_eps >= 0 ? std::optional<double>(fill_eps) : std::nullopt, opts);
    json r;
    r["eps"] = cert.eps;
    r["valid"] = cert.valid();
    r["d_omega_max"] = cert.d_omega_max;
    r["min_square_density"] = cert.min_square_density;
    r["boundary_min_bottom"] = cert.boundary_min_bottom;
    r["boundary_min_top"] = cert.boundary_min_top;
    r["omega"] = cert.omega.str();
    emit(g, "symplectic fill", config, r);
    return cert.valid() ? 0 : 1;
  }

  if (*s_dil) {
    echo("omega", dil_omega);
    echo("v", dil_v);
    auto chart = chart_from_specs(dil_vars, dil_domain, "");
    auto omega = parse_form_literal(dil_omega, chart);
    std::vector<ScalarExpr> comps;
    for (auto& piece : split(dil_v, ','))
      comps.push_back(parse_expr(trim(piece), chart));
    SymplecticOptions opts;
    opts.grid_n = g.grid;
    opts.margins = margins;
    auto report = check_dilating(VectorFieldChart(chart, comps), omega, opts);
    json r;
    r["dilating"] = report.dilating;
    r["residual"] = report.residual;
    emit(g, "symplectic dilating", config, r);
    return report.dilating ? 0 : 1;
  }

  if (*s_bdry) {
    echo("omega", bdry_omega);
    echo("slice", bdry_slice);
    auto chart = chart_from_specs(bdry_vars, bdry_domain, "");
    auto omega = parse_form_literal(bdry_omega, chart);
    std::vector<ScalarExpr> comps;
    for (auto& piece : split(bdry_v, ','))
      comps.push_back(parse_expr(trim(piece), chart));
    auto slice = map_from_spec(bdry_slice, bdry_slice_domain, chart);
    SymplecticOptions opts;
    opts.grid_n = g.grid;
    opts.margins = margins;
    auto report = induced_boundary_form(VectorFieldChart(chart, comps), omega,
                                        slice, opts, 100, g.seed);
    json r;
    r["alpha"] = report.alpha.str();
    r["classification"] = classification_json(report.classification);
    r["identity_residual"] = report.identity_residual;
    emit(g, "symplectic boundary-form", config, r);
    return 0;
  }

  if (*s_dom) {
    echo("omega", dom_omega);
    auto pf = dom_field.build();
    auto omega = parse_form_literal(dom_omega, pf.chart());
    SymplecticOptions opts;
    opts.grid_n = g.grid;
    opts.margins = margins;
    auto report = weak_domination_check(omega, pf, opts);
    json r;
    r["dominates"] = report.dominates;
    r["minimum"] = report.minimum;
    emit(g, "symplectic dominate", config, r);
    return report.dominates ? 0 : 1;
  }

  auto word_json = [&](const mcg::TwistWord& w) {
    json r;
    r["word"] = mcg::word_str(w);
    r["length"] = w.size();
    return r;
  };

  if (*m_rep) {
    auto w = mcg::parse_twist_word(word_text, genus);
    json r = word_json(w);
    auto m = mcg::hom_rep(w);
    r["matrix"] = m.str();
    r["symplectic"] = m.is_symplectic();
    r["identity"] = m.is_identity();
    emit(g, "mcg rep", config, r);
    return 0;
  }
  if (*m_reduce) {
    auto w = mcg::parse_twist_word(word_text, genus);
    auto reduced = mcg::word_reduce(w);
    json r;
    r["input"] = mcg::word_str(w);
    r["reduced"] = mcg::word_str(reduced);
    r["length"] = reduced.size();
    emit(g, "mcg reduce", config, r);
    return 0;
  }
  if (*m_chain) {
    auto w = mcg::chain_relation_word(genus);
    json r = word_json(w);
    r["hom_rep_identity"] = mcg::hom_rep(w).is_identity();
    emit(g, "mcg chain", config, r);
    return 0;
  }
  if (*m_stab) {
    mcg::OpenBook ob{genus, mcg::parse_twist_word(word_text, genus)};
    auto st = mcg::positive_stabilize(ob);
    json r;
    r["genus"] = st.genus;
    r["word"] = mcg::word_str(st.monodromy);
    emit(g, "mcg stabilize", config, r);
    return 0;
  }
  if (*m_surg) {
    mcg::OpenBook ob{genus, mcg::parse_twist_word(word_text, genus)};
    auto curve_word = mcg::parse_twist_word(surgery_curve, genus);
    if (curve_word.size() != 1)
      throw ParseError("surgery curve must be a single name", 0);
    auto [after, rec] =
        mcg::legendrian_surgery(ob, curve_word.letters[0].curve);
    json r;
    r["word"] = mcg::word_str(after.monodromy);
    r["framing"] = rec.framing;
    r["attaching_curve"] = rec.attaching_curve;
    emit(g, "mcg surgery", config, r);
    return 0;
  }
  if (*m_cap) {
    echo("genus", genus);
    echo("word", word_text);
    mcg::OpenBook ob{genus, mcg::parse_twist_word(word_text, genus)};
    auto result = mcg::cap_pipeline(ob);
    json r;
    r["stages"] = json::array();
    for (const auto& st : result.stages) {
      json s;
      s["stage"] = st.label;
      s["handles"] = st.handles_attached;
      s["word"] = mcg::word_str(st.word);
      s["abs_det_minus_identity"] = st.abs_det_minus_identity;
      r["stages"].push_back(s);
    }
    r["stage3_computed_count"] = result.stage3_computed_count;
    r["stage3_stated_count"] = result.stage3_stated_count;
    r["k_exponent"] = result.k_exponent;
    r["final_genus"] = result.final_genus;
    r["cap"] = {
        {"closed_surface_genus", result.handles.cap->closed_surface_genus},
        {"euler_number", result.handles.cap->euler_number},
        {"concave", result.handles.cap->concave}};
    r["framing_rule"] = "page framing - 1";
    r["handle_records"] = result.handles.records.size();
    emit(g, "mcg cap", config, r);
    return 0;
  }
  if (*m_hom) {
    mcg::OpenBook ob{genus, mcg::parse_twist_word(word_text, genus)};
    auto det = mcg::homology_sphere_check(ob);
    json r;
    r["abs_det_minus_identity"] = det;
    r["homology_sphere"] = det == 1;
    if (det == 0) r["note"] = "positive first Betti number";
    emit(g, "mcg homsphere", config, r);
    return 0;
  }

  if (*c_examples) {
    json r = json::array();
    for (const auto& name : example_names()) {
      auto pf = example(name, name == "t3"
                                  ? std::map<std::string, double>{{"t", 0.1}}
                                  : std::map<std::string, double>{});
      json e;
      e["name"] = name;
      e["chart"] = pf.chart()->name();
      json vars = json::array();
      for (const auto& v : pf.chart()->variables()) vars.push_back(v);
      e["variables"] = vars;
      e["form"] = pf.form.str();
      r.push_back(e);
    }
    emit(g, "examples", config, r);
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition violation: " << e.what() << "\n";
    return 3;
  } catch (const DomainError& e) {
    std::cerr << "domain violation: " << e.what() << "\n";
    return 3;
  } catch (const VerificationError& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
