// Command line front end: loads a space descriptor JSON and runs one of the
// library pipelines. Scalar results go to stdout as JSON, tables and figures
// to files named by flags. Exit codes: 0 success, 1 domain error (including
// failed validation), 2 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mcurv/complexes.hpp"
#include "mcurv/persistence.hpp"
#include "mcurv/profile.hpp"
#include "mcurv/rho.hpp"
#include "mcurv/rng.hpp"

using nlohmann::ordered_json;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string field;
  while (std::getline(ss, field, sep)) out.push_back(field);
  return out;
}

mcurv::WitnessMode resolve_mode(const mcurv::Space& s, const std::string& str) {
  if (str == "auto")
    return s.supports(mcurv::WitnessMode::Ambient) ? mcurv::WitnessMode::Ambient
                                                   : mcurv::WitnessMode::IntrinsicSample;
  auto m = mcurv::parse_witness_mode(str);
  if (!m) mcurv::fail("UnsupportedMode", "unknown witness mode: " + str);
  return *m;
}

std::vector<int> all_points(const mcurv::Space& s) {
  std::vector<int> out(static_cast<std::size_t>(s.point_count()));
  for (int i = 0; i < s.point_count(); ++i) out[static_cast<std::size_t>(i)] = i;
  return out;
}

std::vector<mcurv::LambdaBin> parse_bins(const std::string& str) {
  if (str.empty()) return mcurv::default_lambda_bins();
  std::vector<mcurv::LambdaBin> bins;
  for (const auto& part : split(str, ',')) {
    const auto pieces = split(part, ':');
    if (pieces.size() != 2)
      mcurv::fail("ParseError", "bin format is center:half_width, got " + part);
    bins.push_back({std::stod(pieces[0]), std::stod(pieces[1])});
  }
  return bins;
}

mcurv::Schedule parse_schedule(const mcurv::Space& s, const std::string& kind,
                               const std::string& weights_str) {
  if (kind == "uniform") {
    if (!weights_str.empty())
      mcurv::fail("ParseError", "--weights only applies to --schedule weighted");
    return mcurv::Schedule::uniform();
  }
  if (kind != "weighted") mcurv::fail("ParseError", "schedule must be uniform or weighted");
  if (weights_str.empty())
    mcurv::fail("ParseError", "--schedule weighted requires --weights");
  std::vector<double> w;
  for (const auto& part : split(weights_str, ',')) w.push_back(std::stod(part));
  if (static_cast<int>(w.size()) != s.point_count())
    mcurv::fail("DomainMismatch", "--weights must list one weight per point");
  return mcurv::Schedule::weighted(mcurv::RadiusFunction::over(all_points(s), std::move(w)));
}

const char* violation_kind_name(mcurv::MetricViolation::Kind k) {
  using Kind = mcurv::MetricViolation::Kind;
  switch (k) {
    case Kind::Asymmetric: return "asymmetric";
    case Kind::NonzeroDiagonal: return "nonzero-diagonal";
    case Kind::Negative: return "negative";
    case Kind::Triangle: return "triangle";
  }
  return "unknown";
}

ordered_json simplex_json(const mcurv::Simplex& sx) { return ordered_json(sx.vertices); }

void print_json(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

struct Args {
  std::string input;
  std::string output;
  std::string mode = "auto";
  std::string triple;
  std::string bins;
  std::string schedule = "uniform";
  std::string weights;
  std::string flavor = "cech";
  std::string start = "half-max";
  std::string svg;
  std::string dump_filtration;
  std::string from_filtration;
  double tol = 1e-9;
  double mu = 2.0;
  double t_max = -1.0;
  std::uint64_t seed = 0;
  int n_triples = 2000;
  int dim_cap = 2;
  int max_dim = -1;
  int arity = 4;
  int tuples = 200;
};

int run_validate(const Args& a) {
  std::ifstream in(a.input);
  if (!in) mcurv::fail("IoError", "cannot open " + a.input);
  nlohmann::json desc = nlohmann::json::parse(in);
  std::vector<std::vector<double>> matrix;
  if (desc.value("type", "") == "finite") {
    matrix = desc.at("matrix").get<std::vector<std::vector<double>>>();
  } else {
    const mcurv::Space s = mcurv::Space::from_json(desc);
    matrix = mcurv::pairwise_distances(s, all_points(s));
  }
  const mcurv::ValidationReport rep = mcurv::validate_metric(matrix, a.tol);
  ordered_json out;
  out["ok"] = rep.ok;
  out["violations"] = ordered_json::array();
  for (const auto& v : rep.violations) {
    ordered_json vj;
    vj["kind"] = violation_kind_name(v.kind);
    vj["i"] = v.i;
    vj["j"] = v.j;
    if (v.k >= 0) vj["k"] = v.k;
    vj["amount"] = v.amount;
    vj["text"] = v.describe();
    out["violations"].push_back(vj);
  }
  print_json(out);
  return rep.ok ? 0 : 1;
}

int run_rho(const Args& a) {
  const mcurv::Space s = mcurv::Space::from_file(a.input);
  const auto parts = split(a.triple, ',');
  if (parts.size() != 3) mcurv::fail("ParseError", "--triple wants i,j,k");
  const mcurv::RhoResult r =
      mcurv::rho_triple(s, std::stoi(parts[0]), std::stoi(parts[1]), std::stoi(parts[2]),
                        resolve_mode(s, a.mode));
  print_json(r.to_json(s));
  return 0;
}

int run_profile(const Args& a) {
  const mcurv::Space s = mcurv::Space::from_file(a.input);
  const std::vector<mcurv::LambdaBin> bins = parse_bins(a.bins);
  const std::vector<int> sample = all_points(s);
  const mcurv::ProfileResult res = mcurv::curvature_profile(
      s, sample, bins, a.n_triples, resolve_mode(s, a.mode), a.seed);
  if (!a.output.empty()) mcurv::emit_profile_csv(res.records, a.output);
  if (!a.svg.empty()) {
    mcurv::ProfileSvgOptions opt;
    opt.bins = bins;
    mcurv::emit_profile_svg(res.records, a.svg, opt);
  }
  ordered_json out;
  out["records"] = res.records.size();
  out["flat"] = res.flat.size();
  out["degenerate_skipped"] = res.degenerate_skipped;
  ordered_json bj = ordered_json::array();
  for (const auto& b : bins) bj.push_back({{"center", b.center}, {"half_width", b.half_width}});
  out["bins"] = bj;
  if (!a.output.empty()) out["csv"] = a.output;
  if (!a.svg.empty()) out["svg"] = a.svg;
  print_json(out);
  return 0;
}

int run_persist(const Args& a) {
  mcurv::FilteredComplex f;
  if (!a.from_filtration.empty()) {
    f = mcurv::read_filtration_csv(a.from_filtration);
  } else {
    if (a.input.empty())
      mcurv::fail("ParseError", "persist needs --input or --from-filtration");
    const mcurv::Space s = mcurv::Space::from_file(a.input);
    const std::vector<int> base = all_points(s);
    const mcurv::Schedule schedule = parse_schedule(s, a.schedule, a.weights);
    std::optional<double> tmax;
    if (a.t_max >= 0.0) tmax = a.t_max;
    if (a.flavor == "cech") {
      f = mcurv::cech_filtration(s, base, schedule, resolve_mode(s, a.mode), a.dim_cap, tmax);
    } else if (a.flavor == "vr") {
      f = mcurv::vr_filtration(base, mcurv::pairwise_distances(s, base), schedule, a.dim_cap,
                               tmax);
    } else {
      mcurv::fail("ParseError", "flavor must be cech or vr");
    }
  }
  if (!a.dump_filtration.empty()) mcurv::write_filtration_csv(f, a.dump_filtration);
  const int max_dim = a.max_dim >= 0 ? a.max_dim : f.dim_cap - 1;
  const mcurv::Barcode barcode = mcurv::compute_persistence(f, max_dim);
  mcurv::write_barcode_csv(barcode, a.output);
  int essential = 0, zero_length = 0;
  for (const auto& p : barcode.pairs) {
    if (!p.destroyer) ++essential;
    if (p.zero_length) ++zero_length;
  }
  ordered_json out;
  out["flavor"] = f.flavor == mcurv::ComplexFlavor::Cech ? "cech" : "vr";
  out["schedule"] = f.schedule.kind == mcurv::Schedule::Kind::Uniform ? "uniform" : "weighted";
  out["dim_cap"] = f.dim_cap;
  out["max_dim"] = max_dim;
  out["t_max"] = f.t_max;
  out["simplices"] = f.simplices.size();
  out["pairs"] = barcode.pairs.size();
  out["essential"] = essential;
  out["zero_length"] = zero_length;
  out["output"] = a.output;
  print_json(out);
  return 0;
}

int run_expansion(const Args& a) {
  const mcurv::Space s = mcurv::Space::from_file(a.input);
  const std::vector<int> sample = all_points(s);
  const mcurv::ExpansionEstimate est = mcurv::expansion_constant_estimate(
      s, sample, a.arity, a.tuples, a.seed, resolve_mode(s, a.mode));
  ordered_json out;
  out["mu_hat"] = est.mu_hat;
  out["arity_max"] = est.arity_max;
  out["argmax_tuple"] = est.argmax_tuple;
  print_json(out);
  return 0;
}

int run_extremal(const Args& a) {
  const mcurv::Space s = mcurv::Space::from_file(a.input);
  const std::vector<int> domain = all_points(s);
  std::vector<double> start(domain.size(), 0.0);
  if (a.start == "half-max") {
    std::vector<double> scratch;
    for (std::size_t i = 0; i < domain.size(); ++i) {
      auto row = s.distance_row(static_cast<int>(i), scratch);
      double dmax = 0.0;
      for (double d : row) dmax = std::max(dmax, d);
      start[i] = dmax / 2.0;
    }
  } else if (a.start.rfind("constant:", 0) == 0) {
    const double c = std::stod(a.start.substr(9));
    if (!(c >= 0.0)) mcurv::fail("ParseError", "constant start must be nonnegative");
    std::fill(start.begin(), start.end(), c);
  } else {
    mcurv::fail("ParseError", "--start wants half-max or constant:C");
  }
  std::vector<int> order;
  if (a.seed != 0) order = mcurv::Rng(a.seed).permutation(static_cast<int>(domain.size()));
  const mcurv::MinorantResult res = mcurv::extremal_minorant(
      s, mcurv::RadiusFunction::over(domain, std::move(start)), order, a.tol);
  ordered_json out;
  out["converged"] = res.converged;
  out["sweeps"] = res.sweeps;
  out["extremal"] = mcurv::is_extremal(s, res.r, a.tol);
  out["radii"] = res.r.values;
  print_json(out);
  return 0;
}

int run_inclusions(const Args& a) {
  const mcurv::Space s = mcurv::Space::from_file(a.input);
  const std::vector<int> base = all_points(s);
  const mcurv::Schedule schedule = parse_schedule(s, a.schedule, a.weights);
  std::optional<double> tmax;
  if (a.t_max >= 0.0) tmax = a.t_max;
  const mcurv::FilteredComplex cech =
      mcurv::cech_filtration(s, base, schedule, resolve_mode(s, a.mode), a.dim_cap, tmax);
  const mcurv::FilteredComplex vr =
      mcurv::vr_filtration(base, mcurv::pairwise_distances(s, base), schedule, a.dim_cap, tmax);
  const mcurv::InclusionReport rep = mcurv::check_inclusions(cech, vr, a.mu, a.tol);
  ordered_json out;
  out["ok"] = rep.ok;
  out["mu"] = rep.mu;
  out["compared"] = rep.compared;
  out["violations"] = ordered_json::array();
  for (const auto& v : rep.violations) {
    ordered_json vj;
    vj["simplex"] = simplex_json(v.simplex);
    vj["birth_vr"] = v.birth_vr;
    vj["birth_cech"] = v.birth_cech;
    out["violations"].push_back(vj);
  }
  print_json(out);
  return rep.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  Args a;
  CLI::App app{"curvature-via-hyperconvexity toolkit: rho functionals, extremal radius "
               "functions, ball-complex filtrations and persistence"};
  app.require_subcommand(1);

  auto add_input = [&](CLI::App* sub, bool required = true) {
    auto* opt = sub->add_option("--input", a.input, "space descriptor JSON file");
    if (required) opt->required();
  };
  auto add_mode = [&](CLI::App* sub) {
    sub->add_option("--mode", a.mode,
                    "witness mode: ambient, intrinsic-sample or auto (default auto = "
                    "ambient when the space supports it, else intrinsic-sample)");
  };

  CLI::App* validate = app.add_subcommand(
      "validate", "check the metric axioms; exit 1 and list violations when they fail");
  add_input(validate);
  validate->add_option("--tol", a.tol, "axiom slack (default 1e-9)");

  CLI::App* rho = app.add_subcommand("rho", "minimax circumradius ratio of one triple");
  add_input(rho);
  add_mode(rho);
  rho->add_option("--triple", a.triple, "comma separated point indices i,j,k")->required();

  CLI::App* profile = app.add_subcommand(
      "profile", "per-triple (r, lambda, rho) records over the whole sample");
  add_input(profile);
  add_mode(profile);
  profile->add_option("--bins", a.bins,
                      "lambda bins as center:half_width, comma separated "
                      "(default 1.25:0.02,1.5:0.02,1.75:0.02,2:0.02)");
  profile->add_option("--n-triples", a.n_triples,
                      "triple budget; exhaustive when C(n,3) fits (default 2000)");
  profile->add_option("--seed", a.seed, "sampling seed (default 0)");
  profile->add_option("--output", a.output, "profile CSV path");
  profile->add_option("--svg", a.svg, "scatter SVG path");

  CLI::App* persist = app.add_subcommand(
      "persist", "build a filtration, reduce it and write the barcode CSV");
  add_input(persist, false);
  add_mode(persist);
  persist->add_option("--flavor", a.flavor, "cech or vr (default cech)");
  persist->add_option("--schedule", a.schedule, "uniform or weighted (default uniform)");
  persist->add_option("--weights", a.weights,
                      "comma separated per-point weights (weighted schedule)");
  persist->add_option("--dim-cap", a.dim_cap, "top simplex dimension, at most 5 (default 2)")
      ->check(CLI::Range(1, 5));
  persist->add_option("--max-dim", a.max_dim,
                      "top homology dimension (default dim-cap - 1)");
  persist->add_option("--t-max", a.t_max, "scale cutoff (default: smallest complete scale)");
  persist->add_option("--dump-filtration", a.dump_filtration, "also write the filtration CSV");
  persist->add_option("--from-filtration", a.from_filtration,
                      "reduce a filtration CSV instead of building one");
  persist->add_option("--output", a.output, "barcode CSV path")->required();

  CLI::App* expansion = app.add_subcommand(
      "expansion", "sampled lower bound of the expansion constant");
  add_input(expansion);
  add_mode(expansion);
  expansion->add_option("--arity", a.arity, "largest tuple size (default 4)");
  expansion->add_option("--tuples", a.tuples, "number of sampled tuples (default 200)");
  expansion->add_option("--seed", a.seed, "sampling seed (default 0)");

  CLI::App* extremal = app.add_subcommand(
      "extremal", "extremal minorant of a starting radius function");
  add_input(extremal);
  extremal->add_option("--start", a.start,
                       "half-max or constant:C starting function (default half-max)");
  extremal->add_option("--seed", a.seed,
                       "nonzero: sweep in a seeded random order (default 0 = index order)");
  extremal->add_option("--tol", a.tol, "convergence tolerance (default 1e-10)")
      ->default_val(1e-10);

  CLI::App* inclusions = app.add_subcommand(
      "inclusions", "check birth_vr <= birth_cech <= mu * birth_vr + tol per simplex; "
                    "exit 1 on violations");
  add_input(inclusions);
  add_mode(inclusions);
  inclusions->add_option("--mu", a.mu, "expansion factor bound (default 2)");
  inclusions->add_option("--tol", a.tol, "comparison slack (default 1e-9)");
  inclusions->add_option("--schedule", a.schedule, "uniform or weighted (default uniform)");
  inclusions->add_option("--weights", a.weights,
                         "comma separated per-point weights (weighted schedule)");
  inclusions->add_option("--dim-cap", a.dim_cap, "top simplex dimension (default 2)")
      ->check(CLI::Range(1, 5));
  inclusions->add_option("--t-max", a.t_max, "scale cutoff (default: smallest complete scale)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(validate)) return run_validate(a);
    if (app.got_subcommand(rho)) return run_rho(a);
    if (app.got_subcommand(profile)) return run_profile(a);
    if (app.got_subcommand(persist)) return run_persist(a);
    if (app.got_subcommand(expansion)) return run_expansion(a);
    if (app.got_subcommand(extremal)) return run_extremal(a);
    if (app.got_subcommand(inclusions)) return run_inclusions(a);
  } catch (const mcurv::DomainError& e) {
    std::cerr << e.what() << "\n";  // already prefixed with the error code
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "ParseError: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "Error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
