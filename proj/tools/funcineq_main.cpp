#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "funcineq/semigroup.hpp"
#include "funcineq/verify.hpp"

namespace {

using nlohmann::json;
using namespace funcineq;

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out) throw parameter_error("cannot open output file " + output_path);
  out << text;
}

json load_config(const std::string& path, const std::set<std::string>& allowed) {
  std::ifstream in(path);
  if (!in) throw parameter_error("config: cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw parameter_error(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw parameter_error("config: top level must be a JSON object");
  for (const auto& item : j.items())
    if (!allowed.count(item.key()))
      throw parameter_error("config: unknown key '" + item.key() + "'");
  return j;
}

template <typename T>
void apply_config(const json& j, const char* key, const CLI::Option* opt, T& var) {
  if (!j.contains(key) || opt->count() > 0) return;
  try {
    var = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw parameter_error(std::string("config: key '") + key + "' has the wrong type");
  }
}

// Density selection shared by `functionals` and `flow`.
struct DensitySpec {
  std::string gaussian;  // "m,s"
  std::string tilt;      // "b"
  std::string grid;      // path to a grid-density file
  std::string named;     // built-in name (flow only)
};

double parse_real(const std::string& text, const char* what) {
  char extra;
  double v;
  if (std::sscanf(text.c_str(), " %lf %c", &v, &extra) != 1 || !std::isfinite(v))
    throw parameter_error(std::string("expected a real number for ") + what + ", got '" +
                          text + "'");
  return v;
}

RelativeDensity1D even_tilt_density() {
  Grid1D g(-6.0, 6.0, 2401);
  std::vector<double> logf(g.count), dlogf(g.count);
  for (int i = 0; i < g.count; ++i) {
    double x = g.node(i);
    logf[i] = std::log(std::cosh(x)) - 0.5;
    dlogf[i] = std::tanh(x);
  }
  return RelativeDensity1D::from_log_grid(logf, dlogf, g, 1e-6);
}

RelativeDensity1D build_density(const DensitySpec& spec) {
  int given = !spec.gaussian.empty() + !spec.tilt.empty() + !spec.grid.empty() +
              !spec.named.empty();
  if (given != 1)
    throw parameter_error(
        "exactly one density source is required (--gaussian, --tilt, --grid, --density)");
  if (!spec.gaussian.empty()) {
    double m, s;
    char extra;
    if (std::sscanf(spec.gaussian.c_str(), " %lf , %lf %c", &m, &s, &extra) != 2)
      throw parameter_error("--gaussian wants 'mean,variance', got '" + spec.gaussian + "'");
    if (!(std::isfinite(m) && std::isfinite(s) && s > 0.0))
      throw parameter_error("--gaussian wants finite mean and positive variance");
    return RelativeDensity1D::gaussian_relative(m, s);
  }
  if (!spec.tilt.empty())
    return RelativeDensity1D::exponential_tilt(parse_real(spec.tilt, "--tilt"));
  if (!spec.grid.empty()) return load_grid_density(spec.grid);
  if (spec.named == "even_tilt") return even_tilt_density();
  throw parameter_error("unknown built-in density '" + spec.named + "' (have: even_tilt)");
}

// ---------------------------------------------------------------------------
// functionals
// ---------------------------------------------------------------------------

int cmd_functionals(const DensitySpec& spec, const std::string& output_path) {
  RelativeDensity1D nu = build_density(spec);
  RelativeDensity1D gamma = RelativeDensity1D::standard_gaussian();
  std::ostringstream os;
  os << "{\n";
  os << "  \"schema\": \"funcineq-functionals/1\",\n";
  os << "  \"entropy\": " << format_double(entropy(nu).value) << ",\n";
  os << "  \"fisher\": " << format_double(fisher(nu).value) << ",\n";
  os << "  \"lsi_deficit\": " << format_double(lsi_deficit(nu).value) << ",\n";
  os << "  \"tv\": " << format_double(total_variation(nu).value) << ",\n";
  os << "  \"w1\": " << format_double(w1_1d(nu, gamma).value) << ",\n";
  os << "  \"w2\": " << format_double(w2_1d(nu, gamma).value) << "\n";
  os << "}\n";
  emit(os.str(), output_path);
  return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

int cmd_verify(const std::string& suite, const std::string& format,
               const std::string& output_path, double c_tal) {
  if (format != "json" && format != "csv")
    throw parameter_error("--format wants json or csv, got '" + format + "'");
  if (!(std::isfinite(c_tal) && c_tal > 0.0))
    throw parameter_error("--c-tal wants a positive real");
  FamilySpec family;
  family.name = suite;
  family.c_tal = c_tal;
  std::vector<InequalityReport> reports = run_suite(family);
  emit(format == "json" ? reports_to_json(reports) : reports_to_csv(reports), output_path);
  std::cout << summary_line(reports) << "\n";
  return summarize(reports).fail == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// flow
// ---------------------------------------------------------------------------

void csv_row(std::ostringstream& os, const std::string& head, double a, double b, double c) {
  os << head << ',' << format_double(a) << ',' << format_double(b) << ','
     << format_double(c) << "\n";
}

// Ornstein-Uhlenbeck trace with sample times clustered near t = 0, where the
// Fisher information moves fastest.
std::string flow_ou(const RelativeDensity1D& nu, double t_max, int samples) {
  std::ostringstream os;
  os << "t,H,I,lambda_cert\n";
  for (int k = 0; k < samples; ++k) {
    double u = double(k) / (samples - 1);
    double t = t_max * u * u * u;
    if (k == 0) {
      csv_row(os, format_double(0.0), entropy(nu).value, fisher(nu).value,
              certify(nu).lambda_spectral);
      continue;
    }
    FlowState st = ou_evolve(nu, t);
    csv_row(os, format_double(t), st.trace.back().H, st.trace.back().I,
            certify(st.density).lambda_spectral);
  }
  InequalityReport db = de_bruijn_check(nu, t_max, 128);
  csv_row(os, "de_bruijn", db.lhs, db.rhs, db.margin);
  return os.str();
}

// Drift-diffusion trace for a non-Gaussian potential, driven incrementally on
// the density's grid; H and I are relative to the potential's Gibbs measure.
std::string flow_fp(const Potential1D& pot, const RelativeDensity1D& nu, double t_max,
                    int samples) {
  detail::FpWork w = detail::fp_prepare(pot, nu);
  if (std::abs(w.mass() - 1.0) > 1e-4)
    throw accuracy_error("flow: initial mass deviates from 1 beyond 1e-4");
  double dt = std::min(1e-3, w.g.spacing() * w.g.spacing());

  std::ostringstream os;
  os << "t,H,I,lambda_cert\n";
  double h0 = 0.0, h_last = 0.0, integral = 0.0, i_prev = w.fisher_rel();
  double now = 0.0;
  for (int k = 0; k < samples; ++k) {
    double target = t_max * double(k) / (samples - 1);
    while (now < target - 1e-15) {
      double step = std::min(dt, target - now);
      detail::fp_step(w, step);
      now += step;
      double i_now = w.fisher_rel();
      integral += 0.5 * (i_prev + i_now) * step;
      i_prev = i_now;
    }
    h_last = w.entropy_rel();
    if (k == 0) h0 = h_last;
    csv_row(os, format_double(target), h_last, w.fisher_rel(),
            certify(detail::fp_to_density(w)).lambda_spectral);
  }
  // Integrated dissipation identity, with the integral accumulated on the
  // fine stepping sequence rather than the sparse record rows.
  double drop = h0 - h_last;
  double rel = std::abs(drop - integral) / std::max(std::abs(drop), 1e-8);
  csv_row(os, "de_bruijn", drop, integral, -rel);
  return os.str();
}

int cmd_flow(const DensitySpec& spec, const std::string& potential, double t_max,
             int samples, const std::string& output_path) {
  if (!(std::isfinite(t_max) && t_max > 0.0 && t_max <= 50.0))
    throw parameter_error("--tmax wants a time in (0, 50]");
  if (samples < 2 || samples > 201) throw parameter_error("--samples wants 2..201");
  RelativeDensity1D nu = build_density(spec);
  std::string text;
  if (potential.empty() || potential == "gaussian") {
    text = flow_ou(nu, t_max, samples);
  } else if (potential == "quartic") {
    text = flow_fp(Potential1D::quartic(0.25), nu, t_max, samples);
  } else {
    throw parameter_error("unknown potential '" + potential + "' (have: gaussian, quartic)");
  }
  emit(text, output_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian functional-inequality toolkit"};
  app.require_subcommand(1);

  DensitySpec fn_spec;
  std::string fn_output, fn_config;
  CLI::App* fn = app.add_subcommand("functionals",
                                    "entropy, Fisher information, deficit and transport "
                                    "distances of one density against the Gaussian");
  CLI::Option* fn_gauss = fn->add_option("--gaussian", fn_spec.gaussian, "mean,variance");
  CLI::Option* fn_tilt = fn->add_option("--tilt", fn_spec.tilt, "tilt parameter b");
  CLI::Option* fn_grid = fn->add_option("--grid", fn_spec.grid, "grid-density file");
  CLI::Option* fn_out = fn->add_option("-o,--output", fn_output, "write the JSON here");
  fn->add_option("--config", fn_config, "JSON config file");

  std::string vf_suite = "all", vf_format = "json", vf_output, vf_config;
  double vf_ctal = 1.0 / 288.0;
  int vf_seed = 0;
  CLI::App* vf = app.add_subcommand("verify", "run an inequality suite and report");
  CLI::Option* vf_suite_opt = vf->add_option("--suite", vf_suite, "family name or 'all'");
  CLI::Option* vf_format_opt = vf->add_option("--format", vf_format, "json or csv");
  CLI::Option* vf_out = vf->add_option("-o,--output", vf_output, "write the report here");
  CLI::Option* vf_ctal_opt =
      vf->add_option("--c-tal", vf_ctal, "transport theorem constant (default 1/288)");
  CLI::Option* vf_seed_opt =
      vf->add_option("--seed", vf_seed, "seed for randomized sampling (reserved, default 0)");
  vf->add_option("--config", vf_config, "JSON config file");

  DensitySpec fl_spec;
  std::string fl_potential, fl_output, fl_config;
  double fl_tmax = 8.0;
  int fl_samples = 17;
  CLI::App* fl = app.add_subcommand("flow", "evolve a density and trace H, I, lambda");
  CLI::Option* fl_gauss = fl->add_option("--gaussian", fl_spec.gaussian, "mean,variance");
  CLI::Option* fl_tilt = fl->add_option("--tilt", fl_spec.tilt, "tilt parameter b");
  CLI::Option* fl_grid = fl->add_option("--grid", fl_spec.grid, "grid-density file");
  CLI::Option* fl_named = fl->add_option("--density", fl_spec.named, "built-in density name");
  CLI::Option* fl_pot =
      fl->add_option("--potential", fl_potential, "flow potential (gaussian or quartic)");
  CLI::Option* fl_tmax_opt = fl->add_option("--tmax", fl_tmax, "final time (default 8)");
  CLI::Option* fl_samples_opt =
      fl->add_option("--samples", fl_samples, "number of trace rows (default 17)");
  CLI::Option* fl_out = fl->add_option("-o,--output", fl_output, "write the CSV here");
  fl->add_option("--config", fl_config, "JSON config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*fn) {
      if (!fn_config.empty()) {
        json j = load_config(fn_config, {"gaussian", "tilt", "grid", "output", "seed"});
        apply_config(j, "gaussian", fn_gauss, fn_spec.gaussian);
        apply_config(j, "tilt", fn_tilt, fn_spec.tilt);
        apply_config(j, "grid", fn_grid, fn_spec.grid);
        apply_config(j, "output", fn_out, fn_output);
      }
      return cmd_functionals(fn_spec, fn_output);
    }
    if (*vf) {
      if (!vf_config.empty()) {
        json j = load_config(vf_config, {"suite", "format", "output", "c_tal", "seed"});
        apply_config(j, "suite", vf_suite_opt, vf_suite);
        apply_config(j, "format", vf_format_opt, vf_format);
        apply_config(j, "output", vf_out, vf_output);
        apply_config(j, "c_tal", vf_ctal_opt, vf_ctal);
        apply_config(j, "seed", vf_seed_opt, vf_seed);
      }
      return cmd_verify(vf_suite, vf_format, vf_output, vf_ctal);
    }
    if (*fl) {
      if (!fl_config.empty()) {
        json j = load_config(fl_config, {"gaussian", "tilt", "grid", "density", "potential",
                                         "tmax", "samples", "output", "seed"});
        apply_config(j, "gaussian", fl_gauss, fl_spec.gaussian);
        apply_config(j, "tilt", fl_tilt, fl_spec.tilt);
        apply_config(j, "grid", fl_grid, fl_spec.grid);
        apply_config(j, "density", fl_named, fl_spec.named);
        apply_config(j, "potential", fl_pot, fl_potential);
        apply_config(j, "tmax", fl_tmax_opt, fl_tmax);
        apply_config(j, "samples", fl_samples_opt, fl_samples);
        apply_config(j, "output", fl_out, fl_output);
      }
      return cmd_flow(fl_spec, fl_potential, fl_tmax, fl_samples, fl_output);
    }
  } catch (const parameter_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const numeric_error& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 2;
}
