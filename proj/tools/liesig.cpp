// liesig: average signatures, trace spectra and geometry recovery for compact
// Lie groups.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "liesig/acceptance.hpp"
#include "liesig/average_signature.hpp"
#include "liesig/errors.hpp"
#include "liesig/geometry_recovery.hpp"
#include "liesig/parallel.hpp"
#include "liesig/recovery_pipeline.hpp"
#include "liesig/serialization.hpp"

namespace {

using namespace liesig;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct RunConfig {
  std::string group = "circle";
  int depth = 16;
  int half_depth = 8;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  int nodes = 64;
  std::string method = "auto";
  std::string output;
  std::string format = "json";
  int threads = 1;
  // recover only
  std::string spectrum_method = "exact";
  int degree = 0;
  std::vector<double> eps_grid = default_eps_grid();
};

const char* kCsvColumns =
    "CSV columns:\n"
    "  average   level,index,coefficient,stderr_level\n"
    "            index is the row-major position of the word in level `level`\n"
    "  spectrum  k,degree,rtr,stderr      (degree = 2k, rtr = (2k)! tr A_2k)\n"
    "  recover   section,key,value        sections: summary, F_table (key = R), diameter_raw (key = k)\n"
    "Lines starting with '#' carry the run configuration.";

Json config_json(const RunConfig& c, const std::string& command) {
  Json j;
  j["command"] = command;
  j["group"] = c.group;
  j["depth"] = c.depth;
  j["half_depth"] = c.half_depth;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["nodes"] = c.nodes;
  j["method"] = c.method;
  j["format"] = c.format;
  j["chunk_size"] = kDefaultChunkSize;
  if (command == "recover") {
    j["spectrum_method"] = c.spectrum_method;
    j["degree"] = c.degree;
    j["eps"] = c.eps_grid;
  }
  return j;
}

std::string csv_header(const RunConfig& c, const std::string& command) {
  std::ostringstream out;
  const Json cfg = config_json(c, command);
  for (const auto& [key, value] : cfg.items()) out << "# " << key << '=' << value.dump() << '\n';
  return out.str();
}

void write_output(const RunConfig& c, const std::string& text) {
  if (c.output.empty() || c.output == "-") {
    std::cout << text;
    return;
  }
  std::filesystem::path path(c.output);
  if (const char* dir = std::getenv("LIESIG_OUTPUT_DIR"); dir && *dir && path.is_relative())
    path = std::filesystem::path(dir) / path;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file " + path.string());
  f << text;
  if (!f) throw ConfigError("failed writing " + path.string());
}

MonteCarloOptions mc_options(const RunConfig& c) {
  MonteCarloOptions mc;
  mc.samples = c.samples;
  mc.seed = c.seed;
  mc.threads = c.threads;
  return mc;
}

void check_common(const RunConfig& c) {
  if (c.samples < 1) throw ConfigError("--samples must be >= 1");
  if (c.depth < 0) throw ConfigError("--depth must be >= 0");
  if (c.half_depth < 0) throw ConfigError("--half-depth must be >= 0");
  if (c.nodes < 1) throw ConfigError("--nodes must be >= 1");
  if (c.threads < 1) throw ConfigError("--threads must be >= 1");
}

bool all_circles(const LieGroupModel& m) {
  if (m.kind() == "circle") return true;
  const auto parts = m.factors();
  if (parts.size() < 2) return false;
  for (const auto& p : parts)
    if (!all_circles(*p)) return false;
  return true;
}

int cmd_average(const RunConfig& c) {
  check_common(c);
  auto model = parse_group(c.group);
  std::string method = c.method;
  if (method == "auto") {
    if (all_circles(*model))
      method = "closed_form";
    else if (model->factors().size() >= 2)
      method = "product_shuffle";
    else
      method = "quadrature";
  }
  const AverageSignatureResult res = [&] {
    switch (parse_average_method(method)) {
      case AverageMethod::closed_form:
        return average_closed_form(*model, c.depth);
      case AverageMethod::quadrature:
        return average_quadrature(*model, c.depth, c.nodes);
      case AverageMethod::monte_carlo:
        return average_monte_carlo(*model, c.depth, mc_options(c));
      case AverageMethod::product_shuffle:
        break;
    }
    return average_product_shuffle(*model, c.depth, c.nodes);
  }();
  if (c.format == "json") {
    Json j;
    j["config"] = config_json(c, "average");
    j["result"] = average_to_json(res);
    write_output(c, j.dump(2) + "\n");
  } else {
    write_output(c, csv_header(c, "average") + average_to_csv(res));
  }
  return 0;
}

int cmd_spectrum(const RunConfig& c) {
  check_common(c);
  auto model = parse_group(c.group);
  const int k = c.half_depth;
  TraceSpectrum spec;
  const std::string m = c.method;
  if (m == "auto" || m == "exact") {
    spec = exact_spectrum(*model, k, c.nodes);
  } else if (m == "closed_form") {
    spec = spectrum_closed_form(*model, k);
  } else if (m == "quadrature") {
    spec = spectrum_quadrature(*model, k, c.nodes);
  } else if (m == "monte_carlo") {
    spec = spectrum_monte_carlo(*model, k, mc_options(c));
  } else if (m == "tensor") {
    if (2 * k > c.depth) throw ConfigError("--half-depth K needs 2K <= --depth for the tensor route");
    spec = rtr_spectrum(all_circles(*model) ? average_closed_form(*model, 2 * k)
                        : model->factors().size() >= 2 ? average_product_shuffle(*model, 2 * k, c.nodes)
                                                       : average_quadrature(*model, 2 * k, c.nodes),
                        k);
  } else {
    throw ConfigError("unknown spectrum method '" + m +
                      "' (expected exact, closed_form, quadrature, monte_carlo or tensor)");
  }
  if (c.format == "json") {
    Json j;
    j["config"] = config_json(c, "spectrum");
    j["result"] = spectrum_to_json(spec);
    write_output(c, j.dump(2) + "\n");
  } else {
    write_output(c, csv_header(c, "spectrum") + spectrum_to_csv(spec));
  }
  return 0;
}

int cmd_recover(const RunConfig& c) {
  check_common(c);
  auto model = parse_group(c.group);
  RecoverOptions opts;
  opts.half_depth = c.half_depth;
  opts.nodes = c.nodes;
  opts.spectrum_method = c.spectrum_method;
  opts.degree = c.degree;
  opts.eps_grid = c.eps_grid;
  opts.mc = mc_options(c);
  const auto rep = recover_geometry(*model, opts);
  if (c.format == "json") {
    Json j;
    j["config"] = config_json(c, "recover");
    j["result"] = recovery_to_json(rep);
    write_output(c, j.dump(2) + "\n");
  } else {
    write_output(c, csv_header(c, "recover") + recovery_to_csv(rep));
  }
  if (!rep.error.empty()) {
    std::cerr << "liesig: " << rep.error_kind << ": " << rep.error << '\n';
    return kExitNumerical;
  }
  return 0;
}

int cmd_verify(int threads, const std::vector<int>& only) {
  AcceptanceOptions opts;
  opts.threads = threads;
  opts.only = only;
  opts.on_result = [](const CriterionResult& r) { std::cout << format_result_line(r) << std::endl; };
  const auto results = run_acceptance(opts);
  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  std::cout << results.size() - failed << " passed, " << failed << " failed\n";
  return failed == 0 ? 0 : 1;
}

void add_common(CLI::App* sub, RunConfig& c, bool sampling) {
  sub->add_option("--group", c.group, "circle | su2 | torus:k | product:a,b")->capture_default_str();
  sub->add_option("--seed", c.seed, "Monte Carlo seed")->capture_default_str();
  sub->add_option("--nodes", c.nodes, "Gauss-Legendre nodes")->capture_default_str();
  sub->add_option("--output,-o", c.output, "Output file (default stdout); relative paths resolve under $LIESIG_OUTPUT_DIR");
  sub->add_option("--format", c.format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  sub->add_option("--threads", c.threads, "Worker threads")->capture_default_str();
  if (sampling) sub->add_option("--samples", c.samples, "Monte Carlo samples")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Average path signatures and geometry recovery on compact Lie groups"};
  app.footer(kCsvColumns);
  app.require_subcommand(1);

  RunConfig c;
  c.threads = default_thread_count();

  auto* average = app.add_subcommand("average", "Average signature A(G) up to --depth");
  add_common(average, c, true);
  average->add_option("--depth", c.depth, "Truncation depth N")->capture_default_str();
  average->add_option("--method", c.method, "auto | closed_form | quadrature | monte_carlo | product_shuffle")
      ->capture_default_str();
  average->footer(kCsvColumns);

  auto* spectrum = app.add_subcommand("spectrum", "Trace spectrum r_2k = (2k)! tr A_2k for k <= --half-depth");
  add_common(spectrum, c, true);
  spectrum->add_option("--half-depth", c.half_depth, "K")->capture_default_str();
  spectrum->add_option("--depth", c.depth, "Tensor depth N for --method tensor (2K <= N)")->capture_default_str();
  spectrum->add_option("--method", c.method, "auto | exact | closed_form | quadrature | monte_carlo | tensor")
      ->capture_default_str();
  spectrum->footer(kCsvColumns);

  auto* recover = app.add_subcommand("recover", "Diameter, ball volumes, dimension, volume and scalar curvature");
  add_common(recover, c, true);
  recover->add_option("--half-depth", c.half_depth, "K for the spectrum")->capture_default_str();
  recover->add_option("--spectrum-method", c.spectrum_method, "exact | monte_carlo")->capture_default_str();
  recover->add_option("--degree", c.degree, "Polynomial degree for F(R); 0 means K")->capture_default_str();
  recover->add_option("--eps", c.eps_grid, "Small-ball radii, at least 4 in (0, 0.4]")->capture_default_str();
  recover->footer(kCsvColumns);

  int verify_threads = default_thread_count();
  std::vector<int> only;
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite and print a pass/fail table (exit 1 on failure)");
  verify->add_option("--threads", verify_threads, "Worker threads")->capture_default_str();
  verify->add_option("--only", only, "Criterion ids to run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*average) return cmd_average(c);
    if (*spectrum) return cmd_spectrum(c);
    if (*recover) return cmd_recover(c);
    if (*verify) return cmd_verify(verify_threads, only);
  } catch (const NumericalFailure& e) {
    std::cerr << "liesig: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "liesig: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::length_error& e) {
    std::cerr << "liesig: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "liesig: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
