#include "liesig/serialization.hpp"

#include <cstdio>
#include <sstream>

#include "liesig/errors.hpp"

namespace liesig {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json tensor_to_json(const TensorSeriesd& x) {
  Json levels = Json::array();
  for (int k = 0; k <= x.depth(); ++k) {
    const auto& l = x.level(k);
    levels.push_back(std::vector<double>(l.data(), l.data() + l.size()));
  }
  return Json{{"n", x.dim()}, {"N", x.depth()}, {"levels", std::move(levels)}};
}

TensorSeriesd tensor_from_json(const Json& j) {
  try {
    const int n = j.at("n").get<int>();
    const int depth = j.at("N").get<int>();
    const auto& levels = j.at("levels");
    if (!levels.is_array() || static_cast<int>(levels.size()) != depth + 1)
      throw ShapeError("tensor JSON: expected " + std::to_string(depth + 1) + " levels");
    TensorSeriesd x(n, depth);
    for (int k = 0; k <= depth; ++k) {
      const auto coeffs = levels[k].get<std::vector<double>>();
      if (static_cast<Eigen::Index>(coeffs.size()) != x.level(k).size())
        throw ShapeError("tensor JSON: level " + std::to_string(k) + " has " + std::to_string(coeffs.size()) +
                         " coefficients, expected " + std::to_string(x.level(k).size()));
      x.level(k) = Eigen::Map<const Eigen::VectorXd>(coeffs.data(), x.level(k).size());
    }
    if (!x.all_finite()) throw ShapeError("tensor JSON: non-finite coefficient");
    return x;
  } catch (const nlohmann::json::exception& e) {
    throw ShapeError(std::string("tensor JSON: ") + e.what());
  }
}

Json model_descriptor(const LieGroupModel& model) { return Json{{"kind", model.kind()}, {"dim", model.dim()}}; }

Json average_to_json(const AverageSignatureResult& r) {
  Json j = tensor_to_json(r.tensor);
  j["method"] = to_string(r.method);
  j["group"] = r.group;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["stderr"] = r.stderr_per_level;
  return j;
}

Json spectrum_to_json(const TraceSpectrum& s) {
  return Json{{"group", s.group},     {"method", s.method}, {"samples", s.samples},
              {"seed", s.seed},       {"K", s.half_depth()}, {"rtr", s.values},
              {"stderr", s.stderr_values}};
}

Json recovery_to_json(const RecoveryReport& r) {
  Json j;
  j["group"] = r.group;
  j["diameter"] = r.diameter.diameter;
  if (r.small_ball) {
    j["dimension"] = Json{{"raw", r.small_ball->dimension_raw}, {"rounded", r.small_ball->dimension}};
    j["volume"] = r.small_ball->volume;
    j["scalar_curvature"] = r.small_ball->scalar_curvature;
  } else {
    j["dimension"] = nullptr;
    j["volume"] = nullptr;
    j["scalar_curvature"] = nullptr;
  }
  Json table = Json::array();
  for (const auto& [radius, f] : r.f_table) table.push_back({radius, f});
  j["F_table"] = std::move(table);

  Json diag;
  diag["spectrum"] = spectrum_to_json(r.spectrum);
  diag["diameter_fit"] = Json{{"exponent_c", r.diameter.exponent_c},
                              {"intercept_b", r.diameter.intercept_b},
                              {"k_first", r.diameter.k_first},
                              {"residual_rms", r.diameter.residual_rms},
                              {"raw_sequence", r.diameter.raw_sequence},
                              {"raw_non_decreasing", r.diameter.raw_non_decreasing}};
  Json fraw = Json::array();
  for (const auto& e : r.f_table_raw)
    fraw.push_back(Json{{"raw_value", e.raw_value},
                        {"requested_degree", e.requested_degree},
                        {"effective_degree", e.effective_degree},
                        {"mollifier_width", e.mollifier_width},
                        {"noise_bound", e.noise_bound}});
  diag["F_moment_estimates"] = std::move(fraw);
  Json sb = Json::array();
  for (const auto& s : r.small_ball_samples)
    sb.push_back(Json{{"eps", s.radius}, {"F", s.value}, {"stderr", s.stderr_value}, {"samples", s.samples}});
  diag["small_ball_samples"] = std::move(sb);
  if (r.small_ball) {
    diag["slope_residuals"] = r.small_ball->slope_residuals;
    diag["fit_residuals"] = r.small_ball->fit_residuals;
  }
  if (!r.error.empty()) diag["error"] = Json{{"kind", r.error_kind}, {"message", r.error}};
  j["diagnostics"] = std::move(diag);
  return j;
}

Json path_to_json(const SampledPath& p) {
  p.validate();
  Json pts = Json::array();
  for (const auto& g : p.points) pts.push_back(std::vector<double>(g.coords.data(), g.coords.data() + g.coords.size()));
  return Json{{"group", model_descriptor(*p.model)}, {"times", p.times}, {"points", std::move(pts)}};
}

SampledPath path_from_json(const Json& j) {
  try {
    SampledPath p;
    p.model = parse_group(j.at("group").at("kind").get<std::string>());
    if (j.at("group").contains("dim") && j["group"]["dim"].get<int>() != p.model->dim())
      throw ShapeError("path JSON: descriptor dimension disagrees with its kind");
    p.times = j.at("times").get<std::vector<double>>();
    for (const auto& pt : j.at("points")) {
      const auto c = pt.get<std::vector<double>>();
      p.points.push_back({Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()))});
    }
    p.validate();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ShapeError(std::string("path JSON: ") + e.what());
  }
}

std::string average_to_csv(const AverageSignatureResult& r) {
  std::ostringstream out;
  out << "level,index,coefficient,stderr_level\n";
  for (int k = 0; k <= r.tensor.depth(); ++k) {
    const auto& l = r.tensor.level(k);
    const double se = r.stderr_per_level.empty() ? 0.0 : r.stderr_per_level[k];
    for (Eigen::Index i = 0; i < l.size(); ++i)
      out << k << ',' << i << ',' << format_double(l(i)) << ',' << format_double(se) << '\n';
  }
  return out.str();
}

std::string spectrum_to_csv(const TraceSpectrum& s) {
  std::ostringstream out;
  out << "k,degree,rtr,stderr\n";
  for (int k = 0; k <= s.half_depth(); ++k)
    out << k << ',' << 2 * k << ',' << format_double(s.values[k]) << ','
        << format_double(s.stderr_values.empty() ? 0.0 : s.stderr_values[k]) << '\n';
  return out.str();
}

std::string recovery_to_csv(const RecoveryReport& r) {
  std::ostringstream out;
  out << "section,key,value\n";
  out << "summary,diameter," << format_double(r.diameter.diameter) << '\n';
  if (r.small_ball) {
    out << "summary,dimension_raw," << format_double(r.small_ball->dimension_raw) << '\n';
    out << "summary,dimension," << r.small_ball->dimension << '\n';
    out << "summary,volume," << format_double(r.small_ball->volume) << '\n';
    out << "summary,scalar_curvature," << format_double(r.small_ball->scalar_curvature) << '\n';
  }
  for (const auto& [radius, f] : r.f_table) out << "F_table," << format_double(radius) << ',' << format_double(f) << '\n';
  for (std::size_t i = 0; i < r.diameter.raw_sequence.size(); ++i)
    out << "diameter_raw," << i + 1 << ',' << format_double(r.diameter.raw_sequence[i]) << '\n';
  return out.str();
}

}  // namespace liesig
