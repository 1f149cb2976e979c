// SPDX-FileCopyrightText: The minmom authors
// SPDX-License-Identifier: Apache-2.0

#include "minmom/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace minmom {

bool is_linear_family(ModelFamily family) {
  return family == ModelFamily::P || family == ModelFamily::HFP || family == ModelFamily::PMP;
}

namespace {

const char* family_prefix(ModelFamily family) {
  switch (family) {
    case ModelFamily::M: return "M";
    case ModelFamily::P: return "P";
    case ModelFamily::HFM: return "HFM";
    case ModelFamily::HFP: return "HFP";
    case ModelFamily::PMM: return "PMM";
    case ModelFamily::PMP: return "PMP";
  }
  return "?";
}

int sphere_level_for_vertices(int n) {
  for (int r = 0; r <= 8; ++r)
    if ((1 << (2 * (r + 1))) + 2 == n) return r;
  throw std::invalid_argument("no octant refinement has " + std::to_string(n) + " vertices");
}

int sphere_level_for_pm(int n) {
  for (int r = 0; r <= 8; ++r)
    if (2 * (1 << (2 * (r + 2))) == n) return r;
  throw std::invalid_argument("no octant refinement yields " + std::to_string(n) +
                              " partial moments");
}

}  // namespace

std::string model_name(const ModelSpec& spec) {
  return std::string(family_prefix(spec.family)) + "_" + std::to_string(spec.size);
}

ModelSpec parse_model_name(const std::string& name) {
  const auto underscore = name.find('_');
  if (underscore == std::string::npos)
    throw std::invalid_argument("model name must look like FAMILY_n: " + name);
  const std::string prefix = name.substr(0, underscore);
  const int size = std::stoi(name.substr(underscore + 1));
  for (ModelFamily family : {ModelFamily::M, ModelFamily::P, ModelFamily::HFM, ModelFamily::HFP,
                             ModelFamily::PMM, ModelFamily::PMP})
    if (prefix == family_prefix(family)) return {family, size};
  throw std::invalid_argument("unknown model family: " + prefix);
}

AngularBasis make_model_basis(const ModelSpec& spec, Geometry geometry) {
  const bool slab = geometry == Geometry::Slab;
  switch (spec.family) {
    case ModelFamily::M:
    case ModelFamily::P:
      if (spec.size < (slab ? 0 : 0)) throw std::invalid_argument("order must be >= 0");
      return slab ? AngularBasis::legendre(spec.size) : AngularBasis::spherical_harmonics(spec.size);
    case ModelFamily::HFM:
    case ModelFamily::HFP:
      if (slab) {
        if (spec.size < 2) throw std::invalid_argument("hat basis needs n >= 2");
        return AngularBasis::hat(Partition1D::equidistant(spec.size - 1));
      }
      return AngularBasis::hat(
          SphericalTriangulation::refined_octants(sphere_level_for_vertices(spec.size)));
    case ModelFamily::PMM:
    case ModelFamily::PMP:
      if (slab) {
        if (spec.size < 2 || spec.size % 2 != 0)
          throw std::invalid_argument("partial moments need an even dimension");
        return AngularBasis::partial_moments(Partition1D::equidistant(spec.size / 2));
      }
      return AngularBasis::partial_moments(
          SphericalTriangulation::refined_octants(sphere_level_for_pm(spec.size)));
  }
  throw std::logic_error("unknown model family");
}

std::vector<ModelSpec> default_models(ModelFamily family, Geometry geometry) {
  std::vector<ModelSpec> out;
  const bool slab = geometry == Geometry::Slab;
  switch (family) {
    case ModelFamily::M:
    case ModelFamily::P:
      for (int order = 1; order <= (slab ? 8 : 6); ++order) out.push_back({family, order});
      break;
    case ModelFamily::HFM:
    case ModelFamily::HFP:
      if (slab)
        for (int n : {5, 9, 17, 33, 65}) out.push_back({family, n});
      else
        for (int n : {6, 18, 66}) out.push_back({family, n});
      break;
    case ModelFamily::PMM:
    case ModelFamily::PMP:
      if (slab)
        for (int n : {4, 8, 16, 32, 64}) out.push_back({family, n});
      else
        for (int n : {32, 128, 512}) out.push_back({family, n});
      break;
  }
  return out;
}

std::vector<ModelSpec> parse_model_list(const std::string& list, Geometry geometry) {
  std::vector<ModelSpec> out;
  std::stringstream stream(list);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (item.empty()) continue;
    if (item.find('_') != std::string::npos) {
      out.push_back(parse_model_name(item));
      continue;
    }
    for (ModelFamily family : {ModelFamily::M, ModelFamily::P, ModelFamily::HFM, ModelFamily::HFP,
                               ModelFamily::PMM, ModelFamily::PMP}) {
      if (item == family_prefix(family)) {
        const auto ladder = default_models(family, geometry);
        out.insert(out.end(), ladder.begin(), ladder.end());
        goto next;
      }
    }
    throw std::invalid_argument("unknown model or family: " + item);
  next:;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reference rules and moments

Rule1D reference_rule_1d(const AngularBasis& basis, const TestDensity* density,
                         const QuadratureOptions& quad) {
  const std::vector<double> breakpoints =
      density ? density->breakpoints() : std::vector<double>{};
  if (is_piecewise(basis.family()))
    return fine_rule(basis.partition(), quad.min_subintervals, quad.points_1d, breakpoints);
  return fine_rule(Partition1D::equidistant(quad.min_subintervals), quad.min_subintervals,
                   quad.points_1d, breakpoints);
}

SphereRule reference_rule_sphere(const AngularBasis& basis, const QuadratureOptions& quad) {
  if (is_piecewise(basis.family())) {
    const int extra = std::max(0, quad.sphere_level - basis.mesh().level());
    return mesh_rule_subdivided(basis.mesh(), extra, quad.degree_sphere);
  }
  return mesh_rule(SphericalTriangulation::refined_octants(quad.sphere_level), quad.degree_sphere);
}

MomentVector reference_moments(const TestDensity& density, const AngularBasis& basis,
                               const QuadratureOptions& quad) {
  const int n = basis.dimension();
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd values(n);
  if (density.geometry() == Geometry::Slab) {
    if (!basis.slab()) throw std::invalid_argument("slab density against a spherical basis");
    const Rule1D rule = reference_rule_1d(basis, &density, quad);
    for (const auto& elem : rule.elements) {
      const double hint = 0.5 * (elem.lo + elem.hi);
      for (std::size_t i = 0; i < elem.nodes.size(); ++i) {
        basis.evaluate_in_element(elem.parent, elem.nodes[i], values);
        u += elem.weights[i] * density.eval(elem.nodes[i], hint) * values;
      }
    }
  } else {
    if (basis.slab()) throw std::invalid_argument("spherical density against a slab basis");
    const SphereRule rule = reference_rule_sphere(basis, quad);
    for (const auto& elem : rule.elements)
      for (std::size_t i = 0; i < elem.nodes.size(); ++i) {
        basis.evaluate_in_element(elem.parent, elem.nodes[i], values);
        u += elem.weights[i] * density(elem.nodes[i]) * values;
      }
  }
  return {u, basis};
}

// ---------------------------------------------------------------------------
// Single-model runs

namespace {

EntropyKind closure_entropy(ModelFamily family, EntropyKind nonlinear_entropy) {
  return is_linear_family(family) ? EntropyKind::Quadratic : nonlinear_entropy;
}

}  // namespace

ErrorNorms approximation_error(const std::function<double(double, double)>& psi_ref,
                               const AngularBasis& basis, const EntropyFamily& entropy,
                               const Eigen::VectorXd& alpha, const Rule1D& rule) {
  ErrorNorms norms;
  for (const auto& elem : rule.elements) {
    const double hint = 0.5 * (elem.lo + elem.hi);
    for (std::size_t i = 0; i < elem.nodes.size(); ++i) {
      const double diff = std::abs(
          evaluate_ansatz_in_element(basis, entropy, alpha, elem.parent, elem.nodes[i]) -
          psi_ref(elem.nodes[i], hint));
      norms.l1 += elem.weights[i] * diff;
      norms.linf = std::max(norms.linf, diff);
    }
    // Element midpoints augment the max-norm sampling set.
    const double diff_mid =
        std::abs(evaluate_ansatz_in_element(basis, entropy, alpha, elem.parent, hint) -
                 psi_ref(hint, hint));
    norms.linf = std::max(norms.linf, diff_mid);
  }
  return norms;
}

ErrorNorms approximation_error(const std::function<double(const Vec3&)>& psi_ref,
                               const AngularBasis& basis, const EntropyFamily& entropy,
                               const Eigen::VectorXd& alpha, const SphereRule& rule) {
  ErrorNorms norms;
  for (const auto& elem : rule.elements) {
    Vec3 weighted_mean = Vec3::Zero();
    for (std::size_t i = 0; i < elem.nodes.size(); ++i) {
      const double diff = std::abs(
          evaluate_ansatz_in_element(basis, entropy, alpha, elem.parent, elem.nodes[i]) -
          psi_ref(elem.nodes[i]));
      norms.l1 += elem.weights[i] * diff;
      norms.linf = std::max(norms.linf, diff);
      weighted_mean += elem.weights[i] * elem.nodes[i];
    }
    if (weighted_mean.norm() > 0.0) {
      const Vec3 midpoint = weighted_mean.normalized();
      const double diff_mid =
          std::abs(evaluate_ansatz_in_element(basis, entropy, alpha, elem.parent, midpoint) -
                   psi_ref(midpoint));
      norms.linf = std::max(norms.linf, diff_mid);
    }
  }
  return norms;
}

ModelRun run_model(const TestDensity& density, const ModelSpec& spec, EntropyKind entropy_kind,
                   const SolverConfig& solver_config, const QuadratureOptions& quad) {
  const Geometry geometry = density.geometry();
  const AngularBasis basis = make_model_basis(spec, geometry);
  const EntropyKind kind = closure_entropy(spec.family, entropy_kind);
  const EntropyFamily entropy{kind};

  MomentVector u = reference_moments(density, basis, quad);

  ExperimentRow row;
  row.model = model_name(spec);
  row.n = basis.dimension();
  row.entropy = entropy_name(kind);

  Eigen::VectorXd alpha;
  if (kind == EntropyKind::Quadratic) {
    const auto start = std::chrono::steady_clock::now();
    if (geometry == Geometry::Slab) {
      const Rule1D rule = reference_rule_1d(basis, &density, quad);
      alpha = linear_closure(basis, u.values, mass_matrix(basis, rule));
    } else {
      const SphereRule rule = reference_rule_sphere(basis, quad);
      alpha = linear_closure(basis, u.values, mass_matrix(basis, rule));
    }
    row.iterations = 0;
    row.time_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    row.status = SolveStatus::Converged;
  } else {
    ClosureResult result = [&] {
      if (geometry == Geometry::Slab) {
        const Rule1D rule = reference_rule_1d(basis, &density, quad);
        return ClosureSolver(basis, rule, entropy, solver_config).solve(u.values);
      }
      const SphereRule rule = reference_rule_sphere(basis, quad);
      return ClosureSolver(basis, rule, entropy, solver_config).solve(u.values);
    }();
    row.iterations = result.iterations;
    row.time_ns = result.wall_time_ns;
    row.status = result.status;
    alpha = std::move(result.multipliers);
  }

  if (row.status == SolveStatus::Converged) {
    if (geometry == Geometry::Slab) {
      const Rule1D rule = reference_rule_1d(basis, &density, quad);
      const ErrorNorms norms = approximation_error(
          [&density](double mu, double hint) { return density.eval(mu, hint); }, basis, entropy,
          alpha, rule);
      row.l1 = norms.l1;
      row.linf = norms.linf;
    } else {
      const SphereRule rule = reference_rule_sphere(basis, quad);
      const ErrorNorms norms = approximation_error(
          [&density](const Vec3& omega) { return density(omega); }, basis, entropy, alpha, rule);
      row.l1 = norms.l1;
      row.linf = norms.linf;
    }
  } else {
    row.l1 = std::nan("");
    row.linf = std::nan("");
  }

  return {std::move(row), std::move(alpha), std::move(u)};
}

// ---------------------------------------------------------------------------
// Studies and benchmarks

namespace {

template <class Fn>
void parallel_rows(int count, int threads, Fn&& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  for (auto& worker : pool) worker.join();
}

}  // namespace

std::vector<ExperimentRow> convergence_study(const StudyConfig& config) {
  // Rows are ordered by model family then dimension; execution order does
  // not affect the output.
  std::vector<ModelSpec> models = config.models;
  std::stable_sort(models.begin(), models.end(), [](const ModelSpec& a, const ModelSpec& b) {
    if (a.family != b.family) return static_cast<int>(a.family) < static_cast<int>(b.family);
    return a.size < b.size;
  });

  std::vector<ExperimentRow> rows(models.size());
  std::vector<std::string> errors(models.size());
  parallel_rows(static_cast<int>(models.size()), config.threads, [&](int i) {
    try {
      rows[static_cast<std::size_t>(i)] =
          run_model(config.density, models[static_cast<std::size_t>(i)], config.entropy,
                    config.solver, config.quad)
              .row;
    } catch (const std::exception& err) {
      ExperimentRow row;
      row.model = model_name(models[static_cast<std::size_t>(i)]);
      row.n = 0;
      row.entropy = entropy_name(closure_entropy(models[static_cast<std::size_t>(i)].family,
                                                 config.entropy));
      row.l1 = std::nan("");
      row.linf = std::nan("");
      row.status = SolveStatus::MaxIterations;
      rows[static_cast<std::size_t>(i)] = std::move(row);
      errors[static_cast<std::size_t>(i)] = err.what();
    }
  });

  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (models[i].family != models[i - 1].family) continue;
    const ExperimentRow& prev = rows[i - 1];
    ExperimentRow& cur = rows[i];
    if (prev.status == SolveStatus::Converged && cur.status == SolveStatus::Converged &&
        prev.l1 > 0.0 && cur.l1 > 0.0 && cur.n != prev.n)
      cur.order = -std::log(cur.l1 / prev.l1) / std::log(static_cast<double>(cur.n) / prev.n);
  }
  return rows;
}

std::vector<ExperimentRow> timing_benchmark(const BenchConfig& config) {
  std::vector<ExperimentRow> rows;
  for (const ModelSpec& spec : config.models) {
    const Geometry geometry = config.density.geometry();
    const AngularBasis basis = make_model_basis(spec, geometry);
    const EntropyKind kind = closure_entropy(spec.family, config.entropy);
    if (kind == EntropyKind::Quadratic)
      throw std::invalid_argument("timing benchmark covers the minimum-entropy families");

    const MomentVector u = reference_moments(config.density, basis, config.quad);

    // The solver (with its cached quadrature) is built once; repetitions
    // measure the optimization alone.
    std::optional<ClosureSolver> solver;
    if (geometry == Geometry::Slab) {
      const Rule1D rule = reference_rule_1d(basis, &config.density, config.quad);
      solver.emplace(basis, rule, EntropyFamily{kind}, config.solver);
    } else {
      const SphereRule rule = reference_rule_sphere(basis, config.quad);
      solver.emplace(basis, rule, EntropyFamily{kind}, config.solver);
    }

    ExperimentRow row;
    row.model = model_name(spec);
    row.n = basis.dimension();
    row.entropy = entropy_name(kind);
    row.l1 = std::nan("");
    row.linf = std::nan("");

    std::vector<std::int64_t> times;
    times.reserve(static_cast<std::size_t>(config.repetitions));
    for (int rep = 0; rep < config.warmup + config.repetitions; ++rep) {
      const ClosureResult result = solver->solve(u.values);
      row.status = result.status;
      row.iterations = result.iterations;
      if (rep >= config.warmup) times.push_back(result.wall_time_ns);
      if (!result.converged()) break;
    }
    if (!times.empty()) {
      std::sort(times.begin(), times.end());
      row.time_ns = times[times.size() / 2];
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  fields.push_back(current);
  return fields;
}

}  // namespace

void emit_csv(const std::vector<ExperimentRow>& rows, std::ostream& os) {
  os << "model,n,entropy,l1,linf,iterations,time_ns,order\n";
  for (const auto& row : rows) {
    os << csv_quote(row.model) << "," << row.n << "," << csv_quote(row.entropy) << ","
       << format_double(row.l1) << "," << format_double(row.linf) << "," << row.iterations << ","
       << row.time_ns << ",";
    if (row.order) os << format_double(*row.order);
    os << "\n";
  }
}

void emit_csv(const std::vector<ExperimentRow>& rows, const std::string& path) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot open for writing: " + path);
  emit_csv(rows, file);
  if (!file.good()) throw std::runtime_error("write failed: " + path);
}

std::vector<ExperimentRow> parse_csv(std::istream& is) {
  std::vector<ExperimentRow> rows;
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto fields = split_csv_line(line);
    if (fields.size() != 8) throw std::runtime_error("malformed CSV row: " + line);
    ExperimentRow row;
    row.model = fields[0];
    row.n = std::stoi(fields[1]);
    row.entropy = fields[2];
    row.l1 = std::stod(fields[3]);
    row.linf = std::stod(fields[4]);
    row.iterations = std::stoi(fields[5]);
    row.time_ns = std::stoll(fields[6]);
    if (!fields[7].empty()) row.order = std::stod(fields[7]);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::map<std::string, std::string> parse_config_file(std::istream& is) {
  std::map<std::string, std::string> config;
  std::string line;
  while (std::getline(is, line)) {
    const auto comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    const auto equals = line.find('=');
    if (equals == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto begin = s.find_first_not_of(" \t\r");
      const auto end = s.find_last_not_of(" \t\r");
      return begin == std::string::npos ? std::string{} : s.substr(begin, end - begin + 1);
    };
    const std::string key = trim(line.substr(0, equals));
    const std::string value = trim(line.substr(equals + 1));
    if (!key.empty()) config[key] = value;
  }
  return config;
}

double mean_order(const std::vector<ExperimentRow>& rows, bool use_linf) {
  double sum = 0.0;
  int count = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double e1 = use_linf ? rows[i - 1].linf : rows[i - 1].l1;
    const double e2 = use_linf ? rows[i].linf : rows[i].l1;
    if (!(e1 > 0.0) || !(e2 > 0.0) || rows[i].n == rows[i - 1].n) continue;
    sum += -std::log(e2 / e1) / std::log(static_cast<double>(rows[i].n) / rows[i - 1].n);
    ++count;
  }
  if (count == 0) throw std::runtime_error("no order could be computed");
  return sum / count;
}

}  // namespace minmom
