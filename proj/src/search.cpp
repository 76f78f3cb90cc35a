#include "umb/search.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "umb/zoo.hpp"

namespace umb {

Embedding HypersurfaceFamily::member(std::span<const double> theta) const {
  if (static_cast<int>(theta.size()) != param_dim())
    throw DomainError("family member: parameter count mismatch");
  double norm = 0.0;
  for (double t : theta) norm += t * t;
  if (std::sqrt(norm) > trust_radius)
    throw DomainError("family member: parameters outside the trust radius");

  Embedding out = base;
  out.label = label + " member";
  out.map_order_overhead = base.map_order_overhead + 1;  // spends one order on N
  const Embedding b = base;
  const std::vector<ScalarFieldFn> basis = perturbation_basis;
  const std::vector<double> th(theta.begin(), theta.end());
  out.map = [b, basis, th](std::span<const Jet> ujets) {
    const MapWithNormal mw = map_with_normal(b, ujets);
    Jet f = Jet::constant_like(ujets[0], 0.0);
    for (std::size_t i = 0; i < basis.size(); ++i)
      if (th[i] != 0.0) f = f + basis[i](ujets) * th[i];
    JetVec x;
    x.reserve(mw.x.size());
    for (std::size_t al = 0; al < mw.x.size(); ++al)
      x.push_back(mw.x[al] + f * mw.normal[al]);
    return x;
  };
  return out;
}

ObjectiveParts objective(const HypersurfaceFamily& family, std::span<const double> theta,
                         const std::vector<Point>& samples, Exec exec) {
  const Embedding member = family.member(theta);
  const int n = member.intrinsic_dim;

  struct PointEval {
    double umb_sq = 0.0;
    double lambda = 0.0;
    bool ok = true;
  };
  std::vector<PointEval> evals(samples.size());
  for_each_index(samples.size(), exec, [&](std::size_t i) {
    PointEval pe;
    try {
      const HyperFrame fr = hyper_frame(member, samples[i], 2);
      // immersion guard: smallest singular value of the differential
      Eigen::MatrixXd dmap(n, n + 1);
      for (int a = 0; a < n; ++a)
        for (int al = 0; al <= n; ++al) dmap(a, al) = fr.tangents.at(a, al).value();
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(dmap);
      if (svd.singularValues()(n - 1) < kImmersionFloor) {
        pe.ok = false;
      } else {
        Eigen::MatrixXd t(n, n), ginv(n, n);
        for (int a = 0; a < n; ++a)
          for (int bderived = 0; bderived < n; ++bderived) {
            t(a, bderived) =
                fr.second_fundamental[static_cast<std::size_t>(a * n + bderived)].value() -
                fr.lambda.value() * fr.induced_g.at(a, bderived).value();
            ginv(a, bderived) = fr.induced_ginv.at(a, bderived).value();
          }
        const Eigen::MatrixXd mm = ginv * t;
        pe.umb_sq = std::max(0.0, (mm * mm).trace());
        pe.lambda = fr.lambda.value();
      }
    } catch (const DomainError&) {
      pe.ok = false;
    }
    evals[i] = pe;
  });

  ObjectiveParts out;
  std::size_t failures = 0;
  double sum_sq = 0.0, sum_l = 0.0, sum_l2 = 0.0;
  for (const PointEval& pe : evals) {
    if (!pe.ok) {
      ++failures;
      continue;
    }
    sum_sq += pe.umb_sq;
    sum_l += pe.lambda;
    sum_l2 += pe.lambda * pe.lambda;
  }
  if (failures > 0) {
    out.immersion_ok = false;
    out.value = kImmersionPenalty *
                (1.0 + static_cast<double>(failures) / static_cast<double>(samples.size()));
    return out;
  }
  const double count = static_cast<double>(samples.size());
  out.mean_sq_umbilicity = sum_sq / count;
  const double mean_l = sum_l / count;
  out.lambda_variance = std::max(0.0, sum_l2 / count - mean_l * mean_l);
  out.value = out.mean_sq_umbilicity + out.lambda_variance;
  return out;
}

SearchResult optimize(const HypersurfaceFamily& family, const OptimizerConfig& config,
                      Exec exec) {
  const int dim = family.param_dim();
  if (dim < 1 || dim > 32) throw DomainError("optimize: param_dim must be in 1..32");
  if (config.budget < 100) throw DomainError("optimize: budget must be at least 100");

  const std::vector<Point> samples =
      sample_points(family.base.domain, static_cast<std::size_t>(config.sample_count),
                    config.sample_seed);

  SearchResult result;
  int evals = 0;
  int immersion_failures = 0;
  const auto f = [&](const std::vector<double>& theta) {
    ++evals;
    const ObjectiveParts p = objective(family, theta, samples, exec);
    if (!p.immersion_ok) ++immersion_failures;
    return p.value;
  };

  // Deterministic start: a seeded direction of norm start_radius.
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> x0(static_cast<std::size_t>(dim));
  double norm = 0.0;
  for (auto& v : x0) {
    v = gauss(rng);
    norm += v * v;
  }
  norm = std::sqrt(norm);
  for (auto& v : x0) v *= config.start_radius / norm;

  struct Vertex {
    std::vector<double> x;
    double fx;
  };
  std::vector<Vertex> simplex;
  simplex.push_back({x0, f(x0)});
  for (int i = 0; i < dim; ++i) {
    std::vector<double> xi = x0;
    xi[static_cast<std::size_t>(i)] += config.simplex_step;
    simplex.push_back({xi, f(xi)});
  }

  const auto record = [&]() {
    std::sort(simplex.begin(), simplex.end(),
              [](const Vertex& a, const Vertex& b) { return a.fx < b.fx; });
    result.trace.push_back(simplex.front().fx);
  };
  record();

  // classical coefficients: reflect 1, expand 2, contract 0.5, shrink 0.5
  while (evals < config.budget && simplex.front().fx >= config.converge_threshold) {
    const Vertex& worst = simplex.back();
    std::vector<double> centroid(static_cast<std::size_t>(dim), 0.0);
    for (int v = 0; v < dim; ++v)
      for (int i = 0; i < dim; ++i)
        centroid[static_cast<std::size_t>(i)] += simplex[static_cast<std::size_t>(v)].x[static_cast<std::size_t>(i)] / dim;

    const auto combine = [&](double c) {
      std::vector<double> x(static_cast<std::size_t>(dim));
      for (int i = 0; i < dim; ++i)
        x[static_cast<std::size_t>(i)] = centroid[static_cast<std::size_t>(i)] +
                                         c * (centroid[static_cast<std::size_t>(i)] -
                                              worst.x[static_cast<std::size_t>(i)]);
      return x;
    };

    const std::vector<double> xr = combine(1.0);
    const double fr = f(xr);
    if (fr < simplex.front().fx) {
      const std::vector<double> xe = combine(2.0);
      const double fe = f(xe);
      simplex.back() = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
    } else if (fr < simplex[static_cast<std::size_t>(dim - 1)].fx) {
      simplex.back() = {xr, fr};
    } else {
      const bool outside = fr < worst.fx;
      std::vector<double> xc(static_cast<std::size_t>(dim));
      for (int i = 0; i < dim; ++i)
        xc[static_cast<std::size_t>(i)] =
            centroid[static_cast<std::size_t>(i)] +
            0.5 * ((outside ? xr[static_cast<std::size_t>(i)] : worst.x[static_cast<std::size_t>(i)]) -
                   centroid[static_cast<std::size_t>(i)]);
      const double fc = f(xc);
      if (fc < std::min(fr, worst.fx)) {
        simplex.back() = {xc, fc};
      } else {
        // shrink toward the best vertex
        for (std::size_t v = 1; v < simplex.size(); ++v) {
          for (int i = 0; i < dim; ++i)
            simplex[v].x[static_cast<std::size_t>(i)] =
                simplex[0].x[static_cast<std::size_t>(i)] +
                0.5 * (simplex[v].x[static_cast<std::size_t>(i)] -
                       simplex[0].x[static_cast<std::size_t>(i)]);
          simplex[v].fx = f(simplex[v].x);
        }
      }
    }
    record();
  }

  result.best_params = simplex.front().x;
  result.best_objective = simplex.front().fx;
  result.evaluations = evals;
  result.budget_exhausted = evals >= config.budget;
  if (result.best_objective < config.converge_threshold)
    result.verdict = "converged_to_umbilical";
  else if (immersion_failures > evals / 2)
    result.verdict = "immersion_failure";
  else
    result.verdict = "stalled_above_floor";
  return result;
}

namespace {

std::vector<ScalarFieldFn> bump_basis(const ChartDomain& domain, int count,
                                      std::uint64_t seed) {
  const std::vector<Point> centers = sample_points(domain, static_cast<std::size_t>(count), seed);
  std::vector<ScalarFieldFn> basis;
  const double width = 0.9;
  for (const Point& c : centers) {
    basis.push_back([c, width](std::span<const Jet> u) {
      Jet q = Jet::constant_like(u[0], 0.0);
      for (std::size_t i = 0; i < c.size(); ++i) {
        const Jet d = u[i] - c[i];
        q = q + d * d;
      }
      return exp(q * (-1.0 / (width * width)));
    });
  }
  return basis;
}

}  // namespace

HypersurfaceFamily make_family(const std::string& name, int param_dim) {
  HypersurfaceFamily fam;
  fam.label = name;
  if (name == "perturbed_s3_in_r4") {
    const MetricPtr flat = zoo::euclidean_metric(4);
    Embedding e = zoo::sphere_in_euclidean(3, 1.0, flat);
    if (second_fundamental_form(e, sample_points(e.domain, 1, 7)[0]).lambda_estimate < 0)
      e = zoo::flipped(e);
    fam.base = std::move(e);
  } else if (name == "perturbed_equator_s4") {
    const MetricPtr s4 = zoo::sphere_metric(4, 1.0);
    fam.base = zoo::geodesic_sphere_in_sphere(4, std::numbers::pi / 2, s4);
  } else if (name == "cp2_probe") {
    const auto cp2 = zoo::build("fubini_study_cp2");
    Embedding e;
    e.intrinsic_dim = 3;
    e.ambient = cp2->metric;
    e.label = "chart sphere |z| = 0.6 in " + cp2->name;
    e.domain = ChartDomain::cube(3, 1.4);
    e.map = [](std::span<const Jet> u) {
      // stereographic S^3 onto the chart sphere of radius 0.6
      Jet q = Jet::constant_like(u[0], 1.0);
      for (int i = 0; i < 3; ++i) q = q + u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
      JetVec x;
      for (int i = 0; i < 3; ++i) x.push_back(u[static_cast<std::size_t>(i)] * 1.2 / q);
      x.push_back((q - 2.0) * 0.6 / q);
      return x;
    };
    fam.base = std::move(e);
  } else {
    throw DomainError("unknown hypersurface family: " + name);
  }
  fam.perturbation_basis = bump_basis(fam.base.domain, param_dim, 3);
  fam.trust_radius = 0.5;
  return fam;
}

std::vector<std::string> family_names() {
  return {"perturbed_s3_in_r4", "perturbed_equator_s4", "cp2_probe"};
}

}  // namespace umb
