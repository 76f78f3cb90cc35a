// Compares the serial reference sweeps against the OpenMP kernels on three
// representative workloads. Both paths share the per-point evaluators and the
// fixed-order merge, so the outputs are bit-identical; only the wall time
// differs.

#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#else
#include <chrono>
#endif

#include "umb/embedding.hpp"
#include "umb/holonomy.hpp"
#include "umb/killing.hpp"
#include "umb/suites.hpp"
#include "umb/zoo.hpp"

using namespace umb;

namespace {

double now() {
#ifdef _OPENMP
  return omp_get_wtime();
#else
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
#endif
}

struct BenchResult {
  double serial = 0.0;
  double parallel = 0.0;
};

template <class Fn>
BenchResult bench(Fn&& fn) {
  BenchResult r;
  double t0 = now();
  fn(Exec::Serial);
  r.serial = now() - t0;
  t0 = now();
  fn(Exec::Parallel);
  r.parallel = now() - t0;
  return r;
}

void report(const char* label, const BenchResult& r) {
  std::printf("%-40s %9.3fs %9.3fs %7.2fx\n", label, r.serial, r.parallel,
              r.serial / r.parallel);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both columns run the serial path\n");
#endif
  std::printf("%-40s %10s %10s %8s\n", "kernel", "serial", "parallel", "speedup");

  {
    const auto s4 = zoo::build("round_sphere", {{"n", 4}, {"r", 1}});
    const Embedding& geo = s4->umbilical_embeddings[1];
    const std::vector<Point> pts = sample_points(geo.domain, 600, 1);
    const BenchResult r = bench([&](Exec exec) {
      return sweep_residual(pts, exec,
                            [&](const Point& u) { return umbilicity_residual(geo, u); });
    });
    report("umbilicity sweep (geodesic sphere, 600)", r);
  }
  {
    const auto spec = zoo::build("euclidean", {{"n", 5}});
    const Embedding& sphere = spec->umbilical_embeddings.front();
    const MetricPtr intrinsic = zoo::sphere_metric(4, 1.0);
    const std::vector<Point> pts = sample_points(sphere.domain, 150, 1);
    FormValue comps(static_cast<std::size_t>(binom(5, 2)), 0.0);
    comps[0] = 1.0;
    const FormField sigma = constant_form(5, 2, comps, spec->metric, "e0^e1");
    const KillingCandidate cand = candidate_from_parallel_form(sphere, sigma, pts, intrinsic);
    const BenchResult r = bench([&](Exec exec) {
      return special_killing_residuals(cand, pts, exec);
    });
    report("special killing identities (S^4, 150)", r);
  }
  {
    const auto cp2 = zoo::build("fubini_study_cp2");
    const Point base = cp2->samples(1, 1).front();
    const std::vector<LoopSpec> loops = standard_loop_family(*cp2->metric, base, 1);
    const BenchResult r = bench([&](Exec exec) {
      std::vector<double> drift(loops.size());
      for_each_index(loops.size(), exec, [&](std::size_t i) {
        const Eigen::MatrixXd h = parallel_transport_matrix(*cp2->metric, loops[i]);
        drift[i] = (h * h.transpose() - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff();
      });
      return drift;
    });
    report("loop transport batch (CP^2 family)", r);
  }
  return 0;
}
