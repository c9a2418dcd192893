// Times the serial and OpenMP paths of the sweep drivers and checks that
// they produce identical results.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>

#include "qdpc/observables.hpp"

namespace {

double seconds(const std::function<void()>& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool same(const qdpc::IVCurve& a, const qdpc::IVCurve& b) {
  if (a.points.size() != b.points.size()) return false;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    const auto& p = a.points[i];
    const auto& q = b.points[i];
    if (!same_bits(p.current, q.current) || !same_bits(p.power, q.power)) return false;
  }
  return true;
}

bool same(const qdpc::EnhancementGrid& a, const qdpc::EnhancementGrid& b) {
  if (a.cells.size() != b.cells.size()) return false;
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    if (!same_bits(a.cells[i].eta, b.cells[i].eta) || a.cells[i].failure != b.cells[i].failure) return false;
  }
  return true;
}

}  // namespace

int main() {
  using qdpc::Execution;
  const qdpc::DeviceParams params;
  const auto load = qdpc::log_grid(1e-4, 1e9, 240);
  const auto spacing = qdpc::linear_grid(1.0, 4.0, 8);
  const auto barrier = qdpc::linear_grid(0.2, 1.5, 8);

  std::printf("threads available: %d\n", omp_get_max_threads());
  bool ok = true;

  qdpc::IVCurve iv_serial, iv_parallel;
  const double t_iv_serial =
      seconds([&] { iv_serial = qdpc::iv_sweep(params, qdpc::ModelKind::kCoupled, load, Execution::kSerial); });
  const double t_iv_parallel =
      seconds([&] { iv_parallel = qdpc::iv_sweep(params, qdpc::ModelKind::kCoupled, load, Execution::kParallel); });
  const bool iv_same = same(iv_serial, iv_parallel);
  ok = ok && iv_same;
  const std::string iv_label = "iv_sweep (" + std::to_string(load.size()) + " points)";
  std::printf("%-26s serial %8.4f s  parallel %8.4f s  speedup %5.2f  identical %s\n", iv_label.c_str(),
              t_iv_serial, t_iv_parallel, t_iv_serial / t_iv_parallel, iv_same ? "yes" : "no");

  const auto default_load = qdpc::default_load_grid();
  qdpc::EnhancementGrid geo_serial, geo_parallel;
  const double t_geo_serial = seconds(
      [&] { geo_serial = qdpc::geometry_sweep(params, spacing, barrier, default_load, Execution::kSerial); });
  const double t_geo_parallel = seconds(
      [&] { geo_parallel = qdpc::geometry_sweep(params, spacing, barrier, default_load, Execution::kParallel); });
  const bool geo_same = same(geo_serial, geo_parallel);
  ok = ok && geo_same;
  const std::string geo_label =
      "geometry_sweep (" + std::to_string(spacing.size()) + "x" + std::to_string(barrier.size()) + ")";
  std::printf("%-26s serial %8.4f s  parallel %8.4f s  speedup %5.2f  identical %s\n", geo_label.c_str(),
              t_geo_serial, t_geo_parallel, t_geo_serial / t_geo_parallel,
              geo_same ? "yes" : "no");
  return ok ? 0 : 1;
}
