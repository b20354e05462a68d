#include <chrono>
#include <cstdio>
#include <functional>

#include "geodrev/geodesics.hpp"
#include "geodrev/parallel.hpp"
#include "geodrev/reversibility.hpp"

using namespace geodrev;

namespace {

double seconds(const std::function<void()>& fn, int reps) {
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / reps;
}

void report(const char* name, const std::function<void(Exec)>& kernel, int reps) {
  kernel(Exec::parallel);  // warm the derivative caches
  const double serial = seconds([&] { kernel(Exec::serial); }, reps);
  const double parallel = seconds([&] { kernel(Exec::parallel); }, reps);
  std::printf("%-22s serial %9.4f s   parallel %9.4f s   speedup %5.2fx\n", name, serial, parallel, serial / parallel);
}

}  // namespace

int main() {
  configure_threads_from_env();
  std::printf("threads: %d\n", max_threads());

  const std::vector<Var> xy{Var::x1, Var::x2};
  const IsothermalMetric metric(ScalarField::parse("0", xy), Rect{-1.5, 1.5, -1.5, 1.5});
  const LinearForm form(ScalarField::parse("0.2 + 0.1*x1", xy), ScalarField::parse("0", xy));
  const MetricBundle bundle(metric, form, PhiFunction::parse("1/(1-s)", 0.4));

  report("validate_finsler", [&](Exec e) { validate_finsler(bundle.phi(), 256, e); }, 3);
  report("classify", [&](Exec e) { classify(bundle, e); }, 3);
  report("reversibility_batch", [&](Exec e) { reversibility_batch(bundle, {0.0, 0.0}, 8, 1.0, 1e-3, e); }, 1);
  return 0;
}
