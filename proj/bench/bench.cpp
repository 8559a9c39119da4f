// Benchmark of the OpenMP kernels against their serial reference
// implementations. The workloads mirror the heavy paths: bracket closure at
// n = 3, a randomized bound campaign, and per-slice gate synthesis.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qg3/campaign.hpp"

using namespace qg3;

namespace {

using Clock = std::chrono::steady_clock;

template <typename Fn>
double time_ms(Fn fn) {
  auto start = Clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void row(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-28s %10.1f ms %10.1f ms   %.2fx\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif
  std::printf("%-28s %13s %13s   speedup\n", "kernel", "serial", "parallel");

  {
    const double s = time_ms([] { (void)bracket_closure_serial(3); });
    const double p = time_ms([] { (void)bracket_closure(3); });
    row("bracket closure n=3", s, p);
  }
  {
    CampaignOptions serial_opts;
    serial_opts.parallel = false;
    const double s = time_ms([&] { (void)run_prop1_campaign(600, 7, serial_opts); });
    const double p = time_ms([] { (void)run_prop1_campaign(600, 7, {}); });
    row("power-inequality campaign", s, p);
  }
  {
    CampaignOptions serial_opts;
    serial_opts.parallel = false;
    const double s = time_ms([&] { (void)run_projection_campaign(30, 7, serial_opts); });
    const double p = time_ms([] { (void)run_projection_campaign(30, 7, {}); });
    row("projection campaign", s, p);
  }
  {
    PenaltyWeights w;
    w.p = 81.0;
    Rng rng(11);
    Schedule sch = random_schedule(2, 4, rng, w);
    for (auto& seg : sch.segments) seg.dt *= 2.0 / sch.total_duration();
    SynthesisOptions serial_opts;
    serial_opts.parallel = false;
    const double s = time_ms([&] { (void)synthesize(sch, w, 0.02, serial_opts); });
    const double p = time_ms([&] { (void)synthesize(sch, w, 0.02, {}); });
    row("synthesis, 100 slices", s, p);
  }
  return 0;
}
