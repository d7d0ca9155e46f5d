#include <chrono>
#include <cstdio>

#include "cqed/engine.hpp"

using namespace cqed;

int main(int argc, char** argv) {
  const int fock = argc > 1 ? std::atoi(argv[1]) : 4;
  const int n = argc > 2 ? std::atoi(argv[2]) : 10;
  TrotterPlan plan;
  plan.n_steps = n;
  const EffectiveParams ep = derive_effective(ChromophoreParams{});
  ThreeSiteRates r;
  r.a.amp = r.b.amp = r.c.amp = 3.15e12;
  for (bool diss : {false, true}) {
    const auto prog = compile_three_site(ep, fock, plan, diss ? std::optional<ThreeSiteRates>(r) : std::nullopt);
    ExecutionPlan ex(prog);
    Vector v = vacuum_state(prog.layout).amplitudes;
    Rng rng = make_rng(1, 1);
    ex.prepare(v, rng);
    const auto t0 = std::chrono::steady_clock::now();
    for (int k = 0; k < n; ++k) ex.step(v, rng);
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("fock %d dim %zu diss %d ops/step %zu: %.3g ms/step\n", fock, prog.layout.total_dim(), diss,
                prog.step().size(), 1e3 * dt / n);
  }
}
