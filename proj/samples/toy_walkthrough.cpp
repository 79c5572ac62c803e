// Exact indices of the five-state toy arm next to what QGI learns from
// 20,000 exploratory steps on five copies of it.

#include <cstdio>

#include "gittins/gittins.hpp"

int main()
{
    using namespace gittins;
    const double gamma = 0.9;
    const RetirementSolution exact = gittins_exact(*toy_arm(), gamma);

    TabularConfig cfg;
    cfg.algo = Algorithm::qgi;
    cfg.rates = qgi_toy_schedule();
    cfg.steps = 20000;
    cfg.seed = 0;
    cfg.record_log = false;
    const TabularRun run = train_tabular(BanditInstance::homogeneous(toy_arm(), 5, gamma), cfg);

    std::printf("state  exact   learned (last-200 mean)\n");
    for (std::size_t s = 0; s < exact.g_star.size(); ++s)
        std::printf("%5zu  %.4f  %.4f\n", s, exact.g_star[s], run.tail_mean[0][s]);
    std::printf("q_updates=%llu index_updates=%llu\n", static_cast<unsigned long long>(run.counters.q_updates),
                static_cast<unsigned long long>(run.counters.index_updates));
}
