// Compares the serial and OpenMP-parallel trial loops (shuffle importance and
// repeated holdout) on a synthetic corpus and checks that they agree exactly.

#include <chrono>
#include <cmath>
#include <cstdio>

#include "citree/dataset.hpp"
#include "citree/eval.hpp"
#include "citree/importance.hpp"

using namespace citree;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

int main() {
    SynthConfig cfg = parse_rule("ref>30=high;ref<=10=low;else=median");
    cfg.n = 400;
    cfg.seed = 42;
    cfg.noise = 0.25;
    const Dataset d = generate_synthetic(cfg);
    const Tree t = grow_tree(d, GrowthControl{});

    const long k = 500;
    auto start = std::chrono::steady_clock::now();
    const auto serial = shuffle_importance(t, d, k, 7, ShuffleOptions{false, false});
    const double t_serial = seconds_since(start);

    start = std::chrono::steady_clock::now();
    const auto parallel = shuffle_importance(t, d, k, 7, ShuffleOptions{true, false});
    const double t_parallel = seconds_since(start);

    bool same = true;
    for (int p = 0; p < kNumPredictors; ++p) {
        const auto i = static_cast<std::size_t>(p);
        same = same && serial.shuffle_rows[i].gamma == parallel.shuffle_rows[i].gamma;
    }
    std::printf("shuffle importance (K=%ld, N=%ld): serial %.3fs, parallel %.3fs, speedup %.2fx, %s\n",
                k, cfg.n, t_serial, t_parallel, t_serial / t_parallel,
                same ? "identical" : "MISMATCH");

    start = std::chrono::steady_clock::now();
    const auto h_serial = repeated_holdout(d, 1, 200, GrowthControl{}, 7, HoldoutOptions{false});
    const double ht_serial = seconds_since(start);

    start = std::chrono::steady_clock::now();
    const auto h_parallel = repeated_holdout(d, 1, 200, GrowthControl{}, 7, HoldoutOptions{true});
    const double ht_parallel = seconds_since(start);

    const bool h_same = h_serial.per_trial_errors == h_parallel.per_trial_errors;
    std::printf("repeated holdout (200 trials): serial %.3fs, parallel %.3fs, speedup %.2fx, %s\n",
                ht_serial, ht_parallel, ht_serial / ht_parallel,
                h_same ? "identical" : "MISMATCH");

    return same && h_same ? 0 : 1;
}
