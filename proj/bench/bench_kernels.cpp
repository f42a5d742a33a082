// Serial reference vs OpenMP kernels. Prints wall times and checks that both
// sides agree.

#include "caemu/complexity.hpp"
#include "caemu/engine.hpp"
#include "caemu/harness.hpp"
#include "caemu/rulespace.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <random>

using namespace caemu;

namespace {

template <class F>
double time_it(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void row(const char* name, double serial, double parallel, bool same) {
    std::printf("%-28s %9.3f s %9.3f s %6.2fx %s\n", name, serial, parallel, serial / parallel,
                same ? "match" : "MISMATCH");
}

} // namespace

int main() {
    const int threads = omp_get_max_threads();
    std::printf("threads: %d\n%-28s %11s %11s %7s\n", threads, "kernel", "serial", "parallel", "speedup");
    int bad = 0;

    {
        RuleCatalog a, b;
        const double s = time_it([&] { a = build_catalog_serial(Family::gca); });
        const double p = time_it([&] { b = build_catalog(Family::gca); });
        const bool same = a.classes == b.classes && a.linear == b.linear;
        bad += !same;
        row("catalog gca", s, p, same);
    }
    {
        const auto rule = RuleSpec::eca(110);
        ComplexityProfile a, b;
        const double s = time_it([&] { a = classify_serial(rule, {}, {}); });
        const double p = time_it([&] { b = classify(rule, {}, {}); });
        bad += !(a == b);
        row("classify eca 110", s, p, a == b);
    }
    {
        const auto rules = essential_rules(Family::eca);
        std::vector<EmulationRecord> a, b;
        const double s = time_it([&] { a = search_grid(Family::eca, rules, 2, 5, 1); });
        const double p = time_it([&] { b = search_grid(Family::eca, rules, 2, 5, static_cast<std::size_t>(threads)); });
        bad += !(a == b);
        row("search eca k<=5", s, p, a == b);
    }
    {
        // packed word kernel against the per-cell reference
        std::mt19937_64 rng(7);
        std::vector<Cell> cells(4096);
        for (auto& c : cells) c = static_cast<Cell>(rng() & 1u);
        const Configuration init(cells, Boundary::cyclic);
        const auto rule = RuleSpec::eca(30);
        SpaceTime a, b;
        const double s = time_it([&] { a = evolve_reference(rule, init, 512); });
        const double p = time_it([&] { b = evolve(rule, init, 512); });
        bad += !(a == b);
        row("evolve 4096x512 (packed)", s, p, a == b);
    }
    return bad ? 1 : 0;
}
