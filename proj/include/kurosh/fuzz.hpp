#ifndef KUROSH_FUZZ_HPP
#define KUROSH_FUZZ_HPP

// Seeded random instances shared by the fuzz subcommand and the acceptance
// suite. Instance i of a campaign with seed s depends only on (s, i).

#include "kurosh/dicks_tree.hpp"
#include "kurosh/pullback.hpp"

#include <atomic>
#include <functional>
#include <mutex>
#include <numeric>
#include <thread>

namespace kurosh {

struct InstanceSpec {
    Presentation presentation;
    std::vector<Word> gens_h;
    std::vector<Word> gens_k;
    OrderConfig order;
    std::uint64_t seed = 0;
    std::size_t index = 0;
};

inline std::mt19937_64 instance_rng(std::uint64_t seed, std::size_t index, std::uint64_t stream = 0)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(stream)};
    return std::mt19937_64(seq);
}

/// 1 to 3 factors, each Z or Z^2.
inline Presentation random_presentation(std::mt19937_64& rng, int max_factors = 3)
{
    Presentation p;
    const int n = std::uniform_int_distribution<int>(1, max_factors)(rng);
    for (int i = 0; i < n; ++i)
        p.factors.push_back(FactorType{std::uniform_int_distribution<int>(1, 2)(rng)});
    return p;
}

inline std::vector<Word> random_generators(const Presentation& p, std::mt19937_64& rng, int max_gens = 3,
                                           int max_syllables = 4, int max_exponent = 3)
{
    std::vector<Word> out;
    const int n = std::uniform_int_distribution<int>(1, max_gens)(rng);
    for (int i = 0; i < n; ++i)
        out.push_back(random_word(p, max_syllables, max_exponent, rng));
    return out;
}

inline OrderConfig random_order(int n, std::mt19937_64& rng)
{
    OrderConfig c = OrderConfig::identity(n);
    std::shuffle(c.orbit_order.begin(), c.orbit_order.end(), rng);
    std::shuffle(c.variable_order.begin(), c.variable_order.end(), rng);
    return c;
}

/// Pair of subgroups of a random presentation with factors from {Z, Z^2}.
inline InstanceSpec theorem_a_instance(std::uint64_t seed, std::size_t index)
{
    auto rng = instance_rng(seed, index, 1);
    InstanceSpec s;
    s.seed = seed;
    s.index = index;
    s.presentation = random_presentation(rng);
    s.gens_h = random_generators(s.presentation, rng);
    s.gens_k = random_generators(s.presentation, rng);
    s.order = OrderConfig::identity(s.presentation.size());
    return s;
}

/// Nontrivial subgroup of Z*Z or Z*Z*Z.
inline InstanceSpec theorem_main_instance(std::uint64_t seed, std::size_t index)
{
    auto rng = instance_rng(seed, index, 2);
    InstanceSpec s;
    s.seed = seed;
    s.index = index;
    s.presentation = Presentation::free_group(index % 2 ? 3 : 2);
    do
        s.gens_h = random_generators(s.presentation, rng);
    while (std::all_of(s.gens_h.begin(), s.gens_h.end(), [](const Word& w) { return w.empty(); }));
    s.order = random_order(s.presentation.size(), rng);
    return s;
}

/// Runs f(i) for i in [0, n) on a pool of worker threads; results land at
/// their index, so the merge order is deterministic.
template <class Result>
std::vector<Result> parallel_map(std::size_t n, const std::function<Result(std::size_t)>& f, unsigned workers = 0)
{
    std::vector<Result> out(n);
    if (workers == 0)
        workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_lock;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next++) < n;) {
                try {
                    out[i] = f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> g(error_lock);
                    if (!error)
                        error = std::current_exception();
                }
            }
        });
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
    return out;
}

} // namespace kurosh

#endif
