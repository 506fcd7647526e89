#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace semiq {

using Int = mpz_class;
using Rat = mpq_class;

/// Malformed user input (files, ranges, preconditions surfaced to callers).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A feasibility guard tripped (enumeration, rank dimension, term count).
struct GuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An exact verification failed (certificates, cross-checks).
struct VerifyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Internal invariant violated; always a bug.
struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

/// Resource limits for potentially factorial-scale operations.
struct Guards {
    std::int64_t max_stream_rows = 100000;   // tableaux enumerated/streamed per job
    std::int64_t max_rank_dim = 4096;        // dimension of a rank target
    std::int64_t max_eval_terms = 2000000;   // decomposable terms in a matrix evaluation
    int max_mdisc_size = 10;                 // s! permutations in a mixed discriminant
    int max_rewrite_labels = 8;              // |T|! derivations in a rewrite certificate
};

inline Int factorial(long n) {
    Int r = 1;
    for (long i = 2; i <= n; ++i) r *= i;
    return r;
}

inline Int binomial(long n, long k) {
    if (k < 0 || k > n) return 0;
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

inline Rat rat_from_string(const std::string& s) {
    Rat q;
    if (q.set_str(s, 10) != 0) throw InputError("bad rational literal: " + s);
    if (q.get_den() == 0) throw InputError("zero denominator: " + s);
    q.canonicalize();
    return q;
}

inline std::string rat_to_string(const Rat& q) { return q.get_str(); }

/// Deterministic 64-bit generator (splitmix64); identical on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, bound), bound > 0.
    std::uint64_t below(std::uint64_t bound) { return next() % bound; }

    /// Uniform integer in [lo, hi], inclusive.
    long range(long lo, long hi) {
        return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

private:
    std::uint64_t state_;
};

inline std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h = 14695981039346656037ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

/// Run fn(i) for i in [0, count) on up to `threads` workers; fn must be
/// safe to call concurrently for distinct i.
inline void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::size_t per = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        std::size_t lo = t * per, hi = std::min(count, lo + per);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace semiq
