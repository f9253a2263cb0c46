#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "hybridq/analytic.hpp"
#include "hybridq/model.hpp"
#include "hybridq/rng.hpp"
#include "hybridq/stats.hpp"

namespace hybridq {

struct RunConfig {
    std::int64_t num_requests = 200000;   // generated per replication
    std::int64_t warmup_requests = 20000; // discarded from the head of each replication
    int replications = 20;
    std::uint64_t master_seed = 1;
    // Worker threads for replications; 0 = hardware concurrency. Results are
    // aggregated in replication order and do not depend on this value.
    int threads = 0;
};

inline void validate_run_config(const RunConfig& c) {
    if (c.num_requests < 1 || c.warmup_requests < 0 || c.warmup_requests >= c.num_requests)
        throw std::invalid_argument("requires 0 <= warmup_requests < num_requests");
    if (c.replications < 1) throw std::invalid_argument("requires replications >= 1");
}

// One replication's requests, fully determined by (master_seed, replication).
struct Workload {
    std::vector<double> arrival;       // s, strictly increasing
    std::vector<double> size;          // Mb, > 0
    std::vector<std::uint32_t> vlc;    // target VLC queue, [0, n)

    std::size_t count() const { return arrival.size(); }
};

// Poisson arrivals at rate lambda, exponential sizes with mean mu, uniform
// random VLC assignment (keeps each VLC arrival stream Poisson).
inline Workload generate_workload(const SystemParams& p, const RunConfig& c, int replication) {
    validate_run_config(c);
    auto eng = make_stream(c.master_seed, static_cast<std::uint64_t>(replication),
                           Stream::Workload);
    Workload w;
    const auto count = static_cast<std::size_t>(c.num_requests);
    w.arrival.resize(count);
    w.size.resize(count);
    w.vlc.resize(count);
    double t = 0.0;
    const auto n = static_cast<std::uint32_t>(p.n);
    for (std::size_t i = 0; i < count; ++i) {
        t += exponential(eng, 1.0 / p.lambda);
        w.arrival[i] = t;
        w.size[i] = exponential(eng, p.mu);
        w.vlc[i] = uniform_index(eng, n);
    }
    return w;
}

// Single-server FIFO queue via the Lindley recursion:
//   W_1 = 0,  W_{i+1} = max(0, W_i + S_i - (A_{i+1} - A_i))
// submit() returns the sojourn W_i + S_i. Exact for this discipline, O(1)
// per job.
class FifoQueue {
public:
    double submit(double arrival, double service) {
        if (has_prev_)
            wait_ = std::max(0.0, wait_ + prev_service_ - (arrival - prev_arrival_));
        else
            wait_ = 0.0;
        has_prev_ = true;
        prev_arrival_ = arrival;
        prev_service_ = service;
        return wait_ + service;
    }

private:
    double prev_arrival_ = 0.0;
    double prev_service_ = 0.0;
    double wait_ = 0.0;
    bool has_prev_ = false;
};

// Full per-job sojourn sequence for one FIFO queue.
inline std::vector<double> lindley_fifo_delays(std::span<const double> arrivals,
                                               std::span<const double> services) {
    if (arrivals.size() != services.size())
        throw std::invalid_argument("arrivals and services must have equal length");
    std::vector<double> delays(arrivals.size());
    FifoQueue q;
    for (std::size_t i = 0; i < arrivals.size(); ++i)
        delays[i] = q.submit(arrivals[i], services[i]);
    return delays;
}

namespace detail {

template <class Fn>
void run_replications(int replications, int threads, Fn&& fn) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, replications);
    if (threads == 1) {
        for (int r = 0; r < replications; ++r) fn(r);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            for (int r = t; r < replications; r += threads) fn(r);
        });
    for (auto& th : pool) th.join();
}

// Post-warmup accumulation of one non-aggregated replication.
inline RunningStats run_nonagg_replication(const SystemParams& p, double alpha,
                                           const RunConfig& c, int replication,
                                           const Workload& w) {
    auto coins = make_stream(c.master_seed, static_cast<std::uint64_t>(replication),
                             Stream::Routing);
    FifoQueue wifi;
    std::vector<FifoQueue> vlc(static_cast<std::size_t>(p.n));
    RunningStats acc;
    const auto warmup = static_cast<std::size_t>(c.warmup_requests);
    for (std::size_t i = 0; i < w.count(); ++i) {
        double delay;
        if (uniform01(coins) < alpha)
            delay = wifi.submit(w.arrival[i], w.size[i] / p.b1);
        else
            delay = vlc[w.vlc[i]].submit(w.arrival[i], w.size[i] / p.b2);
        if (i >= warmup) acc.add(delay);
    }
    return acc;
}

// Post-warmup accumulation of one aggregated replication: every request puts
// an alpha piece in the WiFi queue and the remainder in its VLC queue; its
// system delay is the max of the two piece sojourns.
inline RunningStats run_agg_replication(const SystemParams& p, double alpha, const RunConfig& c,
                                        const Workload& w) {
    FifoQueue wifi;
    std::vector<FifoQueue> vlc(static_cast<std::size_t>(p.n));
    RunningStats acc;
    const auto warmup = static_cast<std::size_t>(c.warmup_requests);
    for (std::size_t i = 0; i < w.count(); ++i) {
        const double dw = wifi.submit(w.arrival[i], alpha * w.size[i] / p.b1);
        const double dv = vlc[w.vlc[i]].submit(w.arrival[i], (1.0 - alpha) * w.size[i] / p.b2);
        if (i >= warmup) acc.add(std::max(dw, dv));
    }
    return acc;
}

}  // namespace detail

// Simulated non-aggregated system: each request is routed whole to WiFi with
// probability alpha, otherwise to its VLC queue. Deterministic for fixed
// (params, alpha, config) regardless of thread count.
inline DelayStats simulate_nonaggregated(const SystemParams& p, double alpha,
                                         const RunConfig& c) {
    check_stable_split(p, alpha);
    validate_run_config(c);
    std::vector<RunningStats> reps(static_cast<std::size_t>(c.replications));
    detail::run_replications(c.replications, c.threads, [&](int r) {
        const Workload w = generate_workload(p, c, r);
        reps[static_cast<std::size_t>(r)] = detail::run_nonagg_replication(p, alpha, c, r, w);
    });
    return finalize_replications(reps);
}

// Aggregated system on caller-supplied workloads (one per replication).
// Evaluating several alphas on the same workloads gives common random
// numbers across the comparisons.
inline DelayStats simulate_aggregated_on(const SystemParams& p, double alpha, const RunConfig& c,
                                         std::span<const Workload> workloads) {
    check_stable_split(p, alpha);
    validate_run_config(c);
    if (workloads.size() != static_cast<std::size_t>(c.replications))
        throw std::invalid_argument("need one workload per replication");
    std::vector<RunningStats> reps(static_cast<std::size_t>(c.replications));
    detail::run_replications(c.replications, c.threads, [&](int r) {
        reps[static_cast<std::size_t>(r)] =
            detail::run_agg_replication(p, alpha, c, workloads[static_cast<std::size_t>(r)]);
    });
    return finalize_replications(reps);
}

inline DelayStats simulate_aggregated(const SystemParams& p, double alpha, const RunConfig& c) {
    check_stable_split(p, alpha);
    validate_run_config(c);
    std::vector<RunningStats> reps(static_cast<std::size_t>(c.replications));
    detail::run_replications(c.replications, c.threads, [&](int r) {
        const Workload w = generate_workload(p, c, r);
        reps[static_cast<std::size_t>(r)] = detail::run_agg_replication(p, alpha, c, w);
    });
    return finalize_replications(reps);
}

struct SimOptimum {
    double alpha;
    DelayStats stats;
};

// Minimizes the simulated aggregated mean delay over the feasible interval
// with common random numbers: an 11-point scan localizes the basin (guarding
// against multimodality beyond scan resolution), then golden-section search
// narrows it to search_tolerance. Returns the best evaluated point.
inline SimOptimum optimize_alpha_simulated(const SystemParams& p, const RunConfig& c,
                                           double search_tolerance) {
    validate_run_config(c);
    if (!(search_tolerance > 0.0)) throw std::invalid_argument("search_tolerance must be > 0");
    const FeasibleInterval fi = feasible_alpha_interval(p);

    std::vector<Workload> workloads(static_cast<std::size_t>(c.replications));
    detail::run_replications(c.replications, c.threads, [&](int r) {
        workloads[static_cast<std::size_t>(r)] = generate_workload(p, c, r);
    });

    SimOptimum best{0.0, {}};
    best.stats.mean = std::numeric_limits<double>::infinity();
    auto evaluate = [&](double a) {
        DelayStats s = simulate_aggregated_on(p, a, c, workloads);
        const double m = s.mean;
        if (m < best.stats.mean) best = SimOptimum{a, std::move(s)};
        return m;
    };

    // Interval endpoints equal to 0 or 1 are simulable (one queue empty);
    // interior endpoints are stability boundaries and get nudged inside.
    const double pad = 1e-6 * fi.width();
    const double lo = fi.lo > 0.0 ? fi.lo + pad : 0.0;
    const double hi = fi.hi < 1.0 ? fi.hi - pad : 1.0;

    constexpr int kScanPoints = 11;
    int best_k = 0;
    double best_scan = std::numeric_limits<double>::infinity();
    std::vector<double> scan(kScanPoints);
    for (int k = 0; k < kScanPoints; ++k) {
        scan[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (kScanPoints - 1);
        const double v = evaluate(scan[static_cast<std::size_t>(k)]);
        if (v < best_scan) {
            best_scan = v;
            best_k = k;
        }
    }
    double a = scan[static_cast<std::size_t>(std::max(0, best_k - 1))];
    double b = scan[static_cast<std::size_t>(std::min(kScanPoints - 1, best_k + 1))];

    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = evaluate(x1);
    double f2 = evaluate(x2);
    while (b - a > search_tolerance) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = evaluate(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = evaluate(x2);
        }
    }
    return best;
}

}  // namespace hybridq
