#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "hybridq/model.hpp"

namespace hybridq {

// M/M/1 mean sojourn time 1/(service - arrival). arrival_rate 0 is the empty
// system (sojourn = mean service time).
inline double mm1_mean_delay(double arrival_rate, double service_rate) {
    if (!(service_rate > 0.0) || arrival_rate < 0.0)
        throw UnstableQueue(Tech::Wifi, "rates must satisfy 0 <= arrival, 0 < service");
    if (!(arrival_rate < service_rate))
        throw UnstableQueue(Tech::Wifi, "arrival rate " + std::to_string(arrival_rate) +
                                            " >= service rate " + std::to_string(service_rate));
    return 1.0 / (service_rate - arrival_rate);
}

// Probability-weighted WiFi sojourn alpha*mu/(b1 - alpha*lambda*mu). The same
// expression is the mean sojourn of the aggregated WiFi queue, which is what
// makes the two systems directly comparable term by term.
inline double wifi_delay_term(const SystemParams& p, double alpha) {
    return alpha * p.mu / (p.b1 - alpha * p.load());
}

// VLC counterpart (1-alpha)*mu/(b2 - (1-alpha)*lambda*mu/n).
inline double vlc_delay_term(const SystemParams& p, double alpha) {
    return (1.0 - alpha) * p.mu / (p.b2 - (1.0 - alpha) * p.load() / p.n);
}

namespace detail {

// +inf outside the stable region; used by grid scans.
inline double nonagg_mean_delay_or_inf(const SystemParams& p, double alpha) {
    const double lm = p.load();
    if (!(alpha * lm < p.b1) || !((1.0 - alpha) * lm / p.n < p.b2))
        return std::numeric_limits<double>::infinity();
    return wifi_delay_term(p, alpha) + vlc_delay_term(p, alpha);
}

}  // namespace detail

// Mean system delay of the non-aggregated system at split alpha.
inline double nonagg_mean_delay(const SystemParams& p, double alpha) {
    check_stable_split(p, alpha);
    return wifi_delay_term(p, alpha) + vlc_delay_term(p, alpha);
}

enum class NonAggBranch { BoundaryAllVlc, Interior };

inline const char* branch_name(NonAggBranch b) {
    return b == NonAggBranch::BoundaryAllVlc ? "boundary_all_vlc" : "interior";
}

struct NonAggSolution {
    double alpha_opt;
    double min_delay;  // s
    NonAggBranch branch;
    bool clamped;  // feasible interval forced the minimizer to an endpoint
};

// Closed-form minimizer of the non-aggregated mean delay. Boundary branch
// (all traffic on VLC) when (b2*n/(lambda*mu))*(1 - sqrt(beta*n)) >= 1;
// otherwise the interior stationary point, written as
//   alpha = sqrt(b1)*(lambda*mu + n*sqrt(b1*b2) - b2*n) / (lambda*mu*(sqrt(b1) + n*sqrt(b2)))
// which avoids the cancellation-prone division by b2*n.
inline NonAggSolution nonagg_optimal_alpha(const SystemParams& p) {
    const double lm = p.load();
    const double b2n = p.b2 * p.n;
    const double beta = p.b1 / b2n;
    const double cond = (b2n / lm) * (1.0 - std::sqrt(beta * p.n));
    if (cond >= 1.0)
        return NonAggSolution{0.0, p.mu * p.n / (b2n - lm), NonAggBranch::BoundaryAllVlc, false};

    const double root_b1 = std::sqrt(p.b1);
    double alpha = root_b1 * (lm + p.n * std::sqrt(p.b1 * p.b2) - b2n) /
                   (lm * (root_b1 + p.n * std::sqrt(p.b2)));

    const FeasibleInterval fi = feasible_alpha_interval(p);
    bool clamped = false;
    if (!fi.contains_strict(alpha) && !(alpha == 0.0 && fi.lo == 0.0) &&
        !(alpha == 1.0 && fi.hi == 1.0)) {
        // Does not occur for validated params (the stationary point provably
        // has positive margins on both queues); kept as a guard for callers
        // bypassing validation.
        clamped = true;
        const double nudge = 1e-9 * fi.width();
        double best = std::clamp(alpha, fi.lo + nudge, fi.hi - nudge);
        double best_delay = detail::nonagg_mean_delay_or_inf(p, best);
        for (double endpoint : {0.0, 1.0}) {
            const double d = detail::nonagg_mean_delay_or_inf(p, endpoint);
            if (d < best_delay) {
                best = endpoint;
                best_delay = d;
            }
        }
        return NonAggSolution{best, best_delay, NonAggBranch::Interior, clamped};
    }

    const double one_minus = 1.0 - std::sqrt(beta * p.n);
    const double delay = (lm * (1.0 + p.n) - b2n * one_minus * one_minus) /
                         (p.lambda * (b2n * (beta + 1.0) - lm));
    return NonAggSolution{alpha, delay, NonAggBranch::Interior, clamped};
}

// Grid-scan reference for nonagg_optimal_alpha: evaluates the same objective
// on a uniform grid over the feasible interval and returns the minimizer.
inline NonAggSolution nonagg_bruteforce_min(const SystemParams& p, double grid_step) {
    const FeasibleInterval fi = feasible_alpha_interval(p);
    if (!(grid_step > 0.0) || !(grid_step < fi.width()))
        throw std::invalid_argument("grid_step must be in (0, feasible interval width)");
    double best_alpha = 0.0;
    double best = std::numeric_limits<double>::infinity();
    const long long steps = static_cast<long long>(fi.width() / grid_step);
    for (long long k = 0; k <= steps; ++k) {
        const double a = fi.lo + static_cast<double>(k) * grid_step;
        const double d = detail::nonagg_mean_delay_or_inf(p, a);
        if (d < best) {
            best = d;
            best_alpha = a;
        }
    }
    if (fi.hi > fi.lo + static_cast<double>(steps) * grid_step) {
        const double d = detail::nonagg_mean_delay_or_inf(p, fi.hi);
        if (d < best) {
            best = d;
            best_alpha = fi.hi;
        }
    }
    const NonAggBranch branch =
        best_alpha == fi.lo ? NonAggBranch::BoundaryAllVlc : NonAggBranch::Interior;
    return NonAggSolution{best_alpha, best, branch, false};
}

struct PerQueueDelays {
    double wifi;  // s
    double vlc;   // s
};

// Mean sojourn of each aggregated queue at split alpha: the WiFi queue serves
// the alpha-sized piece of every request, each VLC queue the (1-alpha) piece
// of its 1/n share.
inline PerQueueDelays agg_per_queue_mean_delays(const SystemParams& p, double alpha) {
    check_stable_split(p, alpha);
    return PerQueueDelays{wifi_delay_term(p, alpha), vlc_delay_term(p, alpha)};
}

struct AggApproxSolution {
    double alpha;
    double wifi_mean_delay;  // s
    double vlc_mean_delay;   // s, equals wifi_mean_delay by construction
};

namespace detail {

// Root of lambda*mu*(1-1/n)*a^2 - (b1+b2+lambda*mu*(1-1/n))*a + b1 = 0 lying
// in (0,1), i.e. the split equalizing the two per-queue mean delays. Product
// form of the smaller root; degenerates smoothly to b1/(b1+b2) as n -> 1.
// n is real-valued here so the n -> 1 limit can be probed directly.
inline double agg_equalizing_alpha(double lambda_mu, double b1, double b2, double n) {
    const double a = lambda_mu * (1.0 - 1.0 / n);
    const double b = -(b1 + b2 + a);
    const double c = b1;
    const double disc = b * b - 4.0 * a * c;
    if (!(disc > 0.0))
        throw std::logic_error("equalizing-alpha discriminant not positive: " +
                               std::to_string(disc));
    const double q = 0.5 * (-b + std::sqrt(disc));
    return c / q;
}

}  // namespace detail

// Approximate optimal split for the aggregated system, from equalizing the
// two per-queue mean delays (exact for n=1).
inline AggApproxSolution agg_split_ratio_approx(const SystemParams& p) {
    const double alpha =
        detail::agg_equalizing_alpha(p.load(), p.b1, p.b2, static_cast<double>(p.n));
    const PerQueueDelays d = agg_per_queue_mean_delays(p, alpha);
    return AggApproxSolution{alpha, d.wifi, d.vlc};
}

// max of the per-queue means: a lower bound on the true E[max] system delay.
inline double agg_analytic_lower_bound(const SystemParams& p, double alpha) {
    const PerQueueDelays d = agg_per_queue_mean_delays(p, alpha);
    return std::max(d.wifi, d.vlc);
}

}  // namespace hybridq
