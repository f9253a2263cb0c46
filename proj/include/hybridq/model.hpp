#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>

namespace hybridq {

// Units throughout: seconds, megabits, megabits/second.

enum class Tech { Wifi, Vlc };

inline const char* tech_name(Tech t) { return t == Tech::Wifi ? "wifi" : "vlc"; }

class ValidationError : public std::runtime_error {
public:
    enum class Kind { NonPositiveParameter, CapacityOrderViolation, InfeasibleLoad };

    ValidationError(Kind kind, const std::string& what)
        : std::runtime_error(name_of(kind) + (": " + what)), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

    static std::string name_of(Kind kind) {
        switch (kind) {
            case Kind::NonPositiveParameter: return "NonPositiveParameter";
            case Kind::CapacityOrderViolation: return "CapacityOrderViolation";
            case Kind::InfeasibleLoad: return "InfeasibleLoad";
        }
        return "ValidationError";
    }

private:
    Kind kind_;
};

class UnstableQueue : public std::runtime_error {
public:
    UnstableQueue(Tech queue, const std::string& what)
        : std::runtime_error(std::string("UnstableQueue(") + tech_name(queue) + "): " + what),
          queue_(queue) {}

    Tech queue() const noexcept { return queue_; }

private:
    Tech queue_;
};

struct SystemParams {
    double lambda;  // request arrival rate, 1/s
    double mu;      // mean request size, Mb
    double b1;      // WiFi downlink capacity, Mb/s
    double b2;      // per-AP VLC downlink capacity, Mb/s
    int n;          // number of VLC APs

    // offered load lambda*mu, Mb/s
    double load() const { return lambda * mu; }
};

struct DerivedQuantities {
    double beta;               // b1 / (b2 * n)
    double traffic_intensity;  // lambda * mu, Mb/s
};

inline SystemParams validate_params(double lambda, double mu, double b1, double b2, int n) {
    using Kind = ValidationError::Kind;
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0))
            throw ValidationError(Kind::NonPositiveParameter,
                                  std::string(name) + " must be > 0, got " + std::to_string(v));
    };
    positive(lambda, "lambda");
    positive(mu, "mu");
    positive(b1, "b1");
    positive(b2, "b2");
    if (n < 1)
        throw ValidationError(Kind::NonPositiveParameter,
                              "n must be >= 1, got " + std::to_string(n));
    if (!(b1 < b2))
        throw ValidationError(Kind::CapacityOrderViolation,
                              "requires b1 < b2, got b1=" + std::to_string(b1) +
                                  " b2=" + std::to_string(b2));
    // Second clause: within an ulp of saturation the divided-through bounds
    // can collapse even when the product comparison passes; reject those too
    // so a validated system always has a non-empty interval.
    if (!(lambda * mu < b1 + n * b2) ||
        !(std::max(0.0, 1.0 - n * b2 / (lambda * mu)) < std::min(1.0, b1 / (lambda * mu))))
        throw ValidationError(Kind::InfeasibleLoad,
                              "offered load lambda*mu=" + std::to_string(lambda * mu) +
                                  " >= total capacity b1+n*b2=" + std::to_string(b1 + n * b2));
    return SystemParams{lambda, mu, b1, b2, n};
}

inline DerivedQuantities derive(const SystemParams& p) {
    return DerivedQuantities{p.b1 / (p.b2 * p.n), p.lambda * p.mu};
}

// Open interval of alpha values keeping both queues stable. alpha exactly on a
// closed endpoint is acceptable only when that endpoint is 0 or 1 (the
// corresponding queue then carries zero load).
struct FeasibleInterval {
    double lo;
    double hi;

    double width() const { return hi - lo; }
    bool empty() const { return !(lo < hi); }
    bool contains_strict(double a) const { return a > lo && a < hi; }
};

// Raw stability bounds; no feasibility precondition (interval may be empty).
inline FeasibleInterval alpha_bounds(double lambda, double mu, double b1, double b2, int n) {
    const double lm = lambda * mu;
    return FeasibleInterval{std::max(0.0, 1.0 - n * b2 / lm), std::min(1.0, b1 / lm)};
}

inline FeasibleInterval feasible_alpha_interval(const SystemParams& p) {
    return alpha_bounds(p.lambda, p.mu, p.b1, p.b2, p.n);
}

// Throws UnstableQueue unless alpha keeps each queue strictly below its
// service rate. Holds automatically at alpha=0 / alpha=1 for the empty queue,
// so degenerate splits pass whenever the loaded side is stable.
inline void check_stable_split(const SystemParams& p, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw UnstableQueue(Tech::Wifi, "alpha=" + std::to_string(alpha) + " outside [0,1]");
    const double lm = p.lambda * p.mu;
    if (!(alpha * lm < p.b1))
        throw UnstableQueue(Tech::Wifi, "alpha*lambda*mu=" + std::to_string(alpha * lm) +
                                            " >= b1=" + std::to_string(p.b1));
    if (!((1.0 - alpha) * lm / p.n < p.b2))
        throw UnstableQueue(Tech::Vlc,
                            "(1-alpha)*lambda*mu/n=" + std::to_string((1.0 - alpha) * lm / p.n) +
                                " >= b2=" + std::to_string(p.b2));
}

struct AllocationRatio {
    double value;
    FeasibleInterval interval;
};

inline AllocationRatio make_allocation(const SystemParams& p, double alpha) {
    check_stable_split(p, alpha);
    return AllocationRatio{alpha, feasible_alpha_interval(p)};
}

}  // namespace hybridq
