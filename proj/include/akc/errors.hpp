#pragma once

#include <stdexcept>
#include <string>

namespace akc {

// Base class for all recoverable failures raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A certified comparison could not be decided at the available precision.
// The caller owns the budget: deepen the generator and retry.
struct IndeterminatePrecision : Error {
    explicit IndeterminatePrecision(const std::string& msg) : Error(msg) {}
};

// A convergent search ran out of indices before finding a qualifying one.
struct DepthExhausted : Error {
    int index_reached;
    DepthExhausted(const std::string& msg, int idx)
        : Error(msg), index_reached(idx) {}
};

// The schedule demanded an exponent N beyond the configured cap.
struct ScheduleOverflow : Error {
    long long computed_N;
    ScheduleOverflow(const std::string& msg, long long n)
        : Error(msg), computed_N(n) {}
};

// The schedule cannot proceed (e.g. q too small for the rho equation).
struct ScheduleInfeasible : Error {
    explicit ScheduleInfeasible(const std::string& msg) : Error(msg) {}
};

struct OutOfRange : Error {
    explicit OutOfRange(const std::string& msg) : Error(msg) {}
};

// Floor of len/theta differs between the two ends of the enclosure.
struct EnclosureTooWide : Error {
    explicit EnclosureTooWide(const std::string& msg) : Error(msg) {}
};

// An orbit scan exceeded its iteration budget without the event occurring.
struct BudgetExceeded : Error {
    explicit BudgetExceeded(const std::string& msg) : Error(msg) {}
};

// Bisection could not reach the requested tolerance.
struct ToleranceNotMet : Error {
    explicit ToleranceNotMet(const std::string& msg) : Error(msg) {}
};

// A lift was requested for a map without fixed points.
struct NormalizationUnavailable : Error {
    explicit NormalizationUnavailable(const std::string& msg) : Error(msg) {}
};

struct MalformedCertificate : Error {
    explicit MalformedCertificate(const std::string& msg) : Error(msg) {}
};

// The truncation tail exceeds the budget the certificate geometry needs.
struct TruncationInsufficient : Error {
    explicit TruncationInsufficient(const std::string& msg) : Error(msg) {}
};

struct MalformedInput : Error {
    explicit MalformedInput(const std::string& msg) : Error(msg) {}
};

}  // namespace akc
