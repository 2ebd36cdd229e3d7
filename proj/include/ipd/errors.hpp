#pragma once

#include <stdexcept>
#include <string>

namespace ipd {

// Base class for everything thrown by this library. CLI layers map
// subclasses onto exit codes: input/domain problems vs numerical failures.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Point outside the domain a distance family requires.
struct domain_violation : error {
    using error::error;
};

// Point dimension does not match the spec dimension.
struct dimension_mismatch : error {
    using error::error;
};

// Bad parameter at construction (p < 1, eps out of range, bad knots, ...).
struct invalid_parameter : error {
    using error::error;
};

// Radius outside the range an operation supports (t <= 0, Canberra t >= 1, ...).
struct invalid_radius : error {
    using error::error;
};

// Operation not defined for this distance family.
struct unsupported_family : error {
    using error::error;
};

// A stated precondition does not hold for the given arguments.
struct precondition_violation : error {
    using error::error;
};

// delta_t with a zero denominator volume.
struct degenerate_denominator : error {
    using error::error;
};

// Oscillatory distance asked for a separation beyond its scale t0.
struct out_of_scale : error {
    using error::error;
};

// Rejection sampler accepted too few points to report an average.
struct insufficient_acceptance : error {
    using error::error;
};

// Quadrature box misses too much of a density's mass.
struct insufficient_coverage : error {
    using error::error;
};

// Rate experiment given a ladder with a degenerate rung.
struct degenerate_ladder : error {
    using error::error;
};

// File cannot be read, written, or parsed.
struct io_failure : error {
    using error::error;
};

}  // namespace ipd
