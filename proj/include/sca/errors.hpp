// Error taxonomy for the sca library.
//
// Everything thrown on purpose derives from sca::error. The CLI maps
// parse_error and file I/O problems to exit code 1 and every other
// sca::error (contract violations, unsupported inputs, resource caps,
// numeric non-convergence) to exit code 2.

#pragma once

#include <stdexcept>
#include <string>

namespace sca {

class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid arguments at type construction (bad alphabet, non-total rule, ...).
class invalid_construction : public error {
public:
    using error::error;
};

// Input outside the declared domain of an operation (forbidden factor,
// word too short, patch misaligned, ...).
class domain_violation : public error {
public:
    using error::error;
};

// Operation is only defined for a restricted class of inputs
// (full-shift domain, mixing SFT, additive rule) and got something else.
class unsupported_input : public error {
public:
    using error::error;
};

// Exhaustive enumeration would exceed a configured cap.
class resource_limit : public error {
public:
    using error::error;
};

// Iterative numeric procedure failed to reach its residual target.
class convergence_failure : public error {
public:
    using error::error;
};

// Caller broke a stated precondition that is checked semantically
// (e.g. asking for the flux of a non-conserved observable).
class contract_violation : public error {
public:
    using error::error;
};

// Malformed model / observable / SFT definition files.
class parse_error : public error {
public:
    using error::error;
};

} // namespace sca
