// error.hpp — error kinds shared by every module

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dissfield {

enum class ErrorKind {
    InvalidInput,       // contract violation on arguments or model data
    NonConvergence,     // quadrature budget exhausted
    NonFinite,          // NaN or Inf produced by an integrand
    PoleOnBoundary,     // principal-value pole within one window of an endpoint
    DomainEdge,         // finite-difference stencil leaves the domain
    NoClosedForm,       // analytic Kramers-Kronig partner unavailable
    NegativeImChi,      // passivity violated
    PoleHit,            // undamped pole of the Green's function
    Instability,        // Langevin integration blew up
    SpectrumUnresolvable,
    ReferenceLimitUnreached,
    ConfigInvalid,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace dissfield
