#include "dissfield/error.hpp"

namespace dissfield {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidInput: return "InvalidInput";
        case ErrorKind::NonConvergence: return "NonConvergence";
        case ErrorKind::NonFinite: return "NonFinite";
        case ErrorKind::PoleOnBoundary: return "PoleOnBoundary";
        case ErrorKind::DomainEdge: return "DomainEdge";
        case ErrorKind::NoClosedForm: return "NoClosedForm";
        case ErrorKind::NegativeImChi: return "NegativeImChi";
        case ErrorKind::PoleHit: return "PoleHit";
        case ErrorKind::Instability: return "Instability";
        case ErrorKind::SpectrumUnresolvable: return "SpectrumUnresolvable";
        case ErrorKind::ReferenceLimitUnreached: return "ReferenceLimitUnreached";
        case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    }
    return "Unknown";
}

} // namespace dissfield
