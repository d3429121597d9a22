#pragma once

#include <stdexcept>
#include <string>

namespace magbill {

struct InvalidVelocity : std::runtime_error {
    explicit InvalidVelocity(const std::string& msg) : std::runtime_error(msg) {}
};

struct OffCircle : std::runtime_error {
    explicit OffCircle(const std::string& msg) : std::runtime_error(msg) {}
};

struct CuspSingularity : std::runtime_error {
    explicit CuspSingularity(const std::string& msg) : std::runtime_error(msg) {}
};

struct NoImpact : std::runtime_error {
    explicit NoImpact(const std::string& msg) : std::runtime_error(msg) {}
};

struct GrazingImpact : std::runtime_error {
    explicit GrazingImpact(const std::string& msg) : std::runtime_error(msg) {}
};

struct FixedBoundaryPoint : std::runtime_error {
    explicit FixedBoundaryPoint(const std::string& msg) : std::runtime_error(msg) {}
};

struct OutsideAnnulus : std::runtime_error {
    explicit OutsideAnnulus(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotAnnular : std::runtime_error {
    explicit NotAnnular(const std::string& msg) : std::runtime_error(msg) {}
};

struct NoTangency : std::runtime_error {
    explicit NoTangency(const std::string& msg) : std::runtime_error(msg) {}
};

struct OnBoundary : std::runtime_error {
    explicit OnBoundary(const std::string& msg) : std::runtime_error(msg) {}
};

struct NoRoots : std::runtime_error {
    explicit NoRoots(const std::string& msg) : std::runtime_error(msg) {}
};

struct VanishingGradient : std::runtime_error {
    explicit VanishingGradient(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotOnCurve : std::runtime_error {
    explicit NotOnCurve(const std::string& msg) : std::runtime_error(msg) {}
};

struct CertificationFailed : std::runtime_error {
    explicit CertificationFailed(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace magbill
