#pragma once

#include <stdexcept>
#include <string>

namespace xpair {

//! Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

//! A caller violated an operation's documented domain (bad argument).
class PreconditionError : public Error {
public:
    using Error::Error;
};

enum class KinematicsErrc {
    above_phase_space,        //!< omega1 exceeds omega1_max
    forbidden_configuration,  //!< non-positive denominator or degenerate geometry
    inconsistent_kinematics,  //!< energies or four-vectors do not satisfy conservation
    degenerate_geometry,      //!< e.g. k.p = 0 in the quasimomentum
};

inline const char* to_string(KinematicsErrc c)
{
    switch (c) {
    case KinematicsErrc::above_phase_space: return "above_phase_space";
    case KinematicsErrc::forbidden_configuration: return "forbidden_configuration";
    case KinematicsErrc::inconsistent_kinematics: return "inconsistent_kinematics";
    case KinematicsErrc::degenerate_geometry: return "degenerate_geometry";
    }
    return "unknown";
}

//! Requested point lies outside the physical phase space.
class KinematicsError : public Error {
public:
    KinematicsError(KinematicsErrc code, const std::string& what)
        : Error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }
    KinematicsErrc code() const noexcept { return code_; }

private:
    KinematicsErrc code_;
};

//! Infrared or collinear singularity of the cross-section function.
class SingularityError : public Error {
public:
    using Error::Error;
};

//! Adaptive integration did not reach the requested tolerance.
class IntegrationError : public Error {
public:
    IntegrationError(const std::string& what, double estimate, double error_bound)
        : Error(what), estimate_(estimate), error_bound_(error_bound)
    {
    }
    double best_estimate() const noexcept { return estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

//! Scenario or configuration input failed validation.
class ValidationError : public Error {
public:
    using Error::Error;
};

//! File could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace xpair
