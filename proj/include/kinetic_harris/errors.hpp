#pragma once

#include <stdexcept>
#include <string>

namespace kh {

class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// One class per failure mode so callers can react selectively.
class NonConvergedQuadrature : public Error { public: using Error::Error; };
class EnvelopeRejected : public Error { public: using Error::Error; };
class StepUnderflow : public Error { public: using Error::Error; };
class NoContraction : public Error { public: using Error::Error; };
class MaxIterations : public Error { public: using Error::Error; };
class ThinningBoundViolated : public Error { public: using Error::Error; };
class DriftParamsMissing : public Error { public: using Error::Error; };
class ConstraintViolated : public Error { public: using Error::Error; };
class ShootingHorizonExceeded : public Error { public: using Error::Error; };
class PreconditionViolated : public Error { public: using Error::Error; };
class BoxCoverageInsufficient : public Error { public: using Error::Error; };
class InsufficientSignal : public Error { public: using Error::Error; };
class ConfigError : public Error { public: using Error::Error; };

} // namespace kh
