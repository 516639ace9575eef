#pragma once

#include <stdexcept>
#include <string>

namespace deltastab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// mesh / actuators
struct PointOutsideDomain : Error { using Error::Error; };
struct NotARefinement : Error { using Error::Error; };
struct DegenerateBasePoints : Error { using Error::Error; };

// linear algebra
struct SolveFailure : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct EigenFailure : Error { using Error::Error; };
struct ConstraintRankDeficient : Error { using Error::Error; };

// riccati
struct UnstableX : Error { using Error::Error; };
struct NoStabilizingInit : Error { using Error::Error; };
struct NewtonDivergence : Error { using Error::Error; };

// simulate
struct NonFiniteState : Error { using Error::Error; };
struct NonPositiveNorm : Error { using Error::Error; };

// cli / config
struct ConfigError : Error { using Error::Error; };

}  // namespace deltastab
