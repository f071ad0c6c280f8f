#pragma once

#include <complex>
#include <stdexcept>

namespace canmet {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

// All library failures derive from Error.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ContinuationStall : Error { using Error::Error; };
struct ChartViolation : Error { using Error::Error; };
struct CutCollision : Error { using Error::Error; };
struct DegenerateCrossing : Error { using Error::Error; };
struct RankDeficient : Error { using Error::Error; };
struct QuadratureDivergence : Error { using Error::Error; };
struct SingularAperiod : Error { using Error::Error; };
struct RiemannRelationViolation : Error { using Error::Error; };
struct OutOfCollar : Error { using Error::Error; };
struct DegenerateDensity : Error { using Error::Error; };

} // namespace canmet
