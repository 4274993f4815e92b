#pragma once

#include <stdexcept>
#include <string>

namespace perfsde {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define PERFSDE_DEFINE_ERROR(Name)                                  \
    struct Name : Error {                                           \
        explicit Name(const std::string& msg) : Error(msg) {}       \
    }

PERFSDE_DEFINE_ERROR(EmptyDomain);
PERFSDE_DEFINE_ERROR(UnresolvedHole);
PERFSDE_DEFINE_ERROR(OverlappingHoles);
PERFSDE_DEFINE_ERROR(InvalidSpec);
PERFSDE_DEFINE_ERROR(DimensionMismatch);
PERFSDE_DEFINE_ERROR(MaxIterations);
PERFSDE_DEFINE_ERROR(NotFinite);
PERFSDE_DEFINE_ERROR(NotConnected);
PERFSDE_DEFINE_ERROR(DegenerateStart);
PERFSDE_DEFINE_ERROR(ResolutionMismatch);
PERFSDE_DEFINE_ERROR(InvalidEps);
PERFSDE_DEFINE_ERROR(NonPositiveDt);
PERFSDE_DEFINE_ERROR(NonFinite);
PERFSDE_DEFINE_ERROR(DegenerateNorm);
PERFSDE_DEFINE_ERROR(NoPositiveMargin);
PERFSDE_DEFINE_ERROR(ZeroShiftDivisor);

#undef PERFSDE_DEFINE_ERROR

}  // namespace perfsde
