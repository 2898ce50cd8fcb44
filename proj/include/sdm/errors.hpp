#pragma once

#include <stdexcept>
#include <string>

namespace sdm {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside its documented range.
struct DomainError : Error {
    using Error::Error;
};

// Two vectors of different ambient dimension fed to one operation.
struct DimensionMismatch : Error {
    using Error::Error;
};

// Affine hull rank-deficient at tolerance; the simplex has no circumcap.
struct DegenerateSimplex : Error {
    using Error::Error;
};

// Projection of the origin onto the affine hull is (numerically) the origin:
// the circumscribing sphere is a great-sphere.
struct GreatSphere : Error {
    using Error::Error;
};

// A facet functional vanishes at the cap center at tolerance; visibility is
// undecidable. Callers resample.
struct TangencyAtTolerance : Error {
    using Error::Error;
};

// Point cloud without a full-dimensional affine span.
struct DegenerateInput : Error {
    using Error::Error;
};

// General-position violation detected during a build (coplanar ridge, point
// on a facet plane or cap boundary at tolerance).
struct NotGeneral : Error {
    using Error::Error;
};

// Hull facet hyperplane passes through the origin at tolerance.
struct AmbiguousFacet : Error {
    using Error::Error;
};

// The emitted intervals do not tile the mosaic exactly once.
struct PartitionFailure : Error {
    using Error::Error;
};

// Realized sample too small to build anything.
struct TooFewPoints : Error {
    using Error::Error;
};

// A C constant required by a formula is absent from the table.
struct MissingConstant : Error {
    using Error::Error;
};

// Sphere point with a coordinate below -tolerance mapped back to the simplex.
struct NegativeCoordinate : Error {
    using Error::Error;
};

// File/stream failure surfaced verbatim.
struct IoError : Error {
    using Error::Error;
};

// True for the probability-zero degeneracies that an experiment driver is
// expected to absorb by redrawing the sample.
inline bool is_resample_event(const Error& e) {
    return dynamic_cast<const DegenerateSimplex*>(&e) != nullptr ||
           dynamic_cast<const GreatSphere*>(&e) != nullptr ||
           dynamic_cast<const TangencyAtTolerance*>(&e) != nullptr ||
           dynamic_cast<const DegenerateInput*>(&e) != nullptr ||
           dynamic_cast<const NotGeneral*>(&e) != nullptr ||
           dynamic_cast<const AmbiguousFacet*>(&e) != nullptr ||
           dynamic_cast<const TooFewPoints*>(&e) != nullptr;
}

}  // namespace sdm
