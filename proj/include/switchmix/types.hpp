#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace switchmix {

// Steps are 1-based: t = 1..T.
using Time = std::int64_t;

using Observation = double;
using Estimate = double;

struct ExpertId {
    std::uint64_t value = 0;
    friend auto operator<=>(const ExpertId&, const ExpertId&) = default;
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input outside an operation's domain.
class InvalidInput : public Error {
public:
    using Error::Error;
};

// A scheme with a known horizon was stepped past it.
class RunComplete : public Error {
public:
    using Error::Error;
};

// Some transition along a path has zero weight, or a path expert is not in
// the pool at its time.
class InfeasiblePath : public Error {
public:
    using Error::Error;
};

class HorizonTooLarge : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// A guaranteed inequality failed numerically.
class BoundViolation : public Error {
public:
    using Error::Error;
};

} // namespace switchmix
