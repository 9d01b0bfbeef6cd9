#pragma once

#include <stdexcept>
#include <string>

namespace markovforge {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotGreaterThanOne : public Error {
public:
    using Error::Error;
};

/// An enclosure still contains an integer boundary at the policy's ceiling.
class FloorUndecidable : public Error {
public:
    using Error::Error;
};

class DivergentTail : public Error {
public:
    using Error::Error;
};

class PrecisionExhausted : public Error {
public:
    using Error::Error;
};

class NoDeletableLoop : public Error {
public:
    using Error::Error;
};

class TailUnavailable : public Error {
public:
    using Error::Error;
};

class NoGrowthModel : public Error {
public:
    using Error::Error;
};

class RootNotBracketed : public Error {
public:
    using Error::Error;
};

class EmptyLoopSet : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

class GraphTooLarge : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace markovforge
