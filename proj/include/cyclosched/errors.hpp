// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace cyclosched {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// --- input validation -------------------------------------------------

class EmptySet : public Error {
public:
    EmptySet() : Error("task set is empty") {}
};

class NonPositiveTiming : public Error {
public:
    using Error::Error;
};

class WcetExceedsPeriod : public Error {
public:
    using Error::Error;
};

class Overutilized : public Error {
public:
    explicit Overutilized(const std::string& what) : Error(what) {}
};

class RangeTooSmall : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

// --- domain ------------------------------------------------------------

class BasePeriodExceedsPeriod : public Error {
public:
    using Error::Error;
};

class BasePeriodOutOfRange : public Error {
public:
    using Error::Error;
};

class InfeasibleBasePeriod : public Error {
public:
    using Error::Error;
};

class NoFeasibleBasePeriod : public Error {
public:
    NoFeasibleBasePeriod()
        : Error("no base period in [1, T1] admits a feasible schedule") {}
};

class HyperperiodOverflow : public Error {
public:
    using Error::Error;
};

// --- internal consistency ---------------------------------------------

class OracleMismatch : public Error {
public:
    using Error::Error;
};

} // namespace cyclosched
