#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace fogweaver {

// Task-level time, in microseconds.
using Micros = double;

// Network-level time on a 0.1 us grid.
using Ticks = std::int64_t;

inline constexpr Ticks kTicksPerMicro = 10;

// Tolerance for comparisons on Micros values.
inline constexpr double kTimeEps = 1e-6;

inline Ticks to_ticks(Micros us) { return static_cast<Ticks>(std::llround(us * kTicksPerMicro)); }
inline Micros to_micros(Ticks t) { return static_cast<Micros>(t) / kTicksPerMicro; }

inline Ticks ceil_div(Ticks num, Ticks den) { return (num + den - 1) / den; }

// Non-negative remainder.
inline Ticks mod_floor(Ticks a, Ticks m) {
    Ticks r = a % m;
    return r < 0 ? r + m : r;
}

enum class Exec { serial, parallel };

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& msg, int line, int column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

class DuplicateIdentifier : public Error {
public:
    using Error::Error;
};

class UnknownReference : public Error {
public:
    using Error::Error;
};

class EmptyInput : public Error {
public:
    using Error::Error;
};

class NoSuchLink : public Error {
public:
    using Error::Error;
};

class StreamNotScheduled : public Error {
public:
    using Error::Error;
};

class MismatchedStreams : public Error {
public:
    using Error::Error;
};

// Synthesis could not place everything; names lists the unplaced items.
class Infeasible : public Error {
public:
    Infeasible(const std::string& what, std::vector<std::string> names)
        : Error(what), names_(std::move(names)) {}
    const std::vector<std::string>& names() const { return names_; }

private:
    std::vector<std::string> names_;
};

class TaskPlacementInfeasible : public Infeasible {
public:
    using Infeasible::Infeasible;
};

template <class Kind>
struct Violation {
    Kind kind;
    std::string message;
};

// A list of findings; empty means the checked artifact is valid.
template <class Kind>
struct Report {
    std::vector<Violation<Kind>> entries;

    bool ok() const { return entries.empty(); }
    std::size_t count(Kind k) const {
        std::size_t n = 0;
        for (const auto& e : entries)
            if (e.kind == k) ++n;
        return n;
    }
    void add(Kind k, std::string msg) { entries.push_back({k, std::move(msg)}); }
};

}  // namespace fogweaver
