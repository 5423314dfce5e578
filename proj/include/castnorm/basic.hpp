/*
Copyright (c) 2026 the castnorm authors. All rights reserved.
Released under Apache 2.0 license as described in the file LICENSE.
*/
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace castnorm {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UndeclaredVariable : Error { using Error::Error; };
struct IllTypedApplication : Error { using Error::Error; };
struct InvalidCast : Error { using Error::Error; };
struct DuplicateName : Error { using Error::Error; };
struct IllTypedInput : Error { using Error::Error; };
struct RewriteFailed : Error { using Error::Error; };
struct AbstractTypePresent : Error { using Error::Error; };
struct UnknownUserOp : Error { using Error::Error; };
struct InstantiationIllTyped : Error { using Error::Error; };

struct ParseError : Error {
    ParseError(const std::string& file, int line, int col, const std::string& msg)
        : Error(file + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
          file(file), line(line), col(col) {}
    std::string file;
    int line;
    int col;
};

enum class Dir { L2R, R2L };

inline const char* dir_name(Dir d) { return d == Dir::L2R ? "L2R" : "R2L"; }

// Global rewrite-step budget. take() succeeds once per remaining unit; the
// first refused take latches `exhausted`.
struct Budget {
    explicit Budget(long long limit) : limit(limit), remaining(limit) {}

    bool take() {
        if (exhausted) return false;
        if (remaining <= 0) {
            exhausted = true;
            return false;
        }
        --remaining;
        return true;
    }

    long long used() const { return limit - remaining; }

    long long limit;
    long long remaining;
    bool exhausted = false;
};

} // namespace castnorm
