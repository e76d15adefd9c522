#pragma once

#include <stdexcept>
#include <string>

namespace apnwb {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// construction / arithmetic
struct UnsupportedWidth : Error { using Error::Error; };
struct ReducibleModulus : Error { using Error::Error; };
struct FieldMismatch : Error { using Error::Error; };
struct DivisionByZero : Error { using Error::Error; };
struct NotADivisor : Error { using Error::Error; };
struct ZeroInput : Error { using Error::Error; };
struct OddExtension : Error { using Error::Error; };

// builders / checks
struct DegenerateA : Error { using Error::Error; };
struct NonzeroConstant : Error { using Error::Error; };
struct OddnessViolation : Error { using Error::Error; };
struct CubeB : Error { using Error::Error; };
struct NotQuadratic : Error { using Error::Error; };
struct BadExponent : Error { using Error::Error; };
struct DegenerateX : Error { using Error::Error; };
struct TooLarge : Error { using Error::Error; };

// i/o
struct IoError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

} // namespace apnwb
