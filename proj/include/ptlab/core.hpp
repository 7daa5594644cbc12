#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ptlab {

using cplx = std::complex<double>;

// i*z without a complex multiply: exact component swap, no signed-zero churn.
inline cplx mul_i(cplx z) { return {-z.imag(), z.real()}; }

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Expression source could not be parsed; `offset` is the byte position.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what), offset(offset) {}
    std::size_t offset;
};

// Evaluation hit an undefined operation: unbound parameter, division by
// zero, log of zero.
class EvalError : public Error {
public:
    using Error::Error;
};

// Singular or ill-conditioned matrix, gauge-phase overflow, and similar.
class NumericError : public Error {
public:
    using Error::Error;
};

// Eigensolver ran out of iteration budget or failed residual
// certification; `failed_indices` identifies the offending rows/pairs.
class ConvergenceError : public NumericError {
public:
    ConvergenceError(const std::string& what, std::vector<int> failed)
        : NumericError(what), failed_indices(std::move(failed)) {}
    std::vector<int> failed_indices;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace ptlab
