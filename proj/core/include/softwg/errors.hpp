#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace softwg {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
    using Error::Error;
};

// transverse
struct NoBoundState : Error {
    using Error::Error;
};
struct DiscretizationTooCoarse : Error {
    using Error::Error;
};
struct TailNotExponential : Error {
    using Error::Error;
};
struct ZeroTestFunction : Error {
    using Error::Error;
};

// variational
struct MollifierTooNarrow : Error {
    using Error::Error;
};
struct DivergentExt : Error {
    using Error::Error;
};
struct QuadratureNotConverged : Error {
    using Error::Error;
};
struct CertificateNotFound : Error {
    using Error::Error;
};

// hamiltonian2d
struct GridTooCoarse : Error {
    using Error::Error;
};

// eigensolve: carries the best-so-far estimates
struct NotConverged : Error {
    NotConverged(const std::string& what, std::vector<double> values,
                 std::vector<double> residuals, int iterations)
        : Error(what), values(std::move(values)), residuals(std::move(residuals)),
          iterations(iterations) {}
    std::vector<double> values;
    std::vector<double> residuals;
    int iterations = 0;
};

} // namespace softwg
