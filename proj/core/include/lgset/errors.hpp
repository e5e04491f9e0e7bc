#pragma once

#include <stdexcept>
#include <string>

namespace lgset {

/// Two successive node-count refinements of a quadrature disagreed.
class QuadratureNotConverged : public std::runtime_error {
public:
    QuadratureNotConverged(const std::string& what, double coarse, double fine)
        : std::runtime_error(what), coarse_(coarse), fine_(fine) {}

    double coarse() const noexcept { return coarse_; }
    double fine() const noexcept { return fine_; }

private:
    double coarse_;
    double fine_;
};

/// The lower parameter of a terminating 2F1 series reached 0 or a negative
/// integer before the series terminated.
class PoleInC : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace lgset
