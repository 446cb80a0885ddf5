#include "scatlab/obstacle.hpp"

#include "scatlab/errors.hpp"

namespace scatlab {

BoundaryCondition BoundaryCondition::impedance(std::complex<double> lambda) {
    if (!(lambda.imag() > 0.0)) throw ConfigError("impedance boundary condition needs Im(lambda) > 0");
    return BoundaryCondition(BcKind::impedance, lambda);
}

std::string BoundaryCondition::name() const {
    switch (kind_) {
        case BcKind::dirichlet:
            return "dirichlet";
        case BcKind::neumann:
            return "neumann";
        case BcKind::impedance:
            break;
    }
    return "impedance";
}

}  // namespace scatlab
