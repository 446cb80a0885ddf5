#pragma once

#include <complex>
#include <string>

#include "scatlab/geometry.hpp"

namespace scatlab {

enum class BcKind { dirichlet, neumann, impedance };

/// B(u) = u, du/dnu, or du/dnu + lambda u on the boundary.  Impedance
/// requires Im(lambda) > 0; lambda is constant along the boundary.
class BoundaryCondition {
  public:
    static BoundaryCondition dirichlet() { return BoundaryCondition(BcKind::dirichlet, {}); }
    static BoundaryCondition neumann() { return BoundaryCondition(BcKind::neumann, {}); }
    static BoundaryCondition impedance(std::complex<double> lambda);

    BcKind kind() const { return kind_; }
    std::complex<double> lambda() const { return lambda_; }
    std::string name() const;

    /// B applied to a field with trace `value` and normal derivative `dn`.
    std::complex<double> apply(std::complex<double> value, std::complex<double> dn) const {
        switch (kind_) {
            case BcKind::dirichlet: return value;
            case BcKind::neumann: return dn;
            case BcKind::impedance: return dn + lambda_ * value;
        }
        return value;
    }

    friend bool operator==(const BoundaryCondition&, const BoundaryCondition&) = default;

  private:
    BoundaryCondition(BcKind kind, std::complex<double> lambda) : kind_(kind), lambda_(lambda) {}

    BcKind kind_;
    std::complex<double> lambda_;
};

/// The unknown (Omega, B): a placed boundary curve and its boundary condition.
struct Obstacle {
    PlacedCurve shape;
    BoundaryCondition bc = BoundaryCondition::dirichlet();

    Obstacle(PlacedCurve s, BoundaryCondition b) : shape(std::move(s)), bc(b) {}
    Obstacle(ParametricCurve base, RigidMotion motion, BoundaryCondition b)
        : shape(std::move(base), motion), bc(b) {}

    /// Same base and boundary condition under a different motion.
    Obstacle moved(const RigidMotion& m) const { return Obstacle(shape.base(), m, bc); }
};

}  // namespace scatlab
