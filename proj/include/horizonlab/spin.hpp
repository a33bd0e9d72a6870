#pragma once
// su(2) representations, spin-coherent states, and the coupled-space
// eigenstate classification behind the linear daughter rule: a daughter
// hole must stay spin-coherent, which restricts the joint particle/hole
// state to a small family of J-tilde eigenstates.

#include <Eigen/Dense>
#include <vector>

#include "horizonlab/common.hpp"
#include "horizonlab/haar.hpp"

namespace horizonlab {

/// Exact half-integer (stored doubled). Spin arithmetic never touches
/// floating point until matrix elements are built.
struct HalfInt {
    int twice = 0;

    constexpr HalfInt() = default;
    constexpr explicit HalfInt(int twice_units) : twice(twice_units) {}

    static HalfInt from_double(double j);

    double value() const { return 0.5 * static_cast<double>(twice); }
    friend bool operator==(const HalfInt&, const HalfInt&) = default;
    friend auto operator<=>(const HalfInt&, const HalfInt&) = default;
};

/// Irreducible su(2) representation of spin j: Jz diagonal (j, j-1, ..., -j),
/// ladder matrices from the standard construction.
struct SpinRep {
    HalfInt j;
    Eigen::MatrixXcd jz;
    Eigen::MatrixXcd jplus;
    Eigen::MatrixXcd jminus;

    int dim() const { return j.twice + 1; }
    Eigen::MatrixXcd jx() const { return 0.5 * (jplus + jminus); }
    Eigen::MatrixXcd jy() const;
    Eigen::MatrixXcd casimir() const;  ///< Jx^2 + Jy^2 + Jz^2
    /// J . n with n = (sin t cos p, sin t sin p, cos t).
    Eigen::MatrixXcd axis_component(double theta, double phi) const;
};

SpinRep build_rep(HalfInt j);

/// R(theta, phi) = exp(-i phi Jz) exp(-i theta Jy).
Eigen::MatrixXcd rotation_operator(const SpinRep& rep, double theta, double phi);

/// Rotated highest-weight state R(theta, phi) |j, j>.
PureState spin_coherent(const SpinRep& rep, double theta, double phi);

/// Particle x hole product space with the coupling operator
/// J~ = J+ (x) J- + J- (x) J+ + 2 Jz (x) Jz = Jtot^2 - J^2 (x) 1 - 1 (x) J^2.
struct CoupledSpinSpace {
    SpinRep particle;
    SpinRep hole;
    Eigen::MatrixXcd jtilde;
    Eigen::MatrixXcd jtot_sq;
    Eigen::MatrixXcd jtot_z;

    int dim() const { return particle.dim() * hole.dim(); }
    Eigen::MatrixXcd jtot_axis(double theta, double phi) const;
    /// R(theta, phi) (x) R(theta, phi) on the product space.
    Eigen::MatrixXcd joint_rotation(double theta, double phi) const;

    static CoupledSpinSpace build(HalfInt particle_j, HalfInt hole_j);
};

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

enum class StateClass {
    StandardUp,        ///< |jp, jp> (x) |j, j>
    StandardDown,      ///< |jp,-jp> (x) |j,-j>
    AnomalousJ1,       ///< (|jp,-1>(x)|1,1> - |jp,1>(x)|1,-1>)/sqrt(2)
    HalfIntegerPlus,   ///< j = 1/2 family with mother j' = jp + 1/2
    HalfIntegerMinus,  ///< j = 1/2 family with mother j' = jp - 1/2
};

const char* to_string(StateClass cls);

struct ClassifiedState {
    Eigen::VectorXcd vector;  ///< in the z-frame product space
    double eigenvalue = 0.0;  ///< x with J~ v = x v
    StateClass cls = StateClass::StandardUp;
    HalfInt mother_j;  ///< j' of the pre-emission hole
    HalfInt mother_m;  ///< total angular momentum along z
    double residual = 0.0;       ///< ||J~ v - x v||
    double axis_residual = 0.0;  ///< set by the conservation filter
    bool conserved = false;
    bool orientation_arbitrary = false;  ///< mother j' = 0
};

struct EvaporationClassification {
    HalfInt particle_j;
    HalfInt hole_j;
    std::vector<ClassifiedState> entries;
    /// Dimension of the subspace of the ansatz span{alpha (x) |j,j>,
    /// beta (x) |j,-j>} made of genuine J~ eigenvectors, measured from the
    /// restricted eigenproblem (the brute-force completeness route).
    int genuine_dimension = 0;
};

/// Solves the coupled eigenproblem restricted to the spin-coherent ansatz
/// and returns the allowed evaporation states with certified residuals.
EvaporationClassification classify_eigenstates(HalfInt particle_j, HalfInt hole_j);

/// Marks entries whose total angular momentum along the mother's axis equals
/// the mother's J; the j = 1 anomalous class is always excluded. Each entry
/// is re-verified as an axis eigenstate after rotating by R (x) R.
EvaporationClassification conservation_filter(const EvaporationClassification& classification,
                                              HalfInt mother_j, double theta = 0.0,
                                              double phi = 0.0);

}  // namespace horizonlab
