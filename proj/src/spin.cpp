#include "horizonlab/spin.hpp"

#include <cmath>
#include <complex>
#include <string>

namespace horizonlab {

namespace {

using Complex = std::complex<double>;
constexpr Complex kI{0.0, 1.0};

Eigen::MatrixXcd hermitian_exp(const Eigen::MatrixXcd& hermitian, double angle)
{
    // exp(-i angle H) through the spectral decomposition of H.
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian);
    const Eigen::VectorXd evals = solver.eigenvalues();
    Eigen::VectorXcd phases(evals.size());
    for (Eigen::Index k = 0; k < evals.size(); ++k)
        phases(k) = std::exp(-kI * angle * evals(k));
    return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

}  // namespace

HalfInt HalfInt::from_double(double j)
{
    const double doubled = 2.0 * j;
    const auto twice = static_cast<int>(std::lround(doubled));
    if (std::abs(doubled - static_cast<double>(twice)) > 1e-9)
        throw InvalidState("value " + std::to_string(j) + " is not a half-integer");
    return HalfInt(twice);
}

Eigen::MatrixXcd SpinRep::jy() const { return (jplus - jminus) / (2.0 * kI); }

Eigen::MatrixXcd SpinRep::casimir() const
{
    const Eigen::MatrixXcd x = jx();
    const Eigen::MatrixXcd y = jy();
    return x * x + y * y + jz * jz;
}

Eigen::MatrixXcd SpinRep::axis_component(double theta, double phi) const
{
    return std::sin(theta) * std::cos(phi) * jx() + std::sin(theta) * std::sin(phi) * jy() +
           std::cos(theta) * jz;
}

SpinRep build_rep(HalfInt j)
{
    if (j.twice < 0)
        throw InvalidState("spin must be non-negative");
    const int dim = j.twice + 1;
    const double jv = j.value();

    SpinRep rep;
    rep.j = j;
    rep.jz = Eigen::MatrixXcd::Zero(dim, dim);
    rep.jplus = Eigen::MatrixXcd::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) {
        const double m = jv - static_cast<double>(k);  // index 0 is m = j
        rep.jz(k, k) = m;
        if (k >= 1)  // J+ |j, m> = c |j, m+1>, landing one index up
            rep.jplus(k - 1, k) = std::sqrt(jv * (jv + 1.0) - m * (m + 1.0));
    }
    rep.jminus = rep.jplus.adjoint();
    return rep;
}

Eigen::MatrixXcd rotation_operator(const SpinRep& rep, double theta, double phi)
{
    const int dim = rep.dim();
    Eigen::VectorXcd z_phases(dim);
    for (int k = 0; k < dim; ++k)
        z_phases(k) = std::exp(-kI * phi * rep.jz(k, k).real());
    return Eigen::MatrixXcd(z_phases.asDiagonal()) * hermitian_exp(rep.jy(), theta);
}

PureState spin_coherent(const SpinRep& rep, double theta, double phi)
{
    Eigen::VectorXcd top = Eigen::VectorXcd::Zero(rep.dim());
    top(0) = 1.0;
    return PureState{rotation_operator(rep, theta, phi) * top};
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b)
{
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index k = 0; k < a.cols(); ++k)
            out.block(i * b.rows(), k * b.cols(), b.rows(), b.cols()) = a(i, k) * b;
    return out;
}

Eigen::MatrixXcd CoupledSpinSpace::jtot_axis(double theta, double phi) const
{
    const auto eye_p = Eigen::MatrixXcd::Identity(particle.dim(), particle.dim());
    const auto eye_h = Eigen::MatrixXcd::Identity(hole.dim(), hole.dim());
    return kron(particle.axis_component(theta, phi), eye_h) +
           kron(eye_p, hole.axis_component(theta, phi));
}

Eigen::MatrixXcd CoupledSpinSpace::joint_rotation(double theta, double phi) const
{
    return kron(rotation_operator(particle, theta, phi), rotation_operator(hole, theta, phi));
}

CoupledSpinSpace CoupledSpinSpace::build(HalfInt particle_j, HalfInt hole_j)
{
    CoupledSpinSpace space;
    space.particle = build_rep(particle_j);
    space.hole = build_rep(hole_j);

    space.jtilde = kron(space.particle.jplus, space.hole.jminus) +
                   kron(space.particle.jminus, space.hole.jplus) +
                   2.0 * kron(space.particle.jz, space.hole.jz);

    // Jtot^2 assembled from the summed component operators, independently of
    // the ladder form above, so the J~ identity is a real consistency check.
    const auto eye_p = Eigen::MatrixXcd::Identity(space.particle.dim(), space.particle.dim());
    const auto eye_h = Eigen::MatrixXcd::Identity(space.hole.dim(), space.hole.dim());
    const Eigen::MatrixXcd total_x =
        kron(space.particle.jx(), eye_h) + kron(eye_p, space.hole.jx());
    const Eigen::MatrixXcd total_y =
        kron(space.particle.jy(), eye_h) + kron(eye_p, space.hole.jy());
    space.jtot_z = kron(space.particle.jz, eye_h) + kron(eye_p, space.hole.jz);
    space.jtot_sq = total_x * total_x + total_y * total_y + space.jtot_z * space.jtot_z;
    return space;
}

const char* to_string(StateClass cls)
{
    switch (cls) {
        case StateClass::StandardUp: return "standard_up";
        case StateClass::StandardDown: return "standard_down";
        case StateClass::AnomalousJ1: return "anomalous_j1";
        case StateClass::HalfIntegerPlus: return "half_integer_plus";
        case StateClass::HalfIntegerMinus: return "half_integer_minus";
    }
    return "unknown";
}

namespace {

/// Flat product-space index of |jp, mp> (x) |j, mh>, m given in half units.
int flat_index(HalfInt jp, HalfInt j, int twice_mp, int twice_mh)
{
    const int p = (jp.twice - twice_mp) / 2;
    const int h = (j.twice - twice_mh) / 2;
    return p * (j.twice + 1) + h;
}

ClassifiedState make_entry(const CoupledSpinSpace& space, Eigen::VectorXcd vector, double x,
                           StateClass cls, HalfInt mother_j, HalfInt mother_m)
{
    ClassifiedState entry;
    entry.vector = std::move(vector);
    entry.eigenvalue = x;
    entry.cls = cls;
    entry.mother_j = mother_j;
    entry.mother_m = mother_m;
    entry.residual = (space.jtilde * entry.vector - x * entry.vector).norm();
    entry.orientation_arbitrary = mother_j.twice == 0;
    return entry;
}

/// Columns spanning the ansatz subspace {alpha (x) |j,j>, beta (x) |j,-j>}.
Eigen::MatrixXcd ansatz_basis(const CoupledSpinSpace& space)
{
    const HalfInt jp = space.particle.j;
    const HalfInt j = space.hole.j;
    const int dim_p = space.particle.dim();
    const int width = j.twice == 0 ? dim_p : 2 * dim_p;
    Eigen::MatrixXcd basis = Eigen::MatrixXcd::Zero(space.dim(), width);
    for (int p = 0; p < dim_p; ++p) {
        const int twice_mp = jp.twice - 2 * p;
        basis(flat_index(jp, j, twice_mp, j.twice), p) = 1.0;
        if (j.twice != 0)
            basis(flat_index(jp, j, twice_mp, -j.twice), dim_p + p) = 1.0;
    }
    return basis;
}

int kernel_dimension(const Eigen::MatrixXcd& m)
{
    if (m.cols() == 0)
        return 0;
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& sigma = svd.singularValues();
    const double scale = std::max(1.0, sigma.size() > 0 ? sigma(0) : 0.0);
    int kernel = static_cast<int>(m.cols() - sigma.size());
    for (Eigen::Index k = 0; k < sigma.size(); ++k)
        if (sigma(k) < 1e-10 * scale)
            ++kernel;
    return kernel;
}

int genuine_dimension(const CoupledSpinSpace& space)
{
    const Eigen::MatrixXcd basis = ansatz_basis(space);
    const Eigen::MatrixXcd image = space.jtilde * basis;
    const Eigen::MatrixXcd restricted = basis.adjoint() * image;
    // Components of J~ B leaking out of the subspace. A coefficient vector w
    // describes a genuine eigenvector iff it is an eigenvector of the
    // restricted operator AND the leak map kills it, so count, eigenspace by
    // eigenspace, the directions the leak annihilates.
    const Eigen::MatrixXcd leak = image - basis * restricted;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(restricted);
    const Eigen::VectorXd values = solver.eigenvalues();

    int genuine = 0;
    Eigen::Index lo = 0;
    while (lo < values.size()) {
        Eigen::Index hi = lo + 1;
        while (hi < values.size() && values(hi) - values(lo) < 1e-8)
            ++hi;
        genuine += kernel_dimension(leak * solver.eigenvectors().middleCols(lo, hi - lo));
        lo = hi;
    }
    return genuine;
}

}  // namespace

EvaporationClassification classify_eigenstates(HalfInt particle_j, HalfInt hole_j)
{
    if (particle_j.twice < 0 || hole_j.twice < 0)
        throw InvalidState("spins must be non-negative");
    const CoupledSpinSpace space = CoupledSpinSpace::build(particle_j, hole_j);
    const HalfInt jp = particle_j;
    const HalfInt j = hole_j;
    const int dim = space.dim();

    EvaporationClassification out;
    out.particle_j = jp;
    out.hole_j = j;

    const auto basis_vector = [&](int twice_mp, int twice_mh) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
        v(flat_index(jp, j, twice_mp, twice_mh)) = 1.0;
        return v;
    };

    if (j.twice == 1) {
        // Spin-1/2 hole: the product space splits into the two irreps
        // j' = jp +- 1/2; report each family by its highest-weight vector.
        out.entries.push_back(make_entry(space, basis_vector(jp.twice, 1), 0.5 * jp.twice * 1.0,
                                         StateClass::HalfIntegerPlus, HalfInt(jp.twice + 1),
                                         HalfInt(jp.twice + 1)));
        if (jp.twice >= 1) {
            const double norm = std::sqrt(static_cast<double>(jp.twice) + 1.0);
            Eigen::VectorXcd v = std::sqrt(static_cast<double>(jp.twice)) *
                                     basis_vector(jp.twice, -1) -
                                 basis_vector(jp.twice - 2, 1);
            v /= norm;
            out.entries.push_back(make_entry(space, std::move(v), -1.0 - jp.value(),
                                             StateClass::HalfIntegerMinus, HalfInt(jp.twice - 1),
                                             HalfInt(jp.twice - 1)));
        }
    } else {
        const double x_standard = jp.value() * j.value() * 2.0;
        out.entries.push_back(make_entry(space, basis_vector(jp.twice, j.twice), x_standard,
                                         StateClass::StandardUp, HalfInt(jp.twice + j.twice),
                                         HalfInt(jp.twice + j.twice)));
        if (jp.twice != 0 || j.twice != 0)
            out.entries.push_back(make_entry(space, basis_vector(-jp.twice, -j.twice),
                                             x_standard, StateClass::StandardDown,
                                             HalfInt(jp.twice + j.twice),
                                             HalfInt(-(jp.twice + j.twice))));
        // Spin-1 hole with an integer-spin particle of jp >= 1 admits the
        // extra zero-weight singlet-like combination.
        if (j.twice == 2 && jp.twice >= 2 && jp.twice % 2 == 0) {
            Eigen::VectorXcd v =
                (basis_vector(-2, 2) - basis_vector(2, -2)) / std::sqrt(2.0);
            out.entries.push_back(make_entry(space, std::move(v), -2.0,
                                             StateClass::AnomalousJ1, jp, HalfInt(0)));
        }
    }

    out.genuine_dimension = genuine_dimension(space);
    return out;
}

EvaporationClassification conservation_filter(const EvaporationClassification& classification,
                                              HalfInt mother_j, double theta, double phi)
{
    if (mother_j.twice < 0)
        throw InvalidState("mother angular momentum is a magnitude and cannot be negative");
    const CoupledSpinSpace space =
        CoupledSpinSpace::build(classification.particle_j, classification.hole_j);
    const Eigen::MatrixXcd rotation = space.joint_rotation(theta, phi);
    const Eigen::MatrixXcd axis_op = space.jtot_axis(theta, phi);

    EvaporationClassification out = classification;
    for (ClassifiedState& entry : out.entries) {
        const Eigen::VectorXcd rotated = rotation * entry.vector;
        entry.axis_residual =
            (axis_op * rotated - entry.mother_m.value() * rotated).norm();
        entry.conserved =
            entry.cls != StateClass::AnomalousJ1 && entry.mother_m == mother_j;
    }
    return out;
}

}  // namespace horizonlab
