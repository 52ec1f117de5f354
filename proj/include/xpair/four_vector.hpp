#pragma once

#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Geometry>

namespace xpair {

// Four-vectors are stored (t, x, y, z) and contracted with signature (-+++),
// so an on-shell electron has p.p = -1 and a photon k.k = 0.

template <typename Scalar>
using FourVector = Eigen::Matrix<Scalar, 4, 1>;

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar minkowski_dot(const Eigen::MatrixBase<DerivedA>& a,
                                        const Eigen::MatrixBase<DerivedB>& b)
{
    return -a(0) * b(0) + a.template tail<3>().dot(b.template tail<3>());
}

template <typename Derived>
typename Derived::Scalar minkowski_norm2(const Eigen::MatrixBase<Derived>& a)
{
    return minkowski_dot(a, a);
}

template <typename Scalar>
FourVector<Scalar> make_four_vector(Scalar t, const Vector3<Scalar>& space)
{
    FourVector<Scalar> v;
    v << t, space;
    return v;
}

//! Massless four-vector of the given energy along a unit direction.
template <typename Scalar>
FourVector<Scalar> photon_four_vector(Scalar energy, const Vector3<Scalar>& direction)
{
    return make_four_vector<Scalar>(energy, energy * direction);
}

//! Unit vector for polar angle theta and azimuth phi about +z.
template <typename Scalar>
Vector3<Scalar> unit_from_angles(Scalar theta, Scalar phi)
{
    using std::cos;
    using std::sin;
    return Vector3<Scalar>(sin(theta) * cos(phi), sin(theta) * sin(phi), cos(theta));
}

/*!
 * Components of v in the frame moving with velocity beta (|beta| < 1)
 * relative to the frame in which v is given.
 */
template <typename Scalar>
FourVector<Scalar> boost_into(const FourVector<Scalar>& v, const Vector3<Scalar>& beta)
{
    using std::sqrt;
    const Scalar b2 = beta.squaredNorm();
    if (b2 == Scalar(0))
        return v;
    const Scalar gamma = Scalar(1) / sqrt(Scalar(1) - b2);
    const Vector3<Scalar> x = v.template tail<3>();
    const Scalar bx = beta.dot(x);
    FourVector<Scalar> out;
    out(0) = gamma * (v(0) - bx);
    out.template tail<3>() = x + ((gamma - Scalar(1)) * bx / b2 - gamma * v(0)) * beta;
    return out;
}

//! Rotation taking +z onto the given unit axis.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> rotation_from_z(const Vector3<Scalar>& axis)
{
    return Eigen::Quaternion<Scalar>::FromTwoVectors(Vector3<Scalar>::UnitZ(), axis)
        .toRotationMatrix();
}

} // namespace xpair
