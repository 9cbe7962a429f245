#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace nlbem {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using cplx = std::complex<double>;
using CVec3 = Eigen::Matrix<cplx, 3, 1>;

// Plain cross product for complex vectors. Eigen's cross() conjugates
// complex results, which is not what the field formulas need.
inline CVec3 ccross(const CVec3& a, const CVec3& b)
{
    return CVec3(a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]);
}

// Bad input: malformed files, parameters out of range, unsupported requests.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The numerics broke down (singular system, Newton failure, non-finite data).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Assembly loops come in two flavours: a plain serial reference and the
// OpenMP version used in production. Tests compare the two.
enum class Execution { serial, parallel };

}// namespace nlbem
