// Small dense complex linear algebra for 2x2 blocks and 4x4 block matrices.
// The scattering objects in this code are 4x4 matrices with a natural 2x2
// block structure (upper/lower spinor components), so everything is kept
// in that form instead of using a general matrix library.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace bhscat {

using cplx = std::complex<double>;

constexpr cplx I_UNIT{0.0, 1.0};

// Row-major 2x2 complex matrix.
struct Mat2 {
  std::array<cplx, 4> e{};  // e[0] e[1]; e[2] e[3]

  static Mat2 zero() { return {}; }
  static Mat2 identity() { return Mat2{{cplx(1), cplx(0), cplx(0), cplx(1)}}; }
  static Mat2 diag(cplx a, cplx d) { return Mat2{{a, cplx(0), cplx(0), d}}; }

  cplx& operator()(int i, int j) { return e[2 * i + j]; }
  cplx operator()(int i, int j) const { return e[2 * i + j]; }

  Mat2 operator+(const Mat2& o) const {
    return Mat2{{e[0] + o.e[0], e[1] + o.e[1], e[2] + o.e[2], e[3] + o.e[3]}};
  }
  Mat2 operator-(const Mat2& o) const {
    return Mat2{{e[0] - o.e[0], e[1] - o.e[1], e[2] - o.e[2], e[3] - o.e[3]}};
  }
  Mat2 operator*(const Mat2& o) const {
    return Mat2{{e[0] * o.e[0] + e[1] * o.e[2], e[0] * o.e[1] + e[1] * o.e[3],
                 e[2] * o.e[0] + e[3] * o.e[2], e[2] * o.e[1] + e[3] * o.e[3]}};
  }
  Mat2 operator*(cplx s) const { return Mat2{{e[0] * s, e[1] * s, e[2] * s, e[3] * s}}; }
  Mat2 operator-() const { return Mat2{{-e[0], -e[1], -e[2], -e[3]}}; }
  Mat2& operator+=(const Mat2& o) {
    for (int i = 0; i < 4; ++i) e[i] += o.e[i];
    return *this;
  }
  Mat2& operator-=(const Mat2& o) {
    for (int i = 0; i < 4; ++i) e[i] -= o.e[i];
    return *this;
  }
  Mat2& operator*=(cplx s) {
    for (auto& v : e) v *= s;
    return *this;
  }

  Mat2 adjoint() const {
    return Mat2{{std::conj(e[0]), std::conj(e[2]), std::conj(e[1]), std::conj(e[3])}};
  }
  Mat2 conj() const {
    return Mat2{{std::conj(e[0]), std::conj(e[1]), std::conj(e[2]), std::conj(e[3])}};
  }
  Mat2 transpose() const { return Mat2{{e[0], e[2], e[1], e[3]}}; }

  cplx det() const { return e[0] * e[3] - e[1] * e[2]; }
  cplx trace() const { return e[0] + e[3]; }

  Mat2 inverse() const {
    cplx d = det();
    if (std::abs(d) == 0.0) throw std::domain_error("Mat2::inverse: singular matrix");
    cplx s = cplx(1) / d;
    return Mat2{{e[3] * s, -e[1] * s, -e[2] * s, e[0] * s}};
  }

  double frobenius() const {
    double s = 0;
    for (const auto& v : e) s += std::norm(v);
    return std::sqrt(s);
  }

  // Operator 2-norm: largest singular value, closed form for 2x2.
  double norm2() const {
    // singular values from eigenvalues of A^* A (2x2 Hermitian)
    double a = std::norm(e[0]) + std::norm(e[2]);
    double d = std::norm(e[1]) + std::norm(e[3]);
    cplx b = std::conj(e[0]) * e[1] + std::conj(e[2]) * e[3];
    double tr = a + d;
    double disc = std::sqrt(std::max(0.0, (a - d) * (a - d) / 4.0 + std::norm(b)));
    return std::sqrt(std::max(0.0, tr / 2.0 + disc));
  }
};

inline Mat2 operator*(cplx s, const Mat2& m) { return m * s; }

// 4x4 complex matrix stored as four 2x2 blocks [[b11 b12];[b21 b22]].
struct Block4 {
  Mat2 b11, b12, b21, b22;

  static Block4 identity() {
    return {Mat2::identity(), Mat2::zero(), Mat2::zero(), Mat2::identity()};
  }
  static Block4 zero() { return {}; }

  Block4 operator+(const Block4& o) const {
    return {b11 + o.b11, b12 + o.b12, b21 + o.b21, b22 + o.b22};
  }
  Block4 operator-(const Block4& o) const {
    return {b11 - o.b11, b12 - o.b12, b21 - o.b21, b22 - o.b22};
  }
  Block4 operator*(const Block4& o) const {
    return {b11 * o.b11 + b12 * o.b21, b11 * o.b12 + b12 * o.b22,
            b21 * o.b11 + b22 * o.b21, b21 * o.b12 + b22 * o.b22};
  }
  Block4 operator*(cplx s) const { return {b11 * s, b12 * s, b21 * s, b22 * s}; }

  Block4 adjoint() const {
    return {b11.adjoint(), b21.adjoint(), b12.adjoint(), b22.adjoint()};
  }

  double frobenius() const {
    double s = b11.frobenius() * b11.frobenius() + b12.frobenius() * b12.frobenius() +
               b21.frobenius() * b21.frobenius() + b22.frobenius() * b22.frobenius();
    return std::sqrt(s);
  }

  // Right-multiply by diag(e^{-i xi h} I2, e^{+i xi h} I2): scales block columns.
  void scale_columns(cplx up, cplx dn) {
    b11 *= up;
    b21 *= up;
    b12 *= dn;
    b22 *= dn;
  }
};

// 2-component complex vectors for packet components.
struct Vec2 {
  cplx u{}, v{};
  Vec2 operator+(const Vec2& o) const { return {u + o.u, v + o.v}; }
  Vec2 operator*(cplx s) const { return {u * s, v * s}; }
};

inline Vec2 operator*(const Mat2& m, const Vec2& x) {
  return {m.e[0] * x.u + m.e[1] * x.v, m.e[2] * x.u + m.e[3] * x.v};
}

// Hermitian inner product <x, y> = sum x_i conj(y_i)  (conjugate on second slot).
inline cplx dot(const Vec2& x, const Vec2& y) {
  return x.u * std::conj(y.u) + x.v * std::conj(y.v);
}

}  // namespace bhscat
