#ifndef BELLRAND_QUANTUM_HPP
#define BELLRAND_QUANTUM_HPP

#include <array>
#include <complex>

#include "bellrand/scenario.hpp"

namespace bellrand {

using c64 = std::complex<double>;

/// 2x2 complex matrix, row-major.
struct Mat2 {
    std::array<c64, 4> a{};

    c64& operator()(int i, int j) { return a[i * 2 + j]; }
    c64 operator()(int i, int j) const { return a[i * 2 + j]; }

    static Mat2 identity();
    static Mat2 pauli_z();
    static Mat2 pauli_x();

    Mat2 adjoint() const;
    bool is_hermitian(double tol = 1e-14) const;
    /// squares to the identity within tol (binary +/-1 observable)
    bool is_involution(double tol = 1e-12) const;
};

Mat2 operator*(const Mat2& x, const Mat2& y);
Mat2 operator+(const Mat2& x, const Mat2& y);
Mat2 operator-(const Mat2& x, const Mat2& y);
Mat2 operator*(double s, const Mat2& x);

/// 4x4 complex matrix, row-major.
struct Mat4 {
    std::array<c64, 16> a{};

    c64& operator()(int i, int j) { return a[i * 4 + j]; }
    c64 operator()(int i, int j) const { return a[i * 4 + j]; }

    static Mat4 identity();
    Mat4 adjoint() const;
    c64 trace() const;
};

Mat4 operator*(const Mat4& x, const Mat4& y);
Mat4 operator+(const Mat4& x, const Mat4& y);
Mat4 operator*(double s, const Mat4& x);
Mat4 kron(const Mat2& x, const Mat2& y);

/// Two-qubit density matrix: Hermitian (1e-14), unit trace (1e-12),
/// smallest eigenvalue >= -1e-12.
struct DensityMatrix4 {
    Mat4 m;

    bool valid(double* worst = nullptr) const;
    /// eigenvalues, ascending (via the real symmetric embedding)
    std::array<double, 4> eigenvalues() const;
};

/// State plus one binary observable per party per setting.
struct QuantumModel {
    DensityMatrix4 state;
    std::array<Mat2, 2> alice_obs;
    std::array<Mat2, 2> bob_obs;
};

/// V |phi+><phi+| + (1-V) I/4. Throws for V outside [0,1].
DensityMatrix4 white_noise_state(double visibility);

/// p |phi+><phi+| + (1-p) (|00><00| + |11><11|)/2. The separable part is
/// divided by two so the result has unit trace. Throws for p outside [0,1].
DensityMatrix4 dephasing_state(double p);

/// A0 = sz, A1 = sx, B_y = (sz + (-1)^y sx)/sqrt(2). The 1/sqrt(2)
/// normalization makes each B_y square to the identity.
std::pair<std::array<Mat2, 2>, std::array<Mat2, 2>> chsh_optimal_settings_white();

/// A0 = sz, A1 = sx, B_y = cos(chi) sz + (-1)^y sin(chi) sx with
/// chi = arctan(p).
std::pair<std::array<Mat2, 2>, std::array<Mat2, 2>> chsh_optimal_settings_dephasing(double p);

QuantumModel white_noise_model(double visibility);
QuantumModel dephasing_model(double p);

/// Born rule: P(ab|xy) = Tr[rho (Pi_a^x (x) Pi_b^y)] with projectors built
/// in closed form from the +/-1 observables (Pi_0 is the +1 projector).
/// Throws if an observable does not square to the identity.
Behavior behavior_from_model(const QuantumModel& m);

/// Tr[rho (P (x) Q)], real part.
double pair_expectation(const Mat4& rho, const Mat2& p, const Mat2& q);

}  // namespace bellrand

#endif
