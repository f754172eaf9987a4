#include "bellrand/quantum.hpp"

#include <cmath>
#include <stdexcept>

#include "bellrand/linalg.hpp"

namespace bellrand {

Mat2 Mat2::identity() {
    Mat2 m;
    m(0, 0) = 1.0;
    m(1, 1) = 1.0;
    return m;
}

Mat2 Mat2::pauli_z() {
    Mat2 m;
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

Mat2 Mat2::pauli_x() {
    Mat2 m;
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}

Mat2 Mat2::adjoint() const {
    Mat2 m;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m(i, j) = std::conj((*this)(j, i));
    return m;
}

bool Mat2::is_hermitian(double tol) const {
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
    return true;
}

bool Mat2::is_involution(double tol) const {
    const Mat2 sq = (*this) * (*this);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const c64 want = (i == j) ? c64{1.0, 0.0} : c64{0.0, 0.0};
            if (std::abs(sq(i, j) - want) > tol) return false;
        }
    return true;
}

Mat2 operator*(const Mat2& x, const Mat2& y) {
    Mat2 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out(i, j) = x(i, 0) * y(0, j) + x(i, 1) * y(1, j);
    return out;
}

Mat2 operator+(const Mat2& x, const Mat2& y) {
    Mat2 out;
    for (int i = 0; i < 4; ++i) out.a[i] = x.a[i] + y.a[i];
    return out;
}

Mat2 operator-(const Mat2& x, const Mat2& y) {
    Mat2 out;
    for (int i = 0; i < 4; ++i) out.a[i] = x.a[i] - y.a[i];
    return out;
}

Mat2 operator*(double s, const Mat2& x) {
    Mat2 out;
    for (int i = 0; i < 4; ++i) out.a[i] = s * x.a[i];
    return out;
}

Mat4 Mat4::identity() {
    Mat4 m;
    for (int i = 0; i < 4; ++i) m(i, i) = 1.0;
    return m;
}

Mat4 Mat4::adjoint() const {
    Mat4 m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) = std::conj((*this)(j, i));
    return m;
}

c64 Mat4::trace() const {
    return (*this)(0, 0) + (*this)(1, 1) + (*this)(2, 2) + (*this)(3, 3);
}

Mat4 operator*(const Mat4& x, const Mat4& y) {
    Mat4 out;
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) {
            const c64 v = x(i, k);
            for (int j = 0; j < 4; ++j) out(i, j) += v * y(k, j);
        }
    return out;
}

Mat4 operator+(const Mat4& x, const Mat4& y) {
    Mat4 out;
    for (int i = 0; i < 16; ++i) out.a[i] = x.a[i] + y.a[i];
    return out;
}

Mat4 operator*(double s, const Mat4& x) {
    Mat4 out;
    for (int i = 0; i < 16; ++i) out.a[i] = s * x.a[i];
    return out;
}

Mat4 kron(const Mat2& x, const Mat2& y) {
    Mat4 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    out(i * 2 + k, j * 2 + l) = x(i, j) * y(k, l);
    return out;
}

std::array<double, 4> DensityMatrix4::eigenvalues() const {
    // real symmetric embedding [[Re, -Im], [Im, Re]]: each eigenvalue of the
    // Hermitian matrix appears twice
    Mat emb(8);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            emb(i, j) = m(i, j).real();
            emb(i + 4, j + 4) = m(i, j).real();
            emb(i, j + 4) = -m(i, j).imag();
            emb(i + 4, j) = m(i, j).imag();
        }
    emb.symmetrize();
    std::vector<double> vals;
    jacobi_eigen(emb, vals, nullptr);
    return {vals[0], vals[2], vals[4], vals[6]};
}

bool DensityMatrix4::valid(double* worst) const {
    double bad = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            bad = std::max(bad, std::abs(m(i, j) - std::conj(m(j, i))) - 1e-14);
    const double trerr = std::abs(m.trace() - c64{1.0, 0.0});
    bad = std::max(bad, trerr - 1e-12);
    const double mineig = eigenvalues()[0];
    bad = std::max(bad, -mineig - 1e-12);
    if (worst) *worst = bad;
    return bad <= 0.0;
}

namespace {

Mat4 phi_plus_projector() {
    // |phi+> = (|00> + |11>)/sqrt(2)
    Mat4 m;
    const double h = 0.5;
    m(0, 0) = h;
    m(0, 3) = h;
    m(3, 0) = h;
    m(3, 3) = h;
    return m;
}

}  // namespace

DensityMatrix4 white_noise_state(double visibility) {
    if (!(visibility >= 0.0 && visibility <= 1.0))
        throw std::invalid_argument("visibility must lie in [0,1]");
    DensityMatrix4 rho;
    rho.m = visibility * phi_plus_projector() + ((1.0 - visibility) / 4.0) * Mat4::identity();
    return rho;
}

DensityMatrix4 dephasing_state(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0,1]");
    Mat4 sep;
    sep(0, 0) = 0.5;
    sep(3, 3) = 0.5;
    DensityMatrix4 rho;
    rho.m = p * phi_plus_projector() + (1.0 - p) * sep;
    return rho;
}

std::pair<std::array<Mat2, 2>, std::array<Mat2, 2>> chsh_optimal_settings_white() {
    const double r = 1.0 / std::sqrt(2.0);
    std::array<Mat2, 2> alice{Mat2::pauli_z(), Mat2::pauli_x()};
    std::array<Mat2, 2> bob{r * (Mat2::pauli_z() + Mat2::pauli_x()),
                            r * (Mat2::pauli_z() - Mat2::pauli_x())};
    return {alice, bob};
}

std::pair<std::array<Mat2, 2>, std::array<Mat2, 2>> chsh_optimal_settings_dephasing(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0,1]");
    const double chi = std::atan(p);
    const double cc = std::cos(chi), ss = std::sin(chi);
    std::array<Mat2, 2> alice{Mat2::pauli_z(), Mat2::pauli_x()};
    std::array<Mat2, 2> bob{cc * Mat2::pauli_z() + ss * Mat2::pauli_x(),
                            cc * Mat2::pauli_z() - ss * Mat2::pauli_x()};
    return {alice, bob};
}

QuantumModel white_noise_model(double visibility) {
    auto [alice, bob] = chsh_optimal_settings_white();
    return {white_noise_state(visibility), alice, bob};
}

QuantumModel dephasing_model(double p) {
    auto [alice, bob] = chsh_optimal_settings_dephasing(p);
    return {dephasing_state(p), alice, bob};
}

double pair_expectation(const Mat4& rho, const Mat2& p, const Mat2& q) {
    return (rho * kron(p, q)).trace().real();
}

namespace {

// closed-form +/-1 eigenprojectors of an involutive Hermitian 2x2 matrix:
// Pi_+/- = (I +/- A)/2
std::array<Mat2, 2> projectors(const Mat2& obs) {
    if (!obs.is_hermitian() || !obs.is_involution())
        throw std::invalid_argument("observable is not an involutive Hermitian matrix");
    const Mat2 id = Mat2::identity();
    return {0.5 * (id + obs), 0.5 * (id - obs)};
}

}  // namespace

Behavior behavior_from_model(const QuantumModel& m) {
    const auto pa0 = projectors(m.alice_obs[0]);
    const auto pa1 = projectors(m.alice_obs[1]);
    const auto pb0 = projectors(m.bob_obs[0]);
    const auto pb1 = projectors(m.bob_obs[1]);
    const std::array<std::array<Mat2, 2>, 2> pa{pa0, pa1};
    const std::array<std::array<Mat2, 2>, 2> pb{pb0, pb1};
    Behavior out;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    out.at(a, b, x, y) = pair_expectation(m.state.m, pa[x][a], pb[y][b]);
    return out;
}

}  // namespace bellrand
