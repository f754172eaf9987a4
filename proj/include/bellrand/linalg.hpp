#ifndef BELLRAND_LINALG_HPP
#define BELLRAND_LINALG_HPP

#include <span>
#include <vector>

namespace bellrand {

/// Dense symmetric/square matrix, row-major full storage. Small sizes only
/// (the solver works on blocks of at most a few dozen rows), so everything
/// here is plain loops: deterministic, no pivoting, no blocking.
struct Mat {
    int n = 0;
    std::vector<double> a;

    Mat() = default;
    explicit Mat(int size) : n(size), a(static_cast<size_t>(size) * size, 0.0) {}
    double& operator()(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }

    static Mat identity(int size);
    void symmetrize();
};

Mat matmul(const Mat& x, const Mat& y);
Mat transpose(const Mat& x);
double frob_inner(const Mat& x, const Mat& y);

/// In-place lower Cholesky; returns false if a nonpositive pivot appears.
bool cholesky_in_place(Mat& m);

/// Solve L L^T x = b given the lower factor.
void cholesky_solve(const Mat& low, std::span<double> x);

/// L^{-1} for a lower-triangular factor (forward substitution on columns).
Mat lower_inverse(const Mat& low);

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
/// Eigenvalues ascending in `values`; columns of `vectors` are the
/// eigenvectors when `vectors` is non-null.
void jacobi_eigen(Mat a, std::vector<double>& values, Mat* vectors);

double min_eigenvalue(const Mat& sym);

}  // namespace bellrand

#endif
