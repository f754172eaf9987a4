#include "bellrand/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace bellrand {

Mat Mat::identity(int size) {
    Mat m(size);
    for (int i = 0; i < size; ++i) m(i, i) = 1.0;
    return m;
}

void Mat::symmetrize() {
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) {
            const double v = 0.5 * ((*this)(i, j) + (*this)(j, i));
            (*this)(i, j) = v;
            (*this)(j, i) = v;
        }
}

Mat matmul(const Mat& x, const Mat& y) {
    Mat out(x.n);
    for (int i = 0; i < x.n; ++i)
        for (int k = 0; k < x.n; ++k) {
            const double v = x(i, k);
            if (v == 0.0) continue;
            const double* yr = &y.a[static_cast<size_t>(k) * y.n];
            double* orow = &out.a[static_cast<size_t>(i) * out.n];
            for (int j = 0; j < x.n; ++j) orow[j] += v * yr[j];
        }
    return out;
}

Mat transpose(const Mat& x) {
    Mat out(x.n);
    for (int i = 0; i < x.n; ++i)
        for (int j = 0; j < x.n; ++j) out(j, i) = x(i, j);
    return out;
}

double frob_inner(const Mat& x, const Mat& y) {
    double s = 0.0;
    const size_t nn = x.a.size();
    for (size_t i = 0; i < nn; ++i) s += x.a[i] * y.a[i];
    return s;
}

bool cholesky_in_place(Mat& m) {
    const int n = m.n;
    for (int j = 0; j < n; ++j) {
        double d = m(j, j);
        for (int k = 0; k < j; ++k) d -= m(j, k) * m(j, k);
        if (!(d > 0.0)) return false;
        const double dj = std::sqrt(d);
        m(j, j) = dj;
        for (int i = j + 1; i < n; ++i) {
            double s = m(i, j);
            for (int k = 0; k < j; ++k) s -= m(i, k) * m(j, k);
            m(i, j) = s / dj;
        }
    }
    // zero the strict upper triangle so the factor can be used directly
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) m(i, j) = 0.0;
    return true;
}

void cholesky_solve(const Mat& low, std::span<double> x) {
    const int n = low.n;
    for (int i = 0; i < n; ++i) {
        double s = x[i];
        for (int k = 0; k < i; ++k) s -= low(i, k) * x[k];
        x[i] = s / low(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = x[i];
        for (int k = i + 1; k < n; ++k) s -= low(k, i) * x[k];
        x[i] = s / low(i, i);
    }
}

Mat lower_inverse(const Mat& low) {
    const int n = low.n;
    Mat inv(n);
    for (int j = 0; j < n; ++j) {
        inv(j, j) = 1.0 / low(j, j);
        for (int i = j + 1; i < n; ++i) {
            double s = 0.0;
            for (int k = j; k < i; ++k) s += low(i, k) * inv(k, j);
            inv(i, j) = -s / low(i, i);
        }
    }
    return inv;
}

void jacobi_eigen(Mat a, std::vector<double>& values, Mat* vectors) {
    const int n = a.n;
    Mat v = Mat::identity(n);
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (off <= 1e-300) break;
        double thresh = (sweep < 3) ? 0.2 * off / (n * n) : 0.0;
        bool rotated = false;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                const double scale = 100.0 * std::abs(apq);
                if (sweep > 3 && std::abs(a(p, p)) + scale == std::abs(a(p, p)) &&
                    std::abs(a(q, q)) + scale == std::abs(a(q, q))) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                if (apq * apq <= thresh) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e155) {
                    t = 1.0 / (2.0 * theta);
                } else {
                    t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const double tau = s / (1.0 + c);
                const double h = t * apq;
                a(p, p) -= h;
                a(q, q) += h;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (int k = 0; k < n; ++k) {
                    if (k != p && k != q) {
                        const double akp = a(k, p), akq = a(k, q);
                        a(k, p) = akp - s * (akq + tau * akp);
                        a(p, k) = a(k, p);
                        a(k, q) = akq + s * (akp - tau * akq);
                        a(q, k) = a(k, q);
                    }
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp - s * (vkq + tau * vkp);
                    v(k, q) = vkq + s * (vkp - tau * vkq);
                }
                rotated = true;
            }
        }
        if (!rotated && sweep >= 4) break;
    }
    values.resize(n);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) diag[i] = a(i, i);
    std::sort(order.begin(), order.end(),
              [&diag](int i, int j) { return diag[i] < diag[j]; });
    for (int i = 0; i < n; ++i) values[i] = diag[order[i]];
    if (vectors) {
        *vectors = Mat(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) (*vectors)(i, j) = v(i, order[j]);
    }
}

double min_eigenvalue(const Mat& sym) {
    std::vector<double> vals;
    jacobi_eigen(sym, vals, nullptr);
    return vals.front();
}

}  // namespace bellrand
