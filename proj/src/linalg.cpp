#include "ccd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ccd {

std::vector<double> solve_dense(Matrix a, std::vector<double> b, double pivot_tol) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n)
        throw std::invalid_argument("solve_dense: dimension mismatch");

    // Row equilibration so the pivot threshold is scale-free.
    std::vector<double> scale(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s = std::max(s, std::abs(a(i, j)));
        if (s == 0.0) throw SingularSystemError("solve_dense: zero row " + std::to_string(i), i);
        scale[i] = 1.0 / s;
    }

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(a(perm[k], k)) * scale[perm[k]];
        for (std::size_t i = k + 1; i < n; ++i) {
            const double cand = std::abs(a(perm[i], k)) * scale[perm[i]];
            if (cand > best) {
                best = cand;
                piv = i;
            }
        }
        if (best <= pivot_tol)
            throw SingularSystemError("solve_dense: singular pivot at column " + std::to_string(k),
                                      k);
        std::swap(perm[k], perm[piv]);
        const std::size_t rk = perm[k];
        const double inv_piv = 1.0 / a(rk, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const std::size_t ri = perm[i];
            const double m = a(ri, k) * inv_piv;
            if (m == 0.0) continue;
            a(ri, k) = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) a(ri, j) -= m * a(rk, j);
            b[ri] -= m * b[rk];
        }
    }

    std::vector<double> x(n, 0.0);
    for (std::size_t k = n; k-- > 0;) {
        const std::size_t rk = perm[k];
        double acc = b[rk];
        for (std::size_t j = k + 1; j < n; ++j) acc -= a(rk, j) * x[j];
        x[k] = acc / a(rk, k);
    }
    return x;
}

std::vector<double> solve_normal_equations(const Matrix& a, const std::vector<double>& r,
                                           double lambda) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (r.size() != m) throw std::invalid_argument("solve_normal_equations: dimension mismatch");

    Matrix ata(n, n);
    std::vector<double> rhs(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double aij = a(i, j);
            if (aij == 0.0) continue;
            rhs[j] -= aij * r[i];
            for (std::size_t k = j; k < n; ++k) ata(j, k) += aij * a(i, k);
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        ata(j, j) += lambda;
        for (std::size_t k = 0; k < j; ++k) ata(j, k) = ata(k, j);
    }
    return solve_dense(std::move(ata), std::move(rhs));
}

std::vector<double> jacobi_eigenvalues(Matrix sym, Matrix* vectors, int max_sweeps) {
    const std::size_t n = sym.rows();
    if (sym.cols() != n) throw std::invalid_argument("jacobi_eigenvalues: matrix not square");

    Matrix v(n, n);
    for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += sym(p, q) * sym(p, q);
        if (off < 1e-300) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = sym(p, q);
                if (apq == 0.0) continue;
                const double app = sym(p, p);
                const double aqq = sym(q, q);
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = sym(k, p);
                    const double akq = sym(k, q);
                    sym(k, p) = c * akp - s * akq;
                    sym(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = sym(p, k);
                    const double aqk = sym(q, k);
                    sym(p, k) = c * apk - s * aqk;
                    sym(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return sym(i, i) < sym(j, j); });

    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = sym(order[i], order[i]);
    if (vectors) {
        *vectors = Matrix(n, n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) (*vectors)(i, j) = v(i, order[j]);
    }
    return eig;
}

double condition_estimate(const Matrix& a) {
    const std::size_t n = a.cols();
    Matrix ata(n, n);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double aij = a(i, j);
            if (aij == 0.0) continue;
            for (std::size_t k = j; k < n; ++k) ata(j, k) += aij * a(i, k);
        }
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < j; ++k) ata(j, k) = ata(k, j);

    const std::vector<double> eig = jacobi_eigenvalues(std::move(ata));
    const double lam_max = std::max(eig.back(), 0.0);
    const double lam_min = std::max(eig.front(), 0.0);
    if (lam_min <= lam_max * 1e-300) return std::numeric_limits<double>::infinity();
    return std::sqrt(lam_max / lam_min);
}

std::vector<double> matvec(const Matrix& a, const std::vector<double>& x) {
    if (x.size() != a.cols()) throw std::invalid_argument("matvec: dimension mismatch");
    std::vector<double> y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
        y[i] = acc;
    }
    return y;
}

double norm_inf(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace ccd
