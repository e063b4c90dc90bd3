#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "framekit/error.hpp"
#include "framekit/numkernel.hpp"

namespace framekit {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxSweeps = 80;

// Column-major working copy for the Jacobi sweeps.
std::vector<CVector> split_columns(const ComplexMatrix& m) {
    std::vector<CVector> cols(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) cols[j] = m.column(j);
    return cols;
}

// Rotates columns (p, q) of `cols` by J = [[c, s e], [-s conj(e), c]].
void rotate_pair(std::vector<CVector>& cols, std::size_t p, std::size_t q, double c, double s, Complex e) {
    auto& cp = cols[p];
    auto& cq = cols[q];
    const Complex se = s * e;
    const Complex se_bar = s * std::conj(e);
    for (std::size_t k = 0; k < cp.size(); ++k) {
        const Complex a = cp[k];
        const Complex b = cq[k];
        cp[k] = c * a - se_bar * b;
        cq[k] = se * a + c * b;
    }
}

// Hestenes one-sided Jacobi for rows >= cols.
SvdResult svd_tall(const ComplexMatrix& m) {
    const std::size_t rows = m.rows();
    const std::size_t n = m.cols();
    std::vector<CVector> w = split_columns(m);
    std::vector<CVector> v(n, CVector(n));
    for (std::size_t j = 0; j < n; ++j) v[j][j] = 1.0;

    const double threshold = kEps * static_cast<double>(std::max<std::size_t>(rows, 1));
    // Columns at rounding level of the whole matrix are never rotated: their
    // relative orthogonality cannot improve past the noise other rotations add.
    double frob2 = 0.0;
    for (const auto& col : w)
        for (const auto& z : col) frob2 += std::norm(z);
    const double negligible = threshold * threshold * frob2;
    bool converged = n < 2;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = 0.0;
                double beta = 0.0;
                Complex gamma{};
                for (std::size_t k = 0; k < rows; ++k) {
                    alpha += std::norm(w[p][k]);
                    beta += std::norm(w[q][k]);
                    gamma += std::conj(w[p][k]) * w[q][k];
                }
                const double g = std::abs(gamma);
                if (g == 0.0 || g <= threshold * std::sqrt(alpha * beta)) continue;
                if (std::min(alpha, beta) <= negligible) continue;
                rotated = true;
                const Complex e = gamma / g;
                const double zeta = (beta - alpha) / (2.0 * g);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                rotate_pair(w, p, q, c, s, e);
                rotate_pair(v, p, q, c, s, e);
            }
        }
        converged = !rotated;
    }
    if (!converged) {
        throw NumericalFailure("svd: one-sided Jacobi did not converge within " + std::to_string(kMaxSweeps) +
                               " sweeps");
    }

    std::vector<double> sigma(n);
    for (std::size_t j = 0; j < n; ++j) sigma[j] = norm(w[j]);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });

    SvdResult out{ComplexMatrix(rows, n), std::vector<double>(n), ComplexMatrix(n, n)};
    std::vector<CVector> ucols;
    std::vector<std::size_t> missing;
    for (std::size_t jj = 0; jj < n; ++jj) {
        const std::size_t j = order[jj];
        out.s[jj] = sigma[j];
        out.v.set_column(jj, v[j]);
        CVector u(rows);
        if (sigma[j] * sigma[j] > negligible && std::isfinite(1.0 / sigma[j])) {
            for (std::size_t k = 0; k < rows; ++k) u[k] = w[j][k] / sigma[j];
        } else {
            missing.push_back(jj);
        }
        ucols.push_back(std::move(u));
    }

    // Complete left singular vectors of rounding-level singular values with
    // Gram-Schmidt over the standard basis.
    // Orthogonal to every filled column; unfilled ones are still zero.
    const auto orthogonalize = [&](CVector& e) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t other = 0; other < n; ++other) {
                const Complex proj = inner(e, ucols[other]);
                for (std::size_t k = 0; k < rows; ++k) e[k] -= proj * ucols[other][k];
            }
        }
    };
    for (std::size_t jj : missing) {
        CVector best;
        double best_len = -1.0;
        for (std::size_t c = 0; c < rows; ++c) {
            CVector e(rows);
            e[c] = 1.0;
            orthogonalize(e);
            const double len = norm(e);
            if (len > best_len) {
                best_len = len;
                best = std::move(e);
            }
        }
        for (auto& z : best) z /= best_len;
        orthogonalize(best);
        const double len = norm(best);
        for (auto& z : best) z /= len;
        ucols[jj] = std::move(best);
    }
    for (std::size_t jj = 0; jj < n; ++jj) out.u.set_column(jj, ucols[jj]);
    return out;
}

} // namespace

SvdResult svd(const ComplexMatrix& m) {
    if (!m.all_finite()) throw DomainError("svd: non-finite input");
    if (m.rows() >= m.cols()) return svd_tall(m);
    SvdResult t = svd_tall(m.adjoint());
    return SvdResult{std::move(t.v), std::move(t.s), std::move(t.u)};
}

bool is_hermitian(const ComplexMatrix& m, double eq_tol) {
    if (m.rows() != m.cols()) return false;
    const double scale = std::max(1.0, m.max_abs());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.cols(); ++j)
            if (std::abs(m(i, j) - std::conj(m(j, i))) > eq_tol * scale) return false;
    return true;
}

EigenResult eigh(const ComplexMatrix& m, const Tolerance& tol) {
    if (m.rows() != m.cols()) throw DomainError("eigh: matrix is not square");
    if (!m.all_finite()) throw DomainError("eigh: non-finite input");
    if (!is_hermitian(m, tol.eq_tol)) throw DomainError("eigh: matrix is not Hermitian within eq_tol");
    const std::size_t n = m.rows();

    // Work on the exactly Hermitian part.
    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = m(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            const Complex h = 0.5 * (m(i, j) + std::conj(m(j, i)));
            a(i, j) = h;
            a(j, i) = std::conj(h);
        }
    }
    std::vector<CVector> q(n, CVector(n));
    for (std::size_t j = 0; j < n; ++j) q[j][j] = 1.0;

    const double total = a.frobenius_norm();
    auto off_norm = [&] {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) acc += std::norm(a(i, j));
        return std::sqrt(acc);
    };

    int sweep = 0;
    while (total > 0.0 && off_norm() > kEps * total) {
        if (++sweep > kMaxSweeps) throw NumericalFailure("eigh: Jacobi iteration did not converge");
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t r = p + 1; r < n; ++r) {
                const Complex apq = a(p, r);
                const double g = std::abs(apq);
                if (g <= kEps * kEps * total) continue;
                const Complex e = apq / g;
                const double app = a(p, p).real();
                const double aqq = a(r, r).real();
                const double tau = (aqq - app) / (2.0 * g);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                const Complex se = s * e;
                const Complex se_bar = s * std::conj(e);
                // A <- A J, then A <- J^H A with J = [[c, s e], [-s conj(e), c]].
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex x = a(k, p);
                    const Complex y = a(k, r);
                    a(k, p) = c * x - se_bar * y;
                    a(k, r) = se * x + c * y;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex x = a(p, k);
                    const Complex y = a(r, k);
                    a(p, k) = c * x - se * y;
                    a(r, k) = se_bar * x + c * y;
                }
                a(p, r) = 0.0;
                a(r, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(r, r) = a(r, r).real();
                rotate_pair(q, p, r, c, s, e);
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x).real() > a(y, y).real(); });
    EigenResult out{std::vector<double>(n), ComplexMatrix(n, n)};
    for (std::size_t jj = 0; jj < n; ++jj) {
        out.values[jj] = a(order[jj], order[jj]).real();
        out.vectors.set_column(jj, q[order[jj]]);
    }
    return out;
}

std::size_t rank(const ComplexMatrix& m, const Tolerance& tol) {
    if (m.empty()) return 0;
    const SvdResult d = svd(m);
    if (d.s.empty() || d.s.front() == 0.0) return 0;
    const double cutoff = tol.rel_rank_tol * d.s.front();
    return static_cast<std::size_t>(std::count_if(d.s.begin(), d.s.end(), [&](double x) { return x > cutoff; }));
}

ComplexMatrix pinv(const ComplexMatrix& m, const Tolerance& tol) {
    ComplexMatrix out(m.cols(), m.rows());
    if (m.empty()) return out;
    const SvdResult d = svd(m);
    if (d.s.front() == 0.0) return out;
    const double cutoff = tol.rel_rank_tol * d.s.front();
    for (std::size_t k = 0; k < d.s.size() && d.s[k] > cutoff; ++k) {
        const double inv = 1.0 / d.s[k];
        for (std::size_t i = 0; i < m.cols(); ++i) {
            const Complex vi = d.v(i, k) * inv;
            for (std::size_t j = 0; j < m.rows(); ++j) out(i, j) += vi * std::conj(d.u(j, k));
        }
    }
    return out;
}

ComplexMatrix orth(const ComplexMatrix& m, const Tolerance& tol) {
    if (m.empty()) return ComplexMatrix(m.rows(), 0);
    const SvdResult d = svd(m);
    if (d.s.front() == 0.0) return ComplexMatrix(m.rows(), 0);
    const double cutoff = tol.rel_rank_tol * d.s.front();
    std::size_t r = 0;
    while (r < d.s.size() && d.s[r] > cutoff) ++r;
    return d.u.columns(0, r);
}

double spectral_norm(const ComplexMatrix& m) {
    if (m.empty()) return 0.0;
    return svd(m).s.front();
}

ComplexMatrix psd_power(const ComplexMatrix& m, double p, const Tolerance& tol) {
    const EigenResult eig = eigh(m, tol);
    const std::size_t n = m.rows();
    ComplexMatrix out(n, n);
    if (n == 0) return out;
    double radius = 0.0;
    for (double lam : eig.values) radius = std::max(radius, std::abs(lam));
    if (eig.values.back() < -tol.eq_tol * std::max(1.0, radius)) {
        throw DomainError("psd_power: matrix has eigenvalue " + std::to_string(eig.values.back()) +
                          " below -eq_tol");
    }
    const double cutoff = tol.rel_rank_tol * radius;
    for (std::size_t k = 0; k < n; ++k) {
        const double lam = eig.values[k];
        if (!(lam > cutoff)) continue;
        const double f = std::pow(lam, p);
        for (std::size_t i = 0; i < n; ++i) {
            const Complex qi = f * eig.vectors(i, k);
            for (std::size_t j = 0; j < n; ++j) out(i, j) += qi * std::conj(eig.vectors(j, k));
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        out(i, i) = out(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            const Complex h = 0.5 * (out(i, j) + std::conj(out(j, i)));
            out(i, j) = h;
            out(j, i) = std::conj(h);
        }
    }
    return out;
}

ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw ShapeError("solve: coefficient matrix is not square");
    if (b.rows() != n) throw ShapeError("solve: right-hand side has wrong row count");
    ComplexMatrix lu = a;
    ComplexMatrix x = b;
    const double scale = a.max_abs();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(lu(i, k)) > std::abs(lu(piv, k))) piv = i;
        if (std::abs(lu(piv, k)) <= kEps * scale * static_cast<double>(n) || scale == 0.0) {
            throw DomainError("solve: matrix is singular to working precision");
        }
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
            for (std::size_t j = 0; j < x.cols(); ++j) std::swap(x(k, j), x(piv, j));
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex f = lu(i, k) / lu(k, k);
            if (f == Complex{}) continue;
            for (std::size_t j = k; j < n; ++j) lu(i, j) -= f * lu(k, j);
            for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) -= f * x(k, j);
        }
    }
    for (std::size_t kk = n; kk-- > 0;) {
        for (std::size_t j = 0; j < x.cols(); ++j) {
            Complex acc = x(kk, j);
            for (std::size_t i = kk + 1; i < n; ++i) acc -= lu(kk, i) * x(i, j);
            x(kk, j) = acc / lu(kk, kk);
        }
    }
    return x;
}

} // namespace framekit
