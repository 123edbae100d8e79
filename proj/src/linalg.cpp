// linalg.cpp — matrix exponential and LAPACK eigensolver wrapper

#include "kerr/linalg.hpp"

#include <lapacke.h>

#include <array>
#include <cmath>
#include <string>

#include "kerr/errors.hpp"

namespace kerr::linalg {

namespace {

bool all_finite(const Matrix& m)
{
    return m.allFinite();
}

// Diagonal Pade numerator/denominator coefficients (Higham 2005).
constexpr std::array<double, 4> kPade3{120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7{17297280.0, 8648640.0, 1995840.0, 277200.0,
                                       25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kPade9{17643225600.0, 8821612800.0, 2075673600.0,
                                        302702400.0,   30270240.0,   2162160.0,
                                        110880.0,      3960.0,       90.0,
                                        1.0};
constexpr std::array<double, 14> kPade13{
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

// Low-degree approximant: U = A * sum_odd b_k A^{k-1}, V = sum_even b_k A^k.
template <std::size_t N>
void pade_low(const Matrix& a, const std::array<double, N>& b, Matrix& u, Matrix& v)
{
    const Eigen::Index n = a.rows();
    const Matrix ident = Matrix::Identity(n, n);
    const Matrix a2 = a * a;
    Matrix odd = b[1] * ident;
    Matrix even = b[0] * ident;
    Matrix power = ident;
    for (std::size_t k = 2; k < N; k += 2) {
        power = (power * a2).eval();
        even.noalias() += b[k] * power;
        if (k + 1 < N) odd.noalias() += b[k + 1] * power;
    }
    u.noalias() = a * odd;
    v = std::move(even);
}

void pade13(const Matrix& a, Matrix& u, Matrix& v)
{
    const auto& b = kPade13;
    const Eigen::Index n = a.rows();
    const Matrix ident = Matrix::Identity(n, n);
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a4 * a2;
    Matrix tmp = b[13] * a6 + b[11] * a4 + b[9] * a2;
    Matrix inner = a6 * tmp;
    inner.noalias() += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident;
    u.noalias() = a * inner;
    tmp = b[12] * a6 + b[10] * a4 + b[8] * a2;
    v.noalias() = a6 * tmp;
    v.noalias() += b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
}

} // namespace

double one_norm(const Matrix& a)
{
    return a.cwiseAbs().colwise().sum().maxCoeff();
}

Matrix expm_pade(const Matrix& a)
{
    if (a.rows() != a.cols()) throw DimensionMismatch("expm of a non-square matrix");
    const double norm = one_norm(a);
    if (!std::isfinite(norm)) throw ExpFailure("matrix has non-finite entries");

    Matrix u;
    Matrix v;
    int squarings = 0;
    if (norm <= kTheta3) {
        pade_low(a, kPade3, u, v);
    } else if (norm <= kTheta5) {
        pade_low(a, kPade5, u, v);
    } else if (norm <= kTheta7) {
        pade_low(a, kPade7, u, v);
    } else if (norm <= kTheta9) {
        pade_low(a, kPade9, u, v);
    } else {
        squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
        const Matrix scaled = a * std::ldexp(1.0, -squarings);
        pade13(scaled, u, v);
    }

    // r = (V - U)^{-1} (V + U)
    Eigen::PartialPivLU<Matrix> lu(v - u);
    Matrix r = lu.solve(v + u);
    for (int i = 0; i < squarings; ++i) r = (r * r).eval();
    if (!all_finite(r)) throw ExpFailure("Pade scaling-and-squaring produced non-finite entries");
    return r;
}

std::optional<Matrix> expm_eigen(const Matrix& a, double max_condition)
{
    if (a.rows() != a.cols()) throw DimensionMismatch("expm of a non-square matrix");
    EigenResult er;
    try {
        er = eig(a, true);
    } catch (const EigenFailure&) {
        return std::nullopt;
    }
    Eigen::PartialPivLU<Matrix> lu(er.vectors);
    const Matrix inv = lu.inverse();
    const double cond = one_norm(er.vectors) * one_norm(inv);
    if (!std::isfinite(cond) || cond >= max_condition) return std::nullopt;
    const Vector expo = er.values.array().exp().matrix();
    Matrix r = er.vectors * expo.asDiagonal() * inv;
    if (!all_finite(r)) return std::nullopt;
    return r;
}

Matrix expm(const Matrix& a)
{
    try {
        return expm_pade(a);
    } catch (const ExpFailure&) {
        if (auto r = expm_eigen(a)) return *r;
        throw ExpFailure("neither Pade nor eigendecomposition exponential converged");
    }
}

EigenResult eig(const Matrix& a, bool right_vectors)
{
    if (a.rows() != a.cols()) throw DimensionMismatch("eig of a non-square matrix");
    const lapack_int n = static_cast<lapack_int>(a.rows());
    Matrix work = a;
    EigenResult out;
    out.values.resize(n);
    if (right_vectors) out.vectors.resize(n, n);
    auto* w = reinterpret_cast<lapack_complex_double*>(out.values.data());
    auto* vr = right_vectors ? reinterpret_cast<lapack_complex_double*>(out.vectors.data()) : nullptr;
    const lapack_int info =
        LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', right_vectors ? 'V' : 'N', n,
                      reinterpret_cast<lapack_complex_double*>(work.data()), n, w, nullptr, n, vr,
                      right_vectors ? n : 1);
    if (info != 0) {
        throw EigenFailure("zgeev returned info=" + std::to_string(info));
    }
    return out;
}

Vector eigenvector_near(const Matrix& a, cplx shift)
{
    const Eigen::Index n = a.rows();
    // Offset keeps the shifted matrix invertible while the target stays dominant.
    const double scale = std::max(1.0, one_norm(a));
    const cplx sigma = shift + cplx(1e-13 * scale, 1e-13 * scale);
    Eigen::PartialPivLU<Matrix> lu(a - sigma * Matrix::Identity(n, n));
    Vector x = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
    for (int it = 0; it < 4; ++it) {
        x = lu.solve(x);
        const double nrm = x.norm();
        if (!std::isfinite(nrm) || nrm == 0.0) throw EigenFailure("inverse iteration broke down");
        x /= nrm;
    }
    return x;
}

} // namespace kerr::linalg
