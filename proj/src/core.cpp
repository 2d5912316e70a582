#include "modlab/core.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace modlab {

OscillatorBasis::OscillatorBasis(int d) : dim(d) {
    if (d < 2) {
        std::ostringstream msg;
        msg << "invalid basis: dim must be >= 2, got " << d;
        throw std::invalid_argument(msg.str());
    }
}

TruncatedOperator::TruncatedOperator(const OscillatorBasis& b, Matrix m)
    : basis(b), mat(std::move(m)) {
    if (mat.rows() != basis.dim || mat.cols() != basis.dim)
        throw std::invalid_argument("operator entries must be dim x dim");
    if (!mat.allFinite())
        throw std::invalid_argument("operator entries must be finite");
}

TruncatedOperator TruncatedOperator::zero(const OscillatorBasis& b) {
    return {b, Matrix::Zero(b.dim, b.dim)};
}

TruncatedOperator TruncatedOperator::identity(const OscillatorBasis& b) {
    return {b, Matrix::Identity(b.dim, b.dim)};
}

double TruncatedOperator::operatorNorm() const {
    if (mat.rows() == 0) return 0.0;
    return mat.jacobiSvd().singularValues()(0);
}

void require_same_basis(const OscillatorBasis& a, const OscillatorBasis& b,
                        const char* where) {
    if (a != b) {
        std::ostringstream msg;
        msg << where << ": basis mismatch (dim " << a.dim << " vs " << b.dim << ")";
        throw std::invalid_argument(msg.str());
    }
}

TruncatedOperator operator+(const TruncatedOperator& a, const TruncatedOperator& b) {
    require_same_basis(a.basis, b.basis, "operator+");
    return {a.basis, a.mat + b.mat};
}

TruncatedOperator operator-(const TruncatedOperator& a, const TruncatedOperator& b) {
    require_same_basis(a.basis, b.basis, "operator-");
    return {a.basis, a.mat - b.mat};
}

TruncatedOperator operator*(const TruncatedOperator& a, const TruncatedOperator& b) {
    require_same_basis(a.basis, b.basis, "operator*");
    return {a.basis, a.mat * b.mat};
}

TruncatedOperator operator*(Complex c, const TruncatedOperator& a) {
    return {a.basis, c * a.mat};
}

std::pair<TruncatedOperator, TruncatedOperator> build_ladder(const OscillatorBasis& b) {
    Matrix a = Matrix::Zero(b.dim, b.dim);
    for (int n = 1; n < b.dim; ++n)
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    TruncatedOperator lower{b, a};
    return {lower, lower.adjoint()};
}

std::pair<TruncatedOperator, TruncatedOperator> build_position_momentum(const OscillatorBasis& b) {
    auto [a, adag] = build_ladder(b);
    const double s = 1.0 / std::sqrt(2.0);
    TruncatedOperator q{b, s * (a.mat + adag.mat)};
    TruncatedOperator p{b, Complex(0.0, -s) * (a.mat - adag.mat)};
    return {q, p};
}

TruncatedOperator oscillator_hamiltonian(const OscillatorBasis& b) {
    Matrix h = Matrix::Zero(b.dim, b.dim);
    for (int n = 0; n < b.dim; ++n)
        h(n, n) = n + 0.5;
    return {b, h};
}

TruncatedOperator number_operator(const OscillatorBasis& b) {
    Matrix h = Matrix::Zero(b.dim, b.dim);
    for (int n = 0; n < b.dim; ++n)
        h(n, n) = static_cast<double>(n);
    return {b, h};
}

TruncatedOperator interior_projector(const OscillatorBasis& b, int dropTopLevels) {
    if (dropTopLevels < 0 || dropTopLevels >= b.dim)
        throw std::invalid_argument("interior_projector: dropTopLevels out of range");
    Matrix p = Matrix::Zero(b.dim, b.dim);
    for (int n = 0; n < b.dim - dropTopLevels; ++n)
        p(n, n) = 1.0;
    return {b, p};
}

double hermite_function(int n, double x) {
    if (n < 0)
        throw std::domain_error("hermite_function: level must be nonnegative");
    if (n > 1000000)
        throw std::domain_error("hermite_function: level above supported range (1e6)");
    if (!std::isfinite(x))
        throw std::domain_error("hermite_function: x must be finite");

    const double z0 = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
    if (n == 0) return z0;
    double prev = z0;
    double cur = std::sqrt(2.0) * x * z0;
    for (int k = 1; k < n; ++k) {
        double next = x * std::sqrt(2.0 / (k + 1)) * cur - std::sqrt(double(k) / (k + 1)) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

RealVector hermite_functions(int nmax, double x) {
    if (nmax < 0)
        throw std::domain_error("hermite_functions: level must be nonnegative");
    RealVector out(nmax + 1);
    out(0) = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
    if (nmax == 0) return out;
    out(1) = std::sqrt(2.0) * x * out(0);
    for (int k = 1; k < nmax; ++k)
        out(k + 1) = x * std::sqrt(2.0 / (k + 1)) * out(k) - std::sqrt(double(k) / (k + 1)) * out(k - 1);
    return out;
}

HermitianEigen hermitian_eig(const Matrix& m, const Tolerances& tol) {
    const double scale = m.norm();
    const double asym = (m - m.adjoint()).norm();
    if (asym > tol.hermiticity * std::max(scale, 1e-300)) {
        std::ostringstream msg;
        msg << "hermitian_eig: symmetry violation, ||M - M^dag|| = " << asym
            << " exceeds " << tol.hermiticity << " * ||M|| = " << tol.hermiticity * scale;
        throw std::invalid_argument(msg.str());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.adjoint()));
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("hermitian_eig: eigensolver failed to converge");
    HermitianEigen out{solver.eigenvalues(), solver.eigenvectors()};

    Matrix rebuilt = out.eigenvectors * out.eigenvalues.asDiagonal().toDenseMatrix().cast<Complex>() *
                     out.eigenvectors.adjoint();
    if ((rebuilt - m).norm() > tol.reconstruction * std::max(scale, 1.0))
        throw std::runtime_error("hermitian_eig: reconstruction residual above tolerance");
    return out;
}

HermitianEigen hermitian_eig(const TruncatedOperator& m, const Tolerances& tol) {
    return hermitian_eig(m.mat, tol);
}

Matrix matrix_function_hermitian(const Matrix& m,
                                 const std::function<Complex(double)>& f,
                                 const Tolerances& tol) {
    HermitianEigen eig = hermitian_eig(m, tol);
    Vector fvals(eig.eigenvalues.size());
    for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
        Complex v = f(eig.eigenvalues(i));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            std::ostringstream msg;
            msg << "matrix_function_hermitian: f undefined at eigenvalue "
                << eig.eigenvalues(i);
            throw std::domain_error(msg.str());
        }
        fvals(i) = v;
    }
    return eig.eigenvectors * fvals.asDiagonal() * eig.eigenvectors.adjoint();
}

TruncatedOperator matrix_function_hermitian(const TruncatedOperator& m,
                                            const std::function<Complex(double)>& f,
                                            const Tolerances& tol) {
    return {m.basis, matrix_function_hermitian(m.mat, f, tol)};
}

PolarFactors polar_decompose(const Matrix& m, const Tolerances& tol) {
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(sv.size() - 1) <= tol.conditioning * sv(0)) {
        std::ostringstream msg;
        msg << "polar_decompose: input too close to singular, sigma_min/sigma_max = "
            << (sv.size() ? sv(sv.size() - 1) / sv(0) : 0.0);
        throw std::invalid_argument(msg.str());
    }
    Matrix unitary = svd.matrixU() * svd.matrixV().adjoint();
    Matrix positive = svd.matrixV() * sv.asDiagonal().toDenseMatrix().cast<Complex>() *
                      svd.matrixV().adjoint();
    return {unitary, positive};
}

PolarFactors polar_decompose(const TruncatedOperator& m, const Tolerances& tol) {
    return polar_decompose(m.mat, tol);
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

} // namespace modlab
