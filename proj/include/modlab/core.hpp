#pragma once

#include <complex>
#include <functional>
#include <utility>

#include <Eigen/Dense>

#include "modlab/tolerances.hpp"

namespace modlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Finite truncation of the 1D oscillator eigenbasis, levels n = 0..dim-1.
struct OscillatorBasis {
    int dim;

    explicit OscillatorBasis(int d);

    friend bool operator==(const OscillatorBasis& a, const OscillatorBasis& b) {
        return a.dim == b.dim;
    }
    friend bool operator!=(const OscillatorBasis& a, const OscillatorBasis& b) {
        return !(a == b);
    }
};

// Dense operator on a truncated oscillator basis.
struct TruncatedOperator {
    OscillatorBasis basis;
    Matrix mat;

    TruncatedOperator(const OscillatorBasis& b, Matrix m);

    static TruncatedOperator zero(const OscillatorBasis& b);
    static TruncatedOperator identity(const OscillatorBasis& b);

    TruncatedOperator adjoint() const { return {basis, mat.adjoint()}; }
    Complex trace() const { return mat.trace(); }
    double frobeniusNorm() const { return mat.norm(); }
    double operatorNorm() const;  // largest singular value

    int dim() const { return basis.dim; }
};

void require_same_basis(const OscillatorBasis& a, const OscillatorBasis& b,
                        const char* where);

TruncatedOperator operator+(const TruncatedOperator& a, const TruncatedOperator& b);
TruncatedOperator operator-(const TruncatedOperator& a, const TruncatedOperator& b);
TruncatedOperator operator*(const TruncatedOperator& a, const TruncatedOperator& b);
TruncatedOperator operator*(Complex c, const TruncatedOperator& a);

inline TruncatedOperator commutator(const TruncatedOperator& a, const TruncatedOperator& b) {
    return a * b - b * a;
}

struct HermitianEigen {
    RealVector eigenvalues;   // ascending
    Matrix eigenvectors;      // unitary, columns
};

struct PolarFactors {
    Matrix unitaryPart;
    Matrix positivePart;
};

// a, a^dag with matrix elements a[n-1, n] = sqrt(n). The commutator
// [a, a^dag] equals I only on levels 0..dim-2; the top level carries the
// truncation defect (the trace of a commutator vanishes in finite dimension).
std::pair<TruncatedOperator, TruncatedOperator> build_ladder(const OscillatorBasis& b);

// Q = (a + a^dag)/sqrt(2), P = (a - a^dag)/(i sqrt(2)); [Q,P] = iI on the
// interior block.
std::pair<TruncatedOperator, TruncatedOperator> build_position_momentum(const OscillatorBasis& b);

// diag(n + 1/2)
TruncatedOperator oscillator_hamiltonian(const OscillatorBasis& b);

// diag(n)
TruncatedOperator number_operator(const OscillatorBasis& b);

// Projector onto levels 0..dim-1-dropTopLevels. CCR-type identities only hold
// away from the truncation edge, so checks compress with this first.
TruncatedOperator interior_projector(const OscillatorBasis& b, int dropTopLevels);

// Normalized Hermite function zeta_n(x) = pi^{-1/4} (2^n n!)^{-1/2} e^{-x^2/2} h_n(x),
// evaluated by the stable recurrence
//   zeta_{n+1} = x sqrt(2/(n+1)) zeta_n - sqrt(n/(n+1)) zeta_{n-1},
// which never forms the raw polynomials (those overflow near n ~ 150).
double hermite_function(int n, double x);

// All of zeta_0..zeta_{nmax}(x) in one sweep of the recurrence.
RealVector hermite_functions(int nmax, double x);

HermitianEigen hermitian_eig(const TruncatedOperator& m,
                             const Tolerances& tol = default_tolerances());
HermitianEigen hermitian_eig(const Matrix& m,
                             const Tolerances& tol = default_tolerances());

// V f(Lambda) V^dag through the eigendecomposition; f is applied to the real
// eigenvalues and must return finite values on the spectrum.
TruncatedOperator matrix_function_hermitian(const TruncatedOperator& m,
                                            const std::function<Complex(double)>& f,
                                            const Tolerances& tol = default_tolerances());
Matrix matrix_function_hermitian(const Matrix& m,
                                 const std::function<Complex(double)>& f,
                                 const Tolerances& tol = default_tolerances());

// M = U |M| with |M| = (M^dag M)^{1/2}. Requires M to be safely invertible.
PolarFactors polar_decompose(const Matrix& m,
                             const Tolerances& tol = default_tolerances());
PolarFactors polar_decompose(const TruncatedOperator& m,
                             const Tolerances& tol = default_tolerances());

// Tensor product with row-major index pairing: (ab)[(i,k),(j,l)] = a(i,j) b(k,l).
Matrix kronecker(const Matrix& a, const Matrix& b);

} // namespace modlab
