#pragma once

#include <optional>

#include "modlab/core.hpp"
#include "modlab/rng.hpp"

namespace modlab {

// Element of the truncated Hilbert-Schmidt space: a dim x dim matrix viewed
// as a vector with the trace inner product <X|Y>_2 = Tr[X^dag Y].
struct HsElement {
    OscillatorBasis basis;
    Matrix mat;

    HsElement(const OscillatorBasis& b, Matrix m);

    static HsElement zero(const OscillatorBasis& b);

    double norm() const { return mat.norm(); }
    int dim() const { return basis.dim; }
};

HsElement operator+(const HsElement& x, const HsElement& y);
HsElement operator-(const HsElement& x, const HsElement& y);
HsElement operator*(Complex c, const HsElement& x);

// Matrix unit X_ij = |zeta_i><zeta_j|.
HsElement matrix_unit(int i, int j, const OscillatorBasis& b);

// Conjugate-linear in the first argument.
Complex hs_inner(const HsElement& x, const HsElement& y);
double hs_norm(const HsElement& x);

// Coordinates over the X_ij basis, row-major in (i, j). Fixed project-wide so
// matrixized superoperators and antilinear maps are reproducible.
inline int hs_flat_index(int i, int j, int dim) { return i * dim + j; }
Vector hs_coords(const HsElement& x);
HsElement hs_from_coords(const OscillatorBasis& b, const Vector& coords);

// The factorized superoperator A v B : X -> A X B^dag.
struct FactorizedSuperOp {
    TruncatedOperator left;
    TruncatedOperator right;

    FactorizedSuperOp(TruncatedOperator l, TruncatedOperator r);
    int dim() const { return left.basis.dim; }
    const OscillatorBasis& basis() const { return left.basis; }
};

FactorizedSuperOp vee(const TruncatedOperator& a, const TruncatedOperator& b);
HsElement apply_super(const FactorizedSuperOp& s, const HsElement& x);
FactorizedSuperOp super_adjoint(const FactorizedSuperOp& s);
FactorizedSuperOp super_compose(const FactorizedSuperOp& s1, const FactorizedSuperOp& s2);
FactorizedSuperOp lift_left(const TruncatedOperator& a);   // A v I
FactorizedSuperOp lift_right(const TruncatedOperator& a);  // I v A

// Densified superoperator over the X_ij coordinates (dim^2 x dim^2). Only
// formed for spectral work; factorized application stays O(dim^3).
struct DenseSuperOp {
    OscillatorBasis basis;
    Matrix mat;

    DenseSuperOp(const OscillatorBasis& b, Matrix m);
    static DenseSuperOp identity(const OscillatorBasis& b);
    HsElement apply(const HsElement& x) const;
    int dim() const { return basis.dim; }
};

DenseSuperOp densify(const FactorizedSuperOp& s);
DenseSuperOp compose(const DenseSuperOp& a, const DenseSuperOp& b);

// Antilinear map in normal form: X -> linearPart * conj(coords(X)). The
// conjugation acts entrywise in the X_ij coordinates, so all antilinear
// identities reduce to linear algebra on linearPart.
struct AntilinearMap {
    OscillatorBasis basis;
    Matrix linearPart;
    bool conjugatesInput = true;

    AntilinearMap(const OscillatorBasis& b, Matrix linear);
    HsElement apply(const HsElement& x) const;
};

// <T x, y> = <T* y, x>; in coordinates the adjoint's linear part is the
// transpose of the original one.
AntilinearMap antilinear_adjoint(const AntilinearMap& t);
AntilinearMap compose(const DenseSuperOp& a, const AntilinearMap& t);   // a . t
AntilinearMap compose(const AntilinearMap& t, const DenseSuperOp& a);   // t . a
DenseSuperOp compose(const AntilinearMap& s, const AntilinearMap& t);   // s . t (linear)

// J X_ij = X_ji extended antilinearly; equivalently J(X) = X^dag. Antiunitary
// with J^2 = identity.
AntilinearMap modular_conjugation(const OscillatorBasis& b);

// The closed-form route for J, kept separate so the two can be cross-checked.
HsElement adjoint_map(const HsElement& x);

// Least-squares fit of a dense superoperator by a purely left (A v I) or
// purely right (I v B) factorized one; residual is Frobenius over the
// dim^2 x dim^2 matrixization.
struct FactorFit {
    TruncatedOperator op;
    double residual;
};
FactorFit best_left_factor(const DenseSuperOp& m);
FactorFit best_right_factor(const DenseSuperOp& m);

// Solves A v I = I v B for B in the least-squares sense; nullopt when the
// residual shows the system is inconsistent (no coincidence).
std::optional<TruncatedOperator> solve_right_match(const TruncatedOperator& a,
                                                   double relTol = 1e-8);

// Samples operators A, looks for coincidences A v I = I v B, and returns the
// largest deviation of a coinciding A from the best scalar multiple of I.
// A nonzero return would exhibit a nontrivial element of the center.
double center_residual(const OscillatorBasis& b, int samples, Rng& rng);

} // namespace modlab
