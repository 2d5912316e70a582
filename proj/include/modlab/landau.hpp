#pragma once

#include <array>
#include <string>

#include "modlab/core.hpp"

namespace modlab::landau {

// Rectangular truncation of the Landau eigenbasis Psi_{n,l}: n < degeneracy
// indexes the degeneracy within a level, l < levels indexes the energy level.
// Flat ordering is row-major over (n, l).
struct LandauBasis {
    int degeneracy;  // M, range of n
    int levels;      // L, range of l

    LandauBasis(int m, int l);
    int size() const { return degeneracy * levels; }
    int index(int n, int l) const { return n * levels + l; }

    friend bool operator==(const LandauBasis& a, const LandauBasis& b) {
        return a.degeneracy == b.degeneracy && a.levels == b.levels;
    }
};

struct TwoDimOperator {
    LandauBasis basis;
    Matrix mat;

    TwoDimOperator(const LandauBasis& b, Matrix m);
    TwoDimOperator adjoint() const { return {basis, mat.adjoint()}; }
};

// A_+ lowers n with factor sqrt(n), A_- lowers l with factor sqrt(l); the two
// pairs act on disjoint tensor factors and commute exactly.
struct LadderSet {
    TwoDimOperator aPlus, aPlusDag, aMinus, aMinusDag;
};
LadderSet build_ladders(const LandauBasis& b);

// H_up Psi_{n,l} = (l + 1/2) Psi, H_down Psi_{n,l} = (n + 1/2) Psi,
// free0 = (N_+ + N_- + 1)/2, intUp = -(N_+ - N_-)/2, intDown = -intUp.
struct HamiltonianSet {
    TwoDimOperator up, down, free0, intUp, intDown;
};
HamiltonianSet build_hamiltonians(const LandauBasis& b);

// Quadrature pairs recovered from the ladders: Q+ = (A+ + A+^dag)/sqrt(2),
// P+ = (A+ - A+^dag)/(i sqrt2), Q- = (A- - A-^dag)/(i sqrt2),
// P- = -(A- + A-^dag)/sqrt(2).
struct PmSet {
    TwoDimOperator qPlus, pPlus, qMinus, pMinus;
};
PmSet build_landau_pm(const LandauBasis& b);

struct DegeneracyReport {
    int distinctJointPairs = 0;      // distinct (H_down, H_up) eigenvalue pairs
    bool jointSimple = false;        // every pair occurs exactly once
    bool marginalsMatch = false;     // each H_up eigenvalue has multiplicity M, H_down has L
    double commutatorNorm = 0.0;     // ||[H_up, H_down]||
    double intSumNorm = 0.0;         // ||intUp + intDown||
    double splitResidual = 0.0;      // ||up - (free0 + intUp)|| + ||down - (free0 + intDown)||
};
DegeneracyReport degeneracy_lift_check(const LandauBasis& b);

// Cartesian representation on the tensor Hermite basis; flat index is
// nx * dimPerAxis + ny.
struct CartesianBasis {
    int dimPerAxis;
    explicit CartesianBasis(int d);
    int size() const { return dimPerAxis * dimPerAxis; }
    int index(int nx, int ny) const { return nx * dimPerAxis + ny; }
};

struct CartesianOps {
    CartesianBasis basis;
    Matrix x, px, y, py, ax, ay;
};
CartesianOps build_cartesian(int dimPerAxis);

// Q- = px + y/2, P- = py - x/2, Q+ = py + x/2, P+ = px - y/2.
struct CartesianPm {
    Matrix qPlus, pPlus, qMinus, pMinus;
};
CartesianPm cartesian_pm(const CartesianOps& ops);

// Projector compressing out the top dropPerAxis Hermite levels of each axis.
Matrix cartesian_interior_projector(const CartesianBasis& b, int dropPerAxis);

// Least-squares expansion of one rotated ladder operator over
// {a_x, a_y, a_x^dag, a_y^dag} in the interior trace inner product, compared
// against a claimed coefficient set.
struct LadderFit {
    std::array<Complex, 4> fitted;
    std::array<Complex, 4> claimed;
    double fitResidual = 0.0;
    double maxCoefficientDeviation = 0.0;
};

struct SecondRepAudit {
    int dimPerAxis = 0;
    LadderFit aPlus, aMinus;
    double ccrResidualPlus = 0.0;        // ||Pi([A+,A+^dag] - I)Pi|| from the fitted expansion
    double ccrResidualMinus = 0.0;
    double crossCommutatorResidual = 0.0;  // ||Pi [A+, A-^dag] Pi||
    // -l_z against the two candidate signs of (N+ - N-)/2; the two source
    // statements disagree, so both residuals are reported
    double hIntMinusHalfResidual = 0.0;
    double hIntPlusHalfResidual = 0.0;
    std::string hIntConvention;          // "minus_half" or "plus_half"
    // low spectrum of H0 = (px^2 + x^2/4)/2 + (py^2 + y^2/4)/2 against
    // (n + l + 1)/2 and against (n + l + 1)
    double h0HalfSpectrumDeviation = 0.0;
    double h0FullSpectrumDeviation = 0.0;
};
SecondRepAudit second_rep_audit(int dimPerAxis);

} // namespace modlab::landau
