#pragma once

#include <string>
#include <vector>

#include "modlab/hs.hpp"

namespace modlab::wigner {

struct GridSpec {
    double xMin, xMax, yMin, yMax;
    int pointsPerAxis;

    GridSpec(double x0, double x1, double y0, double y1, int points);

    double dx() const { return (xMax - xMin) / (pointsPerAxis - 1); }
    double dy() const { return (yMax - yMin) / (pointsPerAxis - 1); }
    double x(int i) const { return xMin + i * dx(); }
    double y(int j) const { return yMin + j * dy(); }
};

// Complex-valued function sampled on the grid, indexed (xIndex, yIndex).
struct GridFunction {
    GridSpec grid;
    Matrix values;

    GridFunction(const GridSpec& g, Matrix v);
    double maxAbs() const { return values.cwiseAbs().maxCoeff(); }
};

GridFunction operator-(const GridFunction& a, const GridFunction& b);

// Wide default window: every eigenfunction with labels <= 2 decays below
// 1e-8 inside the outer 10% margin here.
GridSpec default_grid();

// U(x, y) = exp(-i (x Q + y P)), the displacement family.
struct WeylOperator {
    double x, y;
    TruncatedOperator matrix;
};

WeylOperator weyl_operator(double x, double y, const OscillatorBasis& b,
                           const Tolerances& tol = default_tolerances());

// Grid-scale evaluation of Weyl matrix elements. Writing
// x Q + y P = r e^{i theta N} Q e^{-i theta N} lets a single diagonalization
// of Q serve every grid point:
//   U(x, y) = e^{i theta N} V e^{-i r Lambda} V^dag e^{-i theta N}.
class WeylEvaluator {
public:
    explicit WeylEvaluator(const OscillatorBasis& b);

    Matrix full(double x, double y) const;
    Complex entry(double x, double y, int n, int l) const;
    const OscillatorBasis& basis() const { return basis_; }

private:
    OscillatorBasis basis_;
    RealVector lambda_;
    Matrix v_;
};

// Fraction of ||X||_2^2 carried by the top two oscillator levels.
double hs_tail_mass(const HsElement& x);

// Occupation mass a displaced ground state at the farthest grid corner puts
// at or beyond level dim-2. When this is non-negligible the truncated Weyl
// traces cannot resolve the grid extent.
double extent_tail_mass(const OscillatorBasis& b, const GridSpec& grid);

// (W X)(x, y) = (2 pi)^{-1/2} Tr[U(x,y)^dag X], evaluated pointwise. Sets
// *tailWarning when the top two levels of X carry more than the tail-mass
// tolerance (the grid values are then unreliable at large |x|, |y|).
GridFunction wigner_transform(const HsElement& x, const GridSpec& grid,
                              bool* tailWarning = nullptr,
                              const Tolerances& tol = default_tolerances());

// W X_nl via single Weyl matrix elements; O(dim) per grid point.
GridFunction wigner_transform_unit(int n, int l, const OscillatorBasis& b,
                                   const GridSpec& grid);

// Normalized simultaneous kernel of the discretized A+/A- (cartesian
// representation), evaluated on the grid, quadrature-normalized and
// phase-fixed positive at the origin.
GridFunction ground_state_grid(const GridSpec& grid, int dimPerAxis = 32);

// Psi_{n,l} = (n! l!)^{-1/2} (A+^dag)^n (A-^dag)^l Psi_00 through the
// cartesian matrices, then evaluated via Hermite tensor products.
GridFunction landau_eigenfunction_grid(int n, int l, const GridSpec& grid,
                                       int dimPerAxis = 32);

// Rotates the global phase so the first entry (row-major) above a relative
// threshold becomes real positive. Pointwise comparisons need a pinned phase.
void phase_fix(GridFunction& f);

double max_abs_difference(const GridFunction& a, const GridFunction& b);

struct IntertwiningReport {
    int maxLabel = 0;
    std::vector<int> dims;
    // per dim: max |W X_00 - (2 pi)^{-1/2} e^{-(x^2+y^2)/4}| over the grid
    std::vector<double> gaussianDeviation;
    // per dim: max over labels of the phase-fixed pointwise deviation of
    // W X_nl against Psi_nl, and against the transposed labeling Psi_ln
    std::vector<double> pointwiseDirect;
    std::vector<double> pointwiseTransposed;
    std::string arrangement;  // "direct" or "transposed": which labeling W actually realizes
    // matrix-element blocks <X_nl, (G v I / I v G) X_n'l'>_2 against grid
    // quadrature <Psi_nl, G_pm Psi_n'l'>; "matched" pairs the right algebra
    // with the ladder-consistent quadratures, "printed" with the claimed
    // Q-/P- assignment under audit
    double generatorDeviationMatched = 0.0;
    double generatorDeviationPrinted = 0.0;
    double hamiltonianBlockDeviation = 0.0;  // H_osc v I and I v H_osc blocks
    double gramDeviation = 0.0;              // quadrature Gram of Psi vs identity
};

IntertwiningReport intertwining_check(int maxLabel, const GridSpec& grid,
                                      const std::vector<int>& dims);

} // namespace modlab::wigner
