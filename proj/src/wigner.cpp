#include "modlab/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "modlab/landau.hpp"

namespace modlab::wigner {

namespace {

const Complex kI(0.0, 1.0);

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

// Hermite tensor evaluation: rows index grid points, columns index levels.
Eigen::MatrixXd hermite_table(const RealVector& xs, int levels) {
    Eigen::MatrixXd table(xs.size(), levels);
    for (Eigen::Index i = 0; i < xs.size(); ++i)
        table.row(i) = hermite_functions(levels - 1, xs(i)).transpose();
    return table;
}

Matrix eval_coefficients_on_grid(const Matrix& coeff, const RealVector& xs, const RealVector& ys) {
    const int levels = static_cast<int>(coeff.rows());
    Eigen::MatrixXd zx = hermite_table(xs, levels);
    Eigen::MatrixXd zy = hermite_table(ys, levels);
    return zx.cast<Complex>() * coeff * zy.cast<Complex>().transpose();
}

RealVector grid_axis(double lo, double hi, int points) {
    RealVector xs(points);
    const double step = (hi - lo) / (points - 1);
    for (int i = 0; i < points; ++i) xs(i) = lo + i * step;
    return xs;
}

RealVector trapezoid_weights(double lo, double hi, int points) {
    RealVector w = RealVector::Constant(points, (hi - lo) / (points - 1));
    w(0) *= 0.5;
    w(points - 1) *= 0.5;
    return w;
}

// Cartesian ladders plus the phase-fixed ground-state coefficient vector,
// memoized per truncation (the kernel eigensolve is the expensive step).
struct GroundStateData {
    landau::CartesianBasis basis;
    Matrix aPlus, aMinus;
    Vector c00;
};

const GroundStateData& ground_state_data(int dimPerAxis) {
    static std::mutex mutex;
    static std::map<int, GroundStateData> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(dimPerAxis);
    if (it != cache.end()) return it->second;

    landau::CartesianOps ops = landau::build_cartesian(dimPerAxis);
    landau::CartesianPm pm = landau::cartesian_pm(ops);
    const double s = 1.0 / std::sqrt(2.0);
    Matrix aPlus = s * (pm.qPlus + kI * pm.pPlus);
    Matrix aMinus = s * (kI * pm.qMinus - pm.pMinus);

    Matrix k = aPlus.adjoint() * aPlus + aMinus.adjoint() * aMinus;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(k);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("ground_state_grid: kernel eigensolve failed");
    const RealVector& evals = solver.eigenvalues();
    if (evals(0) > 1e-6 || evals(1) < 0.5) {
        std::ostringstream msg;
        msg << "ground_state_grid: simultaneous kernel is not one-dimensional "
            << "(lowest eigenvalues " << evals(0) << ", " << evals(1) << ")";
        throw std::runtime_error(msg.str());
    }
    Vector c00 = solver.eigenvectors().col(0);
    // phase: the coefficient on the (0,0) Hermite mode is the dominant one
    Complex lead = c00(0);
    if (std::abs(lead) < 1e-12)
        throw std::runtime_error("ground_state_grid: unexpected ground-state structure");
    c00 *= std::conj(lead) / std::abs(lead);

    auto [pos, ok] = cache.emplace(dimPerAxis,
                                   GroundStateData{ops.basis, std::move(aPlus),
                                                   std::move(aMinus), std::move(c00)});
    return pos->second;
}

Vector ladder_coefficients(int n, int l, int dimPerAxis) {
    const GroundStateData& gs = ground_state_data(dimPerAxis);
    Vector c = gs.c00;
    for (int k = 0; k < l; ++k) c = gs.aMinus.adjoint() * c;
    for (int k = 0; k < n; ++k) c = gs.aPlus.adjoint() * c;
    return c / std::sqrt(factorial(n) * factorial(l));
}

Matrix coefficients_as_matrix(const Vector& c, int dimPerAxis) {
    Matrix m(dimPerAxis, dimPerAxis);
    for (int nx = 0; nx < dimPerAxis; ++nx)
        for (int ny = 0; ny < dimPerAxis; ++ny)
            m(nx, ny) = c(nx * dimPerAxis + ny);
    return m;
}

} // namespace

GridSpec::GridSpec(double x0, double x1, double y0, double y1, int points)
    : xMin(x0), xMax(x1), yMin(y0), yMax(y1), pointsPerAxis(points) {
    if (!(xMin < xMax) || !(yMin < yMax))
        throw std::invalid_argument("GridSpec: need xMin < xMax and yMin < yMax");
    if (points < 3)
        throw std::invalid_argument("GridSpec: pointsPerAxis must be >= 3");
}

GridFunction::GridFunction(const GridSpec& g, Matrix v) : grid(g), values(std::move(v)) {
    if (values.rows() != grid.pointsPerAxis || values.cols() != grid.pointsPerAxis)
        throw std::invalid_argument("GridFunction: value array does not match grid");
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
    if (a.grid.pointsPerAxis != b.grid.pointsPerAxis)
        throw std::invalid_argument("GridFunction-: grids differ");
    return {a.grid, a.values - b.values};
}

GridSpec default_grid() { return GridSpec(-12.0, 12.0, -12.0, 12.0, 193); }

WeylOperator weyl_operator(double x, double y, const OscillatorBasis& b, const Tolerances& tol) {
    if (!std::isfinite(x) || !std::isfinite(y))
        throw std::invalid_argument("weyl_operator: coordinates must be finite");
    auto [q, p] = build_position_momentum(b);
    TruncatedOperator generator{b, x * q.mat + y * p.mat};
    TruncatedOperator u = matrix_function_hermitian(
        generator, [](double lambda) { return std::exp(Complex(0.0, -lambda)); }, tol);
    double unitarity = (u.mat * u.mat.adjoint() - Matrix::Identity(b.dim, b.dim)).norm();
    if (unitarity > tol.unitarity * b.dim)
        throw std::runtime_error("weyl_operator: constructed matrix is not unitary");
    return {x, y, u};
}

WeylEvaluator::WeylEvaluator(const OscillatorBasis& b) : basis_(b) {
    auto [q, p] = build_position_momentum(b);
    HermitianEigen eig = hermitian_eig(q);
    lambda_ = eig.eigenvalues;
    v_ = eig.eigenvectors;
}

Matrix WeylEvaluator::full(double x, double y) const {
    const double r = std::hypot(x, y);
    const double theta = (r == 0.0) ? 0.0 : std::atan2(y, x);
    const int d = basis_.dim;
    Vector phase(d);
    for (int m = 0; m < d; ++m) phase(m) = std::exp(Complex(0.0, -r * lambda_(m)));
    Matrix w = v_ * phase.asDiagonal() * v_.adjoint();
    for (int n = 0; n < d; ++n)
        for (int l = 0; l < d; ++l)
            w(n, l) *= std::exp(Complex(0.0, theta * (n - l)));
    return w;
}

Complex WeylEvaluator::entry(double x, double y, int n, int l) const {
    const double r = std::hypot(x, y);
    const double theta = (r == 0.0) ? 0.0 : std::atan2(y, x);
    Complex acc = 0.0;
    for (int m = 0; m < basis_.dim; ++m)
        acc += v_(n, m) * std::exp(Complex(0.0, -r * lambda_(m))) * std::conj(v_(l, m));
    return acc * std::exp(Complex(0.0, theta * (n - l)));
}

double hs_tail_mass(const HsElement& x) {
    const int d = x.dim();
    const double total = x.mat.squaredNorm();
    if (total == 0.0) return 0.0;
    double tail = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (i >= d - 2 || j >= d - 2) tail += std::norm(x.mat(i, j));
    return tail / total;
}

double extent_tail_mass(const OscillatorBasis& b, const GridSpec& grid) {
    double corner2 = 0.0;
    for (double x : {grid.xMin, grid.xMax})
        for (double y : {grid.yMin, grid.yMax}) corner2 = std::max(corner2, x * x + y * y);
    const double lambda = 0.5 * corner2;  // mean occupation of the displaced ground state
    if (lambda <= 0.0) return 0.0;
    if (lambda > 600.0) return 1.0;
    double term = std::exp(-lambda);
    double cdf = term;
    for (int k = 1; k <= b.dim - 3; ++k) {
        term *= lambda / k;
        cdf += term;
    }
    return std::clamp(1.0 - cdf, 0.0, 1.0);
}

GridFunction wigner_transform(const HsElement& x, const GridSpec& grid, bool* tailWarning,
                              const Tolerances& tol) {
    if (tailWarning)
        *tailWarning = hs_tail_mass(x) > tol.tailMass ||
                       extent_tail_mass(x.basis, grid) > tol.tailMass;
    WeylEvaluator eval(x.basis);
    const double norm = 1.0 / std::sqrt(2.0 * M_PI);
    Matrix out(grid.pointsPerAxis, grid.pointsPerAxis);
    for (int i = 0; i < grid.pointsPerAxis; ++i)
        for (int j = 0; j < grid.pointsPerAxis; ++j) {
            Matrix u = eval.full(grid.x(i), grid.y(j));
            out(i, j) = norm * (u.adjoint() * x.mat).trace();
        }
    return {grid, out};
}

GridFunction wigner_transform_unit(int n, int l, const OscillatorBasis& b, const GridSpec& grid) {
    if (n < 0 || l < 0 || n >= b.dim || l >= b.dim)
        throw std::out_of_range("wigner_transform_unit: label out of range");
    WeylEvaluator eval(b);
    const double norm = 1.0 / std::sqrt(2.0 * M_PI);
    Matrix out(grid.pointsPerAxis, grid.pointsPerAxis);
    for (int i = 0; i < grid.pointsPerAxis; ++i)
        for (int j = 0; j < grid.pointsPerAxis; ++j)
            out(i, j) = norm * std::conj(eval.entry(grid.x(i), grid.y(j), n, l));
    return {grid, out};
}

GridFunction ground_state_grid(const GridSpec& grid, int dimPerAxis) {
    const GroundStateData& gs = ground_state_data(dimPerAxis);
    RealVector xs = grid_axis(grid.xMin, grid.xMax, grid.pointsPerAxis);
    RealVector ys = grid_axis(grid.yMin, grid.yMax, grid.pointsPerAxis);
    Matrix values = eval_coefficients_on_grid(coefficients_as_matrix(gs.c00, dimPerAxis), xs, ys);

    RealVector wx = trapezoid_weights(grid.xMin, grid.xMax, grid.pointsPerAxis);
    RealVector wy = trapezoid_weights(grid.yMin, grid.yMax, grid.pointsPerAxis);
    double norm2 = 0.0;
    for (int i = 0; i < grid.pointsPerAxis; ++i)
        for (int j = 0; j < grid.pointsPerAxis; ++j)
            norm2 += wx(i) * wy(j) * std::norm(values(i, j));
    values /= std::sqrt(norm2);

    // positive at the grid point nearest the origin
    int i0 = 0, j0 = 0;
    for (int i = 1; i < grid.pointsPerAxis; ++i)
        if (std::abs(grid.x(i)) < std::abs(grid.x(i0))) i0 = i;
    for (int j = 1; j < grid.pointsPerAxis; ++j)
        if (std::abs(grid.y(j)) < std::abs(grid.y(j0))) j0 = j;
    Complex origin = values(i0, j0);
    if (std::abs(origin) > 0) values *= std::conj(origin) / std::abs(origin);
    return {grid, values};
}

GridFunction landau_eigenfunction_grid(int n, int l, const GridSpec& grid, int dimPerAxis) {
    if (n < 0 || l < 0)
        throw std::invalid_argument("landau_eigenfunction_grid: labels must be nonnegative");
    if (n + l > dimPerAxis / 4) {
        std::ostringstream msg;
        msg << "landau_eigenfunction_grid: truncation risk, n + l = " << n + l
            << " exceeds dimPerAxis/4 = " << dimPerAxis / 4;
        throw std::invalid_argument(msg.str());
    }
    Vector c = ladder_coefficients(n, l, dimPerAxis);
    RealVector xs = grid_axis(grid.xMin, grid.xMax, grid.pointsPerAxis);
    RealVector ys = grid_axis(grid.yMin, grid.yMax, grid.pointsPerAxis);
    GridFunction f{grid, eval_coefficients_on_grid(coefficients_as_matrix(c, dimPerAxis), xs, ys)};
    phase_fix(f);
    return f;
}

void phase_fix(GridFunction& f) {
    const double threshold = 1e-6 * f.maxAbs();
    for (int i = 0; i < f.grid.pointsPerAxis; ++i)
        for (int j = 0; j < f.grid.pointsPerAxis; ++j) {
            Complex v = f.values(i, j);
            if (std::abs(v) > threshold) {
                f.values *= std::conj(v) / std::abs(v);
                return;
            }
        }
}

double max_abs_difference(const GridFunction& a, const GridFunction& b) {
    return (a.values - b.values).cwiseAbs().maxCoeff();
}

namespace {

// quadrature domain for matrix elements; wide enough that every integrand
// tail is far below the comparison tolerances
constexpr double kQuadHalfWidth = 8.0;
constexpr int kQuadPoints = 129;

struct QuadWorkspace {
    RealVector xs, wq;
    int dimPerAxis;
    std::map<std::pair<int, int>, Matrix> functions;  // label -> grid values

    explicit QuadWorkspace(int maxLabel, int dim) : dimPerAxis(dim) {
        xs = grid_axis(-kQuadHalfWidth, kQuadHalfWidth, kQuadPoints);
        wq = trapezoid_weights(-kQuadHalfWidth, kQuadHalfWidth, kQuadPoints);
        for (int n = 0; n <= maxLabel; ++n)
            for (int l = 0; l <= maxLabel; ++l) {
                Vector c = ladder_coefficients(n, l, dimPerAxis);
                functions[{n, l}] = eval_coefficients_on_grid(
                    coefficients_as_matrix(c, dimPerAxis), xs, xs);
            }
    }

    Matrix evaluate(const Vector& coeff) const {
        return eval_coefficients_on_grid(coefficients_as_matrix(coeff, dimPerAxis), xs, xs);
    }

    Complex inner(const Matrix& a, const Matrix& b) const {
        Complex acc = 0.0;
        for (int i = 0; i < kQuadPoints; ++i)
            for (int j = 0; j < kQuadPoints; ++j)
                acc += wq(i) * wq(j) * std::conj(a(i, j)) * b(i, j);
        return acc;
    }
};

} // namespace

IntertwiningReport intertwining_check(int maxLabel, const GridSpec& grid,
                                      const std::vector<int>& dims) {
    if (maxLabel < 0 || maxLabel > 6)
        throw std::invalid_argument("intertwining_check: maxLabel must be in 0..6");
    if (dims.empty())
        throw std::invalid_argument("intertwining_check: need at least one truncation");

    IntertwiningReport report;
    report.maxLabel = maxLabel;
    report.dims = dims;

    const int eigenDim = std::max(32, 4 * (maxLabel + 1));

    // (a) pointwise comparison of the Wigner images against the ladder
    // eigenfunctions, in both labelings
    const double norm = 1.0 / std::sqrt(2.0 * M_PI);
    for (int dim : dims) {
        OscillatorBasis basis(dim);
        GridFunction g00 = wigner_transform_unit(0, 0, basis, grid);
        double gaussDev = 0.0;
        for (int i = 0; i < grid.pointsPerAxis; ++i)
            for (int j = 0; j < grid.pointsPerAxis; ++j) {
                double r2 = grid.x(i) * grid.x(i) + grid.y(j) * grid.y(j);
                gaussDev = std::max(gaussDev,
                                    std::abs(g00.values(i, j) - norm * std::exp(-r2 / 4.0)));
            }
        report.gaussianDeviation.push_back(gaussDev);

        double direct = 0.0, transposed = 0.0;
        for (int n = 0; n <= maxLabel; ++n)
            for (int l = 0; l <= maxLabel; ++l) {
                GridFunction w = wigner_transform_unit(n, l, basis, grid);
                phase_fix(w);
                GridFunction psiNl = landau_eigenfunction_grid(n, l, grid, eigenDim);
                GridFunction psiLn = landau_eigenfunction_grid(l, n, grid, eigenDim);
                direct = std::max(direct, max_abs_difference(w, psiNl));
                transposed = std::max(transposed, max_abs_difference(w, psiLn));
            }
        report.pointwiseDirect.push_back(direct);
        report.pointwiseTransposed.push_back(transposed);
    }
    report.arrangement =
        report.pointwiseTransposed.back() <= report.pointwiseDirect.back() ? "transposed"
                                                                           : "direct";

    // (b) matrix elements of the algebra generators in the two pictures
    QuadWorkspace quad(maxLabel, eigenDim);
    const GroundStateData& gs = ground_state_data(eigenDim);
    const double s = 1.0 / std::sqrt(2.0);
    const Matrix qPlusLandau = s * (gs.aPlus + gs.aPlus.adjoint());
    const Matrix pPlusLandau = -kI * s * (gs.aPlus - gs.aPlus.adjoint());
    const Matrix qMinusLandau = -kI * s * (gs.aMinus - gs.aMinus.adjoint());  // printed assignment
    const Matrix pMinusLandau = -s * (gs.aMinus + gs.aMinus.adjoint());
    // Right multiplication transposes in the trace pairing, so the right
    // algebra is realized through the conjugated generators: conj(Q) = Q,
    // conj(P) = -P in the number basis.
    const Matrix qMinusMatched = s * (gs.aMinus + gs.aMinus.adjoint());
    const Matrix pMinusMatched = kI * s * (gs.aMinus - gs.aMinus.adjoint());

    OscillatorBasis small(maxLabel + 3);
    auto [qS, pS] = build_position_momentum(small);
    const TruncatedOperator idS = TruncatedOperator::identity(small);

    struct GeneratorPair {
        FactorizedSuperOp super;
        const Matrix* landau;
    };
    std::vector<GeneratorPair> matched = {
        {lift_left(qS), &qPlusLandau},
        {lift_left(pS), &pPlusLandau},
        {lift_right(qS), &qMinusMatched},
        {lift_right(pS), &pMinusMatched},
    };
    std::vector<GeneratorPair> printed = {
        {lift_left(qS), &qPlusLandau},
        {lift_left(pS), &pPlusLandau},
        {lift_right(qS), &qMinusLandau},
        {lift_right(pS), &pMinusLandau},
    };

    auto block_deviation = [&](const std::vector<GeneratorPair>& pairs) {
        double worst = 0.0;
        for (const GeneratorPair& gp : pairs) {
            for (int n = 0; n <= maxLabel; ++n)
                for (int l = 0; l <= maxLabel; ++l)
                    for (int n2 = 0; n2 <= maxLabel; ++n2)
                        for (int l2 = 0; l2 <= maxLabel; ++l2) {
                            Complex lhs = hs_inner(matrix_unit(n, l, small),
                                                   apply_super(gp.super, matrix_unit(n2, l2, small)));
                            Vector c = ladder_coefficients(n2, l2, quad.dimPerAxis);
                            Matrix gc = quad.evaluate(*gp.landau * c);
                            Complex rhs = quad.inner(quad.functions.at({n, l}), gc);
                            worst = std::max(worst, std::abs(lhs - rhs));
                        }
        }
        return worst;
    };
    report.generatorDeviationMatched = block_deviation(matched);
    report.generatorDeviationPrinted = block_deviation(printed);

    // Hamiltonian blocks: H_osc v I against (P+^2 + Q+^2)/2 and I v H_osc
    // against (P-^2 + Q-^2)/2, both built from the differential operators
    landau::CartesianOps ops = landau::build_cartesian(quad.dimPerAxis);
    landau::CartesianPm pm = landau::cartesian_pm(ops);
    const Matrix hDown = 0.5 * (pm.pPlus * pm.pPlus + pm.qPlus * pm.qPlus);
    const Matrix hUp = 0.5 * (pm.pMinus * pm.pMinus + pm.qMinus * pm.qMinus);
    const TruncatedOperator hOsc = oscillator_hamiltonian(small);
    std::vector<GeneratorPair> hPairs = {
        {lift_left(hOsc), &hDown},
        {lift_right(hOsc), &hUp},
    };
    report.hamiltonianBlockDeviation = block_deviation(hPairs);

    // isometry of the transform on the checked block
    double gram = 0.0;
    for (int n = 0; n <= maxLabel; ++n)
        for (int l = 0; l <= maxLabel; ++l)
            for (int n2 = 0; n2 <= maxLabel; ++n2)
                for (int l2 = 0; l2 <= maxLabel; ++l2) {
                    Complex q = quad.inner(quad.functions.at({n, l}), quad.functions.at({n2, l2}));
                    Complex expected = (n == n2 && l == l2) ? 1.0 : 0.0;
                    gram = std::max(gram, std::abs(q - expected));
                }
    report.gramDeviation = gram;
    return report;
}

} // namespace modlab::wigner
