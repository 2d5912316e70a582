#include "modlab/landau.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

namespace modlab::landau {

namespace {
const Complex kI(0.0, 1.0);

Matrix ladder_matrix(int dim) {
    Matrix a = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n)
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}
} // namespace

LandauBasis::LandauBasis(int m, int l) : degeneracy(m), levels(l) {
    if (m < 2 || l < 2)
        throw std::invalid_argument("LandauBasis: degeneracy and levels must be >= 2");
}

TwoDimOperator::TwoDimOperator(const LandauBasis& b, Matrix m) : basis(b), mat(std::move(m)) {
    if (mat.rows() != basis.size() || mat.cols() != basis.size())
        throw std::invalid_argument("TwoDimOperator entries must be size x size");
}

LadderSet build_ladders(const LandauBasis& b) {
    const Matrix idN = Matrix::Identity(b.degeneracy, b.degeneracy);
    const Matrix idL = Matrix::Identity(b.levels, b.levels);
    Matrix aPlus = kronecker(ladder_matrix(b.degeneracy), idL);   // lowers n
    Matrix aMinus = kronecker(idN, ladder_matrix(b.levels));      // lowers l
    return {{b, aPlus}, {b, aPlus.adjoint()}, {b, aMinus}, {b, aMinus.adjoint()}};
}

HamiltonianSet build_hamiltonians(const LandauBasis& b) {
    const int size = b.size();
    Matrix up = Matrix::Zero(size, size);
    Matrix down = Matrix::Zero(size, size);
    Matrix free0 = Matrix::Zero(size, size);
    Matrix intUp = Matrix::Zero(size, size);
    for (int n = 0; n < b.degeneracy; ++n)
        for (int l = 0; l < b.levels; ++l) {
            const int idx = b.index(n, l);
            up(idx, idx) = l + 0.5;
            down(idx, idx) = n + 0.5;
            free0(idx, idx) = 0.5 * (n + l + 1);
            intUp(idx, idx) = -0.5 * (n - l);
        }
    return {{b, up}, {b, down}, {b, free0}, {b, intUp}, {b, -intUp}};
}

PmSet build_landau_pm(const LandauBasis& b) {
    LadderSet ladders = build_ladders(b);
    const double s = 1.0 / std::sqrt(2.0);
    Matrix qPlus = s * (ladders.aPlus.mat + ladders.aPlusDag.mat);
    Matrix pPlus = -kI * s * (ladders.aPlus.mat - ladders.aPlusDag.mat);
    Matrix qMinus = -kI * s * (ladders.aMinus.mat - ladders.aMinusDag.mat);
    Matrix pMinus = -s * (ladders.aMinus.mat + ladders.aMinusDag.mat);
    return {{b, qPlus}, {b, pPlus}, {b, qMinus}, {b, pMinus}};
}

DegeneracyReport degeneracy_lift_check(const LandauBasis& b) {
    HamiltonianSet h = build_hamiltonians(b);
    DegeneracyReport report;
    report.commutatorNorm = (h.up.mat * h.down.mat - h.down.mat * h.up.mat).norm();
    report.intSumNorm = (h.intUp.mat + h.intDown.mat).norm();
    report.splitResidual = (h.up.mat - (h.free0.mat + h.intUp.mat)).norm() +
                           (h.down.mat - (h.free0.mat + h.intDown.mat)).norm();

    std::map<std::pair<long, long>, int> joint;   // (2*E_down, 2*E_up) as integers
    std::map<long, int> upMult, downMult;
    for (int n = 0; n < b.degeneracy; ++n)
        for (int l = 0; l < b.levels; ++l) {
            const int idx = b.index(n, l);
            long eUp = std::lround(2.0 * h.up.mat(idx, idx).real());
            long eDown = std::lround(2.0 * h.down.mat(idx, idx).real());
            joint[{eDown, eUp}] += 1;
            upMult[eUp] += 1;
            downMult[eDown] += 1;
        }
    report.distinctJointPairs = static_cast<int>(joint.size());
    report.jointSimple = std::all_of(joint.begin(), joint.end(),
                                     [](const auto& kv) { return kv.second == 1; });
    bool marginals = true;
    for (const auto& [e, count] : upMult) marginals = marginals && count == b.degeneracy;
    for (const auto& [e, count] : downMult) marginals = marginals && count == b.levels;
    report.marginalsMatch = marginals;
    return report;
}

CartesianBasis::CartesianBasis(int d) : dimPerAxis(d) {
    if (d < 4)
        throw std::invalid_argument("CartesianBasis: dimPerAxis must be >= 4");
}

CartesianOps build_cartesian(int dimPerAxis) {
    CartesianBasis basis(dimPerAxis);
    OscillatorBasis axis(dimPerAxis);
    auto [q1, p1] = build_position_momentum(axis);
    Matrix a1 = ladder_matrix(dimPerAxis);
    const Matrix id = Matrix::Identity(dimPerAxis, dimPerAxis);
    return {basis,
            kronecker(q1.mat, id), kronecker(p1.mat, id),
            kronecker(id, q1.mat), kronecker(id, p1.mat),
            kronecker(a1, id),     kronecker(id, a1)};
}

CartesianPm cartesian_pm(const CartesianOps& ops) {
    return {ops.py + 0.5 * ops.x,   // Q+
            ops.px - 0.5 * ops.y,   // P+
            ops.px + 0.5 * ops.y,   // Q-
            ops.py - 0.5 * ops.x};  // P-
}

Matrix cartesian_interior_projector(const CartesianBasis& b, int dropPerAxis) {
    const int keep = b.dimPerAxis - dropPerAxis;
    if (keep <= 0)
        throw std::invalid_argument("cartesian_interior_projector: dropPerAxis too large");
    Matrix proj = Matrix::Zero(b.size(), b.size());
    for (int nx = 0; nx < keep; ++nx)
        for (int ny = 0; ny < keep; ++ny) {
            const int idx = b.index(nx, ny);
            proj(idx, idx) = 1.0;
        }
    return proj;
}

namespace {

LadderFit fit_ladder(const Matrix& target, const std::array<const Matrix*, 4>& span,
                     const Matrix& proj, const std::array<Complex, 4>& claimed) {
    std::array<Matrix, 4> compressed;
    for (int k = 0; k < 4; ++k) compressed[k] = proj * (*span[k]) * proj;
    const Matrix targetC = proj * target * proj;

    Eigen::Matrix4cd gram;
    Eigen::Vector4cd rhs;
    for (int k = 0; k < 4; ++k) {
        for (int l = 0; l < 4; ++l)
            gram(k, l) = (compressed[k].adjoint() * compressed[l]).trace();
        rhs(k) = (compressed[k].adjoint() * targetC).trace();
    }
    Eigen::Vector4cd coeff = gram.fullPivLu().solve(rhs);

    Matrix fitted = Matrix::Zero(target.rows(), target.cols());
    for (int k = 0; k < 4; ++k) fitted += coeff(k) * compressed[k];

    LadderFit fit;
    for (int k = 0; k < 4; ++k) fit.fitted[k] = coeff(k);
    fit.claimed = claimed;
    fit.fitResidual = (targetC - fitted).norm();
    double dev = 0.0;
    for (int k = 0; k < 4; ++k) dev = std::max(dev, std::abs(coeff(k) - claimed[k]));
    fit.maxCoefficientDeviation = dev;
    return fit;
}

} // namespace

SecondRepAudit second_rep_audit(int dimPerAxis) {
    if (dimPerAxis < 8)
        throw std::invalid_argument("second_rep_audit: dimPerAxis must be >= 8");

    CartesianOps ops = build_cartesian(dimPerAxis);
    CartesianPm pm = cartesian_pm(ops);
    const double s = 1.0 / std::sqrt(2.0);

    const Matrix aPlus = s * (pm.qPlus + kI * pm.pPlus);
    const Matrix aMinus = s * (kI * pm.qMinus - pm.pMinus);
    const Matrix axDag = ops.ax.adjoint();
    const Matrix ayDag = ops.ay.adjoint();
    const Matrix proj = cartesian_interior_projector(ops.basis, 2);
    const std::array<const Matrix*, 4> span = {&ops.ax, &ops.ay, &axDag, &ayDag};

    SecondRepAudit audit;
    audit.dimPerAxis = dimPerAxis;
    // claimed expansions under audit, over {a_x, a_y, a_x^dag, a_y^dag}
    audit.aPlus = fit_ladder(aPlus, span, proj,
                             {0.75, Complex(0, -0.75), -0.25, Complex(0, -0.25)});
    audit.aMinus = fit_ladder(aMinus, span, proj,
                              {0.75, Complex(0, 0.75), -0.25, Complex(0, -0.25)});

    auto from_coeff = [&](const std::array<Complex, 4>& c) {
        Matrix m = Matrix::Zero(ops.basis.size(), ops.basis.size());
        for (int k = 0; k < 4; ++k) m += c[k] * (*span[k]);
        return m;
    };
    const Matrix fitPlus = from_coeff(audit.aPlus.fitted);
    const Matrix fitMinus = from_coeff(audit.aMinus.fitted);
    const Matrix id = Matrix::Identity(ops.basis.size(), ops.basis.size());
    auto comm = [](const Matrix& a, const Matrix& b) { return a * b - b * a; };

    audit.ccrResidualPlus = (proj * (comm(fitPlus, fitPlus.adjoint()) - id) * proj).norm();
    audit.ccrResidualMinus = (proj * (comm(fitMinus, fitMinus.adjoint()) - id) * proj).norm();
    audit.crossCommutatorResidual = (proj * comm(fitPlus, fitMinus.adjoint()) * proj).norm();

    // -l_z with l_z = (x py - y px)/2 against the two contradictory candidate
    // signs of (N+ - N-)/2
    const Matrix lz = 0.5 * (ops.x * ops.py - ops.y * ops.px);
    const Matrix nPlus = aPlus.adjoint() * aPlus;
    const Matrix nMinus = aMinus.adjoint() * aMinus;
    const Matrix half = 0.5 * (nPlus - nMinus);
    audit.hIntMinusHalfResidual = (proj * (-lz + half) * proj).norm();
    audit.hIntPlusHalfResidual = (proj * (-lz - half) * proj).norm();
    audit.hIntConvention =
        audit.hIntMinusHalfResidual <= audit.hIntPlusHalfResidual ? "minus_half" : "plus_half";

    // low spectrum of the quarter-frequency free Hamiltonian
    const Matrix h0 = 0.5 * (ops.px * ops.px + 0.25 * ops.x * ops.x) +
                      0.5 * (ops.py * ops.py + 0.25 * ops.y * ops.y);
    HermitianEigen eig = hermitian_eig(h0);
    std::vector<double> expected;
    const int maxTotal = 4;
    for (int total = 0; total <= maxTotal; ++total)
        for (int k = 0; k <= total; ++k)
            expected.push_back(total + 1.0);
    std::sort(expected.begin(), expected.end());
    double devHalf = 0.0, devFull = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        devHalf = std::max(devHalf, std::abs(eig.eigenvalues(i) - 0.5 * expected[i]));
        devFull = std::max(devFull, std::abs(eig.eigenvalues(i) - expected[i]));
    }
    audit.h0HalfSpectrumDeviation = devHalf;
    audit.h0FullSpectrumDeviation = devFull;
    return audit;
}

} // namespace modlab::landau
