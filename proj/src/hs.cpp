#include "modlab/hs.hpp"

#include <sstream>
#include <stdexcept>

namespace modlab {

namespace {
constexpr int kDensifyCap = 40;  // dim^4 entries past this get unreasonable

void require_densifiable(const OscillatorBasis& b, const char* where) {
    if (b.dim > kDensifyCap) {
        std::ostringstream msg;
        msg << where << ": refusing to build a " << b.dim * b.dim << "^2 dense superoperator";
        throw std::invalid_argument(msg.str());
    }
}
} // namespace

HsElement::HsElement(const OscillatorBasis& b, Matrix m) : basis(b), mat(std::move(m)) {
    if (mat.rows() != basis.dim || mat.cols() != basis.dim)
        throw std::invalid_argument("HsElement entries must be dim x dim");
    if (!mat.allFinite())
        throw std::invalid_argument("HsElement entries must be finite");
}

HsElement HsElement::zero(const OscillatorBasis& b) {
    return {b, Matrix::Zero(b.dim, b.dim)};
}

HsElement operator+(const HsElement& x, const HsElement& y) {
    require_same_basis(x.basis, y.basis, "HsElement+");
    return {x.basis, x.mat + y.mat};
}

HsElement operator-(const HsElement& x, const HsElement& y) {
    require_same_basis(x.basis, y.basis, "HsElement-");
    return {x.basis, x.mat - y.mat};
}

HsElement operator*(Complex c, const HsElement& x) {
    return {x.basis, c * x.mat};
}

HsElement matrix_unit(int i, int j, const OscillatorBasis& b) {
    if (i < 0 || j < 0 || i >= b.dim || j >= b.dim) {
        std::ostringstream msg;
        msg << "matrix_unit: index (" << i << ", " << j << ") out of range for dim " << b.dim;
        throw std::out_of_range(msg.str());
    }
    Matrix m = Matrix::Zero(b.dim, b.dim);
    m(i, j) = 1.0;
    return {b, m};
}

Complex hs_inner(const HsElement& x, const HsElement& y) {
    require_same_basis(x.basis, y.basis, "hs_inner");
    return (x.mat.adjoint() * y.mat).trace();
}

double hs_norm(const HsElement& x) { return x.mat.norm(); }

Vector hs_coords(const HsElement& x) {
    const int d = x.dim();
    Vector v(d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            v(hs_flat_index(i, j, d)) = x.mat(i, j);
    return v;
}

HsElement hs_from_coords(const OscillatorBasis& b, const Vector& coords) {
    if (coords.size() != Eigen::Index(b.dim) * b.dim)
        throw std::invalid_argument("hs_from_coords: coordinate length must be dim^2");
    Matrix m(b.dim, b.dim);
    for (int i = 0; i < b.dim; ++i)
        for (int j = 0; j < b.dim; ++j)
            m(i, j) = coords(hs_flat_index(i, j, b.dim));
    return {b, m};
}

FactorizedSuperOp::FactorizedSuperOp(TruncatedOperator l, TruncatedOperator r)
    : left(std::move(l)), right(std::move(r)) {
    require_same_basis(left.basis, right.basis, "FactorizedSuperOp");
}

FactorizedSuperOp vee(const TruncatedOperator& a, const TruncatedOperator& b) {
    return {a, b};
}

HsElement apply_super(const FactorizedSuperOp& s, const HsElement& x) {
    require_same_basis(s.basis(), x.basis, "apply_super");
    return {x.basis, s.left.mat * x.mat * s.right.mat.adjoint()};
}

FactorizedSuperOp super_adjoint(const FactorizedSuperOp& s) {
    return {s.left.adjoint(), s.right.adjoint()};
}

FactorizedSuperOp super_compose(const FactorizedSuperOp& s1, const FactorizedSuperOp& s2) {
    require_same_basis(s1.basis(), s2.basis(), "super_compose");
    return {s1.left * s2.left, s1.right * s2.right};
}

FactorizedSuperOp lift_left(const TruncatedOperator& a) {
    return {a, TruncatedOperator::identity(a.basis)};
}

FactorizedSuperOp lift_right(const TruncatedOperator& a) {
    return {TruncatedOperator::identity(a.basis), a};
}

DenseSuperOp::DenseSuperOp(const OscillatorBasis& b, Matrix m) : basis(b), mat(std::move(m)) {
    const Eigen::Index d2 = Eigen::Index(b.dim) * b.dim;
    if (mat.rows() != d2 || mat.cols() != d2)
        throw std::invalid_argument("DenseSuperOp must be dim^2 x dim^2");
}

DenseSuperOp DenseSuperOp::identity(const OscillatorBasis& b) {
    const Eigen::Index d2 = Eigen::Index(b.dim) * b.dim;
    return {b, Matrix::Identity(d2, d2)};
}

HsElement DenseSuperOp::apply(const HsElement& x) const {
    require_same_basis(basis, x.basis, "DenseSuperOp::apply");
    return hs_from_coords(basis, mat * hs_coords(x));
}

DenseSuperOp densify(const FactorizedSuperOp& s) {
    require_densifiable(s.basis(), "densify");
    const int d = s.dim();
    Matrix m(d * d, d * d);
    // (A v B) in coordinates: M[(i,j),(k,l)] = A(i,k) conj(B(j,l))
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l)
                    m(hs_flat_index(i, j, d), hs_flat_index(k, l, d)) =
                        s.left.mat(i, k) * std::conj(s.right.mat(j, l));
    return {s.basis(), m};
}

DenseSuperOp compose(const DenseSuperOp& a, const DenseSuperOp& b) {
    require_same_basis(a.basis, b.basis, "compose(DenseSuperOp)");
    return {a.basis, a.mat * b.mat};
}

AntilinearMap::AntilinearMap(const OscillatorBasis& b, Matrix linear)
    : basis(b), linearPart(std::move(linear)) {
    const Eigen::Index d2 = Eigen::Index(b.dim) * b.dim;
    if (linearPart.rows() != d2 || linearPart.cols() != d2)
        throw std::invalid_argument("AntilinearMap linear part must be dim^2 x dim^2");
}

HsElement AntilinearMap::apply(const HsElement& x) const {
    require_same_basis(basis, x.basis, "AntilinearMap::apply");
    return hs_from_coords(basis, linearPart * hs_coords(x).conjugate());
}

AntilinearMap antilinear_adjoint(const AntilinearMap& t) {
    return {t.basis, t.linearPart.transpose()};
}

AntilinearMap compose(const DenseSuperOp& a, const AntilinearMap& t) {
    require_same_basis(a.basis, t.basis, "compose(linear, antilinear)");
    return {t.basis, a.mat * t.linearPart};
}

AntilinearMap compose(const AntilinearMap& t, const DenseSuperOp& a) {
    require_same_basis(a.basis, t.basis, "compose(antilinear, linear)");
    return {t.basis, t.linearPart * a.mat.conjugate()};
}

DenseSuperOp compose(const AntilinearMap& s, const AntilinearMap& t) {
    require_same_basis(s.basis, t.basis, "compose(antilinear, antilinear)");
    return {s.basis, s.linearPart * t.linearPart.conjugate()};
}

AntilinearMap modular_conjugation(const OscillatorBasis& b) {
    require_densifiable(b, "modular_conjugation");
    const int d = b.dim;
    Matrix perm = Matrix::Zero(d * d, d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            perm(hs_flat_index(i, j, d), hs_flat_index(j, i, d)) = 1.0;
    return {b, perm};
}

HsElement adjoint_map(const HsElement& x) {
    return {x.basis, x.mat.adjoint()};
}

FactorFit best_left_factor(const DenseSuperOp& m) {
    const int d = m.dim();
    Matrix a = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            Complex acc = 0.0;
            for (int j = 0; j < d; ++j)
                acc += m.mat(hs_flat_index(i, j, d), hs_flat_index(k, j, d));
            a(i, k) = acc / double(d);
        }
    TruncatedOperator fit{m.basis, a};
    double residual = (m.mat - densify(lift_left(fit)).mat).norm();
    return {fit, residual};
}

FactorFit best_right_factor(const DenseSuperOp& m) {
    const int d = m.dim();
    Matrix bconj = Matrix::Zero(d, d);
    for (int j = 0; j < d; ++j)
        for (int l = 0; l < d; ++l) {
            Complex acc = 0.0;
            for (int i = 0; i < d; ++i)
                acc += m.mat(hs_flat_index(i, j, d), hs_flat_index(i, l, d));
            bconj(j, l) = acc / double(d);
        }
    TruncatedOperator fit{m.basis, bconj.conjugate()};
    double residual = (m.mat - densify(lift_right(fit)).mat).norm();
    return {fit, residual};
}

std::optional<TruncatedOperator> solve_right_match(const TruncatedOperator& a, double relTol) {
    DenseSuperOp target = densify(lift_left(a));
    FactorFit fit = best_right_factor(target);
    const double scale = std::max(target.mat.norm(), 1e-300);
    if (fit.residual > relTol * scale) return std::nullopt;
    return fit.op;
}

double center_residual(const OscillatorBasis& b, int samples, Rng& rng) {
    if (samples < 1)
        throw std::invalid_argument("center_residual: samples must be >= 1");
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        Matrix m(b.dim, b.dim);
        if (s == 0) {
            // known coincidence: a scalar multiple of the identity
            m = rng.complexGaussian() * Matrix::Identity(b.dim, b.dim);
        } else {
            for (int i = 0; i < b.dim; ++i)
                for (int j = 0; j < b.dim; ++j)
                    m(i, j) = rng.complexGaussian();
        }
        TruncatedOperator a{b, m};
        if (!solve_right_match(a)) continue;
        Complex scalar = a.trace() / double(b.dim);
        double deviation = (a.mat - scalar * Matrix::Identity(b.dim, b.dim)).norm();
        worst = std::max(worst, deviation);
    }
    return worst;
}

} // namespace modlab
