#include "modlab/quasi.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace modlab::quasi {

RealVector WeightFamily::raw_weights(int dim) const {
    RealVector raw(dim);
    switch (kind) {
        case WeightKind::gibbs: {
            const double prefactor = 1.0 - std::exp(-gibbsBeta);
            for (int n = 0; n < dim; ++n) raw(n) = prefactor * std::exp(-gibbsBeta * n);
            break;
        }
        case WeightKind::zeta: {
            for (int n = 0; n < dim; ++n) raw(n) = std::pow(n + 1.0, -zetaS);
            break;
        }
        case WeightKind::custom: {
            if (dim > static_cast<int>(customWeights.size())) {
                std::ostringstream msg;
                msg << "WeightFamily: custom weights defined only up to dim "
                    << customWeights.size() << ", requested " << dim;
                throw std::domain_error(msg.str());
            }
            for (int n = 0; n < dim; ++n) raw(n) = customWeights[n];
            break;
        }
    }
    return raw;
}

modular::WeightSequence WeightFamily::sequence(int dim) const {
    return modular::weight_sequence(OscillatorBasis(dim), raw_weights(dim), beta);
}

std::string WeightFamily::name() const {
    std::ostringstream out;
    switch (kind) {
        case WeightKind::gibbs: out << "gibbs(" << gibbsBeta << ")"; break;
        case WeightKind::zeta: out << "zeta(" << zetaS << ")"; break;
        case WeightKind::custom: out << "custom[" << customWeights.size() << "]"; break;
    }
    return out.str();
}

WeightFamily gibbs_family(double beta) {
    if (beta <= 0.0)
        throw std::domain_error("gibbs_family: beta must be positive");
    WeightFamily w;
    w.kind = WeightKind::gibbs;
    w.beta = beta;
    w.gibbsBeta = beta;
    return w;
}

WeightFamily zeta_family(double s, double beta) {
    if (s <= 1.0)
        throw std::domain_error("zeta_family: exponent must exceed 1 for a summable family");
    if (beta <= 0.0)
        throw std::domain_error("zeta_family: beta must be positive");
    WeightFamily w;
    w.kind = WeightKind::zeta;
    w.beta = beta;
    w.zetaS = s;
    return w;
}

WeightFamily custom_family(std::vector<double> weights, double beta) {
    if (weights.empty())
        throw std::domain_error("custom_family: need at least one weight");
    for (double v : weights)
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::domain_error("custom_family: weights must be strictly positive");
    if (beta <= 0.0)
        throw std::domain_error("custom_family: beta must be positive");
    WeightFamily w;
    w.kind = WeightKind::custom;
    w.beta = beta;
    w.customWeights = std::move(weights);
    return w;
}

TruncatedOperator OperatorRule::build(const OscillatorBasis& b) const {
    switch (kind) {
        case Kind::identity:
            return TruncatedOperator::identity(b);
        case Kind::number:
            return number_operator(b);
        case Kind::numberPower: {
            Matrix m = Matrix::Zero(b.dim, b.dim);
            for (int n = 0; n < b.dim; ++n) m(n, n) = std::pow(double(n), power);
            return {b, m};
        }
        case Kind::annihilation:
            return build_ladder(b).first;
        case Kind::creation:
            return build_ladder(b).second;
        case Kind::matrixUnit:
            return {b, matrix_unit(i, j, b).mat};
        case Kind::diagPower: {
            Matrix m = Matrix::Zero(b.dim, b.dim);
            for (int n = 0; n < b.dim; ++n) m(n, n) = std::pow(n + 1.0, exponent);
            return {b, m};
        }
        case Kind::rankOne: {
            if (static_cast<int>(u.size()) > b.dim || static_cast<int>(v.size()) > b.dim)
                throw std::invalid_argument("OperatorRule: rank-one vectors exceed dim");
            Vector uu = Vector::Zero(b.dim), vv = Vector::Zero(b.dim);
            for (std::size_t n = 0; n < u.size(); ++n) uu(n) = u[n];
            for (std::size_t n = 0; n < v.size(); ++n) vv(n) = v[n];
            return {b, uu * vv.adjoint()};
        }
    }
    throw std::logic_error("OperatorRule: unknown kind");
}

std::string OperatorRule::name() const {
    std::ostringstream out;
    switch (kind) {
        case Kind::identity: return "I";
        case Kind::number: return "N";
        case Kind::numberPower: out << "N^" << power; return out.str();
        case Kind::annihilation: return "a";
        case Kind::creation: return "adag";
        case Kind::matrixUnit: out << "X(" << i << "," << j << ")"; return out.str();
        case Kind::diagPower: out << "diag((n+1)^" << exponent << ")"; return out.str();
        case Kind::rankOne: out << "rankOne[" << u.size() << "]"; return out.str();
    }
    return "?";
}

OperatorRule rule_identity() { return {}; }
OperatorRule rule_number() { OperatorRule r; r.kind = OperatorRule::Kind::number; return r; }
OperatorRule rule_number_power(int power) {
    OperatorRule r;
    r.kind = OperatorRule::Kind::numberPower;
    r.power = power;
    return r;
}
OperatorRule rule_annihilation() { OperatorRule r; r.kind = OperatorRule::Kind::annihilation; return r; }
OperatorRule rule_creation() { OperatorRule r; r.kind = OperatorRule::Kind::creation; return r; }
OperatorRule rule_matrix_unit(int i, int j) {
    OperatorRule r;
    r.kind = OperatorRule::Kind::matrixUnit;
    r.i = i;
    r.j = j;
    return r;
}
OperatorRule rule_diag_power(double exponent) {
    OperatorRule r;
    r.kind = OperatorRule::Kind::diagPower;
    r.exponent = exponent;
    return r;
}
OperatorRule rule_rank_one(std::vector<Complex> u, std::vector<Complex> v) {
    OperatorRule r;
    r.kind = OperatorRule::Kind::rankOne;
    r.u = std::move(u);
    r.v = std::move(v);
    return r;
}

std::vector<OperatorRule> default_test_family() {
    return {rule_identity(), rule_number(), rule_number_power(2), rule_annihilation(),
            rule_creation()};
}

double SeminormSpec::f(double x) const {
    switch (family) {
        case Family::expDecay: return std::exp(-param * x);
        case Family::powerDecay: return std::pow(1.0 + x, -param);
    }
    return 0.0;
}

std::string SeminormSpec::name() const {
    std::ostringstream out;
    out << (family == Family::expDecay ? "exp(-" : "(1+x)^(-") << param
        << (family == Family::expDecay ? "x)" : ")");
    if (dualForm)
        out << " dual";
    else
        out << " k=" << k;
    return out.str();
}

double seminorm_value(const TruncatedOperator& x, const SeminormSpec& spec) {
    if (spec.param <= 0.0)
        throw std::domain_error("seminorm_value: decay parameter must be positive");
    if (spec.k < 0)
        throw std::domain_error("seminorm_value: k must be nonnegative");
    const int d = x.dim();
    Matrix fOfN = Matrix::Zero(d, d);
    Matrix nPowK = Matrix::Zero(d, d);
    for (int n = 0; n < d; ++n) {
        fOfN(n, n) = spec.f(double(n));
        nPowK(n, n) = std::pow(double(n), spec.k);
    }
    auto opNorm = [](const Matrix& m) { return m.jacobiSvd().singularValues()(0); };
    if (spec.dualForm) return opNorm(fOfN * x.mat * fOfN);
    return std::max(opNorm(fOfN * x.mat * nPowK), opNorm(nPowK * x.mat * fOfN));
}

const char* to_string(SweepVerdict v) {
    switch (v) {
        case SweepVerdict::converged: return "converged";
        case SweepVerdict::growing: return "growing";
        case SweepVerdict::inconclusive: return "inconclusive";
    }
    return "?";
}

const char* to_string(IdealVerdict v) {
    switch (v) {
        case IdealVerdict::member: return "member";
        case IdealVerdict::nonMember: return "non-member";
        case IdealVerdict::inconclusive: return "inconclusive";
    }
    return "?";
}

TruncationSweep classify_sweep(std::vector<int> dims, std::vector<double> values) {
    if (dims.size() < 3 || dims.size() != values.size())
        throw std::invalid_argument("classify_sweep: need >= 3 matched (dim, value) points");
    for (std::size_t k = 1; k < dims.size(); ++k)
        if (dims[k] <= dims[k - 1])
            throw std::invalid_argument("classify_sweep: dims must be strictly ascending");

    TruncationSweep sweep;
    sweep.dims = std::move(dims);
    sweep.values = std::move(values);

    // least-squares slope of log(value) vs log(dim) over the last three points
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const std::size_t n0 = sweep.dims.size() - 3;
    for (std::size_t k = n0; k < sweep.dims.size(); ++k) {
        double lx = std::log(double(sweep.dims[k]));
        double ly = std::log(std::max(sweep.values[k], 1e-300));
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    }
    const double slope = (3.0 * sxy - sx * sy) / (3.0 * sxx - sx * sx);
    sweep.growthExponent = slope;
    if (slope > 0.1)
        sweep.verdict = SweepVerdict::growing;
    else if (slope < 0.05)
        sweep.verdict = SweepVerdict::converged;
    else
        sweep.verdict = SweepVerdict::inconclusive;
    return sweep;
}

TruncationSweep seminorm_eval(const OperatorRule& x, const SeminormSpec& spec,
                              const std::vector<int>& dims) {
    std::vector<double> values;
    values.reserve(dims.size());
    for (int dim : dims)
        values.push_back(seminorm_value(x.build(OscillatorBasis(dim)), spec));
    return classify_sweep(dims, std::move(values));
}

IdealDiagnostic ideal_membership(const std::string& candidateName, const OperatorBuilder& candidate,
                                 const std::vector<OperatorRule>& testOps,
                                 const std::vector<int>& dims) {
    if (testOps.empty())
        throw std::invalid_argument("ideal_membership: need a nonempty test family");
    IdealDiagnostic diag;
    diag.candidate = candidateName;
    bool anyGrowing = false;
    bool allConverged = true;
    for (const OperatorRule& a : testOps)
        for (const OperatorRule& b : testOps) {
            std::vector<double> values;
            values.reserve(dims.size());
            for (int dim : dims) {
                OscillatorBasis basis(dim);
                TruncatedOperator x = candidate(basis);
                values.push_back(std::abs((a.build(basis).mat * x.mat * b.build(basis).mat).trace()));
            }
            TruncationSweep sweep = classify_sweep(dims, std::move(values));
            anyGrowing = anyGrowing || sweep.verdict == SweepVerdict::growing;
            allConverged = allConverged && sweep.verdict == SweepVerdict::converged;
            diag.testPairs.push_back("(" + a.name() + ", " + b.name() + ")");
            diag.traceSweeps.push_back(std::move(sweep));
        }
    diag.verdict = anyGrowing ? IdealVerdict::nonMember
                              : (allConverged ? IdealVerdict::member : IdealVerdict::inconclusive);
    return diag;
}

IdealDiagnostic ideal_membership(const OperatorRule& candidate,
                                 const std::vector<OperatorRule>& testOps,
                                 const std::vector<int>& dims) {
    return ideal_membership(candidate.name(),
                            [candidate](const OscillatorBasis& b) { return candidate.build(b); },
                            testOps, dims);
}

OperatorBuilder phi_diagonal_builder(const WeightFamily& w) {
    return [w](const OscillatorBasis& b) {
        modular::WeightSequence seq = w.sequence(b.dim);
        return TruncatedOperator{b, modular::kms_vector(seq).mat};
    };
}

Complex quasi_state(const WeightFamily& w, int dim, const TruncatedOperator& a, Side side,
                    const Tolerances& tol) {
    modular::WeightSequence seq = w.sequence(dim);
    require_same_basis(seq.basis, a.basis, "quasi_state");
    const Complex left = modular::state_eval(seq, a, tol);
    if (side == Side::left) return left;

    HsElement phi = modular::kms_vector(seq);
    const Complex right = std::conj(hs_inner(phi, apply_super(lift_right(a), phi)));
    if (std::abs(right - left) > tol.stateConsistency * std::max(1.0, std::abs(left))) {
        std::ostringstream msg;
        msg << "quasi_state: right state disagrees with left state by " << std::abs(right - left);
        throw std::logic_error(msg.str());
    }
    return right;
}

QuasiModular quasi_modular(const WeightFamily& w, int dim, bool strictPhiMembership) {
    // Sweep well past the working dimension: the N^2-weighted summands peak
    // around n ~ 4/beta, and the growth fit must see past that transient.
    const int start = std::max(dim, 16);
    std::vector<int> sweepDims = {start, 2 * start, 4 * start, 8 * start};
    IdealDiagnostic phiDiag =
        ideal_membership("Phi[" + w.name() + "]", phi_diagonal_builder(w), default_test_family(),
                         sweepDims);
    const bool inIdeal = phiDiag.verdict == IdealVerdict::member;
    if (strictPhiMembership && !inIdeal) {
        std::ostringstream msg;
        msg << "quasi_modular: Phi fails the trace-ideal sweep for " << w.name()
            << " (verdict " << to_string(phiDiag.verdict) << ")";
        throw std::domain_error(msg.str());
    }
    return {modular::build_modular_structure(w.sequence(dim)), std::move(phiDiag), inIdeal};
}

TruncatedOperator quasi_dynamics(const WeightFamily& w, int dim, double t,
                                 const TruncatedOperator& a) {
    return modular::evolve_operator(w.sequence(dim), Complex(t, 0.0), a);
}

modular::KmsReport quasi_kms_residual(const WeightFamily& w, int dim,
                                      const std::vector<modular::OperatorPair>& pairs,
                                      const RealVector& tGrid) {
    return modular::kms_residual(w.sequence(dim), pairs, tGrid);
}

double flow_factorization_residual(const WeightFamily& w, int dim, double t) {
    modular::WeightSequence seq = w.sequence(dim);
    DenseSuperOp h = modular::liouvillian(seq);
    Matrix lhs = matrix_function_hermitian(h.mat, [t](double x) {
        return std::exp(Complex(0.0, t * x));
    });
    TruncatedOperator hPhi = modular::modular_hamiltonian(seq);
    TruncatedOperator u = matrix_function_hermitian(hPhi, [t](double x) {
        return std::exp(Complex(0.0, t * x));
    });
    Matrix rhs = densify(vee(u, u)).mat;
    return (lhs - rhs).norm();
}

BoundednessReport boundedness_check(int samples, int dim, Rng& rng, const Tolerances& tol) {
    if (samples < 1)
        throw std::invalid_argument("boundedness_check: samples must be >= 1");
    OscillatorBasis basis(dim);
    BoundednessReport report;
    report.samples = samples;
    report.dim = dim;
    double worstExcess = -1e300;
    bool all = true;
    for (int s = 0; s < samples; ++s) {
        Matrix m(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) m(i, j) = rng.complexGaussian();
        TruncatedOperator x{basis, m};
        const double opNorm = x.operatorNorm();
        const double hsNorm = x.frobeniusNorm();
        worstExcess = std::max(worstExcess, opNorm - hsNorm);
        all = all && opNorm <= hsNorm + tol.stateConsistency * std::max(1.0, hsNorm);
    }
    report.maxExcess = worstExcess;
    report.allHold = all;
    return report;
}

StructureReport structure_property_checks(const WeightFamily& w, int dim, Rng& rng) {
    if (dim > 8)
        throw std::invalid_argument("structure_property_checks: brute-force scale is dim <= 8");
    modular::WeightSequence seq = w.sequence(dim);
    OscillatorBasis basis = seq.basis;
    HsElement phi = modular::kms_vector(seq);

    StructureReport report;
    report.dim = dim;

    // phi(A^dag A) = sum_n lambda_n ||A phi_n||^2 on random operators
    double identityResidual = 0.0;
    for (int s = 0; s < 8; ++s) {
        Matrix m(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) m(i, j) = rng.complexGaussian();
        TruncatedOperator a{basis, m};
        Complex viaState = modular::state_eval(seq, a.adjoint() * a);
        double viaSum = 0.0;
        for (int n = 0; n < dim; ++n) viaSum += seq.weights(n) * m.col(n).squaredNorm();
        identityResidual = std::max(identityResidual, std::abs(viaState - viaSum));
    }
    report.faithfulnessIdentityResidual = identityResidual;

    bool faithful = true;
    for (int k = 0; k < dim && faithful; ++k)
        for (int l = 0; l < dim && faithful; ++l) {
            TruncatedOperator unit{basis, matrix_unit(k, l, basis).mat};
            Complex value = modular::state_eval(seq, unit.adjoint() * unit);
            faithful = value.real() > 0.0;
        }
    report.faithful = faithful;

    // Gram matrix of the orbit {(X_kl v 1) Phi}
    const int d2 = dim * dim;
    Matrix orbit(d2, d2);
    for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l) {
            HsElement v = apply_super(lift_left({basis, matrix_unit(k, l, basis).mat}), phi);
            orbit.col(hs_flat_index(k, l, dim)) = hs_coords(v);
        }
    Matrix gram = orbit.adjoint() * orbit;
    Eigen::SelfAdjointEigenSolver<Matrix> gramEig(gram);
    const double gramThreshold = 1e-12 * std::max(1.0, gramEig.eigenvalues().maxCoeff());
    int rank = 0;
    for (Eigen::Index k = 0; k < gramEig.eigenvalues().size(); ++k)
        if (gramEig.eigenvalues()(k) > gramThreshold) ++rank;
    report.gramRank = rank;
    report.cyclic = rank == d2;

    // separating: smallest singular value of A -> (A v 1) Phi over coordinates
    Eigen::JacobiSVD<Matrix> svd(orbit);
    report.separatingSmallestSingular = svd.singularValues()(svd.singularValues().size() - 1);
    report.separating = report.separatingSmallestSingular > 0.0;

    double ortho = 0.0;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            for (int k = 0; k < dim; ++k)
                for (int l = 0; l < dim; ++l) {
                    Complex g = hs_inner(matrix_unit(i, j, basis), matrix_unit(k, l, basis));
                    Complex expected = (i == k && j == l) ? 1.0 : 0.0;
                    ortho = std::max(ortho, std::abs(g - expected));
                }
    report.orthonormalityDeviation = ortho;

    // completeness: expansion over the X_ij reconstructs a random element
    Matrix zm(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) zm(i, j) = rng.complexGaussian();
    HsElement z{basis, zm};
    HsElement rebuilt = HsElement::zero(basis);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            HsElement unit = matrix_unit(i, j, basis);
            rebuilt = rebuilt + hs_inner(unit, z) * unit;
        }
    report.completenessResidual = hs_norm(rebuilt - z);
    return report;
}

} // namespace modlab::quasi
