#include <doctest.h>

#include <cmath>

#include "modlab/modular.hpp"
#include "oracle_helpers.hpp"

using namespace modlab;
using namespace modlab::modular;

namespace {
TruncatedOperator random_operator(const OscillatorBasis& b, Rng& rng) {
    Matrix m(b.dim, b.dim);
    for (int i = 0; i < b.dim; ++i)
        for (int j = 0; j < b.dim; ++j) m(i, j) = rng.complexGaussian();
    return {b, m};
}

WeightSequence uniform_weights(int dim, double beta) {
    return weight_sequence(OscillatorBasis(dim), RealVector::Ones(dim), beta);
}
} // namespace

TEST_CASE("gibbs weights") {
    OscillatorBasis b(8);
    WeightSequence w = gibbs_weights(b, 1.0);
    CHECK(std::abs(w.weights.sum() - 1.0) <= 1e-12);

    // untruncated closed form recovered through the renormalization constant
    CHECK(w.weights(0) * w.rawSum == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
    CHECK(w.weights(0) * w.rawSum == doctest::Approx(0.6321205588285577).epsilon(1e-12));

    for (double beta : {0.5, 1.0, 2.0}) {
        WeightSequence wb = gibbs_weights(b, beta);
        for (int n = 0; n + 1 < b.dim; ++n)
            CHECK(wb.weights(n) / wb.weights(n + 1) ==
                  doctest::Approx(std::exp(beta)).epsilon(1e-12));
    }

    CHECK_THROWS_AS(gibbs_weights(b, 0.0), std::domain_error);
    CHECK_THROWS_AS(gibbs_weights(b, -0.5), std::domain_error);
    CHECK_THROWS_AS(weight_sequence(b, RealVector::Zero(8), 1.0), std::domain_error);
}

TEST_CASE("kms vector") {
    WeightSequence uniform = uniform_weights(2, 1.0);
    HsElement phi2 = kms_vector(uniform);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(hs_norm(phi2 - (s * (matrix_unit(0, 0, uniform.basis) +
                               matrix_unit(1, 1, uniform.basis)))) <= 1e-15);

    WeightSequence w = gibbs_weights(OscillatorBasis(3), 1.0);
    HsElement phi = kms_vector(w);
    for (int i = 0; i < 3; ++i)
        CHECK(oracle::cdist(phi.mat(i, i), std::sqrt(w.weights(i))) == 0.0);
    CHECK(oracle::cdist(hs_inner(phi, phi), 1.0) <= 1e-12);
}

TEST_CASE("state evaluation") {
    WeightSequence w = gibbs_weights(OscillatorBasis(3), 1.0);
    CHECK(oracle::cdist(state_eval(w, TruncatedOperator::identity(w.basis)), 1.0) <= 1e-14);
    CHECK(oracle::cdist(state_eval(w, {w.basis, matrix_unit(0, 0, w.basis).mat}), w.weights(0)) <=
          1e-14);
    auto [a, adag] = build_ladder(w.basis);
    CHECK(oracle::cdist(state_eval(w, a), 0.0) == 0.0);
}

TEST_CASE("modular hamiltonian") {
    WeightSequence uniform = uniform_weights(2, 1.0);
    TruncatedOperator h2 = modular_hamiltonian(uniform);
    CHECK(oracle::cdist(h2.mat(0, 0), std::log(2.0)) <= 1e-15);
    CHECK(oracle::cdist(h2.mat(1, 1), std::log(2.0)) <= 1e-15);

    // for Gibbs weights H_phi differs from H_osc by a constant:
    // -1/2 - ln(1 - e^{-beta})/beta, plus the truncation renormalization
    for (double beta : {0.5, 1.0, 2.0}) {
        const int dim = 7;
        WeightSequence w = gibbs_weights(OscillatorBasis(dim), beta);
        TruncatedOperator h = modular_hamiltonian(w);
        TruncatedOperator hosc = oscillator_hamiltonian(w.basis);
        Matrix diff = h.mat - hosc.mat;
        const double expected = -0.5 - std::log(1.0 - std::exp(-beta)) / beta +
                                std::log(w.rawSum) / beta;
        for (int n = 0; n < dim; ++n)
            CHECK(oracle::cdist(diff(n, n), expected) <= 1e-12);
        CHECK((diff - expected * Matrix::Identity(dim, dim)).norm() <= 1e-12);

        TruncatedOperator backToRho = matrix_function_hermitian(
            h, [beta](double x) { return Complex(std::exp(-beta * x)); });
        CHECK((backToRho.mat - density_operator(w).mat).norm() <= 1e-12);
    }
}

TEST_CASE("liouvillian eigenvalues and invariant vector") {
    const int dim = 5;
    WeightSequence w = gibbs_weights(OscillatorBasis(dim), 0.7);
    DenseSuperOp h = liouvillian(w);

    for (int i = 0; i < dim; ++i) {
        const int idx = hs_flat_index(i, i, dim);
        CHECK(oracle::cdist(h.mat(idx, idx), 0.0) <= 1e-14);
    }
    // Gibbs spacing: eigenvalue on X_ij is i - j, independent of beta
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            CHECK(oracle::cdist(h.mat(hs_flat_index(i, j, dim), hs_flat_index(i, j, dim)),
                                double(i - j)) <= 1e-12);

    CHECK(hs_norm(h.apply(kms_vector(w))) <= 1e-12);
}

TEST_CASE("modular operator: eigenvalues, closed form, exponential") {
    const int dim = 5;
    WeightSequence w = gibbs_weights(OscillatorBasis(dim), 1.0);
    DenseSuperOp delta = modular_operator(w);

    for (int i = 0; i < dim; ++i) {
        const int idx = hs_flat_index(i, i, dim);
        CHECK(oracle::cdist(delta.mat(idx, idx), 1.0) <= 1e-14);
    }
    // the sign audit: Delta X_01 = (alpha_0/alpha_1) X_01 = e^{+beta} X_01
    HsElement image = delta.apply(matrix_unit(0, 1, w.basis));
    CHECK(hs_norm(image - Complex(std::exp(1.0)) * matrix_unit(0, 1, w.basis)) <= 1e-12);

    Rng rng(4);
    for (int trial = 0; trial < 4; ++trial) {
        HsElement x{w.basis, random_operator(w.basis, rng).mat};
        CHECK(hs_norm(delta.apply(x) - modular_closed_form(w, x)) <=
              1e-10 * std::max(1.0, hs_norm(x)));
    }

    Matrix expRoute = matrix_function_hermitian(
        liouvillian(w).mat, [&](double x) { return Complex(std::exp(-w.beta * x)); });
    CHECK((expRoute - delta.mat).norm() <= 1e-10 * delta.mat.norm());
}

TEST_CASE("tomita operator basis action and closed form") {
    const int dim = 5;
    WeightSequence w = gibbs_weights(OscillatorBasis(dim), 1.0);
    AntilinearMap s = tomita_s(w);

    CHECK(hs_norm(s.apply(kms_vector(w)) - kms_vector(w)) <= 1e-13);

    HsElement image = s.apply(matrix_unit(0, 1, w.basis));
    CHECK(hs_norm(image - Complex(std::exp(0.5)) * matrix_unit(1, 0, w.basis)) <= 1e-12);
    CHECK(hs_norm(image - Complex(1.6487212707001282) * matrix_unit(1, 0, w.basis)) <= 1e-12);

    for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l) {
            HsElement unit = matrix_unit(k, l, w.basis);
            CHECK(hs_norm(s.apply(unit) - tomita_s_closed_form(w, unit)) <= 1e-10);
        }

    // S((A v I) Phi) = (A^dag v I) Phi
    Rng rng(8);
    HsElement phi = kms_vector(w);
    for (int trial = 0; trial < 5; ++trial) {
        TruncatedOperator a = random_operator(w.basis, rng);
        HsElement lhs = s.apply(apply_super(lift_left(a), phi));
        HsElement rhs = apply_super(lift_left(a.adjoint()), phi);
        CHECK(hs_norm(lhs - rhs) <= 1e-10 * std::max(1.0, hs_norm(rhs)));
    }
}

TEST_CASE("polar decomposition of the tomita operator") {
    // uniform weights: Delta = identity and S = J exactly
    WeightSequence uniform = uniform_weights(4, 1.0);
    PolarCheckReport uniformReport = polar_check(uniform);
    CHECK(uniformReport.vsComposition <= 1e-13);
    CHECK(uniformReport.pass);
    CHECK((tomita_s(uniform).linearPart - modular_conjugation(uniform.basis).linearPart).norm() <=
          1e-13);

    for (double beta : {0.5, 1.0, 2.0}) {
        WeightSequence w = gibbs_weights(OscillatorBasis(6), beta);
        PolarCheckReport report = polar_check(w);
        CHECK(report.vsComposition <= 1e-10);
        CHECK(report.vsPolarUnitary <= 1e-10);
        CHECK(report.vsPolarPositive <= 1e-10);
        CHECK(report.deltaVsStS <= 1e-10);
        CHECK(report.pass);
    }

    CHECK_NOTHROW(build_modular_structure(gibbs_weights(OscillatorBasis(8), 1.5)));
}

TEST_CASE("modular flow") {
    const int dim = 6;
    WeightSequence w = gibbs_weights(OscillatorBasis(dim), 1.0);
    auto [a, adag] = build_ladder(w.basis);

    FactorizedSuperOp lifted = lift_left({w.basis, matrix_unit(0, 1, w.basis).mat});
    FactorizedSuperOp frozen = modular_flow(w, 0.0, lifted);
    CHECK((frozen.left.mat - lifted.left.mat).norm() == 0.0);

    // Gibbs unit level spacing: alpha_t(X_01 v I) = e^{-it} X_01 v I
    const double t = 0.83;
    FactorizedSuperOp evolved = modular_flow(w, t, lifted);
    CHECK((evolved.left.mat - std::exp(Complex(0, -t)) * lifted.left.mat).norm() <= 1e-12);

    CHECK_THROWS_WITH_AS(modular_flow(w, 1.0, lift_right(a)), doctest::Contains("wrong algebra"),
                         std::invalid_argument);

    Rng rng(12);
    for (int trial = 0; trial < 4; ++trial) {
        TruncatedOperator op = random_operator(w.basis, rng);
        // group law
        FactorizedSuperOp ts = modular_flow(w, 0.4, modular_flow(w, 1.1, lift_left(op)));
        FactorizedSuperOp sum = modular_flow(w, 1.5, lift_left(op));
        CHECK((ts.left.mat - sum.left.mat).norm() <= 1e-10 * sum.left.mat.norm());
        // state invariance
        Complex before = state_eval(w, op);
        Complex after = state_eval(w, modular_flow(w, 2.7, lift_left(op)).left);
        CHECK(oracle::cdist(before, after) <= 1e-12);
    }

    // evolved left-lifted operators stay exactly left-factorized
    DenseSuperOp flowMap{w.basis, matrix_function_hermitian(
                                      liouvillian(w).mat,
                                      [](double x) { return std::exp(Complex(0, 1.3 * x)); })};
    for (int trial = 0; trial < 3; ++trial) {
        DenseSuperOp lifted2 = densify(lift_left(random_operator(w.basis, rng)));
        Matrix evolvedDense = flowMap.mat * lifted2.mat * flowMap.mat.adjoint();
        FactorFit fit = best_left_factor(DenseSuperOp{w.basis, evolvedDense});
        CHECK(fit.residual <= 1e-10 * evolvedDense.norm());
    }
}

TEST_CASE("kms function closed forms") {
    const int dim = 6;
    const double beta = 1.0;
    WeightSequence w = gibbs_weights(OscillatorBasis(dim), beta);
    TruncatedOperator id = TruncatedOperator::identity(w.basis);

    for (Complex z : {Complex(0.3, 0.0), Complex(-1.2, 0.4), Complex(0.0, beta)})
        CHECK(oracle::cdist(kms_function(w, id, id, z), 1.0) <= 1e-12);

    // hand-checkable instance: A = X_01, B = X_10, unit gap omega = 1
    TruncatedOperator x01{w.basis, matrix_unit(0, 1, w.basis).mat};
    TruncatedOperator x10{w.basis, matrix_unit(1, 0, w.basis).mat};
    for (double t : {-2.0, 0.0, 0.9}) {
        Complex f = kms_function(w, x01, x10, Complex(t, 0.0));
        CHECK(oracle::cdist(f, w.weights(0) * std::exp(Complex(0, t))) <= 1e-12);
        Complex fShift = kms_function(w, x01, x10, Complex(t, beta));
        CHECK(oracle::cdist(fShift, w.weights(1) * std::exp(Complex(0, t))) <= 1e-12);
        // boundary value equals phi(alpha_t(B) A)
        TruncatedOperator bEvolved = evolve_operator(w, Complex(t, 0.0), x10);
        Complex rhs = (density_operator(w).mat * bEvolved.mat * x01.mat).trace();
        CHECK(oracle::cdist(fShift, rhs) <= 1e-12);
    }

    // F(i beta / 2) is real positive for A = B^dag
    Rng rng(30);
    for (int trial = 0; trial < 4; ++trial) {
        TruncatedOperator b = random_operator(w.basis, rng);
        Complex f = kms_function(w, b.adjoint(), b, Complex(0.0, beta / 2.0));
        CHECK(f.real() > 0.0);
        CHECK(std::abs(f.imag()) <= 1e-12 * f.real());
    }
}

TEST_CASE("kms residual report") {
    const int dim = 8;
    WeightSequence w = gibbs_weights(OscillatorBasis(dim), 1.0);
    RealVector tGrid(21);
    for (int i = 0; i < 21; ++i) tGrid(i) = -5.0 + 0.5 * i;

    Rng rng(7);
    auto ensemble = kms_test_ensemble(w.basis, 6, rng);
    // interior matrix units plus the random polynomials
    CHECK(ensemble.size() == std::size_t((dim - 2) * (dim - 2) + 6));
    auto pairs = draw_pairs(ensemble, 12, rng);

    KmsReport report = kms_residual(w, pairs, tGrid);
    CHECK(report.maxResidual <= 1e-9);
    CHECK(report.maxInvariance <= 1e-12);
    CHECK(report.flowInvariance <= 1e-12);
    CHECK(report.analyticityResidual <= 1e-5);
    CHECK(report.pairs.size() == 12);

    std::vector<OperatorPair> trivial = {
        {"I | I", TruncatedOperator::identity(w.basis), TruncatedOperator::identity(w.basis)}};
    CHECK(kms_residual(w, trivial, tGrid).maxResidual <= 1e-14);

    // mismatched flow weights must light up the detector
    WeightSequence perturbed = gibbs_weights(w.basis, 1.1);
    KmsReport control = kms_residual_mismatched(w, perturbed, pairs, tGrid);
    CHECK(control.maxResidual > 1e-3);
}

TEST_CASE("faithfulness formula at brute-force scale") {
    const int dim = 4;
    WeightSequence w = gibbs_weights(OscillatorBasis(dim), 1.0);
    Rng rng(19);
    for (int trial = 0; trial < 6; ++trial) {
        TruncatedOperator a = random_operator(w.basis, rng);
        Complex viaState = state_eval(w, a.adjoint() * a);
        double viaSum = 0.0;
        for (int n = 0; n < dim; ++n) viaSum += w.weights(n) * a.mat.col(n).squaredNorm();
        CHECK(oracle::cdist(viaState, viaSum) <= 1e-12 * std::max(1.0, viaSum));
    }
    // vanishing only at zero, over the matrix-unit lattice
    for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l) {
            TruncatedOperator unit{w.basis, matrix_unit(k, l, w.basis).mat};
            CHECK(state_eval(w, unit.adjoint() * unit).real() > 0.0);
        }
}
