#include <doctest.h>

#include <cmath>

#include "modlab/hs.hpp"
#include "oracle_helpers.hpp"

using namespace modlab;

namespace {
HsElement random_element(const OscillatorBasis& b, Rng& rng) {
    Matrix m(b.dim, b.dim);
    for (int i = 0; i < b.dim; ++i)
        for (int j = 0; j < b.dim; ++j) m(i, j) = rng.complexGaussian();
    return {b, m};
}

TruncatedOperator random_operator(const OscillatorBasis& b, Rng& rng) {
    return {b, random_element(b, rng).mat};
}
} // namespace

TEST_CASE("matrix units and the trace inner product") {
    OscillatorBasis b(3);
    HsElement x01 = matrix_unit(0, 1, b);
    CHECK(oracle::cdist(x01.mat(0, 1), 1.0) == 0.0);
    CHECK(x01.mat.cwiseAbs().sum() == 1.0);
    CHECK_THROWS_AS(matrix_unit(3, 0, b), std::out_of_range);
    CHECK_THROWS_AS(matrix_unit(0, -1, b), std::out_of_range);

    CHECK(oracle::cdist(hs_inner(x01, x01), 1.0) == 0.0);
    CHECK(oracle::cdist(hs_inner(x01, matrix_unit(1, 0, b)), 0.0) == 0.0);
    CHECK(oracle::cdist(hs_inner(matrix_unit(0, 0, b), matrix_unit(0, 0, b)), 1.0) == 0.0);

    // X = X_00 + 2i X_11: <X, X> = 1 + 4 = 5
    HsElement x = matrix_unit(0, 0, b) + Complex(0, 2) * matrix_unit(1, 1, b);
    CHECK(oracle::cdist(hs_inner(x, x), 5.0) < 1e-15);

    // conjugate-linear in the first argument
    Rng rng(3);
    HsElement y = random_element(b, rng);
    CHECK(oracle::cdist(hs_inner(Complex(0, 1) * x, y), std::conj(Complex(0, 1)) * hs_inner(x, y)) <
          1e-14);

    OscillatorBasis other(4);
    CHECK_THROWS_AS(hs_inner(x01, matrix_unit(0, 0, other)), std::invalid_argument);
}

TEST_CASE("orthonormality and completeness of the matrix-unit basis") {
    OscillatorBasis b(4);
    double worst = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l) {
                    Complex g = hs_inner(matrix_unit(i, j, b), matrix_unit(k, l, b));
                    worst = std::max(worst,
                                     std::abs(g - Complex(i == k && j == l ? 1.0 : 0.0)));
                }
    CHECK(worst == 0.0);

    Rng rng(9);
    HsElement z = random_element(b, rng);
    HsElement rebuilt = HsElement::zero(b);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            HsElement unit = matrix_unit(i, j, b);
            rebuilt = rebuilt + hs_inner(unit, z) * unit;
        }
    CHECK(hs_norm(rebuilt - z) == 0.0);
}

TEST_CASE("coordinates are row-major") {
    OscillatorBasis b(3);
    Vector c = hs_coords(matrix_unit(0, 1, b));
    CHECK(oracle::cdist(c(1), 1.0) == 0.0);
    CHECK(c.cwiseAbs().sum() == 1.0);
    Rng rng(1);
    HsElement x = random_element(b, rng);
    CHECK(hs_norm(hs_from_coords(b, hs_coords(x)) - x) == 0.0);
}

TEST_CASE("factorized superoperators act as A X B^dag") {
    OscillatorBasis b(3);
    Rng rng(7);
    HsElement x = random_element(b, rng);

    CHECK(hs_norm(apply_super(vee(TruncatedOperator::identity(b),
                                  TruncatedOperator::identity(b)), x) - x) == 0.0);

    // projector sandwich: |0><0| X_01 |1><1| = X_01
    FactorizedSuperOp proj = vee({b, matrix_unit(0, 0, b).mat}, {b, matrix_unit(1, 1, b).mat});
    CHECK(hs_norm(apply_super(proj, matrix_unit(0, 1, b)) - matrix_unit(0, 1, b)) == 0.0);

    // a X_11 a^dag = X_00
    auto [a, adag] = build_ladder(b);
    HsElement image = apply_super(vee(a, a), matrix_unit(1, 1, b));
    CHECK(hs_norm(image - matrix_unit(0, 0, b)) < 1e-15);
}

TEST_CASE("superoperator adjoint and composition") {
    OscillatorBasis b(4);
    auto [a, adag] = build_ladder(b);
    FactorizedSuperOp lifted = lift_left(a);
    FactorizedSuperOp adj = super_adjoint(lifted);
    CHECK((adj.left.mat - adag.mat).norm() == 0.0);
    CHECK((adj.right.mat - Matrix::Identity(4, 4)).norm() == 0.0);

    FactorizedSuperOp composed = super_compose(lift_left(a), lift_left(adag));
    CHECK((composed.left.mat - a.mat * adag.mat).norm() == 0.0);

    Rng rng(21);
    for (int trial = 0; trial < 5; ++trial) {
        FactorizedSuperOp s = vee(random_operator(b, rng), random_operator(b, rng));
        HsElement x = random_element(b, rng);
        HsElement y = random_element(b, rng);
        CHECK(oracle::cdist(hs_inner(apply_super(s, x), y),
                            hs_inner(x, apply_super(super_adjoint(s), y))) <= 1e-10);
    }

    // associativity on random triples
    for (int trial = 0; trial < 5; ++trial) {
        FactorizedSuperOp s1 = vee(random_operator(b, rng), random_operator(b, rng));
        FactorizedSuperOp s2 = vee(random_operator(b, rng), random_operator(b, rng));
        FactorizedSuperOp s3 = vee(random_operator(b, rng), random_operator(b, rng));
        FactorizedSuperOp left = super_compose(super_compose(s1, s2), s3);
        FactorizedSuperOp right = super_compose(s1, super_compose(s2, s3));
        CHECK((left.left.mat - right.left.mat).norm() <= 1e-12 * left.left.mat.norm());
        CHECK((left.right.mat - right.right.mat).norm() <= 1e-12 * left.right.mat.norm());
    }

    // norm bound ||(A v B)(X)|| <= ||A|| ||B|| ||X||
    for (int trial = 0; trial < 5; ++trial) {
        TruncatedOperator op1 = random_operator(b, rng);
        TruncatedOperator op2 = random_operator(b, rng);
        HsElement x = random_element(b, rng);
        CHECK(hs_norm(apply_super(vee(op1, op2), x)) <=
              op1.operatorNorm() * op2.operatorNorm() * hs_norm(x) * (1 + 1e-12));
    }
}

TEST_CASE("left and right algebras commute") {
    OscillatorBasis b(4);
    Rng rng(33);
    HsElement x = random_element(b, rng);
    CHECK(hs_norm(apply_super(lift_left(TruncatedOperator::identity(b)), x) - x) == 0.0);

    for (int trial = 0; trial < 5; ++trial) {
        DenseSuperOp left = densify(lift_left(random_operator(b, rng)));
        DenseSuperOp right = densify(lift_right(random_operator(b, rng)));
        CHECK((left.mat * right.mat - right.mat * left.mat).norm() <= 1e-12);
    }

    // right lift moves the column label: X_00 a = X_01
    auto [a, adag] = build_ladder(b);
    HsElement image = apply_super(lift_right(adag), matrix_unit(0, 0, b));
    CHECK(hs_norm(image - matrix_unit(0, 1, b)) == 0.0);
    // while X_00 a^dag annihilates the ground column
    CHECK(hs_norm(apply_super(lift_right(a), matrix_unit(0, 0, b))) == 0.0);
}

TEST_CASE("densification matches column-by-column matrixization") {
    OscillatorBasis b(3);
    Rng rng(13);
    for (int trial = 0; trial < 4; ++trial) {
        FactorizedSuperOp s = vee(random_operator(b, rng), random_operator(b, rng));
        CHECK((densify(s).mat - oracle::densify_by_columns(s)).norm() <= 1e-13);
    }
}

TEST_CASE("modular conjugation") {
    OscillatorBasis b(4);
    AntilinearMap jay = modular_conjugation(b);

    CHECK(hs_norm(jay.apply(matrix_unit(0, 1, b)) - matrix_unit(1, 0, b)) == 0.0);
    CHECK(hs_norm(jay.apply(Complex(0, 1) * matrix_unit(0, 0, b)) -
                  Complex(0, -1) * matrix_unit(0, 0, b)) == 0.0);

    // J^2 = identity, exactly
    DenseSuperOp jsq = compose(jay, jay);
    CHECK((jsq.mat - DenseSuperOp::identity(b).mat).norm() == 0.0);

    Rng rng(2);
    // J(X) = X^dag: the two routes coincide
    for (int trial = 0; trial < 4; ++trial) {
        HsElement x = random_element(b, rng);
        CHECK(hs_norm(jay.apply(x) - adjoint_map(x)) == 0.0);
    }

    // antiunitarity <JX, JY> = <Y, X>
    for (int trial = 0; trial < 4; ++trial) {
        HsElement x = random_element(b, rng);
        HsElement y = random_element(b, rng);
        CHECK(oracle::cdist(hs_inner(jay.apply(x), jay.apply(y)), hs_inner(y, x)) <= 1e-12);
        CHECK(std::abs(hs_norm(jay.apply(x)) - hs_norm(x)) <= 1e-12);
    }

    // J (A v I) J = I v A
    for (int trial = 0; trial < 4; ++trial) {
        TruncatedOperator a = random_operator(b, rng);
        DenseSuperOp conjugated = compose(jay, compose(densify(lift_left(a)), jay));
        CHECK((conjugated.mat - densify(lift_right(a)).mat).norm() <= 1e-12);
    }
}

TEST_CASE("antilinear adjoint pairing") {
    OscillatorBasis b(3);
    Rng rng(40);
    Matrix linear(9, 9);
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j) linear(i, j) = rng.complexGaussian();
    AntilinearMap t{b, linear};
    AntilinearMap tStar = antilinear_adjoint(t);
    for (int trial = 0; trial < 5; ++trial) {
        HsElement x = random_element(b, rng);
        HsElement y = random_element(b, rng);
        CHECK(oracle::cdist(hs_inner(t.apply(x), y), hs_inner(tStar.apply(y), x)) <= 1e-12);
    }
}

TEST_CASE("factor fits recover pure lifts") {
    OscillatorBasis b(4);
    Rng rng(55);
    TruncatedOperator a = random_operator(b, rng);

    FactorFit leftFit = best_left_factor(densify(lift_left(a)));
    CHECK((leftFit.op.mat - a.mat).norm() <= 1e-12 * a.mat.norm());
    CHECK(leftFit.residual <= 1e-12);

    FactorFit rightFit = best_right_factor(densify(lift_right(a)));
    CHECK((rightFit.op.mat - a.mat).norm() <= 1e-12 * a.mat.norm());
    CHECK(rightFit.residual <= 1e-12);

    // a generic two-sided superoperator is not a pure lift
    FactorizedSuperOp generic = vee(a, random_operator(b, rng));
    CHECK(best_left_factor(densify(generic)).residual > 1e-3);
}

TEST_CASE("center scan: only scalars satisfy A v I = I v B") {
    OscillatorBasis b(2);
    auto [a, adag] = build_ladder(b);

    // exhaustive over the matrix-unit basis at dim 2
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            TruncatedOperator unit{b, matrix_unit(i, j, b).mat};
            CHECK_FALSE(solve_right_match(unit).has_value());
        }
    CHECK_FALSE(solve_right_match(a).has_value());

    TruncatedOperator scalar{b, Complex(0.7, -0.3) * Matrix::Identity(2, 2)};
    auto match = solve_right_match(scalar);
    REQUIRE(match.has_value());
    CHECK((densify(lift_left(scalar)).mat - densify(lift_right(*match)).mat).norm() <= 1e-10);

    Rng rng(77);
    CHECK(center_residual(b, 16, rng) <= 1e-12);
    Rng rng2(78);
    CHECK(center_residual(OscillatorBasis(4), 8, rng2) <= 1e-12);
}
