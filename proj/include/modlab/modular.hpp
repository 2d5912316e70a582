#pragma once

#include <string>
#include <utility>
#include <vector>

#include "modlab/hs.hpp"

namespace modlab::modular {

// Strictly positive weights alpha_i, renormalized at construction to sum to 1
// over the truncation. rawSum keeps the pre-normalization total so reports can
// expose the renormalization constant.
struct WeightSequence {
    OscillatorBasis basis;
    RealVector weights;
    double beta;
    double rawSum;

    int dim() const { return basis.dim; }
};

WeightSequence weight_sequence(const OscillatorBasis& b, const RealVector& raw, double beta);

// alpha_n proportional to e^{-n beta} (the Gibbs choice), renormalized over
// the truncation.
WeightSequence gibbs_weights(const OscillatorBasis& b, double beta);

// Phi = sum_i sqrt(alpha_i) X_ii, a unit vector of the HS space.
HsElement kms_vector(const WeightSequence& w);

// rho = sum_i alpha_i P_i
TruncatedOperator density_operator(const WeightSequence& w);

// phi(A) = <Phi, (A v I) Phi>_2; cross-checked against Tr[rho A] at every
// call (a mismatch means an implementation bug, not bad input).
Complex state_eval(const WeightSequence& w, const TruncatedOperator& a,
                   const Tolerances& tol = default_tolerances());

// H_phi = -(1/beta) sum_i ln(alpha_i) P_i, so that e^{-beta H_phi} = rho.
TruncatedOperator modular_hamiltonian(const WeightSequence& w);

// h_phi = H_phi v I - I v H_phi, diagonal over the X_ij coordinates with
// eigenvalue -(1/beta) ln(alpha_i / alpha_j); annihilates Phi.
DenseSuperOp liouvillian(const WeightSequence& w);

// Delta = e^{-beta h_phi}, diagonal with eigenvalues alpha_i / alpha_j.
DenseSuperOp modular_operator(const WeightSequence& w);

// S(X_kl) = (alpha_k / alpha_l)^{1/2} X_lk, extended antilinearly.
AntilinearMap tomita_s(const WeightSequence& w);

// Closed forms derived from the basis actions; implemented independently so
// the two routes can be cross-checked.
HsElement tomita_s_closed_form(const WeightSequence& w, const HsElement& x);   // rho^{-1/2} X^dag rho^{1/2}
HsElement modular_closed_form(const WeightSequence& w, const HsElement& x);    // rho X rho^{-1}

// The assembled modular data of a weight sequence.
struct ModularStructure {
    WeightSequence w;
    HsElement phi;
    TruncatedOperator rho;
    TruncatedOperator hPhi;
    DenseSuperOp h;          // the superoperator Hamiltonian h_phi
    DenseSuperOp delta;
    AntilinearMap jay;
    AntilinearMap tomitaS;
};
ModularStructure build_modular_structure(const WeightSequence& w,
                                         const Tolerances& tol = default_tolerances());

// Verifies the polar decomposition S = J Delta^{1/2} three ways: against the
// composed maps, against an SVD-based polar decomposition of the matrixized
// linear part, and via Delta = S* S. Residuals are relative to the operand
// norms (Delta's entries reach e^{beta(dim-1)}). Failures are reported, not
// thrown.
struct PolarCheckReport {
    double vsComposition;    // ||S - J Delta^{1/2}|| / ||S|| over linear parts
    double vsPolarUnitary;   // ||U - J|| / ||J|| from polar_decompose of S
    double vsPolarPositive;  // ||P - Delta^{1/2}|| / ||Delta^{1/2}||
    double deltaVsStS;       // ||Delta - S* S|| / ||Delta||
    bool pass;
};
PolarCheckReport polar_check(const WeightSequence& w,
                             const Tolerances& tol = default_tolerances());

// e^{izH} A e^{-izH} through the spectral calculus of the diagonal H_phi;
// exact at truncation for complex z.
TruncatedOperator evolve_operator(const WeightSequence& w, Complex z, const TruncatedOperator& a);

// alpha_t on the left algebra. Rejects right-lifted input.
FactorizedSuperOp modular_flow(const WeightSequence& w, double t, const FactorizedSuperOp& s,
                               const Tolerances& tol = default_tolerances());

// F_{A,B}(z) = phi(A alpha_z(B)), entire in z at finite truncation.
Complex kms_function(const WeightSequence& w, const TruncatedOperator& a,
                     const TruncatedOperator& b, Complex z);

struct NamedOperator {
    std::string name;
    TruncatedOperator op;
};

struct OperatorPair {
    std::string name;
    TruncatedOperator a;
    TruncatedOperator b;
};

// Default test ensemble: every X_kl supported on levels k, l < dim-2, plus
// HS-normalized random degree-<=2 polynomials in a, a^dag compressed to the
// same interior block (truncation-edge artifacts stay out of the flow).
std::vector<NamedOperator> kms_test_ensemble(const OscillatorBasis& b, int randomCount, Rng& rng);

std::vector<OperatorPair> draw_pairs(const std::vector<NamedOperator>& ensemble,
                                     int count, Rng& rng);

// The hand-checkable pair (X_01, X_10): F(t) = alpha_0 e^{it}, F(t + i beta)
// = alpha_1 e^{it}. Pinned into every KMS run so the negative control always
// sees a weight-sensitive pair.
OperatorPair canonical_kms_pair(const OscillatorBasis& b);

struct KmsReport {
    double beta = 0.0;
    int dim = 0;
    RealVector weights;
    RealVector tGrid;
    std::vector<std::string> pairs;
    std::vector<double> residuals;            // per pair: max_t |phi(A alpha_{t+i beta}(B)) - phi(alpha_t(B) A)|
    std::vector<double> invarianceResiduals;  // per pair: max_t |phi(alpha_t(A)) - phi(A)|
    double maxResidual = 0.0;
    double maxInvariance = 0.0;
    double flowInvariance = 0.0;              // max_t ||e^{ith}(Phi) - Phi||_2
    double analyticityResidual = 0.0;         // Cauchy-Riemann finite-difference check mid-strip
};

KmsReport kms_residual(const WeightSequence& w, const std::vector<OperatorPair>& pairs,
                       const RealVector& tGrid);

// Negative control: the state is evaluated with `state` weights while the
// flow runs with `flow` weights. Mismatched weights must produce a visibly
// nonzero residual, otherwise the detector is vacuous.
KmsReport kms_residual_mismatched(const WeightSequence& state, const WeightSequence& flow,
                                  const std::vector<OperatorPair>& pairs,
                                  const RealVector& tGrid);

} // namespace modlab::modular
