#pragma once

#include <functional>
#include <string>
#include <vector>

#include "modlab/modular.hpp"

namespace modlab::quasi {

enum class WeightKind { gibbs, zeta, custom };

// Rule producing strictly positive weights lambda_i at any truncation,
// renormalized to sum 1 there. beta feeds the modular data built on top.
struct WeightFamily {
    WeightKind kind = WeightKind::gibbs;
    double beta = 1.0;
    double gibbsBeta = 1.0;             // decay rate for kind == gibbs
    double zetaS = 2.0;                 // exponent for kind == zeta
    std::vector<double> customWeights;  // kind == custom

    RealVector raw_weights(int dim) const;
    modular::WeightSequence sequence(int dim) const;
    std::string name() const;
};

WeightFamily gibbs_family(double beta);
WeightFamily zeta_family(double s, double beta = 1.0);
WeightFamily custom_family(std::vector<double> weights, double beta = 1.0);

// Operator constructible at every truncation; the sweep machinery needs the
// same abstract operator realized across dimensions.
struct OperatorRule {
    enum class Kind { identity, number, numberPower, annihilation, creation,
                      matrixUnit, diagPower, rankOne };
    Kind kind = Kind::identity;
    int i = 0, j = 0;        // matrixUnit
    int power = 1;           // numberPower: N^power
    double exponent = 0.0;   // diagPower: diag((n+1)^exponent)
    std::vector<Complex> u, v;  // rankOne: |u><v| padded with zeros

    TruncatedOperator build(const OscillatorBasis& b) const;
    std::string name() const;
};

OperatorRule rule_identity();
OperatorRule rule_number();
OperatorRule rule_number_power(int power);
OperatorRule rule_annihilation();
OperatorRule rule_creation();
OperatorRule rule_matrix_unit(int i, int j);
OperatorRule rule_diag_power(double exponent);
OperatorRule rule_rank_one(std::vector<Complex> u, std::vector<Complex> v);

// {1, N, N^2, a, a^dag}: the pragmatic stand-in for "all of the algebra" in
// the trace-ideal test; every verdict carries this caveat.
std::vector<OperatorRule> default_test_family();

// Graded seminorm ||X||^{f,k} = max{||f(N) X N^k||, ||N^k X f(N)||} with f
// from a named family of admissible decay functions; dualForm switches to
// ||f(N) X f(N)||.
struct SeminormSpec {
    enum class Family { expDecay, powerDecay };
    Family family = Family::expDecay;
    double param = 1.0;  // c in e^{-c x}, or p in (1+x)^{-p}
    int k = 0;
    bool dualForm = false;

    double f(double x) const;
    std::string name() const;
};

double seminorm_value(const TruncatedOperator& x, const SeminormSpec& spec);

enum class SweepVerdict { converged, growing, inconclusive };

const char* to_string(SweepVerdict v);

// Finite-machine stand-in for unboundedness: evaluate across truncations and
// fit the log-log growth over the last three points. Slope above 0.1 reads
// as growth, below 0.05 as convergence, in between as inconclusive.
struct TruncationSweep {
    std::vector<int> dims;
    std::vector<double> values;
    SweepVerdict verdict = SweepVerdict::inconclusive;
    double growthExponent = 0.0;
};

TruncationSweep classify_sweep(std::vector<int> dims, std::vector<double> values);

TruncationSweep seminorm_eval(const OperatorRule& x, const SeminormSpec& spec,
                              const std::vector<int>& dims);

enum class IdealVerdict { member, nonMember, inconclusive };

const char* to_string(IdealVerdict v);

struct IdealDiagnostic {
    std::string candidate;
    std::vector<std::string> testPairs;
    std::vector<TruncationSweep> traceSweeps;
    IdealVerdict verdict = IdealVerdict::inconclusive;
};

using OperatorBuilder = std::function<TruncatedOperator(const OscillatorBasis&)>;

// Sweeps |tr(A X B)| over truncations for every (A, B) from the test family.
// member requires every sweep to converge; any growth rules membership out.
IdealDiagnostic ideal_membership(const std::string& candidateName, const OperatorBuilder& candidate,
                                 const std::vector<OperatorRule>& testOps,
                                 const std::vector<int>& dims);
IdealDiagnostic ideal_membership(const OperatorRule& candidate,
                                 const std::vector<OperatorRule>& testOps,
                                 const std::vector<int>& dims);

// diag(sqrt(lambda_i)) at each truncation: the vector Phi seen as an operator.
OperatorBuilder phi_diagonal_builder(const WeightFamily& w);

enum class Side { left, right };

// phi(A v 1) = <Phi, (A v 1) Phi>_2 = tr(rho A); the right state is
// phiTilde(1 v A) = conj(<Phi, (1 v A) Phi>_2) and must coincide with the
// left value.
Complex quasi_state(const WeightFamily& w, int dim, const TruncatedOperator& a, Side side,
                    const Tolerances& tol = default_tolerances());

struct QuasiModular {
    modular::ModularStructure structure;
    IdealDiagnostic phiMembership;
    bool phiInIdeal = false;
};

// Builds the generalized modular data and attaches the trace-ideal
// diagnostic for Phi. The membership assumption fails for slowly decaying
// families (e.g. zeta(2)), so by default a failed diagnostic is reported,
// not fatal; strictPhiMembership turns it into an error.
QuasiModular quasi_modular(const WeightFamily& w, int dim, bool strictPhiMembership = false);

TruncatedOperator quasi_dynamics(const WeightFamily& w, int dim, double t,
                                 const TruncatedOperator& a);

modular::KmsReport quasi_kms_residual(const WeightFamily& w, int dim,
                                      const std::vector<modular::OperatorPair>& pairs,
                                      const RealVector& tGrid);

// ||e^{ith} - e^{itH} v e^{itH}|| over the dense matrixizations.
double flow_factorization_residual(const WeightFamily& w, int dim, double t);

struct BoundednessReport {
    int samples = 0;
    int dim = 0;
    double maxExcess = 0.0;  // max over samples of ||X|| - ||X||_2
    bool allHold = false;
};
BoundednessReport boundedness_check(int samples, int dim, Rng& rng,
                                    const Tolerances& tol = default_tolerances());

struct StructureReport {
    int dim = 0;
    double faithfulnessIdentityResidual = 0.0;  // phi(A^dag A) vs sum lambda_n ||A phi_n||^2
    bool faithful = false;                      // phi(X_kl^dag X_kl) > 0 across the basis
    int gramRank = 0;
    bool cyclic = false;                        // gramRank == dim^2
    double separatingSmallestSingular = 0.0;    // of A -> (A v 1) Phi
    bool separating = false;
    double orthonormalityDeviation = 0.0;       // Gram of the X_ij against identity
    double completenessResidual = 0.0;          // exact expansion reconstruction
};
StructureReport structure_property_checks(const WeightFamily& w, int dim, Rng& rng);

} // namespace modlab::quasi
