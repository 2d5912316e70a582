#pragma once

namespace modlab {

// Central record of the numerical tolerances used across the library.
// All defaults live here; call sites take a Tolerances argument (or use
// default_tolerances()) instead of scattering literals.
struct Tolerances {
    double hermiticity = 1e-10;         // relative asymmetry allowed in Hermitian inputs
    double reconstruction = 1e-10;      // eigen / polar reconstruction residual, relative
    double conditioning = 1e-12;        // smallest/largest singular value for polar inputs
    double commutator = 1e-12;          // CCR-type identities on interior blocks
    double stateConsistency = 1e-12;    // two-route evaluations of the same state value
    double modularIdentity = 1e-10;     // S = J Delta^{1/2} and friends
    double kmsResidual = 1e-9;          // KMS boundary identity on a t-grid
    double unitarity = 1e-10;           // U U^dag = I for constructed unitaries
    double tailMass = 1e-6;             // top-level mass fraction triggering a truncation warning
};

inline const Tolerances& default_tolerances() {
    static const Tolerances tol{};
    return tol;
}

} // namespace modlab
