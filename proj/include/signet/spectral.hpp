#pragma once

#include <optional>
#include <string>
#include <vector>

#include "signet/laplacian.hpp"
#include "signet/matrix.hpp"

namespace signet {

struct SymmetricSpectrum {
    Vector eigenvalues;        // ascending
    Matrix eigenvectors;       // column k pairs with eigenvalues[k], orthonormal
};

/// Full spectrum of a symmetric matrix via cyclic Jacobi rotations.
/// Residual ||S v - lambda v|| <= tol * ||S|| is guaranteed per pair.
SymmetricSpectrum symmetric_spectrum(const Matrix& s, double tol = 1e-10);

struct SpectralRadiusOptions {
    double tol = 1e-10;
    int max_iterations = 100000;
    std::uint64_t seed = 0x5EEDBA5E;
    /// Subtract ones*ones^T/n first, removing a known eigenpair (ones, 1)
    /// so the radius reflects the remaining spectrum.
    bool deflate_ones = false;
};

/// rho(M) for a general square matrix. Symmetric inputs use the exact
/// Jacobi spectrum; the general path runs power iteration with a small
/// Krylov fit so complex conjugate dominant pairs converge too.
double spectral_radius(const Matrix& m, const SpectralRadiusOptions& opts = {});

/// Critical negative coupling of the undirected repelling dynamics: the
/// beta with lambda_max(I - alpha L+ - beta L-r - J) = 1, located by
/// bisection over the nondecreasing spectral envelope. Returns +infinity
/// when G- is empty.
double critical_beta_deterministic(const SignedGraph& g, double alpha);

/// Closed-form critical coupling of the randomized pairwise dynamics:
/// positive root of beta(1+beta) = lambda_2(Lp+)/lambda_max(-Lpr-) * alpha(1-alpha).
double critical_beta_gossip(const SignedGraph& g, double alpha, const Vector& mu);

/// Asymptotic per-step contraction factor of the converging dynamics:
/// rho(W) (opposing, unbalanced), rho(KWK - J) (opposing, balanced) or
/// rho(M - J) (repelling).
double convergence_rate(const SignedGraph& g, const DynamicsConfig& cfg);

struct EventualPositivity {
    bool eventually_positive = false;
    /// First exponent with M^k entrywise positive, when found in budget.
    std::optional<int> witness_k0;
    /// True when the spectral verdict is positive but no witness power was
    /// found within budget (does not overturn the verdict).
    bool witness_missing = false;
};

/// Strong Perron-Frobenius test for M and M^T: rho(M) must be a simple
/// positive eigenvalue with strictly positive right and left eigenvectors.
/// Spectra tied below the gap tolerance are decided by the witness power
/// search instead of the eigenvalue gap.
EventualPositivity is_eventually_positive(const Matrix& m, int k_budget = 200);

/// Left eigenvector of eigenvalue 1, normalized to sum 1. Requires the
/// eigenvalue 1 to be simple (checked through the Gram null space of M - I).
Vector stationary_left_vector(const Matrix& m);

struct SpectralReport {
    std::optional<Vector> eigenvalues;  // symmetric case, ascending
    std::optional<double> spectral_radius;
    std::optional<double> critical_beta;          // +inf encoded as "inf"
    std::optional<double> critical_beta_gossip;
    std::optional<double> convergence_rate;
    std::optional<bool> eventually_positive;
    std::optional<int> positivity_witness_k0;
    std::optional<Vector> left_vector;
    std::vector<std::string> warnings;

    std::string to_key_value() const;
    std::string to_json() const;
};

/// Full analysis of the update matrix for one (graph, config) pair.
SpectralReport analyze_spectrum(const SignedGraph& g, const DynamicsConfig& cfg);

}  // namespace signet
