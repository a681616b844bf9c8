#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "entx/gates.hpp"
#include "entx/measures.hpp"
#include "entx/states.hpp"

namespace entx {

// One collision: the probe pair after the interaction, its concurrence,
// and what is left of the chain pair.
struct CollisionOutcome {
    DensityMatrix probe_state;
    double concurrence;
    DensityMatrix chain_state_after;
};

// Stationary state of the probe-update channel. fixed_state comes from
// the linear solve; iterations_to_converge counts the power-iteration
// validator's steps; residual is the trace distance between the fixed
// state and its image under the channel.
struct FixedPointReport {
    DensityMatrix fixed_state;
    double residual;
    int iterations_to_converge;
    double concurrence;
};

// Best product probe preparation found for one chain state and pulse
// area. evaluations counts objective calls (grid plus refinement).
struct OptimizationResult {
    ProbeAngles left;
    ProbeAngles right;
    double best_concurrence;
    long evaluations;
};

// One step of a repeated-collision run.
struct CollisionStep {
    int step;
    double concurrence;
    DensityMatrix probe_state;
};

// One step of a homogenization run.
struct HomogenizationStep {
    int step;
    double fidelity_to_chain;
};

// Through-origin fit of log(1 - C(n)) = -kappa*n.
struct ExponentialFit {
    double kappa;
    double r_squared;
};

// Probe-pair concurrence of the star geometry; the closed form is only
// defined at lambda = 0.
struct SpinStarResult {
    double concurrence_numeric;
    std::optional<double> concurrence_analytic;
};

// Along g_xx = g_zz = g: the largest g whose optimized extraction is
// positive for some pulse area in the grid, and for every pulse area.
struct ThresholdReport {
    double g_boundary;
    double g_always;
};

// One output row of a sweep: input coordinates, the concurrence result,
// any extra per-row quantities, and an ok/skipped/error status.
struct SweepRecord {
    std::map<std::string, double> inputs;
    double concurrence = 0.0;
    std::map<std::string, double> auxiliary;
    std::string status = "ok";
    std::string message;
};

// Evolves chain (x) probes on the register (1, 2, L, R) under the
// pair-local coupling for pulse area j_tau, then splits the result back
// into its two halves.
CollisionOutcome collide_once(const DensityMatrix& chain, const DensityMatrix& probes,
                              double lambda, double j_tau);

// Maximizes the extracted concurrence over both probes' Bloch angles:
// 12 grid points per angle, then simplex refinement from the best grid
// point until the simplex diameter drops below 1e-6.
OptimizationResult optimize_probes(const DensityMatrix& chain, double lambda, double j_tau);

// optimize_probes on the product grid g_grid x j_tau_grid with
// g_xx = g_zz = g. Rows keep grid order no matter how many workers run.
std::vector<SweepRecord> concurrence_surface(const std::vector<double>& g_grid,
                                             const std::vector<double>& j_tau_grid,
                                             double lambda, int workers = 1);

// Collides the probe pair with n fresh copies of the chain state,
// recording the probe state and concurrence after every collision.
std::vector<CollisionStep> repeated_collisions(const DensityMatrix& chain,
                                               const DensityMatrix& probes0, double lambda,
                                               double j_tau, int n);

// Unique stationary state of rho -> Tr_chain[U (chain (x) rho) U+],
// solved linearly over the Hermitian coordinates and cross-checked by
// power iteration. Pulse areas where the channel is the identity
// (j_tau a multiple of pi/2) are rejected.
FixedPointReport channel_fixed_point(const DensityMatrix& chain, double lambda, double j_tau);

// Least-squares fit of log(1 - C(n)) = -kappa*n over the points with
// 1 - C(n) > 1e-12; needs at least three usable points.
ExponentialFit fit_exponential(const std::vector<std::pair<int, double>>& curve);

// Repeated collisions under the four-body swap coupling, recording the
// probe-to-chain fidelity after every step.
std::vector<HomogenizationStep> homogenize_global(const DensityMatrix& chain,
                                                  const DensityMatrix& probes0, double j_tau,
                                                  int n);

// n probes, each colliding with its own site of an n-site chain prepared
// in the single-excitation superposition; returns the reduced probe
// state. Requires 2 <= n <= 5.
DensityMatrix w_extraction(int n, double j_tau);

// Star-geometry extraction from the single-excitation superposition on
// a length-L chain, N spins per probe.
SpinStarResult spin_star_extraction(int length, int spins_per_probe, double lambda,
                                    double j_tau);

// Bisection (to width 1e-4) for the two extraction thresholds along
// g_xx = g_zz. Every grid value must lie strictly inside (0, pi/2).
ThresholdReport threshold_scan(double lambda, const std::vector<double>& j_tau_grid);

// 25 pulse areas evenly spaced over [0.05, pi/2 - 0.05].
std::vector<double> default_threshold_grid();

}  // namespace entx
