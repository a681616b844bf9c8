#include "entx/protocol.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>
#include <utility>

namespace entx {

namespace {

const double kPi = std::acos(-1.0);

std::string num_str(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void require_two_qubits(const DensityMatrix& rho, const char* who) {
    if (rho.reg.n_qubits != 2)
        throw std::invalid_argument(std::string(who) + ": expected a two-qubit state");
}

double trace_distance_raw(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::vector<double> values = detail::hermitian_eigenvalues(a - b);
    double sum = 0.0;
    for (double v : values) sum += std::abs(v);
    return 0.5 * sum;
}

// One collision's unitary, prepared once so repeated applications only
// pay for the matrix products.
struct CollisionChannel {
    ComplexMatrix u;
    ComplexMatrix udag;
    ComplexMatrix chain;

    CollisionChannel(const ComplexMatrix& chain_matrix, double lambda, double j_tau)
        : u(unitary_from_hamiltonian(total_hamiltonian(1.0, lambda), j_tau)),
          udag(dagger(u)),
          chain(chain_matrix) {}

    ComplexMatrix evolve(const ComplexMatrix& probes) const {
        return u * kron(chain, probes) * udag;
    }

    ComplexMatrix apply(const ComplexMatrix& probes) const {
        return partial_trace(evolve(probes), 4, {2, 3});
    }
};

// Extraction concurrence as a function of the four probe angles, for one
// chain state and pulse area. The chain is split into its eigenstates so
// each evaluation only needs pure-state evolutions.
struct ExtractionObjective {
    ComplexMatrix u;
    int n_terms = 0;
    std::array<double, 4> weight{};
    std::array<std::array<cplx, 4>, 4> chain_vec{};
    long evaluations = 0;

    ExtractionObjective(const ComplexMatrix& chain_matrix, double lambda, double j_tau)
        : u(unitary_from_hamiltonian(total_hamiltonian(1.0, lambda), j_tau)) {
        const EigenSystem es = hermitian_eig(chain_matrix);
        for (int j = 0; j < 4; ++j) {
            if (es.values[j] <= 0.0) continue;
            weight[n_terms] = es.values[j];
            for (int i = 0; i < 4; ++i) chain_vec[n_terms][i] = es.vectors(i, j);
            ++n_terms;
        }
    }

    double value(const double x[4]) {
        ++evaluations;
        const cplx l0 = std::cos(x[0] / 2.0);
        const cplx l1 = std::exp(cplx(0.0, x[1])) * std::sin(x[0] / 2.0);
        const cplx r0 = std::cos(x[2] / 2.0);
        const cplx r1 = std::exp(cplx(0.0, x[3])) * std::sin(x[2] / 2.0);
        const cplx probe[4] = {l0 * r0, l0 * r1, l1 * r0, l1 * r1};

        ComplexMatrix rho(4, 4);
        cplx in[16];
        cplx out[16];
        for (int k = 0; k < n_terms; ++k) {
            for (int c = 0; c < 4; ++c)
                for (int p = 0; p < 4; ++p) in[4 * c + p] = chain_vec[k][c] * probe[p];
            const cplx* row = u.a.data();
            for (int r = 0; r < 16; ++r, row += 16) {
                cplx acc = 0.0;
                for (int c = 0; c < 16; ++c) acc += row[c] * in[c];
                out[r] = acc;
            }
            // Probes sit in the two least significant bits, so the chain
            // index strides in blocks of four.
            for (int c = 0; c < 4; ++c)
                for (int i = 0; i < 4; ++i)
                    for (int j = 0; j < 4; ++j)
                        rho(i, j) += weight[k] * out[4 * c + i] * std::conj(out[4 * c + j]);
        }
        return detail::concurrence_unchecked(rho).value;
    }
};

ProbeAngles canonical_angles(double theta, double phi) {
    const double two_pi = 2.0 * kPi;
    theta = std::fmod(theta, two_pi);
    if (theta < 0.0) theta += two_pi;
    if (theta > kPi) {
        // (theta, phi) and (2pi - theta, phi + pi) prepare the same state
        // up to a global sign.
        theta = two_pi - theta;
        phi += kPi;
    }
    phi = std::fmod(phi, two_pi);
    if (phi < 0.0) phi += two_pi;
    if (phi >= two_pi) phi = 0.0;
    return ProbeAngles(std::min(theta, kPi), phi);
}

using Point = std::array<double, 4>;

double simplex_diameter(const std::array<Point, 5>& xs) {
    double best = 0.0;
    for (int i = 0; i < 5; ++i) {
        for (int j = i + 1; j < 5; ++j) {
            double d2 = 0.0;
            for (int k = 0; k < 4; ++k) {
                const double d = xs[i][k] - xs[j][k];
                d2 += d * d;
            }
            best = std::max(best, d2);
        }
    }
    return std::sqrt(best);
}

// Angle grid (12 points per angle), then Nelder-Mead refinement from the
// best grid point. Returns the best point ever evaluated.
OptimizationResult run_optimizer(ExtractionObjective& obj) {
    std::array<double, 12> thetas;
    std::array<double, 12> phis;
    for (int i = 0; i < 12; ++i) {
        thetas[i] = kPi * i / 11.0;
        phis[i] = kPi * i / 6.0;
    }

    Point best_x{};
    double best_f = -1.0;
    for (double tl : thetas)
        for (double pl : phis)
            for (double tr : thetas)
                for (double pr : phis) {
                    const Point x = {tl, pl, tr, pr};
                    const double f = obj.value(x.data());
                    if (f > best_f) {
                        best_f = f;
                        best_x = x;
                    }
                }

    // Nelder-Mead on the negated objective, standard coefficients
    // (reflect 1, expand 2, contract 0.5, shrink 0.5).
    std::array<Point, 5> xs;
    std::array<double, 5> fs;
    xs[0] = best_x;
    fs[0] = -best_f;
    for (int i = 1; i < 5; ++i) {
        xs[i] = best_x;
        xs[i][i - 1] += 0.15;
        fs[i] = -obj.value(xs[i].data());
    }

    auto record = [&](const Point& x, double neg_f) {
        if (-neg_f > best_f) {
            best_f = -neg_f;
            best_x = x;
        }
    };
    for (int i = 1; i < 5; ++i) record(xs[i], fs[i]);

    for (int iter = 0; iter < 5000 && simplex_diameter(xs) >= 1e-6; ++iter) {
        std::array<int, 5> order = {0, 1, 2, 3, 4};
        std::sort(order.begin(), order.end(), [&](int a, int b) { return fs[a] < fs[b]; });
        std::array<Point, 5> sx;
        std::array<double, 5> sf;
        for (int i = 0; i < 5; ++i) {
            sx[i] = xs[order[i]];
            sf[i] = fs[order[i]];
        }
        xs = sx;
        fs = sf;

        Point centroid{};
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k) centroid[k] += xs[i][k] / 4.0;

        Point xr;
        for (int k = 0; k < 4; ++k) xr[k] = centroid[k] + (centroid[k] - xs[4][k]);
        const double fr = -obj.value(xr.data());
        record(xr, fr);

        if (fr < fs[0]) {
            Point xe;
            for (int k = 0; k < 4; ++k) xe[k] = centroid[k] + 2.0 * (centroid[k] - xs[4][k]);
            const double fe = -obj.value(xe.data());
            record(xe, fe);
            if (fe < fr) {
                xs[4] = xe;
                fs[4] = fe;
            } else {
                xs[4] = xr;
                fs[4] = fr;
            }
        } else if (fr < fs[3]) {
            xs[4] = xr;
            fs[4] = fr;
        } else {
            Point xc;
            bool accepted = false;
            if (fr < fs[4]) {
                for (int k = 0; k < 4; ++k) xc[k] = centroid[k] + 0.5 * (xr[k] - centroid[k]);
                const double fc = -obj.value(xc.data());
                record(xc, fc);
                if (fc <= fr) {
                    xs[4] = xc;
                    fs[4] = fc;
                    accepted = true;
                }
            } else {
                for (int k = 0; k < 4; ++k) xc[k] = centroid[k] + 0.5 * (xs[4][k] - centroid[k]);
                const double fc = -obj.value(xc.data());
                record(xc, fc);
                if (fc < fs[4]) {
                    xs[4] = xc;
                    fs[4] = fc;
                    accepted = true;
                }
            }
            if (!accepted) {
                for (int i = 1; i < 5; ++i) {
                    for (int k = 0; k < 4; ++k) xs[i][k] = xs[0][k] + 0.5 * (xs[i][k] - xs[0][k]);
                    fs[i] = -obj.value(xs[i].data());
                    record(xs[i], fs[i]);
                }
            }
        }
    }

    return {canonical_angles(best_x[0], best_x[1]), canonical_angles(best_x[2], best_x[3]),
            best_f, obj.evaluations};
}

}  // namespace

CollisionOutcome collide_once(const DensityMatrix& chain, const DensityMatrix& probes,
                              double lambda, double j_tau) {
    require_two_qubits(chain, "collide_once");
    require_two_qubits(probes, "collide_once");
    const CollisionChannel channel(chain.matrix, lambda, j_tau);
    const ComplexMatrix evolved = channel.evolve(probes.matrix);
    ComplexMatrix probe_matrix = partial_trace(evolved, 4, {2, 3});
    const double c = detail::concurrence_unchecked(probe_matrix).value;
    DensityMatrix probe_state(QubitRegister(2), std::move(probe_matrix));
    DensityMatrix chain_after(QubitRegister(2), partial_trace(evolved, 4, {0, 1}));
    return {std::move(probe_state), c, std::move(chain_after)};
}

OptimizationResult optimize_probes(const DensityMatrix& chain, double lambda, double j_tau) {
    require_two_qubits(chain, "optimize_probes");
    ExtractionObjective obj(chain.matrix, lambda, j_tau);
    return run_optimizer(obj);
}

std::vector<SweepRecord> concurrence_surface(const std::vector<double>& g_grid,
                                             const std::vector<double>& j_tau_grid,
                                             double lambda, int workers) {
    if (g_grid.empty() || j_tau_grid.empty())
        throw std::invalid_argument("concurrence_surface: grids must be nonempty");
    if (workers < 1)
        throw std::invalid_argument("concurrence_surface: worker count must be at least 1");

    const size_t n_tau = j_tau_grid.size();
    const size_t total = g_grid.size() * n_tau;
    std::vector<SweepRecord> records(total);

    auto run_point = [&](size_t idx) {
        const double g = g_grid[idx / n_tau];
        const double tau = j_tau_grid[idx % n_tau];
        SweepRecord rec;
        rec.inputs = {{"g_xx", g}, {"g_zz", g}, {"j_tau", tau}, {"lambda", lambda}};
        try {
            const DensityMatrix chain = pair_state(CorrelationPair(g, g));
            const OptimizationResult r = optimize_probes(chain, lambda, tau);
            rec.concurrence = r.best_concurrence;
            rec.auxiliary = {{"evaluations", static_cast<double>(r.evaluations)},
                             {"phi_left", r.left.phi},
                             {"phi_right", r.right.phi},
                             {"theta_left", r.left.theta},
                             {"theta_right", r.right.theta}};
        } catch (const numerical_error& e) {
            rec.status = "skipped";
            rec.message = e.what();
        } catch (const std::invalid_argument& e) {
            rec.status = "skipped";
            rec.message = e.what();
        }
        records[idx] = std::move(rec);
    };

    const int n_workers = static_cast<int>(std::min<size_t>(workers, total));
    if (n_workers <= 1) {
        for (size_t i = 0; i < total; ++i) run_point(i);
        return records;
    }

    std::atomic<size_t> next{0};
    auto drain = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= total) return;
            try {
                run_point(i);
            } catch (const std::exception& e) {
                records[i].status = "error";
                records[i].message = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(drain);
    for (std::thread& t : pool) t.join();
    return records;
}

std::vector<CollisionStep> repeated_collisions(const DensityMatrix& chain,
                                               const DensityMatrix& probes0, double lambda,
                                               double j_tau, int n) {
    require_two_qubits(chain, "repeated_collisions");
    require_two_qubits(probes0, "repeated_collisions");
    if (n < 1) throw std::invalid_argument("repeated_collisions: need at least one step");

    const CollisionChannel channel(chain.matrix, lambda, j_tau);
    std::vector<CollisionStep> steps;
    steps.reserve(n);
    ComplexMatrix rho = probes0.matrix;
    for (int k = 1; k <= n; ++k) {
        rho = channel.apply(rho);
        // Rescale away per-step rounding in the trace; over thousands of
        // steps it would otherwise drift past the state checks.
        rho = (1.0 / trace(rho).real()) * rho;
        const double c = detail::concurrence_unchecked(rho).value;
        steps.push_back({k, c, DensityMatrix(QubitRegister(2), rho)});
    }
    return steps;
}

FixedPointReport channel_fixed_point(const DensityMatrix& chain, double lambda, double j_tau) {
    require_two_qubits(chain, "channel_fixed_point");
    const double quarter = kPi / 2.0;
    const double r = std::fmod(std::abs(j_tau), quarter);
    if (r < 1e-12 || quarter - r < 1e-12)
        throw std::invalid_argument(
            "channel_fixed_point: the channel is the identity at multiples of pi/2");

    const CollisionChannel channel(chain.matrix, lambda, j_tau);

    // Orthonormal Hermitian basis of the two-qubit operators: projectors,
    // then the symmetric and antisymmetric off-diagonal pairs.
    std::vector<ComplexMatrix> basis;
    basis.reserve(16);
    for (int i = 0; i < 4; ++i) {
        ComplexMatrix e(4, 4);
        e(i, i) = 1.0;
        basis.push_back(std::move(e));
    }
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            ComplexMatrix e(4, 4);
            e(i, j) = inv_sqrt2;
            e(j, i) = inv_sqrt2;
            basis.push_back(std::move(e));
            ComplexMatrix f(4, 4);
            f(i, j) = cplx(0.0, -inv_sqrt2);
            f(j, i) = cplx(0.0, inv_sqrt2);
            basis.push_back(std::move(f));
        }
    }

    // The channel is real-linear on Hermitian operators; a = (channel - 1)
    // in basis coordinates, and the fixed point spans its null space.
    double a[16][16];
    for (int k = 0; k < 16; ++k) {
        const ComplexMatrix image = channel.apply(basis[k]);
        for (int j = 0; j < 16; ++j) {
            a[j][k] = trace(basis[j] * image).real() - (j == k ? 1.0 : 0.0);
        }
    }

    ComplexMatrix ata(16, 16);
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) {
            double s = 0.0;
            for (int k = 0; k < 16; ++k) s += a[k][i] * a[k][j];
            ata(i, j) = s;
        }

    const EigenSystem es = hermitian_eig(ata);
    const double second_sv = std::sqrt(std::max(0.0, es.values[14]));
    if (second_sv <= 1e-8)
        throw numerical_error("channel_fixed_point: stationary state is not unique (second "
                              "singular value " +
                              num_str(second_sv) + ")");

    // Null vector of a real matrix; strip the eigensolver's arbitrary
    // complex phase.
    std::array<cplx, 16> raw;
    int lead = 0;
    for (int i = 0; i < 16; ++i) {
        raw[i] = es.vectors(i, 15);
        if (std::abs(raw[i]) > std::abs(raw[lead])) lead = i;
    }
    const cplx phase = raw[lead] / std::abs(raw[lead]);
    std::array<double, 16> coords;
    for (int i = 0; i < 16; ++i) coords[i] = (raw[i] / phase).real();

    ComplexMatrix fp(4, 4);
    for (int k = 0; k < 16; ++k)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) fp(i, j) += coords[k] * basis[k](i, j);
    const double tr = trace(fp).real();
    if (std::abs(tr) < 1e-8)
        throw numerical_error("channel_fixed_point: stationary direction is traceless");
    fp = (1.0 / tr) * fp;

    const double residual = trace_distance_raw(channel.apply(fp), fp);
    if (residual >= 1e-10)
        throw numerical_error("channel_fixed_point: linear solve residual " + num_str(residual));

    // Power-iteration validator from the maximally mixed start.
    ComplexMatrix rho = 0.25 * ComplexMatrix::identity(4);
    int iterations = 0;
    const int cap = 2000000;
    for (;;) {
        ComplexMatrix step = channel.apply(rho);
        // Weakly contracting pulses take many iterations; rescale so the
        // trace cannot drift over them.
        step = (1.0 / trace(step).real()) * step;
        ++iterations;
        const double moved = trace_distance_raw(step, rho);
        rho = std::move(step);
        if (moved < 1e-12) break;
        if (iterations >= cap)
            throw numerical_error("channel_fixed_point: power iteration did not converge");
    }
    const double gap = trace_distance_raw(rho, fp);
    if (gap > 1e-9)
        throw numerical_error("channel_fixed_point: linear solve and power iteration disagree by " +
                              num_str(gap));

    const double c = detail::concurrence_unchecked(fp).value;
    return {DensityMatrix(QubitRegister(2), std::move(fp)), residual, iterations, c};
}

ExponentialFit fit_exponential(const std::vector<std::pair<int, double>>& curve) {
    for (const auto& [step, c] : curve) {
        (void)step;
        if (!(c >= 0.0 && c < 1.0))
            throw std::invalid_argument("fit_exponential: concurrence values must lie in [0, 1)");
    }
    std::vector<std::pair<double, double>> pts;
    pts.reserve(curve.size());
    for (const auto& [step, c] : curve)
        if (1.0 - c > 1e-12) pts.emplace_back(step, std::log1p(-c));
    if (pts.size() < 3)
        throw std::invalid_argument("fit_exponential: need at least three usable points");

    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& [x, y] : pts) {
        sxx += x * x;
        sxy += x * y;
    }
    if (sxx <= 0.0) throw std::invalid_argument("fit_exponential: degenerate step indices");
    const double kappa = -sxy / sxx;

    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (const auto& [x, y] : pts) {
        const double r = y + kappa * x;
        ss_res += r * r;
        ss_tot += y * y;
    }
    const double r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return {kappa, r2};
}

std::vector<HomogenizationStep> homogenize_global(const DensityMatrix& chain,
                                                  const DensityMatrix& probes0, double j_tau,
                                                  int n) {
    require_two_qubits(chain, "homogenize_global");
    require_two_qubits(probes0, "homogenize_global");
    if (n < 1) throw std::invalid_argument("homogenize_global: need at least one step");

    const ComplexMatrix u = global_partial_swap(j_tau);
    const ComplexMatrix udag = dagger(u);
    std::vector<HomogenizationStep> steps;
    steps.reserve(n);
    ComplexMatrix rho = probes0.matrix;
    for (int k = 1; k <= n; ++k) {
        rho = partial_trace(u * kron(chain.matrix, rho) * udag, 4, {2, 3});
        // Same trace rescaling as repeated_collisions: keep long runs from
        // accumulating rounding drift.
        rho = (1.0 / trace(rho).real()) * rho;
        const DensityMatrix probe(QubitRegister(2), rho);
        steps.push_back({k, fidelity(probe, chain)});
    }
    return steps;
}

DensityMatrix w_extraction(int n, double j_tau) {
    if (n < 2 || n > 5)
        throw std::invalid_argument("w_extraction: probe count must lie in [2, 5]");

    // Probes hold the most significant bits, the chain the rest; probe i
    // collides with chain site i. The pair couplings act on disjoint
    // qubits, so the joint evolution factorizes into per-pair gates.
    const PureState w = w_state(n);
    const int chain_dim = 1 << n;
    const int total_qubits = 2 * n;
    std::vector<cplx> psi(static_cast<size_t>(1) << total_qubits);
    for (int c = 0; c < chain_dim; ++c) psi[c] = w.amplitudes[c];

    const ComplexMatrix u_pair = unitary_from_hamiltonian(xxz_hamiltonian(1.0, 1.0), j_tau);
    for (int i = 0; i < n; ++i) apply_pair_gate(u_pair, psi, total_qubits, i, n + i);

    ComplexMatrix rho(chain_dim, chain_dim);
    for (int p = 0; p < chain_dim; ++p)
        for (int q = 0; q < chain_dim; ++q) {
            cplx acc = 0.0;
            for (int c = 0; c < chain_dim; ++c)
                acc += psi[static_cast<size_t>(p) * chain_dim + c] *
                       std::conj(psi[static_cast<size_t>(q) * chain_dim + c]);
            rho(p, q) = acc;
        }
    return DensityMatrix(QubitRegister(n), std::move(rho));
}

SpinStarResult spin_star_extraction(int length, int spins_per_probe, double lambda,
                                    double j_tau) {
    if (spins_per_probe < 1)
        throw std::invalid_argument("spin_star_extraction: need at least one spin per probe");
    if (2 * spins_per_probe > length)
        throw std::invalid_argument(
            "spin_star_extraction: probe subsets overlap, need 2N <= chain length");
    if (length + 2 > 12)
        throw std::invalid_argument("spin_star_extraction: register exceeds 12 qubits");

    // The coupling conserves the excitation count and the initial state
    // carries exactly one excitation, so the evolution stays inside the
    // (L+2)-dimensional single-excitation block. Basis: excitation on
    // probe L, probe R, then each chain site in order.
    const int m = length + 2;
    std::vector<std::pair<int, int>> pairs;
    for (int s = 0; s < spins_per_probe; ++s) {
        pairs.emplace_back(0, 2 + s);
        pairs.emplace_back(1, 2 + spins_per_probe + s);
    }
    ComplexMatrix h(m, m);
    for (int q = 0; q < m; ++q) {
        double diag = 0.0;
        for (const auto& [pa, pb] : pairs) diag += lambda * ((q == pa || q == pb) ? -1.0 : 1.0);
        h(q, q) = diag;
    }
    for (const auto& [pa, pb] : pairs) {
        h(pa, pb) += 2.0;
        h(pb, pa) += 2.0;
    }

    std::vector<cplx> psi0(m);
    const double amp = 1.0 / std::sqrt(static_cast<double>(length));
    for (int i = 2; i < m; ++i) psi0[i] = amp;

    const EigenSystem es = hermitian_eig(h);
    std::vector<cplx> tmp(m);
    for (int j = 0; j < m; ++j) {
        cplx acc = 0.0;
        for (int i = 0; i < m; ++i) acc += std::conj(es.vectors(i, j)) * psi0[i];
        tmp[j] = acc * std::exp(cplx(0.0, -es.values[j] * j_tau));
    }
    std::vector<cplx> psi(m);
    for (int i = 0; i < m; ++i) {
        cplx acc = 0.0;
        for (int j = 0; j < m; ++j) acc += es.vectors(i, j) * tmp[j];
        psi[i] = acc;
    }

    double chain_pop = 0.0;
    for (int i = 2; i < m; ++i) chain_pop += std::norm(psi[i]);
    ComplexMatrix rho(4, 4);
    rho(0, 0) = chain_pop;
    rho(2, 2) = std::norm(psi[0]);
    rho(1, 1) = std::norm(psi[1]);
    rho(2, 1) = psi[0] * std::conj(psi[1]);
    rho(1, 2) = std::conj(rho(2, 1));

    SpinStarResult result;
    result.concurrence_numeric = detail::concurrence_unchecked(rho).value;
    if (lambda == 0.0) {
        const double root_n = std::sqrt(static_cast<double>(spins_per_probe));
        const double s = std::sin(2.0 * j_tau * root_n);
        result.concurrence_analytic =
            (2.0 * spins_per_probe / static_cast<double>(length)) * s * s;
    }
    return result;
}

namespace {

bool basis_probe_positive(ExtractionObjective& obj) {
    const double c00[4] = {0.0, 0.0, 0.0, 0.0};
    if (obj.value(c00) > 1e-8) return true;
    const double c01[4] = {0.0, 0.0, kPi, 0.0};
    return obj.value(c01) > 1e-8;
}

bool positive_for_some(double g, double lambda, const std::vector<double>& taus) {
    const ComplexMatrix chain = pair_state(CorrelationPair(g, g)).matrix;
    // Cheap pass with fixed probe bases first; the full optimizer only
    // runs when every grid point looks flat.
    for (double tau : taus) {
        ExtractionObjective obj(chain, lambda, tau);
        if (basis_probe_positive(obj)) return true;
    }
    for (double tau : taus) {
        ExtractionObjective obj(chain, lambda, tau);
        if (run_optimizer(obj).best_concurrence > 1e-8) return true;
    }
    return false;
}

bool positive_for_all(double g, double lambda, const std::vector<double>& taus) {
    const ComplexMatrix chain = pair_state(CorrelationPair(g, g)).matrix;
    for (double tau : taus) {
        ExtractionObjective obj(chain, lambda, tau);
        if (basis_probe_positive(obj)) continue;
        if (run_optimizer(obj).best_concurrence <= 1e-8) return false;
    }
    return true;
}

template <typename Pred>
double bisect_threshold(const Pred& positive) {
    double lo = -0.25;
    double hi = 0.0;
    if (!positive(lo))
        throw numerical_error("threshold_scan: no extraction even at maximal correlations");
    if (positive(hi))
        throw numerical_error("threshold_scan: extraction from the uncorrelated state");
    while (hi - lo > 1e-4) {
        const double mid = 0.5 * (lo + hi);
        if (positive(mid))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

ThresholdReport threshold_scan(double lambda, const std::vector<double>& j_tau_grid) {
    if (j_tau_grid.empty()) throw std::invalid_argument("threshold_scan: empty pulse grid");
    for (double tau : j_tau_grid)
        if (!(tau > 0.0 && tau < kPi / 2.0))
            throw std::invalid_argument(
                "threshold_scan: pulse areas must lie strictly inside (0, pi/2)");

    // Extraction is strongest near pi/4 and dies first at the interval
    // edges, so each predicate visits the most decisive pulses first.
    std::vector<double> by_center = j_tau_grid;
    std::stable_sort(by_center.begin(), by_center.end(), [](double x, double y) {
        return std::abs(x - kPi / 4.0) < std::abs(y - kPi / 4.0);
    });
    std::vector<double> by_edge = j_tau_grid;
    std::stable_sort(by_edge.begin(), by_edge.end(), [](double x, double y) {
        return std::min(x, kPi / 2.0 - x) < std::min(y, kPi / 2.0 - y);
    });

    ThresholdReport report{};
    report.g_boundary =
        bisect_threshold([&](double g) { return positive_for_some(g, lambda, by_center); });
    report.g_always =
        bisect_threshold([&](double g) { return positive_for_all(g, lambda, by_edge); });
    return report;
}

std::vector<double> default_threshold_grid() {
    const double lo = 0.05;
    const double hi = kPi / 2.0 - 0.05;
    std::vector<double> grid(25);
    for (int i = 0; i < 25; ++i) grid[i] = lo + (hi - lo) * i / 24.0;
    return grid;
}

}  // namespace entx
