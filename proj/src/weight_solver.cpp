#include "ccd/weight_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "ccd/grid.hpp"

namespace ccd {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> to_vector(const std::array<double, 10>& a) {
    return std::vector<double>(a.begin(), a.end());
}

double try_norm2(const ResidualFn& resfn, const PrefactoredWeights& w,
                 std::vector<double>* out) {
    try {
        std::vector<double> r = resfn(w);
        const double n = norm2(r);
        if (!std::isfinite(n)) return kInf;
        if (out) *out = std::move(r);
        return n;
    } catch (const std::exception&) {
        return kInf;
    }
}

}  // namespace

double ValidationReport::max_entry() const {
    return std::max({re_gap_first, im_sum_first, target_gap_first, re_gap_second, im_sum_second,
                     target_gap_second, avg_gap_first, avg_gap_second});
}

std::array<double, 10> residuals_printed(const PrefactoredWeights& w) {
    require(w.direction == Direction::forward, "residuals_printed: forward weights expected");

    const double B1 = w.betaI, T1 = w.thetaI, a1 = w.aI, b1 = w.bI, c1 = w.cI;
    const double B2 = w.betaII, T2 = w.thetaII, a2 = w.aII, b2 = w.bII, c2 = w.cII;

    std::array<double, 10> r{};
    r[0] = (B1 * c2 * T1 + a1 + B1 * b1 - c1 - T1 * a1 * B2
            - T1 * c1 * B2 + c2 * T1 * T2 + 2.0 * B1 * a1 * T2 - T1 * b1 * B2 * T2
            + a1 * T2 * T2 + B1 * b1 * T2 * T2 - c1 * T2 * T2 - B1 * T1 * a2 - T1 * T2 * a2
            + T1 * b2 + T1 * T1 * B2 * b2 - B1 * T1 * T2 * b2) - (-293.0 / 216.0);
    r[1] = (c2 * T1 - T1 * b1 * B2 + a1 * T2 - c1 * T2
            - T1 * a1 * B2 * T2 + T1 * T1 * B2 * a2
            + B1 * (a1 + b1 * T2 + a1 * T2 * T2 - T1 * T2 * a2)) - (-63.0 / 216.0);
    r[2] = (-2.0 * a1 * (T1 * B2 - B1 * T2)) - (-1.0 / 216.0);
    r[3] = (1.0 + B1 * B1 + T1 * T1 * B2 * B2 + 2.0 * B1 * T2 - 2.0 * B1 * T1 * B2 * T2
            + T2 * T2 + B1 * B1 * T2 * T2) - 34.0 / 36.0;
    r[4] = (2.0 * (B1 + T2) * (1.0 - T1 * B2 + B1 * T2)) - 11.0 / 12.0;
    r[5] = (-2.0 * T1 * B2 + 2.0 * B1 * T2) - 1.0 / 12.0;
    r[6] = (B1 * c2 - B1 * c2 * T1 * B2 - a1 * B2 - B1 * b1 * B2
            + T1 * c1 * B2 * B2 + c2 * T2 + B1 * B1 * c2 * T2 - b1 * B2 * T2
            - B1 * c1 * B2 * T2 + B1 * a2
            + b2 + B1 * B1 * b2 + B1 * T2 * b2) - (-1730.0 / 1296.0);
    r[7] = (-b1 * B2 + T1 * b1 * B2 * B2 - a1 * B2 * T2 - c1 * B2 * T2
            + c2 * (1.0 + B1 * B1 - T1 * B2 + 2.0 * B1 * T2) + a2 + T2 * b2
            - B1 * (a1 * B2 + c1 * B2 + b1 * B2 * T2 - T2 * a2 - 2.0 * b2 + T1 * B2 * b2)
            + B1 * B1 * (a2 + T2 * b2)) - 675.0 / 1296.0;
    r[8] = (-c1 * B2 + T1 * a1 * B2 * B2 + T2 * a2 + B1 * B1 * T2 * a2
            - T1 * B2 * b2 + B1 * (c2 - a1 * B2 * T2)
            + a2 - T1 * B2 * a2 + T2 * b2) - 10870.0 / 1296.0;
    r[9] = (-T1 * B2 * a2 + B1 * T2 * a2) - 29.0 / 1296.0;
    return r;
}

std::vector<double> residuals_spectral(const PrefactoredWeights& wts,
                                       const CombinedStencil& target,
                                       std::span<const double> wgrid) {
    require(wts.direction == Direction::forward, "residuals_spectral: forward weights expected");

    std::vector<double> out;
    out.reserve(2 * wgrid.size() + 2);
    for (double w : wgrid) {
        const SymbolSample t = combined_symbol_oracle(target, w);
        const SymbolSample f = prefactored_symbol(wts, w);
        out.push_back(f.re_wp - t.re_wp);
        out.push_back(f.re_wpp2 - t.re_wpp2);
    }
    out.push_back(wts.aI + wts.bI + wts.cI);
    out.push_back(wts.aII + wts.bII + wts.cII);
    return out;
}

ResidualFn make_printed_residual() {
    return [](const PrefactoredWeights& w) { return to_vector(residuals_printed(w)); };
}

ResidualFn make_spectral_residual(const CombinedStencil& target, std::vector<double> wgrid) {
    std::vector<double> target_wp(wgrid.size()), target_wpp2(wgrid.size());
    for (std::size_t i = 0; i < wgrid.size(); ++i) {
        const SymbolSample t = combined_symbol_oracle(target, wgrid[i]);
        target_wp[i] = t.re_wp;
        target_wpp2[i] = t.re_wpp2;
    }
    return [grid = std::move(wgrid), target_wp = std::move(target_wp),
            target_wpp2 = std::move(target_wpp2)](const PrefactoredWeights& w) {
        require(w.direction == Direction::forward,
                "spectral residual: forward weights expected");
        std::vector<double> out;
        out.reserve(2 * grid.size() + 2);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const SymbolSample f = prefactored_symbol(w, grid[i]);
            out.push_back(f.re_wp - target_wp[i]);
            out.push_back(f.re_wpp2 - target_wpp2[i]);
        }
        out.push_back(w.aI + w.bI + w.cI);
        out.push_back(w.aII + w.bII + w.cII);
        return out;
    };
}

Matrix jacobian_fd(const ResidualFn& resfn, const PrefactoredWeights& wts, double step_scale) {
    require(step_scale > 0.0, "jacobian_fd: step must be positive");

    const std::array<double, 10> x = wts.to_array();
    Matrix j;
    for (std::size_t col = 0; col < PrefactoredWeights::kCount; ++col) {
        const double h = step_scale * std::max(1.0, std::abs(x[col]));
        std::array<double, 10> xp = x, xm = x;
        xp[col] += h;
        xm[col] -= h;
        std::vector<double> rp, rm;
        try {
            rp = resfn(PrefactoredWeights::from_array(xp, wts.direction));
            rm = resfn(PrefactoredWeights::from_array(xm, wts.direction));
        } catch (const std::exception& e) {
            std::ostringstream msg;
            msg << "jacobian_fd: residual failed at perturbed coordinate " << col << ": "
                << e.what();
            throw std::runtime_error(msg.str());
        }
        if (col == 0) j = Matrix(rp.size(), PrefactoredWeights::kCount);
        if (rp.size() != j.rows() || rm.size() != j.rows())
            throw std::runtime_error("jacobian_fd: residual size changed between evaluations");
        for (std::size_t i = 0; i < j.rows(); ++i) j(i, col) = (rp[i] - rm[i]) / (2.0 * h);
    }
    return j;
}

SolveReport newton_solve(const ResidualFn& resfn, const PrefactoredWeights& start, double tol,
                         int max_iter) {
    require(tol > 0.0, "newton_solve: tol must be positive");

    SolveReport rep;
    rep.weights = start;

    std::vector<double> r;
    double rn2 = try_norm2(resfn, rep.weights, &r);
    if (rn2 == kInf) {
        rep.residual_norm = kInf;
        return rep;
    }
    rep.residual_norm = norm_inf(r);

    for (int it = 0; it < max_iter; ++it) {
        if (rep.residual_norm <= tol) break;

        Matrix j;
        try {
            j = jacobian_fd(resfn, rep.weights);
        } catch (const std::exception&) {
            rep.converged = false;
            return rep;
        }

        const std::size_t m = j.rows();
        std::array<double, 10> x = rep.weights.to_array();

        // trace(J^T J) sets the scale for the Marquardt parameter
        double trace = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t c = 0; c < 10; ++c) trace += j(i, c) * j(i, c);
        double lambda = 1e-12 * trace / 10.0;

        std::vector<double> step;
        bool have_step = false;
        if (m == 10) {
            try {
                Matrix jc = j;
                std::vector<double> neg(r.size());
                for (std::size_t i = 0; i < r.size(); ++i) neg[i] = -r[i];
                step = solve_dense(std::move(jc), std::move(neg));
                have_step = true;
            } catch (const SingularSystemError&) {
                // fall through to the regularized normal equations
            }
        }
        if (!have_step) {
            try {
                step = solve_normal_equations(j, r, std::max(lambda, 1e-14));
                have_step = true;
            } catch (const SingularSystemError&) {
                rep.converged = false;
                return rep;
            }
        }

        auto attempt = [&](const std::vector<double>& d, double alpha,
                           std::vector<double>* r_out) -> double {
            std::array<double, 10> xt = x;
            for (std::size_t c = 0; c < 10; ++c) xt[c] += alpha * d[c];
            return try_norm2(resfn, PrefactoredWeights::from_array(xt, rep.weights.direction),
                             r_out);
        };

        bool accepted = false;
        double alpha = 1.0;
        std::vector<double> r_new;
        for (int halving = 0; halving < 30 && !accepted; ++halving) {
            const double cand = attempt(step, alpha, &r_new);
            if (cand < rn2) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            // steepen the Marquardt damping until something gives
            for (int boost = 1; boost <= 10 && !accepted; ++boost) {
                lambda = std::max(lambda, 1e-14) * 10.0;
                std::vector<double> d2;
                try {
                    d2 = solve_normal_equations(j, r, lambda);
                } catch (const SingularSystemError&) {
                    continue;
                }
                const double cand = attempt(d2, 1.0, &r_new);
                if (cand < rn2) {
                    step = std::move(d2);
                    alpha = 1.0;
                    accepted = true;
                }
            }
        }
        if (!accepted) {
            rep.converged = false;
            rep.condition_estimate = condition_estimate(j);
            return rep;
        }

        for (std::size_t c = 0; c < 10; ++c) x[c] += alpha * step[c];
        rep.weights = PrefactoredWeights::from_array(x, rep.weights.direction);
        r = std::move(r_new);
        rn2 = norm2(r);
        rep.residual_norm = norm_inf(r);
        rep.iterations = it + 1;
    }

    rep.converged = rep.residual_norm <= tol;
    try {
        rep.condition_estimate = condition_estimate(jacobian_fd(resfn, rep.weights));
    } catch (const std::exception&) {
        rep.condition_estimate = kInf;
    }
    return rep;
}

MultistartResult multistart(const ResidualFn& resfn, int n_starts, std::uint64_t seed,
                            double tol, int max_iter, bool parallel) {
    require(n_starts >= 1, "multistart: need at least one start");

    // All start points are drawn up front from one seeded generator, so the
    // result can not depend on scheduling.
    std::vector<PrefactoredWeights> starts;
    starts.reserve(static_cast<std::size_t>(n_starts) + 2);
    starts.push_back(PrefactoredWeights{});
    {
        // structured ansatz: betaI = thetaII = 11/48 with small cross terms
        PrefactoredWeights w;
        w.betaI = 11.0 / 48.0;
        w.thetaII = 11.0 / 48.0;
        w.thetaI = 1.0 / 32.0;
        w.betaII = 1.0 / 32.0;
        starts.push_back(w);
    }
    std::mt19937_64 gen(seed);
    auto unit = [&gen]() {
        return static_cast<double>(gen() >> 11) * 0x1.0p-53;  // uniform [0, 1)
    };
    for (int k = 0; k < n_starts; ++k) {
        std::array<double, 10> v{};
        for (double& x : v) x = -1.5 + 3.0 * unit();
        starts.push_back(PrefactoredWeights::from_array(v));
    }

    std::vector<SolveReport> reports(starts.size());
    const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(starts.size());
#pragma omp parallel for if (parallel) schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        SolveReport rep = newton_solve(resfn, starts[static_cast<std::size_t>(i)], tol, max_iter);
        rep.start_index = static_cast<int>(i);
        reports[static_cast<std::size_t>(i)] = std::move(rep);
    }

    auto better = [](const SolveReport& a, const SolveReport& b) {
        if (a.residual_norm != b.residual_norm) return a.residual_norm < b.residual_norm;
        if (a.condition_estimate != b.condition_estimate)
            return a.condition_estimate < b.condition_estimate;
        return a.start_index < b.start_index;
    };

    MultistartResult out;
    for (const SolveReport& rep : reports) {
        if (!rep.converged) continue;
        bool merged = false;
        for (SolveReport& kept : out.roots) {
            const std::array<double, 10> a = kept.weights.to_array();
            const std::array<double, 10> b = rep.weights.to_array();
            double d2 = 0.0;
            for (std::size_t c = 0; c < 10; ++c) d2 += (a[c] - b[c]) * (a[c] - b[c]);
            if (std::sqrt(d2) < 1e-7) {
                if (better(rep, kept)) kept = rep;
                merged = true;
                break;
            }
        }
        if (!merged) out.roots.push_back(rep);
    }
    std::sort(out.roots.begin(), out.roots.end(), better);

    if (!out.roots.empty()) {
        out.best = out.roots.front();
    } else {
        out.best = reports.front();
        for (const SolveReport& rep : reports)
            if (rep.residual_norm < out.best.residual_norm) out.best = rep;
    }
    return out;
}

ValidationReport validate(const PrefactoredWeights& fwd, const PrefactoredWeights& bwd,
                          const CombinedStencil& target, std::span<const double> wgrid) {
    require(fwd.direction == Direction::forward && bwd.direction == Direction::backward,
            "validate: expected a forward/backward pair");
    constexpr double kPi = 3.14159265358979323846;
    for (double w : wgrid)
        if (!(w > 0.0 && w < kPi))
            throw std::invalid_argument(
                "validate: sampling grid must lie strictly inside (0, pi)");

    ValidationReport rep;
    for (double w : wgrid) {
        const SymbolSample f = prefactored_symbol(fwd, w);
        const SymbolSample b = prefactored_symbol(bwd, w);
        const SymbolSample t = combined_symbol_oracle(target, w);

        rep.re_gap_first = std::max(rep.re_gap_first, std::abs(f.re_wp - b.re_wp));
        rep.im_sum_first = std::max(rep.im_sum_first, std::abs(f.im_wp + b.im_wp));
        rep.target_gap_first = std::max(rep.target_gap_first, std::abs(f.re_wp - t.re_wp));
        rep.re_gap_second = std::max(rep.re_gap_second, std::abs(f.re_wpp2 - b.re_wpp2));
        rep.im_sum_second = std::max(rep.im_sum_second, std::abs(f.im_wpp2 + b.im_wpp2));
        rep.target_gap_second =
            std::max(rep.target_gap_second, std::abs(f.re_wpp2 - t.re_wpp2));

        const double avg_re_1 = 0.5 * (f.re_wp + b.re_wp) - t.re_wp;
        const double avg_im_1 = 0.5 * (f.im_wp + b.im_wp);
        rep.avg_gap_first = std::max(rep.avg_gap_first, std::hypot(avg_re_1, avg_im_1));
        const double avg_re_2 = 0.5 * (f.re_wpp2 + b.re_wpp2) - t.re_wpp2;
        const double avg_im_2 = 0.5 * (f.im_wpp2 + b.im_wpp2);
        rep.avg_gap_second = std::max(rep.avg_gap_second, std::hypot(avg_re_2, avg_im_2));
    }
    return rep;
}

double sweep_spectral_radius(const PrefactoredWeights& w) {
    const double tr = w.betaI + w.thetaII;
    const double det = w.betaI * w.thetaII - w.thetaI * w.betaII;
    const double disc = tr * tr - 4.0 * det;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        return std::max(std::abs(tr + s), std::abs(tr - s)) / 2.0;
    }
    return std::sqrt(std::abs(det));  // complex pair, |lambda| = sqrt(det)
}

PrefactoredSolveResult solve_spectral_weights(SchemeId target, int n_starts, std::uint64_t seed,
                                              double tol, int max_iter, bool parallel) {
    const CombinedStencil stencil =
        target == SchemeId::ccd6 ? build_ccd6() : build_ccd8(true);
    const ResidualFn resfn = make_spectral_residual(stencil, chebyshev_wgrid(64));

    MultistartResult ms = multistart(resfn, n_starts, seed, tol, max_iter, parallel);

    const std::vector<double> fresh = midpoint_wgrid(128);

    PrefactoredSolveResult out;
    out.roots = ms.roots;
    out.best = ms.best;

    const SolveReport* fallback_validated = nullptr;
    ValidationReport fallback_report;
    for (const SolveReport& root : ms.roots) {
        ValidationReport v;
        try {
            v = validate(root.weights, mirror_backward(root.weights), stencil, fresh);
        } catch (const std::exception&) {
            continue;
        }
        if (!v.passed(1e-9)) continue;
        if (!fallback_validated) {
            fallback_validated = &root;
            fallback_report = v;
        }

        // admissibility: constant Im sign, |cI| dominant, contractive sweep
        bool sign_ok = true;
        int sign = 0;
        for (double w : chebyshev_wgrid(16)) {
            const double im = prefactored_symbol(root.weights, w).im_wp;
            const int s = im > 0.0 ? 1 : (im < 0.0 ? -1 : 0);
            if (s == 0) continue;
            if (sign == 0)
                sign = s;
            else if (s != sign) {
                sign_ok = false;
                break;
            }
        }
        const PrefactoredWeights& w = root.weights;
        const bool ci_dominant =
            std::abs(w.cI) >= std::abs(w.aI) && std::abs(w.cI) >= std::abs(w.bI);
        const bool contractive = sweep_spectral_radius(w) < 1.0;

        if (sign_ok && ci_dominant && contractive) {
            out.best = root;
            out.forward = root.weights;
            out.backward = mirror_backward(root.weights);
            out.validation = v;
            out.admissible = true;
            return out;
        }
    }

    if (fallback_validated) {
        out.best = *fallback_validated;
        out.forward = fallback_validated->weights;
        out.backward = mirror_backward(fallback_validated->weights);
        out.validation = fallback_report;
        out.admissible = false;
        return out;
    }

    out.forward = out.best.weights;
    out.backward = out.best.weights.direction == Direction::forward
                       ? mirror_backward(out.best.weights)
                       : out.best.weights;
    out.admissible = false;
    return out;
}

}  // namespace ccd
