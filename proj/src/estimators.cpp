#include "snls/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "snls/norms.hpp"
#include "snls/parallel.hpp"
#include "snls/states.hpp"

namespace snls {

namespace {

Field as_physical(const Field& f) { return f.rep == Rep::physical ? f : to_physical(f); }

std::vector<double> sample_times(double horizon, const StepConfig& step) {
    const long long n_steps = static_cast<long long>(std::floor(horizon / step.dt + 1e-9));
    std::vector<double> t;
    t.push_back(0.0);
    for (long long s = 1; s <= n_steps; ++s) {
        if (s % step.diagnostics_stride == 0 || s == n_steps) {
            t.push_back(static_cast<double>(s) * step.dt);
        }
    }
    return t;
}

double tail_average(std::span<const double> times, std::span<const double> values) {
    const double t_cut = 0.75 * times.back();
    std::vector<double> tail;
    for (std::size_t j = 0; j < times.size(); ++j) {
        if (times[j] >= t_cut) tail.push_back(values[j]);
    }
    return mean(tail);
}

// Column-wise mean over per-path rows, pairwise in slot order; rows
// flagged as excluded are skipped.
std::vector<double> column_means(const std::vector<std::vector<double>>& rows,
                                 const std::vector<char>& excluded) {
    std::size_t cols = 0;
    for (std::size_t m = 0; m < rows.size(); ++m) {
        if (!excluded[m]) {
            cols = rows[m].size();
            break;
        }
    }
    std::vector<double> out(cols, 0.0);
    std::vector<double> column;
    for (std::size_t j = 0; j < cols; ++j) {
        column.clear();
        for (std::size_t m = 0; m < rows.size(); ++m) {
            if (!excluded[m]) column.push_back(rows[m][j]);
        }
        out[j] = mean(column);
    }
    return out;
}

}  // namespace

// ---- observables ----------------------------------------------------------

std::vector<Observable> shipped_observables(GridPtr grid) {
    auto g = std::make_shared<Field>(
        gaussian_bump(grid, 0.5, grid->box_length() / 10.0, 0.5));
    auto phi = std::make_shared<Field>(
        gaussian_bump(grid, 1.0, grid->box_length() / 8.0, 0.3));
    const double phi_norm = norm_sobolev(*phi, 0.0);
    for (auto& v : phi->values) v /= phi_norm;

    std::vector<Observable> obs;
    obs.push_back({"d1_to_zero", [](const Field& u) {
                       return std::min(norm_sobolev(u, 0.0), 1.0);
                   }});
    obs.push_back({"sin_shifted_norm", [g](const Field& u) {
                       return std::sin(std::min(l2_distance(as_physical(u), *g), 1.0));
                   }});
    obs.push_back({"clipped_overlap", [phi](const Field& u) {
                       const double x = inner_h(as_physical(u), *phi);
                       return 0.5 * std::clamp(x, -1.0, 1.0);
                   }});
    return obs;
}

double lipschitz_worst_ratio(const Observable& obs, std::span<const Field> probes) {
    double worst = 0.0;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        for (std::size_t j = i + 1; j < probes.size(); ++j) {
            const Field a = as_physical(probes[i]);
            const Field b = as_physical(probes[j]);
            const double d = d1_distance(a, b);
            if (d < 1e-12) continue;
            worst = std::max(worst, std::abs(obs.eval(a) - obs.eval(b)) / d);
        }
    }
    return worst;
}

// ---- moment experiments -----------------------------------------------------

namespace {

struct MomentTerms {
    double decay_rate = 0.0;
    double plateau_unit = 0.0;  // plateau terms with unit constant
};

MomentTerms h_bound_terms(const ModelParams& p, const CovarianceSpec& q, const Grid& grid,
                          int n) {
    MomentTerms t;
    t.decay_rate = static_cast<double>(n) * p.lambda;
    const double hs0 = hs_norm(q, 0.0, grid);
    t.plateau_unit = std::pow(hs0, 2.0 * n) / std::pow(p.lambda, n);
    return t;
}

MomentTerms phi_bound_terms(const ModelParams& p, const CovarianceSpec& q, const Grid& grid,
                            int n) {
    MomentTerms t;
    t.decay_rate = p.lambda;  // unit c_{1,n}
    const double hs1 = hs_norm(q, 1.0, grid);
    const double nn = static_cast<double>(n);
    t.plateau_unit = std::pow(hs1, 2.0 * nn) / std::pow(p.lambda, nn) +
                     std::pow(hs1, 2.0 * nn * (1.0 + p.sigma)) /
                         std::pow(p.lambda, nn * (1.0 + p.sigma));
    if (p.alpha == 1) {
        const double sd = sigma_d(p.sigma, p.dim);
        const double hs0 = hs_norm(q, 0.0, grid);
        t.plateau_unit += std::pow(hs0, 2.0 * nn * sd) / std::pow(p.lambda, nn * sd);
    }
    return t;
}

MomentReport run_moment_experiment(const Field& u0, const ModelParams& p,
                                   const CovarianceSpec& q, const EnsembleConfig& ens, int n,
                                   const StepConfig& step, bool track_phi,
                                   const MomentTerms& terms) {
    if (n < 1 || n > 3) throw std::invalid_argument("moment check: n must be in {1,2,3}");
    MomentReport rep;
    rep.n = n;
    rep.lambda = p.lambda;
    rep.times = sample_times(ens.horizon, step);
    rep.paths = static_cast<std::size_t>(ens.n_paths);
    const double nn = static_cast<double>(n);

    std::vector<std::vector<double>> rows(rep.paths);
    std::vector<char> excluded(rep.paths, 0);
    parallel_for(rep.paths, ens.threads, [&](std::size_t m) {
        NoiseStream stream{ens.base_seed, m, 0, 0};
        try {
            const TrajectoryRecord tr = integrate(u0, p, q, ens.horizon, step, stream, false);
            rows[m].resize(tr.samples());
            for (std::size_t j = 0; j < tr.samples(); ++j) {
                const double base =
                    track_phi ? tr.functionals[j].phi : tr.functionals[j].mass;
                rows[m][j] = std::pow(base, nn);
            }
        } catch (const BlowupError&) {
            excluded[m] = 1;
        }
    });
    rep.blowups = static_cast<std::size_t>(
        std::count(excluded.begin(), excluded.end(), static_cast<char>(1)));
    if (rep.blowups == rep.paths) {
        throw std::runtime_error("moment check: every path blew up");
    }

    rep.empirical = column_means(rows, excluded);
    const FunctionalReport f0 = phi_alpha(as_physical(u0), p, 0.0);
    rep.initial_moment = std::pow(track_phi ? f0.phi : f0.mass, nn);
    rep.decay_rate = terms.decay_rate;
    rep.plateau_theory = terms.plateau_unit;

    double c = 0.0;
    for (std::size_t j = 0; j < rep.times.size(); ++j) {
        const double transient = std::exp(-terms.decay_rate * rep.times[j]) * rep.initial_moment;
        const double excess = rep.empirical[j] - transient;
        if (terms.plateau_unit > 0.0) c = std::max(c, excess / terms.plateau_unit);
    }
    rep.fitted_constant = c;
    rep.plateau = tail_average(rep.times, rep.empirical);
    return rep;
}

}  // namespace

MomentReport moment_check_h(const Field& u0, const ModelParams& p, const CovarianceSpec& q,
                            const EnsembleConfig& ens, int n, const StepConfig& step) {
    const MomentTerms terms = h_bound_terms(p, q, *u0.grid, n);
    MomentReport rep = run_moment_experiment(u0, p, q, ens, n, step, false, terms);
    const MomentTerms doubled = h_bound_terms(
        ModelParams{2.0 * p.lambda, p.alpha, p.sigma, p.kappa, p.dim}, q, *u0.grid, n);
    rep.theory_lambda_exponent =
        std::log2(terms.plateau_unit / std::max(doubled.plateau_unit, 1e-300));
    return rep;
}

MomentReport moment_check_phi(const Field& u0, const ModelParams& p, const CovarianceSpec& q,
                              const EnsembleConfig& ens, int n, const StepConfig& step) {
    const MomentTerms terms = phi_bound_terms(p, q, *u0.grid, n);
    MomentReport rep = run_moment_experiment(u0, p, q, ens, n, step, true, terms);
    const MomentTerms doubled = phi_bound_terms(
        ModelParams{2.0 * p.lambda, p.alpha, p.sigma, p.kappa, p.dim}, q, *u0.grid, n);
    rep.theory_lambda_exponent =
        std::log2(terms.plateau_unit / std::max(doubled.plateau_unit, 1e-300));
    return rep;
}

GammaMomentReport gamma_moment_check(const ModelParams& p, const CovarianceSpec& q, GridPtr grid,
                                     const EnsembleConfig& ens, int n, const StepConfig& step) {
    if (n < 1) throw std::invalid_argument("gamma moment check: n must be >= 1");
    GammaMomentReport rep;
    rep.n = n;
    rep.times = sample_times(ens.horizon, step);
    rep.paths = static_cast<std::size_t>(ens.n_paths);
    const double nn = static_cast<double>(n);

    const auto symbol = detail::symbol_table(q, *grid);
    const double ou_scale = ou_increment_variance_scale(p.lambda, step.dt);
    const auto& ksq = grid->ksq();
    std::vector<std::complex<double>> prop(grid->size());
    for (std::size_t i = 0; i < prop.size(); ++i) {
        prop[i] = std::exp(std::complex<double>(-p.lambda * step.dt, ksq[i] * step.dt));
    }

    const long long n_steps =
        static_cast<long long>(std::floor(ens.horizon / step.dt + 1e-9));
    std::vector<std::vector<double>> rows(rep.paths);
    std::vector<char> excluded(rep.paths, 0);
    parallel_for(rep.paths, ens.threads, [&](std::size_t m) {
        NoiseStream stream{ens.base_seed, m, 0, 0};
        Field gamma = make_field(grid, Rep::spectral);
        Field xi = make_field(grid, Rep::spectral);
        auto moment = [&] {
            const double g = norm_sobolev(gamma, 0.0);
            return std::pow(g * g, nn);
        };
        double integral = 0.0;
        double prev = moment();
        rows[m].push_back(integral);
        for (long long s = 1; s <= n_steps; ++s) {
            detail::fill_increment(symbol, q.kind, *grid, ou_scale, stream, xi);
            stream.advance();
            for (std::size_t i = 0; i < gamma.values.size(); ++i) {
                gamma.values[i] = gamma.values[i] * prop[i] + xi.values[i];
            }
            const double cur = moment();
            integral += 0.5 * (prev + cur) * step.dt;
            prev = cur;
            if (s % step.diagnostics_stride == 0 || s == n_steps) rows[m].push_back(integral);
        }
    });

    rep.running_integral = column_means(rows, excluded);
    const double hs0 = hs_norm(q, 0.0, *grid);
    auto fitted_at = [&](double frac) {
        const double t_want = frac * ens.horizon;
        std::size_t best = 0;
        for (std::size_t j = 0; j < rep.times.size(); ++j) {
            if (std::abs(rep.times[j] - t_want) < std::abs(rep.times[best] - t_want)) best = j;
        }
        const double denom =
            std::pow(hs0, 2.0 * nn) / std::pow(p.lambda, nn) * rep.times[best];
        return denom > 0.0 ? rep.running_integral[best] / denom : 0.0;
    };
    rep.fitted_c_half = fitted_at(0.5);
    rep.fitted_c_full = fitted_at(1.0);
    return rep;
}

// ---- mixing -----------------------------------------------------------------

namespace {

std::vector<Field> lipschitz_probes(GridPtr grid, const Field& u0_1, const Field& u0_2,
                                    std::uint64_t seed) {
    std::vector<Field> probes;
    probes.push_back(as_physical(u0_1));
    probes.push_back(as_physical(u0_2));
    probes.push_back(make_field(grid));
    probes.push_back(gaussian_bump(grid, 1.0, grid->box_length() / 12.0));
    for (int i = 0; i < 8; ++i) {
        NoiseStream s{seed, static_cast<std::uint64_t>(i), 0, 0xf1e1d5ULL};
        probes.push_back(as_physical(random_smooth(grid, 0.3 + 0.4 * i, 1.5, s)));
    }
    return probes;
}

RateFit fit_gap_curve(const std::string& name, std::span<const double> times,
                      std::span<const double> gap, std::span<const double> floor,
                      double burn_in) {
    RateFit fit;
    fit.observable = name;
    std::vector<double> xs_poly, xs_exp, ys;
    fit.t_floor = times.back();
    bool floored = false;
    for (std::size_t j = 0; j < times.size(); ++j) {
        if (times[j] < burn_in) continue;
        if (!floored && gap[j] < floor[j]) {
            floored = true;
            fit.t_floor = times[j];
        }
        if (!floored && gap[j] > 0.0) {
            if (xs_poly.empty()) fit.window_lo = times[j];
            fit.window_hi = times[j];
            xs_poly.push_back(std::log1p(times[j]));
            xs_exp.push_back(times[j]);
            ys.push_back(std::log(gap[j]));
        }
    }
    fit.hit_floor = floored;
    fit.window_points = ys.size();
    if (ys.size() >= 3) {
        const LineFit lp = least_squares(xs_poly, ys);
        fit.poly_exponent = -lp.slope;
        fit.poly_residual = lp.rms_residual;
        const LineFit le = least_squares(xs_exp, ys);
        fit.exp_rate = -le.slope;
        fit.exp_residual = le.rms_residual;
    }
    return fit;
}

}  // namespace

MixReport mixing_rate(const Field& u0_1, const Field& u0_2, const ModelParams& p,
                      const CovarianceSpec& q, const EnsembleConfig& ens, const StepConfig& step,
                      std::span<const Observable> observables, double burn_in) {
    if (u0_1.grid != u0_2.grid) {
        throw std::invalid_argument("mixing_rate: initial fields on different grids");
    }
    const auto probes = lipschitz_probes(u0_1.grid, u0_1, u0_2, ens.base_seed ^ 0x9e37ULL);
    for (const auto& obs : observables) {
        const double worst = lipschitz_worst_ratio(obs, probes);
        if (worst > 1.0 + 1e-9) {
            throw std::invalid_argument("mixing_rate: observable '" + obs.name +
                                        "' failed the Lipschitz probe (ratio " +
                                        std::to_string(worst) + ")");
        }
    }

    MixReport rep;
    rep.burn_in = burn_in;
    rep.paths = static_cast<std::size_t>(ens.n_paths);
    rep.times = sample_times(ens.horizon, step);
    const std::size_t n_obs = observables.size();
    const std::size_t n_t = rep.times.size();
    for (const auto& o : observables) rep.observables.push_back(o.name);

    // raw[m] holds, per path, n_obs * n_t triples (f1, f2).
    std::vector<std::vector<double>> f1(rep.paths), f2(rep.paths);
    parallel_for(rep.paths, ens.threads, [&](std::size_t m) {
        StrangIntegrator engine(u0_1.grid, p, q, step);
        NoiseStream stream{ens.base_seed, m, 0, 0};
        Field a = to_spectral(as_physical(u0_1));
        Field b = to_spectral(as_physical(u0_2));
        f1[m].resize(n_obs * n_t);
        f2[m].resize(n_obs * n_t);
        std::size_t slot = 0;
        auto sample = [&] {
            const Field pa = to_physical(a);
            const Field pb = to_physical(b);
            for (std::size_t o = 0; o < n_obs; ++o, ++slot) {
                f1[m][slot] = observables[o].eval(pa);
                f2[m][slot] = observables[o].eval(pb);
            }
        };
        sample();
        const long long n_steps =
            static_cast<long long>(std::floor(ens.horizon / step.dt + 1e-9));
        for (long long s = 1; s <= n_steps; ++s) {
            engine.step_pair(a, b, nullptr, stream, static_cast<double>(s) * step.dt);
            if (s % step.diagnostics_stride == 0 || s == n_steps) sample();
        }
    });

    rep.gap.assign(n_obs, std::vector<double>(n_t, 0.0));
    rep.noise_floor.assign(n_obs, std::vector<double>(n_t, 0.0));
    std::vector<double> diffs(rep.paths), a_vals(rep.paths), b_vals(rep.paths);
    for (std::size_t j = 0; j < n_t; ++j) {
        for (std::size_t o = 0; o < n_obs; ++o) {
            const std::size_t slot = j * n_obs + o;
            for (std::size_t m = 0; m < rep.paths; ++m) {
                a_vals[m] = f1[m][slot];
                b_vals[m] = f2[m][slot];
                diffs[m] = a_vals[m] - b_vals[m];
            }
            rep.gap[o][j] = std::abs(mean(diffs));
            const double se2 =
                (variance(a_vals) + variance(b_vals)) / static_cast<double>(rep.paths);
            rep.noise_floor[o][j] = 3.0 * std::sqrt(std::max(se2, 0.0));
        }
    }

    for (std::size_t o = 0; o < n_obs; ++o) {
        rep.fits.push_back(fit_gap_curve(observables[o].name, rep.times, rep.gap[o],
                                         rep.noise_floor[o], burn_in));
        std::vector<double> window;
        for (std::size_t j = 0; j < n_t; ++j) {
            if (rep.times[j] >= burn_in && rep.times[j] <= rep.fits.back().t_floor) {
                window.push_back(rep.gap[o][j]);
            }
        }
        rep.trends.push_back(mann_kendall(window));
    }
    return rep;
}

VarianceComparison variance_reduction_check(const Field& u0_1, const Field& u0_2,
                                            const ModelParams& p, const CovarianceSpec& q,
                                            const EnsembleConfig& ens, const StepConfig& step,
                                            std::span<const Observable> observables) {
    VarianceComparison out;
    for (const auto& o : observables) out.observables.push_back(o.name);
    const std::size_t n_obs = observables.size();
    const auto paths = static_cast<std::size_t>(ens.n_paths);

    std::vector<std::vector<double>> common(paths), indep1(paths), indep2(paths);
    parallel_for(paths, ens.threads, [&](std::size_t m) {
        const long long n_steps =
            static_cast<long long>(std::floor(ens.horizon / step.dt + 1e-9));
        StrangIntegrator engine(u0_1.grid, p, q, step);

        NoiseStream shared{ens.base_seed, m, 0, 0};
        Field a = to_spectral(as_physical(u0_1));
        Field b = to_spectral(as_physical(u0_2));
        for (long long s = 1; s <= n_steps; ++s) {
            engine.step_pair(a, b, nullptr, shared, static_cast<double>(s) * step.dt);
        }
        const Field pa = to_physical(a);
        const Field pb = to_physical(b);
        common[m].resize(n_obs);
        for (std::size_t o = 0; o < n_obs; ++o) {
            common[m][o] = observables[o].eval(pa) - observables[o].eval(pb);
        }

        NoiseStream s1{ens.base_seed, 2 * m, 0, 1};
        NoiseStream s2{ens.base_seed, 2 * m + 1, 0, 1};
        Field c = to_spectral(as_physical(u0_1));
        Field d = to_spectral(as_physical(u0_2));
        for (long long s = 1; s <= n_steps; ++s) {
            const double t = static_cast<double>(s) * step.dt;
            engine.step(c, nullptr, s1, t);
            engine.step(d, nullptr, s2, t);
        }
        const Field pc = to_physical(c);
        const Field pd = to_physical(d);
        indep1[m].resize(n_obs);
        indep2[m].resize(n_obs);
        for (std::size_t o = 0; o < n_obs; ++o) {
            indep1[m][o] = observables[o].eval(pc);
            indep2[m][o] = observables[o].eval(pd);
        }
    });

    std::vector<double> col(paths);
    for (std::size_t o = 0; o < n_obs; ++o) {
        for (std::size_t m = 0; m < paths; ++m) col[m] = common[m][o];
        out.var_common.push_back(variance(col));
        double v = 0.0;
        for (std::size_t m = 0; m < paths; ++m) col[m] = indep1[m][o];
        v += variance(col);
        for (std::size_t m = 0; m < paths; ++m) col[m] = indep2[m][o];
        v += variance(col);
        out.var_independent.push_back(v);
    }
    return out;
}

// ---- irreducibility ----------------------------------------------------------

IrreducibilityReport irreducibility_probe(const ModelParams& p, const CovarianceSpec& q,
                                          GridPtr grid, double R, double r,
                                          std::span<const double> times,
                                          const EnsembleConfig& ens, const StepConfig& step) {
    if (!(R > 0.0) || !(r > 0.0)) {
        throw std::invalid_argument("irreducibility_probe: R and r must be > 0");
    }
    IrreducibilityReport rep;
    rep.radius_start = R;
    rep.radius_target = r;
    rep.times.assign(times.begin(), times.end());
    std::sort(rep.times.begin(), rep.times.end());
    rep.pairs = static_cast<std::size_t>(ens.n_paths);

    std::vector<long long> step_of_time(rep.times.size());
    for (std::size_t j = 0; j < rep.times.size(); ++j) {
        step_of_time[j] = static_cast<long long>(std::llround(rep.times[j] / step.dt));
        if (std::abs(step_of_time[j] * step.dt - rep.times[j]) > 1e-9) {
            throw std::invalid_argument("irreducibility_probe: times must sit on the dt grid");
        }
    }
    const long long n_steps = step_of_time.back();

    std::vector<std::vector<char>> hit(rep.pairs, std::vector<char>(rep.times.size(), 0));
    parallel_for(rep.pairs, ens.threads, [&](std::size_t m) {
        NoiseStream ic1{ens.base_seed, 2 * m, 0, 0x1c0};
        NoiseStream ic2{ens.base_seed, 2 * m + 1, 0, 0x1c0};
        Field u1 = as_physical(random_smooth(grid, 1.0, 2.0, ic1));
        Field u2 = as_physical(random_smooth(grid, 1.0, 2.0, ic2));
        shrink_pair_to_phi_budget(u1, u2, p, R);

        StrangIntegrator engine(grid, p, q, step);
        NoiseStream stream{ens.base_seed, m, 0, 0};
        Field a = to_spectral(u1);
        Field b = to_spectral(u2);
        std::size_t next_time = 0;
        while (next_time < rep.times.size() && step_of_time[next_time] == 0) {
            const double sum = phi_alpha(u1, p).phi + phi_alpha(u2, p).phi;
            hit[m][next_time] = sum <= r;
            ++next_time;
        }
        for (long long s = 1; s <= n_steps && next_time < rep.times.size(); ++s) {
            engine.step_pair(a, b, nullptr, stream, static_cast<double>(s) * step.dt);
            if (s == step_of_time[next_time]) {
                const double sum = phi_alpha(to_physical(a), p).phi +
                                   phi_alpha(to_physical(b), p).phi;
                hit[m][next_time] = sum <= r;
                ++next_time;
            }
        }
    });

    rep.hits.assign(rep.times.size(), 0);
    for (std::size_t j = 0; j < rep.times.size(); ++j) {
        for (std::size_t m = 0; m < rep.pairs; ++m) rep.hits[j] += hit[m][j];
        rep.intervals.push_back(wilson_interval(rep.hits[j], rep.pairs));
        if (!rep.first_positive_time && rep.intervals[j].lo > 0.0) {
            rep.first_positive_time = rep.times[j];
        }
    }
    return rep;
}

// ---- pathwise integral bounds ------------------------------------------------

StrichartzReport strichartz_integral(const TrajectoryRecord& traj, double u0_h1_norm,
                                     double sigma, int n_sigma, double c1n) {
    if (!traj.tracked_gamma) {
        throw std::invalid_argument("strichartz_integral: trajectory lacks gamma diagnostics");
    }
    if (n_sigma < 1) throw std::invalid_argument("strichartz_integral: n_sigma must be >= 1");
    StrichartzReport rep;
    rep.sigma = sigma;
    rep.n_sigma = n_sigma;
    rep.c1n = c1n;
    rep.times = traj.times;

    const double ns = static_cast<double>(n_sigma);
    const std::size_t m = traj.times.size();
    rep.lhs.resize(m);
    rep.bracket.resize(m);
    auto lhs_integrand = [&](std::size_t j) {
        return std::pow(traj.sup_norms[j], 2.0 * sigma);
    };
    auto rhs_integrand = [&](std::size_t j) {
        return c1n * std::pow(traj.functionals[j].phi, ns) +
               ns * std::pow(traj.gamma_h[j], ns) + ns * std::pow(traj.gamma_lap[j], ns);
    };
    const double additive = std::pow(u0_h1_norm, 2.0 * sigma) + 1.0;
    double li = 0.0, ri = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        if (j > 0) {
            const double dt = traj.times[j] - traj.times[j - 1];
            li += 0.5 * (lhs_integrand(j - 1) + lhs_integrand(j)) * dt;
            ri += 0.5 * (rhs_integrand(j - 1) + rhs_integrand(j)) * dt;
        }
        rep.lhs[j] = li;
        rep.bracket[j] = ri + additive + traj.times[j];
        rep.fitted_c = std::max(rep.fitted_c, rep.lhs[j] / rep.bracket[j]);
    }
    std::size_t violations = 0;
    for (std::size_t j = 0; j < m; ++j) {
        if (rep.lhs[j] > rep.fitted_c * rep.bracket[j] * (1.0 + 1e-12)) ++violations;
    }
    rep.violation_fraction_after_fit =
        m ? static_cast<double>(violations) / static_cast<double>(m) : 0.0;
    return rep;
}

// ---- dispersive decay ----------------------------------------------------------

DispersiveReport dispersive_decay_check(const Field& u0, std::span<const double> times, double s,
                                        double p, int sup_refine) {
    if (p < 2.0) {
        throw std::invalid_argument("dispersive_decay_check: p must be in [2, inf]");
    }
    DispersiveReport rep;
    rep.s = s;
    rep.p = p;
    rep.times.assign(times.begin(), times.end());

    const Field spec = (u0.rep == Rep::spectral) ? u0 : to_spectral(u0);
    const int d = u0.grid->dim();
    const double p_dual = std::isinf(p) ? 1.0 : p / (p - 1.0);
    rep.dual_norm = norm_hsp(spec, s, p_dual, sup_refine);
    const double expo = d * (0.5 - (std::isinf(p) ? 0.0 : 1.0 / p));

    // Effective bandwidth: largest |k| carrying more than 1e-12 of the
    // peak coefficient. Wraparound when the fastest packet (group speed
    // 2k) crosses half the box.
    double peak = 0.0;
    for (const auto& v : spec.values) peak = std::max(peak, std::abs(v));
    double k_eff = 0.0;
    const auto& ksq = spec.grid->ksq();
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
        if (std::abs(spec.values[i]) >= 1e-12 * peak) {
            k_eff = std::max(k_eff, std::sqrt(ksq[i]));
        }
    }
    rep.t_wrap = k_eff > 0.0 ? u0.grid->box_length() / (4.0 * k_eff)
                             : std::numeric_limits<double>::infinity();

    std::vector<double> log_t, log_lhs;
    for (const double t : rep.times) {
        Field ut = spec;
        for (std::size_t i = 0; i < ut.values.size(); ++i) {
            ut.values[i] *= std::exp(std::complex<double>(0.0, ksq[i] * t));
        }
        const double lhs = norm_hsp(ut, s, p, sup_refine);
        rep.lhs.push_back(lhs);
        const bool in_window = t > 0.0 ? t <= rep.t_wrap : expo == 0.0;
        rep.in_window.push_back(in_window);
        double ratio = 0.0;
        if (t > 0.0) {
            ratio = lhs / (std::pow(4.0 * M_PI * t, -expo) * rep.dual_norm);
        } else if (expo == 0.0) {
            ratio = lhs / rep.dual_norm;
        }
        rep.ratio.push_back(ratio);
        if (in_window && t > 0.0) {
            log_t.push_back(std::log(t));
            log_lhs.push_back(std::log(lhs));
        }
    }
    rep.window_points = log_t.size();
    if (log_t.size() >= 2) {
        rep.fitted_slope = least_squares(log_t, log_lhs).slope;
    }
    return rep;
}

// ---- Strichartz exponents and nonlinearity bounds ------------------------------

AdmissibleCheck admissible_pair_check(double gamma, double r, int dim) {
    AdmissibleCheck out;
    const double inv_gamma = std::isinf(gamma) ? 0.0 : 1.0 / gamma;
    const double inv_r = std::isinf(r) ? 0.0 : 1.0 / r;
    if (gamma == 2.0 && std::isinf(r)) {
        out.reason = "(2, inf) is excluded";
        return out;
    }
    if (std::abs(2.0 * inv_gamma + dim * inv_r - 0.5 * dim) > 1e-9) {
        out.reason = "scaling relation 2/gamma + d/r = d/2 fails";
        return out;
    }
    if (r < 2.0) {
        out.reason = "r < 2";
        return out;
    }
    if (dim == 2 && std::isinf(r)) {
        out.reason = "r = inf not allowed in d = 2";
        return out;
    }
    if (dim >= 3) {
        const double r_max = 2.0 * dim / (dim - 2.0);
        if (r > r_max + 1e-9) {
            out.reason = "r exceeds 2d/(d-2)";
            return out;
        }
    }
    out.admissible = true;
    out.reason = "admissible";
    return out;
}

NonlinearityBoundReport nonlinearity_bound_check(double sigma, int dim, double p,
                                                 std::span<const Field> ensemble) {
    if (dim != 2 && dim != 3) {
        throw std::invalid_argument(
            "nonlinearity_bound_check: the bound is stated for d = 2, 3 only");
    }
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("nonlinearity_bound_check: sigma must be > 0");
    }
    const double p_lo = 2.0 / (2.0 * sigma + 1.0);
    if (p < 1.0) throw std::invalid_argument("nonlinearity_bound_check: violates p >= 1");
    if (p >= 2.0) throw std::invalid_argument("nonlinearity_bound_check: violates p < 2");
    if (p < p_lo - 1e-12) {
        throw std::invalid_argument("nonlinearity_bound_check: violates p >= 2/(2 sigma + 1)");
    }
    if (dim == 3) {
        const double p_hi = 6.0 / (2.0 * sigma + 3.0);
        if (p > p_hi + 1e-12) {
            throw std::invalid_argument(
                "nonlinearity_bound_check: violates p <= 6/(2 sigma + 3)");
        }
    }

    NonlinearityBoundReport rep;
    rep.sigma = sigma;
    rep.dim = dim;
    rep.p = p;
    double half_max = 0.0;
    std::size_t idx = 0;
    for (const auto& u : ensemble) {
        ++idx;
        const Field phys = as_physical(u);
        const double h1 = norm_sobolev(phys, 1.0);
        if (h1 == 0.0) {
            ++rep.skipped_zero;
            continue;
        }
        Field fu = phys;
        for (auto& v : fu.values) v *= std::pow(std::norm(v), sigma);
        const double ratio = norm_hsp(fu, 1.0, p) / std::pow(h1, 1.0 + 2.0 * sigma);
        if (idx <= ensemble.size() / 2) half_max = std::max(half_max, ratio);
        rep.max_ratio = std::max(rep.max_ratio, ratio);
        ++rep.evaluated;
    }
    rep.stability_delta =
        rep.max_ratio > 0.0 ? (rep.max_ratio - half_max) / rep.max_ratio : 0.0;
    return rep;
}

}  // namespace snls
