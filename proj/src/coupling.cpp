#include "snls/coupling.hpp"

#include <cmath>

#include "snls/norms.hpp"

namespace snls {

namespace {

// Index of the sample sitting at time t, or -1.
long long sample_index_at(const std::vector<double>& times, double t) {
    if (times.empty()) return -1;
    const double spacing = times.size() > 1 ? times[1] - times[0] : 1.0;
    const auto j = static_cast<long long>(std::llround(t / std::max(spacing, 1e-300)));
    if (j < 0 || j >= static_cast<long long>(times.size())) return -1;
    if (std::abs(times[j] - t) > 1e-9 * std::max(1.0, std::abs(t))) return -1;
    return j;
}

}  // namespace

void validate_coupling_config(const CouplingConfig& cfg) {
    if (!(cfg.theta > 0.0) || !(cfg.beta > 0.0) || !(cfg.block_length > 0.0)) {
        throw std::invalid_argument("coupling config: theta, beta, block_length must be > 0");
    }
    if (cfg.moment_index < 1) {
        throw std::invalid_argument("coupling config: moment_index must be >= 1");
    }
    if (!(cfg.c1n > 0.0) || !(cfg.slope_constant > 0.0)) {
        throw std::invalid_argument("coupling config: c1n and slope_constant must be > 0");
    }
}

std::vector<double> en_series(const TrajectoryRecord& traj, const CouplingConfig& cfg,
                              double lambda) {
    if (!traj.tracked_gamma) {
        throw std::invalid_argument("en_series: trajectory lacks gamma diagnostics");
    }
    const auto n = static_cast<double>(cfg.moment_index);
    const std::size_t m = traj.times.size();
    std::vector<double> en(m, 0.0);
    double integral = 0.0;
    auto integrand = [&](std::size_t j) {
        return cfg.c1n * std::pow(traj.functionals[j].phi, n) +
               n * std::pow(traj.gamma_h[j], 2.0 * n) +
               n * std::pow(traj.gamma_lap[j], 2.0 * n);
    };
    double prev = m > 0 ? integrand(0) : 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        if (j > 0) {
            const double cur = integrand(j);
            integral += 0.5 * (prev + cur) * (traj.times[j] - traj.times[j - 1]);
            prev = cur;
        }
        en[j] = std::pow(traj.functionals[j].phi, n) + lambda * integral;
    }
    return en;
}

CouplingRecord couple_integrate(const Field& u0_1, const Field& u0_2, const ModelParams& p,
                                const CovarianceSpec& q, double horizon, const StepConfig& step,
                                const CouplingConfig& cfg, NoiseStream stream, double cert_C) {
    if (u0_1.grid != u0_2.grid) {
        throw std::invalid_argument("couple_integrate: initial fields on different grids");
    }
    validate_coupling_config(cfg);
    const double block_steps = cfg.block_length / (step.dt * step.diagnostics_stride);
    if (std::abs(block_steps - std::llround(block_steps)) > 1e-9) {
        throw std::invalid_argument(
            "couple_integrate: block_length must be a multiple of dt*stride");
    }
    StrangIntegrator engine(u0_1.grid, p, q, step);

    CouplingRecord rec;
    rec.traj1.requested_horizon = rec.traj2.requested_horizon = horizon;
    rec.traj1.tracked_gamma = rec.traj2.tracked_gamma = true;

    const long long n_steps = static_cast<long long>(std::floor(horizon / step.dt + 1e-9));
    rec.traj1.integrated_horizon = rec.traj2.integrated_horizon =
        static_cast<double>(n_steps) * step.dt;
    rec.traj1.horizon_remainder = rec.traj2.horizon_remainder =
        horizon - rec.traj1.integrated_horizon;

    Field u1 = (u0_1.rep == Rep::spectral) ? u0_1 : to_spectral(u0_1);
    Field u2 = (u0_2.rep == Rep::spectral) ? u0_2 : to_spectral(u0_2);
    Field gamma = make_field(u0_1.grid, Rep::spectral);

    const auto sample = [&](double t) {
        Field p1 = to_physical(u1);
        Field p2 = to_physical(u2);
        const double w = l2_distance(p1, p2);
        rec.times.push_back(t);
        rec.w_norm.push_back(w);
        rec.d1.push_back(std::min(w, 1.0));
        const FunctionalReport f1 = phi_alpha(p1, p, t);
        const FunctionalReport f2 = phi_alpha(p2, p, t);
        rec.phi_pair.push_back(f1.phi + f2.phi);
        const double gh = norm_sobolev(gamma, 0.0);
        const double gl = laplacian_norm(gamma);
        for (auto* traj : {&rec.traj1, &rec.traj2}) {
            traj->times.push_back(t);
            traj->gamma_h.push_back(gh);
            traj->gamma_lap.push_back(gl);
        }
        rec.traj1.functionals.push_back(f1);
        rec.traj2.functionals.push_back(f2);
        rec.traj1.sup_norms.push_back(sup_norm(p1, step.sup_refine));
        rec.traj2.sup_norms.push_back(sup_norm(p2, step.sup_refine));
    };

    sample(0.0);
    for (long long s = 1; s <= n_steps; ++s) {
        const double t = static_cast<double>(s) * step.dt;
        engine.step_pair(u1, u2, &gamma, stream, t);
        if (s % step.diagnostics_stride == 0 || s == n_steps) sample(t);
    }
    rec.traj1.final_state = to_physical(u1);
    rec.traj2.final_state = to_physical(u2);

    rec.en1 = en_series(rec.traj1, cfg, p.lambda);
    rec.en2 = en_series(rec.traj2, cfg, p.lambda);

    const auto k_max = static_cast<long long>(
        std::floor(rec.traj1.integrated_horizon / cfg.block_length + 1e-9));
    rec.ell.reserve(k_max + 1);
    for (long long k = 0; k <= k_max; ++k) rec.ell.push_back(ell_theta_beta(rec, cfg, k));

    if (std::isfinite(cert_C)) rec.cert_margin = pathwise_certificate(rec, p, cert_C);
    return rec;
}

long long ell_theta_beta(const CouplingRecord& rec, const CouplingConfig& cfg, long long k) {
    if (k < 0) throw std::invalid_argument("ell_theta_beta: k must be >= 0");
    const double t_end = static_cast<double>(k) * cfg.block_length;
    const long long j_end = sample_index_at(rec.times, t_end);
    if (j_end < 0) {
        throw std::invalid_argument("ell_theta_beta: kT beyond record horizon or off-grid");
    }
    const double n = static_cast<double>(cfg.moment_index);
    const double level = cfg.theta + std::pow(cfg.beta, n);
    for (long long l = 0; l <= k; ++l) {
        const double t_l = static_cast<double>(l) * cfg.block_length;
        const long long j_l = sample_index_at(rec.times, t_l);
        if (j_l < 0) throw std::invalid_argument("ell_theta_beta: block boundary off-grid");
        if (!(rec.phi_pair[j_l] <= cfg.beta)) continue;
        bool ok = true;
        for (long long j = j_l; j <= j_end && ok; ++j) {
            const double envelope = level + cfg.slope_constant * (rec.times[j] - t_l);
            ok = rec.en1[j] <= envelope && rec.en2[j] <= envelope;
        }
        if (ok) return l;
    }
    return kEllInfinity;
}

std::vector<double> pathwise_certificate(const CouplingRecord& rec, const ModelParams& p,
                                         double C_hat) {
    const std::size_t m = rec.times.size();
    if (rec.w_norm.size() != m || rec.traj1.sup_norms.size() != m ||
        rec.traj2.sup_norms.size() != m) {
        throw std::invalid_argument("pathwise_certificate: series lengths disagree");
    }
    if (m < 2) return {};
    std::vector<double> margins(m - 1, 0.0);
    const double two_sigma = 2.0 * p.sigma;
    auto supterm = [&](std::size_t j) {
        return std::pow(rec.traj1.sup_norms[j], two_sigma) +
               std::pow(rec.traj2.sup_norms[j], two_sigma);
    };
    for (std::size_t j = 0; j + 1 < m; ++j) {
        const double scale =
            1e-13 * std::max({1.0, std::sqrt(rec.traj1.functionals[j].mass),
                              std::sqrt(rec.traj2.functionals[j].mass)});
        const double w0 = rec.w_norm[j];
        const double w1 = rec.w_norm[j + 1];
        if (w0 < scale || w1 < scale) {
            margins[j] = 0.0;  // numerically synchronized: nothing to certify
            continue;
        }
        const double dt = rec.times[j + 1] - rec.times[j];
        const double lhs = 2.0 * (std::log(w1) - std::log(w0)) / dt;
        const double coef = -2.0 * p.lambda + C_hat * 0.5 * (supterm(j) + supterm(j + 1));
        margins[j] = coef - lhs;
    }
    return margins;
}

double certificate_violation_fraction(std::span<const double> margins, double tol) {
    if (margins.empty()) return 0.0;
    std::size_t bad = 0;
    for (double m : margins) {
        if (m < -tol) ++bad;
    }
    return static_cast<double>(bad) / static_cast<double>(margins.size());
}

EllCheck check_ell_properties(const CouplingRecord& rec, const CouplingConfig& cfg) {
    EllCheck out;
    for (std::size_t k = 0; k + 1 < rec.ell.size(); ++k) {
        const long long next = rec.ell[k + 1];
        if (next != kEllInfinity && next <= static_cast<long long>(k) &&
            rec.ell[k] != next) {
            out.ok = false;
            out.violation = "ell(k+1)=l<=k without ell(k)=l at k=" + std::to_string(k);
            return out;
        }
    }
    for (std::size_t k = 0; k < rec.ell.size(); ++k) {
        if (rec.ell[k] == static_cast<long long>(k)) {
            const double t_k = static_cast<double>(k) * cfg.block_length;
            const long long j = sample_index_at(rec.times, t_k);
            if (j >= 0 && !(rec.phi_pair[j] <= cfg.beta)) {
                out.ok = false;
                out.violation = "ell(k)=k with phi pair above beta at k=" + std::to_string(k);
                return out;
            }
        }
    }
    return out;
}

std::vector<ProbRow> coupling_statistics(std::span<const CouplingRecord> records,
                                         const CouplingConfig& cfg, double recouple_radius,
                                         double proximity_c0, double proximity_q) {
    std::vector<ProbRow> rows;
    if (records.empty()) return rows;
    const std::size_t k_count = records.front().ell.size();

    ProbRow overall{"decouple_overall", 0.0, 0, 0};
    std::vector<ProbRow> by_gap;
    ProbRow from_zero{"decouple_from_zero", 0.0, 0, 0};
    ProbRow recouple{"recouple", recouple_radius, 0, 0};

    auto gap_row = [&](long long g) -> ProbRow& {
        for (auto& r : by_gap) {
            if (static_cast<long long>(r.key) == g) return r;
        }
        by_gap.push_back({"decouple_gap", static_cast<double>(g), 0, 0});
        return by_gap.back();
    };

    for (const auto& rec : records) {
        for (std::size_t k = 0; k + 1 < rec.ell.size(); ++k) {
            const long long l = rec.ell[k];
            if (l != kEllInfinity) {
                const bool decoupled = rec.ell[k + 1] != l;
                overall.trials++;
                overall.events += decoupled;
                auto& row = gap_row(static_cast<long long>(k) - l);
                row.trials++;
                row.events += decoupled;
                if (l == 0) {
                    from_zero.trials++;
                    from_zero.events += decoupled;
                }
            } else {
                const double t_k = static_cast<double>(k) * cfg.block_length;
                const long long j = sample_index_at(rec.times, t_k);
                if (j >= 0 && rec.phi_pair[j] <= recouple_radius) {
                    recouple.trials++;
                    recouple.events += rec.ell[k + 1] == static_cast<long long>(k) + 1;
                }
            }
        }
    }

    // Proximity: once coupled at level l, does d1 ever exceed the
    // polynomial envelope c0 (t - lT)^{-q} inside the window?
    for (long long l = 0; l + 1 < static_cast<long long>(k_count); ++l) {
        ProbRow prox{"proximity_l", static_cast<double>(l), 0, 0};
        for (const auto& rec : records) {
            const long long ell_final = rec.ell.back();
            if (ell_final == kEllInfinity || ell_final > l) continue;
            prox.trials++;
            const double t_l = static_cast<double>(l) * cfg.block_length;
            bool exceeded = false;
            for (std::size_t j = 0; j < rec.times.size() && !exceeded; ++j) {
                const double dt = rec.times[j] - t_l;
                if (dt <= 0.0) continue;
                exceeded = rec.d1[j] >= proximity_c0 * std::pow(dt, -proximity_q);
            }
            prox.events += exceeded;
        }
        rows.push_back(prox);
    }

    rows.push_back(overall);
    rows.push_back(from_zero);
    for (auto& r : by_gap) rows.push_back(r);
    rows.push_back(recouple);
    return rows;
}

}  // namespace snls
