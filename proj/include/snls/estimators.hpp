#pragma once

#include <functional>
#include <optional>

#include "snls/coupling.hpp"
#include "snls/stats.hpp"

namespace snls {

struct EnsembleConfig {
    int n_paths = 100;
    std::uint64_t base_seed = 1;
    double horizon = 10.0;
    int threads = 1;
};

// ---- observables ---------------------------------------------------------

struct Observable {
    std::string name;
    std::function<double(const Field&)> eval;
};

// Three d1-Lipschitz test functionals (constant <= 1): the clipped norm
// d1(u, 0), a shifted-window functional sin(||u-g||_H ^ 1), and a scaled
// clipped linear functional 1/2 clamp(Re<u, phi>_H, -1, 1).
std::vector<Observable> shipped_observables(GridPtr grid);

// Finite-difference probe of the Lipschitz-d1 property on field pairs.
// Returns the worst observed |f(u)-f(v)| / d1(u,v).
double lipschitz_worst_ratio(const Observable& obs, std::span<const Field> probes);

// ---- moment experiments ---------------------------------------------------

struct MomentReport {
    int n = 1;
    double lambda = 0.0;
    std::vector<double> times;
    std::vector<double> empirical;  // mean of the tracked moment
    double initial_moment = 0.0;
    double decay_rate = 0.0;        // rate of the transient term of the bound
    double plateau_theory = 0.0;    // bound's plateau terms with unit constant
    double theory_lambda_exponent = 0.0;  // d log plateau_theory / d log lambda
    double fitted_constant = 0.0;   // minimal C making the bound hold at all samples
    double plateau = 0.0;           // tail average of `empirical`
    std::size_t blowups = 0;
    std::size_t paths = 0;
};

// E ||u(t)||_H^{2n} against e^{-n lambda t} E||u0||^{2n} + C ||Q||_{HS(H)}^{2n} / lambda^n.
MomentReport moment_check_h(const Field& u0, const ModelParams& p, const CovarianceSpec& q,
                            const EnsembleConfig& ens, int n, const StepConfig& step);

// E Phi_alpha(u(t))^n against its decay + plateau bound (plateau terms in
// HS(H^1) and, focusing, HS(H) at the sigma_d power).
MomentReport moment_check_phi(const Field& u0, const ModelParams& p, const CovarianceSpec& q,
                              const EnsembleConfig& ens, int n, const StepConfig& step);

struct GammaMomentReport {
    int n = 1;
    std::vector<double> times;
    std::vector<double> running_integral;  // E int_0^t ||Gamma||_H^{2n}
    double fitted_c_half = 0.0;            // fitted c at horizon/2
    double fitted_c_full = 0.0;            // fitted c at horizon
    std::size_t paths = 0;
};

// E int_0^t ||Gamma(s)||_H^{2n} ds against ||Q||_{HS(H)}^{2n} t / lambda^n.
GammaMomentReport gamma_moment_check(const ModelParams& p, const CovarianceSpec& q, GridPtr grid,
                                     const EnsembleConfig& ens, int n, const StepConfig& step);

// ---- mixing ---------------------------------------------------------------

struct RateFit {
    std::string observable;
    double poly_exponent = 0.0;  // slope of log gap vs log(1+t), sign flipped
    double poly_residual = 0.0;
    double exp_rate = 0.0;  // slope of log gap vs t, sign flipped
    double exp_residual = 0.0;
    double window_lo = 0.0, window_hi = 0.0;
    std::size_t window_points = 0;
    bool hit_floor = false;
    double t_floor = 0.0;  // first post-burn-in time the gap is under the floor
};

struct MixReport {
    std::vector<double> times;
    std::vector<std::string> observables;
    // curves[o][j]: |mean difference| for observable o at time j
    std::vector<std::vector<double>> gap;
    std::vector<std::vector<double>> noise_floor;  // 3 * SE of an independent-M estimate
    std::vector<RateFit> fits;
    std::vector<TrendTest> trends;  // Mann-Kendall over the fit window
    double burn_in = 0.0;
    std::size_t paths = 0;
};

// Common-noise gap estimator for |E f(u(t;u1)) - E f(u(t;u2))|. The
// observables must pass the Lipschitz probe (constant <= 1 + 1e-9).
MixReport mixing_rate(const Field& u0_1, const Field& u0_2, const ModelParams& p,
                      const CovarianceSpec& q, const EnsembleConfig& ens, const StepConfig& step,
                      std::span<const Observable> observables, double burn_in);

// Variance of the gap estimator at fixed time under common vs
// independent noise (one entry per observable).
struct VarianceComparison {
    std::vector<std::string> observables;
    std::vector<double> var_common;
    std::vector<double> var_independent;
};
VarianceComparison variance_reduction_check(const Field& u0_1, const Field& u0_2,
                                            const ModelParams& p, const CovarianceSpec& q,
                                            const EnsembleConfig& ens, const StepConfig& step,
                                            std::span<const Observable> observables);

// ---- irreducibility -------------------------------------------------------

struct IrreducibilityReport {
    double radius_start = 0.0;  // R: initial phi pair budget
    double radius_target = 0.0; // r
    std::vector<double> times;
    std::vector<std::size_t> hits;  // # pairs with phi-pair sum <= r at each time
    std::size_t pairs = 0;
    std::vector<Interval> intervals;
    std::optional<double> first_positive_time;  // smallest t with interval excluding 0
};

IrreducibilityReport irreducibility_probe(const ModelParams& p, const CovarianceSpec& q,
                                          GridPtr grid, double R, double r,
                                          std::span<const double> times,
                                          const EnsembleConfig& ens, const StepConfig& step);

// ---- pathwise integral bounds --------------------------------------------

struct StrichartzReport {
    double sigma = 0.0;
    int n_sigma = 1;
    double c1n = 1.0;
    std::vector<double> times;
    std::vector<double> lhs;      // int_0^t ||u||_inf^{2 sigma}
    std::vector<double> bracket;  // envelope evaluated with unit constant
    double fitted_c = 0.0;        // max lhs/bracket
    double violation_fraction_after_fit = 0.0;
};

// Envelope: C * [ int_0^t (c1n Phi^{n_s} + n_s ||Gamma||_H^{n_s}
//                 + n_s ||Lap Gamma||_H^{n_s}) ds + ||u0||_{H^1}^{2 sigma} + 1 + t ].
StrichartzReport strichartz_integral(const TrajectoryRecord& traj, double u0_h1_norm,
                                     double sigma, int n_sigma, double c1n);

// ---- dispersive decay ------------------------------------------------------

struct DispersiveReport {
    double s = 0.0, p = 2.0;
    double dual_norm = 0.0;  // ||u0||_{H^{s,p'}}
    double t_wrap = 0.0;
    std::vector<double> times;
    std::vector<double> lhs;    // ||S(t)u0||_{H^{s,p}}
    std::vector<double> ratio;  // lhs / ((4 pi t)^{-d(1/2-1/p)} dual_norm)
    std::vector<bool> in_window;
    double fitted_slope = 0.0;  // log lhs vs log t over the valid window
    std::size_t window_points = 0;
};

// Free flow only (no damping, no noise, no nonlinearity). Times past the
// wraparound horizon are flagged, not dropped silently.
DispersiveReport dispersive_decay_check(const Field& u0, std::span<const double> times, double s,
                                        double p, int sup_refine = 1);

// ---- Strichartz exponents and nonlinearity bounds -------------------------

struct AdmissibleCheck {
    bool admissible = false;
    std::string reason;
};
// 2/gamma + d/r == d/2, (gamma, r) != (2, inf), r in the per-dimension range.
AdmissibleCheck admissible_pair_check(double gamma, double r, int dim);

struct NonlinearityBoundReport {
    double sigma = 0.0;
    int dim = 2;
    double p = 1.0;
    double max_ratio = 0.0;       // ||F(u)||_{H^{1,p}} / ||u||_{H^1}^{1+2 sigma}
    double stability_delta = 0.0; // relative change, first half vs full ensemble
    std::size_t evaluated = 0;
    std::size_t skipped_zero = 0;
};

// p-window (named reasons on rejection): d=2 needs p in [1,2) and
// p >= 2/(2 sigma + 1); d=3 additionally p <= 6/(2 sigma + 3).
NonlinearityBoundReport nonlinearity_bound_check(double sigma, int dim, double p,
                                                 std::span<const Field> ensemble);

}  // namespace snls
