//! Two-factor decay model: constrained nonlinear least-squares fitting and
//! model-based extrapolation.
//!
//! The model describes download density as a mixture of two exponential
//! decays, one fast (novelty-driven downloads of fresh papers) and one slow
//! (archival interest):
//!
//! ```text
//! rho(t) = rho0 * [ A * exp(-b1 * t) + (1 - A) * exp(-b2 * t) ]
//! 0 <= A <= 1,  b1 > 0,  b2 > 0
//! ```
//!
//! Fitting minimises the sum of squared deviations from an [`AgeDensity`]
//! with a damped least-squares (Levenberg-Marquardt) iteration. The
//! constraints are enforced by smooth reparameterization: `A` through a
//! logistic bijection onto (0, 1), `rho0`, `b1` and `b2` through exponential
//! bijections onto (0, inf). Two-exponential least squares is multimodal, so
//! the default initialization is a small multi-start grid; the lowest final
//! residual wins, ties resolved by grid order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::synchro::{age_quantile, AgeCdf, AgeDensity, CdfWindow};

/// Below this gap between the two decay constants the weight `A` is not
/// identifiable and the fit is reported as a single exponential.
pub const DEGENERACY_GAP: f64 = 1e-6;

/// Fitted parameters of the two-factor model, canonically oriented so the
/// first factor is the fast one (`b1 >= b2`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DecayModelParams")]
pub struct DecayModel {
    rho0: f64,
    weight: f64,
    b1: f64,
    b2: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
struct DecayModelParams {
    rho0: f64,
    weight: f64,
    b1: f64,
    b2: f64,
}

impl TryFrom<DecayModelParams> for DecayModel {
    type Error = Error;

    fn try_from(p: DecayModelParams) -> Result<Self> {
        DecayModel::new(p.rho0, p.weight, p.b1, p.b2)
    }
}

impl DecayModel {
    /// Validate and canonicalize: if `b2 > b1` the factors are relabelled
    /// (`b1 <-> b2`, `weight -> 1 - weight`) so `b1 >= b2` always holds.
    pub fn new(rho0: f64, weight: f64, b1: f64, b2: f64) -> Result<Self> {
        if !(rho0.is_finite() && rho0 > 0.0) {
            return Err(Error::InvalidModel(format!("rho0 must be positive, got {rho0}")));
        }
        if !(weight.is_finite() && (0.0..=1.0).contains(&weight)) {
            return Err(Error::InvalidModel(format!("weight must be in [0, 1], got {weight}")));
        }
        if !(b1.is_finite() && b1 > 0.0) || !(b2.is_finite() && b2 > 0.0) {
            return Err(Error::InvalidModel(format!(
                "decay constants must be positive, got b1={b1}, b2={b2}"
            )));
        }
        if b2 > b1 {
            Ok(DecayModel { rho0, weight: 1.0 - weight, b1: b2, b2: b1 })
        } else {
            Ok(DecayModel { rho0, weight, b1, b2 })
        }
    }

    /// Density of downloads for the newest papers (`rho(0)`).
    pub fn rho0(&self) -> f64 {
        self.rho0
    }

    /// Relative weight `A` of the fast factor.
    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// Fast (early) decay constant, per month.
    pub fn b1(&self) -> f64 {
        self.b1
    }

    /// Slow (late) decay constant, per month.
    pub fn b2(&self) -> f64 {
        self.b2
    }

    /// Model density at age `t` months.
    pub fn density(&self, t: f64) -> f64 {
        self.rho0 * (self.weight * (-self.b1 * t).exp() + (1.0 - self.weight) * (-self.b2 * t).exp())
    }

    /// Closed-form total of `rho(a)` over all integer ages `a >= 0`
    /// (geometric sums of the two factors); the infinite-window limit of the
    /// extrapolated distributions.
    pub fn infinite_mass(&self) -> f64 {
        self.rho0
            * (self.weight / (1.0 - (-self.b1).exp())
                + (1.0 - self.weight) / (1.0 - (-self.b2).exp()))
    }
}

/// Fit configuration. The defaults match the unweighted fit with the
/// standard convergence thresholds; `weighted` switches to weighting each
/// age by its observation support.
#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    pub weighted: bool,
    pub max_iterations: usize,
    /// Convergence threshold on relative residual-norm change and on the
    /// parameter step norm.
    pub tolerance: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { weighted: false, max_iterations: 500, tolerance: 1e-10 }
    }
}

/// Outcome of a fit.
#[derive(Debug, Clone, Serialize)]
pub struct FitResult {
    pub model: DecayModel,
    /// Root of the summed squared residuals at the returned model.
    pub residual_norm: f64,
    /// Iterations used by the winning start.
    pub iterations: usize,
    pub converged: bool,
    /// Index of the initialization that won (grid order; 0 for an explicit
    /// starting model).
    pub winning_start: usize,
    /// True when `b1` and `b2` collapsed within [`DEGENERACY_GAP`]; the
    /// weight is then unidentifiable and reported as 1.
    pub degenerate: bool,
}

/// Least-squares fit of the two-factor model to an age-density curve with
/// the default options.
pub fn fit_two_factor(data: &AgeDensity, init: Option<DecayModel>) -> Result<FitResult> {
    fit_two_factor_with(data, init, FitOptions::default())
}

/// Least-squares fit with explicit options.
///
/// With `init = None` an 8-point multi-start grid over fast/slow decade
/// splits is used; an explicit `init` replaces the grid. Returns an error if
/// fewer supported ages than free parameters are available; non-convergence
/// within the iteration cap yields `converged = false` with the best model
/// found so far.
pub fn fit_two_factor_with(
    data: &AgeDensity,
    init: Option<DecayModel>,
    opts: FitOptions,
) -> Result<FitResult> {
    let n = data.len();
    if n < 4 {
        return Err(Error::TooFewAges { got: n, need: 4 });
    }
    let ages: Vec<f64> = data.ages().iter().map(|&a| a as f64).collect();
    let ys: Vec<f64> = data.density().to_vec();
    let wts: Vec<f64> = if opts.weighted {
        data.support().iter().map(|&s| (s as f64).sqrt()).collect()
    } else {
        vec![1.0; n]
    };

    let starts: Vec<[f64; 4]> = match init {
        Some(m) => vec![pack(&m)],
        None => {
            let rho0 = ys[0].max(1e-6);
            let mut grid = Vec::with_capacity(8);
            for &b1 in &[0.3, 1.0] {
                for &b2 in &[0.005, 0.05] {
                    for &a in &[0.5, 0.9] {
                        grid.push(pack_raw(rho0, a, b1, b2));
                    }
                }
            }
            grid
        }
    };

    let problem = Problem { ages: &ages, ys: &ys, wts: &wts };
    let mut best: Option<(f64, usize, LmOutcome)> = None;
    for (idx, &start) in starts.iter().enumerate() {
        let outcome = levenberg_marquardt(&problem, start, &opts);
        let better = match &best {
            None => true,
            Some((cost, _, _)) => outcome.cost < *cost,
        };
        if better {
            best = Some((outcome.cost, idx, outcome));
        }
    }
    let (cost, winning_start, outcome) = best.expect("at least one start");

    let (rho0, weight, b1, b2) = unpack(&outcome.params);
    let degenerate = (b1 - b2).abs() <= DEGENERACY_GAP;
    let model = if degenerate {
        DecayModel::new(rho0, 1.0, b1.max(b2), b1.min(b2).max(f64::MIN_POSITIVE))?
    } else {
        DecayModel::new(rho0, weight, b1, b2)?
    };
    Ok(FitResult {
        model,
        residual_norm: cost.sqrt(),
        iterations: outcome.iterations,
        converged: outcome.converged,
        winning_start,
        degenerate,
    })
}

/// Predicted cumulative age distribution of the downloads occurring in the
/// `span`-th month after the window opened: the share of that month's
/// downloads going to papers aged `<= x`, for `x = 0 ..= span - 1`.
pub fn model_age_cdf(model: &DecayModel, span: u32) -> Result<AgeCdf> {
    if span < 1 {
        return Err(Error::InvalidInput("window age span must be at least 1".into()));
    }
    let mut points = Vec::with_capacity(span as usize);
    let mut acc = 0.0f64;
    for x in 0..span {
        acc += model.density(x as f64);
        points.push((x, acc));
    }
    let total = acc;
    for p in &mut points {
        p.1 = 100.0 * p.1 / total;
    }
    Ok(AgeCdf::new(CdfWindow::Extrapolated(span), points))
}

/// Convenience composition: the age quantile of the extrapolated
/// distribution for a window `span` months in.
pub fn model_quantile_vs_window(model: &DecayModel, y_target: f64, span: u32) -> Result<u32> {
    age_quantile(&model_age_cdf(model, span)?, y_target)
}

// ---------------------------------------------------------------------------
// Damped least squares on the reparameterized problem.
//
// Parameter vector p = [ln rho0, logit(A), ln b1, ln b2]; every p in R^4
// maps to a valid model, so the constraint set never has to be handled by
// the iteration itself.
// ---------------------------------------------------------------------------

struct Problem<'a> {
    ages: &'a [f64],
    ys: &'a [f64],
    wts: &'a [f64],
}

struct LmOutcome {
    params: [f64; 4],
    cost: f64,
    iterations: usize,
    converged: bool,
}

const PARAM_CLAMP: f64 = 200.0;
const LAMBDA_INIT: f64 = 1e-3;
const LAMBDA_MAX: f64 = 1e14;

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn pack_raw(rho0: f64, weight: f64, b1: f64, b2: f64) -> [f64; 4] {
    let w = weight.clamp(1e-12, 1.0 - 1e-12);
    [rho0.ln(), (w / (1.0 - w)).ln(), b1.ln(), b2.ln()]
}

fn pack(model: &DecayModel) -> [f64; 4] {
    pack_raw(model.rho0(), model.weight(), model.b1(), model.b2())
}

fn unpack(p: &[f64; 4]) -> (f64, f64, f64, f64) {
    (p[0].exp(), sigmoid(p[1]), p[2].exp(), p[3].exp())
}

fn cost_of(problem: &Problem<'_>, p: &[f64; 4]) -> f64 {
    let (rho0, a, b1, b2) = unpack(p);
    let mut cost = 0.0;
    for i in 0..problem.ages.len() {
        let t = problem.ages[i];
        let f = rho0 * (a * (-b1 * t).exp() + (1.0 - a) * (-b2 * t).exp());
        let r = problem.wts[i] * (f - problem.ys[i]);
        cost += r * r;
    }
    cost
}

/// Accumulate J^T J and J^T r for the weighted residuals at `p`.
#[allow(clippy::needless_range_loop)]
fn normal_equations(problem: &Problem<'_>, p: &[f64; 4]) -> ([[f64; 4]; 4], [f64; 4]) {
    let (rho0, a, b1, b2) = unpack(p);
    let mut h = [[0.0f64; 4]; 4];
    let mut g = [0.0f64; 4];
    for i in 0..problem.ages.len() {
        let t = problem.ages[i];
        let w = problem.wts[i];
        let e1 = (-b1 * t).exp();
        let e2 = (-b2 * t).exp();
        let f = rho0 * (a * e1 + (1.0 - a) * e2);
        let r = w * (f - problem.ys[i]);
        // derivatives of f with respect to the free parameters
        let j = [
            w * f,                               // d/d ln(rho0)
            w * rho0 * (e1 - e2) * a * (1.0 - a), // d/d logit(A)
            w * rho0 * a * e1 * (-t) * b1,        // d/d ln(b1)
            w * rho0 * (1.0 - a) * e2 * (-t) * b2, // d/d ln(b2)
        ];
        for c in 0..4 {
            g[c] += j[c] * r;
            for d in c..4 {
                h[c][d] += j[c] * j[d];
            }
        }
    }
    for c in 0..4 {
        for d in 0..c {
            h[c][d] = h[d][c];
        }
    }
    (h, g)
}

/// Solve a 4x4 system with partial pivoting; `None` if effectively singular.
#[allow(clippy::needless_range_loop)]
fn solve4(mut m: [[f64; 4]; 4], mut rhs: [f64; 4]) -> Option<[f64; 4]> {
    for col in 0..4 {
        let mut pivot = col;
        for row in col + 1..4 {
            if m[row][col].abs() > m[pivot][col].abs() {
                pivot = row;
            }
        }
        if m[pivot][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..4 {
            let factor = m[row][col] / m[col][col];
            for k in col..4 {
                m[row][k] -= factor * m[col][k];
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    let mut x = [0.0f64; 4];
    for col in (0..4).rev() {
        let mut acc = rhs[col];
        for k in col + 1..4 {
            acc -= m[col][k] * x[k];
        }
        x[col] = acc / m[col][col];
    }
    if x.iter().all(|v| v.is_finite()) {
        Some(x)
    } else {
        None
    }
}

fn levenberg_marquardt(problem: &Problem<'_>, start: [f64; 4], opts: &FitOptions) -> LmOutcome {
    let mut p = start;
    let mut cost = cost_of(problem, &p);
    let mut lambda = LAMBDA_INIT;
    let mut converged = cost == 0.0;
    let mut iterations = 0;

    while !converged && iterations < opts.max_iterations {
        iterations += 1;
        let (h, g) = normal_equations(problem, &p);
        let mut damped = h;
        for c in 0..4 {
            damped[c][c] += lambda * h[c][c].max(1e-12);
        }
        let rhs = [-g[0], -g[1], -g[2], -g[3]];
        let step = match solve4(damped, rhs) {
            Some(s) => s,
            None => {
                lambda *= 10.0;
                if lambda > LAMBDA_MAX {
                    break;
                }
                continue;
            }
        };
        let mut candidate = [0.0f64; 4];
        for c in 0..4 {
            candidate[c] = (p[c] + step[c]).clamp(-PARAM_CLAMP, PARAM_CLAMP);
        }
        let step_norm = step.iter().map(|s| s * s).sum::<f64>().sqrt();
        let new_cost = cost_of(problem, &candidate);
        if new_cost.is_finite() && new_cost < cost {
            let rel_change =
                (cost.sqrt() - new_cost.sqrt()) / cost.sqrt().max(f64::MIN_POSITIVE);
            p = candidate;
            cost = new_cost;
            lambda = (lambda / 3.0).max(1e-12);
            if rel_change <= opts.tolerance || step_norm <= opts.tolerance || cost == 0.0 {
                converged = true;
            }
        } else {
            // a damped step this small that still cannot improve the cost
            // means the iterate is stationary
            if step_norm <= opts.tolerance {
                converged = true;
                break;
            }
            lambda *= 10.0;
            if lambda > LAMBDA_MAX {
                break;
            }
        }
    }

    LmOutcome { params: p, cost, iterations, converged }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn model(rho0: f64, a: f64, b1: f64, b2: f64) -> DecayModel {
        DecayModel::new(rho0, a, b1, b2).unwrap()
    }

    fn sample_density(m: &DecayModel, n_ages: u32) -> AgeDensity {
        AgeDensity::from_points(
            (0..n_ages).map(|a| (a, m.density(a as f64), 1)).collect(),
        )
        .unwrap()
    }

    fn assert_params_close(got: &DecayModel, want: &DecayModel, rel: f64) {
        assert_relative_eq!(got.rho0(), want.rho0(), max_relative = rel);
        assert_relative_eq!(got.weight(), want.weight(), max_relative = rel);
        assert_relative_eq!(got.b1(), want.b1(), max_relative = rel);
        assert_relative_eq!(got.b2(), want.b2(), max_relative = rel);
    }

    #[test]
    fn density_at_zero_is_rho0() {
        let m = model(123.4, 0.7, 0.9, 0.01);
        assert_eq!(m.density(0.0), 123.4);
    }

    #[test]
    fn full_weight_reduces_to_single_exponential() {
        let m = model(50.0, 1.0, 0.5, 0.1);
        for t in 0..20 {
            let t = t as f64;
            assert_relative_eq!(m.density(t), 50.0 * (-0.5 * t).exp(), max_relative = 1e-15);
        }
    }

    #[test]
    fn one_month_decay_ratio_matches_direct_arithmetic() {
        let m = model(100.0, 0.84, 0.86, 0.02);
        let ratio = m.density(1.0) / m.density(0.0);
        let expected = 0.84 * (-0.86f64).exp() + 0.16 * (-0.02f64).exp();
        assert_relative_eq!(ratio, expected, max_relative = 1e-15);
        // roughly half of the newest papers' density after one month
        assert!((ratio - 0.512).abs() < 1e-3);
    }

    #[test]
    fn density_is_strictly_decreasing_and_convex() {
        let m = model(80.0, 0.6, 0.7, 0.03);
        let vals: Vec<f64> = (0..120).map(|t| m.density(t as f64)).collect();
        for w in vals.windows(2) {
            assert!(w[1] < w[0]);
        }
        for w in vals.windows(3) {
            // second difference of a sum of decaying exponentials is positive
            assert!(w[2] - 2.0 * w[1] + w[0] > 0.0);
        }
    }

    #[test]
    fn constructor_canonicalizes_orientation() {
        let m = DecayModel::new(10.0, 0.3, 0.02, 0.9).unwrap();
        assert_eq!(m.b1(), 0.9);
        assert_eq!(m.b2(), 0.02);
        assert_relative_eq!(m.weight(), 0.7);
    }

    #[test]
    fn constructor_rejects_invalid_parameters() {
        assert!(DecayModel::new(0.0, 0.5, 1.0, 0.1).is_err());
        assert!(DecayModel::new(10.0, -0.1, 1.0, 0.1).is_err());
        assert!(DecayModel::new(10.0, 1.1, 1.0, 0.1).is_err());
        assert!(DecayModel::new(10.0, 0.5, 0.0, 0.1).is_err());
        assert!(DecayModel::new(10.0, 0.5, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn recovers_parameters_from_exact_samples() {
        let truth = model(100.0, 0.84, 0.86, 0.02);
        let data = sample_density(&truth, 78);
        let fit = fit_two_factor(&data, None).unwrap();
        assert!(fit.converged);
        assert_params_close(&fit.model, &truth, 1e-4);
        assert!(fit.residual_norm < 1e-6);
    }

    #[test]
    fn recovers_fixture_parameter_sets() {
        for truth in [model(100.0, 0.71, 0.50, 0.03), model(100.0, 0.92, 0.50, 0.014)] {
            let data = sample_density(&truth, 78);
            let fit = fit_two_factor(&data, None).unwrap();
            assert!(fit.converged);
            assert_params_close(&fit.model, &truth, 1e-4);
        }
    }

    #[test]
    fn boundary_single_exponential_puts_weight_at_one() {
        let truth = model(100.0, 1.0, 0.86, 0.02); // pure fast factor
        let data = sample_density(&truth, 78);
        let fit = fit_two_factor(&data, None).unwrap();
        assert!(fit.model.weight() > 1.0 - 1e-3);
        assert_relative_eq!(fit.model.b1(), 0.86, max_relative = 1e-3);
    }

    #[test]
    fn equal_decay_constants_are_reported_degenerate() {
        let truth = model(100.0, 0.5, 0.1, 0.1);
        let data = sample_density(&truth, 40);
        // starting at the degenerate point keeps the fit there: the weight
        // is unidentifiable and is reported as 1
        let fit = fit_two_factor(&data, Some(truth)).unwrap();
        assert!(fit.degenerate);
        assert_eq!(fit.model.weight(), 1.0);
        assert_relative_eq!(fit.model.b1(), 0.1, max_relative = 1e-3);

        // the free multi-start fit matches the curve and collapses to a
        // single effective factor one way or another: either the rates
        // coincide or the weight hits a boundary
        let free = fit_two_factor(&data, None).unwrap();
        assert!(free.residual_norm < 1e-6);
        assert!(
            free.degenerate
                || free.model.weight() > 1.0 - 1e-3
                || free.model.weight() < 1e-3
        );
    }

    #[test]
    fn swapped_labels_fit_to_the_identical_canonical_model() {
        // the same curve described with exchanged factor labels
        let a = model(90.0, 0.8, 0.9, 0.015);
        let b = DecayModel::new(90.0, 0.2, 0.015, 0.9).unwrap();
        assert_eq!(a, b);
        let fit_a = fit_two_factor(&sample_density(&a, 78), None).unwrap();
        let fit_b = fit_two_factor(&sample_density(&b, 78), None).unwrap();
        assert_params_close(&fit_a.model, &fit_b.model, 1e-12);
        assert!(fit_a.model.b1() >= fit_a.model.b2());
    }

    #[test]
    fn optimum_beats_every_grid_start() {
        let truth = model(100.0, 0.84, 0.86, 0.02);
        let mut noisy: Vec<(u32, f64, u64)> = Vec::new();
        for a in 0..78u32 {
            // deterministic wiggle, same for every run
            let bump = 1.0 + 0.05 * ((a as f64) * 0.7).sin();
            noisy.push((a, truth.density(a as f64) * bump, 1));
        }
        let data = AgeDensity::from_points(noisy).unwrap();
        let fit = fit_two_factor(&data, None).unwrap();
        for &b1 in &[0.3, 1.0] {
            for &b2 in &[0.005, 0.05] {
                for &a in &[0.5, 0.9] {
                    let start = model(data.density()[0].max(1e-6), a, b1, b2);
                    let start_cost: f64 = data
                        .iter()
                        .map(|(age, d, _)| {
                            let r = start.density(age as f64) - d;
                            r * r
                        })
                        .sum();
                    assert!(fit.residual_norm <= start_cost.sqrt() + 1e-12);
                }
            }
        }
    }

    #[test]
    fn explicit_init_is_used_as_the_single_start() {
        let truth = model(100.0, 0.84, 0.86, 0.02);
        let data = sample_density(&truth, 78);
        let fit = fit_two_factor(&data, Some(truth)).unwrap();
        assert_eq!(fit.winning_start, 0);
        assert_params_close(&fit.model, &truth, 1e-6);
    }

    #[test]
    fn too_few_ages_is_an_error() {
        let data = AgeDensity::from_points(vec![(0, 10.0, 1), (1, 5.0, 1), (2, 2.0, 1)]).unwrap();
        assert!(matches!(
            fit_two_factor(&data, None),
            Err(Error::TooFewAges { got: 3, need: 4 })
        ));
    }

    #[test]
    fn weighted_fit_tracks_high_support_ages() {
        let truth = model(100.0, 0.84, 0.86, 0.02);
        // corrupt one low-support age; the weighted fit should barely move
        let points: Vec<(u32, f64, u64)> = (0..78u32)
            .map(|a| {
                let d = truth.density(a as f64);
                if a == 77 {
                    (a, d * 3.0, 1)
                } else {
                    (a, d, 10_000)
                }
            })
            .collect();
        let data = AgeDensity::from_points(points).unwrap();
        let weighted = fit_two_factor_with(
            &data,
            None,
            FitOptions { weighted: true, ..FitOptions::default() },
        )
        .unwrap();
        let unweighted = fit_two_factor(&data, None).unwrap();
        let err_w = (weighted.model.b2() - 0.02).abs();
        let err_u = (unweighted.model.b2() - 0.02).abs();
        assert!(err_w < err_u);
    }

    #[test]
    fn instant_decay_concentrates_the_model_cdf_at_age_zero() {
        let m = model(100.0, 1.0, 50.0, 1.0);
        let cdf = model_age_cdf(&m, 40).unwrap();
        assert!(cdf.points()[0].1 > 100.0 - 1e-9);
        assert_eq!(model_quantile_vs_window(&m, 50.0, 40).unwrap(), 0);
    }

    #[test]
    fn model_cdf_ends_at_exactly_100() {
        let m = model(100.0, 0.84, 0.86, 0.02);
        let cdf = model_age_cdf(&m, 400).unwrap();
        assert_eq!(cdf.points().len(), 400);
        assert_eq!(cdf.points().last().unwrap().1, 100.0);
    }

    #[test]
    fn quantile_is_monotone_in_window_span() {
        let m = model(100.0, 0.84, 0.86, 0.02);
        let mut last = 0;
        for span in [1u32, 5, 10, 25, 50, 100, 200, 400, 800] {
            let q = model_quantile_vs_window(&m, 50.0, span).unwrap();
            assert!(q >= last, "quantile decreased at span {span}");
            last = q;
        }
    }

    #[test]
    fn quantile_stabilizes_for_large_windows() {
        for m in [model(100.0, 0.84, 0.86, 0.02), model(100.0, 0.71, 0.50, 0.03)] {
            let q400 = model_quantile_vs_window(&m, 50.0, 400).unwrap();
            let q800 = model_quantile_vs_window(&m, 50.0, 800).unwrap();
            assert!(q800.abs_diff(q400) <= 1);
        }
    }

    #[test]
    fn infinite_mass_matches_long_partial_sums() {
        let m = model(100.0, 0.84, 0.86, 0.02);
        let partial: f64 = (0..5000).map(|a| m.density(a as f64)).sum();
        assert_relative_eq!(m.infinite_mass(), partial, max_relative = 1e-12);
    }
}
