//! Third-order refinement on the tail-log objectives.
//!
//! Below one half the objective is `g(v) = ln c(v) - ln c*` and the step is
//! the Euler–Chebyshev map `v + η(1 + λ/2)`; above one half it is
//! `ℓ(v) = ln(1 - c(v)) - ln(1 - c*)` with the Halley map `v + η/(1 - λ/2)`.
//! Here `η = -F/F'` and `λ = F·F''/F'²`.

use crate::error::Result;
use crate::pricing::{log_gap_upper, log_price_lower, TailBranch, TailObjectiveEval};
use crate::specfun::ONE_OVER_SQRT_TWO_PI;

/// Number of refinement steps applied by [`refine3`].
pub const REFINEMENT_STEPS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepDiagnostics {
    pub eta: f64,
    pub lambda: f64,
    pub branch: TailBranch,
    pub v_before: f64,
    pub v_after: f64,
    /// The third-order update was not finite and positive; `v + η` was used.
    pub newton_fallback: bool,
}

/// Log-vega `g'` and `g''/g'` of `ln c`.
pub fn lower_ratios(eval: &TailObjectiveEval) -> (f64, f64) {
    let HalfCoordsView { h, t, v } = HalfCoordsView::of(eval);
    let gprime = 2.0 * ONE_OVER_SQRT_TWO_PI / eval.n_combined;
    let d2_ratio = (h + t) * (h - t) / v - gprime;
    (gprime, d2_ratio)
}

/// `ℓ'` and `ℓ''/ℓ'` of `ln(1 - c)`.
pub fn upper_ratios(eval: &TailObjectiveEval) -> (f64, f64) {
    let HalfCoordsView { h, t, v } = HalfCoordsView::of(eval);
    let inv = 2.0 * ONE_OVER_SQRT_TWO_PI / eval.n_combined;
    let x = eval.x;
    let d2_ratio = -(h + t) * (0.5 - x / (v * v)) + inv;
    (-inv, d2_ratio)
}

struct HalfCoordsView {
    h: f64,
    t: f64,
    v: f64,
}

impl HalfCoordsView {
    fn of(eval: &TailObjectiveEval) -> Self {
        Self { h: eval.coords.h, t: eval.coords.t, v: eval.v }
    }
}

fn accept(v: f64, v_next: f64, eta: f64) -> (f64, bool) {
    if v_next.is_finite() && v_next > 0.0 {
        return (v_next, false);
    }
    let newton = v + eta;
    if newton.is_finite() && newton > 0.0 {
        (newton, true)
    } else {
        (v, true)
    }
}

/// One Euler–Chebyshev step on `ln c(v) - target_log_c`.
pub fn chebyshev_step(x: f64, v: f64, target_log_c: f64) -> Result<(f64, StepDiagnostics)> {
    let eval = log_price_lower(x, v)?;
    let (gprime, d2_ratio) = lower_ratios(&eval);
    let f = eval.log_value - target_log_c;
    let eta = -f / gprime;
    let lambda = f * d2_ratio / gprime;
    let (v_after, newton_fallback) = accept(v, v + eta * (1.0 + 0.5 * lambda), eta);
    let diag =
        StepDiagnostics { eta, lambda, branch: TailBranch::Lower, v_before: v, v_after, newton_fallback };
    Ok((v_after, diag))
}

/// One Halley step on `ln(1 - c(v)) - target_log_gap`.
pub fn halley_step(x: f64, v: f64, target_log_gap: f64) -> (f64, StepDiagnostics) {
    let eval = log_gap_upper(x, v);
    let (lprime, d2_ratio) = upper_ratios(&eval);
    let f = eval.log_value - target_log_gap;
    let eta = -f / lprime;
    let lambda = f * d2_ratio / lprime;
    let (v_after, newton_fallback) = accept(v, v + eta / (1.0 - 0.5 * lambda), eta);
    let diag =
        StepDiagnostics { eta, lambda, branch: TailBranch::Upper, v_before: v, v_after, newton_fallback };
    (v_after, diag)
}

/// Iterates of a fixed-length refinement.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveTrace {
    pub branch: TailBranch,
    /// `v₀, v₁, v₂, v₃`.
    pub iterates: Vec<f64>,
    pub steps: Vec<StepDiagnostics>,
}

impl SolveTrace {
    pub fn final_v(&self) -> f64 {
        *self.iterates.last().expect("trace holds the seed")
    }
}

/// Objective branch used for a normalized price.
pub fn branch_for(c: f64) -> TailBranch {
    if c <= 0.5 {
        TailBranch::Lower
    } else {
        TailBranch::Upper
    }
}

/// Exactly [`REFINEMENT_STEPS`] steps on the smaller-tail objective.
pub fn refine3(x: f64, c: f64, v0: f64) -> Result<SolveTrace> {
    refine_n(x, c, v0, REFINEMENT_STEPS)
}

/// `steps` refinement steps from `v0`; used by diagnostics that track
/// convergence beyond the production count.
pub fn refine_n(x: f64, c: f64, v0: f64, steps: usize) -> Result<SolveTrace> {
    let branch = branch_for(c);
    let mut iterates = Vec::with_capacity(steps + 1);
    let mut diags = Vec::with_capacity(steps);
    iterates.push(v0);
    let mut v = v0;
    match branch {
        TailBranch::Lower => {
            let target = c.ln();
            for _ in 0..steps {
                let (next, diag) = chebyshev_step(x, v, target)?;
                v = next;
                iterates.push(v);
                diags.push(diag);
            }
        }
        TailBranch::Upper => {
            let target = (1.0 - c).ln();
            for _ in 0..steps {
                let (next, diag) = halley_step(x, v, target);
                v = next;
                iterates.push(v);
                diags.push(diag);
            }
        }
    }
    Ok(SolveTrace { branch, iterates, steps: diags })
}

/// Curvature quantities of the monotone-convergence analysis at `(x, v)`.
///
/// `y` is the log-vega of the selected objective (`g'` below one half,
/// `-ℓ'` above), `a = k²/v³ - v/4`, `beta_v = 3k²/v⁴ + 1/4` with `k = -x`,
/// `q` is `g''/g' = a - y` on the lower branch and `G''/G' = a + y` with
/// `G = -ln(1 - c)` on the upper branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureDiagnostics {
    pub branch: TailBranch,
    pub y: f64,
    pub a: f64,
    pub beta_v: f64,
    pub q: f64,
    /// `y² - 3ay + 2a² + β`; non-negative on the lower branch.
    pub scalar_inequality: f64,
    /// `(y² - a²)/2 - β`; non-positive on the upper branch.
    pub schwarz_bound: f64,
}

impl CurvatureDiagnostics {
    pub fn lower(x: f64, v: f64) -> Result<Self> {
        let eval = log_price_lower(x, v)?;
        let (y, q) = lower_ratios(&eval);
        Ok(Self::assemble(TailBranch::Lower, x, v, y, q))
    }

    pub fn upper(x: f64, v: f64) -> Self {
        let eval = log_gap_upper(x, v);
        let (lprime, d2_ratio) = upper_ratios(&eval);
        Self::assemble(TailBranch::Upper, x, v, -lprime, d2_ratio)
    }

    fn assemble(branch: TailBranch, x: f64, v: f64, y: f64, q: f64) -> Self {
        let k2 = x * x;
        let a = k2 / (v * v * v) - 0.25 * v;
        let beta_v = 3.0 * k2 / (v * v * v * v) + 0.25;
        Self {
            branch,
            y,
            a,
            beta_v,
            q,
            scalar_inequality: y * y - 3.0 * a * y + 2.0 * a * a + beta_v,
            schwarz_bound: 0.5 * (y * y - a * a) - beta_v,
        }
    }

    /// `y² + a² + β`, the scale used for relative slack.
    pub fn scale(&self) -> f64 {
        self.y * self.y + self.a * self.a + self.beta_v
    }
}
