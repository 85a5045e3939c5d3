//! Per-round step solver for the time-dependent potentials.
//!
//! Each BrownBoost/RobustBoost round picks the stump weight `alpha` and the
//! time advance `dt` that jointly satisfy
//!
//! * decorrelation: `sum_i w(s_i + alpha u_i, t + dt) u_i = 0`, so the new
//!   weights carry no edge for the stump just added, and
//! * conservation: `sum_i Phi(s_i + alpha u_i, t + dt) = sum_i Phi(s_i, t)`.
//!
//! The primary method is a damped two-dimensional Newton iteration with an
//! analytic Jacobian. When it fails a bracketing search along the
//! conservation curve `dt(alpha)` is tried before giving up.

use crate::error::{BoostError, Result};
use crate::potentials::{Frame, PotentialKind};

/// Solver thresholds. The defaults define what counts as a stuck round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Residual tolerance per example; the absolute tolerance is this times N.
    pub tol_per_example: f64,
    /// Time advances below this are reported as [`StepStatus::Stuck`].
    pub dt_min: f64,
    pub max_newton_iters: usize,
    pub max_halvings: usize,
    /// A step ending within this distance of `t = 1` ends the run.
    pub final_slack: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol_per_example: 1e-8,
            dt_min: 1e-3,
            max_newton_iters: 100,
            max_halvings: 50,
            final_slack: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StepStatus {
    Converged,
    /// Solved, but the time advance is below `dt_min`.
    Stuck,
    /// The step takes the run to `t = 1`.
    ReachedFinalTime,
    SolverFailure(String),
}

impl StepStatus {
    pub fn is_failure(&self) -> bool {
        matches!(self, Self::Stuck | Self::SolverFailure(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepSolution {
    pub alpha: f64,
    pub dt: f64,
    /// `(e1, e2)`: decorrelation and conservation residuals at the solution.
    pub residuals: (f64, f64),
    pub status: StepStatus,
}

struct Residual {
    e1: f64,
    e2: f64,
    // Jacobian [[d e1/d alpha, d e1/d dt], [d e2/d alpha, d e2/d dt]]
    jac: [[f64; 2]; 2],
}

struct Problem<'a> {
    kind: &'a PotentialKind,
    margins: &'a [f64],
    u: &'a [f64],
    t: f64,
    phi_before: f64,
    dt_max: f64,
    tol: f64,
}

impl Problem<'_> {
    fn frame(&self, dt: f64) -> Result<Frame> {
        Ok(self.kind.frame(self.t + dt)?.expect("time-dependent kind"))
    }

    fn eval(&self, alpha: f64, dt: f64) -> Result<Residual> {
        let frame = self.frame(dt)?;
        let mut r = Residual { e1: 0.0, e2: -self.phi_before, jac: [[0.0; 2]; 2] };
        for (&s, &u) in self.margins.iter().zip(self.u) {
            let loc = self.kind.local(&frame, s + alpha * u);
            r.e1 += loc.weight * u;
            r.e2 += loc.phi;
            r.jac[0][0] += loc.dweight_ds * u * u;
            r.jac[0][1] += loc.dweight_dt * u;
            r.jac[1][0] += loc.dphi_ds * u;
            r.jac[1][1] += loc.dphi_dt;
        }
        Ok(r)
    }

    fn e1(&self, alpha: f64, dt: f64) -> Result<f64> {
        let frame = self.frame(dt)?;
        Ok(self
            .margins
            .iter()
            .zip(self.u)
            .map(|(&s, &u)| self.kind.local(&frame, s + alpha * u).weight * u)
            .sum())
    }

    fn e2(&self, alpha: f64, dt: f64) -> Result<f64> {
        let frame = self.frame(dt)?;
        let total: f64 =
            self.margins.iter().zip(self.u).map(|(&s, &u)| self.kind.local(&frame, s + alpha * u).phi).sum();
        Ok(total - self.phi_before)
    }

    fn converged(&self, r: &Residual) -> bool {
        r.e1.abs() <= self.tol && r.e2.abs() <= self.tol
    }

    fn newton(&self, alpha0: f64, dt0: f64, cfg: &SolverConfig) -> Result<Option<(f64, f64, Residual)>> {
        let (mut alpha, mut dt) = (alpha0, dt0);
        let mut r = self.eval(alpha, dt)?;
        let merit = |r: &Residual| r.e1 * r.e1 + r.e2 * r.e2;
        for _ in 0..cfg.max_newton_iters {
            if self.converged(&r) {
                return Ok(Some((alpha, dt, r)));
            }
            let [[a, b], [c, d]] = r.jac;
            let det = a * d - b * c;
            if !det.is_finite() || det == 0.0 {
                return Ok(None);
            }
            let step_alpha = -(d * r.e1 - b * r.e2) / det;
            let step_dt = -(a * r.e2 - c * r.e1) / det;
            let current = merit(&r);
            let mut lambda = 1.0;
            let mut accepted = None;
            for _ in 0..=cfg.max_halvings {
                let na = alpha + lambda * step_alpha;
                let nd = dt + lambda * step_dt;
                if na >= 0.0 && (0.0..=self.dt_max).contains(&nd) {
                    let nr = self.eval(na, nd)?;
                    if merit(&nr) < current {
                        accepted = Some((na, nd, nr));
                        break;
                    }
                }
                lambda *= 0.5;
            }
            match accepted {
                Some((na, nd, nr)) => {
                    alpha = na;
                    dt = nd;
                    r = nr;
                }
                None => return Ok(None),
            }
        }
        Ok(self.converged(&r).then_some((alpha, dt, r)))
    }

    /// Time advance restoring the potential for a given `alpha`, clamped to
    /// `[0, dt_max]`.
    fn conserving_dt(&self, alpha: f64) -> Result<f64> {
        let lo_val = self.e2(alpha, 0.0)?;
        if lo_val >= 0.0 {
            return Ok(0.0);
        }
        if self.e2(alpha, self.dt_max)? <= 0.0 {
            return Ok(self.dt_max);
        }
        let (mut lo, mut hi) = (0.0, self.dt_max);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.e2(alpha, mid)? < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Bracketing search for `e1(alpha, dt(alpha)) = 0` along the
    /// conservation curve. Values of `alpha` whose potential cannot be
    /// restored before `t = 1` end the search at the final time.
    fn along_curve(&self, alpha0: f64) -> Result<CurvePoint> {
        let g = |alpha: f64| -> Result<(f64, bool)> {
            let dt = self.conserving_dt(alpha)?;
            Ok((self.e1(alpha, dt)?, dt >= self.dt_max))
        };
        if g(0.0)?.0 <= 0.0 {
            return Ok(CurvePoint::NotFound);
        }
        let mut lo = 0.0;
        let mut hi = alpha0.clamp(1e-6, 1.0);
        let mut hi_final;
        loop {
            let (v, fin) = g(hi)?;
            hi_final = fin;
            if v < 0.0 || fin {
                break;
            }
            lo = hi;
            hi *= 2.0;
            if hi > 1e3 {
                return Ok(CurvePoint::NotFound);
            }
        }
        // invariant: g(lo) > 0 off the final boundary; hi is past a root or
        // on the boundary
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let (v, fin) = g(mid)?;
            if fin || v < 0.0 {
                hi = mid;
                hi_final = fin;
            } else {
                lo = mid;
            }
        }
        if hi_final {
            return Ok(CurvePoint::Final(hi));
        }
        let alpha = 0.5 * (lo + hi);
        let dt = self.conserving_dt(alpha)?;
        Ok(CurvePoint::Root(alpha, dt))
    }
}

enum CurvePoint {
    Root(f64, f64),
    Final(f64),
    NotFound,
}

/// Solves for `(alpha, dt)` at time `t` given margins `s_i` and the new
/// stump's agreements `u_i = y_i h(x_i)`.
pub fn solve_step(
    kind: &PotentialKind,
    margins: &[f64],
    u: &[f64],
    t: f64,
    cfg: &SolverConfig,
) -> Result<StepSolution> {
    if !kind.is_time_dependent() {
        return Err(BoostError::Parameter(format!("{} potential has no time axis", kind.name())));
    }
    if margins.len() != u.len() || margins.is_empty() {
        return Err(BoostError::Structure(format!(
            "{} margins but {} agreements",
            margins.len(),
            u.len()
        )));
    }
    if !(0.0..1.0).contains(&t) {
        return Err(BoostError::Parameter(format!("time must lie in [0, 1), got {t}")));
    }
    if u.iter().all(|&v| v < 0.0) {
        return Err(BoostError::Parameter("stump is wrong on every example".into()));
    }
    let remaining = 1.0 - t;
    if u.iter().all(|&v| v > 0.0) {
        // no decorrelating weight exists; shift every margin to at least 1
        let worst = margins.iter().copied().fold(f64::INFINITY, f64::min);
        return Ok(StepSolution {
            alpha: 1.0 + (-worst).max(0.0),
            dt: remaining,
            residuals: (0.0, 0.0),
            status: StepStatus::ReachedFinalTime,
        });
    }

    let frame = kind.frame(t)?.expect("time-dependent kind");
    let (mut phi_before, mut wsum, mut wu) = (0.0, 0.0, 0.0);
    for (&s, &ui) in margins.iter().zip(u) {
        let loc = kind.local(&frame, s);
        phi_before += loc.phi;
        wsum += loc.weight;
        wu += loc.weight * ui;
    }
    let n = margins.len() as f64;
    let problem = Problem {
        kind,
        margins,
        u,
        t,
        phi_before,
        dt_max: remaining * (1.0 - 1e-9),
        tol: cfg.tol_per_example * n,
    };

    let gamma = if wsum > 0.0 { (wu / wsum).clamp(-0.999_999, 0.999_999) } else { 0.0 };
    let alpha0 = (0.5 * ((1.0 + gamma) / (1.0 - gamma)).ln()).max(0.0);
    let dt0 = (alpha0 * alpha0).min(0.5 * remaining);

    let finish = |alpha: f64, dt: f64, e1: f64, e2: f64| {
        let status = if t + dt >= 1.0 - cfg.final_slack {
            StepStatus::ReachedFinalTime
        } else if dt < cfg.dt_min {
            StepStatus::Stuck
        } else {
            StepStatus::Converged
        };
        StepSolution { alpha, dt, residuals: (e1, e2), status }
    };

    if let Some((alpha, dt, r)) = problem.newton(alpha0, dt0, cfg)? {
        return Ok(finish(alpha, dt, r.e1, r.e2));
    }
    match problem.along_curve(alpha0)? {
        CurvePoint::Final(alpha) => {
            let e1 = problem.e1(alpha, problem.dt_max)?;
            let e2 = problem.e2(alpha, problem.dt_max)?;
            return Ok(StepSolution {
                alpha,
                dt: remaining,
                residuals: (e1, e2),
                status: StepStatus::ReachedFinalTime,
            });
        }
        CurvePoint::Root(alpha, dt) => {
            // polish from the bracketed point
            if let Some((alpha, dt, r)) = problem.newton(alpha, dt, cfg)? {
                return Ok(finish(alpha, dt, r.e1, r.e2));
            }
            let e1 = problem.e1(alpha, dt)?;
            let e2 = problem.e2(alpha, dt)?;
            if e1.abs() <= problem.tol && e2.abs() <= problem.tol {
                return Ok(finish(alpha, dt, e1, e2));
            }
            return Ok(StepSolution {
                alpha,
                dt,
                residuals: (e1, e2),
                status: StepStatus::SolverFailure(format!(
                    "residuals ({e1:.3e}, {e2:.3e}) above tolerance"
                )),
            });
        }
        CurvePoint::NotFound => {}
    }
    let r = problem.eval(alpha0, dt0)?;
    Ok(StepSolution {
        alpha: alpha0,
        dt: dt0,
        residuals: (r.e1, r.e2),
        status: StepStatus::SolverFailure("no root found by Newton or curve search".into()),
    })
}
