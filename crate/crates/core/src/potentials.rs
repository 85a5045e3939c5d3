//! Potential functions `Phi(s, t)` over the unnormalized margin `s` and the
//! continuous time `t` in `[0, 1]`, together with their example weights.
//!
//! BrownBoost and RobustBoost share one shape: `Phi = erfc(z) / 2` with
//! `z = (s - center(t)) / width(t)`. For BrownBoost `center = -2 sqrt(c) (1 - t)`
//! and `width = sqrt(2 (1 - t))`; for RobustBoost `center = mu(t)` and
//! `width = sigma(t)`.
//!
//! Weights are `-dPhi/ds` with the constant factor `1/sqrt(pi)` dropped for
//! the erf-shaped potentials, i.e. `exp(-z^2) / width(t)`. Exp and Logit
//! weights are the exact derivatives.

use serde::{Deserialize, Serialize};

use crate::error::{BoostError, Result};
use crate::special::{erfc, erfcinv};

const E: f64 = std::f64::consts::E;

/// Constants of the RobustBoost potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobustParams {
    pub rho: f64,
    pub c1: f64,
    pub c2: f64,
    pub sigma_f: f64,
    pub theta: f64,
}

impl RobustParams {
    pub fn sigma_sq(&self, t: f64) -> f64 {
        self.c1 * (-2.0 * t).exp() - 1.0
    }

    pub fn sigma(&self, t: f64) -> Result<f64> {
        let sigma_sq = self.sigma_sq(t);
        if sigma_sq > 0.0 {
            Ok(sigma_sq.sqrt())
        } else {
            Err(BoostError::InvalidTime { t, sigma_sq })
        }
    }

    pub fn mu(&self, t: f64) -> f64 {
        self.c2 * (-t).exp() + 2.0 * self.rho
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PotentialKind {
    /// AdaBoost, `exp(-s)`.
    Exp,
    /// Log-loss, `ln(1 + exp(-s))`.
    Logit,
    /// BrownBoost with spread constant `c > 0`.
    Brown { c: f64 },
    Robust(RobustParams),
}

/// Center, width and their time derivatives of an erf-shaped potential.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Frame {
    pub center: f64,
    pub width: f64,
    pub d_center: f64,
    pub d_width: f64,
}

/// Value and first derivatives of `Phi` and of the weight at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Local {
    pub phi: f64,
    pub weight: f64,
    pub dphi_ds: f64,
    pub dphi_dt: f64,
    pub dweight_ds: f64,
    pub dweight_dt: f64,
}

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

impl PotentialKind {
    pub fn brown(epsilon: f64) -> Result<Self> {
        Ok(Self::Brown { c: derive_brown_c(epsilon)? })
    }

    pub fn robust(epsilon: f64, theta: f64, sigma_f: f64) -> Result<Self> {
        Ok(Self::Robust(derive_robust_params(epsilon, theta, sigma_f)?))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Exp => "exp",
            Self::Logit => "logit",
            Self::Brown { .. } => "brown",
            Self::Robust(_) => "robust",
        }
    }

    pub fn is_time_dependent(&self) -> bool {
        matches!(self, Self::Brown { .. } | Self::Robust(_))
    }

    pub(crate) fn frame(&self, t: f64) -> Result<Option<Frame>> {
        match *self {
            Self::Exp | Self::Logit => Ok(None),
            Self::Brown { c } => {
                let rem = 1.0 - t;
                let a = 2.0 * c.sqrt();
                let width = (2.0 * rem).sqrt();
                Ok(Some(Frame { center: -a * rem, width, d_center: a, d_width: -1.0 / width }))
            }
            Self::Robust(p) => {
                let width = p.sigma(t)?;
                Ok(Some(Frame {
                    center: p.mu(t),
                    width,
                    d_center: -p.c2 * (-t).exp(),
                    d_width: -p.c1 * (-2.0 * t).exp() / width,
                }))
            }
        }
    }

    /// `Phi(s, t)`. Exp and Logit ignore `t`. BrownBoost at `t = 1` is the
    /// step `1{s < 0}` with value `1/2` at `s = 0`.
    pub fn potential(&self, s: f64, t: f64) -> Result<f64> {
        match *self {
            Self::Exp => Ok((-s).exp()),
            Self::Logit => Ok(softplus(-s)),
            Self::Brown { .. } if t >= 1.0 => Ok(if s < 0.0 {
                1.0
            } else if s > 0.0 {
                0.0
            } else {
                0.5
            }),
            _ => {
                let f = self.frame(t)?.expect("time-dependent kind");
                Ok(0.5 * erfc((s - f.center) / f.width))
            }
        }
    }

    /// Example weight, proportional to `-dPhi/ds` by one positive constant
    /// per kind.
    pub fn weight(&self, s: f64, t: f64) -> Result<f64> {
        match *self {
            Self::Exp => Ok((-s).exp()),
            Self::Logit => Ok(1.0 / (1.0 + s.exp())),
            Self::Brown { .. } if t >= 1.0 => Ok(0.0),
            _ => {
                let f = self.frame(t)?.expect("time-dependent kind");
                let z = (s - f.center) / f.width;
                Ok((-z * z).exp() / f.width)
            }
        }
    }

    /// Ratio `-dPhi/ds / weight`, constant for each kind.
    pub fn weight_scale(&self) -> f64 {
        match self {
            Self::Exp | Self::Logit => 1.0,
            Self::Brown { .. } | Self::Robust(_) => FRAC_1_SQRT_PI,
        }
    }

    /// Value and derivatives used by the step solver. Only defined for the
    /// time-dependent kinds with `t < 1`.
    pub(crate) fn local(&self, frame: &Frame, s: f64) -> Local {
        let z = (s - frame.center) / frame.width;
        let g = (-z * z).exp();
        let dz_ds = 1.0 / frame.width;
        let dz_dt = (-frame.d_center - z * frame.d_width) / frame.width;
        let weight = g / frame.width;
        Local {
            phi: 0.5 * erfc(z),
            weight,
            dphi_ds: -FRAC_1_SQRT_PI * g * dz_ds,
            dphi_dt: -FRAC_1_SQRT_PI * g * dz_dt,
            dweight_ds: -2.0 * z * dz_ds * weight,
            dweight_dt: -2.0 * z * dz_dt * weight - frame.d_width * weight / frame.width,
        }
    }
}

fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

/// BrownBoost spread constant for error goal `epsilon`, chosen so that the
/// potential of a zero margin at `t = 0` equals `epsilon`:
/// `erfc(sqrt(2c)) / 2 = epsilon`, i.e. `c = erfcinv(2 epsilon)^2 / 2`.
///
/// Since the potential tends to the 0/1 step as `t -> 1` and the solver
/// conserves total potential, `epsilon` is the fraction of training examples
/// the run is prepared to misclassify.
pub fn derive_brown_c(epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(BoostError::Parameter(format!(
            "BrownBoost error goal must lie in (0, 1/2), got {epsilon}"
        )));
    }
    let k = erfcinv(2.0 * epsilon);
    Ok(0.5 * k * k)
}

/// RobustBoost constants from error goal `epsilon`, margin goal `theta` and
/// final width `sigma_f`.
///
/// Boundary conditions: `sigma(1) = sigma_f`, `mu(1) = theta`, and
/// `Phi(0, 0) = epsilon`.
pub fn derive_robust_params(epsilon: f64, theta: f64, sigma_f: f64) -> Result<RobustParams> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(BoostError::Parameter(format!(
            "RobustBoost error goal must lie in (0, 1/2), got {epsilon}"
        )));
    }
    if !(theta >= 0.0 && theta.is_finite()) {
        return Err(BoostError::Parameter(format!("theta must be >= 0, got {theta}")));
    }
    if !(sigma_f > 0.0 && sigma_f.is_finite()) {
        return Err(BoostError::Parameter(format!("sigma_f must be > 0, got {sigma_f}")));
    }
    let c1 = (sigma_f * sigma_f + 1.0) * E * E;
    let sigma0 = (c1 - 1.0).sqrt();
    let k = erfcinv(2.0 * epsilon);
    let rho = (theta * E + sigma0 * k) / (2.0 * E - 2.0);
    let c2 = (theta - 2.0 * rho) * E;
    Ok(RobustParams { rho, c1, c2, sigma_f, theta })
}

/// Boost-by-Majority potentials `Phi_i^t` for `t` in `0..=T+1` and the
/// margin `i` in `-(T+1)..=T+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BbmTable {
    rounds: usize,
    gamma: f64,
    // rows[t][i + T + 1]
    rows: Vec<Vec<f64>>,
}

impl BbmTable {
    pub fn new(rounds: usize, gamma: f64) -> Result<Self> {
        if rounds == 0 {
            return Err(BoostError::Parameter("BBM needs at least one round".into()));
        }
        if !(gamma > 0.0 && gamma < 0.5) {
            return Err(BoostError::Parameter(format!("BBM gamma must lie in (0, 1/2), got {gamma}")));
        }
        let width = 2 * rounds + 3;
        let offset = rounds as i64 + 1;
        let terminal: Vec<f64> =
            (0..width).map(|k| if (k as i64) - offset < 0 { 1.0 } else { 0.0 }).collect();
        let mut rows = vec![terminal];
        let up = 0.5 + gamma;
        let down = 0.5 - gamma;
        for _ in 0..=rounds {
            let next = rows.last().expect("terminal row");
            // beyond the table: 0 above, 1 below
            let row = (0..width)
                .map(|k| {
                    let hi = if k + 1 < width { next[k + 1] } else { 0.0 };
                    let lo = if k > 0 { next[k - 1] } else { 1.0 };
                    up * hi + down * lo
                })
                .collect();
            rows.push(row);
        }
        rows.reverse();
        Ok(Self { rounds, gamma, rows })
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `Phi_i^t`; margins outside the stored range are 0 above and 1 below.
    pub fn get(&self, t: usize, i: i64) -> f64 {
        let offset = self.rounds as i64 + 1;
        let k = i + offset;
        if k < 0 {
            1.0
        } else if k as usize >= self.rows[t].len() {
            0.0
        } else {
            self.rows[t][k as usize]
        }
    }
}

/// One sample of a potential surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialSample {
    pub kind: &'static str,
    pub s: f64,
    pub t: f64,
    pub phi: f64,
    pub weight: f64,
}

/// Evaluates `kind` on the product grid `s_values x t_values`, skipping
/// points where the potential is undefined.
pub fn potential_grid(kind: &PotentialKind, s_values: &[f64], t_values: &[f64]) -> Vec<PotentialSample> {
    let mut out = Vec::with_capacity(s_values.len() * t_values.len());
    for &t in t_values {
        for &s in s_values {
            if let (Ok(phi), Ok(weight)) = (kind.potential(s, t), kind.weight(s, t)) {
                out.push(PotentialSample { kind: kind.name(), s, t, phi, weight });
            }
        }
    }
    out
}
