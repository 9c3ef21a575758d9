//! One-parameter state families and β-grid sweeps of their tangles.

use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::grassmann::VANISH_TOL;
use crate::invariants::{self, InvariantError, SuperReport};
use crate::parser::{parse_state, ParseError};
use crate::states::StateError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("unknown family {0:?}; expected bell-soul, super-w or biseparable")]
    UnknownFamily(String),
    #[error("bad grid {0:?}; expected re0:re1:k[,im0:im1:k]")]
    BadGrid(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// α Bell + β |••>, two superqubits.
    BellSoul,
    /// α(|110>+|101>+|011>) + β(|••1>+|•1•>+|1••>).
    SuperW,
    /// α(|000>+|011>)/√2 + β|0••>.
    Biseparable,
}

impl FromStr for Family {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bell-soul" => Ok(Family::BellSoul),
            "super-w" => Ok(Family::SuperW),
            "biseparable" => Ok(Family::Biseparable),
            other => Err(SweepError::UnknownFamily(other.to_string())),
        }
    }
}

fn lit(c: Complex64) -> String {
    format!("({:e}{:+e}i)", c.re, c.im)
}

impl Family {
    pub fn n(&self) -> usize {
        match self {
            Family::BellSoul => 2,
            _ => 3,
        }
    }

    /// Ket expression with the normalizing prefactor written out.
    pub fn expression(&self, alpha: Complex64, beta: Complex64) -> String {
        let (a, b) = (lit(alpha), lit(beta));
        let norm = lit(Complex64::new(alpha.norm_sqr() + beta.norm_sqr(), 0.0));
        match self {
            Family::BellSoul => {
                format!("(1/sqrt({norm}))({a}(1/sqrt(2))(|00> + |11>) + {b}|**>)")
            }
            Family::SuperW => format!(
                "(1/sqrt(3))(1/sqrt({norm}))({a}(|110> + |101> + |011>) + {b}(|**1> + |*1*> + |1**>))"
            ),
            Family::Biseparable => {
                format!("(1/sqrt({norm}))((1/sqrt(2)){a}(|000> + |011>) + {b}|0**>)")
            }
        }
    }
}

/// β values in grid order: real part outer, imaginary part inner.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaGrid {
    pub re: (f64, f64, usize),
    pub im: (f64, f64, usize),
}

fn axis(spec: &str, whole: &str) -> Result<(f64, f64, usize), SweepError> {
    let bad = || SweepError::BadGrid(whole.to_string());
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let start = parts[0].trim().parse().map_err(|_| bad())?;
    let stop = parts[1].trim().parse().map_err(|_| bad())?;
    let steps: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if steps == 0 {
        return Err(bad());
    }
    Ok((start, stop, steps))
}

impl FromStr for BetaGrid {
    type Err = SweepError;

    /// `re0:re1:k` or `re0:re1:k,im0:im1:k`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut halves = s.split(',');
        let re = axis(halves.next().unwrap_or(""), s)?;
        let im = match halves.next() {
            Some(h) => axis(h, s)?,
            None => (0.0, 0.0, 1),
        };
        if halves.next().is_some() {
            return Err(SweepError::BadGrid(s.to_string()));
        }
        Ok(BetaGrid { re, im })
    }
}

fn points((start, stop, steps): (f64, f64, usize)) -> Vec<f64> {
    if steps == 1 {
        return vec![start];
    }
    (0..steps).map(|k| start + (stop - start) * k as f64 / (steps - 1) as f64).collect()
}

impl BetaGrid {
    pub fn betas(&self) -> Vec<Complex64> {
        let ims = points(self.im);
        points(self.re).into_iter().flat_map(|r| ims.iter().map(move |i| Complex64::new(r, *i))).collect()
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub beta: Complex64,
    /// Body of τ_XY or τ_XYZ; NaN when the square root is undefined.
    pub tau: f64,
    /// sdet, (Γ^A)_{11} or (Γ^A)_{00} body, by family.
    pub covariant: Complex64,
    /// T_{111} body for super-w.
    pub t111: Option<Complex64>,
}

/// Parse, normalize and evaluate one family member.
pub fn evaluate(family: Family, alpha: Complex64, beta: Complex64) -> Result<SweepRow, SweepError> {
    let state = parse_state(&family.expression(alpha, beta), Some(family.n()))?.normalize()?;
    let report = invariants::analyze(&state, VANISH_TOL)?;
    let row = match report.superqubit {
        SuperReport::Two { sdet, tau, .. } => {
            SweepRow { beta, tau: tau.body().re, covariant: sdet.body(), t111: None }
        }
        SuperReport::Three { gammas, t, tau, .. } => {
            let tau = tau.value().map_or(f64::NAN, |v| v.body().re);
            match family {
                Family::SuperW => SweepRow { beta, tau, covariant: gammas[0][4].body(), t111: Some(t[13].body()) },
                _ => SweepRow { beta, tau, covariant: gammas[0][0].body(), t111: None },
            }
        }
    };
    Ok(row)
}

/// Evaluates every grid point in parallel; rows come back in grid order.
pub fn sweep(family: Family, alpha: Complex64, grid: &BetaGrid) -> Result<Vec<SweepRow>, SweepError> {
    grid.betas().into_par_iter().map(|b| evaluate(family, alpha, b)).collect()
}

/// τ_XY = |α² - β²|² / (|α|² + |β|²)².
pub fn bell_soul_tau(alpha: Complex64, beta: Complex64) -> f64 {
    let d = alpha.norm_sqr() + beta.norm_sqr();
    (alpha * alpha - beta * beta).norm_sqr() / (d * d)
}
