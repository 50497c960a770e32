//! The joint spectrum of the invariant operators: embedding parameter
//! tuples as eigenvalue vectors, deciding membership of a given vector,
//! and tabulating meshes of the regular stratum.
//!
//! On `N` the spectrum is the union of the regular sheet
//! `(lambda (2l+1) + r^2, lambda^2, lambda r)` over `lambda > 0`,
//! `l` a natural number, `r` real, and the ray `(R^2, 0, 0)`.  On `N'` a
//! fourth coordinate `r^2` is appended and the degenerate stratum becomes
//! the two-parameter sheet `(zeta^2 + r^2, 0, 0, r^2)`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::spherical::{Regular, RegularPrime, Singular, SingularPrime};

/// Default relative tolerance for membership tests.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum SpectrumError {
    #[error("lambda grid must be positive, got [{0}, {1}]")]
    NonPositiveLambda(f64, f64),
    #[error("grid bounds must satisfy min <= max, got [{0}, {1}]")]
    EmptyRange(f64, f64),
    #[error("grid needs at least one step per axis")]
    NoSteps,
}

/// Where in the spectrum of the pair on `N` a vector landed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Stratum {
    Regular { lambda: f64, l: usize, r: f64 },
    Singular { radius: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub member: bool,
    pub stratum: Stratum,
    /// Absolute defect of the best-matching parameters.
    pub residual: f64,
    /// Eigenvalue vector of the snapped parameters.
    pub nearest: [f64; 3],
}

fn round_to_natural(x: f64) -> usize {
    x.round().max(0.0) as usize
}

/// Decides whether `eta` lies on the spectrum of the pair on `N`, within
/// `tol` relative to `max(1, |eta|)`.
///
/// The second coordinate separates the strata: `eta2 = lambda^2` forces
/// the regular sheet whenever it is meaningfully positive.  There the
/// remaining freedom is the integer `l`, so the defect is the distance
/// from `((eta1 - r^2)/lambda - 1)/2` to the nearest natural number,
/// scaled back to eigenvalue units.
pub fn classify(eta: &[f64; 3], tol: f64) -> Classification {
    let norm = eta.iter().map(|v| v * v).sum::<f64>().sqrt();
    let scale = norm.max(1.0);
    let [e1, e2, e3] = *eta;
    if e2 > tol * tol * scale {
        let lambda = e2.sqrt();
        let r = e3 / lambda;
        let l_star = ((e1 - r * r) / lambda - 1.0) / 2.0;
        let l = round_to_natural(l_star);
        let snapped = Regular { lambda, l, r };
        let residual = lambda * (l_star - l as f64).abs();
        Classification {
            member: residual <= tol * scale,
            stratum: Stratum::Regular { lambda, l, r },
            residual,
            nearest: snapped.eigenvalues(),
        }
    } else {
        let radius = e1.max(0.0).sqrt();
        let residual = e2.abs().max(e3.abs()).max((-e1).max(0.0));
        Classification {
            member: residual <= tol * scale,
            stratum: Stratum::Singular { radius },
            residual,
            nearest: Singular { radius }.eigenvalues(),
        }
    }
}

/// Strata of the quotient pair on `N'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StratumPrime {
    Regular { lambda: f64, l: usize, r: f64 },
    Singular { zeta: f64, r: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationPrime {
    pub member: bool,
    pub stratum: StratumPrime,
    pub residual: f64,
    pub nearest: [f64; 4],
}

/// Membership test for the four-dimensional quotient spectrum.  The extra
/// coordinate must reproduce `r^2` on the regular sheet, and on the
/// degenerate sheet it fixes `r` up to the sign that the functions cannot
/// see.
pub fn classify_prime(eta: &[f64; 4], tol: f64) -> ClassificationPrime {
    let norm = eta.iter().map(|v| v * v).sum::<f64>().sqrt();
    let scale = norm.max(1.0);
    let [e1, e2, e3, e4] = *eta;
    if e2 > tol * tol * scale {
        let lambda = e2.sqrt();
        let r = e3 / lambda;
        let l_star = ((e1 - r * r) / lambda - 1.0) / 2.0;
        let l = round_to_natural(l_star);
        let snapped = RegularPrime { lambda, l, r };
        let residual = (lambda * (l_star - l as f64).abs()).max((e4 - r * r).abs());
        ClassificationPrime {
            member: residual <= tol * scale,
            stratum: StratumPrime::Regular { lambda, l, r },
            residual,
            nearest: snapped.eigenvalues(),
        }
    } else {
        let r = e4.max(0.0).sqrt();
        let zeta = (e1 - e4).max(0.0).sqrt();
        let residual = e2
            .abs()
            .max(e3.abs())
            .max((-e4).max(0.0))
            .max((e4 - e1).max(0.0));
        ClassificationPrime {
            member: residual <= tol * scale,
            stratum: StratumPrime::Singular { zeta, r },
            residual,
            nearest: SingularPrime { zeta, r }.eigenvalues(),
        }
    }
}

/// Grid over the regular sheet of the spectrum on `N`.
#[derive(Debug, Clone, Copy)]
pub struct MeshSpec {
    pub l_max: usize,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub lambda_steps: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub r_steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshRow {
    pub l: usize,
    pub lambda: f64,
    pub r: f64,
    pub eta: [f64; 3],
}

fn grid(min: f64, max: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![min];
    }
    (0..steps)
        .map(|j| min + (max - min) * j as f64 / (steps - 1) as f64)
        .collect()
}

/// Tabulates eigenvalue vectors over the parameter grid, `l` outermost.
pub fn mesh(spec: &MeshSpec) -> Result<Vec<MeshRow>, SpectrumError> {
    if spec.lambda_steps == 0 || spec.r_steps == 0 {
        return Err(SpectrumError::NoSteps);
    }
    if spec.lambda_min <= 0.0 || spec.lambda_max <= 0.0 {
        return Err(SpectrumError::NonPositiveLambda(spec.lambda_min, spec.lambda_max));
    }
    if spec.lambda_min > spec.lambda_max {
        return Err(SpectrumError::EmptyRange(spec.lambda_min, spec.lambda_max));
    }
    if spec.r_min > spec.r_max {
        return Err(SpectrumError::EmptyRange(spec.r_min, spec.r_max));
    }
    let lambdas = grid(spec.lambda_min, spec.lambda_max, spec.lambda_steps);
    let rs = grid(spec.r_min, spec.r_max, spec.r_steps);
    let mut rows =
        Vec::with_capacity((spec.l_max + 1) * lambdas.len() * rs.len());
    for l in 0..=spec.l_max {
        for &lambda in &lambdas {
            for &r in &rs {
                let eta = Regular { lambda, l, r }.eigenvalues();
                rows.push(MeshRow { l, lambda, r, eta });
            }
        }
    }
    Ok(rows)
}

/// Renders mesh rows as CSV with full-precision scientific notation, so
/// reading the file back reproduces the exact doubles.
pub fn mesh_csv(rows: &[MeshRow]) -> String {
    let mut out = String::from("l,lambda,r,eta1,eta2,eta3\n");
    for row in rows {
        writeln!(
            out,
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            row.l, row.lambda, row.r, row.eta[0], row.eta[1], row.eta[2]
        )
        .expect("writing to a String cannot fail");
    }
    out
}
