//! Aberth–Ehrlich simultaneous iteration for all roots of a monic polynomial,
//! plus a guarded Newton polish for single roots.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::poly::{check_finite, MonicPoly, RootMultiset};
use crate::{Complex, Error, Result};

/// Multiplier on the Horner running-error bound below which a residual is
/// indistinguishable from rounding noise.
const ROUNDING_FACTOR: f64 = 8.0;
const TINY_DERIVATIVE: f64 = 1e-30;
/// Roots closer than `tol^{1/4} (1 + |z|)` to another iterate keep iterating
/// down to the rounding floor, so that multiple roots end up inside the
/// cluster radius.
const NEAR_EXPONENT: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveControls {
    /// Relative residual target.
    pub tol: f64,
    pub max_iter: usize,
    /// Seeds the angular offset of the initial guesses.
    pub seed: u64,
}

impl Default for SolveControls {
    fn default() -> Self {
        SolveControls {
            tol: 1e-12,
            max_iter: 200,
            seed: 0,
        }
    }
}

impl SolveControls {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol >= 1e-14) || !self.tol.is_finite() {
            return Err(Error::invalid(format!(
                "solver tol must be a finite value >= 1e-14, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::invalid("solver max_iter must be at least 1"));
        }
        Ok(())
    }

    pub fn with_seed(self, seed: u64) -> Self {
        SolveControls { seed, ..self }
    }
}

/// Initial guesses equispaced on the circle of radius `1 + max_k |a_k|`,
/// rotated by a seed-dependent angle.
pub fn initial_guesses(p: &MonicPoly, seed: u64) -> Vec<Complex> {
    let n = p.degree();
    let radius = p.scale();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sector = 2.0 * PI / n as f64;
    // Keep away from the sector edges so that guesses never sit on a
    // symmetry axis of real polynomials.
    let offset = sector * rng.gen_range(0.1..0.9);
    (0..n)
        .map(|k| Complex::from_polar(radius, offset + sector * k as f64))
        .collect()
}

fn accepted(p: &MonicPoly, z: Complex, tol: f64) -> bool {
    let (v, _, bound) = p.eval_with_derivative(z);
    let r = v.norm();
    r / p.scale() <= tol || r <= ROUNDING_FACTOR * f64::EPSILON * bound
}

/// All roots of `p` by Aberth–Ehrlich iteration from the standard circle
/// guesses.
pub fn solve_all(p: &MonicPoly, c: &SolveControls) -> Result<RootMultiset> {
    c.validate()?;
    if p.degree() == 1 {
        let root = -p.coeffs()[0];
        return Ok(finish(vec![root], c.tol));
    }
    solve_from_guesses(p, &initial_guesses(p, c.seed), c)
}

/// Aberth–Ehrlich iteration from caller-supplied starting points (one per
/// root). Used for warm starts along a path.
pub fn solve_from_guesses(
    p: &MonicPoly,
    guesses: &[Complex],
    c: &SolveControls,
) -> Result<RootMultiset> {
    c.validate()?;
    let n = p.degree();
    if guesses.len() != n {
        return Err(Error::invalid(format!(
            "expected {n} initial guesses, got {}",
            guesses.len()
        )));
    }
    for g in guesses {
        check_finite(*g, "initial guess")?;
    }
    let mut z = guesses.to_vec();
    // Coincident guesses make the Aberth correction singular.
    separate_duplicates(&mut z, c.tol);

    let near_radius = c.tol.powf(NEAR_EXPONENT);
    let mut done = vec![false; n];
    let mut iterations = 0;
    while iterations < c.max_iter {
        iterations += 1;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (v, dv, bound) = p.eval_with_derivative(z[k]);
            let near = near_radius * (1.0 + z[k].norm());
            let crowded = (0..n).any(|j| j != k && (z[k] - z[j]).norm() < near);
            if (!crowded && v.norm() / p.scale() <= c.tol)
                || v.norm() <= ROUNDING_FACTOR * f64::EPSILON * bound
            {
                done[k] = true;
                continue;
            }
            if dv.norm() < TINY_DERIVATIVE {
                z[k] += Complex::new(c.tol, c.tol) * p.scale();
                continue;
            }
            let ratio = v / dv;
            let mut sum = Complex::new(0.0, 0.0);
            for j in 0..n {
                if j != k {
                    let d = z[k] - z[j];
                    if d.norm() > 0.0 {
                        sum += d.inv();
                    }
                }
            }
            let denom = Complex::new(1.0, 0.0) - ratio * sum;
            let step = if denom.norm() > TINY_DERIVATIVE {
                ratio / denom
            } else {
                ratio
            };
            z[k] -= step;
            if !(z[k].re.is_finite() && z[k].im.is_finite()) {
                return Err(Error::NoConvergence {
                    iterations,
                    worst_residual: f64::INFINITY,
                });
            }
        }
        if done.iter().all(|&d| d) {
            return Ok(finish(z, c.tol));
        }
    }
    if z.iter().all(|&r| accepted(p, r, c.tol)) {
        return Ok(finish(z, c.tol));
    }
    let worst_residual = z.iter().map(|&r| p.residual(r)).fold(0.0, f64::max);
    Err(Error::NoConvergence {
        iterations,
        worst_residual,
    })
}

fn separate_duplicates(z: &mut [Complex], tol: f64) {
    for k in 1..z.len() {
        while z[..k].iter().any(|&w| w == z[k]) {
            z[k] += Complex::new(tol.sqrt(), tol.sqrt() * 0.5) * (1.0 + z[k].norm());
        }
    }
}

fn finish(roots: Vec<Complex>, tol: f64) -> RootMultiset {
    let radius = tol.sqrt();
    let clustered = (0..roots.len())
        .map(|i| {
            roots
                .iter()
                .enumerate()
                .any(|(j, w)| j != i && (roots[i] - w).norm() < radius)
        })
        .collect();
    RootMultiset {
        roots,
        cluster_radius: radius,
        clustered,
    }
}

/// Result of a Newton polish that may stop short of the tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Polished {
    pub root: Complex,
    pub residual: f64,
    pub converged: bool,
}

/// Newton iteration from `z0`; returns the best iterate seen together with a
/// convergence flag.
pub fn polish_best(p: &MonicPoly, z0: Complex, c: &SolveControls) -> Result<Polished> {
    c.validate()?;
    check_finite(z0, "starting point")?;
    let mut z = z0;
    let mut best = Polished {
        root: z0,
        residual: p.residual(z0),
        converged: false,
    };
    for _ in 0..c.max_iter {
        let (v, dv, bound) = p.eval_with_derivative(z);
        let res = v.norm() / p.scale();
        if res < best.residual {
            best = Polished {
                root: z,
                residual: res,
                converged: false,
            };
        }
        if res <= c.tol || v.norm() <= ROUNDING_FACTOR * f64::EPSILON * bound {
            return Ok(Polished {
                root: z,
                residual: res,
                converged: true,
            });
        }
        if dv.norm() < TINY_DERIVATIVE {
            z += Complex::new(c.tol, 0.0);
            continue;
        }
        let next = z - v / dv;
        if !(next.re.is_finite() && next.im.is_finite()) {
            break;
        }
        z = next;
    }
    Ok(best)
}

/// Newton polish that fails with `NoConvergence` when the tolerance is not
/// reached within `max_iter` steps.
pub fn polish(p: &MonicPoly, z0: Complex, c: &SolveControls) -> Result<Complex> {
    let out = polish_best(p, z0, c)?;
    if out.converged {
        Ok(out.root)
    } else {
        Err(Error::NoConvergence {
            iterations: c.max_iter,
            worst_residual: out.residual,
        })
    }
}
