//! Continuous tracking of all roots along a coefficient path, and local
//! continuous selection around a fixed coefficient tuple.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assign::match_to_reference;
use crate::path::CoefficientPath;
use crate::poly::{min_separation, FieldTag, MonicPoly};
use crate::solver::{polish_best, solve_all, solve_from_guesses, SolveControls};
use crate::{Complex, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackControls {
    /// Initial step; `None` means `(beta - alpha) / 256`.
    pub h0: Option<f64>,
    /// Minimum step; `None` means `(beta - alpha) * 1e-6`.
    pub h_min: Option<f64>,
    /// Largest displacement of any root over one accepted step.
    pub eps_cont: f64,
    /// Collision guard factor `g`: a step must move every root by less than
    /// `1/g` of the current minimum root separation.
    pub guard: f64,
    pub solver: SolveControls,
}

impl Default for TrackControls {
    fn default() -> Self {
        TrackControls {
            h0: None,
            h_min: None,
            eps_cont: 0.1,
            guard: 4.0,
            solver: SolveControls::default(),
        }
    }
}

impl TrackControls {
    /// Concrete `(h0, h_min)` for an interval, after validation.
    pub fn steps_for(&self, domain: [f64; 2]) -> Result<(f64, f64)> {
        let len = domain[1] - domain[0];
        let h0 = self.h0.unwrap_or(len / 256.0);
        let h_min = self.h_min.unwrap_or(len * 1e-6);
        if !(h_min > 0.0 && h_min <= h0 && h0 <= len) {
            return Err(Error::invalid(format!(
                "track steps must satisfy 0 < h_min ({h_min}) <= h0 ({h0}) <= beta - alpha ({len})"
            )));
        }
        if !(self.eps_cont > 0.0) {
            return Err(Error::invalid("eps_cont must be positive"));
        }
        if !(self.guard >= 2.0) {
            return Err(Error::invalid("collision guard factor must be >= 2"));
        }
        self.solver.validate()?;
        Ok((h0, h_min))
    }

    /// Separation below which two roots are treated as collided.
    fn collision_floor(&self) -> f64 {
        self.solver.tol.sqrt()
    }
}

/// Ordered root trajectories over an adaptive grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryBundle {
    pub grid: Vec<f64>,
    /// `roots[j][k]`: root `k` at `grid[j]`.
    pub roots: Vec<Vec<Complex>>,
    /// `provenance[j][k]`: index in the solver output at `grid[j]` placed
    /// into slot `k` (empty for the initial point, which fixes the order).
    pub provenance: Vec<Vec<usize>>,
    /// Largest single-step displacement of any root.
    pub delta_max: f64,
    /// Largest relative residual of any grid value.
    pub rho_max: f64,
    /// Smallest pairwise root separation over the grid.
    pub s_min: f64,
    /// Largest coefficientwise gap between `prod (x - x_k(t))` and the path.
    pub factor_err: f64,
}

impl TrajectoryBundle {
    pub fn initial_roots(&self) -> &[Complex] {
        &self.roots[0]
    }

    pub fn final_roots(&self) -> &[Complex] {
        &self.roots[self.roots.len() - 1]
    }

    pub fn degree(&self) -> usize {
        self.roots[0].len()
    }
}

/// Tracks every root of `path` from `alpha` to `beta`; the solver output at
/// `alpha` fixes the ordering.
pub fn track(path: &CoefficientPath, c: &TrackControls) -> Result<TrajectoryBundle> {
    let [alpha, _] = path.domain();
    let p0 = path.poly_at(alpha)?;
    let start = solve_all(&p0, &c.solver)?;
    track_from(path, &start.roots, c)
}

enum StepOutcome {
    Accepted {
        roots: Vec<Complex>,
        source: Vec<usize>,
        delta: f64,
        sep: f64,
    },
    Rejected,
}

fn attempt_step(p1: &MonicPoly, prev: &[Complex], prev_sep: f64, c: &TrackControls) -> Result<StepOutcome> {
    // Predict by the previous values, polish, then re-solve all roots
    // warm-started from the polished predictions.
    let mut guesses = Vec::with_capacity(prev.len());
    for &z in prev {
        guesses.push(polish_best(p1, z, &c.solver)?.root);
    }
    let solved = match solve_from_guesses(p1, &guesses, &c.solver) {
        Ok(s) => s,
        Err(Error::NoConvergence { .. }) => solve_all(p1, &c.solver)?,
        Err(e) => return Err(e),
    };
    let (ordered, source) = match_to_reference(prev, &solved.roots);
    let delta = prev
        .iter()
        .zip(&ordered)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let sep = min_separation(&ordered);
    let guard_sep = prev_sep.min(sep);
    if sep < c.collision_floor() || delta * c.guard >= guard_sep || delta > c.eps_cont {
        return Ok(StepOutcome::Rejected);
    }
    Ok(StepOutcome::Accepted {
        roots: ordered,
        source,
        delta,
        sep,
    })
}

/// Tracks from a caller-given ordering of the roots at `alpha`.
pub fn track_from(path: &CoefficientPath, start: &[Complex], c: &TrackControls) -> Result<TrajectoryBundle> {
    let [alpha, beta] = path.domain();
    let (h0, h_min) = c.steps_for(path.domain())?;
    if start.len() != path.degree() {
        return Err(Error::invalid(format!(
            "expected {} starting roots, got {}",
            path.degree(),
            start.len()
        )));
    }
    let p0 = path.poly_at(alpha)?;
    let mut prev = start.to_vec();
    let mut prev_sep = min_separation(&prev);
    if prev_sep < c.collision_floor() {
        return Err(Error::StepUnderflow { t: alpha });
    }
    let mut bundle = TrajectoryBundle {
        grid: vec![alpha],
        roots: vec![prev.clone()],
        provenance: vec![Vec::new()],
        delta_max: 0.0,
        rho_max: prev.iter().map(|&z| p0.residual(z)).fold(0.0, f64::max),
        s_min: prev_sep,
        factor_err: factor_error(&p0, &prev)?,
    };

    let mut t = alpha;
    let mut h = h0;
    while t < beta {
        let t1 = if beta - t <= h { beta } else { t + h };
        let p1 = path.poly_at(t1)?;
        match attempt_step(&p1, &prev, prev_sep, c)? {
            StepOutcome::Rejected => {
                h *= 0.5;
                if h < h_min {
                    return Err(Error::StepUnderflow { t });
                }
            }
            StepOutcome::Accepted {
                roots,
                source,
                delta,
                sep,
            } => {
                bundle.delta_max = bundle.delta_max.max(delta);
                bundle.s_min = bundle.s_min.min(sep);
                bundle.rho_max = roots
                    .iter()
                    .map(|&z| p1.residual(z))
                    .fold(bundle.rho_max, f64::max);
                bundle.factor_err = bundle.factor_err.max(factor_error(&p1, &roots)?);
                bundle.grid.push(t1);
                bundle.roots.push(roots.clone());
                bundle.provenance.push(source);
                prev = roots;
                prev_sep = sep;
                t = t1;
                h = (2.0 * h).min(h0);
            }
        }
    }
    Ok(bundle)
}

fn factor_error(p: &MonicPoly, roots: &[Complex]) -> Result<f64> {
    Ok(MonicPoly::from_roots(roots)?.coeff_distance(p))
}

/// `perm[k] = j` when slot `k` of `end` continues to `start[j]` under the
/// minimal matching.
pub fn induced_permutation(start: &[Complex], end: &[Complex]) -> Vec<usize> {
    let (_, source) = match_to_reference(end, start);
    source
}

/// Tracks `path` forward, then backward from the final ordering, and returns
/// the permutation between the starting and returning orderings.
pub fn round_trip_permutation(path: &CoefficientPath, c: &TrackControls) -> Result<(TrajectoryBundle, Vec<usize>)> {
    let fwd = track(path, c)?;
    let back = track_from(&path.reversed(), fwd.final_roots(), c)?;
    let perm = induced_permutation(fwd.initial_roots(), back.final_roots());
    Ok((fwd, perm))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalSelectionReport {
    pub base_roots: Vec<Complex>,
    pub radii: Vec<f64>,
    /// `deltas[i]`: largest displacement from the base ordering over the
    /// samples within `radii[i]`.
    pub deltas: Vec<f64>,
    pub samples: usize,
}

/// The default ladder `r, r/2, r/4, r/8`.
pub fn radius_ladder(r: f64) -> Vec<f64> {
    (0..4).map(|k| r / f64::from(1 << k)).collect()
}

/// Solves at `m0`, then at `samples` random points within each radius,
/// matches every perturbed root multiset to the base ordering and records
/// the largest displacement per radius.
pub fn local_selection(
    m0: &[Complex],
    radii: &[f64],
    samples: usize,
    c: &TrackControls,
    seed: u64,
) -> Result<LocalSelectionReport> {
    if samples == 0 {
        return Err(Error::invalid("local selection needs at least one sample"));
    }
    if radii.iter().any(|r| !(*r >= 0.0) || !r.is_finite()) {
        return Err(Error::invalid("radii must be finite and nonnegative"));
    }
    let base_poly = MonicPoly::new(m0.to_vec())?;
    let real = base_poly.field() == FieldTag::Real;
    let base = solve_all(&base_poly, &c.solver)?.roots;
    let n = m0.len();

    let mut deltas = Vec::with_capacity(radii.len());
    for (level, &r) in radii.iter().enumerate() {
        let worst = (0..samples)
            .into_par_iter()
            .map(|i| -> Result<f64> {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(((level as u64) << 32) | i as u64);
                let dir = ball_point(&mut rng, n, real);
                let m: Vec<Complex> = m0.iter().zip(&dir).map(|(a, d)| a + d * r).collect();
                let roots = solve_all(&MonicPoly::new(m)?, &c.solver)?.roots;
                let (ordered, _) = match_to_reference(&base, &roots);
                Ok(base
                    .iter()
                    .zip(&ordered)
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max))
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        deltas.push(worst);
    }
    Ok(LocalSelectionReport {
        base_roots: base,
        radii: radii.to_vec(),
        deltas,
        samples,
    })
}

/// Uniform point in the unit ball of `C^n` (or `R^n` when `real`).
fn ball_point(rng: &mut ChaCha8Rng, n: usize, real: bool) -> Vec<Complex> {
    let dim = if real { n } else { 2 * n };
    let mut v: Vec<f64> = (0..dim).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let radius = rng.gen::<f64>().powf(1.0 / dim as f64);
    for x in v.iter_mut() {
        *x *= radius / norm;
    }
    if real {
        v.into_iter().map(|x| Complex::new(x, 0.0)).collect()
    } else {
        v.chunks(2).map(|c| Complex::new(c[0], c[1])).collect()
    }
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assign::multiset_distance;
    use crate::path::{Knot, Preset};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn constant_path_gives_constant_trajectories() {
        let knots = vec![
            Knot { t: 0.0, coeffs: vec![c(1.0, 0.0), c(0.0, 0.0)] },
            Knot { t: 1.0, coeffs: vec![c(1.0, 0.0), c(0.0, 0.0)] },
        ];
        let path = CoefficientPath::sampled(2, FieldTag::Real, knots).unwrap();
        let b = track(&path, &TrackControls::default()).unwrap();
        assert_eq!(b.delta_max, 0.0);
        assert!(multiset_distance(b.final_roots(), &[c(0.0, 1.0), c(0.0, -1.0)]) < 1e-12);
        for row in &b.roots {
            assert_eq!(row, &b.roots[0]);
        }
    }

    #[test]
    fn quad_loop_follows_half_angle() {
        let path = CoefficientPath::preset(Preset::QuadComplexLoop);
        let b = track(&path, &TrackControls::default()).unwrap();
        // Slot 0 follows +-e^{it/2}; fix the sign from the start.
        let sign = if (b.roots[0][0] - 1.0).norm() < 1e-9 { 1.0 } else { -1.0 };
        for (t, row) in b.grid.iter().zip(&b.roots) {
            let x1 = Complex::from_polar(sign, t / 2.0);
            assert!((row[0] - x1).norm() < 1e-9, "t={t}");
            assert!((row[1] + x1).norm() < 1e-9, "t={t}");
        }
        assert!(b.rho_max <= 1e-8);
        assert!((b.s_min - 2.0).abs() < 1e-9);
    }

    #[test]
    fn cubic_sample_path_matches_square_roots() {
        let knots = vec![
            Knot { t: 0.01, coeffs: vec![c(0.0, 0.0), c(-0.01, 0.0), c(0.0, 0.0)] },
            Knot { t: 1.0, coeffs: vec![c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)] },
        ];
        let path = CoefficientPath::sampled(3, FieldTag::Real, knots).unwrap();
        let b = track(&path, &TrackControls::default()).unwrap();
        for (t, row) in b.grid.iter().zip(&b.roots) {
            let want = [c(0.0, 0.0), c(t.sqrt(), 0.0), c(-t.sqrt(), 0.0)];
            assert!(multiset_distance(row, &want) < 1e-9, "t={t}");
        }
        // ordering is continuous: the slot holding 0 keeps holding 0
        let zero_slot = b.roots[0].iter().position(|z| z.norm() < 1e-9).unwrap();
        assert!(b.roots.iter().all(|row| row[zero_slot].norm() < 1e-9));
    }

    #[test]
    fn fold_surfaces_as_step_underflow() {
        let path = CoefficientPath::preset(Preset::CubicFold);
        match track(&path, &TrackControls::default()) {
            Err(Error::StepUnderflow { t }) => assert!(t.abs() < 1e-2, "t={t}"),
            other => panic!("expected StepUnderflow, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_start_is_rejected() {
        // the quartic loop has a double root at its base point
        let path = CoefficientPath::preset(Preset::QuarticRealLoop);
        assert!(matches!(
            track(&path, &TrackControls::default()),
            Err(Error::StepUnderflow { .. })
        ));
    }

    #[test]
    fn controls_validation() {
        let path = CoefficientPath::preset(Preset::QuadComplexLoop);
        let bad = TrackControls { guard: 1.5, ..Default::default() };
        assert!(track(&path, &bad).is_err());
        let bad = TrackControls { h0: Some(10.0), ..Default::default() };
        assert!(track(&path, &bad).is_err());
        let bad = TrackControls { h0: Some(0.1), h_min: Some(0.2), ..Default::default() };
        assert!(track(&path, &bad).is_err());
        let bad = TrackControls { eps_cont: 0.0, ..Default::default() };
        assert!(track(&path, &bad).is_err());
    }

    #[test]
    fn local_selection_simple_roots() {
        let m0 = [c(1.0, 0.0), c(0.0, 0.0)];
        let rep = local_selection(&m0, &radius_ladder(1e-3), 64, &TrackControls::default(), 7).unwrap();
        assert!(rep.deltas[0] <= 1e-2);
        for w in rep.deltas.windows(2) {
            assert!(w[1] < w[0]);
        }
    }

    #[test]
    fn local_selection_double_root_scales_like_sqrt() {
        let m0 = [c(0.0, 0.0), c(0.0, 0.0)];
        let rep = local_selection(&m0, &[1e-6], 64, &TrackControls::default(), 3).unwrap();
        // |z| = sqrt(|eps|) <= 1e-3 for perturbations of size <= 1e-6
        assert!(rep.deltas[0] <= 1.1e-3 && rep.deltas[0] >= 1e-4, "{:?}", rep.deltas);
    }

    #[test]
    fn local_selection_zero_radius() {
        let m0 = [c(2.0, 0.0), c(-3.0, 0.0), c(0.5, 0.0)];
        let rep = local_selection(&m0, &[0.0], 8, &TrackControls::default(), 0).unwrap();
        assert_eq!(rep.deltas, vec![0.0]);
    }

    #[test]
    fn round_trip_on_quad_loop_is_identity() {
        let path = CoefficientPath::preset(Preset::QuadComplexLoop);
        let (_, perm) = round_trip_permutation(&path, &TrackControls::default()).unwrap();
        assert_eq!(perm, vec![0, 1]);
    }
}
