//! Spectral abscissa, Hurwitz test and the exponential-polynomial bound for
//! `w^(n) = a_{n-1} w^(n-1) + ... + a_0 w`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::gauge::{fit_log_slope, ExponentFit, HolderReport};
use crate::poly::{check_finite, MonicPoly};
use crate::quad::linspace;
use crate::solver::{solve_all, SolveControls};
use crate::{Complex, Error, Result};

/// Largest admissible `h * max|lambda|` for the explicit integrator.
pub const RK4_GUARD: f64 = 0.1;

/// Characteristic polynomial `lambda^n - a_{n-1} lambda^{n-1} - ... - a_0`
/// of a coefficient tuple `M = (a_0, ..., a_{n-1})`.
///
/// All sign handling lives here: `c_k = -a_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharPoly {
    source: Vec<Complex>,
    poly: MonicPoly,
}

impl CharPoly {
    pub fn new(m: &[Complex]) -> Result<Self> {
        if m.is_empty() {
            return Err(Error::invalid("coefficient tuple must have n >= 1 entries"));
        }
        let c: Vec<Complex> = m.iter().map(|a| -a).collect();
        Ok(CharPoly {
            source: m.to_vec(),
            poly: MonicPoly::new(c)?,
        })
    }

    pub fn real(m: &[f64]) -> Result<Self> {
        Self::new(&m.iter().map(|&a| Complex::new(a, 0.0)).collect::<Vec<_>>())
    }

    pub fn source(&self) -> &[Complex] {
        &self.source
    }

    /// Ascending monic coefficients `c_0, ..., c_{n-1}`.
    pub fn coeffs(&self) -> &[Complex] {
        self.poly.coeffs()
    }

    pub fn poly(&self) -> &MonicPoly {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.source.len()
    }

    pub fn roots(&self) -> Result<Vec<Complex>> {
        Ok(solve_all(&self.poly, &SolveControls::default())?.roots)
    }
}

fn to_complex(m: &[f64]) -> Vec<Complex> {
    m.iter().map(|&a| Complex::new(a, 0.0)).collect()
}

/// `max Re lambda` over the characteristic roots.
pub fn lambda_bar(m: &[Complex]) -> Result<f64> {
    Ok(CharPoly::new(m)?
        .roots()?
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max))
}

pub fn lambda_bar_real(m: &[f64]) -> Result<f64> {
    lambda_bar(&to_complex(m))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HurwitzReport {
    pub stable: bool,
    /// Leading principal minors `Delta_1, ..., Delta_n`.
    pub minors: Vec<f64>,
}

/// Hurwitz matrix of `lambda^n + b_1 lambda^{n-1} + ... + b_n`, entries
/// `H[i][j] = b_{2j - i}` (1-based, `b_0 = 1`, zero outside `0..=n`).
pub fn hurwitz_matrix(m: &[f64]) -> Vec<Vec<f64>> {
    let n = m.len();
    // b_k = c_{n-k} = -a_{n-k}
    let b = |k: i64| -> f64 {
        if k == 0 {
            1.0
        } else if (1..=n as i64).contains(&k) {
            -m[n - k as usize]
        } else {
            0.0
        }
    };
    (1..=n as i64)
        .map(|i| (1..=n as i64).map(|j| b(2 * j - i)).collect())
        .collect()
}

fn determinant(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for k in col..n {
                a[r][k] -= f * a[col][k];
            }
        }
    }
    det
}

/// Routh–Hurwitz test for a real coefficient tuple.
pub fn hurwitz_stable(m: &[Complex]) -> Result<HurwitzReport> {
    if m.is_empty() {
        return Err(Error::invalid("coefficient tuple must have n >= 1 entries"));
    }
    for (k, a) in m.iter().enumerate() {
        check_finite(*a, &format!("a_{k}"))?;
        if a.im != 0.0 {
            return Err(Error::invalid(format!(
                "Hurwitz test needs real coefficients, a_{k} = {a}"
            )));
        }
    }
    Ok(hurwitz_stable_real(&m.iter().map(|a| a.re).collect::<Vec<_>>()))
}

pub fn hurwitz_stable_real(m: &[f64]) -> HurwitzReport {
    let h = hurwitz_matrix(m);
    let minors: Vec<f64> = (1..=m.len())
        .map(|k| determinant(h[..k].iter().map(|row| row[..k].to_vec()).collect()))
        .collect();
    HurwitzReport {
        stable: minors.iter().all(|&d| d > 0.0),
        minors,
    }
}

/// Closed interval in one complex coordinate; real when `im = [0, 0]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub re: [f64; 2],
    #[serde(default)]
    pub im: [f64; 2],
}

impl Interval {
    pub fn real(lo: f64, hi: f64) -> Self {
        Interval { re: [lo, hi], im: [0.0, 0.0] }
    }

    pub fn is_real(&self) -> bool {
        self.im == [0.0, 0.0]
    }

    fn grid(&self, g: usize) -> Vec<Complex> {
        let axis = |r: [f64; 2]| if r[0] == r[1] { vec![r[0]] } else { linspace(r[0], r[1], g) };
        let res = axis(self.re);
        let ims = axis(self.im);
        ims.iter()
            .flat_map(|&y| res.iter().map(move |&x| Complex::new(x, y)))
            .collect()
    }

    fn sample(&self, rng: &mut impl Rng) -> Complex {
        let pick = |r: [f64; 2], rng: &mut dyn rand::RngCore| {
            if r[0] == r[1] {
                r[0]
            } else {
                r[0] + (r[1] - r[0]) * rng.gen::<f64>()
            }
        };
        let x = pick(self.re, rng);
        let y = pick(self.im, rng);
        Complex::new(x, y)
    }
}

/// Product of closed coordinate intervals (box norm).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainBox {
    pub coords: Vec<Interval>,
}

impl DomainBox {
    pub fn new(coords: Vec<Interval>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::invalid("box needs at least one coordinate"));
        }
        for (k, c) in coords.iter().enumerate() {
            let ok = |r: [f64; 2]| r[0].is_finite() && r[1].is_finite() && r[0] <= r[1];
            if !ok(c.re) || !ok(c.im) {
                return Err(Error::invalid(format!(
                    "box coordinate {k}: interval must be finite with lo <= hi, got re {:?} im {:?}",
                    c.re, c.im
                )));
            }
        }
        Ok(DomainBox { coords })
    }

    /// Real box from `[lo, hi]` pairs.
    pub fn real(bounds: &[[f64; 2]]) -> Result<Self> {
        Self::new(bounds.iter().map(|b| Interval::real(b[0], b[1])).collect())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_real(&self) -> bool {
        self.coords.iter().all(Interval::is_real)
    }

    /// Tensor grid with `g` points along every nondegenerate axis.
    pub fn grid(&self, g: usize) -> Vec<Vec<Complex>> {
        let mut out: Vec<Vec<Complex>> = vec![Vec::new()];
        for c in &self.coords {
            let axis = c.grid(g);
            out = out
                .iter()
                .flat_map(|p| {
                    axis.iter().map(move |&z| {
                        let mut q = p.clone();
                        q.push(z);
                        q
                    })
                })
                .collect();
        }
        out
    }

    pub fn sample(&self, rng: &mut impl Rng) -> Vec<Complex> {
        self.coords.iter().map(|c| c.sample(rng)).collect()
    }
}

fn box_distance(a: &[Complex], b: &[Complex]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Fits the smallest `L` with `|Lbar(M) - Lbar(M')| <= L |M - M'|^{1/n}` on
/// `pairs` random pairs, then again on `2 * pairs` (a superset).
pub fn lambda_bar_modulus_scan(b: &DomainBox, pairs: usize, seed: u64) -> Result<HolderReport> {
    if pairs == 0 {
        return Err(Error::invalid("need at least one pair"));
    }
    let n = b.dim();
    let exponent = 1.0 / n as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sampled: Vec<(Vec<Complex>, Vec<Complex>)> =
        (0..2 * pairs).map(|_| (b.sample(&mut rng), b.sample(&mut rng))).collect();
    let constants: Vec<(f64, usize)> = sampled
        .par_iter()
        .enumerate()
        .map(|(i, (m, m2))| {
            let d = box_distance(m, m2);
            if d == 0.0 {
                return Ok((0.0, i));
            }
            let jump = (lambda_bar(m)? - lambda_bar(m2)?).abs();
            Ok((jump / d.powf(exponent), i))
        })
        .collect::<Result<_>>()?;
    let best = |k: usize| {
        constants[..k]
            .iter()
            .copied()
            .fold((0.0, 0), |acc, c| if c.0 > acc.0 { c } else { acc })
    };
    let (max_constant, at) = best(pairs);
    let (refined, _) = best(2 * pairs);
    let (m, m2) = &sampled[at];
    Ok(HolderReport {
        exponent,
        max_constant,
        refined_constant: Some(refined),
        argmax: m.iter().chain(m2).flat_map(|z| [z.re, z.im]).collect(),
        samples: pairs,
    })
}

/// Local Hölder exponent of `Lbar` at `m0`: for each radius `r`, the largest
/// jump over perturbations of box size `r` (coordinate axes in both signs
/// plus `directions` random ones), then the log-log slope.
pub fn lambda_bar_local_exponent(
    m0: &[Complex],
    radii: &[f64],
    directions: usize,
    seed: u64,
) -> Result<ExponentFit> {
    let n = m0.len();
    let base = lambda_bar(m0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    for k in 0..n {
        for s in [-1.0, 1.0] {
            let mut d = vec![0.0; n];
            d[k] = s;
            dirs.push(d);
        }
    }
    for _ in 0..directions {
        let d: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let norm = d.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        if norm > 0.0 {
            dirs.push(d.iter().map(|x| x / norm).collect());
        }
    }
    let jumps = radii
        .iter()
        .map(|&r| {
            dirs.iter().try_fold(0.0f64, |acc, d| {
                let m: Vec<Complex> = m0.iter().zip(d).map(|(a, s)| a + r * s).collect();
                Ok(acc.max((lambda_bar(&m)? - base).abs()))
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ExponentFit {
        exponent: fit_log_slope(radii, &jumps),
        radii: radii.to_vec(),
        jumps,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ivp {
    /// `M = (a_0, ..., a_{n-1})`.
    pub m: Vec<Complex>,
    /// `N = (w^0, ..., w^{n-1})`.
    pub n0: Vec<Complex>,
    pub xi_max: f64,
    pub h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IvpSolution {
    pub xi: Vec<f64>,
    /// `states[s][i] = w^(i)(xi[s])`.
    pub states: Vec<Vec<Complex>>,
    /// Step actually used (`xi_max` divided into equal steps no larger than `h`).
    pub h: f64,
}

fn spectral_radius(m: &[Complex]) -> Result<f64> {
    Ok(CharPoly::new(m)?
        .roots()?
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max))
}

fn rhs(m: &[Complex], y: &[Complex], out: &mut [Complex]) {
    let n = y.len();
    out[..n - 1].copy_from_slice(&y[1..]);
    out[n - 1] = m.iter().zip(y).map(|(a, w)| a * w).sum();
}

/// Integrates the companion system with classical RK4; `steps` equal steps
/// over `[0, xi_max]`.
fn rk4(m: &[Complex], n0: &[Complex], xi_max: f64, steps: usize) -> IvpSolution {
    let n = m.len();
    let h = xi_max / steps as f64;
    let mut y = n0.to_vec();
    let mut xi = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    xi.push(0.0);
    states.push(y.clone());
    let zero = Complex::new(0.0, 0.0);
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) =
        (vec![zero; n], vec![zero; n], vec![zero; n], vec![zero; n], vec![zero; n]);
    for s in 1..=steps {
        rhs(m, &y, &mut k1);
        for i in 0..n {
            tmp[i] = y[i] + k1[i] * (h / 2.0);
        }
        rhs(m, &tmp, &mut k2);
        for i in 0..n {
            tmp[i] = y[i] + k2[i] * (h / 2.0);
        }
        rhs(m, &tmp, &mut k3);
        for i in 0..n {
            tmp[i] = y[i] + k3[i] * h;
        }
        rhs(m, &tmp, &mut k4);
        for i in 0..n {
            y[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0);
        }
        xi.push(s as f64 * h);
        states.push(y.clone());
    }
    IvpSolution { xi, states, h }
}

fn steps_for(xi_max: f64, h: f64) -> usize {
    ((xi_max / h) * (1.0 - 1e-12)).ceil().max(1.0) as usize
}

pub fn solve_ivp(ivp: &Ivp) -> Result<IvpSolution> {
    let n = ivp.m.len();
    if n == 0 || ivp.n0.len() != n {
        return Err(Error::invalid(format!(
            "need n >= 1 coefficients and n initial values, got {} and {}",
            n,
            ivp.n0.len()
        )));
    }
    for (k, a) in ivp.m.iter().enumerate() {
        check_finite(*a, &format!("a_{k}"))?;
    }
    for (k, w) in ivp.n0.iter().enumerate() {
        check_finite(*w, &format!("w^{k}"))?;
    }
    if !(ivp.xi_max > 0.0 && ivp.xi_max.is_finite()) {
        return Err(Error::invalid("xi_max must be positive and finite"));
    }
    if !(ivp.h > 0.0 && ivp.h <= ivp.xi_max) {
        return Err(Error::invalid(format!("step h = {} must lie in (0, xi_max]", ivp.h)));
    }
    let product = ivp.h * spectral_radius(&ivp.m)?;
    if product > RK4_GUARD {
        return Err(Error::StepTooLarge { h: ivp.h, product });
    }
    Ok(rk4(&ivp.m, &ivp.n0, ivp.xi_max, steps_for(ivp.xi_max, ivp.h)))
}

/// Grid densities for [`verify_bound`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundGrid {
    /// Points per nondegenerate coefficient axis.
    pub a: usize,
    /// Points per nondegenerate initial-value axis.
    pub w: usize,
    /// Minimum number of steps on `[0, xi_max]`; raised per `M` to respect
    /// the integrator guard.
    pub steps: usize,
}

impl Default for BoundGrid {
    fn default() -> Self {
        BoundGrid { a: 9, w: 5, steps: 1000 }
    }
}

impl BoundGrid {
    /// Nested refinement: every old grid point stays on the new grid.
    pub fn doubled(self) -> Self {
        BoundGrid {
            a: 2 * self.a - 1,
            w: 2 * self.w - 1,
            steps: 2 * self.steps,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundArgmax {
    pub a: Vec<Complex>,
    pub w: Vec<Complex>,
    pub xi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    /// Largest observed `max_i |w^(i)| / ((1 + xi^{n-1}) e^{Lbar xi})`.
    pub c_tilde: f64,
    pub argmax: BoundArgmax,
    /// `-max Lbar` over the sampled `M`, when every sampled `M` passes the
    /// Hurwitz test.
    pub kappa: Option<f64>,
    /// Same supremum with `e^{-kappa xi}` in the denominator.
    pub c_tilde_decayed: Option<f64>,
    /// `None` for complex coefficient boxes.
    pub all_hurwitz_stable: Option<bool>,
    pub max_lambda_bar: f64,
    pub grid: BoundGrid,
    pub xi_max: f64,
    pub coefficient_points: usize,
    pub initial_points: usize,
}

struct PerM {
    ratio: f64,
    w: usize,
    xi: f64,
    lambda_bar: f64,
    decayed_at: Vec<(f64, f64)>,
}

/// Evaluates the exponential-polynomial bound over `box_a x box_w` and
/// `[0, xi_max]`, reporting the grid supremum `C~`.
pub fn verify_bound(box_a: &DomainBox, box_w: &DomainBox, grid: BoundGrid, xi_max: f64) -> Result<BoundReport> {
    let n = box_a.dim();
    if box_w.dim() != n {
        return Err(Error::invalid(format!(
            "coefficient box has {n} coordinates but initial-value box has {}",
            box_w.dim()
        )));
    }
    if grid.a < 2 || grid.w < 2 || grid.steps < 1 {
        return Err(Error::invalid("grid needs a >= 2, w >= 2, steps >= 1"));
    }
    if !(xi_max > 0.0 && xi_max.is_finite()) {
        return Err(Error::invalid("xi_max must be positive and finite"));
    }
    let ms = box_a.grid(grid.a);
    let ws = box_w.grid(grid.w);
    let real = box_a.is_real();

    let per_m: Vec<PerM> = ms
        .par_iter()
        .map(|m| {
            let lb = lambda_bar(m)?;
            let rho = spectral_radius(m)?;
            let steps = grid.steps.max((xi_max * rho / RK4_GUARD).ceil() as usize);
            // w depends linearly on N: integrate the n unit initial vectors once
            let basis: Vec<IvpSolution> = (0..n)
                .map(|j| {
                    let mut e = vec![Complex::new(0.0, 0.0); n];
                    e[j] = Complex::new(1.0, 0.0);
                    rk4(m, &e, xi_max, steps)
                })
                .collect();
            let xis = &basis[0].xi;
            let denom: Vec<f64> = xis
                .iter()
                .map(|&x| (1.0 + x.powi(n as i32 - 1)) * (lb * x).exp())
                .collect();
            let mut best = PerM {
                ratio: f64::NEG_INFINITY,
                w: 0,
                xi: 0.0,
                lambda_bar: lb,
                decayed_at: Vec::new(),
            };
            // per step: largest max_i |w^(i)| over the N grid, kept for the decayed form
            let mut peak = vec![0.0f64; xis.len()];
            for (wi, w0) in ws.iter().enumerate() {
                for s in 0..xis.len() {
                    let mut amp = 0.0f64;
                    for i in 0..n {
                        let v: Complex = (0..n).map(|j| w0[j] * basis[j].states[s][i]).sum();
                        amp = amp.max(v.norm());
                    }
                    peak[s] = peak[s].max(amp);
                    let r = amp / denom[s];
                    if r > best.ratio {
                        best.ratio = r;
                        best.w = wi;
                        best.xi = xis[s];
                    }
                }
            }
            best.decayed_at = xis.iter().copied().zip(peak).collect();
            Ok(best)
        })
        .collect::<Result<_>>()?;

    let (mi, top) = per_m
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.ratio.total_cmp(&b.1.ratio))
        .expect("grid is nonempty");
    let max_lambda_bar = per_m.iter().map(|p| p.lambda_bar).fold(f64::NEG_INFINITY, f64::max);
    let all_stable = if real {
        Some(ms.iter().all(|m| hurwitz_stable(m).map(|h| h.stable).unwrap_or(false)))
    } else {
        None
    };
    let kappa = match all_stable {
        Some(true) if max_lambda_bar < 0.0 => Some(-max_lambda_bar),
        _ => None,
    };
    let c_tilde_decayed = kappa.map(|k| {
        per_m
            .iter()
            .flat_map(|p| p.decayed_at.iter())
            .map(|&(x, amp)| amp / ((1.0 + x.powi(n as i32 - 1)) * (-k * x).exp()))
            .fold(0.0, f64::max)
    });
    Ok(BoundReport {
        n,
        c_tilde: top.ratio,
        argmax: BoundArgmax {
            a: ms[mi].clone(),
            w: ws[top.w].clone(),
            xi: top.xi,
        },
        kappa,
        c_tilde_decayed,
        all_hurwitz_stable: all_stable,
        max_lambda_bar,
        grid,
        xi_max,
        coefficient_points: ms.len(),
        initial_points: ws.len(),
    })
}

/// `(xi, ratio)` samples for one `(M, N)`, for plotting.
pub fn ratio_curve(m: &[Complex], n0: &[Complex], xi_max: f64, steps: usize) -> Result<Vec<(f64, f64)>> {
    let n = m.len();
    let rho = spectral_radius(m)?;
    let steps = steps.max((xi_max * rho / RK4_GUARD).ceil() as usize).max(1);
    let sol = solve_ivp(&Ivp {
        m: m.to_vec(),
        n0: n0.to_vec(),
        xi_max,
        h: xi_max / steps as f64,
    })?;
    let lb = lambda_bar(m)?;
    Ok(sol
        .xi
        .iter()
        .zip(&sol.states)
        .map(|(&x, st)| {
            let amp = st.iter().map(|z| z.norm()).fold(0.0, f64::max);
            (x, amp / ((1.0 + x.powi(n as i32 - 1)) * (lb * x).exp()))
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RasterCell {
    pub a: Vec<f64>,
    pub stable: bool,
}

/// Hurwitz verdict on a tensor grid of a real box.
pub fn hurwitz_raster(b: &DomainBox, g: usize) -> Result<Vec<RasterCell>> {
    if !b.is_real() {
        return Err(Error::invalid("Hurwitz raster needs a real coefficient box"));
    }
    b.grid(g)
        .iter()
        .map(|m| {
            Ok(RasterCell {
                a: m.iter().map(|z| z.re).collect(),
                stable: hurwitz_stable(m)?.stable,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(v: f64) -> Complex {
        Complex::new(v, 0.0)
    }

    #[test]
    fn lambda_bar_examples() {
        assert!(lambda_bar_real(&[-1.0, 0.0]).unwrap().abs() < 1e-12);
        assert!((lambda_bar_real(&[-1.0, -1.0]).unwrap() + 0.5).abs() < 1e-12);
        assert_eq!(lambda_bar_real(&[0.7]).unwrap(), 0.7);
    }

    #[test]
    fn char_sign_convention() {
        let cp = CharPoly::real(&[2.0, -3.0]).unwrap();
        assert_eq!(cp.coeffs(), &[c(-2.0), c(3.0)]);
        // lambda^2 + 3 lambda - 2 has roots (-3 +- sqrt 17)/2
        let want = (-3.0 + 17f64.sqrt()) / 2.0;
        assert!((lambda_bar_real(&[2.0, -3.0]).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn hurwitz_examples() {
        let h = hurwitz_stable_real(&[-1.0, -1.0]);
        assert!(h.stable);
        assert_eq!(h.minors, vec![1.0, 1.0]);
        assert!(!hurwitz_stable_real(&[-1.0, 0.0]).stable);
        assert!(hurwitz_stable_real(&[-1.0, -2.0, -2.0]).stable);
        assert!(lambda_bar_real(&[-1.0, -2.0, -2.0]).unwrap() < 0.0);
        assert!(hurwitz_stable(&[Complex::new(-1.0, 1.0)]).is_err());
    }

    #[test]
    fn hurwitz_degree_one() {
        assert!(hurwitz_stable_real(&[-0.5]).stable);
        assert!(!hurwitz_stable_real(&[0.5]).stable);
    }

    proptest! {
        #[test]
        fn hurwitz_agrees_with_roots(m in prop::collection::vec(-3.0f64..3.0, 1..=4)) {
            let lb = lambda_bar_real(&m).unwrap();
            prop_assume!(lb.abs() > 1e-9);
            prop_assert_eq!(hurwitz_stable_real(&m).stable, lb < -1e-9);
        }

        #[test]
        fn lambda_bar_matches_explicit_char(m in prop::collection::vec(-3.0f64..3.0, 1..=4)) {
            // explicit lambda^n - sum a_k lambda^k
            let c: Vec<f64> = m.iter().map(|a| -a).collect();
            let p = MonicPoly::real(&c).unwrap();
            let want = solve_all(&p, &SolveControls::default()).unwrap().max_real_part();
            prop_assert!((lambda_bar_real(&m).unwrap() - want).abs() < 1e-9);
        }
    }

    #[test]
    fn sign_flip_is_detected() {
        // lambda - a_0 vs lambda + a_0
        let m = [0.5, -1.0];
        let right = lambda_bar_real(&m).unwrap();
        let flipped = solve_all(&MonicPoly::real(&m).unwrap(), &SolveControls::default())
            .unwrap()
            .max_real_part();
        assert!((right - flipped).abs() > 0.1);
    }

    #[test]
    fn ivp_oracles() {
        let s = solve_ivp(&Ivp { m: vec![c(-1.0)], n0: vec![c(1.0)], xi_max: 1.0, h: 1e-3 }).unwrap();
        assert!((s.states.last().unwrap()[0].re - (-1f64).exp()).abs() < 1e-6);

        let s = solve_ivp(&Ivp { m: vec![c(-1.0), c(0.0)], n0: vec![c(1.0), c(0.0)], xi_max: std::f64::consts::PI, h: 1e-3 })
            .unwrap();
        assert!((s.states.last().unwrap()[0].re + 1.0).abs() < 1e-6);

        let s = solve_ivp(&Ivp { m: vec![c(0.0), c(0.0)], n0: vec![c(0.0), c(1.0)], xi_max: 2.0, h: 1e-3 }).unwrap();
        for (x, st) in s.xi.iter().zip(&s.states) {
            assert!((st[0].re - x).abs() < 1e-9);
        }
    }

    #[test]
    fn ivp_guard() {
        let e = solve_ivp(&Ivp { m: vec![c(-10.0)], n0: vec![c(1.0)], xi_max: 1.0, h: 0.1 });
        assert!(matches!(e, Err(Error::StepTooLarge { .. })));
        assert!(solve_ivp(&Ivp { m: vec![c(-1.0)], n0: vec![], xi_max: 1.0, h: 0.1 }).is_err());
    }

    #[test]
    fn bound_degree_one_constant_half() {
        // (1 + xi^0) = 2, so the ratio is identically 1/2
        let r = verify_bound(
            &DomainBox::real(&[[-1.0, -1.0]]).unwrap(),
            &DomainBox::real(&[[1.0, 1.0]]).unwrap(),
            BoundGrid { a: 2, w: 2, steps: 200 },
            5.0,
        )
        .unwrap();
        assert!((r.c_tilde - 0.5).abs() < 1e-6, "{}", r.c_tilde);
        assert_eq!(r.kappa, Some(1.0));
    }

    #[test]
    fn bound_oscillator() {
        let r = verify_bound(
            &DomainBox::real(&[[-1.0, -1.0], [0.0, 0.0]]).unwrap(),
            &DomainBox::real(&[[1.0, 1.0], [0.0, 0.0]]).unwrap(),
            BoundGrid { a: 2, w: 2, steps: 2000 },
            20.0,
        )
        .unwrap();
        assert!((r.c_tilde - 1.0).abs() < 1e-9);
        assert_eq!(r.argmax.xi, 0.0);
        assert_eq!(r.kappa, None);
        assert_eq!(r.all_hurwitz_stable, Some(false));
    }

    #[test]
    fn bound_stable_box() {
        let a = DomainBox::real(&[[-2.0, -0.5], [-2.0, -0.5]]).unwrap();
        let w = DomainBox::real(&[[-1.0, 1.0], [-1.0, 1.0]]).unwrap();
        let r = verify_bound(&a, &w, BoundGrid { a: 5, w: 3, steps: 500 }, 20.0).unwrap();
        assert!(r.kappa.unwrap() > 0.0);
        assert!(r.c_tilde.is_finite());
        assert!(r.c_tilde_decayed.unwrap() <= r.c_tilde + 1e-12);
    }

    #[test]
    fn local_exponent_at_double_root() {
        let radii: Vec<f64> = (2..=8).map(|k| 10f64.powi(-k)).collect();
        let fit = lambda_bar_local_exponent(&[c(0.0), c(0.0)], &radii, 8, 0).unwrap();
        assert!((fit.exponent - 0.5).abs() < 0.1, "{fit:?}");
    }

    #[test]
    fn modulus_scan_degree_one() {
        let r = lambda_bar_modulus_scan(&DomainBox::real(&[[-1.0, 1.0]]).unwrap(), 200, 3).unwrap();
        assert_eq!(r.exponent, 1.0);
        assert!((r.max_constant - 1.0).abs() < 1e-12);
        assert!((r.refinement_ratio().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn box_grid_and_raster() {
        let b = DomainBox::real(&[[-2.0, -0.5], [-2.0, -0.5]]).unwrap();
        assert_eq!(b.grid(3).len(), 9);
        assert!(hurwitz_raster(&b, 5).unwrap().iter().all(|c| c.stable));
        assert!(DomainBox::real(&[[1.0, 0.0]]).is_err());
    }

    #[test]
    fn ratio_curve_starts_at_one() {
        let curve = ratio_curve(&[c(-1.0), c(0.0)], &[c(1.0), c(0.0)], 10.0, 100).unwrap();
        assert!((curve[0].1 - 1.0).abs() < 1e-12);
        assert!(curve.iter().all(|&(_, r)| r <= 1.0 + 1e-9));
    }
}
