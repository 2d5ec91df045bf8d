//! Monodromy permutations around closed coefficient loops and
//! branch-elimination certificates for the periodic families that rule out
//! a continuous root.
//!
//! The certificates rest on one topological fact: when continuous branches
//! are pointwise separated over an interval, a continuous selector on that
//! interval cannot switch between them. Each premise (separation,
//! coefficient periodicity, endpoint values) is checked numerically and
//! recorded with its margin.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, ChainLink, Check, EndpointRow, Relation};
use crate::path::{CoefficientPath, Preset};
use crate::poly::{FieldTag, MonicPoly};
use crate::quad::linspace;
use crate::track::{induced_permutation, track, TrackControls};
use crate::{Complex, Error, Result};

/// Coefficient closure tolerance for loops.
pub const CLOSURE_TOL: f64 = 1e-10;
/// Tolerance for periodicity, closed-form and continuity checks.
pub const IDENTITY_TOL: f64 = 1e-9;
/// Two branch endpoint values closer than this count as equal.
pub const ENDPOINT_TOL: f64 = 1e-9;
/// A branch "moves across the period" when its endpoints differ by at least
/// this much.
pub const MOTION_THRESHOLD: f64 = 1e-6;
pub const DEFAULT_SAMPLES: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BranchPreset {
    /// `x_1 = e^{it/2}`, `x_2 = -x_1` on `[0, 2pi]`.
    QuadComplexLoop,
    /// `x_{1,2} = i +- e^{i(t/2 - pi/2)}` and conjugates on `[0, 2pi]`.
    QuarticRealLoop,
    /// Piecewise five-branch family on `[0, 6pi]`.
    QuinticReal,
}

/// Adds `offset` to one branch, on one piece or everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mutation {
    /// 0-based branch index.
    pub branch: usize,
    pub piece: Option<usize>,
    pub offset: Complex,
}

/// Closed-form root branches `x_1(t), ..., x_n(t)` and the coefficient path
/// they generate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchFamily {
    preset: BranchPreset,
    /// Constant branches appended after the preset ones.
    extra: Vec<Complex>,
    mutation: Option<Mutation>,
}

fn half_turn(t: f64) -> Complex {
    Complex::from_polar(1.0, t / 2.0 - PI / 2.0)
}

const I: Complex = Complex::new(0.0, 1.0);

impl BranchFamily {
    pub fn new(preset: BranchPreset) -> Self {
        BranchFamily {
            preset,
            extra: Vec::new(),
            mutation: None,
        }
    }

    pub fn quad_complex() -> Self {
        Self::new(BranchPreset::QuadComplexLoop)
    }

    pub fn quartic_real() -> Self {
        Self::new(BranchPreset::QuarticRealLoop)
    }

    pub fn quintic_real() -> Self {
        Self::new(BranchPreset::QuinticReal)
    }

    pub fn with_constant_branch(mut self, value: Complex) -> Self {
        self.extra.push(value);
        self
    }

    pub fn with_mutation(mut self, m: Mutation) -> Self {
        self.mutation = Some(m);
        self
    }

    pub fn name(&self) -> String {
        let base = match self.preset {
            BranchPreset::QuadComplexLoop => "quad_complex_loop",
            BranchPreset::QuarticRealLoop => "quartic_real_loop",
            BranchPreset::QuinticReal => "quintic_real_family",
        };
        let mut s = base.to_string();
        if !self.extra.is_empty() {
            s.push_str(&format!("+{}const", self.extra.len()));
        }
        if self.mutation.is_some() {
            s.push_str("+mutated");
        }
        s
    }

    fn base_degree(&self) -> usize {
        match self.preset {
            BranchPreset::QuadComplexLoop => 2,
            BranchPreset::QuarticRealLoop => 4,
            BranchPreset::QuinticReal => 5,
        }
    }

    pub fn degree(&self) -> usize {
        self.base_degree() + self.extra.len()
    }

    pub fn domain(&self) -> [f64; 2] {
        match self.preset {
            BranchPreset::QuinticReal => [0.0, 6.0 * PI],
            _ => [0.0, 2.0 * PI],
        }
    }

    pub fn field(&self) -> FieldTag {
        let base_real = self.preset != BranchPreset::QuadComplexLoop;
        if base_real && self.mutation.is_none() && self.extra.iter().all(|z| z.im == 0.0) {
            FieldTag::Real
        } else {
            FieldTag::Complex
        }
    }

    /// Piece boundaries, including both domain ends.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self.preset {
            BranchPreset::QuinticReal => vec![0.0, 2.0 * PI, 4.0 * PI, 6.0 * PI],
            _ => self.domain().to_vec(),
        }
    }

    pub fn piece_of(&self, t: f64) -> usize {
        let b = self.breakpoints();
        let pieces = b.len() - 1;
        (1..pieces).filter(|&i| t >= b[i]).count()
    }

    fn base_branch(&self, k: usize, piece: usize, t: f64) -> Complex {
        match self.preset {
            BranchPreset::QuadComplexLoop => {
                let x1 = Complex::from_polar(1.0, t / 2.0);
                if k == 0 {
                    x1
                } else {
                    -x1
                }
            }
            BranchPreset::QuarticRealLoop => {
                let e = half_turn(t);
                match k {
                    0 => I + e,
                    1 => I - e,
                    2 => (I + e).conj(),
                    _ => (I - e).conj(),
                }
            }
            BranchPreset::QuinticReal => {
                let e = half_turn(t);
                match (piece, k) {
                    (0, 0) => I + e,
                    (0, 1) => I - e,
                    (0, 2) => (I + e).conj(),
                    (0, 3) => (I - e).conj(),
                    (0, _) => Complex::new(-2.0 * PI, 0.0),
                    (1, 0) => 2.0 * I,
                    (1, 1) => Complex::new(0.0, 0.0),
                    (1, 2) => -2.0 * I,
                    (1, 3) => Complex::new(t - 2.0 * PI, 0.0),
                    (1, _) => Complex::new(t - 4.0 * PI, 0.0),
                    (_, 0) => I - e,
                    (_, 1) => I + e,
                    (_, 2) => (I - e).conj(),
                    (_, 3) => Complex::new(2.0 * PI, 0.0),
                    (_, _) => (I + e).conj(),
                }
            }
        }
    }

    /// Branch `k` evaluated with the formula of `piece` (valid on the closed
    /// piece, so endpoint limits are plain evaluations).
    pub fn branch_on_piece(&self, k: usize, piece: usize, t: f64) -> Complex {
        let base = self.base_degree();
        let mut z = if k < base {
            self.base_branch(k, piece, t)
        } else {
            self.extra[k - base]
        };
        if let Some(m) = self.mutation {
            if m.branch == k && m.piece.map_or(true, |p| p == piece) {
                z += m.offset;
            }
        }
        z
    }

    pub fn branch(&self, k: usize, t: f64) -> Complex {
        self.branch_on_piece(k, self.piece_of(t), t)
    }

    pub fn branches_on_piece(&self, piece: usize, t: f64) -> Vec<Complex> {
        (0..self.degree()).map(|k| self.branch_on_piece(k, piece, t)).collect()
    }

    pub fn branches(&self, t: f64) -> Vec<Complex> {
        self.branches_on_piece(self.piece_of(t), t)
    }

    pub fn coefficients_on_piece(&self, piece: usize, t: f64) -> MonicPoly {
        MonicPoly::from_roots(&self.branches_on_piece(piece, t))
            .expect("branch values are finite")
    }

    pub fn coefficients(&self, t: f64) -> MonicPoly {
        self.coefficients_on_piece(self.piece_of(t), t)
    }

    /// Closed-form coefficients where the family has them (the degree-5
    /// family only on its first and last pieces).
    pub fn closed_form(&self, piece: usize, t: f64) -> Option<Vec<Complex>> {
        let re = |v: f64| Complex::new(v, 0.0);
        let base = match self.preset {
            BranchPreset::QuadComplexLoop => vec![-Complex::from_polar(1.0, t), re(0.0)],
            BranchPreset::QuarticRealLoop => vec![
                re(2.0 * (1.0 - t.cos())),
                re(-4.0 * t.sin()),
                re(2.0 * (1.0 + t.cos())),
                re(0.0),
            ],
            BranchPreset::QuinticReal => {
                let s = match piece {
                    0 => 2.0 * PI,
                    2 => -2.0 * PI,
                    _ => return None,
                };
                let b0 = 2.0 * (1.0 - t.cos());
                let b1 = -4.0 * t.sin();
                let b2 = 2.0 * (1.0 + t.cos());
                vec![re(s * b0), re(b0 + s * b1), re(b1 + s * b2), re(b2), re(s)]
            }
        };
        Some(self.extra.iter().fold(base, |c, &r| times_linear(&c, r)))
    }
}

/// Multiplies the monic polynomial with ascending coefficients `c` by `(x - r)`.
fn times_linear(c: &[Complex], r: Complex) -> Vec<Complex> {
    let n = c.len();
    let mut out = vec![Complex::new(0.0, 0.0); n + 1];
    for k in 0..n {
        out[k] -= r * c[k];
        out[k + 1] += c[k];
    }
    out[n] -= r;
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresetDescriptor {
    pub name: String,
    pub degree: usize,
    pub domain: [f64; 2],
    pub field: FieldTag,
    /// `loop`, `family` or `path`.
    pub kind: String,
}

impl PresetDescriptor {
    fn of(p: Preset, kind: &str) -> Self {
        PresetDescriptor {
            name: p.name(),
            degree: p.degree(),
            domain: p.domain(),
            field: p.field(),
            kind: kind.to_string(),
        }
    }
}

/// Built-in loops and families.
pub fn preset_registry() -> Vec<PresetDescriptor> {
    vec![
        PresetDescriptor::of(Preset::QuadComplexLoop, "loop"),
        PresetDescriptor::of(Preset::QuarticRealLoop, "loop"),
        PresetDescriptor::of(Preset::QuinticRealFamily, "family"),
        PresetDescriptor::of(Preset::ConstantLoop { n: 2 }, "loop"),
        PresetDescriptor::of(Preset::CubicFold, "path"),
    ]
}

pub fn lookup_preset(name: &str) -> Result<PresetDescriptor> {
    let p = Preset::parse(name)?;
    let kind = match p {
        Preset::QuinticRealFamily => "family",
        Preset::CubicFold => "path",
        _ => "loop",
    };
    Ok(PresetDescriptor::of(p, kind))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopPermutation {
    /// `permutation[k] = j`: the root in slot `k` ends where root `j` started
    /// (0-based).
    pub permutation: Vec<usize>,
    /// Nontrivial cycles, 1-based.
    pub cycles: Vec<Vec<usize>>,
    /// Cycle notation, 1-based, `()` for the identity.
    pub notation: String,
    pub has_fixed_point: bool,
    pub s_min: f64,
    pub rho_max: f64,
    pub delta_max: f64,
    pub closure_defect: f64,
    /// Set when the permutation is fixed-point free: no single-valued
    /// continuous root exists along the loop, hence none on any coefficient
    /// domain containing it.
    pub excludes_continuous_root: bool,
}

pub fn cycles_of(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut cycles = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            cyc.push(k + 1);
            k = perm[k];
        }
        if cyc.len() > 1 {
            cycles.push(cyc);
        }
    }
    cycles
}

pub fn cycle_notation(cycles: &[Vec<usize>]) -> String {
    if cycles.is_empty() {
        return "()".to_string();
    }
    cycles
        .iter()
        .map(|c| {
            let inner: Vec<String> = c.iter().map(|k| k.to_string()).collect();
            format!("({})", inner.join(" "))
        })
        .collect()
}

/// Tracks all roots once around a closed loop and reports the induced
/// permutation of root indices.
pub fn loop_permutation(path: &CoefficientPath, c: &TrackControls) -> Result<LoopPermutation> {
    let defect = path.closure_defect();
    if defect > CLOSURE_TOL {
        return Err(Error::NotClosed {
            defect,
            tolerance: CLOSURE_TOL,
        });
    }
    let bundle = match track(path, c) {
        Ok(b) => b,
        Err(Error::StepUnderflow { t }) => return Err(Error::CollisionOnLoop { t }),
        Err(e) => return Err(e),
    };
    let permutation = induced_permutation(bundle.initial_roots(), bundle.final_roots());
    let cycles = cycles_of(&permutation);
    let has_fixed_point = permutation.iter().enumerate().any(|(k, &j)| k == j);
    Ok(LoopPermutation {
        notation: cycle_notation(&cycles),
        excludes_continuous_root: !has_fixed_point,
        permutation,
        cycles,
        has_fixed_point,
        s_min: bundle.s_min,
        rho_max: bundle.rho_max,
        delta_max: bundle.delta_max,
        closure_defect: defect,
    })
}

/// Renders values such as `0`, `2i`, `-2π` exactly when they are (within
/// `1e-9`) integer multiples of `i` or `π`.
pub fn pretty(z: Complex) -> String {
    let near_int = |v: f64| (v - v.round()).abs() < 1e-9;
    if z.norm() < 1e-9 {
        return "0".into();
    }
    if z.im.abs() < 1e-9 && near_int(z.re / PI) && z.re.abs() > 1e-9 {
        let k = (z.re / PI).round() as i64;
        return match k {
            1 => "π".into(),
            -1 => "-π".into(),
            _ => format!("{k}π"),
        };
    }
    if z.re.abs() < 1e-9 && near_int(z.im) {
        let k = z.im.round() as i64;
        return match k {
            1 => "i".into(),
            -1 => "-i".into(),
            _ => format!("{k}i"),
        };
    }
    format!("{}{:+}i", z.re, z.im)
}

fn branch_label(k: usize) -> String {
    format!("x{}", k + 1)
}

/// Minimum pairwise branch distance over `ts` on `piece`; returns the
/// margin with the offending `(t, j, k)`.
fn sampled_separation(f: &BranchFamily, piece: usize, ts: &[f64]) -> (f64, f64, usize, usize) {
    let mut best = (f64::INFINITY, f64::NAN, 0, 0);
    for &t in ts {
        let xs = f.branches_on_piece(piece, t);
        for j in 0..xs.len() {
            for k in j + 1..xs.len() {
                let d = (xs[j] - xs[k]).norm();
                if d < best.0 {
                    best = (d, t, j, k);
                }
            }
        }
    }
    best
}

fn interior_samples(lo: f64, hi: f64, eps_end: f64, m: usize) -> Vec<f64> {
    linspace(lo + eps_end, hi - eps_end, m)
}

fn closed_form_error(f: &BranchFamily, piece: usize, ts: &[f64]) -> Option<f64> {
    let mut worst = 0.0f64;
    for &t in ts {
        let want = f.closed_form(piece, t)?;
        let got = f.coefficients_on_piece(piece, t);
        let err = got
            .coeffs()
            .iter()
            .zip(&want)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        worst = worst.max(err);
    }
    Some(worst)
}

fn check_inputs(m: usize, eps_end: f64, len: f64) -> Result<()> {
    if m < 2 {
        return Err(Error::invalid("need at least 2 samples per interval"));
    }
    if !(eps_end > 0.0 && 2.0 * eps_end < len) {
        return Err(Error::invalid(format!(
            "endpoint exclusion {eps_end} must be positive and less than half the interval"
        )));
    }
    Ok(())
}

/// Certificate for a single-piece family whose coefficients repeat at the
/// ends of its domain.
///
/// A continuous selector over the open interval stays on one branch because
/// the branches are pointwise separated; periodicity of the coefficients
/// forces equal values at both ends, and no branch has equal ends.
pub fn branch_elimination_certificate(f: &BranchFamily, m: usize, eps_end: f64) -> Result<Certificate> {
    let [a, b] = f.domain();
    check_inputs(m, eps_end, b - a)?;
    let last = f.breakpoints().len() - 2;
    let defect = f
        .coefficients_on_piece(0, a)
        .coeff_distance(&f.coefficients_on_piece(last, b));
    if defect > CLOSURE_TOL {
        return Err(Error::PeriodicityViolated {
            defect,
            tolerance: CLOSURE_TOL,
        });
    }
    if last != 0 {
        return Err(Error::invalid(
            "branch elimination expects a single-piece family; use the forced-chain certificate",
        ));
    }
    let ts = interior_samples(a, b, eps_end, m);
    let (sep, t_sep, j, k) = sampled_separation(f, 0, &ts);
    if !(sep > 0.0) {
        return Err(Error::SeparationFailure {
            t: t_sep,
            j: j + 1,
            k: k + 1,
        });
    }

    let mut checks = vec![Check::new("coefficient_periodicity", defect, Relation::AtMost, CLOSURE_TOL)];
    let all_ts = linspace(a, b, m);
    if let Some(err) = closed_form_error(f, 0, &all_ts) {
        checks.push(Check::new("closed_form_agreement", err, Relation::AtMost, IDENTITY_TOL));
    }
    checks.push(Check::new("pointwise_separation", sep, Relation::Above, 0.0));

    let mut endpoints = Vec::new();
    let mut eliminated = Vec::new();
    let mut min_motion = f64::INFINITY;
    for k in 0..f.degree() {
        let start = f.branch_on_piece(k, 0, a);
        let end = f.branch_on_piece(k, 0, b);
        let motion = (start - end).norm();
        min_motion = min_motion.min(motion);
        if motion >= MOTION_THRESHOLD {
            eliminated.push(branch_label(k));
        }
        endpoints.push(EndpointRow {
            branch: branch_label(k),
            interval: [a, b],
            start,
            end,
        });
    }
    checks.push(Check::new("branch_endpoint_motion", min_motion, Relation::AtLeast, MOTION_THRESHOLD));

    let chain = vec![ChainLink {
        interval: [a, b],
        rule: "periodic_endpoints".into(),
        locked: None,
        eliminated,
        left_limit: None,
        right_limit: None,
    }];
    let mut cert = Certificate::from_checks(f.name(), checks, chain);
    if cert.is_certified() {
        cert.contradiction = Some(
            "coefficients repeat at the ends of the period but every branch has distinct endpoint values".into(),
        );
    }
    cert.endpoints = endpoints;
    Ok(cert)
}

struct Lock {
    locked: Option<usize>,
    candidates: usize,
    gap: f64,
    eliminated: Vec<String>,
}

/// Branches of `piece` whose value at `lo` equals their value at `hi`.
fn periodic_lock(f: &BranchFamily, piece: usize, lo: f64, hi: f64) -> Lock {
    let scores: Vec<f64> = (0..f.degree())
        .map(|k| (f.branch_on_piece(k, piece, lo) - f.branch_on_piece(k, piece, hi)).norm())
        .collect();
    select_lock(&scores)
}

/// Branches of `piece` starting at `value` at `lo`.
fn continuation_lock(f: &BranchFamily, piece: usize, lo: f64, value: Complex) -> Lock {
    let scores: Vec<f64> = (0..f.degree())
        .map(|k| (f.branch_on_piece(k, piece, lo) - value).norm())
        .collect();
    select_lock(&scores)
}

fn select_lock(scores: &[f64]) -> Lock {
    let matching: Vec<usize> = (0..scores.len()).filter(|&k| scores[k] <= ENDPOINT_TOL).collect();
    let gap = (0..scores.len())
        .filter(|k| !matching.contains(k))
        .map(|k| scores[k])
        .fold(f64::INFINITY, f64::min);
    Lock {
        locked: if matching.len() == 1 { Some(matching[0]) } else { None },
        candidates: matching.len(),
        gap,
        eliminated: (0..scores.len())
            .filter(|k| !matching.contains(k))
            .map(branch_label)
            .collect(),
    }
}

/// Separation of one locked branch from all others over `ts`.
fn locked_separation(f: &BranchFamily, piece: usize, locked: usize, ts: &[f64]) -> f64 {
    ts.iter()
        .map(|&t| {
            let xs = f.branches_on_piece(piece, t);
            (0..xs.len())
                .filter(|&j| j != locked)
                .map(|j| (xs[j] - xs[locked]).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Forced-chain certificate for the piecewise degree-5 family on
/// `[0, 6pi]` with default controls.
pub fn degree5_certificate(m: usize, eps_end: f64) -> Result<Certificate> {
    degree5_certificate_for(&BranchFamily::quintic_real(), m, eps_end)
}

/// Forced-chain certificate for a three-piece family (the degree-5 preset,
/// possibly mutated). Failed premises yield `Inconclusive` with the failing
/// checks named.
pub fn degree5_certificate_for(f: &BranchFamily, m: usize, eps_end: f64) -> Result<Certificate> {
    let bp = f.breakpoints();
    if bp.len() != 4 {
        return Err(Error::invalid("forced-chain certificate needs a three-piece family"));
    }
    let labels = ["(0,2π)", "[2π,4π)", "(4π,6π)"];
    check_inputs(m, eps_end, bp[1] - bp[0])?;
    let mut checks = Vec::new();

    // (i) coefficient identities at the ends of the outer pieces
    let per_a = f
        .coefficients_on_piece(0, bp[0])
        .coeff_distance(&f.coefficients_on_piece(0, bp[1]));
    let per_b = f
        .coefficients_on_piece(2, bp[2])
        .coeff_distance(&f.coefficients_on_piece(2, bp[3]));
    checks.push(Check::new("periodicity_0_2π", per_a, Relation::AtMost, IDENTITY_TOL));
    checks.push(Check::new("periodicity_4π_6π", per_b, Relation::AtMost, IDENTITY_TOL));

    // (ii) derived coefficients against the closed forms on the outer pieces
    let cf = [0usize, 2]
        .iter()
        .map(|&p| closed_form_error(f, p, &linspace(bp[p], bp[p + 1], m)).unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max);
    checks.push(Check::new("closed_form_agreement", cf, Relation::AtMost, IDENTITY_TOL));

    // branches glue continuously at the inner breakpoints
    let mut jump = 0.0f64;
    for (piece, &t) in bp[1..3].iter().enumerate() {
        for k in 0..f.degree() {
            jump = jump.max((f.branch_on_piece(k, piece, t) - f.branch_on_piece(k, piece + 1, t)).norm());
        }
    }
    checks.push(Check::new("branch_continuity", jump, Relation::AtMost, IDENTITY_TOL));

    // (iii) pointwise separation inside every piece
    for p in 0..3 {
        let ts = interior_samples(bp[p], bp[p + 1], eps_end, m);
        let (sep, ..) = sampled_separation(f, p, &ts);
        checks.push(Check::new(format!("separation_{}", labels[p]), sep, Relation::Above, 0.0));
    }

    // (iv) forced chain
    let mut chain = Vec::new();
    let push_lock = |checks: &mut Vec<Check>, p: usize, lock: &Lock| {
        checks.push(Check::new(
            format!("unique_lock_{}", labels[p]),
            lock.candidates as f64,
            Relation::Equal,
            1.0,
        ));
        checks.push(Check::new(
            format!("elimination_gap_{}", labels[p]),
            lock.gap,
            Relation::AtLeast,
            MOTION_THRESHOLD,
        ));
    };

    let first = periodic_lock(f, 0, bp[0], bp[1]);
    push_lock(&mut checks, 0, &first);
    let mut contradiction = None;
    if let Some(l1) = first.locked {
        let exit1 = f.branch_on_piece(l1, 0, bp[1]);
        chain.push(ChainLink {
            interval: [bp[0], bp[1]],
            rule: "periodic_endpoints".into(),
            locked: Some(branch_label(l1)),
            eliminated: first.eliminated.clone(),
            left_limit: Some(f.branch_on_piece(l1, 0, bp[0])),
            right_limit: Some(exit1),
        });

        let second = continuation_lock(f, 1, bp[1], exit1);
        push_lock(&mut checks, 1, &second);
        if let Some(l2) = second.locked {
            // separation of the locked branch on the half-open piece,
            // including its left end
            let ts = linspace(bp[1], bp[2] - eps_end, m);
            checks.push(Check::new(
                "locked_separation_[2π,4π)",
                locked_separation(f, 1, l2, &ts),
                Relation::Above,
                0.0,
            ));
            let exit2 = f.branch_on_piece(l2, 1, bp[2]);
            chain.push(ChainLink {
                interval: [bp[1], bp[2]],
                rule: "continuation".into(),
                locked: Some(branch_label(l2)),
                eliminated: second.eliminated.clone(),
                left_limit: Some(f.branch_on_piece(l2, 1, bp[1])),
                right_limit: Some(exit2),
            });

            let third = periodic_lock(f, 2, bp[2], bp[3]);
            push_lock(&mut checks, 2, &third);
            if let Some(l3) = third.locked {
                let entry3 = f.branch_on_piece(l3, 2, bp[2]);
                chain.push(ChainLink {
                    interval: [bp[2], bp[3]],
                    rule: "periodic_endpoints".into(),
                    locked: Some(branch_label(l3)),
                    eliminated: third.eliminated.clone(),
                    left_limit: Some(entry3),
                    right_limit: Some(f.branch_on_piece(l3, 2, bp[3])),
                });
                let gap = (exit2 - entry3).norm();
                checks.push(Check::new("chain_contradiction", gap, Relation::AtLeast, MOTION_THRESHOLD));
                contradiction = Some(format!(
                    "r(4π) = {} from the left but {} from the right: |{} - {}| = {}",
                    pretty(exit2),
                    pretty(entry3),
                    pretty(exit2),
                    pretty(entry3),
                    gap
                ));
            }
        }
    }
    if chain.len() < 3 {
        checks.push(Check::new("chain_complete", chain.len() as f64, Relation::Equal, 3.0));
    }

    let mut endpoints = Vec::new();
    for p in 0..3 {
        for k in 0..f.degree() {
            endpoints.push(EndpointRow {
                branch: branch_label(k),
                interval: [bp[p], bp[p + 1]],
                start: f.branch_on_piece(k, p, bp[p]),
                end: f.branch_on_piece(k, p, bp[p + 1]),
            });
        }
    }

    let mut cert = Certificate::from_checks(f.name(), checks, chain);
    cert.contradiction = contradiction;
    cert.endpoints = endpoints;
    Ok(cert)
}

/// The three built-in obstruction certificates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certifiable {
    /// Degree 2, complex coefficients.
    Deg2c,
    /// Degree 4, real coefficients.
    Deg4r,
    /// Degree 5, real coefficients.
    Deg5r,
}

impl Certifiable {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "deg2c" => Ok(Certifiable::Deg2c),
            "deg4r" => Ok(Certifiable::Deg4r),
            "deg5r" => Ok(Certifiable::Deg5r),
            _ => Err(Error::NotFound(name.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyControls {
    pub samples: usize,
    /// Endpoint exclusion as a fraction of the interval length.
    pub eps_end_fraction: f64,
    pub track: TrackControls,
}

impl Default for CertifyControls {
    fn default() -> Self {
        CertifyControls {
            samples: DEFAULT_SAMPLES,
            eps_end_fraction: 1e-3,
            track: TrackControls::default(),
        }
    }
}

pub fn certify(which: Certifiable, c: &CertifyControls) -> Result<Certificate> {
    let eps = |f: &BranchFamily| {
        let b = f.breakpoints();
        c.eps_end_fraction * (b[1] - b[0])
    };
    match which {
        Certifiable::Deg2c => certify_deg2c(c),
        Certifiable::Deg4r => {
            let f = BranchFamily::quartic_real();
            branch_elimination_certificate(&f, c.samples, eps(&f))
        }
        Certifiable::Deg5r => {
            let f = BranchFamily::quintic_real();
            degree5_certificate_for(&f, c.samples, eps(&f))
        }
    }
}

/// Loop monodromy of `x^2 - e^{it}` (once and twice around) combined with
/// branch elimination on its branch family.
fn certify_deg2c(c: &CertifyControls) -> Result<Certificate> {
    let once = loop_permutation(&CoefficientPath::preset(Preset::QuadComplexLoop), &c.track)?;
    let twice = loop_permutation(
        &CoefficientPath::preset_on(Preset::QuadComplexLoop, [0.0, 4.0 * PI])?,
        &c.track,
    )?;
    let family = BranchFamily::quad_complex();
    let elim = branch_elimination_certificate(&family, c.samples, c.eps_end_fraction * 2.0 * PI)?;

    let fixed = once.permutation.iter().enumerate().filter(|(k, j)| k == *j).count();
    let moved_twice = twice.permutation.iter().enumerate().filter(|(k, j)| k != *j).count();
    let mut checks = vec![
        Check::new("loop_closure_defect", once.closure_defect, Relation::AtMost, CLOSURE_TOL),
        Check::new("loop_min_separation", once.s_min, Relation::Above, 0.0),
        Check::new("loop_tracking_residual", once.rho_max, Relation::AtMost, IDENTITY_TOL),
        Check::new("loop_fixed_points", fixed as f64, Relation::Equal, 0.0),
        Check::new("double_loop_moved_points", moved_twice as f64, Relation::Equal, 0.0),
    ];
    checks.extend(elim.checks.iter().cloned().map(|mut ch| {
        ch.name = format!("branches_{}", ch.name);
        ch
    }));
    let mut cert = Certificate::from_checks("quad_complex_loop", checks, elim.chain.clone());
    cert.permutation = Some(once.notation.clone());
    cert.endpoints = elim.endpoints.clone();
    if cert.is_certified() {
        cert.contradiction = Some(format!(
            "monodromy {} has no fixed point, so no continuous root survives one turn of the loop",
            once.notation
        ));
    }
    Ok(cert)
}
