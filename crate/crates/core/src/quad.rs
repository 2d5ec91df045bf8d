//! Continuous root selectors of the real quadratic family `z^2 + a1 z + a0`.
//!
//! The coefficient plane splits by the sign of `D = a1^2 - 4 a0` into the
//! plus region (two real roots), the parabola `D = 0` and the minus region
//! (a conjugate pair). A selector is indexed by a set `X` of off-parabola
//! points: inside `X` it takes the root with sign `-1` in front of the
//! square root, outside it takes `+1`. Exactly four such sets give a
//! continuous selector.

use serde::{Deserialize, Serialize};

use crate::gauge::HolderReport;
use crate::{Complex, Error, Result};

/// Dead zone for the half-space sign `sigma`.
pub const SIGMA_DEAD_ZONE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionLabel {
    PlusRegion,
    Parabola,
    MinusRegion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SelectorId {
    /// `X = {}`
    EmptySet,
    /// `X` = plus region ∪ minus region
    FullSet,
    /// `X` = plus region
    PlusSet,
    /// `X` = minus region
    MinusSet,
}

impl SelectorId {
    pub const ALL: [SelectorId; 4] = [
        SelectorId::EmptySet,
        SelectorId::FullSet,
        SelectorId::PlusSet,
        SelectorId::MinusSet,
    ];

    pub fn complement(self) -> SelectorId {
        match self {
            SelectorId::EmptySet => SelectorId::FullSet,
            SelectorId::FullSet => SelectorId::EmptySet,
            SelectorId::PlusSet => SelectorId::MinusSet,
            SelectorId::MinusSet => SelectorId::PlusSet,
        }
    }

    /// Membership of an off-parabola point in the indexing set.
    pub fn contains(self, region: RegionLabel) -> bool {
        match (self, region) {
            (_, RegionLabel::Parabola) => false,
            (SelectorId::EmptySet, _) => false,
            (SelectorId::FullSet, _) => true,
            (SelectorId::PlusSet, r) => r == RegionLabel::PlusRegion,
            (SelectorId::MinusSet, r) => r == RegionLabel::MinusRegion,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SelectorId::EmptySet => "empty",
            SelectorId::FullSet => "full",
            SelectorId::PlusSet => "plus",
            SelectorId::MinusSet => "minus",
        }
    }

    pub fn parse(name: &str) -> Option<SelectorId> {
        SelectorId::ALL.into_iter().find(|s| s.name() == name)
    }
}

pub fn discriminant(a0: f64, a1: f64) -> f64 {
    a1 * a1 - 4.0 * a0
}

/// Strict sign of the discriminant; `Parabola` only on an exact zero.
pub fn classify(a0: f64, a1: f64) -> RegionLabel {
    let d = discriminant(a0, a1);
    if d > 0.0 {
        RegionLabel::PlusRegion
    } else if d < 0.0 {
        RegionLabel::MinusRegion
    } else {
        RegionLabel::Parabola
    }
}

fn check_point(a0: f64, a1: f64) -> Result<()> {
    if a0.is_finite() && a1.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("coefficients ({a0}, {a1}) are not finite")))
    }
}

/// Root with sign `s` in front of the square root; `s = 0` on the parabola.
fn root_with_sign(a0: f64, a1: f64, s: f64) -> Complex {
    let d = discriminant(a0, a1);
    match classify(a0, a1) {
        RegionLabel::PlusRegion => Complex::new(-a1 / 2.0 + s * d.sqrt() / 2.0, 0.0),
        RegionLabel::MinusRegion => Complex::new(-a1 / 2.0, s * (-d).sqrt() / 2.0),
        RegionLabel::Parabola => Complex::new(-a1 / 2.0, 0.0),
    }
}

fn sign_for(member: bool, region: RegionLabel) -> f64 {
    match region {
        RegionLabel::Parabola => 0.0,
        _ if member => -1.0,
        _ => 1.0,
    }
}

/// Value of the canonical selector `sel` at `(a0, a1)`.
pub fn xi_root(sel: SelectorId, a0: f64, a1: f64) -> Result<Complex> {
    check_point(a0, a1)?;
    let region = classify(a0, a1);
    Ok(root_with_sign(a0, a1, sign_for(sel.contains(region), region)))
}

/// A selector given by an explicit membership rule rather than one of the
/// four canonical sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CustomSelector {
    /// Listed points are members; every other point is not.
    Members { points: Vec<[f64; 2]> },
    /// Only the listed points are defined.
    Table { entries: Vec<TableEntry> },
    /// Membership of a canonical set.
    Canonical { id: SelectorId },
    /// Members are the points with `normal . (a0, a1) > offset`.
    HalfPlane { normal: [f64; 2], offset: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    pub point: [f64; 2],
    pub member: bool,
}

impl CustomSelector {
    pub fn membership(&self, a0: f64, a1: f64) -> Result<bool> {
        match self {
            CustomSelector::Members { points } => Ok(points.contains(&[a0, a1])),
            CustomSelector::Table { entries } => entries
                .iter()
                .find(|e| e.point == [a0, a1])
                .map(|e| e.member)
                .ok_or_else(|| {
                    Error::invalid(format!("selector table is undefined at ({a0}, {a1})"))
                }),
            CustomSelector::Canonical { id } => Ok(id.contains(classify(a0, a1))),
            CustomSelector::HalfPlane { normal, offset } => {
                Ok(normal[0] * a0 + normal[1] * a1 > *offset)
            }
        }
    }
}

pub fn custom_root(sel: &CustomSelector, a0: f64, a1: f64) -> Result<Complex> {
    check_point(a0, a1)?;
    let region = classify(a0, a1);
    let member = match region {
        RegionLabel::Parabola => false,
        _ => sel.membership(a0, a1)?,
    };
    Ok(root_with_sign(a0, a1, sign_for(member, region)))
}

/// Unordered pair of selectors whose values factor every quadratic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullRootSet {
    pub first: SelectorId,
    pub second: SelectorId,
}

impl FullRootSet {
    pub fn of(first: SelectorId) -> Self {
        FullRootSet {
            first,
            second: first.complement(),
        }
    }

    pub fn values(&self, a0: f64, a1: f64) -> Result<(Complex, Complex)> {
        Ok((xi_root(self.first, a0, a1)?, xi_root(self.second, a0, a1)?))
    }
}

/// The four continuous selectors and the two complete sets they form.
pub fn enumerate_continuous() -> (Vec<SelectorId>, Vec<FullRootSet>) {
    (
        SelectorId::ALL.to_vec(),
        vec![
            FullRootSet::of(SelectorId::EmptySet),
            FullRootSet::of(SelectorId::PlusSet),
        ],
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessVerdict {
    Discontinuous,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub verdict: WitnessVerdict,
    pub region: RegionLabel,
    pub points: [[f64; 2]; 2],
    pub roots: [Complex; 2],
    /// Side of the separating half-space at each point: -1, 0 (dead zone) or +1.
    pub sigma: [i8; 2],
}

fn sigma(region: RegionLabel, a1: f64, root: Complex) -> i8 {
    // In the plus region the two roots sit on opposite sides of -a1/2 on the
    // real line; in the minus region on opposite sides of the real axis.
    let v = match region {
        RegionLabel::PlusRegion => 2.0 * root.re + a1,
        _ => 2.0 * root.im,
    };
    if v.abs() < SIGMA_DEAD_ZONE {
        0
    } else if v > 0.0 {
        1
    } else {
        -1
    }
}

/// Two-point discontinuity test for a custom selector.
///
/// Both points must lie in the same open region. The region is path
/// connected and the selector's graph over it falls into two disjoint open
/// half-spaces; opposite signs at the two points therefore rule out
/// continuity.
pub fn discontinuity_witness(
    sel: &CustomSelector,
    m1: [f64; 2],
    m2: [f64; 2],
) -> Result<WitnessReport> {
    let r1 = classify(m1[0], m1[1]);
    let r2 = classify(m2[0], m2[1]);
    if r1 == RegionLabel::Parabola || r1 != r2 {
        return Err(Error::invalid(format!(
            "witness points must lie in one open region, got {r1:?} and {r2:?}"
        )));
    }
    let z1 = custom_root(sel, m1[0], m1[1])?;
    let z2 = custom_root(sel, m2[0], m2[1])?;
    let s = [sigma(r1, m1[1], z1), sigma(r2, m2[1], z2)];
    let verdict = if s[0] != 0 && s[0] == -s[1] {
        WitnessVerdict::Discontinuous
    } else {
        WitnessVerdict::Inconclusive
    };
    Ok(WitnessReport {
        verdict,
        region: r1,
        points: [m1, m2],
        roots: [z1, z2],
        sigma: s,
    })
}

/// Searches a sample for a sign-flip pair inside one region.
pub fn find_witness(sel: &CustomSelector, sample: &[[f64; 2]]) -> Result<Option<WitnessReport>> {
    for region in [RegionLabel::PlusRegion, RegionLabel::MinusRegion] {
        let mut first: [Option<[f64; 2]>; 2] = [None, None];
        for &m in sample.iter().filter(|m| classify(m[0], m[1]) == region) {
            let z = custom_root(sel, m[0], m[1])?;
            match sigma(region, m[1], z) {
                -1 if first[0].is_none() => first[0] = Some(m),
                1 if first[1].is_none() => first[1] = Some(m),
                _ => {}
            }
            if let [Some(a), Some(b)] = first {
                return discontinuity_witness(sel, a, b).map(Some);
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub a0: [f64; 2],
    pub a1: [f64; 2],
}

impl Rect {
    pub fn new(a0_lo: f64, a0_hi: f64, a1_lo: f64, a1_hi: f64) -> Result<Self> {
        let ok = [a0_lo, a0_hi, a1_lo, a1_hi].iter().all(|v| v.is_finite())
            && a0_lo <= a0_hi
            && a1_lo <= a1_hi;
        if !ok {
            return Err(Error::invalid("box bounds must be finite with lo <= hi"));
        }
        Ok(Rect {
            a0: [a0_lo, a0_hi],
            a1: [a1_lo, a1_hi],
        })
    }

    pub fn contains(&self, a0: f64, a1: f64) -> bool {
        (self.a0[0]..=self.a0[1]).contains(&a0) && (self.a1[0]..=self.a1[1]).contains(&a1)
    }
}

pub(crate) fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![lo],
        _ => (0..count)
            .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadRow {
    pub a0: f64,
    pub a1: f64,
    pub region: RegionLabel,
    pub root: Complex,
}

/// Selector values over a `grid x grid` lattice including the box corners.
pub fn grid_scan(sel: SelectorId, rect: &Rect, grid: usize) -> Vec<QuadRow> {
    let xs = linspace(rect.a0[0], rect.a0[1], grid);
    let ys = linspace(rect.a1[0], rect.a1[1], grid);
    let mut rows = Vec::with_capacity(grid * grid);
    for &a0 in &xs {
        for &a1 in &ys {
            let region = classify(a0, a1);
            rows.push(QuadRow {
                a0,
                a1,
                region,
                root: root_with_sign(a0, a1, sign_for(sel.contains(region), region)),
            });
        }
    }
    rows
}

/// Jump `|r(m) - r(m0)|` of a canonical selector.
pub fn selector_jump(sel: SelectorId, m0: [f64; 2], m: [f64; 2]) -> Result<f64> {
    Ok((xi_root(sel, m[0], m[1])? - xi_root(sel, m0[0], m0[1])?).norm())
}

const SCAN_DIRECTIONS: usize = 16;
const SCAN_LEVELS: i32 = 12;

/// Fits the smallest `C` with `|r(M) - r(M0)| <= C |M - M0|^(1/2)` over
/// parabola points `M0` and approach sequences from all directions (so from
/// both open regions) and along the parabola itself.
pub fn continuity_scan(sel: SelectorId, rect: &Rect, grid: usize) -> Result<HolderReport> {
    if grid < 2 {
        return Err(Error::invalid("continuity scan needs grid >= 2"));
    }
    let spacing = (rect.a0[1] - rect.a0[0]).max(rect.a1[1] - rect.a1[0]) / grid as f64;
    let mut best = 0.0f64;
    let mut argmax = vec![0.0; 4];
    let mut samples = 0usize;
    for y in linspace(rect.a1[0], rect.a1[1], grid) {
        let m0 = [y * y / 4.0, y];
        if !rect.contains(m0[0], m0[1]) {
            continue;
        }
        for level in 0..SCAN_LEVELS {
            let rho = spacing * 2f64.powi(-level);
            let mut approaches: Vec<[f64; 2]> = (0..SCAN_DIRECTIONS)
                .map(|k| {
                    let th = 2.0 * std::f64::consts::PI * k as f64 / SCAN_DIRECTIONS as f64;
                    [m0[0] + rho * th.cos(), m0[1] + rho * th.sin()]
                })
                .collect();
            for dy in [rho, -rho] {
                approaches.push([(y + dy) * (y + dy) / 4.0, y + dy]);
            }
            for m in approaches {
                if !rect.contains(m[0], m[1]) {
                    continue;
                }
                let dist = ((m[0] - m0[0]).powi(2) + (m[1] - m0[1]).powi(2)).sqrt();
                if dist == 0.0 {
                    continue;
                }
                samples += 1;
                let ratio = selector_jump(sel, m0, m)? / dist.sqrt();
                if ratio > best {
                    best = ratio;
                    argmax = vec![m0[0], m0[1], m[0], m[1]];
                }
            }
        }
    }
    Ok(HolderReport {
        exponent: 0.5,
        max_constant: best,
        refined_constant: None,
        argmax,
        samples,
    })
}
