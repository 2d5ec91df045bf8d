//! One-parameter coefficient paths `t -> (a_0(t), ..., a_{n-1}(t))` on a
//! closed interval.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::monodromy::BranchFamily;
use crate::poly::{FieldTag, MonicPoly};
use crate::{Complex, Error, Result};

/// Closed-form coefficient presets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Preset {
    /// `x^2 - e^{it}` on `[0, 2pi]`.
    QuadComplexLoop,
    /// `x^4 + 2(1 + cos t) x^2 - 4 sin t x + 2(1 - cos t)` on `[0, 2pi]`.
    QuarticRealLoop,
    /// Piecewise degree-5 family on `[0, 6pi]`, coefficients from its
    /// branch table.
    QuinticRealFamily,
    /// `x^n - 1`, constant in `t`, on `[0, 2pi]`.
    ConstantLoop { n: usize },
    /// `x^3 - t x` on `[-1, 1]`; three roots meet at `t = 0`.
    CubicFold,
}

impl Preset {
    pub fn name(&self) -> String {
        match self {
            Preset::QuadComplexLoop => "quad_complex_loop".into(),
            Preset::QuarticRealLoop => "quartic_real_loop".into(),
            Preset::QuinticRealFamily => "quintic_real_family".into(),
            Preset::ConstantLoop { n } => format!("constant_loop:{n}"),
            Preset::CubicFold => "cubic_fold".into(),
        }
    }

    /// Accepts the plain names plus `constant_loop:N` / `constant_loop(N)`.
    pub fn parse(name: &str) -> Result<Preset> {
        let simple = match name {
            "quad_complex_loop" => Some(Preset::QuadComplexLoop),
            "quartic_real_loop" => Some(Preset::QuarticRealLoop),
            "quintic_real_family" => Some(Preset::QuinticRealFamily),
            "cubic_fold" => Some(Preset::CubicFold),
            _ => None,
        };
        if let Some(p) = simple {
            return Ok(p);
        }
        let arg = name
            .strip_prefix("constant_loop:")
            .or_else(|| {
                name.strip_prefix("constant_loop(")
                    .and_then(|s| s.strip_suffix(')'))
            })
            .ok_or_else(|| Error::NotFound(name.to_string()))?;
        match arg.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Preset::ConstantLoop { n }),
            _ => Err(Error::NotFound(name.to_string())),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Preset::QuadComplexLoop => 2,
            Preset::QuarticRealLoop => 4,
            Preset::QuinticRealFamily => 5,
            Preset::ConstantLoop { n } => *n,
            Preset::CubicFold => 3,
        }
    }

    pub fn domain(&self) -> [f64; 2] {
        match self {
            Preset::QuinticRealFamily => [0.0, 6.0 * PI],
            Preset::CubicFold => [-1.0, 1.0],
            _ => [0.0, 2.0 * PI],
        }
    }

    pub fn field(&self) -> FieldTag {
        match self {
            Preset::QuadComplexLoop => FieldTag::Complex,
            _ => FieldTag::Real,
        }
    }

    fn coeffs(&self, t: f64) -> Vec<Complex> {
        let re = |v: f64| Complex::new(v, 0.0);
        match self {
            Preset::QuadComplexLoop => vec![-Complex::from_polar(1.0, t), re(0.0)],
            Preset::QuarticRealLoop => vec![
                re(2.0 * (1.0 - t.cos())),
                re(-4.0 * t.sin()),
                re(2.0 * (1.0 + t.cos())),
                re(0.0),
            ],
            Preset::QuinticRealFamily => {
                let fam = BranchFamily::quintic_real();
                fam.coefficients(t).coeffs().to_vec()
            }
            Preset::ConstantLoop { n } => {
                let mut c = vec![re(0.0); *n];
                c[0] = re(-1.0);
                c
            }
            Preset::CubicFold => vec![re(0.0), re(-t), re(0.0)],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Knot {
    pub t: f64,
    pub coeffs: Vec<Complex>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PathSource {
    Preset(Preset),
    /// Linear interpolation between knots with strictly increasing `t`.
    Sampled(Vec<Knot>),
    /// Coefficients of `prod (x - x_k(t))` for a branch family.
    Branches(BranchFamily),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientPath {
    degree: usize,
    domain: [f64; 2],
    source: PathSource,
    field: FieldTag,
    reversed: bool,
}

impl CoefficientPath {
    pub fn preset(preset: Preset) -> Self {
        Self::preset_on(preset, preset.domain()).expect("preset domains are valid")
    }

    /// A preset evaluated on a caller-chosen interval, e.g. a loop traversed
    /// twice.
    pub fn preset_on(preset: Preset, domain: [f64; 2]) -> Result<Self> {
        check_domain(domain)?;
        Ok(CoefficientPath {
            degree: preset.degree(),
            domain,
            source: PathSource::Preset(preset),
            field: preset.field(),
            reversed: false,
        })
    }

    pub fn sampled(degree: usize, field: FieldTag, knots: Vec<Knot>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::invalid("path degree must be at least 1"));
        }
        if knots.len() < 2 {
            return Err(Error::invalid("a sampled path needs at least 2 knots"));
        }
        for (i, k) in knots.iter().enumerate() {
            if !k.t.is_finite() {
                return Err(Error::invalid(format!("samples[{i}].t is not finite")));
            }
            if k.coeffs.len() != degree {
                return Err(Error::invalid(format!(
                    "samples[{i}].coeffs has {} entries, expected {degree}",
                    k.coeffs.len()
                )));
            }
            for (j, a) in k.coeffs.iter().enumerate() {
                if !(a.re.is_finite() && a.im.is_finite()) {
                    return Err(Error::invalid(format!("samples[{i}].coeffs[{j}] is not finite")));
                }
                if field == FieldTag::Real && a.im != 0.0 {
                    return Err(Error::invalid(format!(
                        "samples[{i}].coeffs[{j}] has nonzero imaginary part in a real path"
                    )));
                }
            }
            if i > 0 && k.t <= knots[i - 1].t {
                return Err(Error::invalid(format!(
                    "samples[{i}].t = {} does not exceed samples[{}].t = {}",
                    k.t,
                    i - 1,
                    knots[i - 1].t
                )));
            }
        }
        let domain = [knots[0].t, knots[knots.len() - 1].t];
        Ok(CoefficientPath {
            degree,
            domain,
            source: PathSource::Sampled(knots),
            field,
            reversed: false,
        })
    }

    pub fn from_family(family: BranchFamily) -> Self {
        CoefficientPath {
            degree: family.degree(),
            domain: family.domain(),
            field: family.field(),
            source: PathSource::Branches(family),
            reversed: false,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn domain(&self) -> [f64; 2] {
        self.domain
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn source(&self) -> &PathSource {
        &self.source
    }

    /// The same path traversed from `beta` back to `alpha`, reparametrised
    /// onto the same interval.
    pub fn reversed(&self) -> Self {
        CoefficientPath {
            reversed: !self.reversed,
            ..self.clone()
        }
    }

    pub fn coeffs_at(&self, t: f64) -> Vec<Complex> {
        let [a, b] = self.domain;
        let t = if self.reversed { a + b - t } else { t };
        let t = t.clamp(a, b);
        match &self.source {
            PathSource::Preset(p) => p.coeffs(t),
            PathSource::Sampled(knots) => interpolate(knots, t),
            PathSource::Branches(f) => f.coefficients(t).coeffs().to_vec(),
        }
    }

    pub fn poly_at(&self, t: f64) -> Result<MonicPoly> {
        let coeffs = self.coeffs_at(t);
        match self.field {
            FieldTag::Real => MonicPoly::with_field(
                coeffs.into_iter().map(|a| Complex::new(a.re, 0.0)).collect(),
                FieldTag::Real,
            ),
            FieldTag::Complex => MonicPoly::with_field(coeffs, FieldTag::Complex),
        }
    }

    /// `max_k |a_k(alpha) - a_k(beta)|`.
    pub fn closure_defect(&self) -> f64 {
        let a = self.coeffs_at(self.domain[0]);
        let b = self.coeffs_at(self.domain[1]);
        a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }
}

fn check_domain(domain: [f64; 2]) -> Result<()> {
    if domain[0].is_finite() && domain[1].is_finite() && domain[0] < domain[1] {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "path domain [{}, {}] must satisfy alpha < beta",
            domain[0], domain[1]
        )))
    }
}

fn interpolate(knots: &[Knot], t: f64) -> Vec<Complex> {
    let idx = knots.partition_point(|k| k.t <= t);
    if idx == 0 {
        return knots[0].coeffs.clone();
    }
    if idx == knots.len() {
        return knots[knots.len() - 1].coeffs.clone();
    }
    let (k0, k1) = (&knots[idx - 1], &knots[idx]);
    let w = (t - k0.t) / (k1.t - k0.t);
    k0.coeffs
        .iter()
        .zip(&k1.coeffs)
        .map(|(a, b)| a * (1.0 - w) + b * w)
        .collect()
}

/// On-disk path description:
/// `{"degree": n, "field": "real"|"complex", "samples": [{"t": .., "coeffs": [[re, im], ..]}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathFile {
    pub degree: usize,
    pub field: FieldTag,
    pub samples: Vec<PathFileSample>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathFileSample {
    pub t: f64,
    pub coeffs: Vec<[f64; 2]>,
}

impl PathFile {
    /// Parses and validates; errors name the offending line/column or field.
    pub fn parse(text: &str) -> Result<CoefficientPath> {
        let file: PathFile = serde_json::from_str(text).map_err(|e| {
            Error::invalid(format!(
                "path file line {} column {}: {e}",
                e.line(),
                e.column()
            ))
        })?;
        file.into_path()
    }

    pub fn into_path(self) -> Result<CoefficientPath> {
        let knots = self
            .samples
            .into_iter()
            .map(|s| Knot {
                t: s.t,
                coeffs: s.coeffs.iter().map(|c| Complex::new(c[0], c[1])).collect(),
            })
            .collect();
        CoefficientPath::sampled(self.degree, self.field, knots)
    }
}
