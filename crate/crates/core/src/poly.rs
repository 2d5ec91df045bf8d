//! Monic polynomials stored as their ascending coefficient tuple
//! `(a_0, ..., a_{n-1})`; the leading coefficient 1 is implicit.

use serde::{Deserialize, Serialize};

use crate::{Complex, Error, Result};

/// Absolute tolerance for detecting real roots and conjugate pairs in
/// [`MonicPoly::from_roots`].
pub const TAU_REAL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldTag {
    Real,
    Complex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonicPoly {
    coeffs: Vec<Complex>,
    field: FieldTag,
}

pub(crate) fn check_finite(z: Complex, what: &str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{what} is not finite: {z}")))
    }
}

impl MonicPoly {
    /// Builds a polynomial from ascending coefficients. The field tag is
    /// `Real` exactly when every imaginary part is zero.
    pub fn new(coeffs: Vec<Complex>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("degree must be at least 1"));
        }
        for (k, a) in coeffs.iter().enumerate() {
            check_finite(*a, &format!("coefficient a_{k}"))?;
        }
        let field = if coeffs.iter().all(|a| a.im == 0.0) {
            FieldTag::Real
        } else {
            FieldTag::Complex
        };
        Ok(MonicPoly { coeffs, field })
    }

    /// Like [`MonicPoly::new`] but with an explicit field tag; `Real` rejects
    /// any nonzero imaginary part.
    pub fn with_field(coeffs: Vec<Complex>, field: FieldTag) -> Result<Self> {
        let mut p = Self::new(coeffs)?;
        match (field, p.field) {
            (FieldTag::Real, FieldTag::Complex) => Err(Error::invalid(
                "field tag 'real' requires every imaginary part to be exactly 0",
            )),
            _ => {
                p.field = field;
                Ok(p)
            }
        }
    }

    pub fn real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&a| Complex::new(a, 0.0)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    /// `1 + max_k |a_k|`, the normalisation used by [`MonicPoly::residual`].
    pub fn scale(&self) -> f64 {
        1.0 + self.coeffs.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation of `z^n + a_{n-1} z^{n-1} + ... + a_0`.
    pub fn evaluate(&self, z: Complex) -> Result<Complex> {
        check_finite(z, "evaluation point")?;
        Ok(self.eval_unchecked(z))
    }

    pub(crate) fn eval_unchecked(&self, z: Complex) -> Complex {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(1.0, 0.0), |acc, &a| acc * z + a)
    }

    /// Value, first derivative and the running-error bound
    /// `sum_k |a_k| |z|^k` (with `|a_n| = 1`) in one Horner pass.
    pub(crate) fn eval_with_derivative(&self, z: Complex) -> (Complex, Complex, f64) {
        let mut p = Complex::new(1.0, 0.0);
        let mut dp = Complex::new(0.0, 0.0);
        let mut bound = 1.0;
        let r = z.norm();
        for &a in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + a;
            bound = bound * r + a.norm();
        }
        (p, dp, bound)
    }

    /// Relative residual `|p(z)| / (1 + max_k |a_k|)`.
    pub fn residual(&self, z: Complex) -> f64 {
        self.eval_unchecked(z).norm() / self.scale()
    }

    /// Coefficients of `prod_k (z - r_k)` by incremental convolution.
    ///
    /// When every root is real or has a conjugate partner (both within
    /// [`TAU_REAL`]) the result is tagged `Real` and imaginary parts are
    /// set to exactly zero.
    pub fn from_roots(roots: &[Complex]) -> Result<Self> {
        if roots.is_empty() {
            return Err(Error::invalid("from_roots needs at least one root"));
        }
        for r in roots {
            check_finite(*r, "root")?;
        }
        // c holds prod (z - r) in ascending order, including the leading 1.
        let mut c = vec![Complex::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex::new(0.0, 0.0); c.len() + 1];
            for (k, &ck) in c.iter().enumerate() {
                next[k + 1] += ck;
                next[k] -= r * ck;
            }
            c = next;
        }
        c.pop();
        if conjugate_closed(roots, TAU_REAL) {
            for a in c.iter_mut() {
                a.im = 0.0;
            }
            Ok(MonicPoly {
                coeffs: c,
                field: FieldTag::Real,
            })
        } else {
            Ok(MonicPoly {
                coeffs: c,
                field: FieldTag::Complex,
            })
        }
    }

    /// Largest coefficientwise distance `max_k |a_k - b_k|`.
    pub fn coeff_distance(&self, other: &MonicPoly) -> f64 {
        debug_assert_eq!(self.degree(), other.degree());
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// True when the multiset splits into real entries and conjugate pairs.
pub fn conjugate_closed(roots: &[Complex], tol: f64) -> bool {
    let mut used = vec![false; roots.len()];
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let z = roots[i];
        if z.im.abs() <= tol {
            continue;
        }
        let target = z.conj();
        let partner = (0..roots.len())
            .filter(|&j| !used[j])
            .map(|j| (j, (roots[j] - target).norm()))
            .filter(|&(_, d)| d <= tol)
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match partner {
            Some((j, _)) => used[j] = true,
            None => return false,
        }
    }
    true
}

/// Unordered roots of a polynomial together with cluster information.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootMultiset {
    pub roots: Vec<Complex>,
    /// Mutual distance below which two roots count as one cluster.
    pub cluster_radius: f64,
    /// `clustered[k]` is set when root `k` lies within `cluster_radius` of
    /// another root.
    pub clustered: Vec<bool>,
}

impl RootMultiset {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn has_cluster(&self) -> bool {
        self.clustered.iter().any(|&c| c)
    }

    pub fn max_real_part(&self) -> f64 {
        self.roots
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Minimum pairwise distance; infinite for fewer than two points.
pub fn min_separation(points: &[Complex]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            best = best.min((points[i] - points[j]).norm());
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn evaluate_examples() {
        let p = MonicPoly::real(&[-1.0, 0.0]).unwrap();
        assert_eq!(p.evaluate(c(1.0, 0.0)).unwrap(), c(0.0, 0.0));
        let q = MonicPoly::real(&[1.0, 0.0]).unwrap();
        assert_eq!(q.evaluate(c(0.0, 1.0)).unwrap(), c(0.0, 0.0));
        let quartic = MonicPoly::real(&[0.0, 0.0, 4.0, 0.0]).unwrap();
        assert_abs_diff_eq!(quartic.evaluate(c(0.0, 2.0)).unwrap().norm(), 0.0);
    }

    #[test]
    fn evaluate_rejects_non_finite() {
        let p = MonicPoly::real(&[-1.0, 0.0]).unwrap();
        assert!(matches!(
            p.evaluate(c(f64::NAN, 0.0)),
            Err(Error::InvalidInput(_))
        ));
        assert!(MonicPoly::real(&[f64::INFINITY]).is_err());
        assert!(MonicPoly::new(vec![]).is_err());
    }

    #[test]
    fn from_roots_examples() {
        let p = MonicPoly::from_roots(&[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        assert_eq!(p.coeffs(), &[c(-1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(p.field(), FieldTag::Real);

        let q = MonicPoly::from_roots(&[c(0.0, 1.0), c(0.0, -1.0)]).unwrap();
        assert_eq!(q.coeffs(), &[c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(q.field(), FieldTag::Real);

        // (x^2)(x^2 + 4)
        let quartic =
            MonicPoly::from_roots(&[c(0.0, 0.0), c(0.0, 2.0), c(0.0, 0.0), c(0.0, -2.0)])
                .unwrap();
        let expect = [0.0, 0.0, 4.0, 0.0];
        for (a, e) in quartic.coeffs().iter().zip(expect) {
            assert_eq!(*a, c(e, 0.0));
        }
    }

    #[test]
    fn from_roots_complex_tag() {
        let p = MonicPoly::from_roots(&[c(0.0, 1.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(p.field(), FieldTag::Complex);
        assert!(MonicPoly::from_roots(&[]).is_err());
    }

    #[test]
    fn residual_examples() {
        let p = MonicPoly::real(&[-1.0, 0.0]).unwrap();
        assert_eq!(p.residual(c(1.0, 0.0)), 0.0);
        assert_eq!(p.residual(c(0.0, 0.0)), 0.5);
        let q = MonicPoly::real(&[1.0, 0.0]).unwrap();
        assert_eq!(q.residual(c(1.0, 0.0)), 1.0);
    }

    #[test]
    fn field_tag_validation() {
        assert!(MonicPoly::with_field(vec![c(1.0, 1e-300)], FieldTag::Real).is_err());
        let p = MonicPoly::with_field(vec![c(1.0, 0.0)], FieldTag::Complex).unwrap();
        assert_eq!(p.field(), FieldTag::Complex);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let p = MonicPoly::new(vec![c(1.0, -2.0), c(0.5, 0.0), c(-3.0, 1.0)]).unwrap();
        let z = c(0.7, -0.3);
        let (v, dv, _) = p.eval_with_derivative(z);
        assert_abs_diff_eq!((v - p.eval_unchecked(z)).norm(), 0.0, epsilon = 1e-15);
        let h = 1e-6;
        let fd = (p.eval_unchecked(z + h) - p.eval_unchecked(z - h)) / (2.0 * h);
        assert_abs_diff_eq!((fd - dv).norm(), 0.0, epsilon = 1e-8);
    }
}
