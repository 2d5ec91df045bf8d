//! Fixtures shared by the benchmarks.

use rootlab::{Complex, MonicPoly};

/// Monic polynomial of degree `n` with simple roots spread over a spiral.
pub fn spiral_poly(n: usize) -> MonicPoly {
    let roots: Vec<Complex> = (0..n)
        .map(|k| {
            let r = 0.5 + k as f64 / n as f64;
            Complex::from_polar(r, 2.399_963 * k as f64)
        })
        .collect();
    MonicPoly::from_roots(&roots).expect("finite roots")
}
