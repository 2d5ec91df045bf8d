//! Minimal-total-cost perfect assignment (Hungarian method with potentials,
//! O(n^3)) and the root-matching helpers built on it.

use crate::Complex;

/// Solves the square assignment problem for `cost[row][col]`.
///
/// Returns `col_of_row` with `col_of_row[i]` the column assigned to row `i`,
/// and the total cost.
pub fn min_cost_assignment(cost: &[Vec<f64>]) -> (Vec<usize>, f64) {
    let n = cost.len();
    if n == 0 {
        return (Vec::new(), 0.0);
    }
    assert!(cost.iter().all(|r| r.len() == n), "cost matrix must be square");

    // 1-based arrays; index 0 is the virtual root of the alternating tree.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut row_of_col = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        row_of_col[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of_col[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of_col[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of_col[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of_col[j0] = row_of_col[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut col_of_row = vec![0; n];
    for j in 1..=n {
        col_of_row[row_of_col[j] - 1] = j - 1;
    }
    let total = col_of_row
        .iter()
        .enumerate()
        .map(|(i, &j)| cost[i][j])
        .sum();
    (col_of_row, total)
}

/// Reorders `candidates` so that slot `k` continues `reference[k]`, minimising
/// the total Euclidean displacement.
///
/// Returns the reordered values and `source`, where `source[k]` is the index
/// in `candidates` placed into slot `k`.
pub fn match_to_reference(reference: &[Complex], candidates: &[Complex]) -> (Vec<Complex>, Vec<usize>) {
    assert_eq!(reference.len(), candidates.len());
    let cost: Vec<Vec<f64>> = reference
        .iter()
        .map(|r| candidates.iter().map(|c| (r - c).norm()).collect())
        .collect();
    let (source, _) = min_cost_assignment(&cost);
    let ordered = source.iter().map(|&j| candidates[j]).collect();
    (ordered, source)
}

/// Largest pairwise distance under the minimal-total-distance matching of two
/// equally sized multisets.
pub fn multiset_distance(a: &[Complex], b: &[Complex]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let (ordered, _) = match_to_reference(a, b);
    a.iter()
        .zip(&ordered)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;
    use proptest::prelude::*;

    fn brute_force(cost: &[Vec<f64>]) -> f64 {
        let n = cost.len();
        (0..n)
            .permutations(n)
            .map(|p| p.iter().enumerate().map(|(i, &j)| cost[i][j]).sum::<f64>())
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn small_known_instance() {
        let cost = vec![
            vec![4.0, 1.0, 3.0],
            vec![2.0, 0.0, 5.0],
            vec![3.0, 2.0, 2.0],
        ];
        let (assign, total) = min_cost_assignment(&cost);
        assert_eq!(total, 5.0);
        assert_eq!(assign, vec![1, 0, 2]);
    }

    #[test]
    fn empty_matrix() {
        assert_eq!(min_cost_assignment(&[]), (vec![], 0.0));
    }

    #[test]
    fn matching_undoes_shuffle() {
        let reference = vec![
            Complex::new(1.0, 0.0),
            Complex::new(0.0, 1.0),
            Complex::new(-1.0, 0.0),
        ];
        let shuffled = vec![
            reference[2] + 0.01,
            reference[0] - 0.01,
            reference[1] * 1.001,
        ];
        let (ordered, source) = match_to_reference(&reference, &shuffled);
        assert_eq!(source, vec![1, 2, 0]);
        assert!(multiset_distance(&reference, &ordered) < 0.02);
    }

    proptest! {
        #[test]
        fn hungarian_matches_brute_force(
            n in 1usize..7,
            entries in proptest::collection::vec(0.0f64..10.0, 36)
        ) {
            let cost: Vec<Vec<f64>> = (0..n).map(|i| entries[i * 6..i * 6 + n].to_vec()).collect();
            let (assign, total) = min_cost_assignment(&cost);
            let mut seen = assign.clone();
            seen.sort();
            prop_assert_eq!(seen, (0..n).collect::<Vec<_>>());
            prop_assert!((total - brute_force(&cost)).abs() < 1e-9);
        }
    }
}
