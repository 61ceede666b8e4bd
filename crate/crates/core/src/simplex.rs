//! Dense exact-rational simplex for packing LPs `max 1·x` s.t. `A x <= 1`, `x >= 0`
//! with a 0/1 matrix `A`. Bland's rule for both entering and leaving variables.

use num_traits::{One, Signed, Zero};

use crate::combinatorics::Rational;

/// Optimal primal `x` and dual `y` (from the slack reduced costs).
#[derive(Debug, Clone)]
pub(crate) struct PackingOptimum {
    pub x: Vec<Rational>,
    pub y: Vec<Rational>,
    pub value: Rational,
}

/// `columns[j]` lists the rows where column `j` has a 1; `rows` is the row count.
pub(crate) fn solve_packing(rows: usize, columns: &[Vec<usize>]) -> PackingOptimum {
    let cols = columns.len();
    let width = cols + rows;
    let mut tab: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let mut r = vec![Rational::zero(); width + 1];
            r[cols + i] = Rational::one();
            r[width] = Rational::one();
            r
        })
        .collect();
    for (j, col) in columns.iter().enumerate() {
        for &i in col {
            tab[i][j] = Rational::one();
        }
    }
    // Reduced costs; the last entry holds minus the objective value.
    let mut z = vec![Rational::zero(); width + 1];
    for zj in z.iter_mut().take(cols) {
        *zj = Rational::one();
    }
    let mut basis: Vec<usize> = (cols..width).collect();

    loop {
        let Some(enter) = (0..width).find(|&j| z[j].is_positive()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..rows {
            if !tab[i][enter].is_positive() {
                continue;
            }
            let r = &tab[i][width] / &tab[i][enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => r < *lr || (r == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, r));
            }
        }
        // Packing LPs are bounded: every column has a positive entry.
        let (pr, _) = leave.expect("packing LP is bounded");
        pivot(&mut tab, &mut z, pr, enter);
        basis[pr] = enter;
    }

    let mut x = vec![Rational::zero(); cols];
    for (i, &b) in basis.iter().enumerate() {
        if b < cols {
            x[b] = tab[i][width].clone();
        }
    }
    let y = (0..rows).map(|i| -&z[cols + i]).collect();
    PackingOptimum {
        x,
        y,
        value: -&z[width],
    }
}

fn pivot(tab: &mut [Vec<Rational>], z: &mut [Rational], pr: usize, pc: usize) {
    let inv = Rational::one() / &tab[pr][pc];
    let nz: Vec<usize> = (0..tab[pr].len())
        .filter(|&j| !tab[pr][j].is_zero())
        .collect();
    for &j in &nz {
        tab[pr][j] = &tab[pr][j] * &inv;
    }
    let prow = tab[pr].clone();
    for (i, row) in tab.iter_mut().enumerate() {
        if i == pr || row[pc].is_zero() {
            continue;
        }
        let f = row[pc].clone();
        for &j in &nz {
            row[j] = &row[j] - &f * &prow[j];
        }
    }
    if !z[pc].is_zero() {
        let f = z[pc].clone();
        for &j in &nz {
            z[j] = &z[j] - &f * &prow[j];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{int, ratio};

    #[test]
    fn triangle_packing() {
        // rows = vertices of a triangle, columns = its edges: optimum 3/2
        let cols = vec![vec![0, 1], vec![0, 2], vec![1, 2]];
        let opt = solve_packing(3, &cols);
        assert_eq!(opt.value, ratio(3, 2));
        assert!(opt.x.iter().all(|v| *v == ratio(1, 2)));
        assert!(opt.y.iter().all(|v| *v == ratio(1, 2)));
    }

    #[test]
    fn degenerate_cases() {
        let opt = solve_packing(4, &[]);
        assert_eq!(opt.value, int(0));
        assert!(opt.y.iter().all(|v| v.is_zero()));
        let opt = solve_packing(3, &[vec![0, 1, 2]]);
        assert_eq!(opt.value, int(1));
        assert_eq!(opt.x, vec![int(1)]);
        assert_eq!(opt.y.iter().sum::<Rational>(), int(1));
    }
}
