//! Fraction-free determinants of polynomial matrices.

use super::poly::HermitianPoly;

/// Determinant by Bareiss elimination. Every division in the recurrence is
/// exact, so the whole computation stays in the polynomial ring; a zero
/// pivot is handled by a row swap.
pub fn poly_matrix_det(m: &[Vec<HermitianPoly>]) -> HermitianPoly {
    let n = m.len();
    assert!(m.iter().all(|row| row.len() == n), "matrix must be square");
    if n == 0 {
        panic!("empty matrix has no variable count");
    }
    let nvars = m[0][0].nvars();
    let mut a: Vec<Vec<HermitianPoly>> = m.to_vec();
    let mut sign_flip = false;
    let mut prev = HermitianPoly::one(nvars);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return HermitianPoly::zero(nvars),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = t.exact_divide(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = HermitianPoly::zero(nvars);
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign_flip {
        d.neg_ref()
    } else {
        d
    }
}

/// Adjugate matrix: `adj[i][j] = (−1)^{i+j} det(minor_{j,i})`, so that
/// `adj · m = m · adj = det(m)·I`.
pub fn poly_matrix_adjugate(m: &[Vec<HermitianPoly>]) -> Vec<Vec<HermitianPoly>> {
    let n = m.len();
    let nvars = m[0][0].nvars();
    if n == 1 {
        return vec![vec![HermitianPoly::one(nvars)]];
    }
    let mut adj = vec![vec![HermitianPoly::zero(nvars); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<HermitianPoly>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| m[r][c].clone()).collect())
                .collect();
            let d = poly_matrix_det(&minor);
            adj[i][j] = if (i + j) % 2 == 0 { d } else { d.neg_ref() };
        }
    }
    adj
}
