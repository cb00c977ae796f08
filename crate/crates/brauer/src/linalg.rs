//! Exact rank computation for rational matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

/// Rank of a rational matrix, computed exactly: each row is scaled to an
/// integer row divided by its gcd, then eliminated by cross-multiplication
/// with gcd renormalisation after every update to keep entries small.
pub fn rank(matrix: &[Vec<BigRational>]) -> usize {
    let rows = matrix.len();
    if rows == 0 {
        return 0;
    }
    let cols = matrix[0].len();
    let mut m: Vec<Vec<BigInt>> = matrix.iter().map(|row| normalize_row(row)).collect();
    let mut rank = 0;
    let mut col = 0;
    while rank < rows && col < cols {
        // Pick the pivot with the smallest nonzero magnitude to limit growth.
        let pivot = (rank..rows)
            .filter(|&r| !m[r][col].is_zero())
            .min_by_key(|&r| m[r][col].magnitude().clone());
        let Some(p) = pivot else {
            col += 1;
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..rows {
            if m[r][col].is_zero() {
                continue;
            }
            let a = m[rank][col].clone();
            let b = m[r][col].clone();
            let g = a.gcd(&b);
            let (a, b) = (&a / &g, &b / &g);
            for c in col..cols {
                let v = &a * &m[r][c] - &b * &m[rank][c];
                m[r][c] = v;
            }
            renormalize(&mut m[r]);
        }
        rank += 1;
        col += 1;
    }
    rank
}

/// Clears denominators and divides by the row gcd.
fn normalize_row(row: &[BigRational]) -> Vec<BigInt> {
    let mut lcm = BigInt::from(1);
    for x in row {
        if !x.is_zero() {
            lcm = lcm.lcm(x.denom());
        }
    }
    let mut out: Vec<BigInt> = row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    renormalize(&mut out);
    out
}

fn renormalize(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in row.iter() {
        g = g.gcd(x);
        if g == BigInt::from(1) {
            return;
        }
    }
    if g.is_zero() || g == BigInt::from(1) {
        return;
    }
    for x in row.iter_mut() {
        *x = &*x / &g;
    }
}
