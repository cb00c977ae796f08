//! Symmetric-group Specht modules in Young's seminormal basis, with the
//! invariant diagonal bilinear form needed for the cell-module forms.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::partition::Partition;

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A standard Young tableau of a fixed shape, stored as the cell of each
/// entry: `cells[e - 1] = (row, col)`, both 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StandardTableau {
    cells: Vec<(usize, usize)>,
}

impl StandardTableau {
    pub fn size(&self) -> usize {
        self.cells.len()
    }

    pub fn cell(&self, entry: usize) -> (usize, usize) {
        self.cells[entry - 1]
    }

    /// The content col - row of the cell holding `entry`.
    pub fn content(&self, entry: usize) -> i64 {
        let (r, c) = self.cell(entry);
        c as i64 - r as i64
    }

    /// Swapping `k` and `k + 1`; `None` when the result is not standard
    /// (the entries share a row or a column).
    pub fn swap(&self, k: usize) -> Option<StandardTableau> {
        let (r1, c1) = self.cell(k);
        let (r2, c2) = self.cell(k + 1);
        if r1 == r2 || c1 == c2 {
            return None;
        }
        let mut cells = self.cells.clone();
        cells.swap(k - 1, k);
        Some(StandardTableau { cells })
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        let nrows = self.cells.iter().map(|&(r, _)| r + 1).max().unwrap_or(0);
        let mut rows = vec![Vec::new(); nrows];
        for (e, &(r, c)) in self.cells.iter().enumerate() {
            rows[r].push((c, e + 1));
        }
        rows.iter_mut().for_each(|row| row.sort());
        rows.into_iter().map(|row| row.into_iter().map(|(_, e)| e).collect()).collect()
    }
}

/// The Specht module of a partition: the indexed seminormal basis plus the
/// weights of the invariant diagonal form.
#[derive(Debug, Clone)]
pub struct SpechtModule {
    pub shape: Partition,
    tableaux: Vec<StandardTableau>,
    index: HashMap<StandardTableau, usize>,
    gamma: Vec<BigRational>,
}

/// A vector in the seminormal basis, kept dense (dimensions stay modest).
pub type SpechtVector = Vec<BigRational>;

impl SpechtModule {
    pub fn new(shape: &Partition) -> SpechtModule {
        let tableaux = standard_tableaux(shape);
        let index: HashMap<StandardTableau, usize> =
            tableaux.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        let gamma = compute_gamma(&tableaux, &index);
        SpechtModule { shape: shape.clone(), tableaux, index, gamma }
    }

    pub fn dim(&self) -> usize {
        self.tableaux.len()
    }

    pub fn tableaux(&self) -> &[StandardTableau] {
        &self.tableaux
    }

    pub fn gamma(&self, i: usize) -> &BigRational {
        &self.gamma[i]
    }

    pub fn basis_vector(&self, i: usize) -> SpechtVector {
        let mut v = vec![BigRational::zero(); self.dim()];
        v[i] = BigRational::one();
        v
    }

    /// The seminormal action of the adjacent transposition `(k, k+1)`.
    pub fn apply_adjacent(&self, k: usize, v: &SpechtVector) -> SpechtVector {
        let mut out = vec![BigRational::zero(); self.dim()];
        for (i, coeff) in v.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let t = &self.tableaux[i];
            let d = t.content(k + 1) - t.content(k);
            match t.swap(k) {
                None => {
                    // Same row (d = 1): fixed; same column (d = -1): negated.
                    let sign = if d == 1 { 1 } else { -1 };
                    assert_eq!(d, sign as i64);
                    out[i] += coeff * ratio(sign, 1);
                }
                Some(t2) => {
                    let j = self.index[&t2];
                    out[i] += coeff * ratio(1, d);
                    let c = if d > 0 {
                        BigRational::one()
                    } else {
                        BigRational::one() - ratio(1, d * d)
                    };
                    out[j] += coeff * c;
                }
            }
        }
        out
    }

    /// Applies a permutation given in one-line form (`perm[i - 1]` is the
    /// image of `i`) via its bubble-sort decomposition into adjacent
    /// transpositions.
    pub fn apply_perm(&self, perm: &[usize], v: &SpechtVector) -> SpechtVector {
        assert_eq!(perm.len(), self.shape.degree() as usize);
        let mut w: Vec<usize> = perm.to_vec();
        let mut factors = Vec::new();
        // Sort w by adjacent swaps: w * s_{j1} * ... * s_{jm} = id, hence
        // perm = s_{jm} * ... * s_{j1}; acting on a vector applies s_{j1}
        // first.
        loop {
            let Some(j) = (0..w.len().saturating_sub(1)).find(|&j| w[j] > w[j + 1]) else {
                break;
            };
            w.swap(j, j + 1);
            factors.push(j + 1);
        }
        let mut out = v.clone();
        for &k in &factors {
            out = self.apply_adjacent(k, &out);
        }
        out
    }

    /// The invariant bilinear form: `sum_T gamma_T x_T y_T`.
    pub fn form(&self, x: &SpechtVector, y: &SpechtVector) -> BigRational {
        let mut s = BigRational::zero();
        for i in 0..self.dim() {
            if !x[i].is_zero() && !y[i].is_zero() {
                s += &self.gamma[i] * &x[i] * &y[i];
            }
        }
        s
    }
}

/// All standard tableaux of a shape, built by choosing the cell of the
/// largest entry among removable cells and recursing; the order is fixed
/// by the recursion and deterministic.
pub fn standard_tableaux(shape: &Partition) -> Vec<StandardTableau> {
    let n = shape.degree() as usize;
    if n == 0 {
        return vec![StandardTableau { cells: Vec::new() }];
    }
    let mut out = Vec::new();
    let parts = shape.parts();
    for r in 0..parts.len() {
        // Row r ends in a removable cell iff it is strictly longer than
        // the next row.
        if r + 1 < parts.len() && parts[r] == parts[r + 1] {
            continue;
        }
        let c = parts[r] as usize - 1;
        let mut smaller = parts.to_vec();
        smaller[r] -= 1;
        let smaller = Partition::new(smaller);
        for t in standard_tableaux(&smaller) {
            let mut cells = t.cells;
            cells.push((r, c));
            out.push(StandardTableau { cells });
        }
    }
    out
}

/// Propagates the form weights from the first tableau (weight 1) along
/// adjacent swaps: crossing from axial distance d > 0 multiplies by
/// 1 - 1/d^2. The swap graph on standard tableaux is connected.
fn compute_gamma(
    tableaux: &[StandardTableau],
    index: &HashMap<StandardTableau, usize>,
) -> Vec<BigRational> {
    let dim = tableaux.len();
    let mut gamma: Vec<Option<BigRational>> = vec![None; dim];
    if dim == 0 {
        return Vec::new();
    }
    gamma[0] = Some(BigRational::one());
    let n = tableaux[0].size();
    let mut queue = vec![0usize];
    while let Some(i) = queue.pop() {
        let g = gamma[i].clone().unwrap();
        for k in 1..n {
            let t = &tableaux[i];
            let Some(t2) = t.swap(k) else { continue };
            let j = index[&t2];
            if gamma[j].is_some() {
                continue;
            }
            let d = t.content(k + 1) - t.content(k);
            let factor = BigRational::one() - ratio(1, d * d);
            gamma[j] = Some(if d > 0 { &g * factor } else { &g / factor });
            queue.push(j);
        }
    }
    gamma.into_iter().map(|g| g.expect("swap graph is connected")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::partitions_of;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn hook_length_dim(shape: &Partition) -> usize {
        // Independent dimension count via the hook length formula.
        let parts: Vec<u64> = shape.parts().iter().map(|&x| x as u64).collect();
        let conj: Vec<u64> = shape.transpose().parts().iter().map(|&x| x as u64).collect();
        let mut num = BigInt::from(1u32);
        for k in 1..=shape.degree() as u64 {
            num *= BigInt::from(k);
        }
        let mut den = BigInt::from(1u32);
        for (r, &len) in parts.iter().enumerate() {
            for c in 0..len as usize {
                let hook = (len - c as u64) + (conj[c] - r as u64) - 1;
                den *= BigInt::from(hook);
            }
        }
        let q = &num / &den;
        assert_eq!(&q * &den, num);
        q.try_into().unwrap()
    }

    #[test]
    fn dims_match_hook_lengths() {
        for n in 0..=7u32 {
            for shape in partitions_of(n) {
                assert_eq!(SpechtModule::new(&shape).dim(), hook_length_dim(&shape));
            }
        }
    }

    #[test]
    fn adjacent_action_is_involution() {
        for shape in [p("3,2"), p("2,2,1"), p("3,1,1"), p("4,2")] {
            let m = SpechtModule::new(&shape);
            for k in 1..shape.degree() as usize {
                for i in 0..m.dim() {
                    let v = m.basis_vector(i);
                    assert_eq!(m.apply_adjacent(k, &m.apply_adjacent(k, &v)), v);
                }
            }
        }
    }

    #[test]
    fn braid_relations() {
        let shape = p("3,2,1");
        let m = SpechtModule::new(&shape);
        for i in 0..m.dim() {
            let v = m.basis_vector(i);
            for k in 1..shape.degree() as usize - 1 {
                let lhs = m.apply_adjacent(k, &m.apply_adjacent(k + 1, &m.apply_adjacent(k, &v)));
                let rhs = m.apply_adjacent(k + 1, &m.apply_adjacent(k, &m.apply_adjacent(k + 1, &v)));
                assert_eq!(lhs, rhs);
            }
            // Distant generators commute.
            let lhs = m.apply_adjacent(1, &m.apply_adjacent(3, &v));
            let rhs = m.apply_adjacent(3, &m.apply_adjacent(1, &v));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn form_is_invariant() {
        for shape in [p("3,2"), p("2,2,1"), p("4,1"), p("2,2,2")] {
            let m = SpechtModule::new(&shape);
            for k in 1..shape.degree() as usize {
                for i in 0..m.dim() {
                    for j in 0..m.dim() {
                        let (x, y) = (m.basis_vector(i), m.basis_vector(j));
                        let lhs = m.form(&m.apply_adjacent(k, &x), &m.apply_adjacent(k, &y));
                        assert_eq!(lhs, m.form(&x, &y));
                    }
                }
            }
        }
    }

    #[test]
    fn perm_composition() {
        let shape = p("3,2");
        let m = SpechtModule::new(&shape);
        let sigma = [2usize, 4, 1, 5, 3];
        let tau = [3usize, 1, 5, 2, 4];
        // (sigma . tau)(i) = sigma(tau(i)).
        let prod: Vec<usize> = (0..5).map(|i| sigma[tau[i] - 1]).collect();
        for i in 0..m.dim() {
            let v = m.basis_vector(i);
            let a = m.apply_perm(&sigma, &m.apply_perm(&tau, &v));
            let b = m.apply_perm(&prod, &v);
            assert_eq!(a, b);
        }
        let id = [1usize, 2, 3, 4, 5];
        for i in 0..m.dim() {
            let v = m.basis_vector(i);
            assert_eq!(m.apply_perm(&id, &v), v);
        }
    }

    #[test]
    fn adjacent_matches_perm() {
        let shape = p("2,2");
        let m = SpechtModule::new(&shape);
        // s_2 as one-line notation.
        let s2 = [1usize, 3, 2, 4];
        for i in 0..m.dim() {
            let v = m.basis_vector(i);
            assert_eq!(m.apply_perm(&s2, &v), m.apply_adjacent(2, &v));
        }
    }

    #[test]
    fn sign_rep_and_trivial_rep() {
        // Single-row shape: every generator acts as +1.
        let m = SpechtModule::new(&p("4"));
        assert_eq!(m.dim(), 1);
        let v = m.basis_vector(0);
        for k in 1..4 {
            assert_eq!(m.apply_adjacent(k, &v), v);
        }
        // Single-column shape: every generator acts as -1.
        let m = SpechtModule::new(&p("1,1,1,1"));
        assert_eq!(m.dim(), 1);
        let v = m.basis_vector(0);
        for k in 1..4 {
            let neg: SpechtVector = v.iter().map(|c| -c).collect();
            assert_eq!(m.apply_adjacent(k, &v), neg);
        }
    }
}
