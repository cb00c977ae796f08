//! Brauer diagram arithmetic, cell (standard) modules, Gram matrices of
//! the cellular form, and rank-based simple dimensions.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::block::same_block;
use crate::kl::{predict_decomposition, KlTable};
use crate::linalg;
use crate::partition::Partition;
use crate::specht::{SpechtModule, SpechtVector};
use crate::weight::Weight;

/// Errors raised by the diagram layer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("diagrams have mismatched sizes {0} and {1}")]
    SizeMismatch(usize, usize),
    #[error("partition of degree {0} does not fit in B_{1} (need even non-negative slack)")]
    BadDegree(u32, usize),
    #[error("delta must be nonzero")]
    ZeroDelta,
}

/// A Brauer diagram on `n` northern and `n` southern nodes: a perfect
/// matching, stored as the partner of each node. Nodes `0..n` are the top
/// row and `n..2n` the bottom row.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BrauerDiagram {
    n: usize,
    partner: Vec<usize>,
}

impl BrauerDiagram {
    pub fn identity(n: usize) -> BrauerDiagram {
        let partner = (0..2 * n).map(|i| (i + n) % (2 * n)).collect();
        BrauerDiagram { n, partner }
    }

    /// The generator with top arc `{i, j}` and bottom arc `{i', j'}`
    /// (1-based, `i != j`), all other strands vertical.
    pub fn x(n: usize, i: usize, j: usize) -> BrauerDiagram {
        assert!(i != j && 1 <= i && i <= n && 1 <= j && j <= n);
        let mut d = BrauerDiagram::identity(n);
        let (i, j) = (i - 1, j - 1);
        d.link(i, j);
        d.link(n + i, n + j);
        d
    }

    /// The transposition diagram crossing strands `i` and `j` (1-based).
    pub fn sigma(n: usize, i: usize, j: usize) -> BrauerDiagram {
        assert!(i != j && 1 <= i && i <= n && 1 <= j && j <= n);
        let mut d = BrauerDiagram::identity(n);
        let (i, j) = (i - 1, j - 1);
        d.link(i, n + j);
        d.link(j, n + i);
        d
    }

    /// Builds a diagram from a permutation in one-line form.
    pub fn from_perm(perm: &[usize]) -> BrauerDiagram {
        let n = perm.len();
        let mut partner = vec![usize::MAX; 2 * n];
        for (i, &img) in perm.iter().enumerate() {
            // Strand from top node img-1 down to bottom node i.
            partner[img - 1] = n + i;
            partner[n + i] = img - 1;
        }
        assert!(partner.iter().all(|&p| p != usize::MAX));
        BrauerDiagram { n, partner }
    }

    fn link(&mut self, a: usize, b: usize) {
        self.partner[a] = b;
        self.partner[b] = a;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn partner(&self, node: usize) -> usize {
        self.partner[node]
    }

    /// Top-bottom reflection (the cellular anti-involution).
    pub fn flip(&self) -> BrauerDiagram {
        let n = self.n;
        let swap = |v: usize| if v < n { v + n } else { v - n };
        let mut partner = vec![0; 2 * n];
        for v in 0..2 * n {
            partner[swap(v)] = swap(self.partner[v]);
        }
        BrauerDiagram { n, partner }
    }

    pub fn propagating_lines(&self) -> usize {
        (0..self.n).filter(|&v| self.partner[v] >= self.n).count()
    }

    /// All pairs, 1-based with `i'` rendered as `n + i`, for display.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for v in 0..2 * self.n {
            let p = self.partner[v];
            if v < p {
                out.push((v + 1, p + 1));
            }
        }
        out
    }
}

/// Concatenation product: `d1` stacked on top of `d2`, loops evaluated to
/// a power of delta by the caller.
pub fn multiply(d1: &BrauerDiagram, d2: &BrauerDiagram) -> Result<(u32, BrauerDiagram), DiagramError> {
    let n = d1.n;
    if d2.n != n {
        return Err(DiagramError::SizeMismatch(d1.n, d2.n));
    }
    // Middle node i is d1's bottom node n+i glued to d2's top node i.
    // Walk from each outer node (d1 top, d2 bottom) through the middle.
    let mut partner = vec![usize::MAX; 2 * n];
    let mut seen_mid = vec![false; n];
    let outer_start = |v: usize| -> (bool, usize) {
        // Returns (in_d1, node id in that diagram) for outer node v.
        if v < n {
            (true, v)
        } else {
            (false, v)
        }
    };
    for start in 0..2 * n {
        if partner[start] != usize::MAX {
            continue;
        }
        let (mut in_d1, s) = outer_start(start);
        let mut cur = if in_d1 { d1.partner[s] } else { d2.partner[s] };
        loop {
            let is_middle = if in_d1 { cur >= n } else { cur < n };
            if !is_middle {
                // Reached an outer node.
                let end = if in_d1 { cur } else { cur };
                partner[start] = end;
                partner[end] = start;
                break;
            }
            let mid = if in_d1 { cur - n } else { cur };
            seen_mid[mid] = true;
            // Cross to the other diagram.
            in_d1 = !in_d1;
            cur = if in_d1 { d1.partner[n + mid] } else { d2.partner[mid] };
        }
    }
    // Loops: alternating cycles confined to the middle row.
    let mut loops = 0;
    for start in 0..n {
        if seen_mid[start] {
            continue;
        }
        let mut mid = start;
        loop {
            seen_mid[mid] = true;
            // d1 edge from bottom node, must return to the middle.
            let a = d1.partner[n + mid];
            assert!(a >= n, "unvisited middle component stays in the middle");
            seen_mid[a - n] = true;
            let b = d2.partner[a - n];
            assert!(b < n);
            mid = b;
            if mid == start {
                break;
            }
        }
        loops += 1;
    }
    Ok((loops, BrauerDiagram { n, partner }))
}

/// A linear combination of same-size diagrams with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DiagramCombo {
    terms: BTreeMap<BrauerDiagram, BigRational>,
}

impl DiagramCombo {
    pub fn zero() -> DiagramCombo {
        DiagramCombo::default()
    }

    pub fn from_diagram(d: BrauerDiagram) -> DiagramCombo {
        DiagramCombo::term(d, BigRational::one())
    }

    pub fn term(d: BrauerDiagram, c: BigRational) -> DiagramCombo {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(d, c);
        }
        DiagramCombo { terms }
    }

    pub fn terms(&self) -> &BTreeMap<BrauerDiagram, BigRational> {
        &self.terms
    }

    pub fn add(&self, other: &DiagramCombo) -> DiagramCombo {
        let mut terms = self.terms.clone();
        for (d, c) in &other.terms {
            let e = terms.entry(d.clone()).or_insert_with(BigRational::zero);
            *e += c;
            if e.is_zero() {
                terms.remove(d);
            }
        }
        DiagramCombo { terms }
    }

    pub fn scale(&self, k: &BigRational) -> DiagramCombo {
        if k.is_zero() {
            return DiagramCombo::zero();
        }
        DiagramCombo { terms: self.terms.iter().map(|(d, c)| (d.clone(), c * k)).collect() }
    }

    /// Bilinear product; closed loops contribute powers of `delta`.
    pub fn mul(&self, other: &DiagramCombo, delta: &BigRational) -> Result<DiagramCombo, DiagramError> {
        let mut out = DiagramCombo::zero();
        for (d1, c1) in &self.terms {
            for (d2, c2) in &other.terms {
                let (loops, prod) = multiply(d1, d2)?;
                let coeff = c1 * c2 * pow_rational(delta, loops);
                out = out.add(&DiagramCombo::term(prod, coeff));
            }
        }
        Ok(out)
    }
}

fn pow_rational(delta: &BigRational, k: u32) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..k {
        out *= delta;
    }
    out
}

/// The decomposition `1 = e + e^- + e^+` of the identity of B_2 into
/// primitive orthogonal idempotents:
/// `e = X_{12}/delta`, `e^- = (1 - sigma)/2`, `e^+ = 1 - e - e^-`.
pub fn b2_idempotents(
    delta: &BigRational,
) -> Result<(DiagramCombo, DiagramCombo, DiagramCombo), DiagramError> {
    if delta.is_zero() {
        return Err(DiagramError::ZeroDelta);
    }
    let one = DiagramCombo::from_diagram(BrauerDiagram::identity(2));
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let e = DiagramCombo::term(BrauerDiagram::x(2, 1, 2), delta.recip());
    let e_minus = one
        .add(&DiagramCombo::term(BrauerDiagram::sigma(2, 1, 2), -BigRational::one()))
        .scale(&half);
    let e_plus = one.add(&e.scale(&-BigRational::one())).add(&e_minus.scale(&-BigRational::one()));
    Ok((e, e_plus, e_minus))
}

/// A partial one-row diagram in V_{n,t}: `t` disjoint arcs on the nodes
/// `0..n`, the rest free.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartialOneRow {
    n: usize,
    /// `arc_of[v] = Some(partner)`; `None` for free nodes.
    arc_of: Vec<Option<usize>>,
}

impl PartialOneRow {
    pub fn new(n: usize, arcs: &[(usize, usize)]) -> PartialOneRow {
        let mut arc_of = vec![None; n];
        for &(a, b) in arcs {
            assert!(a != b && arc_of[a].is_none() && arc_of[b].is_none());
            arc_of[a] = Some(b);
            arc_of[b] = Some(a);
        }
        PartialOneRow { n, arc_of }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .filter_map(|v| self.arc_of[v].filter(|&p| v < p).map(|p| (v, p)))
            .collect()
    }

    /// Free nodes in increasing order.
    pub fn free(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.arc_of[v].is_none()).collect()
    }
}

/// All partial one-row diagrams with `t` arcs on `n` nodes, in a fixed
/// deterministic order; there are C(n,2t)(2t-1)!! of them.
pub fn one_rows(n: usize, t: usize) -> Vec<PartialOneRow> {
    fn matchings(nodes: &[usize]) -> Vec<Vec<(usize, usize)>> {
        if nodes.is_empty() {
            return vec![Vec::new()];
        }
        let a = nodes[0];
        let mut out = Vec::new();
        for k in 1..nodes.len() {
            let b = nodes[k];
            let rest: Vec<usize> =
                nodes[1..].iter().copied().filter(|&v| v != b).collect();
            for mut m in matchings(&rest) {
                m.insert(0, (a, b));
                out.push(m);
            }
        }
        out
    }
    use itertools::Itertools;
    let mut out = Vec::new();
    for support in (0..n).combinations(2 * t) {
        for m in matchings(&support) {
            out.push(PartialOneRow::new(n, &m));
        }
    }
    out
}

/// The cell (standard) module of B_n with label `lambda`, realized with
/// basis `{one-row} x {standard tableau}`.
pub struct CellModule {
    pub n: usize,
    pub t: usize,
    pub shape: Partition,
    pub rows: Vec<PartialOneRow>,
    row_index: HashMap<PartialOneRow, usize>,
    pub specht: SpechtModule,
}

/// A dense vector in the cell basis, indexed `row_idx * f + tab_idx`.
pub type CellVector = Vec<BigRational>;

impl CellModule {
    pub fn new(n: usize, lambda: &Partition) -> Result<CellModule, DiagramError> {
        let k = lambda.degree() as usize;
        if k > n || (n - k) % 2 != 0 {
            return Err(DiagramError::BadDegree(lambda.degree(), n));
        }
        let t = (n - k) / 2;
        let rows = one_rows(n, t);
        let row_index = rows.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
        Ok(CellModule { n, t, shape: lambda.clone(), rows, row_index, specht: SpechtModule::new(lambda) })
    }

    pub fn dim(&self) -> usize {
        self.rows.len() * self.specht.dim()
    }

    pub fn basis_index(&self, row: usize, tab: usize) -> usize {
        row * self.specht.dim() + tab
    }

    /// The action of a diagram on a cell basis vector `(row, tab)`. The
    /// one-row part is transported through the diagram; the induced
    /// permutation of free nodes acts on the Specht factor; closed loops
    /// contribute powers of `delta`. `None` (zero) when propagating lines
    /// drop.
    pub fn act_basis(
        &self,
        d: &BrauerDiagram,
        row: usize,
        tab: usize,
        delta: &BigRational,
    ) -> Result<Option<(usize, SpechtVector, BigRational)>, DiagramError> {
        if d.n != self.n {
            return Err(DiagramError::SizeMismatch(d.n, self.n));
        }
        let Some(walk) = act_walk(d, &self.rows[row]) else {
            return Ok(None);
        };
        let new_row = self.row_index[&walk.row];
        let x = self.specht.basis_vector(tab);
        let x = self.specht.apply_perm(&walk.transfer, &x);
        Ok(Some((new_row, x, pow_rational(delta, walk.loops))))
    }

    /// The action on a dense cell vector.
    pub fn act(
        &self,
        d: &BrauerDiagram,
        v: &CellVector,
        delta: &BigRational,
    ) -> Result<CellVector, DiagramError> {
        let f = self.specht.dim();
        let mut out = vec![BigRational::zero(); self.dim()];
        for row in 0..self.rows.len() {
            for tab in 0..f {
                let c = &v[self.basis_index(row, tab)];
                if c.is_zero() {
                    continue;
                }
                if let Some((nr, x, scale)) = self.act_basis(d, row, tab, delta)? {
                    for (j, xc) in x.iter().enumerate() {
                        if !xc.is_zero() {
                            out[self.basis_index(nr, j)] += c * xc * &scale;
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// The cellular bilinear form of two basis vectors.
    pub fn form_basis(
        &self,
        row1: usize,
        tab1: usize,
        row2: usize,
        tab2: usize,
        delta: &BigRational,
    ) -> BigRational {
        let Some((loops, transfer)) = pairing(&self.rows[row1], &self.rows[row2]) else {
            return BigRational::zero();
        };
        let x1 = self.specht.basis_vector(tab1);
        let x2 = self.specht.basis_vector(tab2);
        let x2 = self.specht.apply_perm(&transfer, &x2);
        self.specht.form(&x1, &x2) * pow_rational(delta, loops)
    }

    pub fn form(&self, x: &CellVector, y: &CellVector, delta: &BigRational) -> BigRational {
        let f = self.specht.dim();
        let mut s = BigRational::zero();
        for r1 in 0..self.rows.len() {
            for r2 in 0..self.rows.len() {
                let Some((loops, transfer)) = pairing(&self.rows[r1], &self.rows[r2]) else {
                    continue;
                };
                let scale = pow_rational(delta, loops);
                for t1 in 0..f {
                    let a = &x[self.basis_index(r1, t1)];
                    if a.is_zero() {
                        continue;
                    }
                    for t2 in 0..f {
                        let b = &y[self.basis_index(r2, t2)];
                        if b.is_zero() {
                            continue;
                        }
                        let x2 = self.specht.apply_perm(&transfer, &self.specht.basis_vector(t2));
                        s += a * b * &scale * self.specht.form(&self.specht.basis_vector(t1), &x2);
                    }
                }
            }
        }
        s
    }
}

struct ActWalk {
    loops: u32,
    row: PartialOneRow,
    /// One-line permutation: the i-th free node of the input row is carried
    /// to the `transfer[i-1]`-th free node of the output row.
    transfer: Vec<usize>,
}

/// Walks a diagram stacked on top of a one-row element. `None` when two
/// free nodes of `w` become joined (propagating lines drop).
fn act_walk(d: &BrauerDiagram, w: &PartialOneRow) -> Option<ActWalk> {
    let n = d.n;
    assert_eq!(w.n, n);
    // w sits on d's bottom row: w node i = d node n + i.
    let mut visited = vec![false; 2 * n];
    let mut new_arcs: Vec<(usize, usize)> = Vec::new();
    // For each top node carrying a free strand: which w-free node it holds.
    let mut carries: HashMap<usize, usize> = HashMap::new();
    for u in 0..n {
        if visited[u] {
            continue;
        }
        visited[u] = true;
        let mut cur = d.partner[u];
        loop {
            if cur < n {
                // Top node: new arc.
                visited[cur] = true;
                new_arcs.push((u.min(cur), u.max(cur)));
                break;
            }
            visited[cur] = true;
            let b = cur - n;
            match w.arc_of[b] {
                None => {
                    carries.insert(u, b);
                    break;
                }
                Some(b2) => {
                    visited[n + b2] = true;
                    cur = d.partner[n + b2];
                }
            }
        }
    }
    let free_in = w.free();
    if carries.len() != free_in.len() {
        // Some free node of w was not reached from the top: it joins
        // another free node, so the propagating count drops.
        return None;
    }
    // Loops: arcs of w fully in unvisited bottom nodes, matched by d's
    // bottom-to-bottom edges.
    let mut loops = 0;
    for b in 0..n {
        if visited[n + b] || w.arc_of[b].is_none() {
            continue;
        }
        let start = b;
        let mut cur = b;
        loop {
            visited[n + cur] = true;
            let b2 = w.arc_of[cur].expect("loop components alternate arcs");
            visited[n + b2] = true;
            let nxt = d.partner[n + b2];
            assert!(nxt >= n, "loop component cannot reach the top row");
            cur = nxt - n;
            if cur == start {
                break;
            }
        }
        loops += 1;
    }
    let row = PartialOneRow::new(n, &new_arcs);
    let free_out = row.free();
    assert_eq!(free_out.len(), free_in.len());
    let out_pos: HashMap<usize, usize> =
        free_out.iter().enumerate().map(|(j, &u)| (u, j + 1)).collect();
    let in_pos: HashMap<usize, usize> =
        free_in.iter().enumerate().map(|(i, &b)| (b, i + 1)).collect();
    let mut transfer = vec![0; free_in.len()];
    for (&u, &b) in &carries {
        transfer[in_pos[&b] - 1] = out_pos[&u];
    }
    Some(ActWalk { loops, row, transfer })
}

/// The diagrammatic pairing of two one-row elements: overlay the arcs,
/// count closed loops, and read off the matching of free nodes.
/// `None` when a path joins two free nodes on the same side.
/// The transfer permutation is one-line: the j-th free node of `w2` meets
/// the `transfer[j-1]`-th free node of `w1`.
fn pairing(w1: &PartialOneRow, w2: &PartialOneRow) -> Option<(u32, Vec<usize>)> {
    let n = w1.n;
    assert_eq!(w2.n, n);
    let free1 = w1.free();
    let free2 = w2.free();
    if free1.len() != free2.len() {
        return None;
    }
    let pos1: HashMap<usize, usize> = free1.iter().enumerate().map(|(i, &v)| (v, i + 1)).collect();
    let pos2: HashMap<usize, usize> = free2.iter().enumerate().map(|(i, &v)| (v, i + 1)).collect();
    let mut visited = vec![false; n];
    let mut transfer = vec![0; free2.len()];
    // Paths starting at nodes free in w1: alternate w2-arc, w1-arc, ...
    for &s in &free1 {
        if visited[s] {
            continue;
        }
        visited[s] = true;
        let mut cur = s;
        let mut use_w2 = true;
        loop {
            let step = if use_w2 { w2.arc_of[cur] } else { w1.arc_of[cur] };
            match step {
                None => {
                    // Path ends: must be free in w2 (ended needing a
                    // w2-arc) else two w1-free nodes joined.
                    if use_w2 {
                        transfer[pos2[&cur] - 1] = pos1[&s];
                        break;
                    } else {
                        return None;
                    }
                }
                Some(nxt) => {
                    visited[nxt] = true;
                    cur = nxt;
                    use_w2 = !use_w2;
                }
            }
        }
    }
    // Any unvisited w2-free node would join another w2-free node.
    if free2.iter().any(|&v| !visited[v]) {
        return None;
    }
    // Remaining unvisited arc nodes form alternating cycles.
    let mut loops = 0;
    for s in 0..n {
        if visited[s] || w1.arc_of[s].is_none() {
            continue;
        }
        let start = s;
        let mut cur = s;
        loop {
            visited[cur] = true;
            let a = w1.arc_of[cur].expect("cycle alternates arcs");
            visited[a] = true;
            let b = w2.arc_of[a].expect("cycle alternates arcs");
            cur = b;
            if cur == start {
                break;
            }
        }
        loops += 1;
    }
    Some((loops, transfer))
}

/// The Gram matrix of the cellular form on the cell basis.
pub struct GramMatrix {
    pub dim: usize,
    pub entries: Vec<Vec<BigRational>>,
    pub delta: BigRational,
}

pub fn gram_matrix(n: usize, lambda: &Partition, delta: &BigRational) -> Result<GramMatrix, DiagramError> {
    if delta.is_zero() {
        return Err(DiagramError::ZeroDelta);
    }
    let m = CellModule::new(n, lambda)?;
    let f = m.specht.dim();
    let dim = m.dim();
    // Assemble by one-row blocks in parallel; each block needs one walk.
    let blocks: Vec<Vec<Vec<BigRational>>> = (0..m.rows.len())
        .into_par_iter()
        .map(|r1| {
            let mut rows = vec![vec![BigRational::zero(); dim]; f];
            for r2 in 0..m.rows.len() {
                let Some((loops, transfer)) = pairing(&m.rows[r1], &m.rows[r2]) else {
                    continue;
                };
                let scale = pow_rational(delta, loops);
                // Matrix of the permuted Specht form on this block.
                for t2 in 0..f {
                    let x2 = m.specht.apply_perm(&transfer, &m.specht.basis_vector(t2));
                    for t1 in 0..f {
                        let v = m.specht.form(&m.specht.basis_vector(t1), &x2);
                        if !v.is_zero() {
                            rows[t1][m.basis_index(r2, t2)] = v * &scale;
                        }
                    }
                }
            }
            rows
        })
        .collect();
    let entries: Vec<Vec<BigRational>> = blocks.into_iter().flatten().collect();
    assert_eq!(entries.len(), dim);
    for i in 0..dim {
        for j in 0..i {
            assert_eq!(entries[i][j], entries[j][i], "Gram matrix must be symmetric");
        }
    }
    Ok(GramMatrix { dim, entries, delta: delta.clone() })
}

impl GramMatrix {
    pub fn rank(&self) -> usize {
        linalg::rank(&self.entries)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// The dimension of the simple head of the cell module: the rank of its
/// Gram matrix over the rationals.
pub fn simple_dim(n: usize, lambda: &Partition, delta: &BigRational) -> Result<usize, DiagramError> {
    Ok(gram_matrix(n, lambda, delta)?.rank())
}

/// One row of a block verification report.
#[derive(Debug, Clone)]
pub struct VerifyRow {
    pub lambda: Partition,
    pub dim_delta: usize,
    pub predicted_sum: usize,
    pub pass: bool,
}

/// Checks, for every cell-module label of B_n in the block of `root`, that
/// the cell dimension equals the prediction-weighted sum of Gram ranks.
pub fn verify_block(
    n: usize,
    delta: i64,
    root: &Weight,
    table: &KlTable,
) -> Result<Vec<VerifyRow>, DiagramError> {
    if delta == 0 {
        return Err(DiagramError::ZeroDelta);
    }
    let root_partition = root.to_partition().expect("root weight is a partition");
    let mut labels: Vec<Partition> = Vec::new();
    let mut deg = n % 2;
    while deg <= n {
        for p in crate::partition::partitions_of(deg as u32) {
            if same_block(&p, &root_partition, delta).unwrap_or(false) {
                labels.push(p);
            }
        }
        deg += 2;
    }
    labels.sort_by(|a, b| a.display_cmp(b));
    let dq = BigRational::from(BigInt::from(delta));
    let mut ranks: HashMap<Partition, usize> = HashMap::new();
    for mu in &labels {
        ranks.insert(mu.clone(), simple_dim(n, mu, &dq)?);
    }
    let mut out = Vec::new();
    for lambda in &labels {
        let dim_delta = CellModule::new(n, lambda)?.dim();
        let mut predicted_sum = 0usize;
        for mu in &labels {
            let mult = predict_decomposition(table, lambda, mu)
                .expect("labels share a regular block covered by the table");
            predicted_sum += mult as usize * ranks[mu];
        }
        out.push(VerifyRow {
            lambda: lambda.clone(),
            dim_delta,
            predicted_sum,
            pass: dim_delta == predicted_sum,
        });
    }
    Ok(out)
}

/// JSON rendering of a verification report.
pub fn verify_report_json(n: usize, delta: i64, rows: &[VerifyRow]) -> serde_json::Value {
    serde_json::json!({
        "n": n,
        "delta": delta,
        "rows": rows.iter().map(|r| serde_json::json!({
            "lambda": r.lambda.to_string(),
            "dim_delta": r.dim_delta,
            "predicted_sum": r.predicted_sum,
            "pass": r.pass,
        })).collect::<Vec<_>>(),
        "pass": rows.iter().all(|r| r.pass),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn rat(k: i64) -> BigRational {
        BigRational::from(BigInt::from(k))
    }

    fn random_diagram(n: usize, rng: &mut StdRng) -> BrauerDiagram {
        let mut nodes: Vec<usize> = (0..2 * n).collect();
        let mut partner = vec![0; 2 * n];
        while !nodes.is_empty() {
            let a = nodes.remove(0);
            let b = nodes.remove(rng.gen_range(0..nodes.len()));
            partner[a] = b;
            partner[b] = a;
        }
        BrauerDiagram { n, partner }
    }

    #[test]
    fn multiply_examples() {
        let x = BrauerDiagram::x(2, 1, 2);
        let (loops, prod) = multiply(&x, &x).unwrap();
        assert_eq!((loops, &prod), (1, &x));
        let id = BrauerDiagram::identity(3);
        let d = BrauerDiagram::x(3, 1, 3);
        assert_eq!(multiply(&id, &d).unwrap(), (0, d.clone()));
        assert_eq!(multiply(&d, &id).unwrap(), (0, d.clone()));
        // X_12 X_23 X_12 = X_12 with no loops.
        let x12 = BrauerDiagram::x(3, 1, 2);
        let x23 = BrauerDiagram::x(3, 2, 3);
        let (l1, a) = multiply(&x12, &x23).unwrap();
        let (l2, b) = multiply(&a, &x12).unwrap();
        assert_eq!((l1 + l2, &b), (0, &x12));
        assert!(multiply(&x, &d).is_err());
    }

    #[test]
    fn multiply_associative_random() {
        let mut rng = StdRng::seed_from_u64(11);
        let delta = BigRational::new(BigInt::from(3), BigInt::from(2));
        for _ in 0..500 {
            let n = rng.gen_range(1..=8);
            let (a, b, c) =
                (random_diagram(n, &mut rng), random_diagram(n, &mut rng), random_diagram(n, &mut rng));
            let (ca, cb, cc) = (
                DiagramCombo::from_diagram(a),
                DiagramCombo::from_diagram(b),
                DiagramCombo::from_diagram(c),
            );
            let lhs = ca.mul(&cb, &delta).unwrap().mul(&cc, &delta).unwrap();
            let rhs = ca.mul(&cb.mul(&cc, &delta).unwrap(), &delta).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn idempotents() {
        for delta in [rat(1), rat(3), BigRational::new(BigInt::from(-5), BigInt::from(2))] {
            let (e, e_plus, e_minus) = b2_idempotents(&delta).unwrap();
            let one = DiagramCombo::from_diagram(BrauerDiagram::identity(2));
            let all = [&e, &e_plus, &e_minus];
            for (i, x) in all.iter().enumerate() {
                assert_eq!(x.mul(x, &delta).unwrap(), **x, "idempotent {i}");
                for (j, y) in all.iter().enumerate() {
                    if i != j {
                        assert_eq!(x.mul(y, &delta).unwrap(), DiagramCombo::zero());
                    }
                }
            }
            assert_eq!(e.add(&e_plus).add(&e_minus), one);
            // e^- is antisymmetric and e^+ symmetric under sigma.
            let sigma = DiagramCombo::from_diagram(BrauerDiagram::sigma(2, 1, 2));
            assert_eq!(
                e_minus.mul(&sigma, &delta).unwrap(),
                e_minus.scale(&-BigRational::one())
            );
            assert_eq!(e_plus.mul(&sigma, &delta).unwrap(), e_plus);
        }
        assert!(b2_idempotents(&rat(0)).is_err());
    }

    #[test]
    fn one_row_counts() {
        // |V_{n,t}| = C(n, 2t) (2t-1)!!.
        assert_eq!(one_rows(4, 1).len(), 6);
        assert_eq!(one_rows(4, 2).len(), 3);
        assert_eq!(one_rows(6, 3).len(), 15);
        assert_eq!(one_rows(8, 2).len(), 210);
        assert_eq!(one_rows(5, 0).len(), 1);
    }

    #[test]
    fn cell_dims() {
        assert_eq!(CellModule::new(4, &Partition::empty()).unwrap().dim(), 3);
        assert_eq!(CellModule::new(2, &p("2")).unwrap().dim(), 1);
        assert_eq!(CellModule::new(6, &Partition::empty()).unwrap().dim(), 15);
        assert_eq!(CellModule::new(8, &Partition::empty()).unwrap().dim(), 105);
        assert_eq!(CellModule::new(4, &p("2")).unwrap().dim(), 6);
        assert!(CellModule::new(4, &p("3")).is_err());
        assert!(CellModule::new(2, &p("2,2")).is_err());
    }

    #[test]
    fn act_examples() {
        let delta = rat(7);
        // Identity acts trivially.
        let m = CellModule::new(4, &p("2")).unwrap();
        let id = BrauerDiagram::identity(4);
        for i in 0..m.dim() {
            let mut v = vec![BigRational::zero(); m.dim()];
            v[i] = BigRational::one();
            assert_eq!(m.act(&id, &v, &delta).unwrap(), v);
        }
        // X_12 on a row with arc {1,2} multiplies by delta.
        let m = CellModule::new(2, &Partition::empty()).unwrap();
        let v = vec![BigRational::one()];
        assert_eq!(m.act(&BrauerDiagram::x(2, 1, 2), &v, &delta).unwrap(), vec![delta.clone()]);
        // X_12 kills the t = 0 module of B_2.
        let m = CellModule::new(2, &p("2")).unwrap();
        let v = vec![BigRational::one()];
        assert_eq!(
            m.act(&BrauerDiagram::x(2, 1, 2), &v, &delta).unwrap(),
            vec![BigRational::zero()]
        );
    }

    #[test]
    fn act_is_module_action() {
        // act(d1, act(d2, v)) = delta^loops(d1 d2) act(d1 d2, v) on random
        // diagrams: the defining associativity of a module.
        let mut rng = StdRng::seed_from_u64(23);
        let delta = BigRational::new(BigInt::from(5), BigInt::from(3));
        for shape in [p("2"), p("1,1"), p("2,1"), Partition::empty()] {
            for n in 3..=5usize {
                if shape.degree() as usize > n || (n - shape.degree() as usize) % 2 != 0 {
                    continue;
                }
                let m = CellModule::new(n, &shape).unwrap();
                for _ in 0..40 {
                    let d1 = random_diagram(n, &mut rng);
                    let d2 = random_diagram(n, &mut rng);
                    let i = rng.gen_range(0..m.dim());
                    let mut v = vec![BigRational::zero(); m.dim()];
                    v[i] = BigRational::one();
                    let lhs = m.act(&d1, &m.act(&d2, &v, &delta).unwrap(), &delta).unwrap();
                    let (loops, prod) = multiply(&d1, &d2).unwrap();
                    let rhs: CellVector = m
                        .act(&prod, &v, &delta)
                        .unwrap()
                        .into_iter()
                        .map(|c| c * pow_rational(&delta, loops))
                        .collect();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn form_is_cellular() {
        // <d x, y> = <x, flip(d) y> on random data.
        let mut rng = StdRng::seed_from_u64(31);
        let delta = rat(3);
        for shape in [p("2"), p("1,1"), Partition::empty(), p("2,1")] {
            for n in 3..=5usize {
                if shape.degree() as usize > n || (n - shape.degree() as usize) % 2 != 0 {
                    continue;
                }
                let m = CellModule::new(n, &shape).unwrap();
                for _ in 0..25 {
                    let d = random_diagram(n, &mut rng);
                    let i = rng.gen_range(0..m.dim());
                    let j = rng.gen_range(0..m.dim());
                    let mut x = vec![BigRational::zero(); m.dim()];
                    x[i] = BigRational::one();
                    let mut y = vec![BigRational::zero(); m.dim()];
                    y[j] = BigRational::one();
                    let lhs = m.form(&m.act(&d, &x, &delta).unwrap(), &y, &delta);
                    let rhs = m.form(&x, &m.act(&d.flip(), &y, &delta).unwrap(), &delta);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn gram_examples() {
        // (4, empty, 1): all-ones 3x3, rank 1.
        let g = gram_matrix(4, &Partition::empty(), &rat(1)).unwrap();
        assert_eq!(g.dim, 3);
        for row in &g.entries {
            for x in row {
                assert_eq!(x, &BigRational::one());
            }
        }
        assert_eq!(g.rank(), 1);
        // (4, empty, 3): diagonal 9, off-diagonal 3.
        let g = gram_matrix(4, &Partition::empty(), &rat(3)).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(g.entries[i][j], if i == j { rat(9) } else { rat(3) });
            }
        }
        assert_eq!(g.rank(), 3);
    }

    #[test]
    fn simple_dims_delta_one() {
        let one = rat(1);
        assert_eq!(simple_dim(4, &Partition::empty(), &one).unwrap(), 1);
        assert_eq!(simple_dim(4, &p("2,2"), &one).unwrap(), 2);
        assert_eq!(simple_dim(6, &Partition::empty(), &one).unwrap(), 1);
        // Partitions of n label full-rank (Specht) cell modules.
        assert_eq!(simple_dim(4, &p("2,1,1"), &one).unwrap(), 3);
    }

    #[test]
    fn semisimple_regime_full_rank() {
        // For large delta, B_n(delta) is semisimple: every Gram matrix has
        // full rank.
        let big = rat(101);
        for n in 2..=5usize {
            let mut deg = n % 2;
            while deg <= n {
                for shape in crate::partition::partitions_of(deg as u32) {
                    let m = CellModule::new(n, &shape).unwrap();
                    assert_eq!(
                        simple_dim(n, &shape, &big).unwrap(),
                        m.dim(),
                        "n={n} shape={shape}"
                    );
                }
                deg += 2;
            }
        }
    }

    #[test]
    fn verify_small_blocks() {
        let table = crate::kl::kl_polynomials(1, &Weight::zero(), 8, Default::default()).unwrap();
        for n in [2usize, 4] {
            let rows = verify_block(n, 1, &Weight::zero(), &table).unwrap();
            assert!(rows.iter().all(|r| r.pass), "n = {n}: {rows:?}");
        }
        let rows = verify_block(4, 1, &Weight::zero(), &table).unwrap();
        // Delta_4(0) has dimension 3 = 1*1 + 1*2.
        let r0 = rows.iter().find(|r| r.lambda == Partition::empty()).unwrap();
        assert_eq!((r0.dim_delta, r0.predicted_sum), (3, 3));
        let json = verify_report_json(4, 1, &rows);
        assert_eq!(json["pass"], serde_json::Value::Bool(true));
        assert!(json["rows"].as_array().unwrap().len() >= 2);
    }
}

#[cfg(test)]
mod timing_probe {
    use super::*;
    use crate::weight::Weight;

    #[test]
    #[ignore]
    fn n8_blocks_timing() {
        let t0 = std::time::Instant::now();
        let table = crate::kl::kl_polynomials(1, &Weight::zero(), 8, Default::default()).unwrap();
        let rows = verify_block(8, 1, &Weight::zero(), &table).unwrap();
        assert!(rows.iter().all(|r| r.pass), "{rows:?}");
        println!("block of 0, n=8: {:?} rows={}", t0.elapsed(), rows.len());
        let t0 = std::time::Instant::now();
        let root: Weight = "1".parse().unwrap();
        let table = crate::kl::kl_polynomials(1, &root, 7, Default::default()).unwrap();
        let rows = verify_block(7, 1, &root, &table).unwrap();
        assert!(rows.iter().all(|r| r.pass), "{rows:?}");
        println!("block of (1), n=7: {:?} rows={}", t0.elapsed(), rows.len());
    }
}
