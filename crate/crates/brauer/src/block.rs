//! Block membership via the orbit invariant, block enumeration, supp/supp2,
//! translation equivalence, separation, translation chains and canonical
//! representatives for negative delta.

use std::collections::BTreeMap;
use std::collections::VecDeque;

use thiserror::Error;

use crate::partition::{partitions_of, Partition};
use crate::weight::{
    joint_window, same_facet, shift, shift_windowed, singularity_degree, ShiftedPoint,
    Weight,
};

/// Errors raised by block-engine operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlockError {
    #[error("delta must be nonzero")]
    ZeroDelta,
    #[error("{0} is not in supp({1})")]
    NotAdjacent(String, String),
    #[error("{0} and {1} lie on different facets")]
    DifferentFacet(String, String),
    #[error("weight {0} is singular of degree {1}, more than allowed for delta={2}")]
    TooSingular(String, u32, i64),
    #[error("the block of {0} at delta={1} has no small-row representative")]
    NoRepresentative(String, i64),
}

/// Canonical invariant of a dominant orbit of the even-signed permutation
/// group acting through the dot action.
///
/// The reduced absolute-value multiset strips the forced generic tail; the
/// sign parity `(#negatives + window) mod 2` is meaningful only for orbits
/// without a zero coordinate (a zero absorbs sign changes) and is normalized
/// to `false` when `has_zero` holds, so plain equality compares orbits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockKey {
    reduced_abs: Vec<i64>,
    neg_parity: bool,
    has_zero: bool,
}

/// Builds the orbit key from strictly interlocking window entries.
///
/// `step`/`offset` describe the generic tail `-(step*(i-1) + offset)`:
/// `(2, delta)` for doubled shifted points, `(4, 2*delta)` for quadrupled
/// midpoints. A trailing entry is forced (hence dropped) when it is the
/// unique largest modulus and equals the generic modulus for its position.
pub fn orbit_key_from_entries(entries: &[i64], step: i64, offset: i64) -> BlockKey {
    let has_zero = entries.iter().any(|&e| e == 0);
    let negs = entries.iter().filter(|&&e| e < 0).count();
    let neg_parity = if has_zero { false } else { (negs + entries.len()) % 2 == 1 };
    let mut abs: Vec<i64> = entries.iter().map(|e| e.abs()).collect();
    abs.sort_unstable();
    loop {
        let l = abs.len();
        if l == 0 {
            break;
        }
        let m = abs[l - 1];
        let unique = l == 1 || abs[l - 2] != m;
        if unique && m == step * (l as i64 - 1) + offset {
            abs.pop();
        } else {
            break;
        }
    }
    BlockKey { reduced_abs: abs, neg_parity, has_zero }
}

/// The orbit key of a dominant weight at the canonical window.
pub fn block_key(w: &Weight, delta: i64) -> BlockKey {
    block_key_windowed(w, delta, 0)
}

/// The orbit key computed at window at least `n` (stable under enlargement).
pub fn block_key_windowed(w: &Weight, delta: i64, n: usize) -> BlockKey {
    let x = shift(w, delta);
    let x = if n > x.window() { x.extend_to(n) } else { x };
    orbit_key_from_entries(x.doubled(), 2, delta)
}

/// Whether two dominant weights lie in the same block (same dot-orbit).
pub fn same_block_weights(a: &Weight, b: &Weight, delta: i64) -> bool {
    block_key(a, delta) == block_key(b, delta)
}

/// Whether the standard modules labelled by two partitions lie in the same
/// block: the transposed partitions must share a dot-orbit.
pub fn same_block(lambda: &Partition, mu: &Partition, delta: i64) -> Result<bool, BlockError> {
    if delta == 0 {
        return Err(BlockError::ZeroDelta);
    }
    let a = Weight::from(&lambda.transpose());
    let b = Weight::from(&mu.transpose());
    Ok(same_block_weights(&a, &b, delta))
}

/// A truncated block: every dominant weight of degree at most the bound
/// sharing the root's orbit, sorted by (degree, decreasing lex).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSet {
    pub delta: i64,
    pub root: Weight,
    pub degree_bound: i64,
    pub members: Vec<Weight>,
}

/// Enumerates the block of a dominant weight up to a degree bound by
/// filtering all partitions degree by degree.
pub fn enumerate_block(root: &Weight, delta: i64, max_degree: i64) -> BlockSet {
    assert!(root.is_dominant());
    let key = block_key(root, delta);
    let mut members = Vec::new();
    for d in 0..=max_degree.max(0) {
        for p in partitions_of(d as u32) {
            let w = Weight::from(&p);
            if block_key(&w, delta) == key {
                members.push(w);
            }
        }
    }
    members.sort_by(|a, b| a.display_cmp(b));
    BlockSet { delta, root: root.clone(), degree_bound: max_degree, members }
}

/// One-box neighbours of a dominant weight (dominant results only).
pub fn supp(w: &Weight) -> Vec<Weight> {
    let p = w.to_partition().expect("supp requires a dominant weight");
    let mut out: Vec<Weight> = p
        .addable()
        .into_iter()
        .chain(p.removable())
        .map(|q| Weight::from(&q))
        .collect();
    out.sort_by(|a, b| a.display_cmp(b));
    out
}

/// Two-box neighbours with multiplicities: `supp2 = supp(supp(.))`.
pub fn supp2(w: &Weight) -> BTreeMap<Weight, usize> {
    let mut out = BTreeMap::new();
    for mid in supp(w) {
        for far in supp(&mid) {
            *out.entry(far).or_insert(0) += 1;
        }
    }
    out
}

/// Translation equivalence of two adjacent dominant weights: each block
/// meets the other weight's supp exactly once.
pub fn translation_equivalent(
    lambda: &Weight,
    lambda_p: &Weight,
    delta: i64,
) -> Result<bool, BlockError> {
    let s = supp(lambda);
    if !s.contains(lambda_p) {
        return Err(BlockError::NotAdjacent(lambda_p.to_string(), lambda.to_string()));
    }
    let hits_in_supp_lambda =
        s.iter().filter(|t| same_block_weights(t, lambda_p, delta)).count();
    let hits_in_supp_lambda_p = supp(lambda_p)
        .iter()
        .filter(|t| same_block_weights(t, lambda, delta))
        .count();
    Ok(hits_in_supp_lambda == 1 && hits_in_supp_lambda_p == 1)
}

/// Whether `lambda_p` separates the pair `lambda_minus < lambda_plus`
/// (degree order): the three finite intersection conditions.
pub fn separates(
    lambda_p: &Weight,
    lambda_minus: &Weight,
    lambda_plus: &Weight,
    delta: i64,
) -> bool {
    assert!(lambda_minus.degree() < lambda_plus.degree());
    // (i)/(ii): lambda_p is the only member of its block in supp of each.
    let only = |anchor: &Weight| {
        let hits: Vec<Weight> = supp(anchor)
            .into_iter()
            .filter(|t| same_block_weights(t, lambda_p, delta))
            .collect();
        hits == vec![lambda_p.clone()]
    };
    if !only(lambda_minus) || !only(lambda_plus) {
        return false;
    }
    // (iii): the pair is exactly the block trace in supp(lambda_p).
    let mut hits: Vec<Weight> = supp(lambda_p)
        .into_iter()
        .filter(|t| same_block_weights(t, lambda_minus, delta))
        .collect();
    hits.sort_by(|a, b| a.display_cmp(b));
    hits == vec![lambda_minus.clone(), lambda_plus.clone()]
}

/// Single steps available inside a facet: one-box moves on singleton slots
/// and paired two-box moves on doubleton slots.
fn facet_steps(x: &ShiftedPoint) -> Vec<ShiftedPoint> {
    let sig = match x.signature() {
        Ok(s) => s,
        Err(_) => return Vec::new(),
    };
    let mut out = Vec::new();
    let mut push = |cand: ShiftedPoint| {
        if cand.is_strictly_decreasing() {
            if let Ok(sc) = cand.signature() {
                if sc == sig {
                    out.push(cand);
                }
            }
        }
    };
    for slot in &sig.slots {
        match *slot {
            crate::weight::Slot::Singleton(i) => {
                for d in [2i64, -2] {
                    let mut v = x.doubled().to_vec();
                    v[i - 1] += d;
                    push(ShiftedPoint::from_doubled(v, x.delta()));
                }
            }
            crate::weight::Slot::Doubleton(i, j) => {
                for d in [2i64, -2] {
                    let mut v = x.doubled().to_vec();
                    v[i - 1] += d;
                    v[j - 1] -= d;
                    push(ShiftedPoint::from_doubled(v, x.delta()));
                }
            }
        }
    }
    out
}

/// A chain of box moves joining two weights in a common facet, every link a
/// supp or paired supp2 step staying inside the facet.
pub fn translation_chain(
    lambda: &Weight,
    mu: &Weight,
    delta: i64,
) -> Result<Vec<Weight>, BlockError> {
    if !same_facet(lambda, mu, delta) {
        return Err(BlockError::DifferentFacet(lambda.to_string(), mu.to_string()));
    }
    let n = joint_window(&[lambda, mu], delta);
    let start = shift_windowed(lambda, delta, n);
    let goal = shift_windowed(mu, delta, n);
    // Greedy descent on L1 distance, with BFS as a safety net. The facet is
    // convex for these slot moves, so greedy terminates in practice.
    let dist = |a: &ShiftedPoint, b: &ShiftedPoint| -> i64 {
        a.doubled().iter().zip(b.doubled()).map(|(x, y)| (x - y).abs()).sum()
    };
    let mut chain = vec![start.clone()];
    let mut cur = start.clone();
    'greedy: while cur != goal {
        let d0 = dist(&cur, &goal);
        for cand in facet_steps(&cur) {
            if dist(&cand, &goal) < d0 {
                cur = cand;
                chain.push(cur.clone());
                continue 'greedy;
            }
        }
        // BFS fallback over the facet within a generous degree corridor.
        let mut seen = std::collections::HashSet::new();
        let mut back: std::collections::HashMap<Vec<i64>, Vec<i64>> = Default::default();
        let mut queue = VecDeque::new();
        seen.insert(start.doubled().to_vec());
        queue.push_back(start.clone());
        let bound = dist(&start, &goal) * 2 + 8;
        while let Some(x) = queue.pop_front() {
            if x == goal {
                break;
            }
            for cand in facet_steps(&x) {
                if dist(&cand, &goal) + dist(&cand, &start) > bound {
                    continue;
                }
                if seen.insert(cand.doubled().to_vec()) {
                    back.insert(cand.doubled().to_vec(), x.doubled().to_vec());
                    queue.push_back(cand);
                }
            }
        }
        assert!(seen.contains(goal.doubled()), "facet BFS failed to reach the target");
        let mut rev = vec![goal.doubled().to_vec()];
        while let Some(prev) = back.get(rev.last().unwrap()) {
            rev.push(prev.clone());
        }
        rev.reverse();
        chain = rev
            .into_iter()
            .map(|v| ShiftedPoint::from_doubled(v, delta))
            .collect();
        break;
    }
    Ok(chain
        .into_iter()
        .map(|x| x.unshift().expect("facet steps preserve parity"))
        .collect())
}

/// For negative delta, the unique block representative with few rows:
/// at most `m` rows for `delta = -2m`, at most `m+1` rows with last row 1
/// for `delta = -2m+1`. Requires the weight to be exactly `m`-singular.
pub fn canonical_negative_rep(w: &Weight, delta: i64) -> Result<Weight, BlockError> {
    assert!(delta < 0 && w.is_dominant());
    let m = if delta % 2 == 0 { (-delta / 2) as usize } else { ((1 - delta) / 2) as usize };
    let s = singularity_degree(w, delta);
    if s as usize > m {
        return Err(BlockError::TooSingular(w.to_string(), s, delta));
    }
    assert_eq!(s as usize, m, "dominant weights at delta={delta} are at least {m}-singular");
    // The paired moduli are an orbit invariant; the representative's leading
    // doubled entries are exactly those moduli in decreasing order.
    let x = shift(w, delta);
    let mut paired: Vec<i64> = Vec::new();
    let d = x.doubled();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            if d[i].abs() == d[j].abs() {
                paired.push(d[i].abs());
            }
        }
    }
    paired.sort_unstable_by(|a, b| b.cmp(a));
    assert_eq!(paired.len(), m);
    let from_prefix = |prefix: &[i64]| -> Option<Weight> {
        let mut entries = Vec::new();
        for (idx, &p) in prefix.iter().enumerate() {
            let i = idx as i64 + 1;
            let num = p + 2 * (i - 1) + delta;
            if num % 2 != 0 || num < 0 {
                return None;
            }
            entries.push(num / 2);
        }
        let cand = Weight::new(entries);
        cand.is_dominant().then_some(cand)
    };
    let mut candidates = Vec::new();
    if let Some(c) = from_prefix(&paired) {
        candidates.push(c);
    }
    if delta % 2 != 0 {
        // Odd delta: optionally one extra row of size 1 (doubled entry
        // 2 - 2m + delta... i.e. prefix extended by the +/-1 doubled value).
        let mut ext = paired.clone();
        ext.push(1);
        if let Some(c) = from_prefix(&ext) {
            candidates.push(c);
        }
    }
    for c in candidates {
        if same_block_weights(&c, w, delta) {
            return Ok(c);
        }
    }
    // Reachable for delta = -1: a paired modulus of 1/2 would need a final
    // row of size 0, so some blocks (e.g. that of (1,1,1), a singleton)
    // contain no small-row weight at all.
    Err(BlockError::NoRepresentative(w.to_string(), delta))
}
