//! The four graded block graphs, the regularisation map, edge colours and
//! canonical isomorphism checking.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Display;
use std::hash::{Hash, Hasher};

use thiserror::Error;

use crate::block::{enumerate_block, orbit_key_from_entries, same_block, BlockKey};
use crate::partition::{partitions_of, Partition};
use crate::weight::{joint_window, shift_windowed, weight_leq, ShiftedPoint, Weight};

/// Errors raised by graph operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("points are not adjacent via a single sign-flip reflection")]
    NotAdjacent,
    #[error("point is not in the dominant orbit of (-1,-2,-3,...)")]
    WrongOrbit,
}

/// A directed edge with an optional colour key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub colour: Option<u64>,
}

/// A rooted graded digraph with displayable vertex payloads.
#[derive(Debug, Clone)]
pub struct Digraph<T> {
    pub vertices: Vec<T>,
    pub edges: Vec<Edge>,
    pub root: Option<usize>,
}

/// An explicit isomorphism: `map[i]` is the image in the second graph of
/// vertex `i` of the first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphIso {
    pub map: Vec<usize>,
}

impl<T: Display> Digraph<T> {
    /// BFS levels from the root; `None` if rootless, unreachable vertices,
    /// or an edge violating the grading (level must step by exactly one).
    pub fn levels(&self) -> Option<Vec<usize>> {
        let root = self.root?;
        let n = self.vertices.len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for e in &self.edges {
            adj[e.from].push(e.to);
        }
        let mut level = vec![usize::MAX; n];
        level[root] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v] {
                if level[u] == usize::MAX {
                    level[u] = level[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        if level.iter().any(|&l| l == usize::MAX) {
            return None;
        }
        for e in &self.edges {
            if level[e.to] != level[e.from] + 1 {
                return None;
            }
        }
        Some(level)
    }

    /// Induced subgraph on the first `max_level + 1` levels.
    pub fn truncate_levels(&self, max_level: usize) -> Digraph<T>
    where
        T: Clone,
    {
        let levels = self.levels().expect("graph must be graded to truncate");
        let keep: Vec<usize> = (0..self.vertices.len()).filter(|&v| levels[v] <= max_level).collect();
        let index: HashMap<usize, usize> =
            keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        Digraph {
            vertices: keep.iter().map(|&v| self.vertices[v].clone()).collect(),
            edges: self
                .edges
                .iter()
                .filter(|e| index.contains_key(&e.from) && index.contains_key(&e.to))
                .map(|e| Edge { from: index[&e.from], to: index[&e.to], colour: e.colour })
                .collect(),
            root: self.root.map(|r| index[&r]),
        }
    }

    /// DOT rendering; colour keys are hashed onto a fixed palette.
    pub fn to_dot(&self) -> String {
        const PALETTE: [&str; 10] = [
            "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2",
            "#7f7f7f", "#bcbd22", "#17becf",
        ];
        let mut out = String::from("digraph block {\n  rankdir=BT;\n");
        for v in &self.vertices {
            out.push_str(&format!("  \"{v}\";\n"));
        }
        for e in &self.edges {
            let from = &self.vertices[e.from];
            let to = &self.vertices[e.to];
            match e.colour {
                Some(c) => out.push_str(&format!(
                    "  \"{from}\" -> \"{to}\" [color=\"{}\"];\n",
                    PALETTE[(c % PALETTE.len() as u64) as usize]
                )),
                None => out.push_str(&format!("  \"{from}\" -> \"{to}\";\n")),
            }
        }
        out.push_str("}\n");
        out
    }

    /// JSON adjacency export.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "vertices": self.vertices.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "root": self.root,
            "edges": self.edges.iter().map(|e| serde_json::json!({
                "from": e.from,
                "to": e.to,
                "colour": e.colour.map(|c| format!("{c:016x}")),
            })).collect::<Vec<_>>(),
        })
    }
}

/// The maximal-balanced-subpartition graph of a block of standard-module
/// labels: vertices are the block members of `lambda` up to the degree
/// bound, with an edge `mu -> tau` when `mu` is a maximal balanced
/// subpartition of `tau`.
pub fn mbs_graph(lambda: &Partition, delta: i64, max_degree: i64) -> Digraph<Partition> {
    let mut vertices: Vec<Partition> = Vec::new();
    for d in 0..=max_degree.max(0) {
        for p in partitions_of(d as u32) {
            if same_block(&p, lambda, delta).expect("delta nonzero") {
                vertices.push(p);
            }
        }
    }
    vertices.sort_by(|a, b| a.display_cmp(b));
    let mut edges = Vec::new();
    for (i, mu) in vertices.iter().enumerate() {
        for (j, tau) in vertices.iter().enumerate() {
            if i == j || !tau.contains(mu) || mu == tau {
                continue;
            }
            let intervening = vertices.iter().any(|nu| {
                nu != mu && nu != tau && nu.contains(mu) && tau.contains(nu)
            });
            if !intervening {
                edges.push(Edge { from: i, to: j, colour: None });
            }
        }
    }
    let root = vertices
        .iter()
        .enumerate()
        .find(|(i, _)| edges.iter().all(|e| e.to != *i))
        .map(|(i, _)| i);
    Digraph { vertices, edges, root }
}

/// Whether two shifted points at a common window differ by exactly one
/// sign-flip reflection; returns the flipped coordinate pair.
fn single_flip(x: &ShiftedPoint, y: &ShiftedPoint) -> Option<(usize, usize)> {
    assert_eq!(x.window(), y.window());
    let diff: Vec<usize> = (1..=x.window()).filter(|&i| x.entry(i) != y.entry(i)).collect();
    match diff.as_slice() {
        [i, j] if y.entry(*i) == -x.entry(*j) && y.entry(*j) == -x.entry(*i) => Some((*i, *j)),
        _ => None,
    }
}

/// Orbit invariant of the wall between two adjacent regular points: the
/// orbit key of the midpoint, in quadrupled coordinates.
pub fn edge_colour_key(x: &ShiftedPoint, y: &ShiftedPoint) -> Result<BlockKey, GraphError> {
    let n = x.window().max(y.window());
    let (x, y) = (x.extend_to(n), y.extend_to(n));
    if x.singularity_degree() != 0 || y.singularity_degree() != 0 || single_flip(&x, &y).is_none() {
        return Err(GraphError::NotAdjacent);
    }
    let quadrupled: Vec<i64> = (1..=n).map(|i| x.entry(i) + y.entry(i)).collect();
    Ok(orbit_key_from_entries(&quadrupled, 4, 2 * x.delta()))
}

fn colour_hash(key: &BlockKey) -> u64 {
    let mut h = DefaultHasher::new();
    key.hash(&mut h);
    h.finish()
}

/// The cover graph of the entrywise order on the dominant orbit of a
/// weight, truncated by degree. Edges between regular adjacent vertices
/// carry the wall-orbit colour key.
pub fn orbit_graph(root: &Weight, delta: i64, max_degree: i64) -> Digraph<Weight> {
    let block = enumerate_block(root, delta, max_degree);
    let vertices = block.members;
    let n = {
        let refs: Vec<&Weight> = vertices.iter().collect();
        joint_window(&refs, delta)
    };
    let shifted: Vec<ShiftedPoint> =
        vertices.iter().map(|v| shift_windowed(v, delta, n)).collect();
    let mut edges = Vec::new();
    for (i, x) in vertices.iter().enumerate() {
        for (j, y) in vertices.iter().enumerate() {
            if i == j || !weight_leq(x, y) {
                continue;
            }
            let intervening = vertices
                .iter()
                .enumerate()
                .any(|(k, z)| k != i && k != j && weight_leq(x, z) && weight_leq(z, y));
            if !intervening {
                let colour = edge_colour_key(&shifted[i], &shifted[j]).ok().map(|k| colour_hash(&k));
                edges.push(Edge { from: i, to: j, colour });
            }
        }
    }
    let root_idx = vertices
        .iter()
        .enumerate()
        .find(|(i, _)| edges.iter().all(|e| e.to != *i))
        .map(|(i, _)| i);
    Digraph { vertices, edges, root: root_idx }
}

/// Deletes the doubleton coordinates of a dominant point, producing a
/// regular point for the shifted parameter `delta + 4k` (doubled units),
/// `k` the number of doubletons removed.
pub fn regularise(v: &ShiftedPoint) -> ShiftedPoint {
    assert!(v.is_strictly_decreasing());
    let d = v.doubled();
    let mut drop = vec![false; d.len()];
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            if d[i].abs() == d[j].abs() {
                drop[i] = true;
                drop[j] = true;
            }
        }
    }
    let k = drop.iter().filter(|&&b| b).count() / 2;
    let kept: Vec<i64> = d.iter().zip(&drop).filter(|(_, &dr)| !dr).map(|(&x, _)| x).collect();
    ShiftedPoint::from_doubled(kept, v.delta() + 4 * k as i64)
}

/// All strictly decreasing partitions with an even number of parts and
/// degree at most the bound.
pub fn strict_even_partitions(max_degree: i64) -> Vec<Partition> {
    let mut out = Vec::new();
    for d in 0..=max_degree.max(0) {
        for p in partitions_of(d as u32) {
            let strict = p.parts().windows(2).all(|w| w[0] > w[1]);
            if strict && p.len() % 2 == 0 {
                out.push(p);
            }
        }
    }
    out.sort_by(|a, b| a.display_cmp(b));
    out
}

/// The explicit-rule graph on strictly decreasing even-length partitions:
/// either increment one part (keeping strict decrease), or append `(2,1)`
/// when the last part is at least 3 (vacuously for the empty partition).
pub fn par_e_graph(max_degree: i64) -> Digraph<Partition> {
    let vertices = strict_even_partitions(max_degree);
    let index: HashMap<&Partition, usize> =
        vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut edges = Vec::new();
    for (i, lam) in vertices.iter().enumerate() {
        // Rule 1: increment a part.
        for row in 0..lam.len() {
            let mut parts = lam.parts().to_vec();
            parts[row] += 1;
            if row == 0 || parts[row - 1] > parts[row] {
                let cand = Partition::new(parts);
                if let Some(&j) = index.get(&cand) {
                    edges.push(Edge { from: i, to: j, colour: None });
                }
            }
        }
        // Rule 2: append (2,1) below a last part of at least 3.
        if lam.is_empty() || lam.part(lam.len() - 1) >= 3 {
            let mut parts = lam.parts().to_vec();
            parts.extend([2, 1]);
            let cand = Partition::new(parts);
            if let Some(&j) = index.get(&cand) {
                edges.push(Edge { from: i, to: j, colour: None });
            }
        }
    }
    let root = index.get(&Partition::empty()).copied();
    Digraph { vertices, edges, root }
}

/// Reads off the positive entries of a dominant point in the orbit of
/// `(-1,-2,-3,...)` (delta = 2, weight 0) as a strict even partition.
pub fn phi(x: &ShiftedPoint) -> Result<Partition, GraphError> {
    if x.delta() != 2 {
        return Err(GraphError::WrongOrbit);
    }
    let w = x.unshift().map_err(|_| GraphError::WrongOrbit)?;
    if !w.is_dominant() || !crate::block::same_block_weights(&w, &Weight::zero(), 2) {
        return Err(GraphError::WrongOrbit);
    }
    let mut parts: Vec<u32> = x
        .doubled()
        .iter()
        .filter(|&&d| d > 0)
        .map(|&d| {
            debug_assert_eq!(d % 2, 0);
            (d / 2) as u32
        })
        .collect();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Ok(Partition::new(parts))
}

/// The inverse of [`phi`]: the orbit point whose positive undoubled entries
/// are the given strict even partition.
pub fn phi_inverse(p: &Partition, window: usize) -> ShiftedPoint {
    assert!(p.parts().windows(2).all(|w| w[0] > w[1]) && p.len() % 2 == 0);
    let positives: HashSet<i64> = p.parts().iter().map(|&x| x as i64).collect();
    let mut entries: Vec<i64> = positives.iter().map(|&v| 2 * v).collect();
    let mut next = 1i64;
    while entries.len() < window {
        if !positives.contains(&next) {
            entries.push(-2 * next);
        }
        next += 1;
    }
    entries.sort_unstable_by(|a, b| b.cmp(a));
    ShiftedPoint::from_doubled(entries, 2)
}

/// Canonical level-by-level isomorphism search on rooted graded digraphs,
/// driven by iterated adjacency fingerprints. Edge colour classes are
/// matched when both graphs carry colours.
pub fn check_isomorphism<A: Display, B: Display>(
    g: &Digraph<A>,
    h: &Digraph<B>,
) -> Option<GraphIso> {
    if g.vertices.len() != h.vertices.len() {
        return None;
    }
    let gl = g.levels()?;
    let hl = h.levels()?;
    let use_colours = g.edges.iter().any(|e| e.colour.is_some())
        && h.edges.iter().any(|e| e.colour.is_some());
    let strip = |edges: &[Edge]| -> Vec<Edge> {
        edges
            .iter()
            .map(|e| Edge { from: e.from, to: e.to, colour: if use_colours { e.colour } else { None } })
            .collect()
    };
    let ge = strip(&g.edges);
    let he = strip(&h.edges);

    // Iterated refinement of vertex fingerprints.
    let refine = |n: usize, levels: &[usize], edges: &[Edge]| -> Vec<u64> {
        let mut colour: Vec<u64> = levels.iter().map(|&l| l as u64).collect();
        for _ in 0..n {
            let mut sigs: Vec<(u64, Vec<(u64, u64)>, Vec<(u64, u64)>)> =
                colour.iter().map(|&c| (c, Vec::new(), Vec::new())).collect();
            for e in edges {
                let ec = e.colour.unwrap_or(0);
                sigs[e.from].1.push((colour[e.to], ec));
                sigs[e.to].2.push((colour[e.from], ec));
            }
            colour = sigs
                .into_iter()
                .map(|(c, mut out, mut inc)| {
                    out.sort_unstable();
                    inc.sort_unstable();
                    let mut hsh = DefaultHasher::new();
                    (c, out, inc).hash(&mut hsh);
                    hsh.finish()
                })
                .collect();
        }
        colour
    };
    let gc = refine(g.vertices.len(), &gl, &ge);
    let hc = refine(h.vertices.len(), &hl, &he);

    let max_level = *gl.iter().max().unwrap_or(&0);
    if gl.iter().max() != hl.iter().max() {
        return None;
    }
    // Per-level candidate sets grouped by fingerprint.
    let mut map = vec![usize::MAX; g.vertices.len()];
    let mut used = vec![false; h.vertices.len()];
    let g_in: Vec<Vec<(usize, Option<u64>)>> = {
        let mut v = vec![Vec::new(); g.vertices.len()];
        for e in &ge {
            v[e.to].push((e.from, e.colour));
        }
        v
    };
    let h_in: Vec<Vec<(usize, Option<u64>)>> = {
        let mut v = vec![Vec::new(); h.vertices.len()];
        for e in &he {
            v[e.to].push((e.from, e.colour));
        }
        v
    };

    fn assign(
        level: usize,
        max_level: usize,
        g_level: &BTreeMap<usize, Vec<usize>>,
        h_level: &BTreeMap<usize, Vec<usize>>,
        gc: &[u64],
        hc: &[u64],
        g_in: &[Vec<(usize, Option<u64>)>],
        h_in: &[Vec<(usize, Option<u64>)>],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if level > max_level {
            return true;
        }
        let gs = g_level.get(&level).cloned().unwrap_or_default();
        let hs = h_level.get(&level).cloned().unwrap_or_default();
        if gs.len() != hs.len() {
            return false;
        }
        // Backtracking over this level's vertices.
        fn place(
            pos: usize,
            gs: &[usize],
            hs: &[usize],
            gc: &[u64],
            hc: &[u64],
            g_in: &[Vec<(usize, Option<u64>)>],
            h_in: &[Vec<(usize, Option<u64>)>],
            map: &mut Vec<usize>,
            used: &mut Vec<bool>,
        ) -> bool {
            if pos == gs.len() {
                return true;
            }
            let v = gs[pos];
            for &u in hs {
                if used[u] || gc[v] != hc[u] {
                    continue;
                }
                // In-neighbourhood (already mapped) must match with colours.
                let mut mine: Vec<(usize, Option<u64>)> =
                    g_in[v].iter().map(|&(p, c)| (map[p], c)).collect();
                let mut theirs = h_in[u].clone();
                mine.sort_unstable();
                theirs.sort_unstable();
                if mine != theirs {
                    continue;
                }
                map[v] = u;
                used[u] = true;
                if place(pos + 1, gs, hs, gc, hc, g_in, h_in, map, used) {
                    return true;
                }
                map[v] = usize::MAX;
                used[u] = false;
            }
            false
        }
        if !place(0, &gs, &hs, gc, hc, g_in, h_in, map, used) {
            return false;
        }
        assign(level + 1, max_level, g_level, h_level, gc, hc, g_in, h_in, map, used)
    }

    let mut g_level: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut h_level: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (v, &l) in gl.iter().enumerate() {
        g_level.entry(l).or_default().push(v);
    }
    for (v, &l) in hl.iter().enumerate() {
        h_level.entry(l).or_default().push(v);
    }
    if !assign(0, max_level, &g_level, &h_level, &gc, &hc, &g_in, &h_in, &mut map, &mut used) {
        return None;
    }
    // Full edge verification (out-edges were only constrained indirectly).
    let hset: HashSet<(usize, usize, Option<u64>)> =
        he.iter().map(|e| (e.from, e.to, e.colour)).collect();
    if he.len() != ge.len() {
        return None;
    }
    for e in &ge {
        if !hset.contains(&(map[e.from], map[e.to], e.colour)) {
            return None;
        }
    }
    Some(GraphIso { map })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::shift;

    fn w(s: &str) -> Weight {
        s.parse().unwrap()
    }

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn mbs_examples() {
        let g = mbs_graph(&Partition::empty(), 1, 8);
        let root = g.root.unwrap();
        assert_eq!(g.vertices[root], Partition::empty());
        let out: Vec<&Partition> = g
            .edges
            .iter()
            .filter(|e| e.from == root)
            .map(|e| &g.vertices[e.to])
            .collect();
        assert_eq!(out, vec![&p("2,2")]);

        let g0 = mbs_graph(&Partition::empty(), 1, 0);
        assert_eq!(g0.vertices.len(), 1);
        assert!(g0.edges.is_empty());

        let g16 = mbs_graph(&Partition::empty(), 1, 16);
        let root = g16.root.unwrap();
        let outdeg = g16.edges.iter().filter(|e| e.from == root).count();
        assert_eq!(outdeg, 1, "only (2,2) covers the empty partition");
    }

    #[test]
    fn orbit_graph_examples() {
        let g = orbit_graph(&Weight::zero(), 1, 16);
        assert_eq!(g.vertices.len(), 18);
        let root = g.root.unwrap();
        assert_eq!(g.vertices[root], Weight::zero());
        let out: Vec<&Weight> = g
            .edges
            .iter()
            .filter(|e| e.from == root)
            .map(|e| &g.vertices[e.to])
            .collect();
        assert_eq!(out, vec![&w("2,2")]);
        assert!(g.levels().is_some(), "orbit graph must be graded");

        let g0 = orbit_graph(&Weight::zero(), 1, 0);
        assert_eq!(g0.vertices.len(), 1);
    }

    #[test]
    fn regularise_examples() {
        // (9,8,7,0,-1,-2,-7,-9,-11,...) -> (8,0,-1,-2,-11,...): the pairs
        // (9,-9) and (7,-7) are deleted; tail says delta/2 = 3 in undoubled
        // units (entry at position 9 is -(8 + delta/2) = -11).
        let x = ShiftedPoint::from_doubled(
            vec![18, 16, 14, 0, -2, -4, -14, -18, -22],
            6,
        );
        let r = regularise(&x);
        assert_eq!(r.doubled(), &[16, 0, -2, -4, -22]);
        assert_eq!(r.delta(), 6 + 8);
        // Tail consistency: position 6 of the result should continue -12.5?
        // No: generic undoubled tail is -(i-1) - delta'/2 = -5 - 7 = -12 at
        // position 6, matching the original tail -12 at position 10.
        assert_eq!(r.entry(6), -(2 * 5 + 14));

        let regular = shift(&w("2,2"), 1);
        assert_eq!(regularise(&regular), regular);

        let z = shift(&Weight::zero(), -2);
        let r = regularise(&z);
        assert_eq!(r.doubled(), &[0]);
        assert_eq!(r.delta(), 2);
    }

    #[test]
    fn par_e_examples() {
        let g = par_e_graph(8);
        let idx = |q: &Partition| g.vertices.iter().position(|v| v == q).unwrap();
        let has = |a: &Partition, b: &Partition| {
            g.edges.iter().any(|e| e.from == idx(a) && e.to == idx(b))
        };
        assert!(has(&Partition::empty(), &p("2,1")));
        assert!(has(&p("2,1"), &p("3,1")));
        let g10 = par_e_graph(10);
        let idx10 = |q: &Partition| g10.vertices.iter().position(|v| v == q).unwrap();
        assert!(g10
            .edges
            .iter()
            .any(|e| e.from == idx10(&p("4,3")) && e.to == idx10(&p("4,3,2,1"))));
    }

    #[test]
    fn phi_examples() {
        let x = ShiftedPoint::from_doubled(vec![12, 10, 6, 2, -4, -8, -14, -16], 2);
        assert_eq!(phi(&x).unwrap(), p("6,5,3,1"));
        let v = shift_windowed(&Weight::zero(), 2, 4);
        assert_eq!(phi(&v).unwrap(), Partition::empty());
        let y = ShiftedPoint::from_doubled(vec![4, 2, -6, -8], 2);
        assert_eq!(phi(&y).unwrap(), p("2,1"));
        assert_eq!(phi_inverse(&p("2,1"), 4).doubled(), y.doubled());
        // Wrong-orbit input is rejected.
        let bad = shift(&w("1"), 2);
        assert!(phi(&bad).is_err());
    }

    #[test]
    fn colour_examples() {
        let n = 6;
        let x0 = shift_windowed(&Weight::zero(), 1, n);
        let x22 = shift_windowed(&w("2,2"), 1, n);
        let x321 = shift_windowed(&w("3,2,1"), 1, n);
        let c1 = edge_colour_key(&x0, &x22).unwrap();
        let c1b = edge_colour_key(&x22, &x0).unwrap();
        assert_eq!(c1, c1b);
        let c2 = edge_colour_key(&x22, &x321).unwrap();
        assert_ne!(c1, c2);
        assert!(edge_colour_key(&x0, &x321).is_err());
    }

    #[test]
    fn iso_examples() {
        let g = orbit_graph(&Weight::zero(), 1, 12);
        let id = check_isomorphism(&g, &g).unwrap();
        assert!(id.map.iter().enumerate().all(|(i, &j)| i == j));

        let m = mbs_graph(&Partition::empty(), 1, 12);
        assert!(check_isomorphism(&m, &g).is_some());

        let h = orbit_graph(&Weight::zero(), 1, 10);
        assert!(check_isomorphism(&h, &g).is_none(), "different sizes");
    }
}
