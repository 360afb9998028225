//! Finite simple undirected graphs: representation, generators, and the
//! deterministic structural checks used by every other module.
//!
//! Vertices are dense indices `0..n`. Edges are stored in canonical form
//! (smaller endpoint first) and sorted; an edge's position in that list is
//! its index for clock sampling, which keeps runs reproducible.

use std::io::BufRead;

use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// An undirected simple graph on vertices `0..n`.
///
/// Connectivity is not an invariant of the type; it is checked by
/// [`Graph::is_connected`] and required by the simulation entry points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Number of vertices.
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical sorted edge list; `edges()[i]` is the edge with clock index `i`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edge with the given clock index.
    pub fn edge(&self, index: usize) -> (usize, usize) {
        self.edges[index]
    }

    /// Neighbors of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    fn from_canonical_edges(n: usize, mut edges: Vec<(usize, usize)>) -> Self {
        edges.sort_unstable();
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        Graph { n, edges, adjacency }
    }

    /// Cycle on `n >= 3` vertices: edges `{i, (i+1) mod n}`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!(
                "cycle needs at least 3 vertices, got {n}"
            )));
        }
        let edges = (0..n)
            .map(|i| canonical(i, (i + 1) % n))
            .collect();
        Ok(Self::from_canonical_edges(n, edges))
    }

    /// Path on `n >= 2` vertices: edges `{i, i+1}`.
    pub fn path(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "path needs at least 2 vertices, got {n}"
            )));
        }
        let edges = (0..n - 1).map(|i| (i, i + 1)).collect();
        Ok(Self::from_canonical_edges(n, edges))
    }

    /// Complete graph on `n >= 2` vertices.
    pub fn complete(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "complete graph needs at least 2 vertices, got {n}"
            )));
        }
        let mut edges = Vec::with_capacity(n * (n - 1) / 2);
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Ok(Self::from_canonical_edges(n, edges))
    }

    /// Discrete torus with wraparound: `dim = 1` is the cycle on `side`
    /// vertices, `dim = 2` the `side x side` grid torus with `2 * side^2`
    /// edges. Requires `side >= 3`.
    pub fn torus(side: usize, dim: usize) -> Result<Self> {
        if side < 3 {
            return Err(Error::InvalidParameter(format!(
                "torus needs side >= 3, got {side}"
            )));
        }
        match dim {
            1 => Self::cycle(side),
            2 => {
                let n = side * side;
                let at = |r: usize, c: usize| r * side + c;
                let mut edges = Vec::with_capacity(2 * n);
                for r in 0..side {
                    for c in 0..side {
                        edges.push(canonical(at(r, c), at(r, (c + 1) % side)));
                        edges.push(canonical(at(r, c), at((r + 1) % side, c)));
                    }
                }
                Ok(Self::from_canonical_edges(n, edges))
            }
            _ => Err(Error::InvalidParameter(format!(
                "torus dimension must be 1 or 2, got {dim}"
            ))),
        }
    }

    /// Builds a graph from an explicit edge list, rejecting out-of-range
    /// indices, self-loops, and duplicate unordered pairs.
    pub fn from_edge_list(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("vertex count must be positive".into()));
        }
        let mut seen = std::collections::HashSet::with_capacity(pairs.len());
        let mut edges = Vec::with_capacity(pairs.len());
        for &(u, v) in pairs {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            let e = canonical(u, v);
            if !seen.insert(e) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge ({}, {})",
                    e.0, e.1
                )));
            }
            edges.push(e);
        }
        Ok(Self::from_canonical_edges(n, edges))
    }

    /// Reads the plain-text edge-list format: first line `n m`, then `m`
    /// lines `u v` with 0-based endpoints. Malformed input is rejected with
    /// the 1-based offending line.
    pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines().enumerate();
        let (n, m) = match lines.next() {
            Some((i, line)) => {
                let line = line?;
                parse_pair(&line, i + 1, "expected header `n m`")?
            }
            None => {
                return Err(Error::Parse {
                    line: 1,
                    msg: "empty input, expected header `n m`".into(),
                })
            }
        };
        let mut pairs = Vec::with_capacity(m);
        for _ in 0..m {
            match lines.next() {
                Some((i, line)) => {
                    let line = line?;
                    pairs.push(parse_pair(&line, i + 1, "expected edge `u v`")?);
                }
                None => {
                    return Err(Error::Parse {
                        line: m + 1,
                        msg: format!("expected {m} edges, input ended early"),
                    })
                }
            }
        }
        Self::from_edge_list(n, &pairs)
    }

    /// Random connected graph: a uniform random attachment tree plus
    /// `extra_edges` additional distinct random edges. Used by the
    /// verification suites; connectivity holds by construction.
    pub fn random_connected<G: Rng>(n: usize, extra_edges: usize, rng: &mut G) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "random connected graph needs at least 2 vertices, got {n}"
            )));
        }
        let mut seen = std::collections::HashSet::new();
        let mut edges = Vec::with_capacity(n - 1 + extra_edges);
        for v in 1..n {
            let u = rng.random_range(0..v);
            let e = canonical(u, v);
            seen.insert(e);
            edges.push(e);
        }
        let max_edges = n * (n - 1) / 2;
        let mut added = 0;
        while added < extra_edges && edges.len() < max_edges {
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            if u == v {
                continue;
            }
            let e = canonical(u, v);
            if seen.insert(e) {
                edges.push(e);
                added += 1;
            }
        }
        Ok(Self::from_canonical_edges(n, edges))
    }

    /// True iff a traversal from vertex 0 reaches all `n` vertices.
    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut visited = vec![false; self.n];
        let mut stack = vec![0usize];
        visited[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adjacency[v] {
                if !visited[w] {
                    visited[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// Errors unless the graph is connected; used by simulation entry points.
    pub fn require_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::InvalidGraph("graph is not connected".into()))
        }
    }
}

#[inline]
fn canonical(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

fn parse_pair(line: &str, lineno: usize, what: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let parse = |tok: Option<&str>| -> Result<usize> {
        tok.ok_or_else(|| Error::Parse {
            line: lineno,
            msg: format!("{what}, got `{line}`"),
        })?
        .parse()
        .map_err(|_| Error::Parse {
            line: lineno,
            msg: format!("{what}, got `{line}`"),
        })
    };
    let a = parse(it.next())?;
    let b = parse(it.next())?;
    if it.next().is_some() {
        return Err(Error::Parse {
            line: lineno,
            msg: format!("trailing tokens after `{a} {b}`"),
        });
    }
    Ok((a, b))
}

/// The three quantities of the chained Dirichlet-energy inequality for a
/// mean-zero vertex function `g`:
///
/// `dirichlet = sum over edges of (g(v) - g(w))^2`,
/// `osc_term  = (osc g)^2 / n`,
/// `l2_term   = sum of g(v)^2 / n^2`,
///
/// and on any connected graph `dirichlet >= osc_term >= l2_term` holds
/// pointwise (not just in expectation).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralGapTerms<R> {
    pub dirichlet: R,
    pub osc_term: R,
    pub l2_term: R,
}

/// Evaluates the three terms of the spectral-gap inequality chain for a
/// mean-zero `g`. Errors on disconnected graphs and non-mean-zero input
/// (`|sum g| <= 1e-9 * n * max|g|`).
pub fn spectral_gap_check<R: Real>(g: &Graph, gvec: &[R]) -> Result<SpectralGapTerms<R>> {
    if gvec.len() != g.vertex_count() {
        return Err(Error::InvalidParameter(format!(
            "vector length {} does not match vertex count {}",
            gvec.len(),
            g.vertex_count()
        )));
    }
    g.require_connected()
        .map_err(|_| Error::InvalidGraph("spectral gap check needs a connected graph".into()))?;
    let n = R::of(g.vertex_count() as f64);
    let sum: R = gvec.iter().copied().sum();
    let max_abs = gvec
        .iter()
        .fold(R::zero(), |acc, &x| acc.max(x.abs()));
    if sum.abs() > R::of(1e-9) * n * max_abs {
        return Err(Error::InvalidParameter(format!(
            "input is not mean-zero: sum = {sum}"
        )));
    }
    let mut dirichlet = R::zero();
    for &(u, v) in g.edges() {
        let d = gvec[u] - gvec[v];
        dirichlet += d * d;
    }
    let (lo, hi) = gvec.iter().fold((gvec[0], gvec[0]), |(lo, hi), &x| {
        (lo.min(x), hi.max(x))
    });
    let osc = hi - lo;
    let osc_term = osc * osc / n;
    let l2: R = gvec.iter().map(|&x| x * x).sum();
    let l2_term = l2 / (n * n);
    Ok(SpectralGapTerms {
        dirichlet,
        osc_term,
        l2_term,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cycle_has_expected_edges() {
        let g = Graph::cycle(4).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 3), (1, 2), (2, 3)]);
        let g3 = Graph::cycle(3).unwrap();
        assert_eq!(g3.vertex_count(), 3);
        assert_eq!(g3.edge_count(), 3);
        for v in 0..3 {
            assert_eq!(g3.neighbors(v).len(), 2);
        }
        assert!(matches!(Graph::cycle(2), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn path_has_expected_edges() {
        assert_eq!(Graph::path(2).unwrap().edges(), &[(0, 1)]);
        let g = Graph::path(5).unwrap();
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.neighbors(0).len(), 1);
        assert_eq!(g.neighbors(4).len(), 1);
        assert!(Graph::path(1).is_err());
    }

    #[test]
    fn complete_edge_counts() {
        assert_eq!(Graph::complete(3).unwrap().edge_count(), 3);
        assert_eq!(Graph::complete(4).unwrap().edge_count(), 6);
        assert_eq!(Graph::complete(2).unwrap(), Graph::path(2).unwrap());
        assert!(Graph::complete(1).is_err());
    }

    #[test]
    fn torus_matches_cycle_in_dim_one() {
        let t = Graph::torus(5, 1).unwrap();
        let c = Graph::cycle(5).unwrap();
        assert_eq!(t.edges(), c.edges());
    }

    #[test]
    fn torus_3x3_by_enumeration() {
        let g = Graph::torus(3, 2).unwrap();
        assert_eq!(g.vertex_count(), 9);
        assert_eq!(g.edge_count(), 18);
        for v in 0..9 {
            assert_eq!(g.neighbors(v).len(), 4);
        }
        assert!(Graph::torus(2, 2).is_err());
        assert!(Graph::torus(4, 3).is_err());
    }

    #[test]
    fn edge_list_rejects_malformed() {
        let g = Graph::from_edge_list(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(g.edges(), Graph::path(3).unwrap().edges());
        let err = Graph::from_edge_list(3, &[(0, 0)]).unwrap_err();
        assert!(err.to_string().contains("self-loop"));
        let err = Graph::from_edge_list(3, &[(0, 1), (1, 0)]).unwrap_err();
        assert!(err.to_string().contains("duplicate"));
        let err = Graph::from_edge_list(3, &[(0, 7)]).unwrap_err();
        assert!(err.to_string().contains("outside"));
    }

    #[test]
    fn connectivity() {
        assert!(Graph::cycle(7).unwrap().is_connected());
        assert!(!Graph::from_edge_list(4, &[(0, 1), (2, 3)])
            .unwrap()
            .is_connected());
        assert!(Graph::from_edge_list(1, &[]).unwrap().is_connected());
    }

    #[test]
    fn read_edge_list_roundtrip_and_errors() {
        let text = "3 2\n0 1\n1 2\n";
        let g = Graph::read_edge_list(text.as_bytes()).unwrap();
        assert_eq!(g.edges(), Graph::path(3).unwrap().edges());

        let bad = "3 2\n0 1\nx 2\n";
        match Graph::read_edge_list(bad.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }

        let short = "3 2\n0 1\n";
        assert!(matches!(
            Graph::read_edge_list(short.as_bytes()),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn spectral_gap_on_k2() {
        let g = Graph::complete(2).unwrap();
        let t = spectral_gap_check(&g, &[1.0, -1.0]).unwrap();
        assert_eq!(t.dirichlet, 4.0);
        assert_eq!(t.osc_term, 2.0);
        assert_eq!(t.l2_term, 0.5);
    }

    #[test]
    fn spectral_gap_on_cycle4() {
        let g = Graph::cycle(4).unwrap();
        let t = spectral_gap_check(&g, &[1.0, 0.0, -1.0, 0.0]).unwrap();
        assert_eq!(t.dirichlet, 4.0);
        assert_eq!(t.osc_term, 1.0);
        assert_eq!(t.l2_term, 0.125);
    }

    #[test]
    fn spectral_gap_degenerate_and_errors() {
        let g = Graph::cycle(4).unwrap();
        let t = spectral_gap_check(&g, &[0.0; 4]).unwrap();
        assert_eq!((t.dirichlet, t.osc_term, t.l2_term), (0.0, 0.0, 0.0));

        assert!(matches!(
            spectral_gap_check(&g, &[1.0, 1.0, 1.0, 1.0]),
            Err(Error::InvalidParameter(_))
        ));
        let disc = Graph::from_edge_list(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(
            spectral_gap_check(&disc, &[1.0, -1.0, 1.0, -1.0]),
            Err(Error::InvalidGraph(_))
        ));
    }

    #[test]
    fn random_connected_is_connected() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let n = rng.random_range(2..40);
            let extra = rng.random_range(0..n);
            let g = Graph::random_connected(n, extra, &mut rng).unwrap();
            assert!(g.is_connected());
            assert_eq!(g.vertex_count(), n);
        }
    }

    proptest! {
        #[test]
        fn generators_are_connected_with_unique_canonical_edges(n in 3usize..40) {
            for g in [
                Graph::cycle(n).unwrap(),
                Graph::path(n).unwrap(),
                Graph::complete(n).unwrap(),
                Graph::torus(n.min(8).max(3), 2).unwrap(),
            ] {
                prop_assert!(g.is_connected());
                let mut sorted = g.edges().to_vec();
                sorted.dedup();
                prop_assert_eq!(sorted.len(), g.edge_count());
                for &(u, v) in g.edges() {
                    prop_assert!(u < v);
                    prop_assert!(v < g.vertex_count());
                }
            }
        }

        #[test]
        fn torus_dim1_equals_cycle(side in 3usize..64) {
            let t = Graph::torus(side, 1).unwrap();
            let c = Graph::cycle(side).unwrap();
            prop_assert_eq!(t.edges(), c.edges());
        }

        #[test]
        fn spectral_chain_holds_on_random_instances(seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.random_range(2..32);
            let extra = rng.random_range(0..n);
            let g = Graph::random_connected(n, extra, &mut rng).unwrap();
            let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let mean = v.iter().sum::<f64>() / n as f64;
            v.iter_mut().for_each(|x| *x -= mean);
            let t = spectral_gap_check(&g, &v).unwrap();
            prop_assert!(t.dirichlet >= t.osc_term * (1.0 - 1e-9));
            prop_assert!(t.osc_term >= t.l2_term * (1.0 - 1e-9));
        }
    }
}
