//! Graphs, named families, bipartitions and the distance-3 vertex sets that
//! gate the analytic witness constructions.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest vertex count supported by graph and diagonal operations.
pub const MAX_QUBITS: usize = 24;

/// Simple undirected graph on `n` vertices. Adjacency is kept as bitmasks.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;
    fn try_from(g: GraphJson) -> Result<Self> {
        Graph::new(g.n, g.edges.iter().map(|e| (e[0], e[1])))
    }
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> Self {
        GraphJson { n: g.n, edges: g.edges.iter().map(|&(a, b)| [a, b]).collect() }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges)
    }
}

impl Graph {
    /// Builds a graph, normalizing each edge to `(i, j)` with `i < j` and
    /// dropping duplicates.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadParams("graph needs at least one vertex".into()));
        }
        if n > MAX_QUBITS {
            return Err(Error::CapExceeded { what: "graph", n, max: MAX_QUBITS });
        }
        let mut adj = vec![0usize; n];
        for (a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(Error::VertexOutOfRange { v, n });
                }
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        Ok(Self::from_adjacency(adj))
    }

    fn from_adjacency(adj: Vec<usize>) -> Self {
        let n = adj.len();
        let mut edges = Vec::new();
        for (i, &row) in adj.iter().enumerate() {
            for j in i + 1..n {
                if row >> j & 1 == 1 {
                    edges.push((i, j));
                }
            }
        }
        Graph { n, edges, adj }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Mask of all vertices.
    pub fn full_mask(&self) -> usize {
        (1 << self.n) - 1
    }

    fn check(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { v, n: self.n })
        }
    }

    /// Neighborhood of `i` as a bitmask. Panics on an out-of-range vertex.
    pub fn nbr_mask(&self, i: usize) -> usize {
        self.adj[i]
    }

    /// Neighbor bitmasks of all vertices.
    pub fn adjacency(&self) -> &[usize] {
        &self.adj
    }

    pub fn neighborhood(&self, i: usize) -> Result<Vec<usize>> {
        self.check(i)?;
        Ok(bits(self.adj[i]).collect())
    }

    /// `N(i) ∪ {i}`.
    pub fn closed_neighborhood(&self, i: usize) -> Result<Vec<usize>> {
        self.check(i)?;
        Ok(bits(self.adj[i] | 1 << i).collect())
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n && b < self.n && self.adj[a] >> b & 1 == 1
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = 1usize;
        let mut frontier = 1usize;
        while frontier != 0 {
            let mut next = 0;
            for v in bits(frontier) {
                next |= self.adj[v];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen == self.full_mask()
    }

    /// Toggles every edge between two neighbors of `i`.
    pub fn local_complement(&self, i: usize) -> Result<Graph> {
        self.check(i)?;
        let nb = self.adj[i];
        let mut adj = self.adj.clone();
        for v in bits(nb) {
            adj[v] ^= nb & !(1 << v);
        }
        Ok(Self::from_adjacency(adj))
    }

    /// Removes all edges with both endpoints on the same side of `m`.
    pub fn delete_intra_partition_edges(&self, m: &Bipartition) -> Graph {
        let mask = m.mask();
        let full = self.full_mask();
        let adj = (0..self.n)
            .map(|v| {
                let other = if mask >> v & 1 == 1 { full & !mask } else { mask };
                self.adj[v] & other
            })
            .collect();
        Self::from_adjacency(adj)
    }

    /// Vertices at distance one or two from `v`.
    pub fn ball2(&self, v: usize) -> usize {
        let mut out = self.adj[v];
        for u in bits(self.adj[v]) {
            out |= self.adj[u];
        }
        out & !(1 << v)
    }

    /// Builds a named graph.
    pub fn named(family: &Family) -> Result<Graph> {
        match *family {
            Family::Catalog(id) => crate::catalog::entry(id).map(|e| e.graph.clone()),
            Family::Linear(n) => {
                need(n >= 1, "linear graph needs n >= 1")?;
                Graph::new(n, (1..n).map(|i| (i - 1, i)))
            }
            Family::Ring(n) => {
                need(n >= 3, "ring needs n >= 3")?;
                Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
            }
            Family::Star(n) => {
                need(n >= 1, "star needs n >= 1")?;
                Graph::new(n, (1..n).map(|i| (0, i)))
            }
            Family::Grid { w, h, periodic } => {
                need(w >= 2 && h >= 2, "grid must be at least 2x2")?;
                need(!periodic || (w >= 3 && h >= 3), "periodic grid must be at least 3x3")?;
                let at = |r: usize, c: usize| r * w + c;
                let mut e = Vec::new();
                for r in 0..h {
                    for c in 0..w {
                        if c + 1 < w || periodic {
                            e.push((at(r, c), at(r, (c + 1) % w)));
                        }
                        if r + 1 < h || periodic {
                            e.push((at(r, c), at((r + 1) % h, c)));
                        }
                    }
                }
                Graph::new(w * h, e)
            }
        }
    }
}

fn need(ok: bool, msg: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::BadParams(msg.into()))
    }
}

/// Iterates the set bits of a mask in increasing order.
pub fn bits(mut m: usize) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

pub fn mask_of(vs: &[usize]) -> usize {
    vs.iter().fold(0, |m, &v| m | 1 << v)
}

/// Named graph families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Catalog(usize),
    Linear(usize),
    Ring(usize),
    Star(usize),
    Grid { w: usize, h: usize, periodic: bool },
}

impl FromStr for Family {
    type Err = Error;

    /// Parses `linear:7`, `ring:5`, `star:4`, `catalog:11`, `grid:4x4` and
    /// `torus:4x4` (periodic grid).
    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = s.split_once(':').ok_or_else(|| Error::UnknownFamily(s.into()))?;
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| Error::BadParams(format!("`{t}` is not a size")));
        match name.trim() {
            "catalog" => Ok(Family::Catalog(num(arg)?)),
            "linear" | "cl" | "path" => Ok(Family::Linear(num(arg)?)),
            "ring" => Ok(Family::Ring(num(arg)?)),
            "star" | "ghz" => Ok(Family::Star(num(arg)?)),
            "grid" | "torus" => {
                let (w, h) =
                    arg.split_once('x').ok_or_else(|| Error::BadParams(format!("expected WxH, got `{arg}`")))?;
                Ok(Family::Grid { w: num(w)?, h: num(h)?, periodic: name.trim() == "torus" })
            }
            _ => Err(Error::UnknownFamily(name.into())),
        }
    }
}

/// A bipartition `M | M̄` stored as the mask of `M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bipartition {
    n: usize,
    mask: usize,
}

impl Bipartition {
    pub fn new(n: usize, mask: usize) -> Result<Self> {
        let full = (1usize << n) - 1;
        if mask == 0 || mask & full == full || mask & !full != 0 {
            return Err(Error::BadBipartition { mask, n });
        }
        Ok(Bipartition { n, mask })
    }

    pub fn mask(&self) -> usize {
        self.mask
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn complement(&self) -> Bipartition {
        Bipartition { n: self.n, mask: ((1 << self.n) - 1) & !self.mask }
    }

    /// Representative with qubit 0 on the `M̄` side.
    pub fn canonical(&self) -> Bipartition {
        if self.mask & 1 == 1 {
            self.complement()
        } else {
            *self
        }
    }

    pub fn contains(&self, q: usize) -> bool {
        self.mask >> q & 1 == 1
    }
}

/// Masks of the `2^(n-1) - 1` canonical bipartitions, in increasing order.
pub fn canonical_masks(n: usize) -> Vec<usize> {
    if n < 2 {
        return Vec::new();
    }
    (1..(1usize << (n - 1))).map(|k| k << 1).collect()
}

/// `count` distinct canonical masks drawn with a seeded generator, sorted.
pub fn sample_canonical_masks(n: usize, count: usize, seed: u64) -> Vec<usize> {
    if n < 2 {
        return Vec::new();
    }
    let total = (1usize << (n - 1)) - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<usize> = sample(&mut rng, total, count.min(total)).into_iter().map(|i| (i + 1) << 1).collect();
    out.sort_unstable();
    out
}

/// Vertices that pairwise are neither adjacent nor share a neighbor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BSet {
    members: Vec<usize>,
}

impl BSet {
    pub fn new(g: &Graph, members: &[usize]) -> Result<Self> {
        let mut m = members.to_vec();
        m.sort_unstable();
        if let Some(w) = m.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateMember(w[0]));
        }
        if let Some((a, b, reason)) = bset_violation(g, &m)? {
            return Err(Error::InvalidBSet { a, b, reason });
        }
        Ok(BSet { members: m })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn mask(&self) -> usize {
        mask_of(&self.members)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn bset_violation(g: &Graph, m: &[usize]) -> Result<Option<(usize, usize, &'static str)>> {
    for &v in m {
        g.check(v)?;
    }
    for (k, &a) in m.iter().enumerate() {
        for &b in &m[k + 1..] {
            if g.has_edge(a, b) {
                return Ok(Some((a, b, "are adjacent")));
            }
            if g.nbr_mask(a) & g.nbr_mask(b) != 0 {
                return Ok(Some((a, b, "share a neighbor")));
            }
        }
    }
    Ok(None)
}

/// True iff `members` are pairwise non-adjacent without common neighbors.
pub fn is_valid_bset(g: &Graph, members: &[usize]) -> Result<bool> {
    let mut m = members.to_vec();
    m.sort_unstable();
    if let Some(w) = m.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateMember(w[0]));
    }
    Ok(bset_violation(g, &m)?.is_none())
}

/// Every valid set of two or more qubits drawn from `pool`, in increasing
/// mask order.
pub fn valid_subsets(g: &Graph, pool: &[usize]) -> Result<Vec<Vec<usize>>> {
    if pool.len() > 20 {
        return Err(Error::BadParams(format!("pool of {} qubits is too large to enumerate", pool.len())));
    }
    let mut out = Vec::new();
    for pick in 0usize..1 << pool.len() {
        if pick.count_ones() < 2 {
            continue;
        }
        let members: Vec<usize> = bits(pick).map(|i| pool[i]).collect();
        if is_valid_bset(g, &members)? {
            out.push(members);
        }
    }
    Ok(out)
}

/// All inclusion-maximal valid sets, largest first then lexicographic,
/// truncated to `max_results`.
///
/// Valid sets are the independent sets of the distance-2 graph, so this is
/// Bron–Kerbosch with pivoting on its complement.
pub fn enumerate_bsets(g: &Graph, max_results: usize) -> Vec<BSet> {
    let n = g.n();
    let full = g.full_mask();
    let compat: Vec<usize> = (0..n).map(|v| full & !g.ball2(v) & !(1 << v)).collect();
    let mut found = Vec::new();
    bron_kerbosch(&compat, 0, full, 0, &mut found);
    let mut sets: Vec<Vec<usize>> = found.into_iter().map(|m| bits(m).collect()).collect();
    sets.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    sets.truncate(max_results);
    sets.into_iter().map(|members| BSet { members }).collect()
}

fn bron_kerbosch(adj: &[usize], r: usize, mut p: usize, mut x: usize, out: &mut Vec<usize>) {
    if p == 0 {
        if x == 0 {
            out.push(r);
        }
        return;
    }
    let pivot = bits(p | x).max_by_key(|&u| (adj[u] & p).count_ones()).unwrap_or(0);
    for v in bits(p & !adj[pivot]) {
        bron_kerbosch(adj, r | 1 << v, p & adj[v], x & adj[v], out);
        p &= !(1 << v);
        x |= 1 << v;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lin(n: usize) -> Graph {
        Graph::named(&Family::Linear(n)).unwrap()
    }

    #[test]
    fn named_families() {
        let s = Graph::named(&Family::Star(4)).unwrap();
        assert_eq!(s.edges(), &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(lin(2).edges(), &[(0, 1)]);
        let t = Graph::named(&Family::Grid { w: 4, h: 4, periodic: true }).unwrap();
        assert_eq!(t.n(), 16);
        assert!((0..16).all(|v| t.nbr_mask(v).count_ones() == 4));
        assert_eq!(t.neighborhood(0).unwrap(), vec![1, 3, 4, 12]);
        assert!(Graph::named(&Family::Grid { w: 1, h: 4, periodic: false }).is_err());
        assert!("torus:4x4".parse::<Family>().unwrap() == Family::Grid { w: 4, h: 4, periodic: true });
        assert!("blob:3".parse::<Family>().is_err());
    }

    #[test]
    fn construction_normalizes() {
        let g = Graph::new(3, [(1, 0), (0, 1), (2, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert!(matches!(Graph::new(3, [(0, 3)]), Err(Error::VertexOutOfRange { .. })));
        assert!(matches!(Graph::new(3, [(1, 1)]), Err(Error::SelfLoop(1))));
        assert!(!Graph::new(3, [(0, 1)]).unwrap().is_connected());
    }

    #[test]
    fn neighborhoods() {
        assert_eq!(lin(4).neighborhood(1).unwrap(), vec![0, 2]);
        assert_eq!(Graph::named(&Family::Star(4)).unwrap().neighborhood(0).unwrap(), vec![1, 2, 3]);
        assert_eq!(lin(4).closed_neighborhood(1).unwrap(), vec![0, 1, 2]);
        assert!(lin(4).neighborhood(4).is_err());
    }

    #[test]
    fn local_complementation() {
        let t = lin(3).local_complement(1).unwrap();
        assert_eq!(t.edges(), &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(t.local_complement(1).unwrap(), lin(3));
        let k4 = Graph::named(&Family::Star(4)).unwrap().local_complement(0).unwrap();
        assert_eq!(k4.edges().len(), 6);
    }

    #[test]
    fn intra_partition_edges() {
        let ring = Graph::named(&Family::Ring(4)).unwrap();
        let m = Bipartition::new(4, 0b0101).unwrap();
        assert_eq!(ring.delete_intra_partition_edges(&m), ring);
        let g = lin(3).delete_intra_partition_edges(&Bipartition::new(3, 0b011).unwrap());
        assert_eq!(g.edges(), &[(1, 2)]);
        let k3 = Graph::new(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        let g = k3.delete_intra_partition_edges(&Bipartition::new(3, 0b001).unwrap());
        assert_eq!(g.edges(), &[(0, 1), (0, 2)]);
    }

    #[test]
    fn bipartitions() {
        for n in 2..10 {
            let ms = canonical_masks(n);
            assert_eq!(ms.len(), (1 << (n - 1)) - 1);
            assert!(ms.iter().all(|m| m & 1 == 0 && Bipartition::new(n, *m).is_ok()));
        }
        assert!(Bipartition::new(3, 0).is_err());
        assert!(Bipartition::new(3, 7).is_err());
        assert_eq!(Bipartition::new(3, 0b011).unwrap().canonical().mask(), 0b100);
        let s = sample_canonical_masks(10, 50, 3);
        assert_eq!(s.len(), 50);
        assert!(s.windows(2).all(|w| w[0] < w[1]) && s.iter().all(|m| m & 1 == 0 && *m < 1 << 10));
        assert_eq!(s, sample_canonical_masks(10, 50, 3));
        assert_eq!(sample_canonical_masks(3, 99, 0), canonical_masks(3));
    }

    #[test]
    fn subsets_of_a_pool() {
        let g = lin(7);
        assert_eq!(valid_subsets(&g, &[0, 3, 6]).unwrap(), vec![vec![0, 3], vec![0, 6], vec![3, 6], vec![0, 3, 6]]);
        assert!(valid_subsets(&g, &[0, 1, 2]).unwrap().is_empty());
    }

    #[test]
    fn bset_validity() {
        assert!(is_valid_bset(&lin(7), &[0, 3, 6]).unwrap());
        assert!(!is_valid_bset(&lin(7), &[0, 2]).unwrap());
        assert!(!is_valid_bset(&lin(7), &[0, 1]).unwrap());
        let star = Graph::named(&Family::Star(5)).unwrap();
        assert!(!is_valid_bset(&star, &[1, 2]).unwrap());
        assert!(is_valid_bset(&lin(7), &[0, 0]).is_err());
        assert!(is_valid_bset(&lin(7), &[9]).is_err());
        assert!(matches!(BSet::new(&lin(7), &[2, 0]), Err(Error::InvalidBSet { a: 0, b: 2, .. })));
    }

    #[test]
    fn bset_enumeration() {
        let sets = enumerate_bsets(&lin(7), 100);
        assert_eq!(sets[0].members(), &[0, 3, 6]);
        assert!(enumerate_bsets(&Graph::named(&Family::Star(5)).unwrap(), 100).iter().all(|b| b.len() == 1));
        let grid = Graph::named(&Family::Grid { w: 4, h: 4, periodic: false }).unwrap();
        let sets = enumerate_bsets(&grid, 10_000);
        assert!(sets.iter().any(|b| b.members() == [0, 3, 9, 15]));
        assert_eq!(enumerate_bsets(&lin(7), 2).len(), 2);
    }
}
