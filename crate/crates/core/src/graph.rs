use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

type Words = SmallVec<[u64; 4]>;

fn word_count(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

/// Subset of `0..n` stored as a bitset.
///
/// All sets built for one graph share the same word length, so equality and
/// hashing are structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct VertexSet {
    words: Words,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet {
            words: smallvec::smallvec![0; word_count(n)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    pub fn singleton(n: usize, v: usize) -> Self {
        let mut s = Self::empty(n);
        s.insert(v);
        s
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(n: usize, it: I) -> Self {
        let mut s = Self::empty(n);
        for v in it {
            s.insert(v);
        }
        s
    }

    /// Low 64 bits as a mask, for enumeration over tiny universes.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        let mut s = Self::empty(n);
        s.words[0] = mask;
        s
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.words[v >> 6] |= 1u64 << (v & 63);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.words[v >> 6] &= !(1u64 << (v & 63));
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        match self.words.get(v >> 6) {
            Some(w) => (w >> (v & 63)) & 1 == 1,
            None => false,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn first(&self) -> Option<usize> {
        for (i, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(i * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter(&self) -> VertexIter<'_> {
        VertexIter {
            words: &self.words,
            idx: 0,
            cur: self.words[0],
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    #[inline]
    pub fn union(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    #[inline]
    pub fn intersection(&self, other: &Self) -> Self {
        let mut s = self.clone();
        for (a, b) in s.words.iter_mut().zip(other.words.iter()) {
            *a &= b;
        }
        s
    }

    #[inline]
    pub fn difference(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    #[inline]
    pub fn union_with(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a |= b;
        }
    }

    #[inline]
    pub fn difference_with(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a &= !b;
        }
    }

    /// `universe \ self`.
    pub fn complement_in(&self, universe: &Self) -> Self {
        universe.difference(self)
    }

    #[inline]
    pub fn intersection_len(&self, other: &Self) -> usize {
        self.words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    #[inline]
    pub fn intersects(&self, other: &Self) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .any(|(a, b)| a & b != 0)
    }

    #[inline]
    pub fn is_disjoint(&self, other: &Self) -> bool {
        !self.intersects(other)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    /// Sorted member lists compared lexicographically.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

/// Orders by numeric bitset value (vertex 0 is the least significant bit).
impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.words.len().max(other.words.len());
        for i in (0..n).rev() {
            let a = self.words.get(i).copied().unwrap_or(0);
            let b = other.words.get(i).copied().unwrap_or(0);
            match a.cmp(&b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct VertexIter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for VertexIter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let t = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + t);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

/// Undirected simple graph with integer vertex weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
    weights: Vec<i64>,
}

impl Graph {
    /// Edgeless graph on `n` vertices with unit weights.
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            adj: vec![VertexSet::empty(n); n],
            weights: vec![1; n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::Input(format!(
                "edge ({u},{v}) out of range for n={}",
                self.n
            )));
        }
        if u == v {
            return Err(Error::Input(format!("self-loop at vertex {u}")));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    pub fn set_weight(&mut self, v: usize, w: i64) -> Result<()> {
        if v >= self.n {
            return Err(Error::Input(format!("weight for vertex {v} out of range")));
        }
        self.weights[v] = w;
        Ok(())
    }

    pub fn with_weights(mut self, weights: Vec<i64>) -> Result<Self> {
        if weights.len() != self.n {
            return Err(Error::Input(format!(
                "expected {} weights, got {}",
                self.n,
                weights.len()
            )));
        }
        self.weights = weights;
        Ok(self)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    #[inline]
    pub fn weight(&self, v: usize) -> i64 {
        self.weights[v]
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in self.adj[u].iter() {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::empty(self.n)
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn set_weight_sum(&self, s: &VertexSet) -> i64 {
        s.iter().map(|v| self.weights[v]).sum()
    }

    /// N(s) \ s.
    pub fn open_neighborhood(&self, s: &VertexSet) -> VertexSet {
        let mut out = self.empty_set();
        for v in s.iter() {
            out.union_with(&self.adj[v]);
        }
        out.difference_with(s);
        out
    }

    /// Number of edges of G[s].
    pub fn induced_edge_count(&self, s: &VertexSet) -> usize {
        s.iter().map(|v| self.adj[v].intersection_len(s)).sum::<usize>() / 2
    }

    /// |E(x, y)| without checking disjointness.
    #[inline]
    pub fn cross_edges(&self, x: &VertexSet, y: &VertexSet) -> usize {
        x.iter().map(|v| self.adj[v].intersection_len(y)).sum()
    }

    /// |E(x, y)| for disjoint `x`, `y`.
    pub fn edges_between(&self, x: &VertexSet, y: &VertexSet) -> Result<usize> {
        if x.intersects(y) {
            return Err(Error::Input(format!(
                "edges_between needs disjoint sets, both contain {:?}",
                x.intersection(y)
            )));
        }
        Ok(self.cross_edges(x, y))
    }

    /// Components of G[s], ordered by smallest member.
    pub fn connected_components(&self, s: &VertexSet) -> Vec<VertexSet> {
        let mut rest = s.clone();
        let mut out = Vec::new();
        while let Some(start) = rest.first() {
            let mut comp = VertexSet::singleton(self.n, start);
            let mut frontier = comp.clone();
            loop {
                let mut next = self.empty_set();
                for v in frontier.iter() {
                    next.union_with(&self.adj[v]);
                }
                next = next.intersection(s);
                next.difference_with(&comp);
                if next.is_empty() {
                    break;
                }
                comp.union_with(&next);
                frontier = next;
            }
            rest.difference_with(&comp);
            out.push(comp);
        }
        out
    }

    pub fn component_count(&self, s: &VertexSet) -> usize {
        self.connected_components(s).len()
    }

    /// G[∅] counts as disconnected.
    pub fn is_connected(&self, s: &VertexSet) -> bool {
        let Some(start) = s.first() else {
            return false;
        };
        let mut seen = VertexSet::singleton(self.n, start);
        let mut frontier = seen.clone();
        while !frontier.is_empty() {
            let mut next = self.empty_set();
            for v in frontier.iter() {
                next.union_with(&self.adj[v]);
            }
            next = next.intersection(s);
            next.difference_with(&seen);
            seen.union_with(&next);
            frontier = next;
        }
        seen.len() == s.len()
    }

    pub fn is_forest(&self, s: &VertexSet) -> bool {
        self.induced_edge_count(s) + self.component_count(s) == s.len()
    }

    pub fn is_tree(&self, s: &VertexSet) -> bool {
        !s.is_empty() && self.induced_edge_count(s) + 1 == s.len() && self.is_connected(s)
    }

    /// Both `s` and its complement are nonempty and induce connected graphs.
    pub fn is_minimal_cut(&self, s: &VertexSet) -> bool {
        let rest = s.complement_in(&self.vertex_set());
        self.is_connected(s) && self.is_connected(&rest)
    }

    /// All ordered bipartitions (S1, S2) of `s` with no edge between the sides.
    pub fn consistent_cuts(&self, s: &VertexSet) -> Vec<(VertexSet, VertexSet)> {
        let comps = self.connected_components(s);
        assert!(comps.len() < 63, "too many components to enumerate");
        let mut out = Vec::with_capacity(1 << comps.len());
        for mask in 0u64..(1u64 << comps.len()) {
            let mut a = self.empty_set();
            let mut b = self.empty_set();
            for (i, c) in comps.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    a.union_with(c);
                } else {
                    b.union_with(c);
                }
            }
            out.push((a, b));
        }
        out
    }

    /// Parses the `p`/`w`/`e` edge-list format (1-indexed vertices).
    pub fn parse(text: &str) -> Result<Graph> {
        let mut g: Option<Graph> = None;
        let mut declared_m = 0usize;
        let mut seen_edges = 0usize;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |msg: String| Error::Parse { line, msg };
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('c') || trimmed.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = trimmed.split_whitespace().collect();
            let num = |k: usize| -> Result<i64> {
                toks.get(k)
                    .ok_or_else(|| err(format!("missing field {k} in '{trimmed}'")))?
                    .parse::<i64>()
                    .map_err(|_| err(format!("bad integer '{}'", toks[k])))
            };
            let vertex = |k: usize, n: usize| -> Result<usize> {
                let v = num(k)?;
                if v < 1 || v as usize > n {
                    return Err(err(format!("vertex {v} out of range 1..={n}")));
                }
                Ok(v as usize - 1)
            };
            match toks[0] {
                "p" => {
                    if g.is_some() {
                        return Err(err("duplicate header".into()));
                    }
                    // Tolerate the DIMACS-style "p edge n m" / "p tw n m" headers.
                    let off = if toks.len() == 4 { 1 } else { 0 };
                    if toks.len() != 3 + off {
                        return Err(err(format!("header must be 'p <n> <m>', got '{trimmed}'")));
                    }
                    let n = num(1 + off)?;
                    let m = num(2 + off)?;
                    if n < 0 || m < 0 {
                        return Err(err("negative size in header".into()));
                    }
                    g = Some(Graph::new(n as usize));
                    declared_m = m as usize;
                }
                "w" => {
                    let gr = g.as_mut().ok_or_else(|| err("weight before header".into()))?;
                    if toks.len() != 3 {
                        return Err(err(format!("expected 'w <v> <int>', got '{trimmed}'")));
                    }
                    let v = vertex(1, gr.n)?;
                    gr.weights[v] = num(2)?;
                }
                "e" => {
                    let gr = g.as_mut().ok_or_else(|| err("edge before header".into()))?;
                    if toks.len() != 3 {
                        return Err(err(format!("expected 'e <u> <v>', got '{trimmed}'")));
                    }
                    let u = vertex(1, gr.n)?;
                    let v = vertex(2, gr.n)?;
                    if u == v {
                        return Err(err(format!("self-loop at vertex {}", u + 1)));
                    }
                    if gr.has_edge(u, v) {
                        return Err(err(format!("duplicate edge {} {}", u + 1, v + 1)));
                    }
                    gr.adj[u].insert(v);
                    gr.adj[v].insert(u);
                    seen_edges += 1;
                }
                other => return Err(err(format!("unknown line type '{other}'"))),
            }
        }
        let g = g.ok_or(Error::Parse {
            line: 0,
            msg: "missing 'p <n> <m>' header".into(),
        })?;
        if seen_edges != declared_m {
            return Err(Error::Parse {
                line: 0,
                msg: format!("header declares {declared_m} edges, found {seen_edges}"),
            });
        }
        Ok(g)
    }

    /// Inverse of [`Graph::parse`]; weight lines only for non-unit weights.
    pub fn to_text(&self) -> String {
        let mut s = format!("p {} {}\n", self.n, self.edge_count());
        for v in 0..self.n {
            if self.weights[v] != 1 {
                s.push_str(&format!("w {} {}\n", v + 1, self.weights[v]));
            }
        }
        for (u, v) in self.edges() {
            s.push_str(&format!("e {} {}\n", u + 1, v + 1));
        }
        s
    }
}
