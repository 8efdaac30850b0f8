use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Default cap on representatives per cut.
pub const DEFAULT_CAP: usize = 5_000_000;

/// Reads the `NECSOLVE_CAP` override, falling back to `default`.
pub fn cap_from_env(default: usize) -> usize {
    std::env::var("NECSOLVE_CAP")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(default)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Depth {
    Capped(u32),
    /// Uncapped neighbor counts.
    Exact,
}

impl Depth {
    fn cap(self, n: usize) -> u16 {
        match self {
            Depth::Capped(d) => d.min(u16::MAX as u32) as u16,
            Depth::Exact => n.min(u16::MAX as usize) as u16,
        }
    }
}

/// Neighbor counts of the opposite side into a set, capped at the depth.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NecSignature {
    cap: Option<u32>,
    vertices: Vec<usize>,
    counts: Vec<u32>,
}

impl NecSignature {
    /// `None` for exact counts.
    pub fn cap(&self) -> Option<u32> {
        self.cap
    }

    /// Count for an opposite-side vertex (0 if it has no neighbor on the side).
    pub fn get(&self, v: usize) -> u32 {
        match self.vertices.binary_search(&v) {
            Ok(i) => self.counts[i],
            Err(_) => 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.vertices.iter().copied().zip(self.counts.iter().copied())
    }
}

/// Signature of `x ⊆ side` over the vertices outside `side`.
pub fn signature(g: &Graph, side: &VertexSet, x: &VertexSet, depth: Depth) -> NecSignature {
    let co = side.complement_in(&g.vertex_set());
    let cap = depth.cap(g.n()) as u32;
    let mut vertices = Vec::new();
    let mut counts = Vec::new();
    for u in co.iter() {
        if g.neighbors(u).intersects(side) {
            vertices.push(u);
            counts.push((g.neighbors(u).intersection_len(x) as u32).min(cap));
        }
    }
    NecSignature {
        cap: match depth {
            Depth::Capped(d) => Some(d),
            Depth::Exact => None,
        },
        vertices,
        counts,
    }
}

/// Canonical representatives of the d-neighbor classes over one side of a cut.
#[derive(Clone, Debug)]
pub struct NeighborClassIndex {
    side: VertexSet,
    depth: Depth,
    cap: u16,
    /// Opposite-side vertices with a neighbor on the side, and those neighbors.
    co_nbrs: Vec<VertexSet>,
    reps: Vec<VertexSet>,
    lookup: FxHashMap<Box<[u16]>, u32>,
}

impl NeighborClassIndex {
    /// Enumerates all classes by extending stored members one side vertex at
    /// a time, keeping a minimum-size member per class; reps end up sorted
    /// by size, then lexicographically, with ∅ first.
    pub fn build(g: &Graph, side: &VertexSet, depth: Depth, max_reps: usize) -> Result<Self> {
        let cap = depth.cap(g.n());
        let co = side.complement_in(&g.vertex_set());
        let mut co_vertices = Vec::new();
        let mut co_nbrs = Vec::new();
        for u in co.iter() {
            let nb = g.neighbors(u).intersection(side);
            if !nb.is_empty() {
                co_vertices.push(u);
                co_nbrs.push(nb);
            }
        }
        let k = co_vertices.len();
        // For each side vertex, positions of its opposite-side neighbors.
        let mut touch: Vec<(usize, Vec<usize>)> = Vec::new();
        for v in side.iter() {
            let pos: Vec<usize> = co_vertices
                .iter()
                .enumerate()
                .filter(|(_, &u)| g.has_edge(u, v))
                .map(|(i, _)| i)
                .collect();
            touch.push((v, pos));
        }

        let mut members: Vec<VertexSet> = vec![g.empty_set()];
        let mut keys: Vec<Box<[u16]>> = vec![vec![0u16; k].into_boxed_slice()];
        let mut lookup: FxHashMap<Box<[u16]>, u32> = FxHashMap::default();
        lookup.insert(keys[0].clone(), 0);

        for (v, pos) in &touch {
            if pos.is_empty() {
                // Adding v never changes a signature.
                continue;
            }
            let before = members.len();
            // Replacements wait until the round ends so that no member
            // containing v is extended by v again.
            let mut shrink: Vec<(usize, VertexSet)> = Vec::new();
            for i in 0..before {
                let mut key = keys[i].clone();
                for &p in pos {
                    key[p] = (key[p] + 1).min(cap);
                }
                match lookup.get(&key) {
                    Some(&j) => {
                        let j = j as usize;
                        if members[i].len() + 1 < members[j].len() {
                            let mut m = members[i].clone();
                            m.insert(*v);
                            shrink.push((j, m));
                        }
                    }
                    None => {
                        let mut m = members[i].clone();
                        m.insert(*v);
                        lookup.insert(key.clone(), members.len() as u32);
                        members.push(m);
                        keys.push(key);
                        if members.len() > max_reps {
                            return Err(Error::ClassExplosion {
                                cut: format!("side of size {}", side.len()),
                                cap: max_reps,
                            });
                        }
                    }
                }
            }
            for (j, m) in shrink {
                if m.len() < members[j].len() {
                    members[j] = m;
                }
            }
        }

        let mut order: Vec<usize> = (0..members.len()).collect();
        order.sort_by(|&a, &b| {
            members[a]
                .len()
                .cmp(&members[b].len())
                .then_with(|| members[a].lex_cmp(&members[b]))
        });
        let mut reps = Vec::with_capacity(order.len());
        let mut sorted_lookup = FxHashMap::default();
        sorted_lookup.reserve(order.len());
        for (new, &old) in order.iter().enumerate() {
            reps.push(members[old].clone());
            sorted_lookup.insert(std::mem::take(&mut keys[old]), new as u32);
        }
        Ok(NeighborClassIndex {
            side: side.clone(),
            depth,
            cap,
            co_nbrs,
            reps,
            lookup: sorted_lookup,
        })
    }

    pub fn side(&self) -> &VertexSet {
        &self.side
    }

    pub fn depth(&self) -> Depth {
        self.depth
    }

    pub fn class_count(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[VertexSet] {
        &self.reps
    }

    pub fn rep(&self, i: usize) -> &VertexSet {
        &self.reps[i]
    }

    fn key(&self, x: &VertexSet) -> Box<[u16]> {
        self.co_nbrs
            .iter()
            .map(|nb| (nb.intersection_len(x) as u16).min(self.cap))
            .collect()
    }

    /// Index of the representative of `x`'s class; `None` if `x` leaves the side.
    pub fn try_rep_of(&self, x: &VertexSet) -> Option<usize> {
        if !x.is_subset(&self.side) {
            return None;
        }
        self.lookup.get(&self.key(x)).map(|&i| i as usize)
    }

    /// Index of the representative of `x`'s class.
    ///
    /// Panics if `x` is not a subset of the side or its signature is
    /// missing; the latter would mean the enumeration was incomplete.
    pub fn rep_of(&self, x: &VertexSet) -> usize {
        match self.try_rep_of(x) {
            Some(i) => i,
            None => panic!(
                "no representative for {:?} over side {:?} at depth {:?}",
                x, self.side, self.depth
            ),
        }
    }

    /// `rep_of(x ∩ side)`.
    pub fn rep_of_restricted(&self, x: &VertexSet) -> usize {
        self.rep_of(&x.intersection(&self.side))
    }
}

pub fn class_count(index: &NeighborClassIndex) -> usize {
    index.class_count()
}

/// Number of classes of `side` at `depth`.
pub fn nec(g: &Graph, side: &VertexSet, depth: Depth, max_reps: usize) -> Result<usize> {
    Ok(NeighborClassIndex::build(g, side, depth, max_reps)?.class_count())
}
