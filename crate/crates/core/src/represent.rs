//! Weighted families of partial solutions and their GF(2) compaction.

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitRow, EchelonBasis};
use crate::graph::{Graph, VertexSet};
use crate::nec::NeighborClassIndex;
use crate::problem::Direction;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Member {
    pub set: VertexSet,
    pub weight: i64,
}

impl Member {
    pub fn new(set: VertexSet, weight: i64) -> Self {
        Member { set, weight }
    }
}

/// All pairwise unions; rejects overlapping members.
pub fn merge(a: &[Member], b: &[Member]) -> Result<Vec<Member>> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            if x.set.intersects(&y.set) {
                return Err(Error::Input(format!(
                    "merge of overlapping sets {:?} and {:?}",
                    x.set, y.set
                )));
            }
            out.push(Member::new(x.set.union(&y.set), x.weight + y.weight));
        }
    }
    Ok(out)
}

/// Unchecked merge appending into `out`, with `extra` added to each weight.
pub(crate) fn merge_into(out: &mut Vec<Member>, a: &[Member], b: &[Member], extra: i64) {
    out.reserve(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(Member::new(x.set.union(&y.set), x.weight + y.weight + extra));
        }
    }
}

pub(crate) fn best_index(fam: &[Member], dir: Direction, keep: impl Fn(&Member) -> bool) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, m) in fam.iter().enumerate() {
        if keep(m) && best.is_none_or(|b| dir.better(m.weight, fam[b].weight)) {
            best = Some(i);
        }
    }
    best
}

/// For each component of G[x], the co-side representatives it sees.
fn component_reach(g: &Graph, x: &VertexSet, co1: &NeighborClassIndex) -> Vec<Vec<bool>> {
    g.connected_components(x)
        .iter()
        .map(|c| {
            let nb = g.open_neighborhood(c);
            co1.reps().iter().map(|r| nb.intersects(r)).collect()
        })
        .collect()
}

/// Row over ordered pairs of co-side reps: 1 iff no component reaches both.
fn connectivity_row(reach: &[Vec<bool>], k: usize) -> BitRow {
    let mut row = BitRow::zeros(k * k);
    for w in row.words_mut() {
        *w = !0;
    }
    let tail = (k * k) % 64;
    if tail != 0 {
        if let Some(last) = row.words_mut().last_mut() {
            *last &= (1u64 << tail) - 1;
        }
    }
    if k * k == 0 {
        return row;
    }
    for f in reach {
        let hits: Vec<usize> = (0..k).filter(|&i| f[i]).collect();
        for &i in &hits {
            for &j in &hits {
                let c = i * k + j;
                row.words_mut()[c / 64] &= !(1u64 << (c % 64));
            }
        }
    }
    row
}

/// Row of the connectivity matrix for `x`, over ordered pairs of the
/// co-side representatives in `co1` (pair (i, j) at column i·k + j).
pub fn connectivity_row_of(g: &Graph, x: &VertexSet, co1: &NeighborClassIndex) -> BitRow {
    connectivity_row(&component_reach(g, x, co1), co1.class_count())
}

fn every_component_touches(g: &Graph, x: &VertexSet, target: &VertexSet) -> bool {
    g.connected_components(x)
        .iter()
        .all(|c| g.open_neighborhood(c).intersects(target))
}

fn keep_tags(fam: &[Member], mut tags: Vec<usize>) -> Vec<Member> {
    tags.sort_unstable();
    tags.dedup();
    tags.into_iter().map(|i| fam[i].clone()).collect()
}

/// Subfamily that keeps, for every Y in the depth-1 class of `r_co` over
/// the co-side, an optimal member X with G[X ∪ Y] connected.
///
/// Members must be pairwise 1-neighbor equivalent over `side`; `co1` is
/// the depth-1 index of the co-side. Output keeps input order.
pub fn reduce(
    g: &Graph,
    side: &VertexSet,
    fam: &[Member],
    r_co: &VertexSet,
    co1: &NeighborClassIndex,
    dir: Direction,
) -> Vec<Member> {
    if fam.is_empty() {
        return Vec::new();
    }
    debug_assert!(fam.iter().all(|m| m.set.is_subset(side)));
    if !g.open_neighborhood(r_co).intersects(side) {
        // Only a connected X with Y = ∅, or X = ∅ with a connected nonempty Y.
        let mut tags = Vec::new();
        if let Some(i) = best_index(fam, dir, |m| g.is_connected(&m.set)) {
            tags.push(i);
        }
        if !co1.side().is_empty() {
            if let Some(i) = best_index(fam, dir, |m| m.set.is_empty()) {
                tags.push(i);
            }
        }
        return keep_tags(fam, tags);
    }
    let k = co1.class_count();
    let mut m = BitMatrix::new(k * k);
    for (i, x) in fam.iter().enumerate() {
        if !every_component_touches(g, &x.set, r_co) {
            continue;
        }
        let reach = component_reach(g, &x.set, co1);
        m.push(connectivity_row(&reach, k), x.weight, i);
    }
    keep_tags(fam, m.max_weight_row_basis(dir))
}

/// Two-sided variant for minimal cuts: keeps, for every Y ⊆ co-side with
/// Y in the class of `r_y` and (co-side \ Y) in the class of `r_ybar`, an
/// optimal member X such that X ∪ Y is a minimal cut of `g`.
///
/// `co1` indexes the co-side at depth 1. Members should be pairwise
/// n-neighbor equivalent over `side`.
pub fn reduce_star(
    g: &Graph,
    side: &VertexSet,
    fam: &[Member],
    r_y: &VertexSet,
    r_ybar: &VertexSet,
    co1: &NeighborClassIndex,
    dir: Direction,
) -> Vec<Member> {
    if fam.is_empty() {
        return Vec::new();
    }
    let co = co1.side().clone();
    let iy = co1.rep_of(r_y);
    let iyb = co1.rep_of(r_ybar);
    let icomp = co1.rep_of(&co);
    let y_empty_class = iy == 0 && iyb == icomp;
    let ybar_empty_class = iyb == 0 && iy == icomp;
    if y_empty_class || ybar_empty_class {
        let mut tags = Vec::new();
        if y_empty_class {
            if let Some(i) = best_index(fam, dir, |m| g.is_minimal_cut(&m.set)) {
                tags.push(i);
            }
            if !co.is_empty() {
                if let Some(i) = best_index(fam, dir, |m| m.set.is_empty()) {
                    tags.push(i);
                }
            }
        }
        if ybar_empty_class {
            if let Some(i) = best_index(fam, dir, |m| g.is_minimal_cut(&m.set.union(&co))) {
                tags.push(i);
            }
            if !co.is_empty() {
                if let Some(i) = best_index(fam, dir, |m| m.set == *side) {
                    tags.push(i);
                }
            }
        }
        return keep_tags(fam, tags);
    }
    if iy == 0 || iyb == 0 {
        return Vec::new();
    }
    let k = co1.class_count();
    let mut kept = Vec::new();
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut lb = EchelonBasis::new();
    let mut rb = EchelonBasis::new();
    for (i, x) in fam.iter().enumerate() {
        let rest = side.difference(&x.set);
        if !every_component_touches(g, &x.set, r_y) || !every_component_touches(g, &rest, r_ybar) {
            continue;
        }
        let l = connectivity_row(&component_reach(g, &x.set, co1), k);
        let r = connectivity_row(&component_reach(g, &rest, co1), k);
        lb.insert(&l);
        rb.insert(&r);
        kept.push(i);
        left.push(l);
        right.push(r);
    }
    // Restricting each factor to the pivot columns of its own row space is
    // injective on the span, so the tensor rows keep their dependencies.
    let lp = lb.pivot_columns();
    let rp = rb.pivot_columns();
    let mut m = BitMatrix::new(lp.len() * rp.len());
    for (t, &i) in kept.iter().enumerate() {
        let mut row = BitRow::zeros(lp.len() * rp.len());
        for (a, &pa) in lp.iter().enumerate() {
            if !left[t].get(pa) {
                continue;
            }
            for (b, &pb) in rp.iter().enumerate() {
                if right[t].get(pb) {
                    row.set(a * rp.len() + b);
                }
            }
        }
        m.push(row, fam[i].weight, i);
    }
    keep_tags(fam, m.max_weight_row_basis(dir))
}

/// Class indices of one compatible join (A, A', B, B', R, R').
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompatTriple {
    pub a: usize,
    pub a_co: usize,
    pub b: usize,
    pub b_co: usize,
    pub r: usize,
    pub r_co: usize,
}

/// Precomputed representative lookups for joining the tables of the two
/// children a, b of a node x.
#[derive(Clone, Debug)]
pub struct JoinLookup {
    na: usize,
    nb: usize,
    nco: usize,
    /// rep over V_x of A ∪ B, at `a * nb + b`.
    union: Vec<u32>,
    /// rep over comp V_a of R' ∪ B, at `r_co * nb + b`.
    a_co: Vec<u32>,
    /// rep over comp V_b of R' ∪ A, at `r_co * na + a`.
    b_co: Vec<u32>,
}

impl JoinLookup {
    pub fn build(
        a_in: &NeighborClassIndex,
        b_in: &NeighborClassIndex,
        x_in: &NeighborClassIndex,
        a_out: &NeighborClassIndex,
        b_out: &NeighborClassIndex,
        x_out: &NeighborClassIndex,
    ) -> Self {
        let (na, nb, nco) = (a_in.class_count(), b_in.class_count(), x_out.class_count());
        let mut union = Vec::with_capacity(na * nb);
        for a in a_in.reps() {
            for b in b_in.reps() {
                union.push(x_in.rep_of(&a.union(b)) as u32);
            }
        }
        let mut a_co = Vec::with_capacity(nco * nb);
        let mut b_co = Vec::with_capacity(nco * na);
        for r in x_out.reps() {
            for b in b_in.reps() {
                a_co.push(a_out.rep_of(&r.union(b)) as u32);
            }
            for a in a_in.reps() {
                b_co.push(b_out.rep_of(&r.union(a)) as u32);
            }
        }
        JoinLookup { na, nb, nco, union, a_co, b_co }
    }

    #[inline]
    pub fn union(&self, a: usize, b: usize) -> usize {
        self.union[a * self.nb + b] as usize
    }

    #[inline]
    pub fn a_co(&self, r_co: usize, b: usize) -> usize {
        self.a_co[r_co * self.nb + b] as usize
    }

    #[inline]
    pub fn b_co(&self, r_co: usize, a: usize) -> usize {
        self.b_co[r_co * self.na + a] as usize
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.na, self.nb, self.nco)
    }

    /// Every (A, B, R') with its determined R, A', B'.
    pub fn triples(&self) -> impl Iterator<Item = CompatTriple> + '_ {
        (0..self.na).flat_map(move |a| {
            (0..self.nb).flat_map(move |b| {
                (0..self.nco).map(move |r_co| CompatTriple {
                    a,
                    a_co: self.a_co(r_co, b),
                    b,
                    b_co: self.b_co(r_co, a),
                    r: self.union(a, b),
                    r_co,
                })
            })
        })
    }
}
