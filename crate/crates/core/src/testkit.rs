//! Exhaustive oracles, instance generators and matrix helpers for tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitRow};
use crate::graph::{Graph, VertexSet};
use crate::nec::NeighborClassIndex;
use crate::problem::{Direction, ProblemKind, ProblemSpec};
use crate::represent::Member;

pub const ORACLE_CAP: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    /// `None` when infeasible.
    pub best: Option<i64>,
    pub witnesses: Vec<VertexSet>,
}

fn all_subsets(n: usize) -> impl Iterator<Item = VertexSet> {
    (0u64..(1u64 << n)).map(move |m| VertexSet::from_mask(n, m))
}

/// Optimum over all 2^n subsets.
pub fn oracle_solve(g: &Graph, spec: &ProblemSpec, cap: usize) -> Result<OracleResult> {
    if g.n() > cap.min(63) {
        return Err(Error::TooLarge { n: g.n(), cap });
    }
    let dir = match spec.kind {
        ProblemKind::FeedbackVertexSet => Direction::Min,
        _ => spec.direction,
    };
    let mut best: Option<i64> = None;
    let mut witnesses = Vec::new();
    for x in all_subsets(g.n()) {
        let Some(v) = spec.objective(g, &x) else { continue };
        match best {
            Some(b) if b == v => witnesses.push(x),
            Some(b) if !dir.better(v, b) => {}
            _ => {
                best = Some(v);
                witnesses = vec![x];
            }
        }
    }
    Ok(OracleResult { best, witnesses })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BestMode {
    /// G[X ∪ Y] connected.
    Connected,
    /// G[X ∪ Y] a tree.
    Tree,
    /// X ∪ Y a minimal cut of the whole graph.
    MinimalCut,
}

/// Optimal member weight among those completing with `y` under `mode`.
pub fn oracle_best(g: &Graph, fam: &[Member], y: &VertexSet, mode: BestMode, dir: Direction) -> Option<i64> {
    let mut best: Option<i64> = None;
    for m in fam {
        let u = m.set.union(y);
        let ok = match mode {
            BestMode::Connected => g.is_connected(&u),
            BestMode::Tree => g.is_tree(&u),
            BestMode::MinimalCut => g.is_minimal_cut(&u),
        };
        if ok && best.is_none_or(|b| dir.better(m.weight, b)) {
            best = Some(m.weight);
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq)]
pub enum NamedGraph {
    Path(usize),
    Cycle(usize),
    Grid(usize, usize),
    Complete(usize),
    Random { n: usize, p: f64, seed: u64 },
}

impl NamedGraph {
    /// `path:N`, `cycle:N`, `grid:RxC`, `complete:N`, `random:N:P` (seeded separately).
    pub fn parse(s: &str, seed: u64) -> Result<Self> {
        let bad = || Error::Input(format!("bad graph family '{s}'"));
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        Ok(match kind {
            "path" => NamedGraph::Path(num(rest)?),
            "cycle" => NamedGraph::Cycle(num(rest)?),
            "complete" => NamedGraph::Complete(num(rest)?),
            "grid" => {
                let (r, c) = rest.split_once('x').ok_or_else(bad)?;
                NamedGraph::Grid(num(r)?, num(c)?)
            }
            "random" => {
                let (n, p) = rest.split_once(':').ok_or_else(bad)?;
                let p: f64 = p.parse().map_err(|_| bad())?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(bad());
                }
                NamedGraph::Random { n: num(n)?, p, seed }
            }
            _ => return Err(bad()),
        })
    }
}

pub fn gen_named(kind: &NamedGraph) -> Result<Graph> {
    let mut g;
    match *kind {
        NamedGraph::Path(n) => {
            g = Graph::new(n);
            for v in 1..n {
                g.add_edge(v - 1, v)?;
            }
        }
        NamedGraph::Cycle(n) => {
            if n < 3 {
                return Err(Error::Input("a cycle needs at least 3 vertices".into()));
            }
            g = Graph::new(n);
            for v in 0..n {
                g.add_edge(v, (v + 1) % n)?;
            }
        }
        NamedGraph::Grid(r, c) => {
            g = Graph::new(r * c);
            for i in 0..r {
                for j in 0..c {
                    let v = i * c + j;
                    if j + 1 < c {
                        g.add_edge(v, v + 1)?;
                    }
                    if i + 1 < r {
                        g.add_edge(v, v + c)?;
                    }
                }
            }
        }
        NamedGraph::Complete(n) => {
            g = Graph::new(n);
            for u in 0..n {
                for v in u + 1..n {
                    g.add_edge(u, v)?;
                }
            }
        }
        NamedGraph::Random { n, p, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            g = Graph::new(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        g.add_edge(u, v)?;
                    }
                }
            }
        }
    }
    Ok(g)
}

/// Replaces all weights by uniform draws from `lo..=hi`.
pub fn randomize_weights(g: Graph, lo: i64, hi: i64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = (0..g.n()).map(|_| rng.gen_range(lo..=hi)).collect();
    g.with_weights(w).expect("weight count matches")
}

/// Parity-of-intersection matrix: entry (S, T) is 1 iff |S ∩ T| is even,
/// rows and columns in binary-counter order of the subsets of [k].
pub fn hk_matrix(k: u32) -> Vec<Vec<u8>> {
    let m = 1usize << k;
    (0..m)
        .map(|s| (0..m).map(|t| ((s & t).count_ones() % 2 == 0) as u8).collect())
        .collect()
}

#[derive(Clone, Debug)]
pub struct HkInstance {
    pub k: u32,
    pub t: usize,
    pub graph: Graph,
    /// The A side with every vertex present `t` times.
    pub a_star: VertexSet,
    pub b_side: VertexSet,
}

/// Bipartite parity graph on 2^k + 2^k vertices with each A vertex cloned
/// to `t` copies. A-vertices come first, copy-major.
pub fn gen_hk(k: u32, t: usize) -> Result<HkInstance> {
    if t == 0 {
        return Err(Error::Input("clone count must be at least 1".into()));
    }
    if k > 6 {
        return Err(Error::Input("level too large".into()));
    }
    let m = 1usize << k;
    let mat = hk_matrix(k);
    let n = m * (t + 1);
    let mut g = Graph::new(n);
    for copy in 0..t {
        for (s, row) in mat.iter().enumerate() {
            for (tt, &e) in row.iter().enumerate() {
                if e == 1 {
                    g.add_edge(copy * m + s, t * m + tt)?;
                }
            }
        }
    }
    Ok(HkInstance {
        k,
        t,
        a_star: VertexSet::from_vertices(n, 0..t * m),
        b_side: VertexSet::from_vertices(n, t * m..n),
        graph: g,
    })
}

/// Counts of anchored consistent cuts: entry [(i, j)][c] is the number of
/// consistent cuts (Y1, Y2) of `ys[c]` with the smallest vertex of the set
/// in Y1, Y1 in class i and Y2 in class j of `co1`. Empty sets give zeros.
pub fn cbar_counts(g: &Graph, ys: &[VertexSet], co1: &NeighborClassIndex) -> Vec<Vec<u64>> {
    let k = co1.class_count();
    let mut out = vec![vec![0u64; ys.len()]; k * k];
    for (c, y) in ys.iter().enumerate() {
        let Some(anchor) = y.first() else { continue };
        for (y1, y2) in g.consistent_cuts(y) {
            if !y1.contains(anchor) {
                continue;
            }
            out[co1.rep_of(&y1) * k + co1.rep_of(&y2)][c] += 1;
        }
    }
    out
}

/// `cbar_counts` reduced mod 2.
pub fn cbar_matrix(g: &Graph, ys: &[VertexSet], co1: &NeighborClassIndex) -> BitMatrix {
    let counts = cbar_counts(g, ys, co1);
    let mut m = BitMatrix::new(ys.len());
    for (i, row) in counts.iter().enumerate() {
        let bits: Vec<bool> = row.iter().map(|&c| c % 2 == 1).collect();
        m.push(BitRow::from_bools(&bits), 0, i);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::{rank_gf2, rank_rational};
    use crate::layout::{module_width, q_rank_width, rank_width};
    use crate::nec::{nec, Depth};
    use crate::problem::catalog;

    #[test]
    fn oracle_examples() {
        let p4 = gen_named(&NamedGraph::Path(4)).unwrap();
        let r = oracle_solve(&p4, &catalog("connected-dominating-set").unwrap(), ORACLE_CAP).unwrap();
        assert_eq!(r.best, Some(2));
        assert_eq!(r.witnesses, vec![VertexSet::from_vertices(4, [1, 2])]);
        let one = Graph::new(1);
        let ds = ProblemSpec::sigma_rho(
            crate::problem::CofiniteSet::naturals(),
            crate::problem::CofiniteSet::positive(),
            Direction::Min,
            crate::problem::Constraint::None,
        );
        assert_eq!(oracle_solve(&one, &ds, ORACLE_CAP).unwrap().best, Some(1));
        let grid = gen_named(&NamedGraph::Grid(2, 3)).unwrap();
        let mc = oracle_solve(&grid, &catalog("max-cut").unwrap(), ORACLE_CAP).unwrap();
        assert_eq!(mc.best, Some(grid.edge_count() as i64));
        assert!(oracle_solve(&Graph::new(20), &ds, ORACLE_CAP).is_err());
    }

    #[test]
    fn oracle_best_markers() {
        let g = gen_named(&NamedGraph::Path(3)).unwrap();
        let y = g.empty_set();
        assert_eq!(oracle_best(&g, &[], &y, BestMode::Connected, Direction::Max), None);
        let m = Member::new(VertexSet::from_vertices(3, [0, 1]), 4);
        assert_eq!(oracle_best(&g, &[m], &y, BestMode::Connected, Direction::Max), Some(4));
    }

    #[test]
    fn hk_sizes_and_ranks() {
        let h = gen_hk(1, 1).unwrap();
        assert_eq!((h.a_star.len(), h.b_side.len(), h.graph.n()), (2, 2, 4));
        for k in 1..=3u32 {
            let m = BitMatrix::from_rows(&hk_matrix(k));
            let q: Vec<Vec<i64>> = hk_matrix(k).iter().map(|r| r.iter().map(|&b| b as i64).collect()).collect();
            assert_eq!(rank_gf2(&m), k as usize + 1);
            assert_eq!(rank_rational(&q), 1 << k);
        }
        let h = gen_hk(2, 3).unwrap();
        assert_eq!(rank_width(&h.graph, &h.a_star), 3);
        assert_eq!(q_rank_width(&h.graph, &h.a_star), 4);
        assert_eq!(module_width(&h.graph, &h.a_star), 4);
        // Each class is fixed by the per-type clone counts 0..=t.
        for (k, t) in [(1u32, 2usize), (1, 3), (2, 2), (2, 3)] {
            let h = gen_hk(k, t).unwrap();
            let c = nec(&h.graph, &h.a_star, Depth::Exact, 1 << 20).unwrap();
            assert_eq!(c, (t + 1).pow(1 << k));
        }
    }

    #[test]
    fn named_graphs_are_reproducible() {
        let a = gen_named(&NamedGraph::parse("random:10:0.3", 4).unwrap()).unwrap();
        let b = gen_named(&NamedGraph::Random { n: 10, p: 0.3, seed: 4 }).unwrap();
        assert_eq!(a.edges(), b.edges());
        assert_eq!(gen_named(&NamedGraph::parse("grid:2x3", 0).unwrap()).unwrap().edge_count(), 7);
        assert!(NamedGraph::parse("cube:3", 0).is_err());
    }

    #[test]
    fn cbar_two_components() {
        // Y = {0, 2} with no edge: anchored cuts put 2 on either side.
        let g = gen_named(&NamedGraph::Path(4)).unwrap();
        let co = VertexSet::from_vertices(4, [0, 2]);
        let co1 = NeighborClassIndex::build(&g, &co, Depth::Capped(1), 100).unwrap();
        let counts = cbar_counts(&g, &[co.clone(), g.empty_set()], &co1);
        let total: u64 = counts.iter().map(|r| r[0]).sum();
        assert_eq!(total, 2);
        assert!(counts.iter().all(|r| r[1] == 0));
    }
}
