//! Max Cut and Maximum Minimal Cut over exact neighbor classes.

use rayon::prelude::*;

use crate::error::Result;
use crate::graph::{Graph, VertexSet};
use crate::layout::RootedLayout;
use crate::nec::{Depth, NeighborClassIndex};
use crate::problem::Direction;
use crate::represent::{best_index, merge_into, reduce_star, JoinLookup, Member};
use crate::solve::{build_index, NodeStat, Outcome, Solution, SolveOptions, SolveReport};

/// Default representative cap for the exact-class solvers.
pub const CUT_CAP: usize = 2_000_000;

/// Edges between `a` and `side \ b`.
fn edges_to_rest(g: &Graph, a: &VertexSet, side: &VertexSet, b: &VertexSet) -> i64 {
    g.cross_edges(a, &side.difference(b)) as i64
}

/// Edges of a join crossing between the children, for representatives
/// `a` of V_a and `b` of V_b.
fn join_gain(g: &Graph, a: &VertexSet, va: &VertexSet, b: &VertexSet, vb: &VertexSet) -> i64 {
    edges_to_rest(g, a, vb, b) + edges_to_rest(g, b, va, a)
}

fn leaf_family(g: &Graph, v: usize) -> [Member; 2] {
    [Member::new(g.empty_set(), 0), Member::new(VertexSet::singleton(g.n(), v), 0)]
}

/// Maximum number of edges between X and V \ X.
pub fn solve_maxcut(g: &Graph, layout: &RootedLayout, opts: &SolveOptions) -> Result<SolveReport> {
    let cap = opts.cap_or(CUT_CAP);
    type Cell = Option<(i64, VertexSet)>;
    let mut tables: Vec<Option<(NeighborClassIndex, Vec<Cell>)>> = (0..layout.node_count()).map(|_| None).collect();
    let mut stats = Vec::new();
    for &x in layout.postorder() {
        let vx = layout.set(x);
        let idx = build_index(g, vx, Depth::Exact, cap, x)?;
        let mut cells: Vec<Cell> = vec![None; idx.class_count()];
        let offer = |cells: &mut Vec<Cell>, r: usize, val: i64, set: VertexSet| {
            if cells[r].as_ref().is_none_or(|(best, _)| val > *best) {
                cells[r] = Some((val, set));
            }
        };
        match layout.children(x) {
            None => {
                for m in leaf_family(g, layout.leaf_vertex(x).expect("leaf")) {
                    let r = idx.rep_of(&m.set);
                    offer(&mut cells, r, 0, m.set);
                }
            }
            Some((a, b)) => {
                let (ia, ca) = tables[a].take().expect("child table");
                let (ib, cb) = tables[b].take().expect("child table");
                let (va, vb) = (layout.set(a), layout.set(b));
                for (ra, ea) in ca.iter().enumerate() {
                    let Some((ta, wa)) = ea else { continue };
                    for (rb, eb) in cb.iter().enumerate() {
                        let Some((tb, wb)) = eb else { continue };
                        let (pa, pb) = (ia.rep(ra), ib.rep(rb));
                        let val = ta + tb + join_gain(g, pa, va, pb, vb);
                        let r = idx.rep_of(&pa.union(pb));
                        offer(&mut cells, r, val, wa.union(wb));
                    }
                }
            }
        }
        let live = cells.iter().filter(|c| c.is_some()).count();
        stats.push(NodeStat {
            node: x,
            side_size: vx.len(),
            classes: idx.class_count(),
            co_classes: 1,
            entries: live,
            members: live,
            max_family: 1,
            max_parts: 0,
        });
        tables[x] = Some((idx, cells));
    }
    let (_, cells) = tables[layout.root()].take().expect("root table");
    let (value, witness) = cells.into_iter().flatten().max_by_key(|(v, _)| *v).expect("root cell");
    Ok(SolveReport {
        outcome: Outcome::Optimal(Solution { value, witness }),
        stats,
    })
}

struct MmcNode {
    inner: NeighborClassIndex,
    co1: NeighborClassIndex,
    /// Dense over (R, R_Y, R_Ȳ): `(r * c + ry) * c + ryb` with c = co1 classes.
    entries: Vec<Vec<Member>>,
}

impl MmcNode {
    fn at(&self, r: usize, ry: usize, ryb: usize) -> &Vec<Member> {
        let c = self.co1.class_count();
        &self.entries[(r * c + ry) * c + ryb]
    }
}

/// Maximum number of edges between X and V \ X with both sides connected.
pub fn solve_max_minimal_cut(g: &Graph, layout: &RootedLayout, opts: &SolveOptions) -> Result<SolveReport> {
    let cap = opts.cap_or(CUT_CAP);
    let all = g.vertex_set();
    let mut tables: Vec<Option<MmcNode>> = (0..layout.node_count()).map(|_| None).collect();
    let mut stats = Vec::new();
    let root_id = layout.root();
    for &x in layout.postorder() {
        let vx = layout.set(x);
        let co = vx.complement_in(&all);
        let inner = build_index(g, vx, Depth::Exact, cap, x)?;
        let co1 = build_index(g, &co, Depth::Capped(1), cap, x)?;
        let c = co1.class_count();
        let mut acc: Vec<Vec<Member>> = vec![Vec::new(); inner.class_count() * c * c];
        match layout.children(x) {
            None => {
                for m in leaf_family(g, layout.leaf_vertex(x).expect("leaf")) {
                    let r = inner.rep_of(&m.set);
                    for slot in &mut acc[r * c * c..(r + 1) * c * c] {
                        slot.push(m.clone());
                    }
                }
            }
            Some((a, b)) => {
                let ta = tables[a].take().expect("child table");
                let tb = tables[b].take().expect("child table");
                let (va, vb) = (layout.set(a), layout.set(b));
                let look = JoinLookup::build(&ta.inner, &tb.inner, &inner, &ta.co1, &tb.co1, &co1);
                let (na, nb, _) = look.dims();
                // Class of Ȳ ∪ (V_b \ B) over comp V_a, and symmetrically.
                let ayb: Vec<usize> = co1
                    .reps()
                    .iter()
                    .flat_map(|ry| tb.inner.reps().iter().map(|rb| ta.co1.rep_of(&ry.union(&vb.difference(rb)))).collect::<Vec<_>>())
                    .collect();
                let byb: Vec<usize> = co1
                    .reps()
                    .iter()
                    .flat_map(|ry| ta.inner.reps().iter().map(|ra| tb.co1.rep_of(&ry.union(&va.difference(ra)))).collect::<Vec<_>>())
                    .collect();
                let live = |t: &MmcNode, r: usize| {
                    let w = t.co1.class_count().pow(2);
                    t.entries[r * w..(r + 1) * w].iter().any(|e| !e.is_empty())
                };
                let live_a: Vec<usize> = (0..na).filter(|&i| live(&ta, i)).collect();
                let live_b: Vec<usize> = (0..nb).filter(|&i| live(&tb, i)).collect();
                for &ia in &live_a {
                    for &ib in &live_b {
                        let r = look.union(ia, ib);
                        let extra = join_gain(g, ta.inner.rep(ia), va, tb.inner.rep(ib), vb);
                        for ry in 0..c {
                            let (ay, by) = (look.a_co(ry, ib), look.b_co(ry, ia));
                            for ryb in 0..c {
                                let fa = ta.at(ia, ay, ayb[ryb * nb + ib]);
                                if fa.is_empty() {
                                    continue;
                                }
                                let fb = tb.at(ib, by, byb[ryb * na + ia]);
                                if fb.is_empty() {
                                    continue;
                                }
                                merge_into(&mut acc[(r * c + ry) * c + ryb], fa, fb, extra);
                            }
                        }
                    }
                }
            }
        }
        let entries: Vec<Vec<Member>> = if x == root_id {
            acc
        } else {
            acc.into_par_iter()
                .enumerate()
                .map(|(i, fam)| {
                    if fam.is_empty() {
                        return fam;
                    }
                    let (ry, ryb) = ((i / c) % c, i % c);
                    reduce_star(g, vx, &fam, co1.rep(ry), co1.rep(ryb), &co1, Direction::Max)
                })
                .collect()
        };
        stats.push(NodeStat {
            node: x,
            side_size: vx.len(),
            classes: inner.class_count(),
            co_classes: c * c,
            entries: entries.iter().filter(|e| !e.is_empty()).count(),
            members: entries.iter().map(Vec::len).sum(),
            max_family: entries.iter().map(Vec::len).max().unwrap_or(0),
            max_parts: 0,
        });
        tables[x] = Some(MmcNode { inner, co1, entries });
    }
    let root = tables[root_id].take().expect("root table");
    let fam: Vec<Member> = root.entries.into_iter().flatten().collect();
    let outcome = match best_index(&fam, Direction::Max, |m| g.is_minimal_cut(&m.set)) {
        Some(i) => Outcome::Optimal(Solution {
            value: fam[i].weight,
            witness: fam[i].set.clone(),
        }),
        None => Outcome::Infeasible,
    };
    Ok(SolveReport { outcome, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::{generate_layout, LayoutStrategy};
    use crate::problem::catalog;
    use crate::solve::solve;
    use crate::testkit::{gen_named, oracle_solve, NamedGraph, ORACLE_CAP};

    fn run(g: &Graph, name: &str, seed: u64) -> Option<i64> {
        let layout = generate_layout(g, &LayoutStrategy::Random(seed)).unwrap();
        solve(g, &layout, &catalog(name).unwrap(), &SolveOptions::default()).unwrap().outcome.value()
    }

    #[test]
    fn small_examples() {
        let c5 = gen_named(&NamedGraph::Cycle(5)).unwrap();
        let k4 = gen_named(&NamedGraph::Complete(4)).unwrap();
        assert_eq!(run(&c5, "max-cut", 1), Some(4));
        assert_eq!(run(&k4, "max-cut", 1), Some(4));
        assert_eq!(run(&c5, "maximum-minimal-cut", 1), Some(2));
        assert_eq!(run(&k4, "maximum-minimal-cut", 2), Some(4));
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(run(&star, "maximum-minimal-cut", 3), Some(1));
        assert_eq!(run(&Graph::new(1), "maximum-minimal-cut", 0), None);
        assert_eq!(run(&Graph::new(3), "maximum-minimal-cut", 0), None);
        assert_eq!(run(&Graph::new(3), "max-cut", 0), Some(0));
        let two = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(run(&two, "maximum-minimal-cut", 4), Some(0));
    }

    #[test]
    fn matches_oracle_on_random_graphs() {
        for seed in 0..30u64 {
            let n = 2 + (seed % 8) as usize;
            let g = gen_named(&NamedGraph::Random { n, p: [0.25, 0.4, 0.6][seed as usize % 3], seed }).unwrap();
            for name in ["max-cut", "maximum-minimal-cut"] {
                let want = oracle_solve(&g, &catalog(name).unwrap(), ORACLE_CAP).unwrap().best;
                assert_eq!(run(&g, name, seed), want, "{name} seed {seed}");
            }
        }
    }

    #[test]
    fn reduced_entries_stay_small() {
        for seed in 0..6u64 {
            let g = gen_named(&NamedGraph::Random { n: 9, p: 0.35, seed }).unwrap();
            let layout = generate_layout(&g, &LayoutStrategy::Random(seed)).unwrap();
            let rep = solve_max_minimal_cut(&g, &layout, &SolveOptions::default()).unwrap();
            for s in rep.stats.iter().filter(|s| s.node != layout.root()) {
                let co = layout.set(s.node).complement_in(&g.vertex_set());
                let k = crate::nec::nec(&g, &co, Depth::Capped(1), 1 << 20).unwrap();
                assert!(s.max_family <= (k * k).max(2), "node {} family {} k {k}", s.node, s.max_family);
            }
        }
    }
}
