//! Table DP for connected (σ,ρ)-domination, Steiner tree and the
//! co-variant, plus the shared table engine used by the acyclic solvers.

use std::collections::BTreeMap;
use std::sync::Mutex;

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::Result;
use crate::graph::{Graph, VertexSet};
use crate::layout::RootedLayout;
use crate::nec::{Depth, NeighborClassIndex};
use crate::problem::{Constraint, Direction, ProblemSpec};
use crate::represent::{best_index, merge_into, reduce, JoinLookup, Member};
use crate::solve::{build_index, NodeStat, Outcome, Solution, SolveOptions, SolveReport};

/// Which vertices must be (σ,ρ)-dominated and which neighbors count.
pub(crate) struct DomRule<'a> {
    pub spec: &'a ProblemSpec,
    pub depth: u32,
    pub dominated: VertexSet,
    pub counted: Vec<VertexSet>,
    /// Members must contain these vertices of their side.
    pub required: VertexSet,
}

impl<'a> DomRule<'a> {
    pub fn plain(g: &Graph, spec: &'a ProblemSpec) -> Self {
        DomRule {
            spec,
            depth: spec.dp_depth(),
            dominated: g.vertex_set(),
            counted: (0..g.n()).map(|v| g.neighbors(v).clone()).collect(),
            required: g.empty_set(),
        }
    }

    /// Capped-count test for `x ∪ co_part` on the dominated vertices of `side`.
    pub fn ok(&self, side: &VertexSet, x: &VertexSet, co_part: &VertexSet) -> bool {
        let d = self.depth;
        side.intersection(&self.dominated).iter().all(|v| {
            let nb = &self.counted[v];
            let c = ((nb.intersection_len(x) + nb.intersection_len(co_part)) as u32).min(d);
            if x.contains(v) {
                self.spec.sigma.contains(c)
            } else {
                self.spec.rho.contains(c)
            }
        })
    }
}

pub(crate) type Reducer<'r> =
    dyn Fn(usize, &VertexSet, Vec<Member>, &VertexSet, &NeighborClassIndex) -> Vec<Member> + Sync + 'r;

struct NodeTables {
    inner: NeighborClassIndex,
    outer: NeighborClassIndex,
    outer1: Option<NeighborClassIndex>,
    /// Dense over (R, R'): `r * outer.class_count() + r_co`.
    entries: Vec<Vec<Member>>,
}

impl NodeTables {
    fn outer1(&self) -> &NeighborClassIndex {
        self.outer1.as_ref().unwrap_or(&self.outer)
    }
}

/// Nodes that are computed: base nodes and everything above them.
pub(crate) fn active_nodes(layout: &RootedLayout, base: &[bool]) -> Vec<bool> {
    let mut active = vec![true; layout.node_count()];
    for &x in layout.postorder().iter().rev() {
        let parent_blocks = layout
            .parent(x)
            .is_some_and(|p| !active[p] || base[p]);
        if parent_blocks {
            active[x] = false;
        }
    }
    active
}

fn subsets_of(n: usize, side: &VertexSet) -> Vec<VertexSet> {
    let verts = side.to_vec();
    assert!(verts.len() < 24, "base node too large to enumerate");
    (0u32..(1u32 << verts.len()))
        .map(|m| VertexSet::from_vertices(n, (0..verts.len()).filter(|i| m >> i & 1 == 1).map(|i| verts[i])))
        .collect()
}

/// Runs the (R, R') table program bottom-up; returns the root entry
/// D_r[∅, ∅] and per-node statistics. Base nodes are filled by direct
/// enumeration of all subsets of their side.
pub(crate) fn run_table_dp(
    g: &Graph,
    layout: &RootedLayout,
    base: &[bool],
    rule: &DomRule,
    opts: &SolveOptions,
    reducer: &Reducer,
) -> Result<(Vec<Member>, Vec<NodeStat>)> {
    let cap = opts.table_cap();
    let all = g.vertex_set();
    let depth = Depth::Capped(rule.depth);
    let active = active_nodes(layout, base);
    let mut tables: Vec<Option<NodeTables>> = (0..layout.node_count()).map(|_| None).collect();
    let mut stats = Vec::new();
    for &x in layout.postorder() {
        if !active[x] {
            continue;
        }
        let vx = layout.set(x);
        let co = vx.complement_in(&all);
        let inner = build_index(g, vx, depth, cap, x)?;
        let outer = build_index(g, &co, depth, cap, x)?;
        let outer1 = if rule.depth == 1 {
            None
        } else {
            Some(build_index(g, &co, Depth::Capped(1), cap, x)?)
        };
        let nco = outer.class_count();
        let mut node = NodeTables {
            inner,
            outer,
            outer1,
            entries: Vec::new(),
        };
        let mut acc: Vec<Vec<Member>> = vec![Vec::new(); node.inner.class_count() * nco];
        let children = if base[x] { None } else { layout.children(x) };
        match children {
            None => {
                let required = rule.required.intersection(vx);
                for s in subsets_of(g.n(), vx) {
                    if !required.is_subset(&s) {
                        continue;
                    }
                    let r = node.inner.rep_of(&s);
                    let w = g.set_weight_sum(&s);
                    for (rc, rep) in node.outer.reps().iter().enumerate() {
                        if rule.ok(vx, &s, rep) {
                            acc[r * nco + rc].push(Member::new(s.clone(), w));
                        }
                    }
                }
            }
            Some((a, b)) => {
                let ta = tables[a].take().expect("child table");
                let tb = tables[b].take().expect("child table");
                let look = JoinLookup::build(&ta.inner, &tb.inner, &node.inner, &ta.outer, &tb.outer, &node.outer);
                let (na, nb, _) = look.dims();
                let (nca, ncb) = (ta.outer.class_count(), tb.outer.class_count());
                let row_live = |t: &NodeTables, r: usize, w: usize| t.entries[r * w..(r + 1) * w].iter().any(|e| !e.is_empty());
                let live_a: Vec<bool> = (0..na).map(|a| row_live(&ta, a, nca)).collect();
                let live_b: Vec<bool> = (0..nb).map(|b| row_live(&tb, b, ncb)).collect();
                let limit = 4 * node.outer1().class_count().pow(2);
                for ia in (0..na).filter(|&i| live_a[i]) {
                    for ib in (0..nb).filter(|&i| live_b[i]) {
                        let r = look.union(ia, ib);
                        for rc in 0..nco {
                            let fa = &ta.entries[ia * nca + look.a_co(rc, ib)];
                            if fa.is_empty() {
                                continue;
                            }
                            let fb = &tb.entries[ib * ncb + look.b_co(rc, ia)];
                            if fb.is_empty() {
                                continue;
                            }
                            let e = &mut acc[r * nco + rc];
                            merge_into(e, fa, fb, 0);
                            if opts.streaming && e.len() > limit {
                                let fam = std::mem::take(e);
                                *e = reducer(x, vx, fam, node.outer.rep(rc), node.outer1());
                            }
                        }
                    }
                }
            }
        }
        node.entries = acc
            .into_par_iter()
            .enumerate()
            .map(|(i, fam)| {
                if fam.is_empty() {
                    fam
                } else {
                    reducer(x, vx, fam, node.outer.rep(i % nco), node.outer1())
                }
            })
            .collect();
        stats.push(NodeStat {
            node: x,
            side_size: vx.len(),
            classes: node.inner.class_count(),
            co_classes: nco,
            entries: node.entries.iter().filter(|e| !e.is_empty()).count(),
            members: node.entries.iter().map(Vec::len).sum(),
            max_family: node.entries.iter().map(Vec::len).max().unwrap_or(0),
            max_parts: 0,
        });
        tables[x] = Some(node);
    }
    let root = tables[layout.root()].take().expect("root table");
    let fam = root.entries.into_iter().next().unwrap_or_default();
    Ok((fam, stats))
}

fn keep_best(fam: Vec<Member>, dir: Direction) -> Vec<Member> {
    match best_index(&fam, dir, |_| true) {
        Some(i) => vec![fam[i].clone()],
        None => Vec::new(),
    }
}

fn finish(fam: &[Member], dir: Direction, accept: impl Fn(&VertexSet) -> bool) -> Outcome {
    match best_index(fam, dir, |m| accept(&m.set)) {
        Some(i) => Outcome::Optimal(Solution {
            value: fam[i].weight,
            witness: fam[i].set.clone(),
        }),
        None => Outcome::Infeasible,
    }
}

/// Connected (σ,ρ)-domination; with `Constraint::None` plain domination.
pub fn solve_connected(g: &Graph, layout: &RootedLayout, spec: &ProblemSpec, opts: &SolveOptions) -> Result<SolveReport> {
    let rule = DomRule::plain(g, spec);
    let dir = spec.direction;
    let base: Vec<bool> = (0..layout.node_count()).map(|x| layout.is_leaf(x)).collect();
    let plain = spec.constraint == Constraint::None;
    let reducer = move |_x: usize, side: &VertexSet, fam: Vec<Member>, r_co: &VertexSet, co1: &NeighborClassIndex| {
        if plain {
            keep_best(fam, dir)
        } else {
            reduce(g, side, &fam, r_co, co1, dir)
        }
    };
    let (root, stats) = run_table_dp(g, layout, &base, &rule, opts, &reducer)?;
    let outcome = finish(&root, dir, |s| plain || g.is_connected(s));
    Ok(SolveReport { outcome, stats })
}

/// Minimum-weight connected set containing all terminals.
pub fn solve_steiner(g: &Graph, layout: &RootedLayout, terminals: &[usize], opts: &SolveOptions) -> Result<SolveReport> {
    let spec = ProblemSpec::steiner(terminals.to_vec());
    let mut rule = DomRule::plain(g, &spec);
    rule.required = VertexSet::from_vertices(g.n(), terminals.iter().copied());
    let base: Vec<bool> = (0..layout.node_count()).map(|x| layout.is_leaf(x)).collect();
    let reducer = |_x: usize, side: &VertexSet, fam: Vec<Member>, r_co: &VertexSet, co1: &NeighborClassIndex| {
        reduce(g, side, &fam, r_co, co1, Direction::Min)
    };
    let (root, stats) = run_table_dp(g, layout, &base, &rule, opts, &reducer)?;
    let outcome = finish(&root, Direction::Min, |s| g.is_connected(s));
    Ok(SolveReport { outcome, stats })
}

type CoKey = [u32; 4];

struct CoTables {
    dom_in: NeighborClassIndex,
    dom_out: NeighborClassIndex,
    con_in: NeighborClassIndex,
    con_out: NeighborClassIndex,
    /// Keyed (R, R', R̄, R̄'): R, R' classes of the dominating part
    /// V_x \ X and its co-side partner; R̄, R̄' depth-1 classes of X and Y.
    entries: BTreeMap<CoKey, Vec<Member>>,
}

/// Connected X whose complement is (σ,ρ)-dominating.
pub fn solve_connected_co(g: &Graph, layout: &RootedLayout, spec: &ProblemSpec, opts: &SolveOptions) -> Result<SolveReport> {
    let cap = opts.table_cap();
    let rule = DomRule::plain(g, spec);
    let dir = spec.direction;
    let depth = Depth::Capped(rule.depth);
    let all = g.vertex_set();
    let mut tables: Vec<Option<CoTables>> = (0..layout.node_count()).map(|_| None).collect();
    let mut stats = Vec::new();
    for &x in layout.postorder() {
        let vx = layout.set(x);
        let co = vx.complement_in(&all);
        let mut node = CoTables {
            dom_in: build_index(g, vx, depth, cap, x)?,
            dom_out: build_index(g, &co, depth, cap, x)?,
            con_in: build_index(g, vx, Depth::Capped(1), cap, x)?,
            con_out: build_index(g, &co, Depth::Capped(1), cap, x)?,
            entries: BTreeMap::new(),
        };
        let mut acc: BTreeMap<CoKey, Vec<Member>> = BTreeMap::new();
        match layout.children(x) {
            None => {
                for s in subsets_of(g.n(), vx) {
                    let z = vx.difference(&s);
                    let r = node.dom_in.rep_of(&z) as u32;
                    let rb = node.con_in.rep_of(&s) as u32;
                    let w = g.set_weight_sum(&s);
                    for (rc, rep) in node.dom_out.reps().iter().enumerate() {
                        if !rule.ok(vx, &z, rep) {
                            continue;
                        }
                        for rbc in 0..node.con_out.class_count() {
                            acc.entry([r, rc as u32, rb, rbc as u32])
                                .or_default()
                                .push(Member::new(s.clone(), w));
                        }
                    }
                }
            }
            Some((a, b)) => {
                let ta = tables[a].take().expect("child table");
                let tb = tables[b].take().expect("child table");
                let dl = JoinLookup::build(&ta.dom_in, &tb.dom_in, &node.dom_in, &ta.dom_out, &tb.dom_out, &node.dom_out);
                let cl = JoinLookup::build(&ta.con_in, &tb.con_in, &node.con_in, &ta.con_out, &tb.con_out, &node.con_out);
                let pairs = |t: &CoTables| -> Vec<(usize, usize)> {
                    let mut v: Vec<(usize, usize)> = t.entries.keys().map(|k| (k[0] as usize, k[2] as usize)).collect();
                    v.sort_unstable();
                    v.dedup();
                    v
                };
                let (pa, pb) = (pairs(&ta), pairs(&tb));
                let ma: FxHashMap<CoKey, &Vec<Member>> = ta.entries.iter().map(|(k, v)| (*k, v)).collect();
                let mb: FxHashMap<CoKey, &Vec<Member>> = tb.entries.iter().map(|(k, v)| (*k, v)).collect();
                let (ndo, nco1) = (node.dom_out.class_count(), node.con_out.class_count());
                for &(ia, iab) in &pa {
                    for &(ib, ibb) in &pb {
                        let r = dl.union(ia, ib) as u32;
                        let rb = cl.union(iab, ibb) as u32;
                        for rc in 0..ndo {
                            let (a_co, b_co) = (dl.a_co(rc, ib) as u32, dl.b_co(rc, ia) as u32);
                            for rbc in 0..nco1 {
                                let ka = [ia as u32, a_co, iab as u32, cl.a_co(rbc, ibb) as u32];
                                let Some(fa) = ma.get(&ka) else { continue };
                                let kb = [ib as u32, b_co, ibb as u32, cl.b_co(rbc, iab) as u32];
                                let Some(fb) = mb.get(&kb) else { continue };
                                merge_into(acc.entry([r, rc as u32, rb, rbc as u32]).or_default(), fa, fb, 0);
                            }
                        }
                    }
                }
            }
        }
        let reduced: Vec<(CoKey, Vec<Member>)> = acc
            .into_iter()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|(k, fam)| {
                let r_co = node.con_out.rep(k[3] as usize);
                (k, reduce(g, vx, &fam, r_co, &node.con_out, dir))
            })
            .collect();
        node.entries = reduced.into_iter().filter(|(_, f)| !f.is_empty()).collect();
        stats.push(NodeStat {
            node: x,
            side_size: vx.len(),
            classes: node.dom_in.class_count() * node.con_in.class_count(),
            co_classes: node.dom_out.class_count() * node.con_out.class_count(),
            entries: node.entries.len(),
            members: node.entries.values().map(Vec::len).sum(),
            max_family: node.entries.values().map(Vec::len).max().unwrap_or(0),
            max_parts: 0,
        });
        tables[x] = Some(node);
    }
    let root = tables[layout.root()].take().expect("root table");
    let fam = root.entries.get(&[0, 0, 0, 0]).cloned().unwrap_or_default();
    let outcome = finish(&fam, dir, |s| g.is_connected(s) && spec.is_dominating(g, &s.complement_in(&all)));
    Ok(SolveReport { outcome, stats })
}

/// Collects the largest part count reported per node.
#[derive(Default)]
pub(crate) struct PartCounter(Mutex<FxHashMap<usize, usize>>);

impl PartCounter {
    pub fn record(&self, node: usize, parts: usize) {
        let mut m = self.0.lock().expect("part counter");
        let e = m.entry(node).or_insert(0);
        *e = (*e).max(parts);
    }

    pub fn apply(self, stats: &mut [NodeStat]) {
        let m = self.0.into_inner().expect("part counter");
        for s in stats {
            s.max_parts = m.get(&s.node).copied().unwrap_or(0);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::{generate_layout, LayoutStrategy};
    use crate::problem::catalog;
    use crate::solve::solve;
    use crate::testkit::{gen_named, oracle_solve, randomize_weights, NamedGraph, ORACLE_CAP};

    fn run(g: &Graph, spec: &ProblemSpec, seed: u64) -> Outcome {
        let layout = generate_layout(g, &LayoutStrategy::Random(seed)).unwrap();
        solve(g, &layout, spec, &SolveOptions::default()).unwrap().outcome
    }

    #[test]
    fn small_examples() {
        let p4 = gen_named(&NamedGraph::Path(4)).unwrap();
        let cds = catalog("connected-dominating-set").unwrap();
        match run(&p4, &cds, 1) {
            Outcome::Optimal(s) => {
                assert_eq!(s.value, 2);
                assert_eq!(s.witness, VertexSet::from_vertices(4, [1, 2]));
            }
            o => panic!("{o:?}"),
        }
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(run(&star, &cds, 2).value(), Some(1));
        let cvc = catalog("connected-vertex-cover").unwrap();
        let c4 = gen_named(&NamedGraph::Cycle(4)).unwrap();
        assert_eq!(run(&c4, &cvc, 3).value(), Some(3));
        assert_eq!(run(&gen_named(&NamedGraph::Complete(3)).unwrap(), &cvc, 3).value(), Some(2));
        assert_eq!(run(&Graph::new(3), &cvc, 3).value(), Some(1));
        let st = ProblemSpec::steiner(vec![0, 3]);
        assert_eq!(run(&p4, &st, 4).value(), Some(4));
        assert_eq!(run(&p4, &ProblemSpec::steiner(vec![2]), 4).value(), Some(1));
        let split = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(run(&split, &ProblemSpec::steiner(vec![0, 3]), 5), Outcome::Infeasible);
        assert_eq!(run(&Graph::new(1), &cds, 0).value(), Some(1));
    }

    #[test]
    fn matches_oracle_on_random_graphs() {
        let names = [
            "connected-dominating-set",
            "connected-vertex-cover",
            "connected-perfect-dominating-set",
            "connected-q-regular:2",
        ];
        for seed in 0..24u64 {
            let n = 3 + (seed % 7) as usize;
            let g = gen_named(&NamedGraph::Random { n, p: [0.2, 0.35, 0.5][seed as usize % 3], seed }).unwrap();
            let g = randomize_weights(g, 1, 10, seed);
            for name in names {
                let spec = catalog(name).unwrap();
                assert_eq!(run(&g, &spec, seed).value(), oracle_solve(&g, &spec, ORACLE_CAP).unwrap().best, "{name} seed {seed}");
            }
            let spec = ProblemSpec::steiner(vec![0, n - 1]);
            assert_eq!(run(&g, &spec, seed).value(), oracle_solve(&g, &spec, ORACLE_CAP).unwrap().best, "steiner seed {seed}");
        }
    }

    #[test]
    fn streaming_and_none_constraint() {
        let spec = catalog("connected-dominating-set").unwrap();
        let mut ds = spec.clone();
        ds.constraint = Constraint::None;
        ds.name = None;
        for seed in 0..10u64 {
            let g = randomize_weights(gen_named(&NamedGraph::Random { n: 9, p: 0.3, seed }).unwrap(), 1, 10, seed);
            let layout = generate_layout(&g, &LayoutStrategy::Random(seed)).unwrap();
            let plain = solve(&g, &layout, &spec, &SolveOptions::default()).unwrap().outcome;
            let opts = SolveOptions { streaming: true, ..SolveOptions::default() };
            let streamed = solve(&g, &layout, &spec, &opts).unwrap().outcome;
            assert_eq!(plain.value(), streamed.value());
            assert_eq!(run(&g, &ds, seed).value(), oracle_solve(&g, &ds, ORACLE_CAP).unwrap().best);
        }
    }

    #[test]
    fn active_nodes_skip_below_base() {
        let l = RootedLayout::parse("(((1) (2)) (3))", 3).unwrap();
        let mut base = vec![false; l.node_count()];
        let pair = l.children(l.root()).unwrap().0;
        base[pair] = true;
        let act = active_nodes(&l, &base);
        assert_eq!(act.iter().filter(|&&a| a).count(), 3);
        assert!(act[pair] && act[l.root()]);
    }
}
