//! Tree and forest variants: important-set filtering, the consistent
//! split of families, and the pendant-apex graph that turns forests into trees.

use rustc_hash::FxHashMap;

use crate::connected::{run_table_dp, DomRule, PartCounter};
use crate::error::Result;
use crate::graph::{Graph, VertexSet};
use crate::layout::{mim_width, q_rank_width, rank_width, LayoutBuilder, RootedLayout};
use crate::nec::{signature, Depth, NecSignature, NeighborClassIndex};
use crate::problem::{CofiniteSet, Constraint, Direction, ProblemKind, ProblemSpec};
use crate::represent::{best_index, reduce, Member};
use crate::solve::{NodeStat, Outcome, Pruning, Solution, SolveOptions, SolveReport};

/// Vertices of `x` with 0, 1 and at least 2 neighbors in `r_co`.
pub fn degree_partition(g: &Graph, x: &VertexSet, r_co: &VertexSet) -> (VertexSet, VertexSet, VertexSet) {
    let (mut x0, mut x1, mut x2) = (g.empty_set(), g.empty_set(), g.empty_set());
    for v in x.iter() {
        match g.neighbors(v).intersection_len(r_co) {
            0 => x0.insert(v),
            1 => x1.insert(v),
            _ => x2.insert(v),
        }
    }
    (x0, x1, x2)
}

/// Drops members that can never complete to a tree with a co-side set
/// 2-equivalent to `r_co`: non-forests, members with two high-degree
/// vertices sharing their outside neighborhood, and, if `limit` is given,
/// members with more than `limit` high-degree vertices.
pub fn filter_important(
    g: &Graph,
    side: &VertexSet,
    fam: &[Member],
    r_co: &VertexSet,
    limit: Option<usize>,
) -> Vec<Member> {
    let co = side.complement_in(&g.vertex_set());
    fam.iter()
        .filter(|m| {
            if !g.is_forest(&m.set) {
                return false;
            }
            let (_, _, x2) = degree_partition(g, &m.set, r_co);
            if limit.is_some_and(|l| x2.len() > l) {
                return false;
            }
            let mut rows: Vec<VertexSet> = x2.iter().map(|v| g.neighbors(v).intersection(&co)).collect();
            let k = rows.len();
            rows.sort();
            rows.dedup();
            rows.len() == k
        })
        .cloned()
        .collect()
}

/// Exact outside signature of X²⁺ together with |E(G[X])| − |X \ X¹|.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TildeKey {
    pub high: NecSignature,
    pub balance: i64,
}

pub fn tilde_key(g: &Graph, side: &VertexSet, x: &VertexSet, r_co: &VertexSet) -> TildeKey {
    let (x0, _, x2) = degree_partition(g, x, r_co);
    TildeKey {
        high: signature(g, side, &x2, Depth::Exact),
        balance: g.induced_edge_count(x) as i64 - (x0.len() + x2.len()) as i64,
    }
}

/// Filters, splits by `TildeKey` and reduces each part. Returns the kept
/// members in input order and the number of parts.
pub fn reduce_acy(
    g: &Graph,
    side: &VertexSet,
    fam: &[Member],
    r_co: &VertexSet,
    co1: &NeighborClassIndex,
    dir: Direction,
    limit: Option<usize>,
) -> (Vec<Member>, usize) {
    let kept = filter_important(g, side, fam, r_co, limit);
    let mut parts: Vec<Vec<usize>> = Vec::new();
    let mut by_key: FxHashMap<TildeKey, usize> = FxHashMap::default();
    for (i, m) in kept.iter().enumerate() {
        let key = tilde_key(g, side, &m.set, r_co);
        let p = *by_key.entry(key).or_insert_with(|| {
            parts.push(Vec::new());
            parts.len() - 1
        });
        parts[p].push(i);
    }
    let mut out: Vec<(usize, Member)> = Vec::new();
    for part in &parts {
        let sub: Vec<Member> = part.iter().map(|&i| kept[i].clone()).collect();
        let red = reduce(g, side, &sub, r_co, co1, dir);
        // Members are distinct sets, so positions can be recovered by value.
        let mut j = 0;
        for m in red {
            while sub[j] != m {
                j += 1;
            }
            out.push((part[j], m));
        }
    }
    out.sort_by_key(|(i, _)| *i);
    (out.into_iter().map(|(_, m)| m).collect(), parts.len())
}

/// Per-node cap on |X²⁺| implied by the pruning mode.
pub(crate) fn node_limits(g: &Graph, layout: &RootedLayout, pruning: Pruning) -> Vec<Option<usize>> {
    (0..layout.node_count())
        .map(|x| {
            let side = layout.set(x);
            match pruning {
                Pruning::Always => None,
                Pruning::Mim(budget) => mim_width(g, side, budget).map(|m| 2 * m),
                Pruning::Rw => Some(2 * rank_width(g, side)),
                Pruning::Rwq => Some(2 * q_rank_width(g, side)),
            }
        })
        .collect()
}

fn acyclic_dp(
    g: &Graph,
    layout: &RootedLayout,
    base: &[bool],
    rule: &DomRule,
    dir: Direction,
    opts: &SolveOptions,
) -> Result<(Vec<Member>, Vec<NodeStat>)> {
    let limits = node_limits(g, layout, opts.pruning);
    let counter = PartCounter::default();
    let reducer = |x: usize, side: &VertexSet, fam: Vec<Member>, r_co: &VertexSet, co1: &NeighborClassIndex| {
        let (out, parts) = reduce_acy(g, side, &fam, r_co, co1, dir, limits[x]);
        counter.record(x, parts);
        out
    };
    let (root, mut stats) = run_table_dp(g, layout, base, rule, opts, &reducer)?;
    counter.apply(&mut stats);
    Ok((root, stats))
}

/// Optimum (σ,ρ)-dominating set inducing a tree.
pub fn solve_ac(g: &Graph, layout: &RootedLayout, spec: &ProblemSpec, opts: &SolveOptions) -> Result<SolveReport> {
    let rule = DomRule::plain(g, spec);
    let base: Vec<bool> = (0..layout.node_count()).map(|x| layout.is_leaf(x)).collect();
    let (root, stats) = acyclic_dp(g, layout, &base, &rule, spec.direction, opts)?;
    let outcome = match best_index(&root, spec.direction, |m| g.is_tree(&m.set)) {
        Some(i) => Outcome::Optimal(Solution {
            value: root[i].weight,
            witness: root[i].set.clone(),
        }),
        None => Outcome::Infeasible,
    };
    Ok(SolveReport { outcome, stats })
}

/// The graph with a pendant copy β(v) of every vertex and an apex v0
/// adjacent to all copies, with the matching layout.
#[derive(Clone, Debug)]
pub struct StarGraphMap {
    pub graph: Graph,
    pub layout: RootedLayout,
    /// Number of original vertices; β(v) = n + v and v0 = 2n.
    pub n: usize,
    pub apex: usize,
    /// Nodes filled by enumeration: the (v, β(v)) pairs and the apex leaf.
    pub base: Vec<bool>,
    /// Nodes coming from the original layout, plus the new root.
    pub lifted: Vec<bool>,
}

impl StarGraphMap {
    pub fn beta(&self, v: usize) -> usize {
        self.n + v
    }

    pub fn original(&self) -> VertexSet {
        VertexSet::from_vertices(self.graph.n(), 0..self.n)
    }
}

pub fn build_star(g: &Graph, layout: &RootedLayout) -> Result<StarGraphMap> {
    layout.validate(g)?;
    let n = g.n();
    let apex = 2 * n;
    let mut star = Graph::new(2 * n + 1);
    for (u, v) in g.edges() {
        star.add_edge(u, v)?;
    }
    for v in 0..n {
        star.add_edge(v, n + v)?;
        star.add_edge(apex, n + v)?;
    }
    let mut w = g.weights().to_vec();
    w.resize(2 * n + 1, 0);
    let star = star.with_weights(w)?;
    let mut b = LayoutBuilder::new();
    let mut map = vec![usize::MAX; layout.node_count()];
    let mut base_ids = Vec::new();
    let mut lifted_ids = Vec::new();
    for &x in layout.postorder() {
        map[x] = match (layout.leaf_vertex(x), layout.children(x)) {
            (Some(v), _) => {
                let l = b.leaf(v);
                let c = b.leaf(n + v);
                let p = b.join(l, c);
                base_ids.push(p);
                p
            }
            (None, Some((a, c))) => b.join(map[a], map[c]),
            (None, None) => unreachable!("validated layout"),
        };
        lifted_ids.push(map[x]);
    }
    let apex_leaf = b.leaf(apex);
    base_ids.push(apex_leaf);
    let root = b.join(map[layout.root()], apex_leaf);
    lifted_ids.push(root);
    let new_layout = b.finish(2 * n + 1, root)?;
    let mut base = vec![false; new_layout.node_count()];
    for i in base_ids {
        base[i] = true;
    }
    let mut lifted = vec![false; new_layout.node_count()];
    for i in lifted_ids {
        lifted[i] = true;
    }
    Ok(StarGraphMap {
        graph: star,
        layout: new_layout,
        n,
        apex,
        base,
        lifted,
    })
}

/// Optimum (σ,ρ)-dominating set inducing a forest, via trees in the
/// pendant-apex graph.
pub fn solve_acyclic(g: &Graph, layout: &RootedLayout, spec: &ProblemSpec, opts: &SolveOptions) -> Result<SolveReport> {
    let star = build_star(g, layout)?;
    let sg = &star.graph;
    let orig = star.original();
    let mut rule = DomRule::plain(sg, spec);
    rule.dominated = orig.clone();
    rule.counted = (0..sg.n())
        .map(|v| {
            if v < star.n {
                VertexSet::from_vertices(sg.n(), g.neighbors(v).iter())
            } else {
                sg.empty_set()
            }
        })
        .collect();
    let (root, stats) = acyclic_dp(sg, &star.layout, &star.base, &rule, spec.direction, opts)?;
    let outcome = match best_index(&root, spec.direction, |m| sg.is_tree(&m.set)) {
        Some(i) => Outcome::Optimal(Solution {
            value: root[i].weight,
            witness: VertexSet::from_vertices(g.n(), root[i].set.intersection(&orig).iter()),
        }),
        None => Outcome::Infeasible,
    };
    Ok(SolveReport { outcome, stats })
}

/// Minimum-weight set whose removal leaves a forest.
pub fn solve_fvs(g: &Graph, layout: &RootedLayout, spec: &ProblemSpec, opts: &SolveOptions) -> Result<SolveReport> {
    debug_assert_eq!(spec.kind, ProblemKind::FeedbackVertexSet);
    let forest = forest_spec();
    let rep = solve_acyclic(g, layout, &forest, opts)?;
    let total = g.set_weight_sum(&g.vertex_set());
    let outcome = match rep.outcome {
        Outcome::Optimal(s) => Outcome::Optimal(Solution {
            value: total - s.value,
            witness: s.witness.complement_in(&g.vertex_set()),
        }),
        Outcome::Infeasible => Outcome::Infeasible,
    };
    Ok(SolveReport { outcome, stats: rep.stats })
}

/// The forest problem underlying feedback vertex set.
pub fn forest_spec() -> ProblemSpec {
    ProblemSpec::sigma_rho(CofiniteSet::naturals(), CofiniteSet::naturals(), Direction::Max, Constraint::Acyclic)
}
