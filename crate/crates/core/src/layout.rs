use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf2::{rank_gf2, rank_rational, BitMatrix, BitRow};
use crate::graph::{Graph, VertexSet};
use crate::nec::{Depth, NeighborClassIndex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayoutNode {
    pub children: Vec<usize>,
    pub vertex: Option<usize>,
}

/// Rooted binary tree whose leaves are the vertices of a graph.
#[derive(Clone, Debug)]
pub struct RootedLayout {
    n: usize,
    nodes: Vec<LayoutNode>,
    root: usize,
    sets: Vec<VertexSet>,
    parent: Vec<Option<usize>>,
    postorder: Vec<usize>,
}

/// Incremental construction of a layout, leaves first.
#[derive(Clone, Debug, Default)]
pub struct LayoutBuilder {
    nodes: Vec<LayoutNode>,
}

impl LayoutBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn leaf(&mut self, v: usize) -> usize {
        self.nodes.push(LayoutNode {
            children: Vec::new(),
            vertex: Some(v),
        });
        self.nodes.len() - 1
    }

    pub fn join(&mut self, a: usize, b: usize) -> usize {
        self.nodes.push(LayoutNode {
            children: vec![a, b],
            vertex: None,
        });
        self.nodes.len() - 1
    }

    pub fn finish(self, n: usize, root: usize) -> Result<RootedLayout> {
        RootedLayout::from_nodes(n, self.nodes, root)
    }
}

impl RootedLayout {
    /// Checks the tree shape and the leaf bijection, then caches V_x.
    pub fn from_nodes(n: usize, nodes: Vec<LayoutNode>, root: usize) -> Result<Self> {
        let bad = |m: String| Error::Layout(m);
        if root >= nodes.len() {
            return Err(bad(format!("root {root} is not a node")));
        }
        let mut parent = vec![None; nodes.len()];
        for (x, node) in nodes.iter().enumerate() {
            match (node.vertex, node.children.len()) {
                (Some(_), 0) => {}
                (Some(_), _) => return Err(bad(format!("binary tree: leaf node {x} has children"))),
                (None, 2) => {}
                (None, k) => {
                    return Err(bad(format!(
                        "binary tree: internal node {x} has {k} children"
                    )))
                }
            }
            for &c in &node.children {
                if c >= nodes.len() || c == x {
                    return Err(bad(format!("binary tree: node {x} has invalid child {c}")));
                }
                if parent[c].is_some() {
                    return Err(bad(format!("binary tree: node {c} has two parents")));
                }
                parent[c] = Some(x);
            }
        }
        if parent[root].is_some() {
            return Err(bad("binary tree: root has a parent".into()));
        }
        // Iterative DFS from the root for post-order and reachability.
        let mut postorder = Vec::with_capacity(nodes.len());
        let mut stack = vec![(root, false)];
        let mut visited = vec![false; nodes.len()];
        while let Some((x, done)) = stack.pop() {
            if done {
                postorder.push(x);
                continue;
            }
            if visited[x] {
                return Err(bad("binary tree: cycle".into()));
            }
            visited[x] = true;
            stack.push((x, true));
            for &c in nodes[x].children.iter().rev() {
                stack.push((c, false));
            }
        }
        if postorder.len() != nodes.len() {
            return Err(bad("binary tree: unreachable nodes".into()));
        }
        let mut seen = vec![false; n];
        let mut sets = vec![VertexSet::empty(n); nodes.len()];
        for &x in &postorder {
            if let Some(v) = nodes[x].vertex {
                if v >= n {
                    return Err(bad(format!("leaf bijection: vertex {} out of range", v + 1)));
                }
                if seen[v] {
                    return Err(bad(format!("leaf bijection: vertex {} appears twice", v + 1)));
                }
                seen[v] = true;
                sets[x] = VertexSet::singleton(n, v);
            } else {
                let (a, b) = (nodes[x].children[0], nodes[x].children[1]);
                sets[x] = sets[a].union(&sets[b]);
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(bad(format!("leaf bijection: vertex {} has no leaf", v + 1)));
        }
        Ok(RootedLayout {
            n,
            nodes,
            root,
            sets,
            parent,
            postorder,
        })
    }

    /// Confirms the layout matches `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        if g.n() != self.n {
            return Err(Error::Layout(format!(
                "leaf bijection: layout has {} leaves, graph has {} vertices",
                self.n,
                g.n()
            )));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node(&self, x: usize) -> &LayoutNode {
        &self.nodes[x]
    }

    pub fn is_leaf(&self, x: usize) -> bool {
        self.nodes[x].vertex.is_some()
    }

    pub fn leaf_vertex(&self, x: usize) -> Option<usize> {
        self.nodes[x].vertex
    }

    pub fn children(&self, x: usize) -> Option<(usize, usize)> {
        let c = &self.nodes[x].children;
        (c.len() == 2).then(|| (c[0], c[1]))
    }

    pub fn parent(&self, x: usize) -> Option<usize> {
        self.parent[x]
    }

    /// V_x.
    pub fn set(&self, x: usize) -> &VertexSet {
        &self.sets[x]
    }

    /// Children before parents; the root comes last.
    pub fn postorder(&self) -> &[usize] {
        &self.postorder
    }

    /// Parses `(x)` leaves and `(L R)` internal nodes, 1-indexed.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let mut p = Parser {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            nodes: Vec::new(),
        };
        let root = p.expr()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(Error::Parse {
                line: p.line,
                msg: format!("trailing input at offset {}", p.pos),
            });
        }
        Self::from_nodes(n, p.nodes, root)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_node(self.root, &mut out);
        out
    }

    fn write_node(&self, x: usize, out: &mut String) {
        match self.nodes[x].vertex {
            Some(v) => out.push_str(&format!("({})", v + 1)),
            None => {
                out.push('(');
                self.write_node(self.nodes[x].children[0], out);
                out.push(' ');
                self.write_node(self.nodes[x].children[1], out);
                out.push(')');
            }
        }
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    nodes: Vec<LayoutNode>,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            if self.chars[self.pos] == '\n' {
                self.line += 1;
            }
            self.pos += 1;
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            msg: format!("{} (offset {})", msg.into(), self.pos),
        }
    }

    fn expr(&mut self) -> Result<usize> {
        self.skip_ws();
        if self.chars.get(self.pos) != Some(&'(') {
            return Err(self.err("expected '('"));
        }
        self.pos += 1;
        self.skip_ws();
        let node = match self.chars.get(self.pos) {
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let s: String = self.chars[start..self.pos].iter().collect();
                let v: usize = s.parse().map_err(|_| self.err("bad vertex number"))?;
                if v == 0 {
                    return Err(self.err("vertices are 1-indexed"));
                }
                LayoutNode {
                    children: Vec::new(),
                    vertex: Some(v - 1),
                }
            }
            Some('(') => {
                let mut children = Vec::new();
                loop {
                    self.skip_ws();
                    match self.chars.get(self.pos) {
                        Some('(') => children.push(self.expr()?),
                        _ => break,
                    }
                }
                LayoutNode {
                    children,
                    vertex: None,
                }
            }
            _ => return Err(self.err("expected vertex number or '('")),
        };
        self.skip_ws();
        if self.chars.get(self.pos) != Some(&')') {
            return Err(self.err("expected ')'"));
        }
        self.pos += 1;
        self.nodes.push(node);
        Ok(self.nodes.len() - 1)
    }
}

/// Rows N(v) ∩ comp(side) for v in `side`, as packed bits over comp(side).
fn cut_rows(g: &Graph, side: &VertexSet) -> (Vec<usize>, Vec<usize>, Vec<Vec<bool>>) {
    let co = side.complement_in(&g.vertex_set());
    let rows_v = side.to_vec();
    let cols_v = co.to_vec();
    let rows = rows_v
        .iter()
        .map(|&v| cols_v.iter().map(|&u| g.has_edge(u, v)).collect())
        .collect();
    (rows_v, cols_v, rows)
}

/// Number of distinct rows of the cut matrix (including an all-zero row).
pub fn module_width(g: &Graph, side: &VertexSet) -> usize {
    let co = side.complement_in(&g.vertex_set());
    let mut rows: Vec<VertexSet> = side.iter().map(|v| g.neighbors(v).intersection(&co)).collect();
    rows.sort();
    rows.dedup();
    rows.len()
}

pub fn rank_width(g: &Graph, side: &VertexSet) -> usize {
    let (_, cols, rows) = cut_rows(g, side);
    let mut m = BitMatrix::new(cols.len());
    for (i, r) in rows.iter().enumerate() {
        m.push(BitRow::from_bools(r), 0, i);
    }
    rank_gf2(&m)
}

pub fn q_rank_width(g: &Graph, side: &VertexSet) -> usize {
    let (_, _, rows) = cut_rows(g, side);
    let m: Vec<Vec<i64>> = rows
        .iter()
        .map(|r| r.iter().map(|&b| b as i64).collect())
        .collect();
    rank_rational(&m)
}

/// Maximum induced matching of G[side, comp side] by branch and bound;
/// `None` once more than `budget` search nodes were expanded.
pub fn mim_width(g: &Graph, side: &VertexSet, budget: usize) -> Option<usize> {
    let co = side.complement_in(&g.vertex_set());
    let left: Vec<usize> = side.iter().filter(|&v| g.neighbors(v).intersects(&co)).collect();
    let right = co.intersection(&g.open_neighborhood(side));
    let mut search = MimSearch {
        g,
        best: 0,
        nodes: 0,
        budget,
    };
    let l = VertexSet::from_vertices(g.n(), left);
    search.go(&l, &right, 0);
    (search.nodes <= budget).then_some(search.best)
}

struct MimSearch<'a> {
    g: &'a Graph,
    best: usize,
    nodes: usize,
    budget: usize,
}

impl MimSearch<'_> {
    fn go(&mut self, left: &VertexSet, right: &VertexSet, cur: usize) {
        self.nodes += 1;
        if self.nodes > self.budget {
            return;
        }
        // Drop vertices without remaining cross edges.
        let l: VertexSet = VertexSet::from_vertices(
            self.g.n(),
            left.iter().filter(|&v| self.g.neighbors(v).intersects(right)),
        );
        let r: VertexSet = VertexSet::from_vertices(
            self.g.n(),
            right.iter().filter(|&v| self.g.neighbors(v).intersects(&l)),
        );
        self.best = self.best.max(cur);
        if cur + l.len().min(r.len()) <= self.best {
            return;
        }
        // Branch on the left vertex with fewest options.
        let u = l
            .iter()
            .min_by_key(|&v| self.g.neighbors(v).intersection_len(&r))
            .expect("nonempty");
        for w in self.g.neighbors(u).intersection(&r).iter() {
            let mut l2 = l.difference(self.g.neighbors(w));
            l2.remove(u);
            let mut r2 = r.difference(self.g.neighbors(u));
            r2.remove(w);
            self.go(&l2, &r2, cur + 1);
        }
        let mut l3 = l.clone();
        l3.remove(u);
        self.go(&l3, &r, cur);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeWidths {
    pub mw: usize,
    pub rw: usize,
    pub rwq: usize,
    pub mim: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutWidthReport {
    pub per_node: Vec<NodeWidths>,
    pub mw: usize,
    pub rw: usize,
    pub rwq: usize,
    /// `None` if not requested or any node ran out of budget.
    pub mim: Option<usize>,
}

pub fn node_widths(g: &Graph, side: &VertexSet, with_mim: bool, mim_budget: usize) -> NodeWidths {
    NodeWidths {
        mw: module_width(g, side),
        rw: rank_width(g, side),
        rwq: q_rank_width(g, side),
        mim: if with_mim {
            mim_width(g, side, mim_budget)
        } else {
            None
        },
    }
}

pub fn cut_widths(layout: &RootedLayout, g: &Graph, with_mim: bool, mim_budget: usize) -> CutWidthReport {
    let per_node: Vec<NodeWidths> = (0..layout.node_count())
        .map(|x| node_widths(g, layout.set(x), with_mim, mim_budget))
        .collect();
    let mim = if with_mim {
        per_node
            .iter()
            .try_fold(0usize, |acc, w| w.mim.map(|m| acc.max(m)))
    } else {
        None
    };
    CutWidthReport {
        mw: per_node.iter().map(|w| w.mw).max().unwrap_or(0),
        rw: per_node.iter().map(|w| w.rw).max().unwrap_or(0),
        rwq: per_node.iter().map(|w| w.rwq).max().unwrap_or(0),
        mim,
        per_node,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LayoutStrategy {
    /// Caterpillar along the given vertex order.
    Linear(Vec<usize>),
    Random(u64),
    /// Recursive bipartition minimizing the larger nec_d of the two halves.
    GreedyNec { d: u32, seed: u64 },
}

impl LayoutStrategy {
    /// Parses `linear`, `random`, `greedy:d`.
    pub fn parse(s: &str, n: usize, seed: u64) -> Result<Self> {
        match s {
            "linear" => Ok(LayoutStrategy::Linear((0..n).collect())),
            "random" => Ok(LayoutStrategy::Random(seed)),
            _ => {
                if let Some(d) = s.strip_prefix("greedy:") {
                    let d: u32 = d
                        .parse()
                        .map_err(|_| Error::Input(format!("bad depth in '{s}'")))?;
                    if d == 0 {
                        return Err(Error::Input("greedy depth must be at least 1".into()));
                    }
                    Ok(LayoutStrategy::GreedyNec { d, seed })
                } else {
                    Err(Error::Input(format!(
                        "unknown layout strategy '{s}' (linear|random|greedy:d)"
                    )))
                }
            }
        }
    }
}

pub fn generate_layout(g: &Graph, strategy: &LayoutStrategy) -> Result<RootedLayout> {
    let n = g.n();
    if n == 0 {
        return Err(Error::Input("cannot lay out an empty graph".into()));
    }
    let mut b = LayoutBuilder::new();
    let root = match strategy {
        LayoutStrategy::Linear(order) => {
            let mut sorted = order.clone();
            sorted.sort_unstable();
            if sorted != (0..n).collect::<Vec<_>>() {
                return Err(Error::Input("linear order must be a permutation".into()));
            }
            let mut cur = b.leaf(order[0]);
            for &v in &order[1..] {
                let l = b.leaf(v);
                cur = b.join(cur, l);
            }
            cur
        }
        LayoutStrategy::Random(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut verts: Vec<usize> = (0..n).collect();
            verts.shuffle(&mut rng);
            let mut pool: Vec<usize> = verts.into_iter().map(|v| b.leaf(v)).collect();
            while pool.len() > 1 {
                let i = rng.gen_range(0..pool.len());
                let a = pool.swap_remove(i);
                let j = rng.gen_range(0..pool.len());
                let c = pool.swap_remove(j);
                let x = b.join(a, c);
                pool.push(x);
            }
            pool[0]
        }
        LayoutStrategy::GreedyNec { d, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            greedy_split(g, &g.vertex_set(), *d, &mut rng, &mut b)
        }
    };
    b.finish(n, root)
}

fn greedy_split(g: &Graph, s: &VertexSet, d: u32, rng: &mut ChaCha8Rng, b: &mut LayoutBuilder) -> usize {
    let verts = s.to_vec();
    if verts.len() == 1 {
        return b.leaf(verts[0]);
    }
    let samples = (2 * verts.len()).max(4);
    let score = |side: &VertexSet| -> usize {
        NeighborClassIndex::build(g, side, Depth::Capped(d), 1 << 20)
            .map(|i| i.class_count())
            .unwrap_or(usize::MAX)
    };
    let mut best: Option<(usize, VertexSet)> = None;
    for _ in 0..samples {
        let mut part = verts.clone();
        part.shuffle(rng);
        let k = rng.gen_range(1..verts.len());
        let s1 = VertexSet::from_vertices(g.n(), part[..k].iter().copied());
        let s2 = s.difference(&s1);
        let sc = score(&s1).max(score(&s2));
        let better = match &best {
            None => true,
            Some((bs, bset)) => sc < *bs || (sc == *bs && s1 < *bset),
        };
        if better {
            best = Some((sc, s1));
        }
    }
    let (_, s1) = best.expect("at least one sample");
    let s2 = s.difference(&s1);
    let a = greedy_split(g, &s1, d, rng, b);
    let c = greedy_split(g, &s2, d, rng, b);
    b.join(a, c)
}
