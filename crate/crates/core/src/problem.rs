use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::nec::NecSignature;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Max,
    Min,
}

impl Direction {
    /// True if `a` is strictly better than `b`.
    #[inline]
    pub fn better(self, a: i64, b: i64) -> bool {
        match self {
            Direction::Max => a > b,
            Direction::Min => a < b,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "max" => Ok(Direction::Max),
            "min" => Ok(Direction::Min),
            _ => Err(Error::Input(format!("direction must be max or min, got '{s}'"))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Max => "max",
            Direction::Min => "min",
        }
    }
}

/// A finite subset of N, or the complement of one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CofiniteSet {
    Finite(Vec<u32>),
    /// Stores the excluded elements.
    Cofinite(Vec<u32>),
}

impl CofiniteSet {
    pub fn finite(mut v: Vec<u32>) -> Self {
        v.sort_unstable();
        v.dedup();
        CofiniteSet::Finite(v)
    }

    pub fn cofinite(mut excluded: Vec<u32>) -> Self {
        excluded.sort_unstable();
        excluded.dedup();
        CofiniteSet::Cofinite(excluded)
    }

    pub fn naturals() -> Self {
        CofiniteSet::Cofinite(Vec::new())
    }

    pub fn positive() -> Self {
        CofiniteSet::Cofinite(vec![0])
    }

    pub fn contains(&self, k: u32) -> bool {
        match self {
            CofiniteSet::Finite(v) => v.binary_search(&k).is_ok(),
            CofiniteSet::Cofinite(v) => v.binary_search(&k).is_err(),
        }
    }

    pub fn is_naturals(&self) -> bool {
        matches!(self, CofiniteSet::Cofinite(v) if v.is_empty())
    }

    /// Smallest d such that membership of any k is decided by min(d, k).
    pub fn depth(&self) -> u32 {
        match self {
            CofiniteSet::Finite(v) => v.last().map_or(0, |m| m + 1),
            CofiniteSet::Cofinite(v) => v.last().map_or(0, |m| m + 1),
        }
    }

    /// Accepts `finite:0,1`, `cofinite:0`, `N`, `N+`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "N" | "naturals" => return Ok(Self::naturals()),
            "N+" | "positive" => return Ok(Self::positive()),
            _ => {}
        }
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Input(format!("expected finite:.. or cofinite:.., got '{s}'")))?;
        let vals = rest
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Input(format!("bad set element '{t}'")))
            })
            .collect::<Result<Vec<u32>>>()?;
        match kind {
            "finite" => Ok(Self::finite(vals)),
            "cofinite" => Ok(Self::cofinite(vals)),
            _ => Err(Error::Input(format!("unknown set kind '{kind}'"))),
        }
    }
}

impl fmt::Display for CofiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u32]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            CofiniteSet::Finite(v) => write!(f, "finite:{}", join(v)),
            CofiniteSet::Cofinite(v) => write!(f, "cofinite:{}", join(v)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Constraint {
    Connected,
    ConnectedCo,
    Ac,
    Acyclic,
    None,
}

impl Constraint {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "connected" => Constraint::Connected,
            "connected-co" => Constraint::ConnectedCo,
            "ac" | "tree" => Constraint::Ac,
            "acyclic" | "forest" => Constraint::Acyclic,
            "none" => Constraint::None,
            _ => return Err(Error::Input(format!("unknown constraint '{s}'"))),
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Constraint::Connected => "connected",
            Constraint::ConnectedCo => "connected-co",
            Constraint::Ac => "ac",
            Constraint::Acyclic => "acyclic",
            Constraint::None => "none",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    SigmaRho,
    SteinerTree,
    FeedbackVertexSet,
    MaxCut,
    MaximumMinimalCut,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemSpec {
    pub name: Option<String>,
    pub kind: ProblemKind,
    pub sigma: CofiniteSet,
    pub rho: CofiniteSet,
    pub direction: Direction,
    pub constraint: Constraint,
    /// 0-indexed terminal vertices; Steiner tree only.
    pub terminals: Option<Vec<usize>>,
}

pub const CATALOG: &[&str] = &[
    "connected-dominating-set",
    "connected-q-regular:Q",
    "connected-perfect-dominating-set",
    "connected-vertex-cover",
    "node-weighted-steiner-tree",
    "maximum-induced-tree",
    "maximum-induced-forest",
    "feedback-vertex-set",
    "longest-induced-path",
    "maximum-induced-linear-forest",
    "max-cut",
    "maximum-minimal-cut",
];

impl ProblemSpec {
    pub fn sigma_rho(
        sigma: CofiniteSet,
        rho: CofiniteSet,
        direction: Direction,
        constraint: Constraint,
    ) -> Self {
        ProblemSpec {
            name: None,
            kind: ProblemKind::SigmaRho,
            sigma,
            rho,
            direction,
            constraint,
            terminals: None,
        }
    }

    pub fn steiner(terminals: Vec<usize>) -> Self {
        let mut s = catalog("node-weighted-steiner-tree").expect("catalog entry");
        s.terminals = Some(terminals);
        s
    }

    /// Depth of the neighbor equivalence used by the dynamic program.
    pub fn dp_depth(&self) -> u32 {
        let base = match self.constraint {
            Constraint::Ac | Constraint::Acyclic => 2,
            _ => 1,
        };
        base.max(self.sigma.depth()).max(self.rho.depth())
    }

    pub fn display_name(&self) -> String {
        match &self.name {
            Some(n) => n.clone(),
            None => format!(
                "sigma={} rho={} {} {}",
                self.sigma,
                self.rho,
                self.constraint.as_str(),
                self.direction.as_str()
            ),
        }
    }

    /// True iff `d` satisfies the (σ,ρ) condition at every vertex of `g`.
    pub fn is_dominating(&self, g: &Graph, d: &VertexSet) -> bool {
        (0..g.n()).all(|v| {
            let c = g.neighbors(v).intersection_len(d) as u32;
            if d.contains(v) {
                self.sigma.contains(c)
            } else {
                self.rho.contains(c)
            }
        })
    }

    /// Capped-count domination test on cut side `side`, with the co-side
    /// part summarized by `signature` (counts of each side vertex into it).
    pub fn dominates_locally(
        &self,
        g: &Graph,
        side: &VertexSet,
        x: &VertexSet,
        signature: &NecSignature,
    ) -> Result<bool> {
        let d = self.dp_depth();
        if signature.cap() != Some(d) {
            return Err(Error::Input(format!(
                "signature depth {:?} does not match problem depth {d}",
                signature.cap()
            )));
        }
        Ok(side.iter().all(|v| {
            let c = (g.neighbors(v).intersection_len(x) as u32 + signature.get(v)).min(d);
            if x.contains(v) {
                self.sigma.contains(c)
            } else {
                self.rho.contains(c)
            }
        }))
    }

    /// Objective value of `x` as reported by the solvers, or `None` if `x` is
    /// not a feasible solution.
    pub fn objective(&self, g: &Graph, x: &VertexSet) -> Option<i64> {
        let all = g.vertex_set();
        let w = g.set_weight_sum(x);
        match self.kind {
            ProblemKind::MaxCut => Some(g.cross_edges(x, &x.complement_in(&all)) as i64),
            ProblemKind::MaximumMinimalCut => g
                .is_minimal_cut(x)
                .then(|| g.cross_edges(x, &x.complement_in(&all)) as i64),
            ProblemKind::FeedbackVertexSet => {
                let rest = x.complement_in(&all);
                (g.is_forest(&rest) && self.is_dominating(g, &rest)).then_some(w)
            }
            ProblemKind::SteinerTree => {
                let terms = self.terminals.as_deref().unwrap_or(&[]);
                (g.is_connected(x) && terms.iter().all(|&t| x.contains(t))).then_some(w)
            }
            ProblemKind::SigmaRho => {
                let ok = match self.constraint {
                    Constraint::Connected => g.is_connected(x) && self.is_dominating(g, x),
                    Constraint::ConnectedCo => {
                        g.is_connected(x) && self.is_dominating(g, &x.complement_in(&all))
                    }
                    Constraint::Ac => g.is_tree(x) && self.is_dominating(g, x),
                    Constraint::Acyclic => g.is_forest(x) && self.is_dominating(g, x),
                    Constraint::None => self.is_dominating(g, x),
                };
                ok.then_some(w)
            }
        }
    }
}

/// Looks up a named problem. `connected-q-regular:Q` takes its degree after the colon.
pub fn catalog(name: &str) -> Result<ProblemSpec> {
    use CofiniteSet as S;
    use Constraint as C;
    use Direction as D;
    let mk = |kind, sigma, rho, dir, con| ProblemSpec {
        name: Some(name.to_string()),
        kind,
        sigma,
        rho,
        direction: dir,
        constraint: con,
        terminals: None,
    };
    let sr = ProblemKind::SigmaRho;
    if let Some(q) = name.strip_prefix("connected-q-regular:") {
        let q: u32 = q
            .parse()
            .map_err(|_| Error::Input(format!("bad degree in '{name}'")))?;
        return Ok(mk(sr, S::finite(vec![q]), S::naturals(), D::Max, C::Connected));
    }
    Ok(match name {
        "connected-dominating-set" => mk(sr, S::naturals(), S::positive(), D::Min, C::Connected),
        "connected-perfect-dominating-set" => {
            mk(sr, S::naturals(), S::finite(vec![1]), D::Min, C::Connected)
        }
        "connected-vertex-cover" => mk(sr, S::finite(vec![0]), S::naturals(), D::Min, C::ConnectedCo),
        "node-weighted-steiner-tree" => mk(
            ProblemKind::SteinerTree,
            S::naturals(),
            S::naturals(),
            D::Min,
            C::Connected,
        ),
        "maximum-induced-tree" => mk(sr, S::naturals(), S::naturals(), D::Max, C::Ac),
        "maximum-induced-forest" => mk(sr, S::naturals(), S::naturals(), D::Max, C::Acyclic),
        "feedback-vertex-set" => mk(
            ProblemKind::FeedbackVertexSet,
            S::naturals(),
            S::naturals(),
            D::Min,
            C::Acyclic,
        ),
        "longest-induced-path" => mk(sr, S::finite(vec![1, 2]), S::naturals(), D::Max, C::Ac),
        "maximum-induced-linear-forest" => {
            mk(sr, S::finite(vec![1, 2]), S::naturals(), D::Max, C::Acyclic)
        }
        "max-cut" => mk(ProblemKind::MaxCut, S::naturals(), S::naturals(), D::Max, C::None),
        "maximum-minimal-cut" => mk(
            ProblemKind::MaximumMinimalCut,
            S::naturals(),
            S::naturals(),
            D::Max,
            C::None,
        ),
        _ => {
            return Err(Error::UnknownProblem {
                name: name.to_string(),
                available: CATALOG.join(", "),
            })
        }
    })
}
