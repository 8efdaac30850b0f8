//! Solver entry point, options and result types.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::layout::RootedLayout;
use crate::nec::{cap_from_env, Depth, NeighborClassIndex, DEFAULT_CAP};
use crate::problem::{Constraint, ProblemKind, ProblemSpec};
use crate::{acyclic, connected, cut};

/// Extra filter applied before splitting families in the acyclic solvers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pruning {
    /// Forest check and the twin rule only.
    Always,
    /// Also bound |X²⁺| by twice the induced-matching width, searched with this node budget.
    Mim(usize),
    Rw,
    Rwq,
}

impl Pruning {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "always" => Ok(Pruning::Always),
            "rw" => Ok(Pruning::Rw),
            "rwq" => Ok(Pruning::Rwq),
            _ => {
                let budget = s
                    .strip_prefix("mim:")
                    .and_then(|b| b.parse().ok())
                    .ok_or_else(|| {
                        Error::Input(format!("unknown pruning '{s}' (always|mim:BUDGET|rw|rwq)"))
                    })?;
                Ok(Pruning::Mim(budget))
            }
        }
    }

    pub fn as_string(&self) -> String {
        match self {
            Pruning::Always => "always".into(),
            Pruning::Mim(b) => format!("mim:{b}"),
            Pruning::Rw => "rw".into(),
            Pruning::Rwq => "rwq".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Representatives allowed per cut; `None` uses the solver default
    /// (overridable through `NECSOLVE_CAP`).
    pub cap: Option<usize>,
    pub pruning: Pruning,
    /// Reduce oversized table entries while joining.
    pub streaming: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            cap: None,
            pruning: Pruning::Always,
            streaming: false,
        }
    }
}

impl SolveOptions {
    pub(crate) fn cap_or(&self, default: usize) -> usize {
        self.cap.unwrap_or_else(|| cap_from_env(default))
    }

    pub(crate) fn table_cap(&self) -> usize {
        self.cap_or(DEFAULT_CAP)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub value: i64,
    pub witness: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Optimal(Solution),
    Infeasible,
}

impl Outcome {
    pub fn value(&self) -> Option<i64> {
        match self {
            Outcome::Optimal(s) => Some(s.value),
            Outcome::Infeasible => None,
        }
    }
}

/// Table statistics of one layout node.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NodeStat {
    pub node: usize,
    pub side_size: usize,
    pub classes: usize,
    pub co_classes: usize,
    /// Nonempty table entries after reduction.
    pub entries: usize,
    pub members: usize,
    pub max_family: usize,
    /// Largest number of parts one acyclic reduction split a family into.
    pub max_parts: usize,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub outcome: Outcome,
    pub stats: Vec<NodeStat>,
}

pub(crate) fn build_index(
    g: &Graph,
    side: &VertexSet,
    depth: Depth,
    cap: usize,
    node: usize,
) -> Result<NeighborClassIndex> {
    NeighborClassIndex::build(g, side, depth, cap).map_err(|e| match e {
        Error::ClassExplosion { cap, .. } => Error::ClassExplosion {
            cut: format!("node {node} (|V_x|={})", side.len()),
            cap,
        },
        other => other,
    })
}

/// Checks a reported solution against the problem definition.
pub fn certify(g: &Graph, spec: &ProblemSpec, sol: &Solution) -> Result<()> {
    match spec.objective(g, &sol.witness) {
        Some(v) if v == sol.value => Ok(()),
        Some(v) => Err(Error::Certificate(format!(
            "witness {:?} has value {v}, reported {}",
            sol.witness, sol.value
        ))),
        None => Err(Error::Certificate(format!(
            "witness {:?} is not feasible for {}",
            sol.witness,
            spec.display_name()
        ))),
    }
}

fn check_terminals(g: &Graph, spec: &ProblemSpec) -> Result<Vec<usize>> {
    let terms = spec.terminals.clone().unwrap_or_default();
    if terms.is_empty() {
        return Err(Error::Input("steiner tree needs at least one terminal".into()));
    }
    if let Some(&t) = terms.iter().find(|&&t| t >= g.n()) {
        return Err(Error::Input(format!("terminal {} out of range", t + 1)));
    }
    Ok(terms)
}

/// Solves `spec` on `g` along `layout` and certifies the answer.
pub fn solve(g: &Graph, layout: &RootedLayout, spec: &ProblemSpec, opts: &SolveOptions) -> Result<SolveReport> {
    layout.validate(g)?;
    if spec.terminals.is_some() && spec.kind != ProblemKind::SteinerTree {
        return Err(Error::Input("terminals are only used by the steiner tree problem".into()));
    }
    let report = match spec.kind {
        ProblemKind::SigmaRho => match spec.constraint {
            Constraint::Connected | Constraint::None => connected::solve_connected(g, layout, spec, opts)?,
            Constraint::ConnectedCo => connected::solve_connected_co(g, layout, spec, opts)?,
            Constraint::Ac => acyclic::solve_ac(g, layout, spec, opts)?,
            Constraint::Acyclic => acyclic::solve_acyclic(g, layout, spec, opts)?,
        },
        ProblemKind::SteinerTree => {
            let terms = check_terminals(g, spec)?;
            connected::solve_steiner(g, layout, &terms, opts)?
        }
        ProblemKind::FeedbackVertexSet => acyclic::solve_fvs(g, layout, spec, opts)?,
        ProblemKind::MaxCut => cut::solve_maxcut(g, layout, opts)?,
        ProblemKind::MaximumMinimalCut => cut::solve_max_minimal_cut(g, layout, opts)?,
    };
    if let Outcome::Optimal(sol) = &report.outcome {
        certify(g, spec, sol)?;
    }
    Ok(report)
}
