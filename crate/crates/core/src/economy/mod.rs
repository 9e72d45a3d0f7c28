//! Abstract economies with constraint maps `A_i ⊆ B_i` and preferences `P_i`.

mod hypotheses;

use std::fmt;
use std::ops::Range;

use rayon::prelude::*;
use serde_json::{json, Value as Json};

use crate::error::{Error, Result};
use crate::maps::PiecewiseMap;
use crate::scalar::{format_point, Scalar};
use crate::sets::{BoxSet, FlaggedBox, Grid};

pub use hypotheses::{check_theorem_4_1, check_theorem_4_2, check_theorem_4_3, theorem_4_1_construction, SelectionChoice};

#[derive(Clone, Debug, PartialEq)]
pub struct Agent<T> {
    pub name: String,
    /// Choice set `X_i`.
    pub choice: FlaggedBox<T>,
    /// Compact target set `D_i`.
    pub d: BoxSet<T>,
    pub a: PiecewiseMap<T>,
    pub b: PiecewiseMap<T>,
    pub p: PiecewiseMap<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AbstractEconomy<T> {
    agents: Vec<Agent<T>>,
    domain: BoxSet<T>,
    blocks: Vec<Range<usize>>,
}

impl<T: Scalar> AbstractEconomy<T> {
    pub fn new(agents: Vec<Agent<T>>) -> Result<Self> {
        if agents.is_empty() {
            return Err(Error::InvalidParameter("an economy needs at least one agent".into()));
        }
        let mut sides = Vec::new();
        let mut blocks = Vec::new();
        for ag in &agents {
            let start = sides.len();
            sides.extend(ag.choice.sides().iter().cloned());
            blocks.push(start..sides.len());
        }
        let domain = BoxSet::from_box(FlaggedBox::new(sides));
        for (ag, block) in agents.iter().zip(&blocks) {
            if ag.d.dim() != block.len() {
                return Err(Error::DimensionMismatch { expected: block.len(), found: ag.d.dim() });
            }
            if ag.d.is_empty() || !ag.d.is_closed() {
                return Err(Error::NotCompact(format!("D of agent {} is {}", ag.name, ag.d)));
            }
            for (label, m) in [("A", &ag.a), ("B", &ag.b), ("P", &ag.p)] {
                if m.domain() != &domain {
                    return Err(Error::DomainMismatch(format!(
                        "{label} of agent {} is defined on {}, the economy on {domain}",
                        ag.name,
                        m.domain()
                    )));
                }
                if m.codomain_dim() != block.len() {
                    return Err(Error::DimensionMismatch { expected: block.len(), found: m.codomain_dim() });
                }
            }
        }
        Ok(AbstractEconomy { agents, domain, blocks })
    }

    pub fn agents(&self) -> &[Agent<T>] {
        &self.agents
    }

    /// `X = ∏ X_i`.
    pub fn domain(&self) -> &BoxSet<T> {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    /// Coordinates of agent `i` within a point of `X`.
    pub fn block(&self, i: usize) -> Range<usize> {
        self.blocks[i].clone()
    }

    /// `D = ∏ D_i`.
    pub fn target(&self) -> BoxSet<T> {
        let mut it = self.agents.iter();
        let first = it.next().expect("nonempty economy").d.clone();
        it.fold(first, |acc, ag| acc.product(&ag.d))
    }

    /// Caches the derived maps used by verification.
    pub fn prepare(&self) -> Result<PreparedEconomy<'_, T>> {
        let agents = self
            .agents
            .iter()
            .map(|ag| Ok(PreparedAgent { b_adherence: ag.b.adherence(), ap: ag.a.intersect_maps(&ag.p)? }))
            .collect::<Result<Vec<_>>>()?;
        Ok(PreparedEconomy { economy: self, agents })
    }

    pub fn verify_equilibrium(&self, x: &[T]) -> Result<EquilibriumCertificate<T>> {
        self.prepare()?.verify(x)
    }

    pub fn search_equilibria(&self, grid: &Grid<T>) -> Result<SearchOutcome<T>> {
        self.prepare()?.search(grid)
    }
}

struct PreparedAgent<T> {
    b_adherence: PiecewiseMap<T>,
    ap: PiecewiseMap<T>,
}

pub struct PreparedEconomy<'a, T> {
    economy: &'a AbstractEconomy<T>,
    agents: Vec<PreparedAgent<T>>,
}

impl<T: Scalar> PreparedEconomy<'_, T> {
    /// Checks `x_i ∈ B̄_i(x)` and `A_i(x) ∩ P_i(x) = ∅` for every agent, exactly.
    pub fn verify(&self, x: &[T]) -> Result<EquilibriumCertificate<T>> {
        let e = self.economy;
        if x.len() != e.dim() {
            return Err(Error::DimensionMismatch { expected: e.dim(), found: x.len() });
        }
        if !e.domain.contains(x) {
            return Err(Error::OutsideDomain(format_point(x)));
        }
        let mut agents = Vec::with_capacity(e.agents.len());
        for (k, (ag, prep)) in e.agents.iter().zip(&self.agents).enumerate() {
            let own = &x[e.block(k)];
            let b_value = prep.b_adherence.evaluate(x)?;
            let ap_value = prep.ap.evaluate(x)?;
            let in_b = b_value.contains(own);
            agents.push(AgentEvidence {
                name: ag.name.clone(),
                own: own.to_vec(),
                in_b_adherence: in_b,
                b_value,
                b_piece: prep.b_adherence.piece_at(x),
                ap_empty: ap_value.is_empty(),
                ap_value,
            });
        }
        let valid = agents.iter().all(|a| a.in_b_adherence && a.ap_empty);
        Ok(EquilibriumCertificate { point: x.to_vec(), agents, valid, tol: T::zero() })
    }

    /// Every grid point of `D = ∏ D_i` with a valid certificate, in lexicographic order.
    pub fn search(&self, grid: &Grid<T>) -> Result<SearchOutcome<T>> {
        let target = self.economy.target();
        grid.require_covers(&target)?;
        let points = grid.points_in(&target);
        let scanned = points.len();
        let found: Vec<Option<EquilibriumCertificate<T>>> = points
            .par_iter()
            .map(|x| {
                if !self.economy.domain.contains(x) {
                    return Ok(None);
                }
                let c = self.verify(x)?;
                Ok(c.valid.then_some(c))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SearchOutcome { certificates: found.into_iter().flatten().collect(), scanned, grid: grid.describe() })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AgentEvidence<T> {
    pub name: String,
    /// The agent's own coordinates of the point.
    pub own: Vec<T>,
    pub in_b_adherence: bool,
    /// `B̄_i(x)`.
    pub b_value: BoxSet<T>,
    /// Piece of the adherence map that produced `b_value`.
    pub b_piece: Option<usize>,
    pub ap_empty: bool,
    /// `A_i(x) ∩ P_i(x)`.
    pub ap_value: BoxSet<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquilibriumCertificate<T> {
    pub point: Vec<T>,
    pub agents: Vec<AgentEvidence<T>>,
    pub valid: bool,
    /// Membership tolerance; zero because both clauses are decided exactly.
    pub tol: T,
}

impl<T: Scalar> EquilibriumCertificate<T> {
    pub fn to_record(&self) -> Json {
        json!({
            "point": self.point.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "valid": self.valid,
            "tol": self.tol.to_json(),
            "agents": self.agents.iter().map(|a| json!({
                "name": a.name,
                "own": a.own.iter().map(Scalar::to_json).collect::<Vec<_>>(),
                "in_b_adherence": a.in_b_adherence,
                "b_adherence": a.b_value.to_string(),
                "b_piece": a.b_piece,
                "ap_empty": a.ap_empty,
                "ap": a.ap_value.to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

impl<T: Scalar> fmt::Display for EquilibriumCertificate<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "point {} {}", format_point(&self.point), if self.valid { "valid" } else { "invalid" })?;
        for a in &self.agents {
            writeln!(
                f,
                "  {:<10} own {:<16} B̄ {:<20} {:<5} A∩P {:<16} {}",
                a.name,
                format_point(&a.own),
                a.b_value.to_string(),
                if a.in_b_adherence { "in" } else { "out" },
                a.ap_value.to_string(),
                if a.ap_empty { "empty" } else { "nonempty" }
            )?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome<T> {
    pub certificates: Vec<EquilibriumCertificate<T>>,
    /// Grid points of `D` that were examined.
    pub scanned: usize,
    pub grid: String,
}

impl<T: Scalar> SearchOutcome<T> {
    pub fn points(&self) -> Vec<Vec<T>> {
        self.certificates.iter().map(|c| c.point.clone()).collect()
    }
}
