//! Grid search for points fixed by dilated approximations of a product
//! correspondence, intersected along a shrinking ε chain.

use std::fmt;
use std::ops::Range;

use rayon::prelude::*;
use serde_json::{json, Value as Json};

use crate::error::{Error, Result};
use crate::maps::{check_eps_chain, PiecewiseMap};
use crate::scalar::{format_point, Scalar};
use crate::sets::{BoxSet, Grid};

/// Factors `S_i : X ⇉ X_i` with compact targets `D_i`; factor `i` owns the
/// coordinates `blocks[i]` of `X`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductMap<T> {
    factors: Vec<PiecewiseMap<T>>,
    targets: Vec<BoxSet<T>>,
    blocks: Vec<Range<usize>>,
}

impl<T: Scalar> ProductMap<T> {
    pub fn new(factors: Vec<PiecewiseMap<T>>, targets: Vec<BoxSet<T>>) -> Result<Self> {
        let first = factors.first().ok_or_else(|| Error::InvalidParameter("no factors".into()))?;
        if targets.len() != factors.len() {
            return Err(Error::InvalidParameter(format!("{} factors but {} targets", factors.len(), targets.len())));
        }
        let mut blocks = Vec::new();
        let mut next = 0;
        for (f, d) in factors.iter().zip(&targets) {
            if f.domain() != first.domain() {
                return Err(Error::DomainMismatch("factors must share a domain".into()));
            }
            if d.dim() != f.codomain_dim() {
                return Err(Error::DimensionMismatch { expected: f.codomain_dim(), found: d.dim() });
            }
            if d.is_empty() || !d.is_closed() {
                return Err(Error::NotCompact(d.to_string()));
            }
            blocks.push(next..next + f.codomain_dim());
            next += f.codomain_dim();
        }
        if next != first.domain_dim() {
            return Err(Error::DimensionMismatch { expected: first.domain_dim(), found: next });
        }
        Ok(ProductMap { factors, targets, blocks })
    }

    pub fn factors(&self) -> &[PiecewiseMap<T>] {
        &self.factors
    }

    pub fn targets(&self) -> &[BoxSet<T>] {
        &self.targets
    }

    pub fn block(&self, i: usize) -> Range<usize> {
        self.blocks[i].clone()
    }

    /// `D = ∏ D_i`.
    pub fn target(&self) -> BoxSet<T> {
        let mut it = self.targets.iter();
        let first = it.next().expect("at least one factor").clone();
        it.fold(first, |acc, d| acc.product(d))
    }

    fn candidates(&self, grid: &Grid<T>) -> Result<Vec<Vec<T>>> {
        let target = self.target();
        grid.require_covers(&target)?;
        let domain = self.factors[0].domain();
        Ok(grid.points_in(&target).into_iter().filter(|x| domain.contains(x)).collect())
    }

    /// Grid points `x ∈ D` with `x_i ∈ adh((S_i + V) ∩ D_i)(x)` for every `i`.
    pub fn fixed_points_of_approximation(&self, eps: &T, grid: &Grid<T>) -> Result<QvSet<T>> {
        let points = self.candidates(grid)?;
        let approx = self
            .factors
            .iter()
            .zip(&self.targets)
            .map(|(f, d)| Ok(f.t_upper(eps, d)?.adherence()))
            .collect::<Result<Vec<_>>>()?;
        let keep = points
            .par_iter()
            .map(|x| {
                for (k, m) in approx.iter().enumerate() {
                    if !m.evaluate(x)?.contains(&x[self.block(k)]) {
                        return Ok(false);
                    }
                }
                Ok(true)
            })
            .collect::<Result<Vec<bool>>>()?;
        let points = points.into_iter().zip(keep).filter_map(|(x, k)| k.then_some(x)).collect();
        Ok(QvSet { eps: eps.clone(), points })
    }

    /// Whether `x_i ∈ adh(S_i)(x)` for every factor, via the adherence maps.
    pub fn certify(&self, x: &[T]) -> Result<bool> {
        for (k, f) in self.factors.iter().enumerate() {
            if !f.adherence().evaluate(x)?.contains(&x[self.block(k)]) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The same membership decided piece by piece, without the adherence map.
    pub fn recheck(&self, x: &[T]) -> bool {
        self.factors.iter().enumerate().all(|(k, f)| f.adheres(x, &x[self.block(k)]))
    }

    /// Intersects the fixed-point sets over a strictly decreasing ε chain and
    /// certifies the survivors against the adherence of the factors.
    pub fn intersect_qv_chain(&self, chain: &[T], grid: &Grid<T>) -> Result<QvChain<T>> {
        check_eps_chain(chain)?;
        if chain.len() < 2 {
            return Err(Error::InvalidParameter("the eps chain needs at least two entries".into()));
        }
        let sets = chain.iter().map(|e| self.fixed_points_of_approximation(e, grid)).collect::<Result<Vec<_>>>()?;
        let nesting = sets
            .windows(2)
            .map(|w| Nesting {
                larger: w[0].eps.clone(),
                smaller: w[1].eps.clone(),
                holds: w[1].points.iter().all(|p| w[0].points.contains(p)),
            })
            .collect();
        let mut survivors = sets[0].points.clone();
        for s in &sets[1..] {
            survivors.retain(|p| s.points.contains(p));
        }
        let adh: Vec<PiecewiseMap<T>> = self.factors.iter().map(PiecewiseMap::adherence).collect();
        let points = survivors
            .into_iter()
            .map(|x| {
                let mut certified = true;
                for (k, m) in adh.iter().enumerate() {
                    certified &= m.evaluate(&x)?.contains(&x[self.block(k)]);
                }
                let rechecked = self.recheck(&x);
                Ok(ChainPoint { point: x, certified, rechecked })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(QvChain { sets, nesting, points, grid: grid.describe() })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QvSet<T> {
    pub eps: T,
    pub points: Vec<Vec<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Nesting<T> {
    pub larger: T,
    pub smaller: T,
    /// `Q(smaller) ⊆ Q(larger)` on the grid.
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainPoint<T> {
    pub point: Vec<T>,
    pub certified: bool,
    /// Result of the independent piece-by-piece membership test.
    pub rechecked: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QvChain<T> {
    pub sets: Vec<QvSet<T>>,
    pub nesting: Vec<Nesting<T>>,
    pub points: Vec<ChainPoint<T>>,
    pub grid: String,
}

impl<T: Scalar> QvChain<T> {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn nesting_holds(&self) -> bool {
        self.nesting.iter().all(|n| n.holds)
    }

    pub fn certified(&self) -> impl Iterator<Item = &ChainPoint<T>> {
        self.points.iter().filter(|p| p.certified)
    }

    pub fn to_record(&self) -> Json {
        json!({
            "grid": self.grid,
            "cardinalities": self.sets.iter().map(|s| json!({"eps": s.eps.to_json(), "points": s.points.len()})).collect::<Vec<_>>(),
            "nesting": self.nesting.iter().map(|n| json!({
                "larger": n.larger.to_json(), "smaller": n.smaller.to_json(), "holds": n.holds,
            })).collect::<Vec<_>>(),
            "points": self.points.iter().map(|p| json!({
                "point": p.point.iter().map(Scalar::to_json).collect::<Vec<_>>(),
                "certified": p.certified,
                "rechecked": p.rechecked,
            })).collect::<Vec<_>>(),
            "status": if self.is_empty() { "no fixed point at this resolution" } else { "found" },
        })
    }
}

impl<T: Scalar> fmt::Display for QvChain<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "grid {}", self.grid)?;
        for s in &self.sets {
            writeln!(f, "  eps {:<10} {} grid fixed points", s.eps.to_string(), s.points.len())?;
        }
        for n in &self.nesting {
            writeln!(f, "  nesting eps {} inside eps {}: {}", n.smaller, n.larger, if n.holds { "holds" } else { "VIOLATED" })?;
        }
        if self.points.is_empty() {
            return writeln!(f, "no fixed point at this resolution");
        }
        for p in &self.points {
            writeln!(
                f,
                "  {} {}{}",
                format_point(&p.point),
                if p.certified { "certified" } else { "uncertified" },
                if p.rechecked == p.certified { "" } else { " (recheck disagrees)" }
            )?;
        }
        Ok(())
    }
}
