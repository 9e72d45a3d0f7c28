use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{format_point, Scalar};
use crate::sets::{BoxSet, FlaggedBox};

use super::value::Value;

#[derive(Clone, Debug, PartialEq)]
pub struct Piece<T> {
    pub region: FlaggedBox<T>,
    pub value: Value<T>,
}

/// A correspondence `X ⇉ Y` given on a partition of its domain into flagged
/// boxes, each with an affine-endpoint value.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseMap<T> {
    domain: BoxSet<T>,
    codomain_dim: usize,
    pieces: Vec<Piece<T>>,
}

impl<T: Scalar> PiecewiseMap<T> {
    /// Checks that the regions partition the domain and the values are well formed.
    pub fn new(domain: BoxSet<T>, codomain_dim: usize, pieces: Vec<Piece<T>>) -> Result<Self> {
        let map = PiecewiseMap { domain, codomain_dim, pieces };
        map.validate()?;
        Ok(map)
    }

    /// For operations that preserve the partition by construction.
    pub(crate) fn from_parts(domain: BoxSet<T>, codomain_dim: usize, pieces: Vec<Piece<T>>) -> Self {
        PiecewiseMap { domain, codomain_dim, pieces }
    }

    /// `x ↦ set` on `domain`.
    pub fn constant(domain: BoxSet<T>, set: &BoxSet<T>) -> Self {
        let n = domain.dim();
        let pieces = domain
            .boxes()
            .iter()
            .map(|r| Piece { region: r.clone(), value: Value::constant(n, set) })
            .collect();
        PiecewiseMap { domain, codomain_dim: set.dim(), pieces }
    }

    pub fn builder(domain: BoxSet<T>, codomain_dim: usize) -> PiecewiseBuilder<T> {
        PiecewiseBuilder { remaining: domain.clone(), domain, codomain_dim, pieces: Vec::new() }
    }

    pub fn domain(&self) -> &BoxSet<T> {
        &self.domain
    }

    pub fn domain_dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn codomain_dim(&self) -> usize {
        self.codomain_dim
    }

    pub fn pieces(&self) -> &[Piece<T>] {
        &self.pieces
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.domain.dim();
        for (k, p) in self.pieces.iter().enumerate() {
            if p.region.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: p.region.dim() });
            }
            p.value.check_shape(n, self.codomain_dim)?;
            for q in &self.pieces[..k] {
                if p.region.intersect(&q.region).is_some() {
                    return Err(Error::InvalidPartition(format!("regions {} and {} overlap", q.region, p.region)));
                }
            }
            for b in p.value.boxes.iter().filter(|b| b.guards.is_empty()) {
                for corner in p.region.corners() {
                    for ax in b.axes.iter().filter(|ax| ax.is_plain()) {
                        let (lo, hi) = (ax.lower[0].expr.eval(&corner), ax.upper[0].expr.eval(&corner));
                        if lo > hi {
                            return Err(Error::InvalidValue(format!(
                                "lower end {lo} exceeds upper end {hi} at {} in region {}",
                                format_point(&corner),
                                p.region
                            )));
                        }
                    }
                }
            }
        }
        let covered = BoxSet::from_boxes(n, self.pieces.iter().map(|p| p.region.clone()).collect())?;
        if covered != self.domain {
            return Err(Error::InvalidPartition(format!("regions cover {covered}, domain is {}", self.domain)));
        }
        Ok(())
    }

    pub fn piece_at(&self, x: &[T]) -> Option<usize> {
        self.pieces.iter().position(|p| p.region.contains(x))
    }

    pub fn evaluate(&self, x: &[T]) -> Result<BoxSet<T>> {
        if x.len() != self.domain.dim() {
            return Err(Error::DimensionMismatch { expected: self.domain.dim(), found: x.len() });
        }
        let k = self.piece_at(x).ok_or_else(|| Error::OutsideDomain(format_point(x)))?;
        Ok(self.pieces[k].value.evaluate(x, self.codomain_dim))
    }

    /// Largest ℓ1 slope over all endpoint expressions.
    pub fn max_slope(&self) -> T {
        self.pieces.iter().map(|p| p.value.max_slope()).fold(T::zero(), |m, s| if s > m { s } else { m })
    }

    pub fn map_scalars<U: Scalar>(&self, f: impl Fn(&T) -> U) -> PiecewiseMap<U> {
        PiecewiseMap {
            domain: self.domain.map_scalars(&f),
            codomain_dim: self.codomain_dim,
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece { region: p.region.map_scalars(&f), value: p.value.map_scalars(&f) })
                .collect(),
        }
    }
}

impl<T: Scalar> fmt::Display for PiecewiseMap<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "domain {} into R^{}", self.domain, self.codomain_dim)?;
        for p in &self.pieces {
            writeln!(f, "  {} -> {}", p.region, p.value)?;
        }
        Ok(())
    }
}

/// Case-by-case construction where each case takes whatever part of its
/// region earlier cases left uncovered.
pub struct PiecewiseBuilder<T> {
    domain: BoxSet<T>,
    codomain_dim: usize,
    remaining: BoxSet<T>,
    pieces: Vec<Piece<T>>,
}

impl<T: Scalar> PiecewiseBuilder<T> {
    pub fn case(self, region: FlaggedBox<T>, value: Value<T>) -> Result<Self> {
        let set = BoxSet::from_boxes(self.domain.dim(), vec![region])?;
        self.case_set(&set, value)
    }

    pub fn case_set(mut self, region: &BoxSet<T>, value: Value<T>) -> Result<Self> {
        let claimed = self.remaining.intersect(region)?;
        if claimed.is_empty() {
            return Err(Error::InvalidPartition(format!("case {region} is already covered by earlier cases")));
        }
        self.remaining = self.remaining.difference(&claimed)?;
        for b in claimed.boxes() {
            self.pieces.push(Piece { region: b.clone(), value: value.clone() });
        }
        Ok(self)
    }

    pub fn otherwise(self, value: Value<T>) -> Result<PiecewiseMap<T>> {
        let rest = self.remaining.clone();
        if rest.is_empty() {
            return self.build();
        }
        self.case_set(&rest, value)?.build()
    }

    pub fn build(self) -> Result<PiecewiseMap<T>> {
        PiecewiseMap::new(self.domain, self.codomain_dim, self.pieces)
    }
}
