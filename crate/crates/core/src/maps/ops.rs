//! Map-level constructions: dilation-and-clip, graph adherence, pointwise
//! intersection, restriction, gluing and value closure.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linear::{implies, Affine};
use crate::scalar::Scalar;
use crate::sets::{product_indices, sorted_cuts, Atom, BoxSet, FlaggedBox, FlaggedInterval};

use super::piecewise::{Piece, PiecewiseMap};
use super::value::{region_system, AffineBox, AxisBounds, Bound, Value};

impl<T: Scalar> PiecewiseMap<T> {
    fn map_values(&self, f: impl Fn(&AffineBox<T>) -> Vec<AffineBox<T>>) -> Self {
        let pieces = self
            .pieces()
            .iter()
            .map(|p| Piece { region: p.region.clone(), value: p.value.map_boxes(&f) })
            .collect();
        PiecewiseMap::from_parts(self.domain().clone(), self.codomain_dim(), pieces)
    }

    /// Removes value boxes that are empty throughout their region.
    pub fn pruned(&self) -> Self {
        let pieces = self
            .pieces()
            .iter()
            .map(|p| Piece {
                region: p.region.clone(),
                value: Value { boxes: p.value.boxes.iter().filter(|b| b.ever_nonempty(&p.region)).cloned().collect() },
            })
            .collect();
        PiecewiseMap::from_parts(self.domain().clone(), self.codomain_dim(), pieces)
    }

    /// `x ↦ (T(x) + (-eps, eps)^d) ∩ D` for compact `D`.
    pub fn t_upper(&self, eps: &T, d: &BoxSet<T>) -> Result<Self> {
        if *eps <= T::zero() {
            return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
        }
        if d.dim() != self.codomain_dim() {
            return Err(Error::DimensionMismatch { expected: self.codomain_dim(), found: d.dim() });
        }
        if !d.is_closed() {
            return Err(Error::NotCompact(d.to_string()));
        }
        let n = self.domain_dim();
        let out = self.map_values(|b| {
            let guarded = b.with_nonempty_guards();
            d.boxes()
                .iter()
                .map(|db| AffineBox {
                    axes: guarded
                        .axes
                        .iter()
                        .zip(db.sides())
                        .map(|(ax, side)| AxisBounds {
                            lower: ax
                                .lower
                                .iter()
                                .map(|l| Bound::new(l.expr.shift(&-eps.clone()), false))
                                .chain([Bound::constant(n, side.lo().clone(), true)])
                                .collect(),
                            upper: ax
                                .upper
                                .iter()
                                .map(|u| Bound::new(u.expr.shift(eps), false))
                                .chain([Bound::constant(n, side.hi().clone(), true)])
                                .collect(),
                        })
                        .collect(),
                    guards: guarded.guards.clone(),
                })
                .collect()
        });
        Ok(out.pruned())
    }

    /// The map whose graph is the closure of this map's graph, restricted to the domain.
    ///
    /// Each nonempty graph component is a convex polyhedron, so its closure
    /// is obtained by relaxing every strict inequality. The domain is then
    /// split into the cells of the region endpoint arrangement and each cell
    /// collects the components whose closed region contains it.
    pub fn adherence(&self) -> Self {
        let n = self.domain_dim();
        let components: Vec<(FlaggedBox<T>, AffineBox<T>)> = self
            .pieces()
            .iter()
            .flat_map(|p| {
                p.value
                    .boxes
                    .iter()
                    .filter(|b| b.ever_nonempty(&p.region))
                    .map(|b| (p.region.closure(), b.relaxed()))
                    .collect::<Vec<_>>()
            })
            .collect();
        let cuts: Vec<Vec<T>> = (0..n)
            .map(|k| {
                sorted_cuts(
                    self.pieces()
                        .iter()
                        .map(|p| &p.region)
                        .chain(self.domain().boxes())
                        .flat_map(|r| [r.side(k).lo().clone(), r.side(k).hi().clone()])
                        .collect(),
                )
            })
            .collect();
        let atoms: Vec<Vec<Atom<T>>> = cuts.iter().map(|c| Atom::from_cuts(c)).collect();

        let mut order: Vec<Vec<usize>> = Vec::new();
        let mut groups: HashMap<Vec<usize>, Vec<FlaggedBox<T>>> = HashMap::new();
        for dom_box in self.domain().boxes() {
            let inside: Vec<Vec<&Atom<T>>> =
                (0..n).map(|k| atoms[k].iter().filter(|a| a.inside(dom_box.side(k))).collect()).collect();
            let counts: Vec<usize> = inside.iter().map(Vec::len).collect();
            for idx in product_indices(&counts) {
                let cell: Vec<&Atom<T>> = idx.iter().enumerate().map(|(k, &i)| inside[k][i]).collect();
                let active: Vec<usize> = components
                    .iter()
                    .enumerate()
                    .filter(|(_, (region, _))| cell.iter().enumerate().all(|(k, a)| a.inside(region.side(k))))
                    .map(|(c, _)| c)
                    .collect();
                let cell_box = FlaggedBox::new(cell.iter().map(|a| a.to_interval()).collect());
                groups
                    .entry(active.clone())
                    .or_insert_with(|| {
                        order.push(active);
                        Vec::new()
                    })
                    .push(cell_box);
            }
        }

        let mut pieces = Vec::new();
        for key in order {
            let cells = groups.remove(&key).expect("group recorded with its key");
            let value = Value { boxes: key.iter().map(|&c| components[c].1.clone()).collect() };
            for region in BoxSet::canonical(n, cells).boxes() {
                pieces.push(Piece { region: region.clone(), value: value.clone() });
            }
        }
        PiecewiseMap::from_parts(self.domain().clone(), self.codomain_dim(), pieces).pruned()
    }

    /// `x ↦ self(x) ∩ other(x)` on the common refinement.
    pub fn intersect_maps(&self, other: &Self) -> Result<Self> {
        if self.domain() != other.domain() {
            return Err(Error::DomainMismatch(format!("{} versus {}", self.domain(), other.domain())));
        }
        if self.codomain_dim() != other.codomain_dim() {
            return Err(Error::DimensionMismatch { expected: self.codomain_dim(), found: other.codomain_dim() });
        }
        let mut pieces = Vec::new();
        for pa in self.pieces() {
            for pb in other.pieces() {
                if let Some(region) = pa.region.intersect(&pb.region) {
                    let boxes = pa
                        .value
                        .boxes
                        .iter()
                        .flat_map(|a| pb.value.boxes.iter().map(move |b| a.meet(b)))
                        .filter_map(AffineBox::simplified)
                        .collect();
                    pieces.push(Piece { region, value: Value { boxes } });
                }
            }
        }
        Ok(PiecewiseMap::from_parts(self.domain().clone(), self.codomain_dim(), pieces).pruned())
    }

    /// The same map on `domain ∩ set`.
    pub fn restrict(&self, set: &BoxSet<T>) -> Result<Self> {
        let domain = self.domain().intersect(set)?;
        let mut pieces = Vec::new();
        for p in self.pieces() {
            for b in set.boxes() {
                if let Some(region) = p.region.intersect(b) {
                    pieces.push(Piece { region, value: p.value.clone() });
                }
            }
        }
        Ok(PiecewiseMap::from_parts(domain, self.codomain_dim(), pieces))
    }

    /// Union of maps with pairwise disjoint domains.
    pub fn glue(parts: &[Self]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::InvalidParameter("nothing to glue".into()))?;
        let mut domain = BoxSet::empty(first.domain_dim());
        let mut pieces = Vec::new();
        for part in parts {
            if part.codomain_dim() != first.codomain_dim() {
                return Err(Error::DimensionMismatch { expected: first.codomain_dim(), found: part.codomain_dim() });
            }
            if !domain.intersect(part.domain())?.is_empty() {
                return Err(Error::DomainMismatch("glued domains overlap".into()));
            }
            domain = domain.union(part.domain())?;
            pieces.extend(part.pieces().iter().cloned());
        }
        Ok(PiecewiseMap::from_parts(domain, first.codomain_dim(), pieces))
    }

    /// `x ↦ cl self(x)`.
    pub fn closure_values(&self) -> Self {
        self.map_values(|b| {
            let mut g = b.with_nonempty_guards();
            for ax in &mut g.axes {
                for bd in ax.lower.iter_mut().chain(ax.upper.iter_mut()) {
                    bd.closed = true;
                }
            }
            vec![g]
        })
    }

    /// `x ↦ self(x) + C` for a closed set `C`.
    pub fn minkowski_closed(&self, c: &BoxSet<T>) -> Result<Self> {
        if c.dim() != self.codomain_dim() {
            return Err(Error::DimensionMismatch { expected: self.codomain_dim(), found: c.dim() });
        }
        if !c.is_closed() {
            return Err(Error::InvalidParameter(format!("summand {c} must be closed")));
        }
        Ok(self.map_values(|b| {
            let g = b.with_nonempty_guards();
            c.boxes()
                .iter()
                .map(|cb| AffineBox {
                    axes: g
                        .axes
                        .iter()
                        .zip(cb.sides())
                        .map(|(ax, side)| AxisBounds {
                            lower: ax.lower.iter().map(|l| Bound::new(l.expr.shift(side.lo()), l.closed)).collect(),
                            upper: ax.upper.iter().map(|u| Bound::new(u.expr.shift(side.hi()), u.closed)).collect(),
                        })
                        .collect(),
                    guards: g.guards.clone(),
                })
                .collect()
        }))
    }

    /// `x ↦ self(x) ∩ K`.
    pub fn clip(&self, k: &BoxSet<T>) -> Result<Self> {
        if k.dim() != self.codomain_dim() {
            return Err(Error::DimensionMismatch { expected: self.codomain_dim(), found: k.dim() });
        }
        let n = self.domain_dim();
        Ok(self
            .map_values(|b| k.boxes().iter().map(|kb| b.meet(&AffineBox::constant(n, kb))).collect())
            .pruned())
    }

    /// `{x : self(x) ≠ ∅}`, decided piece by piece.
    ///
    /// Errors with `Undetermined` when a piece's value is empty on part of
    /// its region only, since that set need not be a union of boxes.
    pub fn nonempty_set(&self) -> Result<BoxSet<T>> {
        let n = self.domain_dim();
        let mut boxes = Vec::new();
        for p in self.pieces() {
            let region_sys = region_system(&p.region, n);
            let mut always = false;
            let mut ever = false;
            for b in &p.value.boxes {
                if !b.ever_nonempty(&p.region) {
                    continue;
                }
                ever = true;
                let conditions = b.guards.iter().cloned().chain(b.nonempty_guards());
                if conditions.into_iter().all(|c| implies(&region_sys, &c)) {
                    always = true;
                    break;
                }
            }
            if always {
                boxes.push(p.region.clone());
            } else if ever {
                return Err(Error::Undetermined(format!("value {} is empty on part of {}", p.value, p.region)));
            }
        }
        BoxSet::from_boxes(n, boxes)
    }

    /// Whether `(x, y)` lies in the closure of the graph, tested piece by
    /// piece without building the adherence map.
    pub fn adheres(&self, x: &[T], y: &[T]) -> bool {
        self.pieces().iter().any(|p| {
            p.region.closure().contains(x)
                && p.value.boxes.iter().any(|b| {
                    b.ever_nonempty(&p.region) && b.relaxed().evaluate(x).is_some_and(|v| v.contains(y))
                })
        })
    }

    /// `x ↦ [lo(x), hi(x)]` into the line.
    pub fn interval_map(domain: BoxSet<T>, lo: Affine<T>, hi: Affine<T>) -> Result<Self> {
        let value = Value::single(AffineBox::new(vec![AxisBounds::new(Bound::new(lo, true), Bound::new(hi, true))]));
        let pieces = domain.boxes().iter().map(|r| Piece { region: r.clone(), value: value.clone() }).collect();
        PiecewiseMap::new(domain, 1, pieces)
    }
}

/// Closed interval value on one axis.
pub fn interval_value<T: Scalar>(lo: Affine<T>, lo_closed: bool, hi: Affine<T>, hi_closed: bool) -> Value<T> {
    Value::single(AffineBox::new(vec![AxisBounds::new(Bound::new(lo, lo_closed), Bound::new(hi, hi_closed))]))
}

/// Constant value from a flagged interval (one axis).
pub fn constant_value<T: Scalar>(n_vars: usize, iv: &FlaggedInterval<T>) -> Value<T> {
    Value::single(AffineBox::new(vec![AxisBounds::constant(n_vars, iv)]))
}
