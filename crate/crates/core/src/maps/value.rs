use std::fmt;

use crate::error::{Error, Result};
use crate::linear::{feasible, Affine, LinearIneq};
use crate::scalar::Scalar;
use crate::sets::{BoxSet, FlaggedBox, FlaggedInterval};

/// One endpoint expression of an axis: affine in the domain point.
#[derive(Clone, Debug, PartialEq)]
pub struct Bound<T> {
    pub expr: Affine<T>,
    pub closed: bool,
}

impl<T: Scalar> Bound<T> {
    pub fn new(expr: Affine<T>, closed: bool) -> Self {
        Bound { expr, closed }
    }

    pub fn constant(n_vars: usize, c: T, closed: bool) -> Self {
        Bound { expr: Affine::constant(n_vars, c), closed }
    }
}

/// Lower endpoints combine by max, upper endpoints by min.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisBounds<T> {
    pub lower: Vec<Bound<T>>,
    pub upper: Vec<Bound<T>>,
}

impl<T: Scalar> AxisBounds<T> {
    pub fn new(lower: Bound<T>, upper: Bound<T>) -> Self {
        AxisBounds { lower: vec![lower], upper: vec![upper] }
    }

    /// Constant interval on `n_vars` domain variables.
    pub fn constant(n_vars: usize, iv: &FlaggedInterval<T>) -> Self {
        AxisBounds::new(
            Bound::constant(n_vars, iv.lo().clone(), iv.lo_closed()),
            Bound::constant(n_vars, iv.hi().clone(), iv.hi_closed()),
        )
    }

    /// `(lo, lo_closed, hi, hi_closed)` at `x`; a tie is closed only if every tied bound is.
    pub fn endpoints(&self, x: &[T]) -> (T, bool, T, bool) {
        let (lo, lo_closed) = extreme(&self.lower, x, |a, b| a > b);
        let (hi, hi_closed) = extreme(&self.upper, x, |a, b| a < b);
        (lo, lo_closed, hi, hi_closed)
    }

    pub fn is_plain(&self) -> bool {
        self.lower.len() == 1 && self.upper.len() == 1
    }

    /// Pairwise `lower <= upper` conditions, strict where either end is open.
    pub fn nonempty_guards(&self) -> Vec<LinearIneq<T>> {
        let mut out = Vec::new();
        for l in &self.lower {
            for u in &self.upper {
                out.push(LinearIneq::le(&l.expr, &u.expr, !(l.closed && u.closed)));
            }
        }
        out
    }
}

fn extreme<T: Scalar>(bounds: &[Bound<T>], x: &[T], better: impl Fn(&T, &T) -> bool) -> (T, bool) {
    let mut best = bounds[0].expr.eval(x);
    let mut closed = bounds[0].closed;
    for b in &bounds[1..] {
        let v = b.expr.eval(x);
        if better(&v, &best) {
            best = v;
            closed = b.closed;
        } else if v == best {
            closed &= b.closed;
        }
    }
    (best, closed)
}

/// A box whose endpoints move affinely with the domain point, present only
/// where its guards hold.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineBox<T> {
    pub axes: Vec<AxisBounds<T>>,
    pub guards: Vec<LinearIneq<T>>,
}

impl<T: Scalar> AffineBox<T> {
    pub fn new(axes: Vec<AxisBounds<T>>) -> Self {
        AffineBox { axes, guards: Vec::new() }
    }

    pub fn constant(n_vars: usize, b: &FlaggedBox<T>) -> Self {
        AffineBox::new(b.sides().iter().map(|iv| AxisBounds::constant(n_vars, iv)).collect())
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn evaluate(&self, x: &[T]) -> Option<FlaggedBox<T>> {
        if !self.guards.iter().all(|g| g.holds(x)) {
            return None;
        }
        self.axes
            .iter()
            .map(|ax| {
                let (lo, lc, hi, hc) = ax.endpoints(x);
                FlaggedInterval::new(lo, hi, lc, hc)
            })
            .collect::<Option<Vec<_>>>()
            .map(FlaggedBox::new)
    }

    /// Nonemptiness of the value as linear conditions on `x`.
    pub fn nonempty_guards(&self) -> Vec<LinearIneq<T>> {
        self.axes.iter().flat_map(AxisBounds::nonempty_guards).collect()
    }

    /// The same set of values, with emptiness made explicit in the guards so
    /// that endpoint transformations cannot revive an empty value.
    pub fn with_nonempty_guards(&self) -> Self {
        let mut out = self.clone();
        out.guards.extend(self.nonempty_guards());
        out
    }

    /// All endpoint flags closed and guards non-strict.
    pub fn relaxed(&self) -> Self {
        AffineBox {
            axes: self
                .axes
                .iter()
                .map(|ax| AxisBounds {
                    lower: ax.lower.iter().map(|b| Bound::new(b.expr.clone(), true)).collect(),
                    upper: ax.upper.iter().map(|b| Bound::new(b.expr.clone(), true)).collect(),
                })
                .collect(),
            guards: self.guards.iter().map(LinearIneq::relaxed).collect(),
        }
    }

    /// Conjunction of both boxes' constraints.
    pub fn meet(&self, other: &Self) -> Self {
        AffineBox {
            axes: self
                .axes
                .iter()
                .zip(&other.axes)
                .map(|(a, b)| AxisBounds {
                    lower: a.lower.iter().chain(&b.lower).cloned().collect(),
                    upper: a.upper.iter().chain(&b.upper).cloned().collect(),
                })
                .collect(),
            guards: self.guards.iter().chain(&other.guards).cloned().collect(),
        }
    }

    /// Constraints of the graph `{(x, y) : x in region, y in value(x)}` over
    /// the joint variables `(x, y)`.
    pub fn graph_system(&self, region: &FlaggedBox<T>) -> Vec<LinearIneq<T>> {
        let n = region.dim();
        let total = n + self.dim();
        let mut sys = region_system(region, total);
        sys.extend(self.guards.iter().map(|g| g.embed(total, 0)));
        for (j, ax) in self.axes.iter().enumerate() {
            let y = Affine::var(total, n + j, T::one(), T::zero());
            for l in &ax.lower {
                sys.push(LinearIneq::le(&l.expr.embed(total, 0), &y, !l.closed));
            }
            for u in &ax.upper {
                sys.push(LinearIneq::le(&y, &u.expr.embed(total, 0), !u.closed));
            }
        }
        sys
    }

    /// Whether the value is nonempty at some point of `region`.
    pub fn ever_nonempty(&self, region: &FlaggedBox<T>) -> bool {
        feasible(&self.graph_system(region))
    }

    pub fn max_slope(&self) -> T {
        let mut m = T::zero();
        for ax in &self.axes {
            for b in ax.lower.iter().chain(&ax.upper) {
                let s = b.expr.slope_l1();
                if s > m {
                    m = s;
                }
            }
        }
        m
    }

    /// Drops guards that always hold; `None` if some guard never holds.
    pub fn simplified(mut self) -> Option<Self> {
        let mut keep = Vec::with_capacity(self.guards.len());
        for g in self.guards {
            match g.constant_truth() {
                Some(true) => {}
                Some(false) => return None,
                None => {
                    if !keep.contains(&g) {
                        keep.push(g);
                    }
                }
            }
        }
        self.guards = keep;
        for ax in &mut self.axes {
            dedup(&mut ax.lower);
            dedup(&mut ax.upper);
        }
        Some(self)
    }

    pub(crate) fn map_scalars<U: Scalar>(&self, f: &impl Fn(&T) -> U) -> AffineBox<U> {
        let mb = |b: &Bound<T>| Bound { expr: b.expr.map_scalars(f), closed: b.closed };
        AffineBox {
            axes: self
                .axes
                .iter()
                .map(|ax| AxisBounds { lower: ax.lower.iter().map(mb).collect(), upper: ax.upper.iter().map(mb).collect() })
                .collect(),
            guards: self.guards.iter().map(|g| g.map_scalars(f)).collect(),
        }
    }
}

fn dedup<T: PartialEq>(v: &mut Vec<T>) {
    let mut out: Vec<T> = Vec::with_capacity(v.len());
    for b in v.drain(..) {
        if !out.contains(&b) {
            out.push(b);
        }
    }
    *v = out;
}

/// Box membership `x ∈ region` as inequalities over `total` variables
/// (the region occupies the first `region.dim()`).
pub(crate) fn region_system<T: Scalar>(region: &FlaggedBox<T>, total: usize) -> Vec<LinearIneq<T>> {
    let mut sys = Vec::with_capacity(2 * region.dim());
    for (k, iv) in region.sides().iter().enumerate() {
        let x = Affine::var(total, k, T::one(), T::zero());
        sys.push(LinearIneq::le(&Affine::constant(total, iv.lo().clone()), &x, !iv.lo_closed()));
        sys.push(LinearIneq::le(&x, &Affine::constant(total, iv.hi().clone()), !iv.hi_closed()));
    }
    sys
}

impl<T: Scalar> fmt::Display for AffineBox<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, ax) in self.axes.iter().enumerate() {
            if k > 0 {
                f.write_str(" × ")?;
            }
            let open = if ax.lower.iter().all(|b| b.closed) { '[' } else { '(' };
            let close = if ax.upper.iter().all(|b| b.closed) { ']' } else { ')' };
            let join = |bs: &[Bound<T>], name: &str| {
                let parts: Vec<String> = bs.iter().map(|b| b.expr.to_string()).collect();
                if parts.len() == 1 {
                    parts[0].clone()
                } else {
                    format!("{name}({})", parts.join(", "))
                }
            };
            write!(f, "{open}{}, {}{close}", join(&ax.lower, "max"), join(&ax.upper, "min"))?;
        }
        if !self.guards.is_empty() {
            let parts: Vec<String> = self.guards.iter().map(|g| g.to_string()).collect();
            write!(f, " if {}", parts.join(" and "))?;
        }
        Ok(())
    }
}

/// A union of affine boxes; the empty list is the empty value.
#[derive(Clone, Debug, PartialEq)]
pub struct Value<T> {
    pub boxes: Vec<AffineBox<T>>,
}

impl<T: Scalar> Value<T> {
    pub fn empty() -> Self {
        Value { boxes: Vec::new() }
    }

    pub fn single(b: AffineBox<T>) -> Self {
        Value { boxes: vec![b] }
    }

    pub fn constant(n_vars: usize, set: &BoxSet<T>) -> Self {
        Value { boxes: set.boxes().iter().map(|b| AffineBox::constant(n_vars, b)).collect() }
    }

    pub fn is_empty_value(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn evaluate(&self, x: &[T], codomain_dim: usize) -> BoxSet<T> {
        let boxes = self.boxes.iter().filter_map(|b| b.evaluate(x)).collect();
        BoxSet::canonical(codomain_dim, boxes)
    }

    pub fn map_boxes(&self, f: impl Fn(&AffineBox<T>) -> Vec<AffineBox<T>>) -> Self {
        Value { boxes: self.boxes.iter().flat_map(f).filter_map(AffineBox::simplified).collect() }
    }

    pub fn max_slope(&self) -> T {
        self.boxes.iter().map(AffineBox::max_slope).fold(T::zero(), |m, s| if s > m { s } else { m })
    }

    pub(crate) fn check_shape(&self, n_vars: usize, codomain_dim: usize) -> Result<()> {
        for b in &self.boxes {
            if b.dim() != codomain_dim {
                return Err(Error::InvalidValue(format!("box of dimension {} in a map into dimension {codomain_dim}", b.dim())));
            }
            for ax in &b.axes {
                if ax.lower.is_empty() || ax.upper.is_empty() {
                    return Err(Error::InvalidValue("every axis needs a lower and an upper bound".into()));
                }
                for bd in ax.lower.iter().chain(&ax.upper) {
                    if bd.expr.n_vars() != n_vars {
                        return Err(Error::DimensionMismatch { expected: n_vars + 1, found: bd.expr.coeffs().len() });
                    }
                }
            }
            if let Some(g) = b.guards.iter().find(|g| g.expr.n_vars() != n_vars) {
                return Err(Error::DimensionMismatch { expected: n_vars + 1, found: g.expr.coeffs().len() });
            }
        }
        Ok(())
    }

    pub(crate) fn map_scalars<U: Scalar>(&self, f: &impl Fn(&T) -> U) -> Value<U> {
        Value { boxes: self.boxes.iter().map(|b| b.map_scalars(f)).collect() }
    }
}

impl<T: Scalar> fmt::Display for Value<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.boxes.is_empty() {
            return f.write_str("∅");
        }
        for (k, b) in self.boxes.iter().enumerate() {
            if k > 0 {
                f.write_str(" ∪ ")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}
