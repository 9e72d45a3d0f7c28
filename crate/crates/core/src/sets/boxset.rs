use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{max_of, Scalar};

use super::interval::{sorted_cuts, Atom, FlaggedInterval};
use super::product_indices;

/// Cartesian product of flagged intervals.
#[derive(Clone, Debug, PartialEq)]
pub struct FlaggedBox<T>(Vec<FlaggedInterval<T>>);

impl<T: Scalar> FlaggedBox<T> {
    pub fn new(sides: Vec<FlaggedInterval<T>>) -> Self {
        FlaggedBox(sides)
    }

    pub fn point(p: &[T]) -> Self {
        FlaggedBox(p.iter().cloned().map(FlaggedInterval::point).collect())
    }

    /// `[lo, hi]^dim`.
    pub fn cube(dim: usize, side: FlaggedInterval<T>) -> Self {
        FlaggedBox(vec![side; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn sides(&self) -> &[FlaggedInterval<T>] {
        &self.0
    }

    pub fn side(&self, k: usize) -> &FlaggedInterval<T> {
        &self.0[k]
    }

    pub fn contains(&self, p: &[T]) -> bool {
        p.len() == self.0.len() && self.0.iter().zip(p).all(|(iv, v)| iv.contains(v))
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a.intersect(b)).collect::<Option<Vec<_>>>().map(FlaggedBox)
    }

    pub fn closure(&self) -> Self {
        FlaggedBox(self.0.iter().map(FlaggedInterval::closure).collect())
    }

    pub fn dilate(&self, eps: &T) -> Self {
        FlaggedBox(self.0.iter().map(|iv| iv.dilate(eps)).collect())
    }

    pub fn is_closed(&self) -> bool {
        self.0.iter().all(FlaggedInterval::is_closed)
    }

    pub fn representative(&self) -> Vec<T> {
        self.0.iter().map(FlaggedInterval::representative).collect()
    }

    /// Product of side lengths.
    pub fn volume(&self) -> T {
        self.0.iter().fold(T::one(), |acc, iv| acc * iv.length())
    }

    /// Corners of the closure, in lexicographic order of low/high choices.
    pub fn corners(&self) -> Vec<Vec<T>> {
        let counts: Vec<usize> = self.0.iter().map(|iv| if iv.is_singleton() { 1 } else { 2 }).collect();
        product_indices(&counts)
            .map(|choice| {
                choice
                    .iter()
                    .zip(&self.0)
                    .map(|(&c, iv)| if c == 0 { iv.lo().clone() } else { iv.hi().clone() })
                    .collect()
            })
            .collect()
    }

    /// Sup-norm distance from `p` to the closure of the box.
    pub fn distance_to(&self, p: &[T]) -> T {
        self.0.iter().zip(p).fold(T::zero(), |acc, (iv, v)| max_of(acc, iv.distance_to(v)))
    }

    pub(crate) fn map_scalars<U: Scalar>(&self, f: &impl Fn(&T) -> U) -> FlaggedBox<U> {
        FlaggedBox(self.0.iter().map(|iv| iv.map_scalars(f)).collect())
    }
}

impl<T: Scalar> fmt::Display for FlaggedBox<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, iv) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" × ")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}

/// A finite union of flagged boxes of a common dimension, always held in
/// canonical form so that `==` decides set equality.
///
/// The canonical form sweeps dimension 0 into maximal runs of atoms (cut
/// points and open gaps) with equal cross-sections, recursing on the
/// remaining dimensions. Its boxes are pairwise disjoint.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxSet<T> {
    dim: usize,
    boxes: Vec<FlaggedBox<T>>,
}

impl<T: Scalar> BoxSet<T> {
    pub fn empty(dim: usize) -> Self {
        BoxSet { dim, boxes: Vec::new() }
    }

    pub fn from_box(b: FlaggedBox<T>) -> Self {
        BoxSet { dim: b.dim(), boxes: vec![b] }
    }

    pub fn from_boxes(dim: usize, boxes: Vec<FlaggedBox<T>>) -> Result<Self> {
        if let Some(bad) = boxes.iter().find(|b| b.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad.dim() });
        }
        Ok(Self::canonical(dim, boxes))
    }

    pub fn point(p: &[T]) -> Self {
        Self::from_box(FlaggedBox::point(p))
    }

    /// One-dimensional set from intervals.
    pub fn from_intervals(intervals: Vec<FlaggedInterval<T>>) -> Self {
        Self::canonical(1, intervals.into_iter().map(|iv| FlaggedBox(vec![iv])).collect())
    }

    /// Parses a union written as `"[0, 1) | {2}"`; boxes use `x` between sides,
    /// e.g. `"[0, 1] x (0, 2)"`.
    pub fn parse(dim: usize, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "∅" || text == "empty" {
            return Ok(Self::empty(dim));
        }
        let boxes = text
            .split(['|', '∪'])
            .map(|b| {
                b.split(['x', '×'])
                    .map(|s| s.parse::<FlaggedInterval<T>>())
                    .collect::<Result<Vec<_>>>()
                    .map(FlaggedBox)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_boxes(dim, boxes)
    }

    pub(crate) fn canonical(dim: usize, boxes: Vec<FlaggedBox<T>>) -> Self {
        let slices: Vec<&[FlaggedInterval<T>]> = boxes.iter().map(|b| b.0.as_slice()).collect();
        let boxes = canonicalize(&slices).into_iter().map(FlaggedBox).collect();
        BoxSet { dim, boxes }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn boxes(&self) -> &[FlaggedBox<T>] {
        &self.boxes
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    /// Convex sets representable here are single boxes (or empty).
    pub fn is_convex(&self) -> bool {
        self.boxes.len() <= 1
    }

    /// Topological closedness: canonical atoms of a closed union may be half-open.
    pub fn is_closed(&self) -> bool {
        self.boxes.iter().all(FlaggedBox::is_closed) || *self == self.closure()
    }

    pub fn contains(&self, p: &[T]) -> bool {
        self.boxes.iter().any(|b| b.contains(p))
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let boxes = self.boxes.iter().chain(&other.boxes).cloned().collect();
        Ok(Self::canonical(self.dim, boxes))
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let boxes = self
            .boxes
            .iter()
            .flat_map(|a| other.boxes.iter().filter_map(move |b| a.intersect(b)))
            .collect();
        Ok(Self::canonical(self.dim, boxes))
    }

    /// `self \ other`, computed on the common atom decomposition.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        if self.is_empty() || other.is_empty() {
            return Ok(self.clone());
        }
        let cuts = self.cuts_with(other);
        let mut cells = Vec::new();
        for b in &self.boxes {
            let atoms: Vec<Vec<Atom<T>>> = (0..self.dim)
                .map(|k| Atom::from_cuts(&cuts[k]).into_iter().filter(|a| a.inside(b.side(k))).collect())
                .collect();
            let counts: Vec<usize> = atoms.iter().map(Vec::len).collect();
            for idx in product_indices(&counts) {
                let cell: Vec<&Atom<T>> = idx.iter().enumerate().map(|(k, &i)| &atoms[k][i]).collect();
                let covered = other.boxes.iter().any(|ob| cell.iter().enumerate().all(|(k, a)| a.inside(ob.side(k))));
                if !covered {
                    cells.push(FlaggedBox(cell.iter().map(|a| a.to_interval()).collect()));
                }
            }
        }
        Ok(Self::canonical(self.dim, cells))
    }

    pub(crate) fn cuts_with(&self, other: &Self) -> Vec<Vec<T>> {
        (0..self.dim)
            .map(|k| {
                sorted_cuts(
                    self.boxes
                        .iter()
                        .chain(&other.boxes)
                        .flat_map(|b| [b.side(k).lo().clone(), b.side(k).hi().clone()])
                        .collect(),
                )
            })
            .collect()
    }

    pub fn closure(&self) -> Self {
        Self::canonical(self.dim, self.boxes.iter().map(FlaggedBox::closure).collect())
    }

    /// `self + (-eps, eps)^dim`. The empty set dilates to itself.
    pub fn dilate(&self, eps: &T) -> Result<Self> {
        if *eps <= T::zero() {
            return Err(Error::InvalidParameter(format!("dilation radius must be positive, got {eps}")));
        }
        Ok(Self::canonical(self.dim, self.boxes.iter().map(|b| b.dilate(eps)).collect()))
    }

    /// `cl(self) + [-r, r]^dim` for `r >= 0`.
    pub(crate) fn expand_closed(&self, r: &T) -> Self {
        let boxes = self
            .boxes
            .iter()
            .map(|b| {
                FlaggedBox(
                    b.0.iter()
                        .map(|iv| {
                            FlaggedInterval::closed(iv.lo().clone() - r.clone(), iv.hi().clone() + r.clone())
                                .expect("expansion of a nonempty interval is nonempty")
                        })
                        .collect(),
                )
            })
            .collect();
        Self::canonical(self.dim, boxes)
    }

    /// Exact flagged inclusion `self ⊆ other`.
    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        self.check_dim(other)?;
        if self.is_empty() {
            return Ok(true);
        }
        Ok(other.union(self)? == *other)
    }

    /// `tol = 0`: exact flagged inclusion. `tol > 0`: `self ⊆ cl(dilate(other, tol))`.
    pub fn subset_within(&self, other: &Self, tol: &T) -> Result<bool> {
        if *tol < T::zero() {
            return Err(Error::InvalidParameter(format!("tolerance must be nonnegative, got {tol}")));
        }
        if tol.is_zero() {
            self.is_subset(other)
        } else {
            self.check_dim(other)?;
            self.is_subset(&other.expand_closed(tol))
        }
    }

    /// One-sided excess `sup_{a ∈ self} d(a, other)` in the sup-norm.
    ///
    /// The minimal covering radius is attained at one of finitely many
    /// candidates (endpoint differences and half-gaps of `other`), which are
    /// searched by bisection since coverage is monotone in the radius.
    pub fn hausdorff_upper(&self, other: &Self) -> Result<T> {
        self.check_dim(other)?;
        if self.is_empty() {
            return Ok(T::zero());
        }
        if other.is_empty() {
            return Err(Error::UndefinedExcess);
        }
        let target = self.closure();
        let mut candidates = vec![T::zero()];
        for k in 0..self.dim {
            let ours: Vec<&T> = self.boxes.iter().flat_map(|b| [b.side(k).lo(), b.side(k).hi()]).collect();
            let theirs: Vec<&T> = other.boxes.iter().flat_map(|b| [b.side(k).lo(), b.side(k).hi()]).collect();
            for a in &ours {
                for b in &theirs {
                    candidates.push(((*a).clone() - (*b).clone()).abs());
                }
            }
            for (i, b) in theirs.iter().enumerate() {
                for c in &theirs[i + 1..] {
                    candidates.push(((*b).clone() - (*c).clone()).abs() / T::two());
                }
            }
        }
        let candidates = sorted_cuts(candidates);
        let covers = |r: &T| target.is_subset(&other.expand_closed(r)).expect("same dimension");
        let (mut lo, mut hi) = (0usize, candidates.len() - 1);
        if covers(&candidates[0]) {
            return Ok(candidates[0].clone());
        }
        // invariant: candidates[lo] fails, candidates[hi] covers
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if covers(&candidates[mid]) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(candidates[hi].clone())
    }

    /// Bounding box of the closure, `None` when empty.
    pub fn bounds(&self) -> Option<(Vec<T>, Vec<T>)> {
        let first = self.boxes.first()?;
        let mut lo: Vec<T> = first.0.iter().map(|iv| iv.lo().clone()).collect();
        let mut hi: Vec<T> = first.0.iter().map(|iv| iv.hi().clone()).collect();
        for b in &self.boxes[1..] {
            for (k, iv) in b.0.iter().enumerate() {
                if *iv.lo() < lo[k] {
                    lo[k] = iv.lo().clone();
                }
                if *iv.hi() > hi[k] {
                    hi[k] = iv.hi().clone();
                }
            }
        }
        Some((lo, hi))
    }

    /// Box of largest volume among the canonical boxes (first on ties).
    pub fn largest_box(&self) -> Option<&FlaggedBox<T>> {
        let mut best: Option<(&FlaggedBox<T>, T)> = None;
        for b in &self.boxes {
            let v = b.volume();
            match &best {
                Some((_, bv)) if v <= *bv => {}
                _ => best = Some((b, v)),
            }
        }
        best.map(|(b, _)| b)
    }

    /// Sup-norm distance from a point to the closure of the set.
    pub fn distance_to(&self, p: &[T]) -> Option<T> {
        self.boxes.iter().map(|b| b.distance_to(p)).reduce(|a, b| if b < a { b } else { a })
    }

    /// Cartesian product `self × other`.
    pub fn product(&self, other: &Self) -> Self {
        let boxes = self
            .boxes
            .iter()
            .flat_map(|a| other.boxes.iter().map(move |b| FlaggedBox(a.0.iter().chain(&b.0).cloned().collect())))
            .collect();
        Self::canonical(self.dim + other.dim, boxes)
    }

    /// Projection onto the listed coordinates.
    pub fn project(&self, coords: &[usize]) -> Self {
        let boxes = self.boxes.iter().map(|b| FlaggedBox(coords.iter().map(|&k| b.0[k].clone()).collect())).collect();
        Self::canonical(coords.len(), boxes)
    }

    pub fn map_scalars<U: Scalar>(&self, f: impl Fn(&T) -> U) -> BoxSet<U> {
        BoxSet::canonical(self.dim, self.boxes.iter().map(|b| b.map_scalars(&f)).collect())
    }
}

impl<T: Scalar> fmt::Display for BoxSet<T> {
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

fn canonicalize<T: Scalar>(boxes: &[&[FlaggedInterval<T>]]) -> Vec<Vec<FlaggedInterval<T>>> {
    if boxes.is_empty() {
        return Vec::new();
    }
    if boxes[0].is_empty() {
        return vec![Vec::new()];
    }
    let cuts = sorted_cuts(boxes.iter().flat_map(|b| [b[0].lo().clone(), b[0].hi().clone()]).collect());
    let atoms = Atom::from_cuts(&cuts);
    let mut out = Vec::new();
    let mut run: Option<(usize, usize, Vec<Vec<FlaggedInterval<T>>>)> = None;
    let emit = |out: &mut Vec<Vec<FlaggedInterval<T>>>, (first, last, cross): (usize, usize, Vec<Vec<FlaggedInterval<T>>>)| {
        let span = Atom::span(&atoms[first], &atoms[last]);
        for rest in cross {
            let mut b = Vec::with_capacity(rest.len() + 1);
            b.push(span.clone());
            b.extend(rest);
            out.push(b);
        }
    };
    for (k, atom) in atoms.iter().enumerate() {
        let members: Vec<&[FlaggedInterval<T>]> =
            boxes.iter().filter(|b| atom.inside(&b[0])).map(|b| &b[1..]).collect();
        let cross = canonicalize(&members);
        if let Some((_, last, current)) = run.as_mut() {
            if !cross.is_empty() && *current == cross {
                *last = k;
                continue;
            }
        }
        if let Some(done) = run.take() {
            emit(&mut out, done);
        }
        if !cross.is_empty() {
            run = Some((k, k, cross));
        }
    }
    if let Some(done) = run.take() {
        emit(&mut out, done);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn s1(text: &str) -> BoxSet<f64> {
        BoxSet::parse(1, text).unwrap()
    }

    fn s2(text: &str) -> BoxSet<f64> {
        BoxSet::parse(2, text).unwrap()
    }

    #[test]
    fn adjacent_pieces_merge() {
        assert_eq!(s1("(0, 1) | [1, 2)"), s1("(0, 2)"));
        assert_eq!(s1("(0, 1) | (1, 2)").boxes().len(), 2);
        assert_eq!(s1("[0, 1] | {1} | [0.5, 3)"), s1("[0, 3)"));
        assert_eq!(s2("[0, 1] x [0, 1] | (1, 2] x [0, 1]"), s2("[0, 2] x [0, 1]"));
    }

    #[test]
    fn closure_of_split_interval() {
        assert_eq!(s1("(0, 1) | [1, 2)").closure(), s1("[0, 2]"));
        // oracle: closure fills the single missing endpoint between the pieces
        assert_eq!(s1("(0, 1) | (1, 2)").closure(), s1("[0, 2]"));
        assert_eq!(s1("{1}").closure(), s1("{1}"));
    }

    #[test]
    fn dilation_examples() {
        assert_eq!(s1("[1.5, 2]").dilate(&0.25).unwrap(), s1("(1.25, 2.25)"));
        assert_eq!(s1("(0, 1)").dilate(&0.5).unwrap(), s1("(-0.5, 1.5)"));
        assert!(BoxSet::<f64>::empty(1).dilate(&1.0).unwrap().is_empty());
        assert!(s1("[0, 1]").dilate(&0.0).is_err());
    }

    #[test]
    fn intersection_examples() {
        let eps = 0.3;
        assert_eq!(s1("(0, 1)").dilate(&eps).unwrap().intersect(&s1("{1}")).unwrap(), s1("{1}"));
        let q = |t: &str| BoxSet::<Rational64>::parse(1, t).unwrap();
        assert_eq!(q("(5/4, 9/4)").intersect(&q("[0, 2]")).unwrap(), q("(5/4, 2]"));
        assert!(s1("[0, 1]").intersect(&s2("[0, 1] x [0, 1]")).is_err());
    }

    #[test]
    fn difference_and_complement() {
        let cube = s2("[0, 2] x [0, 2]");
        let hole = s2("(0, 1) x (0, 1)");
        let rest = cube.difference(&hole).unwrap();
        assert!(rest.contains(&[0.0, 0.5]));
        assert!(rest.contains(&[1.0, 0.5]));
        assert!(!rest.contains(&[0.5, 0.5]));
        assert_eq!(rest.union(&hole).unwrap(), cube);
        assert!(rest.intersect(&hole).unwrap().is_empty());
    }

    #[test]
    fn subset_and_excess() {
        assert!(s1("[1.5, 2]").subset_within(&s1("[0, 2]"), &0.0).unwrap());
        assert!(!s1("[0, 1]").subset_within(&s1("(0, 1]"), &0.0).unwrap());
        assert!(s1("[0, 1]").subset_within(&s1("(0, 1]"), &0.01).unwrap());
        assert_eq!(s1("[3, 4]").hausdorff_upper(&s1("[0, 2]")).unwrap(), 2.0);
        assert_eq!(s1("[0, 2]").hausdorff_upper(&s1("(0, 2)")).unwrap(), 0.0);
        assert!(s1("[0, 1]").hausdorff_upper(&BoxSet::empty(1)).is_err());
        assert_eq!(BoxSet::empty(1).hausdorff_upper(&s1("[0, 1]")).unwrap(), 0.0);
        // a gap of width 1 between two target pieces: midpoint is 1/2 away
        assert_eq!(s1("[0, 3]").hausdorff_upper(&s1("[0, 1] | [2, 3]")).unwrap(), 0.5);
        assert_eq!(s2("[0, 1] x [0, 4]").hausdorff_upper(&s2("[0, 1] x [0, 1]")).unwrap(), 3.0);
    }

    #[test]
    fn excess_matches_dense_sampling() {
        // brute-force oracle over a fine sample of [3, 4]
        let a = s1("[3, 4]");
        let b = s1("[0, 2]");
        let mut worst: f64 = 0.0;
        for k in 0..=1000 {
            let x = 3.0 + k as f64 / 1000.0;
            worst = worst.max(b.distance_to(&[x]).unwrap());
        }
        assert_eq!(a.hausdorff_upper(&b).unwrap(), worst);
    }
}
