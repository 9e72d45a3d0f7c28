use crate::error::{Error, Result};
use crate::scalar::{format_point, Scalar};

use super::{product_indices, BoxSet};

/// Regular lattice `lo + k·step` inside the box `[lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid<T> {
    lo: Vec<T>,
    hi: Vec<T>,
    step: T,
    counts: Vec<usize>,
}

impl<T: Scalar> Grid<T> {
    pub fn new(lo: Vec<T>, hi: Vec<T>, step: T) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::InvalidGrid(format!("bounds of dimension {} and {}", lo.len(), hi.len())));
        }
        if step <= T::zero() || !step.is_finite_value() {
            return Err(Error::InvalidGrid(format!("step must be positive, got {step}")));
        }
        let counts = lo
            .iter()
            .zip(&hi)
            .map(|(l, h)| {
                if h < l {
                    return Err(Error::InvalidGrid(format!("empty range [{l}, {h}]")));
                }
                Ok(steps_within(&(h.clone() - l.clone()), &step) + 1)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Grid { lo, hi, step, counts })
    }

    /// The grid spanning the bounding box of `set`.
    pub fn covering(set: &BoxSet<T>, step: T) -> Result<Self> {
        let (lo, hi) = set.bounds().ok_or_else(|| Error::InvalidGrid("cannot cover the empty set".into()))?;
        Self::new(lo, hi, step)
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[T] {
        &self.lo
    }

    pub fn hi(&self) -> &[T] {
        &self.hi
    }

    pub fn step(&self) -> &T {
        &self.step
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Position of a multi-index in lexicographic order.
    pub fn flat(&self, index: &[usize]) -> usize {
        index.iter().zip(&self.counts).fold(0, |acc, (&k, &n)| acc * n + k)
    }

    pub fn point(&self, index: &[usize]) -> Vec<T> {
        index
            .iter()
            .zip(&self.lo)
            .map(|(&k, l)| l.clone() + T::from_count(k) * self.step.clone())
            .collect()
    }

    /// Multi-indices in lexicographic order, dimension 0 most significant.
    pub fn indices(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        product_indices(&self.counts)
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<T>> + '_ {
        self.indices().map(|idx| self.point(&idx))
    }

    /// Grid points lying in `set` (flag-exact), in lexicographic order.
    pub fn points_in(&self, set: &BoxSet<T>) -> Vec<Vec<T>> {
        self.points().filter(|p| set.contains(p)).collect()
    }

    /// Largest `r` with `r·step <= delta`.
    pub fn reach(&self, delta: &T) -> usize {
        if *delta < T::zero() {
            0
        } else {
            steps_within(delta, &self.step)
        }
    }

    /// Indices of the other grid points within sup-distance `r` steps.
    pub fn neighbors(&self, index: &[usize], r: usize) -> Vec<Vec<usize>> {
        let spans: Vec<(usize, usize)> = index
            .iter()
            .zip(&self.counts)
            .map(|(&k, &n)| (k.saturating_sub(r), (k + r).min(n - 1)))
            .collect();
        let widths: Vec<usize> = spans.iter().map(|(a, b)| b - a + 1).collect();
        product_indices(&widths)
            .map(|off| off.iter().zip(&spans).map(|(o, (a, _))| a + o).collect::<Vec<usize>>())
            .filter(|idx| idx.as_slice() != index)
            .collect()
    }

    /// Whether the grid's box contains the closure of `set`.
    pub fn covers(&self, set: &BoxSet<T>) -> bool {
        match set.bounds() {
            None => true,
            Some((lo, hi)) => (0..self.dim()).all(|k| self.lo[k] <= lo[k] && hi[k] <= self.hi[k]),
        }
    }

    pub fn require_covers(&self, set: &BoxSet<T>) -> Result<()> {
        if set.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: set.dim(), found: self.dim() });
        }
        if self.covers(set) {
            Ok(())
        } else {
            Err(Error::GridNotCovering(format!("{set} (grid spans {} to {})", format_point(&self.lo), format_point(&self.hi))))
        }
    }

    pub fn describe(&self) -> String {
        format!("{} to {} step {}", format_point(&self.lo), format_point(&self.hi), self.step)
    }
}

/// Largest `k` with `k·step <= span`, computed exactly in `T`.
fn steps_within<T: Scalar>(span: &T, step: &T) -> usize {
    let guess = (span.approx() / step.approx()).floor().max(0.0) as usize;
    let mut k = guess;
    while k > 0 && T::from_count(k) * step.clone() > *span {
        k -= 1;
    }
    while T::from_count(k + 1) * step.clone() <= *span {
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    #[test]
    fn counts_include_both_ends() {
        let g = Grid::new(vec![0.0, 0.0], vec![2.0, 1.0], 0.125).unwrap();
        assert_eq!(g.counts(), &[17, 9]);
        assert_eq!(g.point(&[12, 8]), vec![1.5, 1.0]);
        let q = Grid::new(vec![Rational64::from_integer(0)], vec![Rational64::new(1, 1)], Rational64::new(1, 3)).unwrap();
        assert_eq!(q.len(), 4);
    }

    #[test]
    fn lexicographic_order() {
        let g = Grid::new(vec![0.0, 0.0], vec![1.0, 1.0], 1.0).unwrap();
        let pts: Vec<_> = g.points().collect();
        assert_eq!(pts, vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]]);
    }

    #[test]
    fn neighbors_clip_at_edges() {
        let g = Grid::new(vec![0.0, 0.0], vec![1.0, 1.0], 0.25).unwrap();
        assert_eq!(g.neighbors(&[0, 0], 1).len(), 3);
        assert_eq!(g.neighbors(&[2, 2], 1).len(), 8);
        assert_eq!(g.reach(&0.25), 1);
        assert_eq!(g.reach(&0.2), 0);
    }

    #[test]
    fn rejects_bad_steps() {
        assert!(Grid::new(vec![0.0], vec![1.0], 0.0).is_err());
        assert!(Grid::new(vec![1.0], vec![0.0], 0.5).is_err());
    }
}
