//! Exact finite unions of flagged boxes and the grids used to sample them.

mod boxset;
mod grid;
mod interval;

pub use boxset::{BoxSet, FlaggedBox};
pub use grid::Grid;
pub use interval::FlaggedInterval;

pub(crate) use interval::{sorted_cuts, Atom};

/// Mixed-radix counter over `0..counts[0] × 0..counts[1] × ...`, last index fastest.
pub(crate) fn product_indices(counts: &[usize]) -> impl Iterator<Item = Vec<usize>> {
    let counts = counts.to_vec();
    let total: usize = counts.iter().product();
    let mut current = vec![0usize; counts.len()];
    let mut emitted = 0usize;
    std::iter::from_fn(move || {
        if emitted == total {
            return None;
        }
        let out = current.clone();
        emitted += 1;
        for k in (0..counts.len()).rev() {
            current[k] += 1;
            if current[k] < counts[k] {
                break;
            }
            current[k] = 0;
        }
        Some(out)
    })
}
