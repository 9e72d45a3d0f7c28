//! Seeded random maps and sets for the property suites.
//!
//! Every number drawn is a multiple of 1/16, so the same seed gives the
//! same objects in `f64` and in exact rationals.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::linear::Affine;
use crate::maps::{AffineBox, AxisBounds, Bound, Piece, PiecewiseMap, Value};
use crate::scalar::Scalar;
use crate::sets::{BoxSet, FlaggedBox, FlaggedInterval};

const SLOPES: [i64; 5] = [-8, -4, 0, 4, 8];

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// A multiple of 1/16 in `[lo/16, hi/16]`.
    fn sixteenths<T: Scalar>(&mut self, lo: i64, hi: i64) -> T {
        T::ratio(self.rng.gen_range(lo..=hi), 16)
    }

    fn slope<T: Scalar>(&mut self) -> T {
        T::ratio(*SLOPES.choose(&mut self.rng).expect("nonempty"), 8)
    }

    fn affine<T: Scalar>(&mut self, n: usize, lo: i64, hi: i64) -> Affine<T> {
        let mut coeffs = vec![self.sixteenths(lo, hi)];
        coeffs.extend((0..n).map(|_| self.slope()));
        Affine::new(coeffs)
    }

    /// Positive on `[0, 1]^n`: a positive offset and nonnegative slopes.
    fn width<T: Scalar>(&mut self, n: usize) -> Affine<T> {
        let mut coeffs = vec![self.sixteenths(1, 16)];
        coeffs.extend((0..n).map(|_| T::ratio(self.rng.gen_range(0..=2), 4)));
        Affine::new(coeffs)
    }

    /// `[0, 1]^n` cut into `pieces` flagged boxes by axis-parallel cuts at
    /// multiples of 1/8, each cut closed on a random side.
    pub fn partition<T: Scalar>(&mut self, n: usize, pieces: usize) -> Vec<FlaggedBox<T>> {
        let unit = FlaggedInterval::closed(T::zero(), T::one()).expect("unit interval");
        let mut boxes = vec![FlaggedBox::cube(n, unit)];
        let eighth = T::ratio(1, 8);
        let mut attempts = 0;
        while boxes.len() < pieces && attempts < 64 {
            attempts += 1;
            let i = self.rng.gen_range(0..boxes.len());
            let k = self.rng.gen_range(0..n);
            let side = boxes[i].side(k).clone();
            let cuts: Vec<T> = (1..8)
                .map(|j| T::from_int(j) * eighth.clone())
                .filter(|c| *c > *side.lo() && *c < *side.hi())
                .collect();
            let Some(c) = cuts.choose(&mut self.rng).cloned() else { continue };
            let left_closed = self.rng.gen_bool(0.5);
            let left = FlaggedInterval::new(side.lo().clone(), c.clone(), side.lo_closed(), left_closed);
            let right = FlaggedInterval::new(c, side.hi().clone(), !left_closed, side.hi_closed());
            let (Some(left), Some(right)) = (left, right) else { continue };
            let b = boxes.swap_remove(i);
            for half in [left, right] {
                let mut sides = b.sides().to_vec();
                sides[k] = half;
                boxes.push(FlaggedBox::new(sides));
            }
        }
        boxes
    }

    /// A piecewise-affine map `[0, 1]^n ⇉ R^m` with at most `max_pieces`
    /// pieces and random endpoint flags.
    pub fn piecewise_map<T: Scalar>(&mut self, max_dim: usize, max_pieces: usize) -> Result<PiecewiseMap<T>> {
        let n = self.rng.gen_range(1..=max_dim);
        let m = self.rng.gen_range(1..=max_dim);
        let count = self.rng.gen_range(1..=max_pieces);
        let regions = self.partition::<T>(n, count);
        let domain = BoxSet::from_box(FlaggedBox::cube(n, FlaggedInterval::closed(T::zero(), T::one()).expect("unit")));
        let pieces = regions
            .into_iter()
            .map(|region| {
                let axes = (0..m)
                    .map(|_| {
                        let lo = self.affine::<T>(n, -16, 24);
                        let width = self.width::<T>(n);
                        AxisBounds::new(
                            Bound::new(lo.clone(), self.rng.gen_bool(0.7)),
                            Bound::new(lo.add(&width), self.rng.gen_bool(0.7)),
                        )
                    })
                    .collect();
                Piece { region, value: Value::single(AffineBox::new(axes)) }
            })
            .collect();
        PiecewiseMap::new(domain, m, pieces)
    }

    /// A continuous map `[0, 1]^n ⇉ R^m` with closed interval values whose
    /// endpoints are piecewise linear in `x_0` (kinks at multiples of 1/8)
    /// and linear in the other coordinates. Pieces are the strips between
    /// kinks.
    pub fn continuous_map<T: Scalar>(&mut self, max_dim: usize, max_pieces: usize) -> Result<PiecewiseMap<T>> {
        let n = self.rng.gen_range(1..=max_dim);
        let m = self.rng.gen_range(1..=max_dim);
        let count = self.rng.gen_range(1..=max_pieces);
        let mut kinks: Vec<i64> = (1..8).collect();
        kinks.shuffle(&mut self.rng);
        let mut kinks: Vec<i64> = kinks.into_iter().take(count - 1).collect();
        kinks.sort_unstable();
        let mut stops = vec![0];
        stops.extend(&kinks);
        stops.push(8);

        // per output axis: offset, slopes in x_0 per strip for lo and width,
        // and shared slopes in the remaining coordinates
        struct Axis<T> {
            lo0: T,
            wid0: T,
            lo_slopes: Vec<T>,
            wid_slopes: Vec<T>,
            rest: Vec<T>,
        }
        let strips = stops.len() - 1;
        let axes: Vec<Axis<T>> = (0..m)
            .map(|_| Axis {
                lo0: self.sixteenths(-8, 16),
                wid0: self.sixteenths(0, 16),
                lo_slopes: (0..strips).map(|_| self.slope()).collect(),
                // widths only grow, so they stay nonnegative
                wid_slopes: (0..strips).map(|_| T::ratio(self.rng.gen_range(0..=2), 4)).collect(),
                rest: (1..n).map(|_| self.slope()).collect(),
            })
            .collect();

        let eighth = T::ratio(1, 8);
        let mut pieces = Vec::new();
        let mut lo_at: Vec<T> = axes.iter().map(|a| a.lo0.clone()).collect();
        let mut wid_at: Vec<T> = axes.iter().map(|a| a.wid0.clone()).collect();
        for s in 0..strips {
            let a = T::from_int(stops[s]) * eighth.clone();
            let b = T::from_int(stops[s + 1]) * eighth.clone();
            let last = s + 1 == strips;
            let mut sides = vec![FlaggedInterval::new(a.clone(), b.clone(), true, last).expect("strip")];
            sides.extend((1..n).map(|_| FlaggedInterval::closed(T::zero(), T::one()).expect("unit")));
            let mut value_axes = Vec::new();
            for (k, ax) in axes.iter().enumerate() {
                // value at x_0 = a plus slope · (x_0 - a)
                let line = |start: &T, slope: &T, rest: &[T]| {
                    let mut coeffs = vec![start.clone() - slope.clone() * a.clone(), slope.clone()];
                    coeffs.extend(rest.iter().cloned());
                    Affine::new(coeffs)
                };
                let lo = line(&lo_at[k], &ax.lo_slopes[s], &ax.rest);
                let width = line(&wid_at[k], &ax.wid_slopes[s], &vec![T::zero(); n - 1]);
                value_axes.push(AxisBounds::new(Bound::new(lo.clone(), true), Bound::new(lo.add(&width), true)));
                lo_at[k] = lo_at[k].clone() + ax.lo_slopes[s].clone() * (b.clone() - a.clone());
                wid_at[k] = wid_at[k].clone() + ax.wid_slopes[s].clone() * (b.clone() - a.clone());
            }
            pieces.push(Piece { region: FlaggedBox::new(sides), value: Value::single(AffineBox::new(value_axes)) });
        }
        let domain = BoxSet::from_box(FlaggedBox::cube(n, FlaggedInterval::closed(T::zero(), T::one()).expect("unit")));
        PiecewiseMap::new(domain, m, pieces)
    }

    /// A closed box in `R^m` with sides inside `[lo/16, hi/16]`.
    pub fn closed_box<T: Scalar>(&mut self, m: usize, lo: i64, hi: i64) -> FlaggedBox<T> {
        FlaggedBox::new(
            (0..m)
                .map(|_| {
                    let a = self.rng.gen_range(lo..=hi);
                    let b = self.rng.gen_range(a..=hi);
                    FlaggedInterval::closed(T::ratio(a, 16), T::ratio(b, 16)).expect("ordered")
                })
                .collect(),
        )
    }

    /// A compact set of one or two closed boxes in `[-1, 3]^m`.
    pub fn compact<T: Scalar>(&mut self, m: usize) -> Result<BoxSet<T>> {
        let count = if self.rng.gen_bool(0.25) { 2 } else { 1 };
        let boxes = (0..count).map(|_| self.closed_box(m, -16, 48)).collect();
        BoxSet::from_boxes(m, boxes)
    }

    pub fn gen_bool(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }
}
