use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::scalar::{max_of, min_of, Scalar};

/// A nonempty interval of the real line with independent open/closed ends.
///
/// Empty intervals are not representable: constructors return `None` and
/// emptiness is carried by the empty union in [`BoxSet`](super::BoxSet).
#[derive(Clone, Debug, PartialEq)]
pub struct FlaggedInterval<T> {
    lo: T,
    hi: T,
    lo_closed: bool,
    hi_closed: bool,
}

impl<T: Scalar> FlaggedInterval<T> {
    pub fn new(lo: T, hi: T, lo_closed: bool, hi_closed: bool) -> Option<Self> {
        if lo < hi || (lo == hi && lo_closed && hi_closed) {
            Some(FlaggedInterval { lo, hi, lo_closed, hi_closed })
        } else {
            None
        }
    }

    pub fn closed(lo: T, hi: T) -> Option<Self> {
        Self::new(lo, hi, true, true)
    }

    pub fn open(lo: T, hi: T) -> Option<Self> {
        Self::new(lo, hi, false, false)
    }

    pub fn point(v: T) -> Self {
        FlaggedInterval { lo: v.clone(), hi: v, lo_closed: true, hi_closed: true }
    }

    pub fn lo(&self) -> &T {
        &self.lo
    }

    pub fn hi(&self) -> &T {
        &self.hi
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    pub fn is_closed(&self) -> bool {
        self.lo_closed && self.hi_closed
    }

    pub fn is_singleton(&self) -> bool {
        self.lo == self.hi
    }

    pub fn length(&self) -> T {
        self.hi.clone() - self.lo.clone()
    }

    pub fn contains(&self, v: &T) -> bool {
        let above = if self.lo_closed { *v >= self.lo } else { *v > self.lo };
        let below = if self.hi_closed { *v <= self.hi } else { *v < self.hi };
        above && below
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let (lo, lo_closed) = if self.lo > other.lo {
            (self.lo.clone(), self.lo_closed)
        } else if other.lo > self.lo {
            (other.lo.clone(), other.lo_closed)
        } else {
            (self.lo.clone(), self.lo_closed && other.lo_closed)
        };
        let (hi, hi_closed) = if self.hi < other.hi {
            (self.hi.clone(), self.hi_closed)
        } else if other.hi < self.hi {
            (other.hi.clone(), other.hi_closed)
        } else {
            (self.hi.clone(), self.hi_closed && other.hi_closed)
        };
        Self::new(lo, hi, lo_closed, hi_closed)
    }

    pub fn closure(&self) -> Self {
        FlaggedInterval { lo: self.lo.clone(), hi: self.hi.clone(), lo_closed: true, hi_closed: true }
    }

    /// Minkowski sum with `(-eps, eps)`: both ends become open.
    pub fn dilate(&self, eps: &T) -> Self {
        FlaggedInterval {
            lo: self.lo.clone() - eps.clone(),
            hi: self.hi.clone() + eps.clone(),
            lo_closed: false,
            hi_closed: false,
        }
    }

    /// Closed hull of the two intervals.
    pub fn hull(&self, other: &Self) -> Self {
        FlaggedInterval {
            lo: min_of(self.lo.clone(), other.lo.clone()),
            hi: max_of(self.hi.clone(), other.hi.clone()),
            lo_closed: true,
            hi_closed: true,
        }
    }

    /// A point guaranteed to lie inside the interval.
    pub fn representative(&self) -> T {
        if self.is_singleton() {
            self.lo.clone()
        } else {
            (self.lo.clone() + self.hi.clone()) / T::two()
        }
    }

    /// Sup-norm distance from `v` to the closure of the interval.
    pub fn distance_to(&self, v: &T) -> T {
        if *v < self.lo {
            self.lo.clone() - v.clone()
        } else if *v > self.hi {
            v.clone() - self.hi.clone()
        } else {
            T::zero()
        }
    }

    pub(crate) fn map_scalars<U: Scalar>(&self, f: &impl Fn(&T) -> U) -> FlaggedInterval<U> {
        FlaggedInterval { lo: f(&self.lo), hi: f(&self.hi), lo_closed: self.lo_closed, hi_closed: self.hi_closed }
    }
}

impl<T: Scalar> fmt::Display for FlaggedInterval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_singleton() {
            return write!(f, "{{{}}}", self.lo);
        }
        let open = if self.lo_closed { '[' } else { '(' };
        let close = if self.hi_closed { ']' } else { ')' };
        write!(f, "{}{}, {}{}", open, self.lo, self.hi, close)
    }
}

/// Parses the `Display` form: `[a, b)`, `(a, b]`, `{a}`. Endpoints accept
/// fractions such as `3/2`.
impl<T: Scalar> FromStr for FlaggedInterval<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || Error::InvalidInterval(s.to_string());
        if let Some(inner) = s.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
            return T::parse_scalar(inner).map(Self::point).ok_or_else(bad);
        }
        let lo_closed = match s.chars().next() {
            Some('[') => true,
            Some('(') => false,
            _ => return Err(bad()),
        };
        let hi_closed = match s.chars().last() {
            Some(']') => true,
            Some(')') => false,
            _ => return Err(bad()),
        };
        let (lo, hi) = s[1..s.len() - 1].split_once(',').ok_or_else(bad)?;
        let lo = T::parse_scalar(lo).ok_or_else(bad)?;
        let hi = T::parse_scalar(hi).ok_or_else(bad)?;
        Self::new(lo, hi, lo_closed, hi_closed).ok_or_else(bad)
    }
}

/// One piece of the partition of the line induced by a sorted cut list:
/// either a cut point or the open gap between two consecutive cuts.
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Atom<T> {
    Point(T),
    Gap(T, T),
}

impl<T: Scalar> Atom<T> {
    /// Atoms for sorted, deduplicated cuts.
    pub(crate) fn from_cuts(cuts: &[T]) -> Vec<Atom<T>> {
        let mut atoms = Vec::with_capacity(cuts.len() * 2);
        for (k, c) in cuts.iter().enumerate() {
            if k > 0 {
                atoms.push(Atom::Gap(cuts[k - 1].clone(), c.clone()));
            }
            atoms.push(Atom::Point(c.clone()));
        }
        atoms
    }

    /// Valid when the interval's endpoints are among the cuts.
    pub(crate) fn inside(&self, iv: &FlaggedInterval<T>) -> bool {
        match self {
            Atom::Point(v) => iv.contains(v),
            Atom::Gap(a, b) => iv.lo <= *a && iv.hi >= *b,
        }
    }

    pub(crate) fn to_interval(&self) -> FlaggedInterval<T> {
        match self {
            Atom::Point(v) => FlaggedInterval::point(v.clone()),
            Atom::Gap(a, b) => FlaggedInterval { lo: a.clone(), hi: b.clone(), lo_closed: false, hi_closed: false },
        }
    }

    /// The interval running from the start of `first` to the end of `last`.
    pub(crate) fn span(first: &Atom<T>, last: &Atom<T>) -> FlaggedInterval<T> {
        let (lo, lo_closed) = match first {
            Atom::Point(v) => (v.clone(), true),
            Atom::Gap(a, _) => (a.clone(), false),
        };
        let (hi, hi_closed) = match last {
            Atom::Point(v) => (v.clone(), true),
            Atom::Gap(_, b) => (b.clone(), false),
        };
        FlaggedInterval { lo, hi, lo_closed, hi_closed }
    }
}

/// Sorted, deduplicated endpoint list.
pub(crate) fn sorted_cuts<T: Scalar>(mut values: Vec<T>) -> Vec<T> {
    values.sort_by(|a, b| a.partial_cmp(b).expect("scalars are totally ordered"));
    values.dedup();
    values
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(s: &str) -> FlaggedInterval<f64> {
        s.parse().unwrap()
    }

    #[test]
    fn empty_descriptions_are_rejected() {
        assert!(FlaggedInterval::new(1.0, 1.0, true, false).is_none());
        assert!(FlaggedInterval::new(2.0, 1.0, true, true).is_none());
        assert!(FlaggedInterval::open(0.0, 0.0).is_none());
        assert!(FlaggedInterval::closed(0.0, 0.0).is_some());
    }

    #[test]
    fn intersection_follows_flags() {
        assert_eq!(iv("(0, 1]").intersect(&iv("[1, 2]")), Some(iv("{1}")));
        assert_eq!(iv("(0, 1)").intersect(&iv("[1, 2]")), None);
        assert_eq!(iv("[0, 1)").intersect(&iv("(0, 1]")), Some(iv("(0, 1)")));
        assert_eq!(iv("(1, 2.25)").intersect(&iv("[0, 2]")), Some(iv("(1, 2]")));
    }

    #[test]
    fn display_round_trips() {
        for s in ["[0, 1)", "(0.5, 2]", "{1}", "(-0.25, 3)"] {
            assert_eq!(iv(s).to_string(), s);
        }
        let q: FlaggedInterval<num_rational::Rational64> = "[1/2, 3/2)".parse().unwrap();
        assert_eq!(q.to_string(), "[1/2, 3/2)");
        assert!("[2, 1]".parse::<FlaggedInterval<f64>>().is_err());
        assert!("<0, 1>".parse::<FlaggedInterval<f64>>().is_err());
    }

    #[test]
    fn contains_respects_open_ends() {
        assert!(!iv("(0, 1)").contains(&0.0));
        assert!(iv("[0, 1)").contains(&0.0));
        assert!(!iv("[0, 1)").contains(&1.0));
        assert_eq!(iv("[3, 4]").distance_to(&1.0), 2.0);
    }
}
