//! Grid surrogates for upper semicontinuity and its dilated variants.
//!
//! A failing check always carries a concrete witness. A passing check means
//! no violation was seen at the stated resolution; it is not a proof.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{format_point, Scalar};
use crate::sets::{BoxSet, Grid};

use super::piecewise::PiecewiseMap;
use super::report::{CheckReport, Verdict, Witness, WitnessKind};

/// Sampling resolution shared by all checks.
#[derive(Clone, Debug, PartialEq)]
pub struct Resolution<T> {
    pub grid: Grid<T>,
    pub delta: T,
    pub tol: T,
}

impl<T: Scalar> Resolution<T> {
    pub fn new(grid: Grid<T>, delta: T, tol: T) -> Result<Self> {
        if delta <= T::zero() {
            return Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")));
        }
        if tol < T::zero() {
            return Err(Error::InvalidParameter(format!("tol must be nonnegative, got {tol}")));
        }
        Ok(Resolution { grid, delta, tol })
    }

    /// `delta` of one grid step.
    pub fn one_step(grid: Grid<T>, tol: T) -> Self {
        let delta = grid.step().clone();
        Resolution { grid, delta, tol }
    }

    fn stamp(&self, report: &mut CheckReport<T>) {
        report.set_param("grid", self.grid.describe());
        report.set_param("delta", &self.delta);
        report.set_param("tol", &self.tol);
    }

    fn require_dim(&self, map: &PiecewiseMap<T>) -> Result<()> {
        if self.grid.dim() != map.domain_dim() {
            return Err(Error::DimensionMismatch { expected: map.domain_dim(), found: self.grid.dim() });
        }
        Ok(())
    }
}

/// Values at every grid point (flat order); `None` off the domain.
pub fn sample<T: Scalar>(map: &PiecewiseMap<T>, grid: &Grid<T>) -> Vec<Option<BoxSet<T>>> {
    let idxs: Vec<Vec<usize>> = grid.indices().collect();
    idxs.par_iter()
        .map(|idx| {
            let x = grid.point(idx);
            map.evaluate(&x).ok()
        })
        .collect()
}

/// Excess-based upper semicontinuity surrogate on closed values.
///
/// Every grid neighbor `x'` of `x` within `delta` must satisfy
/// `excess(T(x'), T(x)) <= tol + L·delta`, where `L` is the largest slope of
/// the map's endpoint expressions. Witnesses are then tested exactly: a
/// witness is confirmed when the graph adherence at `x` leaves `cl T(x)`.
pub fn check_usc<T: Scalar>(map: &PiecewiseMap<T>, res: &Resolution<T>) -> Result<CheckReport<T>> {
    res.require_dim(map)?;
    let closed = map.closure_values();
    let slope = map.max_slope();
    let allowance = res.tol.clone() + slope.clone() * res.delta.clone();
    let grid = &res.grid;
    let values = sample(&closed, grid);
    let r = grid.reach(&res.delta);
    let idxs: Vec<Vec<usize>> = grid.indices().collect();
    let found: Vec<Vec<Witness<T>>> = idxs
        .par_iter()
        .map(|idx| {
            let Some(here) = &values[grid.flat(idx)] else {
                return Vec::new();
            };
            let mut out = Vec::new();
            for nb in grid.neighbors(idx, r) {
                let Some(there) = &values[grid.flat(&nb)] else {
                    continue;
                };
                if there.is_empty() {
                    continue;
                }
                let mut w = Witness::at(WitnessKind::Excess, grid.point(idx), String::new());
                w.neighbor = Some(grid.point(&nb));
                if here.is_empty() {
                    w.kind = WitnessKind::EmptyValue;
                    w.detail = format!("neighbor value {there}");
                    out.push(w);
                    continue;
                }
                let e = there.hausdorff_upper(here).expect("dimensions agree and reference is nonempty");
                if e > allowance {
                    w.detail = format!("{there} leaves {here}");
                    w.excess = Some(e);
                    out.push(w);
                }
            }
            out
        })
        .collect();

    let mut report = CheckReport::new("usc").param("modulus", &slope);
    res.stamp(&mut report);
    report.note("values closed before checking");
    for w in found.into_iter().flatten() {
        report.fail_with(w);
    }
    if report.witness_count > 0 {
        let adh = map.adherence();
        for w in &mut report.witnesses {
            let here = values[grid_index(grid, &w.point)].as_ref().expect("witness lies in the domain");
            let a = adh.evaluate(&w.point)?;
            w.confirmed = Some(!a.is_subset(here)?);
        }
    }
    Ok(report)
}

fn grid_index<T: Scalar>(grid: &Grid<T>, p: &[T]) -> usize {
    let idx: Vec<usize> = p
        .iter()
        .zip(grid.lo())
        .map(|(v, l)| ((v.clone() - l.clone()) / grid.step().clone()).approx().round() as usize)
        .collect();
    grid.flat(&idx)
}

/// Lower semicontinuity surrogate: `excess(T(x), T(x')) <= tol + L·delta`.
pub fn check_lsc_surrogate<T: Scalar>(map: &PiecewiseMap<T>, res: &Resolution<T>) -> Result<CheckReport<T>> {
    res.require_dim(map)?;
    let closed = map.closure_values();
    let slope = map.max_slope();
    let allowance = res.tol.clone() + slope.clone() * res.delta.clone();
    let grid = &res.grid;
    let values = sample(&closed, grid);
    let r = grid.reach(&res.delta);
    let mut report = CheckReport::new("lsc-surrogate").param("modulus", &slope);
    res.stamp(&mut report);
    for idx in grid.indices() {
        let Some(here) = &values[grid.flat(&idx)] else { continue };
        if here.is_empty() {
            continue;
        }
        for nb in grid.neighbors(&idx, r) {
            let Some(there) = &values[grid.flat(&nb)] else { continue };
            let mut w = Witness::at(WitnessKind::Excess, grid.point(&idx), String::new());
            w.neighbor = Some(grid.point(&nb));
            if there.is_empty() {
                w.kind = WitnessKind::EmptyValue;
                w.detail = format!("value {here} vanishes at the neighbor");
                report.fail_with(w);
                continue;
            }
            let e = here.hausdorff_upper(there)?;
            if e > allowance {
                w.excess = Some(e);
                report.fail_with(w);
            }
        }
    }
    Ok(report)
}

/// Nonemptiness and/or single-box values at every grid point of the domain.
pub fn check_values<T: Scalar>(
    name: &str,
    map: &PiecewiseMap<T>,
    grid: &Grid<T>,
    nonempty: bool,
    convex: bool,
) -> Result<CheckReport<T>> {
    if grid.dim() != map.domain_dim() {
        return Err(Error::DimensionMismatch { expected: map.domain_dim(), found: grid.dim() });
    }
    let values = sample(map, grid);
    let mut report = CheckReport::new(name).param("grid", grid.describe());
    for (idx, v) in grid.indices().zip(&values) {
        let Some(v) = v else { continue };
        if nonempty && v.is_empty() {
            report.fail_with(Witness::at(WitnessKind::EmptyValue, grid.point(&idx), ""));
        } else if convex && !v.is_convex() {
            report.fail_with(Witness::at(WitnessKind::NonConvex, grid.point(&idx), v.to_string()));
        }
    }
    Ok(report)
}

/// Validates an ε list: nonempty, positive, strictly decreasing.
pub fn check_eps_chain<T: Scalar>(eps: &[T]) -> Result<()> {
    if eps.is_empty() {
        return Err(Error::InvalidParameter("empty eps list".into()));
    }
    if eps.iter().any(|e| *e <= T::zero()) {
        return Err(Error::InvalidParameter("eps values must be positive".into()));
    }
    if eps.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter("eps list must be strictly decreasing".into()));
    }
    Ok(())
}

fn w_usc_report<T: Scalar>(
    name: &str,
    map: &PiecewiseMap<T>,
    d: &BoxSet<T>,
    eps: &[T],
    res: &Resolution<T>,
    plain: bool,
) -> Result<CheckReport<T>> {
    check_eps_chain(eps)?;
    let mut report = CheckReport::new(name).param("D", d);
    report.set_param("eps", eps.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","));
    res.stamp(&mut report);
    for e in eps {
        let tu = map.t_upper(e, d)?;
        if plain {
            let mut c = check_usc(&tu, res)?;
            c.property = format!("w-usc({e})");
            report.add_child(c);
        }
        let adh = tu.adherence();
        let mut c = check_usc(&adh, res)?;
        c.property = format!("almost-w-usc({e})");
        report.add_child(c);
        let mut c = check_values(&format!("nonempty({e})"), &adh, &res.grid, true, false)?;
        c.note("informational");
        report.add_child(c);
        let mut c = check_values(&format!("convex({e})"), &adh, &res.grid, false, true)?;
        c.note("informational");
        report.add_child(c);
    }
    report.verdict_from_children(&["w-usc(", "almost-w-usc("]);
    Ok(report)
}

/// USC of `x ↦ (T(x) + V) ∩ D` and of its adherence, for every ε.
pub fn check_w_usc<T: Scalar>(
    map: &PiecewiseMap<T>,
    d: &BoxSet<T>,
    eps: &[T],
    res: &Resolution<T>,
) -> Result<CheckReport<T>> {
    w_usc_report("w-usc", map, d, eps, res, true)
}

/// USC of the adherence of `x ↦ (T(x) + V) ∩ D` only.
pub fn check_almost_w_usc<T: Scalar>(
    map: &PiecewiseMap<T>,
    d: &BoxSet<T>,
    eps: &[T],
    res: &Resolution<T>,
) -> Result<CheckReport<T>> {
    w_usc_report("almost-w-usc", map, d, eps, res, false)
}

/// `x ↦ (T1(x) + V) ∩ T2(x) ∩ D`.
pub fn dual_map<T: Scalar>(t1: &PiecewiseMap<T>, t2: &PiecewiseMap<T>, eps: &T, d: &BoxSet<T>) -> Result<PiecewiseMap<T>> {
    t1.t_upper(eps, d)?.intersect_maps(t2)
}

/// Upper semicontinuity of the adherence of the dual map for every ε, with
/// a lower semicontinuity surrogate reported alongside.
pub fn check_dual_w_usc<T: Scalar>(
    t1: &PiecewiseMap<T>,
    t2: &PiecewiseMap<T>,
    d: &BoxSet<T>,
    eps: &[T],
    res: &Resolution<T>,
) -> Result<CheckReport<T>> {
    check_eps_chain(eps)?;
    let mut report = CheckReport::new("dual-almost-w-usc").param("D", d);
    report.set_param("eps", eps.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","));
    res.stamp(&mut report);
    report.note("verdict uses upper semicontinuity of the adherence; the lower semicontinuity surrogate is informational");
    for e in eps {
        let adh = dual_map(t1, t2, e, d)?.adherence();
        let mut c = check_usc(&adh, res)?;
        c.property = format!("dual-usc({e})");
        report.add_child(c);
        let mut c = check_lsc_surrogate(&adh, res)?;
        c.property = format!("dual-lsc({e})");
        report.add_child(c);
        let mut c = check_values(&format!("nonempty({e})"), &adh, &res.grid, true, false)?;
        c.note("informational");
        report.add_child(c);
        let mut c = check_values(&format!("convex({e})"), &adh, &res.grid, false, true)?;
        c.note("informational");
        report.add_child(c);
    }
    report.verdict_from_children(&["dual-usc("]);
    Ok(report)
}

/// The three selection clauses on grid points of `k`: the candidate is USC
/// with single-box values, lies in `T + (-eps, eps)^d`, and its closure
/// avoids the point's `diagonal` coordinates.
pub fn check_e_uscs<T: Scalar>(
    map: &PiecewiseMap<T>,
    k: &BoxSet<T>,
    candidate: &PiecewiseMap<T>,
    eps: &T,
    res: &Resolution<T>,
    diagonal: &[usize],
) -> Result<CheckReport<T>> {
    if *eps <= T::zero() {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    if candidate.codomain_dim() != map.codomain_dim() || diagonal.len() != map.codomain_dim() {
        return Err(Error::DimensionMismatch { expected: map.codomain_dim(), found: candidate.codomain_dim() });
    }
    let mut report = CheckReport::new("e-uscs").param("eps", eps).param("K", k);
    res.stamp(&mut report);

    let restricted = candidate.restrict(k)?;
    let mut usc = check_usc(&restricted, res)?;
    usc.property = "selection-usc".into();
    let shape = check_values("selection-convex", &restricted, &res.grid, false, true)?;

    let mut inside = CheckReport::new("selection-within");
    let mut avoids = CheckReport::new("avoids-diagonal");
    for x in res.grid.points_in(k) {
        let Ok(s) = candidate.evaluate(&x) else {
            inside.fail_with(Witness::at(WitnessKind::Violation, x, "candidate undefined"));
            continue;
        };
        let t = map.evaluate(&x)?;
        let within = if t.is_empty() { s.is_empty() } else { s.subset_within(&t.dilate(eps)?, &res.tol)? };
        if !within {
            inside.fail_with(Witness::at(WitnessKind::NotContained, x.clone(), format!("{s} not within {t} + V")));
        }
        let diag: Vec<T> = diagonal.iter().map(|&j| x[j].clone()).collect();
        if s.closure().contains(&diag) {
            avoids.fail_with(Witness::at(WitnessKind::OnDiagonal, x, format!("{} in cl {s}", format_point(&diag))));
        }
    }
    for c in [usc, shape, inside, avoids] {
        report.add_child(c);
    }
    report.verdict_from_children(&[""]);
    Ok(report)
}

/// Proposes a constant selection: the largest box of the intersection of the
/// closed values over grid points of `k`, falling back to the dilated values.
/// `None` when both are empty or every proposal meets the diagonal.
pub fn constant_selection<T: Scalar>(
    map: &PiecewiseMap<T>,
    k: &BoxSet<T>,
    eps: &T,
    grid: &Grid<T>,
    diagonal: &[usize],
) -> Result<Option<PiecewiseMap<T>>> {
    let points = grid.points_in(k);
    if points.is_empty() {
        return Ok(None);
    }
    let values = points.iter().map(|x| map.evaluate(x)).collect::<Result<Vec<_>>>()?;
    for dilated in [false, true] {
        let mut acc: Option<BoxSet<T>> = None;
        for v in &values {
            let v = if dilated { v.dilate(eps)? } else { v.closure() };
            acc = Some(match acc {
                None => v,
                Some(a) => a.intersect(&v)?,
            });
        }
        let acc = acc.expect("at least one point");
        let Some(b) = acc.largest_box() else { continue };
        let proposal = BoxSet::from_box(b.clone());
        let hits = points.iter().any(|x| {
            let diag: Vec<T> = diagonal.iter().map(|&j| x[j].clone()).collect();
            proposal.closure().contains(&diag)
        });
        if !hits {
            let domain = map.domain().intersect(k)?;
            return Ok(Some(PiecewiseMap::constant(domain, &proposal)));
        }
    }
    Ok(None)
}

/// Points of `grid` in the domain where `pred` fails on the value.
pub fn grid_failures<T: Scalar>(
    map: &PiecewiseMap<T>,
    grid: &Grid<T>,
    pred: impl Fn(&[T], &BoxSet<T>) -> bool + Sync,
) -> Vec<Vec<T>> {
    let idxs: Vec<Vec<usize>> = grid.indices().collect();
    idxs.par_iter()
        .filter_map(|idx| {
            let x = grid.point(idx);
            let v = map.evaluate(&x).ok()?;
            (!pred(&x, &v)).then_some(x)
        })
        .collect()
}

impl<T: Scalar> CheckReport<T> {
    /// Verdict of the children named `prefix(...)`.
    pub fn sub_verdict(&self, prefix: &str) -> Verdict {
        Verdict::all(self.children.iter().filter(|c| c.property.starts_with(prefix)).map(|c| c.verdict))
    }
}
