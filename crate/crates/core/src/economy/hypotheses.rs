//! Hypothesis checkers for the three existence theorems.
//!
//! Each checker returns one child report per condition, and below that one
//! report per agent. Grid-based conditions carry the resolution they ran at.

use crate::error::{Error, Result};
use crate::fixedpoint::ProductMap;
use crate::maps::{
    check_almost_w_usc, check_dual_w_usc, check_e_uscs, check_usc, check_values, constant_selection, dual_map, sample,
    CheckReport, PiecewiseMap, Resolution, Verdict, Witness, WitnessKind,
};
use crate::scalar::Scalar;
use crate::sets::BoxSet;

use super::{AbstractEconomy, Agent};

/// How condition (4) of the selection theorem obtains its candidate maps.
#[derive(Clone, Debug)]
pub enum SelectionChoice<T> {
    Given(PiecewiseMap<T>),
    /// Try the constant-selection heuristic.
    Heuristic,
}

fn condition<T: Scalar>(number: usize, description: &str, children: Vec<CheckReport<T>>) -> CheckReport<T> {
    let mut c = CheckReport::new(format!("condition-{number}"));
    c.note(description);
    for ch in children {
        c.add_child(ch);
    }
    c.verdict_from_children(&[""]);
    c
}

fn agent_report<T: Scalar>(ag: &Agent<T>) -> CheckReport<T> {
    CheckReport::new(format!("agent {}", ag.name))
}

/// `D_i` nonempty, closed, a single box, inside `X_i`.
fn target_report<T: Scalar>(ag: &Agent<T>) -> Result<CheckReport<T>> {
    let mut r = agent_report(ag);
    if ag.d.is_empty() || !ag.d.is_closed() {
        r.fail_with(Witness::at(WitnessKind::Violation, vec![], format!("D = {} is not compact", ag.d)));
    }
    if !ag.d.is_convex() {
        r.fail_with(Witness::at(WitnessKind::NonConvex, vec![], format!("D = {} is not convex", ag.d)));
    }
    let x = BoxSet::from_box(ag.choice.clone());
    if !ag.d.is_subset(&x)? {
        r.fail_with(Witness::at(WitnessKind::NotContained, vec![], format!("D = {} is not inside X = {x}", ag.d)));
    }
    Ok(r)
}

/// `{x : A_i(x) ∩ P_i(x) ≠ ∅}` together with the map `A_i ∩ P_i`.
fn w_set<T: Scalar>(ag: &Agent<T>) -> Result<(PiecewiseMap<T>, std::result::Result<BoxSet<T>, Error>)> {
    let ap = ag.a.intersect_maps(&ag.p)?;
    let w = ap.nonempty_set();
    Ok((ap, w))
}

/// Exact openness of `W` relative to `X`: no point of `W` is a limit of `X \ W`.
fn openness_report<T: Scalar>(ag: &Agent<T>, x: &BoxSet<T>, w: &std::result::Result<BoxSet<T>, Error>) -> Result<CheckReport<T>> {
    let mut r = agent_report(ag);
    match w {
        Ok(w) => {
            r.set_param("W", w);
            let boundary = w.intersect(&x.difference(w)?.closure())?;
            for b in boundary.boxes() {
                r.fail_with(Witness::at(WitnessKind::Violation, b.representative(), format!("{b} ⊆ W meets cl(X \\ W)")));
            }
        }
        Err(e) => {
            r.verdict = Verdict::Unverified;
            r.note(e.to_string());
        }
    }
    Ok(r)
}

/// Grid points where `pred(x, own block, value)` fails.
fn grid_report<T: Scalar>(
    name: &str,
    map: &PiecewiseMap<T>,
    res: &Resolution<T>,
    kind: WitnessKind,
    pred: impl Fn(&[T], &BoxSet<T>) -> Option<String>,
) -> CheckReport<T> {
    let mut r = CheckReport::new(name).param("grid", res.grid.describe());
    for (x, v) in res.grid.points().zip(sample(map, &res.grid)) {
        let Some(v) = v else { continue };
        if let Some(detail) = pred(&x, &v) {
            r.fail_with(Witness::at(kind, x, detail));
        }
    }
    r
}

fn inclusion_report<T: Scalar>(
    name: &str,
    inner: &PiecewiseMap<T>,
    outer: &PiecewiseMap<T>,
    res: &Resolution<T>,
) -> Result<CheckReport<T>> {
    let mut r = CheckReport::new(name).param("grid", res.grid.describe());
    for (x, v) in res.grid.points().zip(sample(inner, &res.grid)) {
        let Some(v) = v else { continue };
        let o = outer.evaluate(&x)?;
        if !v.is_subset(&o)? {
            r.fail_with(Witness::at(WitnessKind::NotContained, x, format!("{v} ⊄ {o}")));
        }
    }
    Ok(r)
}

/// `x_i ∉ map(x)` at every grid point.
fn irreflexive_report<T: Scalar>(
    name: &str,
    map: &PiecewiseMap<T>,
    block: std::ops::Range<usize>,
    res: &Resolution<T>,
) -> CheckReport<T> {
    grid_report(name, map, res, WitnessKind::OnDiagonal, |x, v| {
        v.contains(&x[block.clone()]).then(|| format!("own coordinates lie in {v}"))
    })
}

fn rename<T: Scalar>(mut r: CheckReport<T>, name: String) -> CheckReport<T> {
    r.property = name;
    r
}

fn per_agent<T: Scalar>(
    e: &AbstractEconomy<T>,
    mut f: impl FnMut(usize, &Agent<T>) -> Result<CheckReport<T>>,
) -> Result<Vec<CheckReport<T>>> {
    e.agents().iter().enumerate().map(|(i, ag)| f(i, ag)).collect()
}

fn stamp<T: Scalar>(r: &mut CheckReport<T>, eps: &[T], res: &Resolution<T>) {
    r.set_param("eps", eps.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","));
    r.set_param("grid", res.grid.describe());
    r.set_param("delta", &res.delta);
    r.set_param("tol", &res.tol);
}

fn grid_dim<T: Scalar>(e: &AbstractEconomy<T>, res: &Resolution<T>) -> Result<()> {
    if res.grid.dim() != e.dim() {
        return Err(Error::DimensionMismatch { expected: e.dim(), found: res.grid.dim() });
    }
    Ok(())
}

/// Conditions 1 to 6 of the almost w-upper semicontinuity existence theorem.
pub fn check_theorem_4_1<T: Scalar>(e: &AbstractEconomy<T>, eps: &[T], res: &Resolution<T>) -> Result<CheckReport<T>> {
    grid_dim(e, res)?;
    let x = e.domain();
    let ws = e.agents().iter().map(w_set).collect::<Result<Vec<_>>>()?;
    let mut top = CheckReport::new("theorem-4.1");
    stamp(&mut top, eps, res);

    top.add_child(condition(1, "D_i is a nonempty compact convex subset of X_i", per_agent(e, |_, ag| target_report(ag))?));

    top.add_child(condition(
        2,
        "A_i, P_i convex valued; B_i nonempty convex valued; A_i ∩ P_i ⊆ B_i",
        per_agent(e, |i, ag| {
            let mut r = agent_report(ag);
            r.add_child(check_values("A convex", &ag.a, &res.grid, false, true)?);
            r.add_child(check_values("P convex", &ag.p, &res.grid, false, true)?);
            r.add_child(check_values("B nonempty convex", &ag.b, &res.grid, true, true)?);
            r.add_child(inclusion_report("A∩P ⊆ B", &ws[i].0, &ag.b, res)?);
            r.verdict_from_children(&[""]);
            Ok(r)
        })?,
    ));

    top.add_child(condition(3, "W_i is open in X", per_agent(e, |i, ag| openness_report(ag, x, &ws[i].1))?));

    top.add_child(condition(
        4,
        "A_i ∩ P_i is almost w-upper semicontinuous on W_i with nonempty convex adherence values",
        per_agent(e, |i, ag| {
            let mut r = agent_report(ag);
            match &ws[i].1 {
                Ok(w) => {
                    let h = ws[i].0.restrict(w)?;
                    let c = check_almost_w_usc(&h, &ag.d, eps, res)?;
                    r.verdict = Verdict::all(c.children.iter().map(|ch| ch.verdict));
                    r.add_child(c);
                }
                Err(err) => {
                    r.verdict = Verdict::Unverified;
                    r.note(err.to_string());
                }
            }
            Ok(r)
        })?,
    ));

    top.add_child(condition(
        5,
        "B_i is almost w-upper semicontinuous with nonempty convex adherence values",
        per_agent(e, |_, ag| {
            let mut r = agent_report(ag);
            let c = check_almost_w_usc(&ag.b, &ag.d, eps, res)?;
            r.verdict = Verdict::all(c.children.iter().map(|ch| ch.verdict));
            r.add_child(c);
            Ok(r)
        })?,
    ));

    top.add_child(condition(
        6,
        "x_i is not in the adherence of A_i ∩ P_i at x",
        per_agent(e, |i, ag| {
            let adh = ws[i].0.adherence();
            Ok(rename(irreflexive_report("irreflexive", &adh, e.block(i), res), format!("agent {}", ag.name)))
        })?,
    ));

    top.verdict_from_children(&["condition-"]);
    Ok(top)
}

/// Conditions 1 to 6 of the dual almost w-upper semicontinuity existence theorem.
///
/// Condition 5 is checked on all of `X`, as stated.
pub fn check_theorem_4_2<T: Scalar>(e: &AbstractEconomy<T>, eps: &[T], res: &Resolution<T>) -> Result<CheckReport<T>> {
    grid_dim(e, res)?;
    let x = e.domain();
    let ws = e.agents().iter().map(w_set).collect::<Result<Vec<_>>>()?;
    let mut top = CheckReport::new("theorem-4.2");
    stamp(&mut top, eps, res);

    top.add_child(condition(1, "D_i is a nonempty compact convex subset of X_i", per_agent(e, |_, ag| target_report(ag))?));

    top.add_child(condition(
        2,
        "P_i ⊆ D_i; A_i ∩ P_i ⊆ B_i; B_i nonempty valued",
        per_agent(e, |i, ag| {
            let mut r = agent_report(ag);
            let d = ag.d.clone();
            r.add_child(grid_report("P ⊆ D", &ag.p, res, WitnessKind::NotContained, |_, v| {
                (!v.is_subset(&d).expect("same dimension")).then(|| format!("{v} ⊄ {d}"))
            }));
            r.add_child(inclusion_report("A∩P ⊆ B", &ws[i].0, &ag.b, res)?);
            r.add_child(check_values("B nonempty", &ag.b, &res.grid, true, false)?);
            r.verdict_from_children(&[""]);
            Ok(r)
        })?,
    ));

    top.add_child(condition(3, "W_i is open in X", per_agent(e, |i, ag| openness_report(ag, x, &ws[i].1))?));

    top.add_child(condition(
        4,
        "(A_i, P_i) restricted to cl W_i is dual almost w-upper semicontinuous; B_i is almost w-upper semicontinuous",
        per_agent(e, |i, ag| {
            let mut r = agent_report(ag);
            match &ws[i].1 {
                Ok(w) => {
                    let cl = w.closure();
                    let c = check_dual_w_usc(&ag.a.restrict(&cl)?, &ag.p.restrict(&cl)?, &ag.d, eps, res)?;
                    r.add_child(c);
                }
                Err(err) => {
                    let mut c = CheckReport::new("dual-almost-w-usc");
                    c.verdict = Verdict::Unverified;
                    c.note(err.to_string());
                    r.add_child(c);
                }
            }
            r.add_child(check_almost_w_usc(&ag.b, &ag.d, eps, res)?);
            r.verdict_from_children(&[""]);
            Ok(r)
        })?,
    ));

    top.add_child(condition(
        5,
        "adherences of (B_i + V) ∩ D_i and (A_i + V) ∩ D_i ∩ P_i are nonempty convex valued",
        per_agent(e, |_, ag| {
            let mut r = agent_report(ag);
            for ep in eps {
                let b = ag.b.t_upper(ep, &ag.d)?.adherence();
                r.add_child(check_values(&format!("B^V nonempty convex({ep})"), &b, &res.grid, true, true)?);
                let t = dual_map(&ag.a, &ag.p, ep, &ag.d)?.adherence();
                r.add_child(check_values(&format!("T^V nonempty convex({ep})"), &t, &res.grid, true, true)?);
            }
            r.verdict_from_children(&[""]);
            Ok(r)
        })?,
    ));

    top.add_child(condition(
        6,
        "x_i is not in the adherence of P_i at x",
        per_agent(e, |i, ag| {
            let adh = ag.p.adherence();
            Ok(rename(irreflexive_report("irreflexive", &adh, e.block(i), res), format!("agent {}", ag.name)))
        })?,
    ));

    top.verdict_from_children(&["condition-"]);
    Ok(top)
}

/// Conditions of the selection existence theorem, in textual order:
/// compact choice sets, USC closed budget values, open `W_i`, and the
/// selection property of `cl(A_i ∩ P_i)` on `W_i` for each ε.
pub fn check_theorem_4_3<T: Scalar>(
    e: &AbstractEconomy<T>,
    eps: &[T],
    candidates: &[SelectionChoice<T>],
    res: &Resolution<T>,
) -> Result<CheckReport<T>> {
    grid_dim(e, res)?;
    if candidates.len() != e.agents().len() {
        return Err(Error::InvalidParameter(format!(
            "{} candidate selections for {} agents",
            candidates.len(),
            e.agents().len()
        )));
    }
    let x = e.domain();
    let ws = e.agents().iter().map(w_set).collect::<Result<Vec<_>>>()?;
    let mut top = CheckReport::new("theorem-4.3");
    stamp(&mut top, eps, res);

    top.add_child(condition(
        1,
        "X_i is nonempty compact convex",
        per_agent(e, |_, ag| {
            let mut r = agent_report(ag);
            if !ag.choice.is_closed() {
                r.fail_with(Witness::at(WitnessKind::Violation, vec![], format!("X = {} is not closed", ag.choice)));
            }
            Ok(r)
        })?,
    ));

    top.add_child(condition(
        2,
        "cl B_i is upper semicontinuous with nonempty convex values",
        per_agent(e, |_, ag| {
            let mut r = agent_report(ag);
            let cl = ag.b.closure_values();
            r.add_child(check_usc(&cl, res)?);
            r.add_child(check_values("nonempty convex", &cl, &res.grid, true, true)?);
            r.verdict_from_children(&[""]);
            Ok(r)
        })?,
    ));

    top.add_child(condition(3, "W_i is open", per_agent(e, |i, ag| openness_report(ag, x, &ws[i].1))?));

    top.add_child(condition(
        4,
        "cl(A_i ∩ P_i) has the selection property on W_i",
        per_agent(e, |i, ag| {
            let mut r = agent_report(ag);
            let w = match &ws[i].1 {
                Ok(w) => w,
                Err(err) => {
                    r.verdict = Verdict::Unverified;
                    r.note(err.to_string());
                    return Ok(r);
                }
            };
            let cl = ws[i].0.closure_values();
            let diag: Vec<usize> = e.block(i).collect();
            for ep in eps {
                let cand = match &candidates[i] {
                    SelectionChoice::Given(m) => Some(m.clone()),
                    SelectionChoice::Heuristic => constant_selection(&cl, w, ep, &res.grid, &diag)?,
                };
                let child = match cand {
                    Some(c) => rename(check_e_uscs(&cl, w, &c, ep, res, &diag)?, format!("e-uscs({ep})")),
                    None => {
                        let mut c = CheckReport::new(format!("e-uscs({ep})"));
                        c.verdict = Verdict::Unverified;
                        c.note("no candidate selection available");
                        c
                    }
                };
                r.add_child(child);
            }
            r.verdict_from_children(&[""]);
            Ok(r)
        })?,
    ));

    top.verdict_from_children(&["condition-"]);
    Ok(top)
}

/// The maps `T_i = A_i ∩ P_i` on `W_i` and `B_i` off `W_i`, with targets `D_i`.
pub fn theorem_4_1_construction<T: Scalar>(e: &AbstractEconomy<T>) -> Result<ProductMap<T>> {
    let x = e.domain();
    let mut factors = Vec::new();
    for ag in e.agents() {
        let (ap, w) = w_set(ag)?;
        let w = w?;
        let inside = ap.restrict(&w)?;
        let outside = ag.b.restrict(&x.difference(&w)?)?;
        let parts: Vec<PiecewiseMap<T>> = [inside, outside].into_iter().filter(|m| !m.domain().is_empty()).collect();
        factors.push(PiecewiseMap::glue(&parts)?);
    }
    ProductMap::new(factors, e.agents().iter().map(|ag| ag.d.clone()).collect())
}
