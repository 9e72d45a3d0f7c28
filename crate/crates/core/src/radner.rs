//! Two-period exchange economies with asymmetric information, the abstract
//! economy they induce (with a price player), and market-clearing checks.
//!
//! A bundle has `l·m + 1` coordinates: coordinate 0 is the present period and
//! state `s` owns coordinates `1 + s·l .. 1 + (s+1)·l`. Prices live on the
//! simplex of the same dimension.
//!
//! Budget, information and excess-demand sets are polytopes, so the induced
//! economy is predicate backed: membership is decided by evaluating linear
//! inequalities and emptiness by exact elimination. Signals are read as
//! locally constant in the price, which makes the information sets closed and
//! lets the budget adherence be decided in closed form.

use std::collections::HashMap;
use std::fmt;
use std::ops::Range;

use rayon::prelude::*;
use serde_json::{json, Value as Json};

use crate::error::{Error, Result};
use crate::linear::{feasible, implies, Affine, LinearIneq};
use crate::maps::{CheckReport, PiecewiseMap, Witness, WitnessKind};
use crate::scalar::{format_point, max_of, Scalar};
use crate::sets::{product_indices, BoxSet, FlaggedBox, FlaggedInterval, Grid};

/// State labels, either fixed or looked up by exact price.
#[derive(Clone, Debug, PartialEq)]
pub struct Signal<T> {
    pub default: Vec<usize>,
    pub by_price: Vec<(Vec<T>, Vec<usize>)>,
}

impl<T: Scalar> Signal<T> {
    pub fn constant(labels: Vec<usize>) -> Self {
        Signal { default: labels, by_price: Vec::new() }
    }

    pub fn labels(&self, p: &[T]) -> &[usize] {
        self.by_price.iter().find(|(q, _)| q.as_slice() == p).map(|(_, l)| l.as_slice()).unwrap_or(&self.default)
    }

    /// Pairs of states the agent cannot tell apart at `p`.
    pub fn pooled_pairs(&self, p: &[T]) -> Vec<(usize, usize)> {
        let labels = self.labels(p);
        let mut out = Vec::new();
        for s in 0..labels.len() {
            for t in s + 1..labels.len() {
                if labels[s] == labels[t] {
                    out.push((s, t));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InfoAgent<T> {
    pub name: String,
    pub endowment: Vec<T>,
    pub signal: Signal<T>,
    /// `Q'_i` from allocations to the agent's bundles.
    pub preference: PiecewiseMap<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InfoEconomy<T> {
    pub name: String,
    states: usize,
    goods: usize,
    agents: Vec<InfoAgent<T>>,
    truncation: T,
}

impl<T: Scalar> InfoEconomy<T> {
    /// Without an explicit truncation `M`, uses twice the largest component
    /// of the aggregate endowment.
    pub fn new(
        name: impl Into<String>,
        states: usize,
        goods: usize,
        agents: Vec<InfoAgent<T>>,
        truncation: Option<T>,
    ) -> Result<Self> {
        if states == 0 || goods == 0 || agents.is_empty() {
            return Err(Error::InvalidParameter("need at least one state, good and agent".into()));
        }
        let dim = goods * states + 1;
        for a in &agents {
            if a.endowment.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: a.endowment.len() });
            }
            if a.endowment.iter().any(|v| v < &T::zero()) {
                return Err(Error::InvalidParameter(format!("endowment of {} has a negative component", a.name)));
            }
            if a.signal.default.len() != states || a.signal.by_price.iter().any(|(p, l)| p.len() != dim || l.len() != states) {
                return Err(Error::InvalidParameter(format!("signal of {} does not match {states} states", a.name)));
            }
        }
        let mut total = vec![T::zero(); dim];
        for a in &agents {
            for (t, v) in total.iter_mut().zip(&a.endowment) {
                *t = t.clone() + v.clone();
            }
        }
        let largest = total.iter().cloned().fold(T::zero(), max_of);
        let truncation = truncation.unwrap_or_else(|| T::two() * largest.clone());
        if truncation <= T::zero() || truncation < largest {
            return Err(Error::TruncationTooSmall { bound: truncation.to_string(), needed: largest.to_string() });
        }
        let e = InfoEconomy { name: name.into(), states, goods, agents, truncation };
        let space = e.allocation_box();
        for a in &e.agents {
            if a.preference.codomain_dim() != dim || a.preference.domain_dim() != space.dim() {
                return Err(Error::DimensionMismatch { expected: dim, found: a.preference.codomain_dim() });
            }
            if !space.is_subset(a.preference.domain())? {
                return Err(Error::DomainMismatch(format!("preference of {} is not defined on {space}", a.name)));
            }
        }
        Ok(e)
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn goods(&self) -> usize {
        self.goods
    }

    pub fn agents(&self) -> &[InfoAgent<T>] {
        &self.agents
    }

    pub fn truncation(&self) -> &T {
        &self.truncation
    }

    /// `l·m + 1`.
    pub fn dim(&self) -> usize {
        self.goods * self.states + 1
    }

    pub fn state_coords(&self, s: usize) -> Range<usize> {
        1 + s * self.goods..1 + (s + 1) * self.goods
    }

    pub fn aggregate_endowment(&self) -> Vec<T> {
        let mut total = vec![T::zero(); self.dim()];
        for a in &self.agents {
            for (t, v) in total.iter_mut().zip(&a.endowment) {
                *t = t.clone() + v.clone();
            }
        }
        total
    }

    /// `[0, M]^(l·m+1)`.
    pub fn bundle_box(&self) -> FlaggedBox<T> {
        FlaggedBox::cube(self.dim(), FlaggedInterval::closed(T::zero(), self.truncation.clone()).expect("M > 0"))
    }

    /// `[0, M]^(n·(l·m+1))`.
    pub fn allocation_box(&self) -> BoxSet<T> {
        let n = self.agents.len() * self.dim();
        BoxSet::from_box(FlaggedBox::cube(n, FlaggedInterval::closed(T::zero(), self.truncation.clone()).expect("M > 0")))
    }

    pub fn bundle<'a>(&self, x: &'a [T], i: usize) -> &'a [T] {
        &x[i * self.dim()..(i + 1) * self.dim()]
    }

    /// `{y ∈ [0, M]^d : p·y < p·e^i}`.
    pub fn budget(&self, i: usize, p: &[T]) -> Polytope<T> {
        let mut poly = Polytope::from_box(&self.bundle_box());
        let pe = dot(p, &self.agents[i].endowment);
        let mut coeffs = vec![pe];
        coeffs.extend(p.iter().map(|v| -v.clone()));
        poly.constraints.push(LinearIneq::new(Affine::new(coeffs), true));
        poly
    }

    pub fn in_budget(&self, i: usize, p: &[T], y: &[T]) -> bool {
        self.bundle_box().contains(y) && dot(p, y) < dot(p, &self.agents[i].endowment)
    }

    /// Flagged boxes covering the budget set: `slabs` slices along coordinate 0,
    /// each bounded by the budget line at the slice's lower edge.
    pub fn budget_set(&self, i: usize, p: &[T], slabs: usize) -> Result<BoxSet<T>> {
        let d = self.dim();
        let m = self.truncation.clone();
        let wealth = dot(p, &self.agents[i].endowment);
        if wealth <= T::zero() {
            return Ok(BoxSet::empty(d));
        }
        let slabs = slabs.max(1);
        let mut boxes = Vec::new();
        for k in 0..slabs {
            let lo = m.clone() * T::from_count(k) / T::from_count(slabs);
            let hi = m.clone() * T::from_count(k + 1) / T::from_count(slabs);
            let left = wealth.clone() - p[0].clone() * lo.clone();
            if left <= T::zero() {
                break;
            }
            let mut sides = Vec::with_capacity(d);
            let x0_hi = if p[0] > T::zero() { left.clone() / p[0].clone() + lo.clone() } else { hi.clone() };
            let (x0_hi, x0_closed) = if x0_hi < hi { (x0_hi, false) } else { (hi, true) };
            sides.push(FlaggedInterval::new(lo, x0_hi, true, x0_closed).expect("slab has positive width"));
            for pj in &p[1..] {
                let side = if pj > &T::zero() && left.clone() / pj.clone() <= m {
                    FlaggedInterval::new(T::zero(), left.clone() / pj.clone(), true, false)
                } else {
                    FlaggedInterval::closed(T::zero(), m.clone())
                };
                sides.push(side.expect("nonempty side"));
            }
            boxes.push(FlaggedBox::new(sides));
        }
        BoxSet::from_boxes(d, boxes)
    }

    /// `{y ∈ [0, M]^d : y_s = y_s' whenever the signal pools s and s'}`.
    pub fn information(&self, i: usize, p: &[T]) -> Polytope<T> {
        let d = self.dim();
        let mut poly = Polytope::from_box(&self.bundle_box());
        for (s, t) in self.agents[i].signal.pooled_pairs(p) {
            for (a, b) in self.state_coords(s).zip(self.state_coords(t)) {
                let mut c = vec![T::zero(); d + 1];
                c[a + 1] = T::one();
                c[b + 1] = -T::one();
                let diff = Affine::new(c);
                poly.constraints.push(LinearIneq::new(diff.clone(), false));
                poly.constraints.push(LinearIneq::new(diff.neg(), false));
            }
        }
        poly
    }

    pub fn in_information(&self, i: usize, p: &[T], y: &[T], tol: &T) -> bool {
        self.bundle_box().contains(y)
            && self.agents[i].signal.pooled_pairs(p).into_iter().all(|(s, t)| {
                self.state_coords(s).zip(self.state_coords(t)).all(|(a, b)| (y[a].clone() - y[b].clone()).abs() <= *tol)
            })
    }

    /// `y ∈ G_i(p)`: `p_s·y(s) ≤ p_s·y(s')` for every `s'` pooled with `s`.
    /// `y` has the `l·m` state coordinates only.
    pub fn delivery_contains(&self, i: usize, p: &[T], y: &[T]) -> bool {
        let l = self.goods;
        let labels = self.agents[i].signal.labels(p);
        let block = |v: &[T], s: usize| v[s * l..(s + 1) * l].to_vec();
        (0..self.states).all(|s| {
            let ps = &p[1 + s * l..1 + (s + 1) * l];
            (0..self.states)
                .filter(|&t| labels[t] == labels[s])
                .all(|t| dot(ps, &block(y, s)) <= dot(ps, &block(y, t)))
        })
    }

    /// Whether `y` is in the adherence of the budget map at `p`, intersected
    /// with the information set when `informed`.
    ///
    /// For `p·y = p·e` the point is a limit of budget points unless the
    /// wealth is zero and no coordinate with positive endowment has
    /// `y_j ≤ e_j`, in which case `p'·(e - y') ≤ 0` near `(p, y)`.
    pub fn budget_adheres(&self, i: usize, p: &[T], y: &[T], informed: bool) -> bool {
        if !self.bundle_box().contains(y) || (informed && !self.in_information(i, p, y, &T::zero())) {
            return false;
        }
        let e = &self.agents[i].endowment;
        let (py, pe) = (dot(p, y), dot(p, e));
        if py < pe {
            return true;
        }
        py == pe && (py > T::zero() || e.iter().zip(y).any(|(ej, yj)| ej > &T::zero() && yj <= ej))
    }

    /// The associated abstract economy with `n + 1` players.
    pub fn to_abstract_economy(&self) -> AssociatedEconomy<'_, T> {
        AssociatedEconomy { econ: self }
    }
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// `{y : constraints hold}`; constraints are over the `dim` coordinates of `y`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polytope<T> {
    pub dim: usize,
    pub constraints: Vec<LinearIneq<T>>,
}

impl<T: Scalar> Polytope<T> {
    pub fn from_box(b: &FlaggedBox<T>) -> Self {
        let d = b.dim();
        let mut constraints = Vec::with_capacity(2 * d);
        for (k, side) in b.sides().iter().enumerate() {
            constraints.push(LinearIneq::new(Affine::var(d, k, T::one(), -side.lo().clone()), !side.lo_closed()));
            constraints.push(LinearIneq::new(Affine::var(d, k, -T::one(), side.hi().clone()), !side.hi_closed()));
        }
        Polytope { dim: d, constraints }
    }

    pub fn contains(&self, y: &[T]) -> bool {
        self.constraints.iter().all(|c| c.holds(y))
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut constraints = self.constraints.clone();
        constraints.extend(other.constraints.iter().cloned());
        Polytope { dim: self.dim, constraints }
    }

    pub fn is_empty(&self) -> bool {
        !feasible(&self.constraints)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.is_empty() || other.constraints.iter().all(|c| implies(&self.constraints, c))
    }
}

/// Points of the price simplex with coordinates in `(1/denom)·ℤ`.
#[derive(Clone, Debug, PartialEq)]
pub struct PriceSimplex {
    pub dim: usize,
    pub denom: usize,
}

impl PriceSimplex {
    pub fn new(dim: usize, denom: usize) -> Result<Self> {
        if dim == 0 || denom == 0 {
            return Err(Error::InvalidParameter("price simplex needs a positive dimension and resolution".into()));
        }
        Ok(PriceSimplex { dim, denom })
    }

    pub fn points<T: Scalar>(&self) -> Vec<Vec<T>> {
        let mut out = Vec::new();
        let mut current = vec![0usize; self.dim];
        compositions(self.denom, 0, &mut current, &mut |c| {
            out.push(c.iter().map(|&k| T::ratio(k as i64, self.denom as i64)).collect())
        });
        out
    }

    pub fn contains<T: Scalar>(p: &[T]) -> bool {
        p.iter().all(|v| v >= &T::zero()) && p.iter().fold(T::zero(), |a, v| a + v.clone()) == T::one()
    }

    pub fn describe(&self) -> String {
        format!("simplex dim {} step 1/{}", self.dim, self.denom)
    }
}

fn compositions(left: usize, k: usize, current: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if k + 1 == current.len() {
        current[k] = left;
        f(current);
        return;
    }
    for v in (0..=left).rev() {
        current[k] = v;
        compositions(left - v, k + 1, current, f);
    }
}

/// The induced `(n + 1)`-player abstract economy on allocations × prices.
#[derive(Clone, Copy, Debug)]
pub struct AssociatedEconomy<'a, T> {
    econ: &'a InfoEconomy<T>,
}

impl<'a, T: Scalar> AssociatedEconomy<'a, T> {
    pub fn info_economy(&self) -> &'a InfoEconomy<T> {
        self.econ
    }

    /// `A_i(x, p)`: the budget set.
    pub fn a(&self, i: usize, p: &[T]) -> Polytope<T> {
        self.econ.budget(i, p)
    }

    /// `B_i = A_i ∩ I_i`.
    pub fn b(&self, i: usize, p: &[T]) -> Polytope<T> {
        self.econ.budget(i, p).intersect(&self.econ.information(i, p))
    }

    /// `P_i = Q_i ∩ I_i`, one polytope per box of `Q'_i(x)`.
    pub fn p(&self, i: usize, x: &[T], p: &[T]) -> Result<Vec<Polytope<T>>> {
        let info = self.econ.information(i, p);
        let q = self.econ.agents[i].preference.evaluate(x)?;
        Ok(q.boxes().iter().map(|b| Polytope::from_box(b).intersect(&info)).collect())
    }

    pub fn ap_empty(&self, i: usize, x: &[T], p: &[T]) -> Result<bool> {
        let a = self.a(i, p);
        Ok(self.p(i, x, p)?.iter().all(|pp| pp.intersect(&a).is_empty()))
    }

    /// `Σ x^i - Σ e^i`.
    pub fn excess(&self, x: &[T]) -> Vec<T> {
        let mut z: Vec<T> = self.econ.aggregate_endowment().into_iter().map(|v| -v).collect();
        for i in 0..self.econ.agents.len() {
            for (zj, xj) in z.iter_mut().zip(self.econ.bundle(x, i)) {
                *zj = zj.clone() + xj.clone();
            }
        }
        z
    }

    /// `q ∈ P_{n+1}(x, p)`: `q·z > p·z`.
    pub fn price_prefers(&self, x: &[T], p: &[T], q: &[T]) -> bool {
        let z = self.excess(x);
        PriceSimplex::contains(q) && dot(q, &z) > dot(p, &z)
    }

    /// `P_{n+1}(x, p) = ∅` iff no simplex vertex beats `p`, since `q ↦ q·z` is linear.
    pub fn price_preference_empty(&self, x: &[T], p: &[T]) -> bool {
        let z = self.excess(x);
        let pz = dot(p, &z);
        z.iter().all(|zj| zj <= &pz)
    }

    pub fn verify(&self, x: &[T], p: &[T]) -> Result<RadnerCertificate<T>> {
        let n = self.econ.agents.len();
        if x.len() != n * self.econ.dim() || p.len() != self.econ.dim() {
            return Err(Error::DimensionMismatch { expected: n * self.econ.dim(), found: x.len() });
        }
        if !self.econ.allocation_box().contains(x) {
            return Err(Error::OutsideDomain(format_point(x)));
        }
        let mut agents = Vec::with_capacity(n);
        for (i, ag) in self.econ.agents.iter().enumerate() {
            agents.push(RadnerEvidence {
                name: ag.name.clone(),
                in_b_adherence: self.econ.budget_adheres(i, p, self.econ.bundle(x, i), true),
                ap_empty: self.ap_empty(i, x, p)?,
            });
        }
        let price_in_simplex = PriceSimplex::contains(p);
        let price_player_empty = self.price_preference_empty(x, p);
        let valid = price_in_simplex && price_player_empty && agents.iter().all(|a| a.in_b_adherence && a.ap_empty);
        Ok(RadnerCertificate { allocation: x.to_vec(), price: p.to_vec(), agents, price_in_simplex, price_player_empty, valid })
    }

    fn allocation_points(&self, step: &T) -> Result<(Vec<Vec<T>>, usize)> {
        let d = self.econ.dim();
        let m = self.econ.truncation.clone();
        let grid = Grid::new(vec![T::zero(); d], vec![m; d], step.clone())?;
        let bundles: Vec<Vec<T>> = grid.points().collect();
        Ok((bundles, self.econ.agents.len()))
    }

    /// Every `(x, p)` on the allocation grid × price grid with a valid certificate.
    pub fn search(&self, step: &T, simplex: &PriceSimplex) -> Result<RadnerSearch<T>> {
        let (bundles, n) = self.allocation_points(step)?;
        let prices: Vec<Vec<T>> = simplex.points();
        let counts = vec![bundles.len(); n];
        let found = prices
            .par_iter()
            .map(|p| {
                let mut memo: HashMap<(usize, String), bool> = HashMap::new();
                let mut out = Vec::new();
                for idx in product_indices(&counts) {
                    let x: Vec<T> = idx.iter().flat_map(|&k| bundles[k].iter().cloned()).collect();
                    if !self.price_preference_empty(&x, p) {
                        continue;
                    }
                    if !(0..n).all(|i| self.econ.budget_adheres(i, p, &bundles[idx[i]], true)) {
                        continue;
                    }
                    let mut ok = true;
                    for i in 0..n {
                        let q = self.econ.agents[i].preference.evaluate(&x)?;
                        let key = (i, format!("{q}"));
                        let empty = match memo.get(&key) {
                            Some(&v) => v,
                            None => {
                                let v = self.ap_empty(i, &x, p)?;
                                memo.insert(key, v);
                                v
                            }
                        };
                        if !empty {
                            ok = false;
                            break;
                        }
                    }
                    if ok {
                        out.push(self.verify(&x, p)?);
                    }
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?;
        let certificates = found.into_iter().flatten().collect();
        Ok(RadnerSearch {
            certificates,
            scanned: bundles.len().pow(n as u32) * prices.len(),
            grid: format!("allocations step {step}, {}", simplex.describe()),
        })
    }

    /// `A_i ∩ P_i ⊆ B_i` at every sampled `(x, p)` for every player, decided
    /// by exact implication of the defining inequalities.
    pub fn check_inclusion(&self, step: &T, simplex: &PriceSimplex) -> Result<CheckReport<T>> {
        let (bundles, n) = self.allocation_points(step)?;
        let prices: Vec<Vec<T>> = simplex.points();
        let counts = vec![bundles.len(); n];
        let failures = prices
            .par_iter()
            .map(|p| {
                let mut memo: HashMap<(usize, String), bool> = HashMap::new();
                let b: Vec<Polytope<T>> = (0..n).map(|i| self.b(i, p)).collect();
                let a: Vec<Polytope<T>> = (0..n).map(|i| self.a(i, p)).collect();
                let mut out = Vec::new();
                let mut samples = 0usize;
                for idx in product_indices(&counts) {
                    let x: Vec<T> = idx.iter().flat_map(|&k| bundles[k].iter().cloned()).collect();
                    samples += 1;
                    for i in 0..n {
                        let q = self.econ.agents[i].preference.evaluate(&x)?;
                        let key = (i, format!("{q}"));
                        let holds = match memo.get(&key) {
                            Some(&v) => v,
                            None => {
                                let pp = self.p(i, &x, p)?;
                                let v = pp.iter().all(|pp| pp.intersect(&a[i]).is_subset(&b[i]));
                                memo.insert(key, v);
                                v
                            }
                        };
                        if !holds {
                            out.push((i, x.clone(), p.clone()));
                        }
                    }
                }
                Ok((out, samples))
            })
            .collect::<Result<Vec<_>>>()?;
        let samples: usize = failures.iter().map(|(_, s)| s).sum();
        let mut report = CheckReport::new("A∩P ⊆ B")
            .param("grid", format!("allocations step {step}, {}", simplex.describe()))
            .param("samples", samples);
        for (i, x, p) in failures.into_iter().flat_map(|(f, _)| f) {
            let mut point = x;
            point.extend(p);
            report.fail_with(Witness::at(WitnessKind::NotContained, point, format!("player {}", self.econ.agents[i].name)));
        }
        report.note("the price player's A∩P is a subset of the simplex by definition");
        Ok(report)
    }

    /// Re-derives the equilibrium clauses of the information economy from a certificate.
    pub fn verify_market_clearing(&self, cert: &RadnerCertificate<T>, tol: &T, sample_step: &T) -> Result<MarketClearing<T>> {
        let (x, p) = (&cert.allocation, &cert.price);
        let z = self.excess(x);
        let direct = z.iter().all(|zj| zj <= tol);
        let basis: Vec<bool> = (0..z.len())
            .map(|j| {
                let mut q = vec![T::zero(); z.len()];
                q[j] = T::one();
                dot(&q, &z) <= *tol
            })
            .collect();
        let n = self.econ.agents.len();
        let mut info_and_budget = Vec::with_capacity(n);
        let mut closure_of_both = Vec::with_capacity(n);
        let mut unaffordable = Vec::with_capacity(n);
        let d = self.econ.dim();
        let grid = Grid::new(vec![T::zero(); d], vec![self.econ.truncation.clone(); d], sample_step.clone())?;
        for i in 0..n {
            let own = self.econ.bundle(x, i);
            info_and_budget.push(self.econ.in_information(i, p, own, &T::zero()) && self.econ.budget_adheres(i, p, own, false));
            closure_of_both.push(self.econ.budget_adheres(i, p, own, true));
            let exact = self.ap_empty(i, x, p)?;
            let q = self.econ.agents[i].preference.evaluate(x)?;
            let witness = grid.points().find(|y| {
                q.contains(y) && self.econ.in_information(i, p, y, &T::zero()) && self.econ.in_budget(i, p, y)
            });
            unaffordable.push(Clause3 { exact, witness });
        }
        let clause1 = direct && basis.iter().all(|&b| b);
        let valid = clause1
            && info_and_budget.iter().all(|&b| b)
            && closure_of_both.iter().all(|&b| b)
            && unaffordable.iter().all(|c| c.exact && c.witness.is_none());
        Ok(MarketClearing { excess: z, direct, basis, clause1, info_and_budget, closure_of_both, unaffordable, valid })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadnerEvidence {
    pub name: String,
    pub in_b_adherence: bool,
    pub ap_empty: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadnerCertificate<T> {
    pub allocation: Vec<T>,
    pub price: Vec<T>,
    pub agents: Vec<RadnerEvidence>,
    pub price_in_simplex: bool,
    /// `P_{n+1}(x, p) = ∅`, the price player's clause.
    pub price_player_empty: bool,
    pub valid: bool,
}

impl<T: Scalar> RadnerCertificate<T> {
    pub fn to_record(&self) -> Json {
        json!({
            "allocation": self.allocation.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "price": self.price.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "valid": self.valid,
            "price_player_empty": self.price_player_empty,
            "agents": self.agents.iter().map(|a| json!({
                "name": a.name, "in_b_adherence": a.in_b_adherence, "ap_empty": a.ap_empty,
            })).collect::<Vec<_>>(),
        })
    }
}

impl<T: Scalar> fmt::Display for RadnerCertificate<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x {} p {} {}", format_point(&self.allocation), format_point(&self.price), if self.valid { "valid" } else { "invalid" })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadnerSearch<T> {
    pub certificates: Vec<RadnerCertificate<T>>,
    pub scanned: usize,
    pub grid: String,
}

/// `Q'_i(x*) ∩ I_i(p*) ∩ B_i(p*) = ∅`, exactly and on a sample grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Clause3<T> {
    pub exact: bool,
    /// A sampled bundle that is preferred, informationally feasible and affordable.
    pub witness: Option<Vec<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MarketClearing<T> {
    /// `Σ x* - Σ e`.
    pub excess: Vec<T>,
    pub direct: bool,
    /// `q·(Σ x* - Σ e) ≤ tol` for each canonical basis price `q`.
    pub basis: Vec<bool>,
    pub clause1: bool,
    /// `x*^i ∈ Ī_i(p*) ∩ B̄_i(p*)`.
    pub info_and_budget: Vec<bool>,
    /// `x*^i ∈ cl(I_i ∩ B_i)(p*)`.
    pub closure_of_both: Vec<bool>,
    pub unaffordable: Vec<Clause3<T>>,
    pub valid: bool,
}

impl<T: Scalar> MarketClearing<T> {
    pub fn to_record(&self) -> Json {
        json!({
            "excess": self.excess.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "clause1": {"direct": self.direct, "basis": self.basis, "holds": self.clause1},
            "clause2": {"info_and_budget": self.info_and_budget, "closure_of_both": self.closure_of_both},
            "clause3": self.unaffordable.iter().map(|c| json!({
                "exact": c.exact,
                "witness": c.witness.as_ref().map(|w| w.iter().map(Scalar::to_json).collect::<Vec<_>>()),
            })).collect::<Vec<_>>(),
            "valid": self.valid,
        })
    }
}
