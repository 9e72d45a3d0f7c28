//! Affine expressions and exact feasibility of mixed strict/non-strict
//! linear inequality systems by Fourier–Motzkin elimination.

use std::fmt;

use crate::scalar::Scalar;

/// `coeffs[0] + Σ coeffs[j+1]·v_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Affine<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Affine<T> {
    /// Requires at least the constant term.
    pub fn new(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "affine expression needs a constant term");
        Affine { coeffs }
    }

    pub fn constant(n_vars: usize, c: T) -> Self {
        let mut coeffs = vec![T::zero(); n_vars + 1];
        coeffs[0] = c;
        Affine { coeffs }
    }

    /// `scale·v_j + offset`.
    pub fn var(n_vars: usize, j: usize, scale: T, offset: T) -> Self {
        let mut a = Self::constant(n_vars, offset);
        a.coeffs[j + 1] = scale;
        a
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn n_vars(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn constant_term(&self) -> &T {
        &self.coeffs[0]
    }

    pub fn slope(&self, j: usize) -> &T {
        &self.coeffs[j + 1]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, x: &[T]) -> T {
        debug_assert_eq!(x.len(), self.n_vars());
        self.coeffs[1..]
            .iter()
            .zip(x)
            .fold(self.coeffs[0].clone(), |acc, (c, v)| if c.is_zero() { acc } else { acc + c.clone() * v.clone() })
    }

    /// ℓ1 norm of the slope vector: the sup-norm Lipschitz constant.
    pub fn slope_l1(&self) -> T {
        self.coeffs[1..].iter().fold(T::zero(), |acc, c| acc + c.abs())
    }

    pub fn add(&self, other: &Self) -> Self {
        Affine { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Affine { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() - b.clone()).collect() }
    }

    pub fn scale(&self, k: &T) -> Self {
        Affine { coeffs: self.coeffs.iter().map(|c| c.clone() * k.clone()).collect() }
    }

    pub fn neg(&self) -> Self {
        Affine { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn shift(&self, delta: &T) -> Self {
        let mut a = self.clone();
        a.coeffs[0] = a.coeffs[0].clone() + delta.clone();
        a
    }

    /// Re-expresses over `total` variables, placing ours at `offset..`.
    pub fn embed(&self, total: usize, offset: usize) -> Self {
        let mut coeffs = vec![T::zero(); total + 1];
        coeffs[0] = self.coeffs[0].clone();
        for (j, c) in self.coeffs[1..].iter().enumerate() {
            coeffs[offset + j + 1] = c.clone();
        }
        Affine { coeffs }
    }

    /// Substitutes `v_j = subs[j](w)` for every variable.
    pub fn compose(&self, subs: &[Affine<T>]) -> Self {
        debug_assert_eq!(subs.len(), self.n_vars());
        let n = subs.first().map_or(0, Affine::n_vars);
        let mut out = Self::constant(n, self.coeffs[0].clone());
        for (c, s) in self.coeffs[1..].iter().zip(subs) {
            if !c.is_zero() {
                out = out.add(&s.scale(c));
            }
        }
        out
    }

    pub(crate) fn map_scalars<U: Scalar>(&self, f: &impl Fn(&T) -> U) -> Affine<U> {
        Affine { coeffs: self.coeffs.iter().map(f).collect() }
    }
}

impl<T: Scalar> fmt::Display for Affine<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (j, c) in self.coeffs[1..].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else if wrote { "+" } else { "" };
            let mag = c.abs();
            if wrote {
                write!(f, " {sign} ")?;
            } else {
                f.write_str(sign)?;
            }
            if mag.is_one() {
                write!(f, "x{j}")?;
            } else {
                write!(f, "{mag}·x{j}")?;
            }
            wrote = true;
        }
        let c0 = &self.coeffs[0];
        if !wrote {
            write!(f, "{c0}")
        } else if c0.is_zero() {
            Ok(())
        } else if c0.is_negative() {
            write!(f, " - {}", c0.abs())
        } else {
            write!(f, " + {c0}")
        }
    }
}

/// `expr >= 0`, or `expr > 0` when strict.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearIneq<T> {
    pub expr: Affine<T>,
    pub strict: bool,
}

impl<T: Scalar> LinearIneq<T> {
    pub fn new(expr: Affine<T>, strict: bool) -> Self {
        LinearIneq { expr, strict }
    }

    /// `a <= b` (or `<`).
    pub fn le(a: &Affine<T>, b: &Affine<T>, strict: bool) -> Self {
        LinearIneq { expr: b.sub(a), strict }
    }

    pub fn holds(&self, x: &[T]) -> bool {
        let v = self.expr.eval(x);
        if self.strict {
            v > T::zero()
        } else {
            v >= T::zero()
        }
    }

    /// The complement half-space.
    pub fn negate(&self) -> Self {
        LinearIneq { expr: self.expr.neg(), strict: !self.strict }
    }

    pub fn relaxed(&self) -> Self {
        LinearIneq { expr: self.expr.clone(), strict: false }
    }

    /// `Some(truth)` when the expression does not depend on the variables.
    pub fn constant_truth(&self) -> Option<bool> {
        self.expr.is_constant().then(|| self.holds(&vec![T::zero(); self.expr.n_vars()]))
    }

    pub fn embed(&self, total: usize, offset: usize) -> Self {
        LinearIneq { expr: self.expr.embed(total, offset), strict: self.strict }
    }

    pub(crate) fn map_scalars<U: Scalar>(&self, f: &impl Fn(&T) -> U) -> LinearIneq<U> {
        LinearIneq { expr: self.expr.map_scalars(f), strict: self.strict }
    }
}

impl<T: Scalar> fmt::Display for LinearIneq<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} 0", self.expr, if self.strict { ">" } else { ">=" })
    }
}

/// Whether some real point satisfies every inequality.
///
/// Exact for rational scalars; for floats it inherits the rounding of the
/// combination steps.
pub fn feasible<T: Scalar>(system: &[LinearIneq<T>]) -> bool {
    let Some(n) = system.first().map(|c| c.expr.n_vars()) else {
        return true;
    };
    let mut rows: Vec<LinearIneq<T>> = Vec::with_capacity(system.len());
    for c in system {
        if !push_row(&mut rows, c.clone()) {
            return false;
        }
    }
    for j in (0..n).rev() {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in rows {
            let c = r.expr.slope(j).clone();
            if c > T::zero() {
                pos.push(r);
            } else if c < T::zero() {
                neg.push(r);
            } else {
                rest.push(r);
            }
        }
        rows = rest;
        for p in &pos {
            let a = p.expr.slope(j).clone();
            for q in &neg {
                let b = -q.expr.slope(j).clone();
                let mut expr = p.expr.scale(&b).add(&q.expr.scale(&a));
                expr.coeffs[j + 1] = T::zero();
                let row = LinearIneq { expr, strict: p.strict || q.strict };
                if !push_row(&mut rows, row) {
                    return false;
                }
            }
        }
    }
    true
}

/// Adds a normalized row; returns false if it is a constant contradiction.
fn push_row<T: Scalar>(rows: &mut Vec<LinearIneq<T>>, mut row: LinearIneq<T>) -> bool {
    if let Some(truth) = row.constant_truth() {
        return truth;
    }
    // scale so the largest slope magnitude is one, which keeps duplicates recognizable
    let lead = row.expr.coeffs[1..].iter().fold(T::zero(), |m, c| if c.abs() > m { c.abs() } else { m });
    if !lead.is_one() {
        let inv = T::one() / lead;
        row.expr = row.expr.scale(&inv);
    }
    if let Some(existing) = rows.iter_mut().find(|r| r.expr.coeffs[1..] == row.expr.coeffs[1..]) {
        // same direction: keep the tighter one
        let (a, b) = (&existing.expr.coeffs[0], &row.expr.coeffs[0]);
        if b < a || (b == a && row.strict) {
            *existing = row;
        }
        return true;
    }
    rows.push(row);
    true
}

/// Whether the system forces `c` everywhere it is satisfiable.
pub fn implies<T: Scalar>(system: &[LinearIneq<T>], c: &LinearIneq<T>) -> bool {
    let mut with_negation = system.to_vec();
    with_negation.push(c.negate());
    !feasible(&with_negation)
}
