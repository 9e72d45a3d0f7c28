//! The worked examples: two one-dimensional maps, a dual pair, and the
//! n-agent economy whose equilibrium sits at `(3/2, ..., 3/2)`.

use crate::doc::{Document, EconomyDoc, MapDoc, PairDoc};
use crate::economy::{AbstractEconomy, Agent};
use crate::error::Result;
use crate::linear::Affine;
use crate::maps::{constant_value, interval_value, AffineBox, AxisBounds, Bound, PiecewiseMap, Value};
use crate::radner::{InfoAgent, InfoEconomy, PriceSimplex, Signal};
use crate::scalar::Scalar;
use crate::sets::{BoxSet, FlaggedBox, FlaggedInterval};

fn iv<T: Scalar>(lo: T, hi: T, lo_closed: bool, hi_closed: bool) -> FlaggedInterval<T> {
    FlaggedInterval::new(lo, hi, lo_closed, hi_closed).expect("nonempty literal interval")
}

fn q<T: Scalar>(num: i64, den: i64) -> T {
    T::ratio(num, den)
}

fn line<T: Scalar>(lo: T, hi: T, lo_closed: bool, hi_closed: bool) -> BoxSet<T> {
    BoxSet::from_intervals(vec![iv(lo, hi, lo_closed, hi_closed)])
}

/// `T1` on `(0, 2)`: `(0, 1)` on `(0, 1]`, `[1, 2)` on `(1, 2)`.
pub fn ex2_1_t1<T: Scalar>() -> Result<PiecewiseMap<T>> {
    let domain = line(T::zero(), q(2, 1), false, false);
    PiecewiseMap::builder(domain, 1)
        .case(FlaggedBox::new(vec![iv(T::zero(), T::one(), false, true)]), constant_value(1, &iv(T::zero(), T::one(), false, false)))?
        .otherwise(constant_value(1, &iv(T::one(), q(2, 1), true, false)))
}

/// `D = {1}`.
pub fn ex2_1_d<T: Scalar>() -> BoxSet<T> {
    BoxSet::point(&[T::one()])
}

/// `T1` of the dual pair: `[2 - x, 2]` on `(0, 1)`, `{4}` at 1, `[1, 2]` on `(1, 2)`.
pub fn ex2_2_t1<T: Scalar>() -> Result<PiecewiseMap<T>> {
    let domain = line(T::zero(), q(2, 1), false, false);
    let two = q::<T>(2, 1);
    PiecewiseMap::builder(domain, 1)
        .case(
            FlaggedBox::new(vec![iv(T::zero(), T::one(), false, false)]),
            interval_value(Affine::new(vec![two.clone(), -T::one()]), true, Affine::constant(1, two.clone()), true),
        )?
        .case(FlaggedBox::point(&[T::one()]), constant_value(1, &FlaggedInterval::point(q(4, 1))))?
        .otherwise(constant_value(1, &iv(T::one(), two, true, true)))
}

/// `T2` of the dual pair: `[2, 3]` on `(0, 1]`, `{2}` on `(1, 2)`.
pub fn ex2_2_t2<T: Scalar>() -> Result<PiecewiseMap<T>> {
    let domain = line(T::zero(), q(2, 1), false, false);
    PiecewiseMap::builder(domain, 1)
        .case(FlaggedBox::new(vec![iv(T::zero(), T::one(), false, true)]), constant_value(1, &iv(q(2, 1), q(3, 1), true, true)))?
        .otherwise(constant_value(1, &FlaggedInterval::point(q(2, 1))))
}

/// `D = [1, 2]`.
pub fn ex2_2_d<T: Scalar>() -> BoxSet<T> {
    line(T::one(), q(2, 1), true, true)
}

/// The three maps of agent `i` in the n-agent example, on `X = [0, 4]^n`.
pub struct Ex41Agent<T> {
    pub a: PiecewiseMap<T>,
    pub b: PiecewiseMap<T>,
    pub p: PiecewiseMap<T>,
}

pub fn ex4_1_choice<T: Scalar>() -> FlaggedInterval<T> {
    iv(T::zero(), q(4, 1), true, true)
}

pub fn ex4_1_d<T: Scalar>() -> FlaggedInterval<T> {
    iv(T::zero(), q(2, 1), true, true)
}

pub fn ex4_1_agent<T: Scalar>(n: usize, i: usize) -> Result<Ex41Agent<T>> {
    let domain = BoxSet::from_box(FlaggedBox::cube(n, ex4_1_choice()));
    let origin = FlaggedBox::point(&vec![T::zero(); n]);
    let cube = |hi: T, lo_closed: bool| FlaggedBox::cube(n, iv(T::zero(), hi, lo_closed, false));
    let one_minus_xi = Affine::var(n, i, -T::one(), T::one());
    let two = Affine::constant(n, q::<T>(2, 1));

    let a = PiecewiseMap::builder(domain.clone(), 1)
        .case(origin.clone(), constant_value(n, &iv(q(3, 1), q(4, 1), true, true)))?
        .case(cube(q(1, 2), false), interval_value(one_minus_xi.clone(), true, two.clone(), true))?
        .case(cube(T::one(), false), interval_value(one_minus_xi, true, two, false))?
        .otherwise(constant_value(n, &iv(T::zero(), q(1, 2), true, true)))?;

    let p = PiecewiseMap::builder(domain.clone(), 1)
        .case(
            cube(T::one(), true),
            interval_value(Affine::constant(n, q(3, 2)), true, Affine::var(n, i, T::one(), q(2, 1)), true),
        )?
        .otherwise(constant_value(n, &iv(T::one(), q(2, 1), true, true)))?;

    let b = PiecewiseMap::builder(domain, 1)
        .case(origin, constant_value(n, &iv(q(3, 1), q(4, 1), true, true)))?
        .case(cube(T::one(), true), constant_value(n, &iv(T::zero(), q(2, 1), true, true)))?
        .otherwise(constant_value(n, &iv(T::zero(), q(2, 1), true, false)))?;

    Ok(Ex41Agent { a, b, p })
}

/// All `n` agents of the example, named `1..=n`, with `D_i = [0, 2]`.
pub fn ex4_1_economy<T: Scalar>(n: usize) -> Result<AbstractEconomy<T>> {
    let agents = (0..n)
        .map(|i| {
            let Ex41Agent { a, b, p } = ex4_1_agent(n, i)?;
            Ok(Agent {
                name: (i + 1).to_string(),
                choice: FlaggedBox::new(vec![ex4_1_choice()]),
                d: BoxSet::from_intervals(vec![ex4_1_d()]),
                a,
                b,
                p,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    AbstractEconomy::new(agents)
}

/// The dual pair as `(A_1, P_1)` of a one-agent economy with `B_1 = D_1 = [1, 2]`.
pub fn ex2_2_economy<T: Scalar>() -> Result<AbstractEconomy<T>> {
    let a = ex2_2_t1()?;
    let d = ex2_2_d();
    let b = PiecewiseMap::constant(a.domain().clone(), &d);
    AbstractEconomy::new(vec![Agent {
        name: "1".into(),
        choice: FlaggedBox::new(vec![iv(T::zero(), q(2, 1), false, false)]),
        d,
        p: ex2_2_t2()?,
        a,
        b,
    }])
}

/// Monotone preference `Q'_i(x) = ∏_k (x^i_k, M]` on `[0, M]^(n·d)`.
pub fn strict_improvement<T: Scalar>(n: usize, d: usize, i: usize, m: T) -> Result<PiecewiseMap<T>> {
    let total = n * d;
    let domain = BoxSet::from_box(FlaggedBox::cube(total, iv(T::zero(), m.clone(), true, true)));
    let axes = (0..d)
        .map(|k| {
            AxisBounds::new(
                Bound::new(Affine::var(total, i * d + k, T::one(), T::zero()), false),
                Bound::constant(total, m.clone(), true),
            )
        })
        .collect();
    PiecewiseMap::builder(domain, d).otherwise(Value::single(AffineBox::new(axes)))
}

/// Two agents, one good, two states. Agent 1 never tells the states apart;
/// agent 2 does exactly when the two state prices differ on the 1/8 price grid.
pub fn radner_toy<T: Scalar>() -> Result<InfoEconomy<T>> {
    let (n, d) = (2, 3);
    let m = q::<T>(1, 2);
    let revealing = PriceSimplex::new(d, 8)?
        .points::<T>()
        .into_iter()
        .filter(|p| p[1] != p[2])
        .map(|p| (p, vec![0, 1]))
        .collect();
    let agents = vec![
        InfoAgent {
            name: "1".into(),
            endowment: vec![q(1, 8), q(1, 8), q(1, 8)],
            signal: Signal::constant(vec![0, 0]),
            preference: strict_improvement(n, d, 0, m.clone())?,
        },
        InfoAgent {
            name: "2".into(),
            endowment: vec![q(1, 8), T::zero(), q(1, 8)],
            signal: Signal { default: vec![0, 0], by_price: revealing },
            preference: strict_improvement(n, d, 1, m.clone())?,
        },
    ];
    InfoEconomy::new("radner toy", 2, 1, agents, Some(m))
}

/// The shipped example documents, keyed by file name.
pub fn documents<T: Scalar>() -> Result<Vec<(&'static str, Document<T>)>> {
    Ok(vec![
        (
            "ex2_1.map",
            Document::Map(MapDoc {
                name: "example 2.1".into(),
                map: ex2_1_t1()?,
                target: Some(ex2_1_d()),
                region: None,
                candidate: None,
                diagonal: None,
            }),
        ),
        ("ex2_2.pair", Document::Pair(PairDoc { name: "example 2.2".into(), t1: ex2_2_t1()?, t2: ex2_2_t2()?, target: ex2_2_d() })),
        ("ex4_1_n2.econ", Document::Economy(EconomyDoc { name: "example 4.1, two agents".into(), economy: ex4_1_economy(2)? })),
        ("radner_toy.econ", Document::Radner(radner_toy()?)),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64 as Q;

    fn r(n: i64, d: i64) -> Q {
        Q::new(n, d)
    }

    #[test]
    fn example_values() {
        let t1 = ex2_1_t1::<f64>().unwrap();
        assert_eq!(t1.evaluate(&[0.5]).unwrap().to_string(), "(0, 1)");
        assert_eq!(t1.evaluate(&[1.0]).unwrap().to_string(), "(0, 1)");
        assert_eq!(t1.evaluate(&[1.5]).unwrap().to_string(), "[1, 2)");
        assert!(t1.evaluate(&[2.0]).is_err());
        let t = ex2_2_t1::<f64>().unwrap();
        assert_eq!(t.evaluate(&[0.5]).unwrap().to_string(), "[1.5, 2]");
        assert_eq!(t.evaluate(&[1.0]).unwrap().to_string(), "{4}");
    }

    #[test]
    fn agent_maps() {
        let ag = ex4_1_agent::<Q>(2, 0).unwrap();
        let at = |m: &PiecewiseMap<Q>, x: [Q; 2]| m.evaluate(&x).unwrap().to_string();
        assert_eq!(at(&ag.a, [r(1, 4), r(1, 4)]), "[3/4, 2]");
        assert_eq!(at(&ag.a, [r(3, 4), r(1, 4)]), "[1/4, 2)");
        assert_eq!(at(&ag.a, [r(0, 1), r(0, 1)]), "[3, 4]");
        assert_eq!(at(&ag.a, [r(0, 1), r(1, 2)]), "[0, 1/2]");
        assert_eq!(at(&ag.p, [r(0, 1), r(1, 2)]), "[3/2, 2]");
        assert_eq!(at(&ag.p, [r(1, 2), r(1, 2)]), "[3/2, 5/2]");
        assert_eq!(at(&ag.b, [r(3, 2), r(3, 2)]), "[0, 2)");
        assert_eq!(at(&ag.b, [r(1, 2), r(0, 1)]), "[0, 2]");
        let ap = ag.a.intersect_maps(&ag.p).unwrap();
        assert_eq!(at(&ap, [r(1, 4), r(1, 4)]), "[3/2, 2]");
        assert_eq!(at(&ap, [r(3, 4), r(1, 4)]), "[3/2, 2)");
        assert_eq!(at(&ap, [r(3, 2), r(3, 2)]), "∅");
        let adh = ap.adherence();
        assert_eq!(at(&adh, [r(1, 1), r(0, 1)]), "[3/2, 2]");
        assert_eq!(at(&adh, [r(1, 1), r(1, 1)]), "[3/2, 2]");
        assert_eq!(at(&adh, [r(1, 1), r(5, 4)]), "∅");
    }

    #[test]
    fn adherence_of_first_example() {
        let t1 = ex2_1_t1::<Q>().unwrap();
        let adh = t1.adherence();
        assert_eq!(adh.evaluate(&[r(1, 1)]).unwrap().to_string(), "[0, 2]");
        assert_eq!(adh.evaluate(&[r(1, 2)]).unwrap().to_string(), "[0, 1]");
        let tu = t1.t_upper(&r(1, 10), &ex2_1_d()).unwrap();
        for k in 1..128 {
            assert_eq!(tu.evaluate(&[r(k, 64)]).unwrap().to_string(), "{1}");
        }
    }
}
