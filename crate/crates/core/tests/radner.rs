use num_rational::Rational64 as Q;
use num_traits::Signed;
use setval_core::builtins::{radner_toy, strict_improvement};
use setval_core::radner::{InfoAgent, InfoEconomy, PriceSimplex, Signal};
use setval_core::Scalar;

fn r(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

fn qs(v: &[(i64, i64)]) -> Vec<Q> {
    v.iter().map(|&(n, d)| r(n, d)).collect()
}

fn single(states: usize, endowment: Vec<Q>, labels: Vec<usize>, m: Option<Q>) -> InfoEconomy<Q> {
    let d = endowment.len();
    let bound = m.unwrap_or(r(100, 1));
    let agent = InfoAgent {
        name: "1".into(),
        endowment,
        signal: Signal::constant(labels),
        preference: strict_improvement(1, d, 0, bound).unwrap(),
    };
    InfoEconomy::new("single", states, 1, vec![agent], m).unwrap()
}

#[test]
fn budget_membership_is_strict() {
    let e = single(1, qs(&[(1, 1), (1, 1)]), vec![0], Some(r(4, 1)));
    let p = qs(&[(1, 2), (1, 2)]);
    assert!(e.in_budget(0, &p, &qs(&[(1, 2), (1, 2)])));
    assert!(!e.in_budget(0, &p, &qs(&[(1, 1), (1, 1)])));
    let cover = e.budget_set(0, &p, 4).unwrap();
    for y in [qs(&[(1, 2), (1, 2)]), qs(&[(0, 1), (19, 10)]), qs(&[(19, 10), (0, 1)])] {
        assert!(cover.contains(&y), "{cover} misses {y:?}");
    }
    assert!(cover.contains(&qs(&[(2, 1), (0, 1)])));
    assert!(!cover.contains(&qs(&[(4, 1), (0, 1)])));
    assert!(!cover.contains(&qs(&[(0, 1), (4, 1)])));

    let zero_wealth = single(1, qs(&[(1, 1), (0, 1)]), vec![0], Some(r(4, 1)));
    let p = qs(&[(0, 1), (1, 1)]);
    assert!(zero_wealth.budget(0, &p).is_empty());
    assert!(zero_wealth.budget_set(0, &p, 4).unwrap().is_empty());

    let three = single(2, qs(&[(1, 1), (2, 1), (3, 1)]), vec![0, 1], None);
    let p = qs(&[(1, 3), (1, 3), (1, 3)]);
    // 1/3·(1+1+1) = 1 < 1/3·(1+2+3) = 2
    assert!(three.in_budget(0, &p, &qs(&[(1, 1), (1, 1), (1, 1)])));
    assert_eq!(*three.truncation(), r(6, 1));
}

#[test]
fn truncation_must_cover_the_endowment() {
    let agent = InfoAgent {
        name: "1".into(),
        endowment: qs(&[(1, 1), (3, 1)]),
        signal: Signal::constant(vec![0]),
        preference: strict_improvement(1, 2, 0, r(2, 1)).unwrap(),
    };
    let err = InfoEconomy::new("small", 1, 1, vec![agent], Some(r(2, 1))).unwrap_err();
    assert!(err.to_string().contains("truncation too small"), "{err}");
}

/// `y` respects the signal iff equal labels imply equal consumption.
fn measurable(labels: &[usize], y: &[Q]) -> bool {
    (0..labels.len()).all(|s| (0..labels.len()).all(|t| labels[s] != labels[t] || y[1 + s] == y[1 + t]))
}

#[test]
fn information_sets_follow_the_partition() {
    let bundles: Vec<Vec<Q>> = (0..4)
        .flat_map(|a| (0..4).flat_map(move |b| (0..4).map(move |c| vec![r(1, 1), r(a, 1), r(b, 1), r(c, 1)])))
        .collect();
    let p = qs(&[(1, 4), (1, 4), (1, 4), (1, 4)]);
    for labels in [vec![0, 1, 2], vec![0, 0, 1], vec![0, 0, 0], vec![0, 1, 0]] {
        let e = single(3, qs(&[(1, 1), (1, 1), (1, 1), (1, 1)]), labels.clone(), Some(r(4, 1)));
        let info = e.information(0, &p);
        for y in &bundles {
            assert_eq!(e.in_information(0, &p, y, &Q::from_integer(0)), measurable(&labels, y), "{labels:?} {y:?}");
            assert_eq!(info.contains(y), measurable(&labels, y));
        }
    }
    let pooled = single(3, qs(&[(1, 1), (1, 1), (1, 1), (1, 1)]), vec![0, 0, 1], Some(r(4, 1)));
    assert!(pooled.in_information(0, &p, &qs(&[(1, 1), (2, 1), (2, 1), (3, 1)]), &Q::from_integer(0)));
    assert!(!pooled.in_information(0, &p, &qs(&[(1, 1), (2, 1), (3, 1), (3, 1)]), &Q::from_integer(0)));
}

#[test]
fn refining_a_signal_never_shrinks_the_information_set() {
    let p = qs(&[(1, 4), (1, 4), (1, 4), (1, 4)]);
    let coarse = single(3, qs(&[(1, 1), (1, 1), (1, 1), (1, 1)]), vec![0, 0, 0], Some(r(4, 1)));
    let fine = single(3, qs(&[(1, 1), (1, 1), (1, 1), (1, 1)]), vec![0, 0, 1], Some(r(4, 1)));
    assert!(coarse.information(0, &p).is_subset(&fine.information(0, &p)));
    assert!(!fine.information(0, &p).is_subset(&coarse.information(0, &p)));
}

#[test]
fn delivery_compares_within_signal_classes() {
    let p = qs(&[(0, 1), (1, 2), (1, 2)]);
    let pooled = single(2, qs(&[(1, 1), (1, 1), (1, 1)]), vec![0, 0], Some(r(4, 1)));
    // p_1·y(1) = 1/2 ≤ 3/2 holds but p_2·y(2) = 3/2 ≤ 1/2 does not
    assert!(!pooled.delivery_contains(0, &p, &qs(&[(1, 1), (3, 1)])));
    assert!(pooled.delivery_contains(0, &p, &qs(&[(2, 1), (2, 1)])));
    let revealing = single(2, qs(&[(1, 1), (1, 1), (1, 1)]), vec![0, 1], Some(r(4, 1)));
    assert!(revealing.delivery_contains(0, &p, &qs(&[(1, 1), (3, 1)])));
}

#[test]
fn price_player_is_satisfied_exactly_at_vertex_maxima() {
    let e = single(1, qs(&[(1, 4), (1, 4)]), vec![0], Some(r(1, 1)));
    let g = e.to_abstract_economy();
    let fine: Vec<Vec<Q>> = PriceSimplex::new(2, 64).unwrap().points();
    let steps: Vec<Q> = (0..=8).map(|k| r(k, 8)).collect();
    for p in PriceSimplex::new(2, 8).unwrap().points::<Q>() {
        for a in &steps {
            for b in &steps {
                let x = vec![*a, *b];
                let z = [*a - r(1, 4), *b - r(1, 4)];
                let pz = p[0] * z[0] + p[1] * z[1];
                // brute force over a fine price grid that includes the vertices
                let oracle = fine.iter().all(|q| q[0] * z[0] + q[1] * z[1] <= pz);
                assert_eq!(g.price_preference_empty(&x, &p), oracle, "x {x:?} p {p:?}");
                for q in &fine {
                    assert_eq!(g.price_prefers(&x, &p, q), q[0] * z[0] + q[1] * z[1] > pz);
                }
            }
        }
    }
    // being below the endowment is not enough
    assert!(!g.price_preference_empty(&qs(&[(1, 4), (0, 1)]), &qs(&[(1, 2), (1, 2)])));
}

#[test]
fn fully_revealing_signals_leave_the_budget_unchanged() {
    let e = single(2, qs(&[(1, 1), (1, 1), (1, 1)]), vec![0, 1], Some(r(4, 1)));
    let g = e.to_abstract_economy();
    for p in PriceSimplex::new(3, 4).unwrap().points::<Q>() {
        assert!(g.a(0, &p).is_subset(&g.b(0, &p)));
        assert!(g.b(0, &p).is_subset(&g.a(0, &p)));
    }
}

#[test]
fn budget_adherence_at_zero_wealth() {
    let e = radner_toy::<Q>().unwrap();
    // agent 2 owns nothing in state 1; at p = (0, 1, 0) the budget is empty
    let p = qs(&[(0, 1), (1, 1), (0, 1)]);
    assert!(e.budget(1, &p).is_empty());
    // but bundles with p·y = 0 are limits of budget points at nearby prices
    assert!(e.budget_adheres(1, &p, &qs(&[(1, 8), (0, 1), (1, 8)]), false));
    assert!(e.budget_adheres(1, &p, &qs(&[(1, 2), (0, 1), (0, 1)]), false));
    assert!(!e.budget_adheres(1, &p, &qs(&[(1, 2), (0, 1), (1, 2)]), false));
    assert!(!e.budget_adheres(1, &p, &qs(&[(0, 1), (1, 8), (0, 1)]), false));

    // sampled neighbourhoods of (p, y) agree with the closed form on the whole grid
    let near: Vec<Vec<Q>> = PriceSimplex::new(3, 1000)
        .unwrap()
        .points::<Q>()
        .into_iter()
        .filter(|q| q.iter().zip(&p).all(|(a, b)| (*a - *b).abs() <= r(3, 1000)))
        .collect();
    let offsets: Vec<Q> = (-2..=2).map(|k| r(k, 1000)).collect();
    let endow = &e.agents()[1].endowment;
    for a in 0..=4 {
        for b in 0..=4 {
            for c in 0..=4 {
                let y = [r(a, 8), r(b, 8), r(c, 8)];
                let mut found = false;
                'search: for q in &near {
                    for da in &offsets {
                        for db in &offsets {
                            for dc in &offsets {
                                let y2 = [y[0] + da, y[1] + db, y[2] + dc];
                                if y2.iter().all(|v| *v >= r(0, 1) && *v <= r(1, 2))
                                    && (0..3).map(|k| q[k] * y2[k]).sum::<Q>() < (0..3).map(|k| q[k] * endow[k]).sum::<Q>()
                                {
                                    found = true;
                                    break 'search;
                                }
                            }
                        }
                    }
                }
                assert_eq!(e.budget_adheres(1, &p, &y, false), found, "{y:?}");
            }
        }
    }
}

#[test]
fn autarky_clears_the_market() {
    let e = radner_toy::<Q>().unwrap();
    let g = e.to_abstract_economy();
    let x: Vec<Q> = e.agents().iter().flat_map(|a| a.endowment.clone()).collect();
    // unequal state prices reveal the state to agent 2, whose endowment differs across states
    let p = qs(&[(1, 2), (1, 8), (3, 8)]);
    let cert = g.verify(&x, &p).unwrap();
    assert!(cert.valid, "{cert}");
    let mc = g.verify_market_clearing(&cert, &Q::from_integer(0), &r(1, 8)).unwrap();
    assert!(mc.valid, "{}", mc.to_record());
    assert!(mc.excess.iter().all(|v| *v == Q::from_integer(0)));

    let mut over = cert.clone();
    over.allocation[0] = r(1, 4);
    let mc = g.verify_market_clearing(&over, &Q::from_integer(0), &r(1, 8)).unwrap();
    assert!(!mc.clause1);
    assert_eq!(mc.basis, vec![false, true, true]);
}

#[test]
fn equilibria_of_the_toy_clear_the_market() {
    let e = radner_toy::<f64>().unwrap();
    let g = e.to_abstract_economy();
    let simplex = PriceSimplex::new(3, 8).unwrap();
    let found = g.search(&0.125, &simplex).unwrap();
    assert_eq!(found.scanned, 125 * 125 * 45);
    assert!(!found.certificates.is_empty());
    for c in &found.certificates {
        let mc = g.verify_market_clearing(c, &1e-9, &0.125).unwrap();
        assert!(mc.clause1, "{c}");
        assert!(mc.closure_of_both.iter().all(|&b| b));
        // the Display form round-trips through the scalar parser
        assert!(c.price.iter().all(|v| f64::parse_scalar(&v.to_string()) == Some(*v)));
    }
    let inclusion = g.check_inclusion(&0.125, &simplex).unwrap();
    assert!(inclusion.verdict.is_pass(), "{inclusion}");
}
