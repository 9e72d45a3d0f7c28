use num_rational::Rational64 as Q;
use setval_core::builtins::{ex2_2_economy, ex4_1_agent, ex4_1_choice, ex4_1_d, ex4_1_economy};
use setval_core::doc::{Document, EconomyDoc};
use setval_core::economy::{
    check_theorem_4_1, check_theorem_4_2, check_theorem_4_3, AbstractEconomy, Agent, SelectionChoice,
};
use setval_core::maps::{constant_value, CheckReport, PiecewiseMap, Resolution, Verdict, WitnessKind};
use setval_core::{BoxSet, FlaggedBox, FlaggedInterval, Grid};

fn r(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

fn square_res(step: Q) -> Resolution<Q> {
    Resolution::one_step(Grid::new(vec![r(0, 1); 2], vec![r(4, 1); 2], step).unwrap(), Q::from_integer(0))
}

fn target_grid(step: Q) -> Grid<Q> {
    Grid::new(vec![r(0, 1); 2], vec![r(2, 1); 2], step).unwrap()
}

fn in_open_unit_square(x: &[Q]) -> bool {
    x.iter().all(|v| *v > r(0, 1) && *v < r(1, 1))
}

/// Equilibria of the two-agent example, derived by hand from the case split:
/// `B̄_i ⊇ [0, 2]` everywhere and `A_i ∩ P_i` is nonempty exactly on `(0, 1)^2`.
fn oracle(x: &[Q]) -> bool {
    x.iter().all(|v| *v >= r(0, 1) && *v <= r(2, 1)) && !in_open_unit_square(x)
}

fn condition(rep: &CheckReport<Q>, k: usize) -> &CheckReport<Q> {
    rep.child(&format!("condition-{k}")).unwrap_or_else(|| panic!("no condition-{k} in\n{rep}"))
}

#[test]
fn stated_equilibrium_verifies() {
    let e = ex4_1_economy::<Q>(2).unwrap();
    let cert = e.verify_equilibrium(&[r(3, 2), r(3, 2)]).unwrap();
    assert!(cert.valid, "{cert}");
    for a in &cert.agents {
        assert_eq!(a.b_value.to_string(), "[0, 2]");
        assert!(a.ap_empty);
    }
    let cert = e.verify_equilibrium(&[r(1, 4), r(1, 4)]).unwrap();
    assert!(!cert.valid);
    assert!(cert.agents.iter().all(|a| a.ap_value.to_string() == "[3/2, 2]"));
    assert!(e.verify_equilibrium(&[r(5, 1), r(0, 1)]).is_err());
}

#[test]
fn search_matches_the_oracle() {
    let e = ex4_1_economy::<Q>(2).unwrap();
    let grid = target_grid(r(1, 8));
    let found = e.search_equilibria(&grid).unwrap();
    assert_eq!(found.scanned, 17 * 17);
    let expected: Vec<Vec<Q>> = grid.points().filter(|x| oracle(x)).collect();
    assert_eq!(found.points(), expected);
    assert!(found.points().contains(&vec![r(3, 2), r(3, 2)]));
    assert!(!found.points().iter().any(|x| in_open_unit_square(x)));
    // every grid point off the list fails verification
    for x in grid.points() {
        assert_eq!(e.verify_equilibrium(&x).unwrap().valid, expected.contains(&x));
    }
}

#[test]
fn certificates_survive_a_round_trip() {
    let e = ex4_1_economy::<Q>(2).unwrap();
    let text = Document::Economy(EconomyDoc { name: "ex4.1".into(), economy: e.clone() }).to_text();
    let Document::Economy(fresh) = Document::<Q>::parse(&text).unwrap() else { panic!("wrong kind") };
    assert_eq!(fresh.economy, e);
    for x in target_grid(r(1, 4)).points() {
        assert_eq!(e.verify_equilibrium(&x).unwrap().valid, fresh.economy.verify_equilibrium(&x).unwrap().valid);
    }
}

fn interval(lo: Q, hi: Q) -> FlaggedInterval<Q> {
    FlaggedInterval::closed(lo, hi).unwrap()
}

fn trivial_economy(b: impl Fn(&BoxSet<Q>, usize) -> PiecewiseMap<Q>) -> AbstractEconomy<Q> {
    let choice = FlaggedBox::new(vec![interval(r(0, 1), r(1, 1))]);
    let domain = BoxSet::from_box(FlaggedBox::cube(2, interval(r(0, 1), r(1, 1))));
    let agents = (0..2)
        .map(|i| Agent {
            name: format!("{}", i + 1),
            choice: choice.clone(),
            d: BoxSet::from_box(choice.clone()),
            a: b(&domain, i),
            b: b(&domain, i),
            p: PiecewiseMap::constant(domain.clone(), &BoxSet::empty(1)),
        })
        .collect();
    AbstractEconomy::new(agents).unwrap()
}

#[test]
fn empty_preferences_make_every_point_an_equilibrium() {
    let e = trivial_economy(|dom, _| PiecewiseMap::constant(dom.clone(), &BoxSet::from_intervals(vec![interval(r(0, 1), r(1, 1))])));
    let grid = Grid::new(vec![r(0, 1); 2], vec![r(1, 1); 2], r(1, 4)).unwrap();
    assert_eq!(e.search_equilibria(&grid).unwrap().certificates.len(), 25);
}

#[test]
fn unreachable_budgets_have_no_equilibrium() {
    // B_i(x) = {x_i + 2} never holds x_i
    let e = trivial_economy(|dom, i| {
        let mut shifted = setval_core::linear::Affine::constant(2, r(2, 1));
        shifted = shifted.add(&setval_core::linear::Affine::var(2, i, r(1, 1), r(0, 1)));
        PiecewiseMap::interval_map(dom.clone(), shifted.clone(), shifted).unwrap()
    });
    let grid = Grid::new(vec![r(0, 1); 2], vec![r(1, 1); 2], r(1, 4)).unwrap();
    let out = e.search_equilibria(&grid).unwrap();
    assert!(out.certificates.is_empty());
    assert_eq!(out.scanned, 25);
}

#[test]
fn closed_graph_budgets_need_no_adherence() {
    use setval_core::linear::Affine;
    // A = B = [0, 1 + x_1/2] on the closed square has a closed graph
    let e = trivial_economy(|dom, _| {
        PiecewiseMap::interval_map(dom.clone(), Affine::constant(2, r(0, 1)), Affine::var(2, 0, r(1, 2), r(1, 1))).unwrap()
    });
    let prepared = e.prepare().unwrap();
    for x in Grid::new(vec![r(0, 1); 2], vec![r(1, 1); 2], r(1, 8)).unwrap().points() {
        let cert = prepared.verify(&x).unwrap();
        for (i, ag) in e.agents().iter().enumerate() {
            assert_eq!(cert.agents[i].b_value, ag.b.evaluate(&x).unwrap().closure());
            assert_eq!(ag.b.adherence().evaluate(&x).unwrap(), ag.b.evaluate(&x).unwrap());
        }
    }
}

#[test]
fn example_satisfies_the_first_theorem() {
    let e = ex4_1_economy::<Q>(2).unwrap();
    let rep = check_theorem_4_1(&e, &[r(4, 1), r(2, 1), r(1, 2)], &square_res(r(1, 8))).unwrap();
    for k in 1..=6 {
        assert_eq!(condition(&rep, k).verdict, Verdict::Pass, "condition {k}\n{rep}");
    }
    assert_eq!(rep.verdict, Verdict::Pass);
}

fn with_agent0(e: &AbstractEconomy<Q>, f: impl FnOnce(&mut Agent<Q>)) -> AbstractEconomy<Q> {
    let mut agents = e.agents().to_vec();
    f(&mut agents[0]);
    AbstractEconomy::new(agents).unwrap()
}

#[test]
fn first_theorem_catches_reflexive_preferences() {
    let e = ex4_1_economy::<Q>(2).unwrap();
    // A ∩ P = [0, 2] everywhere, so x_1 is always adherent
    let bad = with_agent0(&e, |ag| {
        let whole = BoxSet::from_intervals(vec![ex4_1_d()]);
        ag.p = PiecewiseMap::constant(ag.p.domain().clone(), &whole);
        ag.a = ag.p.clone();
        ag.b = ag.p.clone();
    });
    let rep = check_theorem_4_1(&bad, &[r(1, 1), r(1, 2)], &square_res(r(1, 4))).unwrap();
    let c6 = condition(&rep, 6);
    assert_eq!(c6.verdict, Verdict::Fail);
    assert!(c6.find("agent 1").unwrap().witnesses.iter().all(|w| w.kind == WitnessKind::OnDiagonal));
    assert_eq!(c6.find("agent 2").unwrap().verdict, Verdict::Pass);
}

#[test]
fn first_theorem_catches_nonconvex_constraints() {
    let e = ex4_1_economy::<Q>(2).unwrap();
    let bad = with_agent0(&e, |ag| {
        let two = BoxSet::parse(1, "[0, 1/2] | [3, 4]").unwrap();
        ag.a = PiecewiseMap::constant(ag.a.domain().clone(), &two);
    });
    let rep = check_theorem_4_1(&bad, &[r(1, 1), r(1, 2)], &square_res(r(1, 4))).unwrap();
    assert_eq!(condition(&rep, 2).verdict, Verdict::Fail);
    let w = &condition(&rep, 2).find("A convex").unwrap().witnesses[0];
    assert_eq!(w.kind, WitnessKind::NonConvex);
}

#[test]
fn second_theorem_on_the_dual_pair() {
    let e = ex2_2_economy::<Q>().unwrap();
    let res = Resolution::one_step(Grid::new(vec![r(0, 1)], vec![r(2, 1)], r(1, 64)).unwrap(), Q::from_integer(0));
    let rep = check_theorem_4_2(&e, &[r(5, 2), r(1, 2)], &res).unwrap();
    assert_eq!(condition(&rep, 4).verdict, Verdict::Pass, "{rep}");
    // P = [2, 3] on (0, 1] leaves D = [1, 2]
    assert_eq!(condition(&rep, 2).verdict, Verdict::Fail);
    // D = [1, 2] is not inside X = (0, 2)
    assert_eq!(condition(&rep, 1).verdict, Verdict::Fail);
}

#[test]
fn second_theorem_rejects_the_first_example() {
    let e = ex4_1_economy::<Q>(2).unwrap();
    let rep = check_theorem_4_2(&e, &[r(1, 1), r(1, 2)], &square_res(r(1, 8))).unwrap();
    let c2 = condition(&rep, 2);
    assert_eq!(c2.verdict, Verdict::Fail);
    // P_i = [3/2, 2 + x_i] on [0, 1)^2 exceeds D_i = [0, 2] once x_i > 0
    let sub = c2.find("agent 1").unwrap().find("P ⊆ D").unwrap();
    assert!(sub.witnesses.iter().all(|w| w.point[0] > r(0, 1) && w.point[0] < r(1, 1) && w.point[1] < r(1, 1)));
    assert!(sub.witness_count > 0);
}

#[test]
fn third_theorem_selection_condition() {
    let e = ex4_1_economy::<Q>(2).unwrap();
    let res = square_res(r(1, 16));
    let domain = e.domain().clone();
    let candidate = PiecewiseMap::constant(domain, &BoxSet::from_intervals(vec![interval(r(3, 2), r(2, 1))]));
    let given = vec![SelectionChoice::Given(candidate.clone()), SelectionChoice::Given(candidate)];
    let rep = check_theorem_4_3(&e, &[r(1, 2), r(1, 4)], &given, &res).unwrap();
    assert_eq!(condition(&rep, 4).verdict, Verdict::Pass, "{rep}");
    assert_eq!(condition(&rep, 3).verdict, Verdict::Pass);
    assert_eq!(condition(&rep, 1).verdict, Verdict::Pass);
    // cl B_i jumps from [0, 2] to [3, 4] at the origin
    assert_eq!(condition(&rep, 2).verdict, Verdict::Fail);

    let heuristic = vec![SelectionChoice::Heuristic, SelectionChoice::Heuristic];
    let rep = check_theorem_4_3(&e, &[r(1, 2)], &heuristic, &res).unwrap();
    assert_eq!(condition(&rep, 4).verdict, Verdict::Pass, "{rep}");
}

#[test]
fn third_theorem_without_a_selection_is_unverified() {
    // A ∩ P = [0, 1] on W = (0, 1)^2 meets the diagonal, so no constant selection exists
    let e = ex4_1_economy::<Q>(2).unwrap();
    let bad = with_agent0(&e, |ag| {
        let n = 2;
        let w = BoxSet::from_box(FlaggedBox::cube(n, FlaggedInterval::open(r(0, 1), r(1, 1)).unwrap()));
        let unit = constant_value(n, &interval(r(0, 1), r(1, 1)));
        ag.p = PiecewiseMap::builder(ag.p.domain().clone(), 1)
            .case_set(&w, unit.clone())
            .unwrap()
            .otherwise(constant_value(n, &interval(r(3, 1), r(4, 1))))
            .unwrap();
        ag.a = PiecewiseMap::constant(ag.a.domain().clone(), &BoxSet::from_intervals(vec![interval(r(0, 1), r(2, 1))]));
    });
    let heuristic = vec![SelectionChoice::Heuristic, SelectionChoice::Heuristic];
    let rep = check_theorem_4_3(&bad, &[r(1, 2)], &heuristic, &square_res(r(1, 8))).unwrap();
    let c4 = condition(&rep, 4);
    assert_eq!(c4.find("agent 1").unwrap().verdict, Verdict::Unverified, "{rep}");
    assert_eq!(c4.verdict, Verdict::Unverified);
}

#[test]
fn single_agent_matches_the_agent_helper() {
    let one = ex4_1_economy::<Q>(1).unwrap();
    let ag = ex4_1_agent::<Q>(1, 0).unwrap();
    assert_eq!(one.agents()[0].b, ag.b);
    assert_eq!(one.agents()[0].choice.sides(), &[ex4_1_choice()]);
    let found = one.search_equilibria(&Grid::new(vec![r(0, 1)], vec![r(2, 1)], r(1, 8)).unwrap()).unwrap();
    assert!(found.points().iter().all(|x| !in_open_unit_square(x)));
    assert!(found.points().contains(&vec![r(3, 2)]));
}
