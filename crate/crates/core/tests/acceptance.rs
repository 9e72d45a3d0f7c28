//! One line per acceptance criterion. Runs without the test harness so the
//! lines always reach the output; exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use setval_core::builtins::{ex2_1_d, ex2_1_t1, ex2_2_d, ex2_2_t1, ex2_2_t2, ex4_1_economy, radner_toy};
use setval_core::doc::{Document, MapDoc};
use setval_core::economy::{check_theorem_4_1, theorem_4_1_construction};
use setval_core::fixedpoint::ProductMap;
use setval_core::golden::{self, chain_inclusion, max_neighbor_excess, sum_clip_case, GoldenConfig};
use setval_core::maps::{check_usc, dual_map, PiecewiseMap, Resolution, Verdict};
use setval_core::radner::PriceSimplex;
use setval_core::sample::Sampler;
use setval_core::{BoxSet, Grid, Q};

fn r(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

fn line(step: Q) -> Grid<Q> {
    Grid::new(vec![r(0, 1)], vec![r(2, 1)], step).unwrap()
}

fn square(hi: i64, step: Q) -> Grid<Q> {
    Grid::new(vec![r(0, 1); 2], vec![r(hi, 1); 2], step).unwrap()
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn example_2_1() -> Outcome {
    let t1 = ex2_1_t1::<Q>().unwrap();
    let d = ex2_1_d::<Q>();
    let res = Resolution::one_step(line(r(1, 64)), Q::zero());
    let points = res.grid.points_in(t1.domain());
    for eps in [r(1, 10), r(1, 2), r(1, 1)] {
        let tu = t1.t_upper(&eps, &d).unwrap();
        if let Some(x) = points.iter().find(|x| tu.evaluate(x).unwrap() != d) {
            return outcome(false, format!("eps {eps}: value {} at {}", tu.evaluate(x).unwrap(), x[0]));
        }
        let adh = tu.adherence();
        let usc = check_usc(&adh, &res).unwrap();
        let excess = max_neighbor_excess(&adh, &res);
        if !usc.verdict.is_pass() || excess != Some(Q::zero()) {
            return outcome(false, format!("eps {eps}: adherence usc {} excess {excess:?}", usc.verdict));
        }
    }
    let usc = check_usc(&t1, &res).unwrap();
    let near = usc.witness_count > 0 && usc.witnesses.iter().all(|w| (w.point[0] - r(1, 1)).abs() <= r(1, 64));
    if usc.verdict != Verdict::Fail || !near {
        return outcome(false, format!("T1 usc {} with {} witnesses", usc.verdict, usc.witness_count));
    }
    outcome(
        true,
        format!("{{1}} at all {} points for eps 1/10, 1/2, 1; adherence excess 0; T1 witness at {}", points.len(), usc.witnesses[0].point[0]),
    )
}

fn example_2_2() -> Outcome {
    let (t1, t2, d) = (ex2_2_t1::<Q>().unwrap(), ex2_2_t2::<Q>().unwrap(), ex2_2_d::<Q>());
    let grid = line(r(1, 64));
    let points = grid.points_in(t1.domain());
    let two = BoxSet::point(&[r(2, 1)]);
    for eps in [r(1, 2), r(5, 2)] {
        let m = dual_map(&t1, &t2, &eps, &d).unwrap();
        let adh = m.adherence();
        if let Some(x) = points.iter().find(|x| adh.evaluate(x).unwrap() != two) {
            return outcome(false, format!("eps {eps}: adherence {} at {}", adh.evaluate(x).unwrap(), x[0]));
        }
    }
    let before = dual_map(&t1, &t2, &r(1, 2), &d).unwrap().evaluate(&[r(1, 1)]).unwrap();
    if !before.is_empty() {
        return outcome(false, format!("value at 1 before adherence is {before}"));
    }
    outcome(true, format!("adherence {{2}} at all {} points for eps 1/2, 5/2; value at x=1 empty before adherence", points.len()))
}

fn example_4_1() -> Outcome {
    let e = ex4_1_economy::<Q>(2).unwrap();
    let res = Resolution::one_step(square(4, r(1, 8)), Q::zero());
    let rep = check_theorem_4_1(&e, &[r(4, 1), r(2, 1), r(1, 2)], &res).unwrap();
    let failing: Vec<String> = rep
        .children
        .iter()
        .filter(|c| c.property.starts_with("condition-") && !c.verdict.is_pass())
        .map(|c| c.property.clone())
        .collect();
    let conditions = rep.children.iter().filter(|c| c.property.starts_with("condition-")).count();
    if conditions != 6 || !failing.is_empty() {
        return outcome(false, format!("{conditions} conditions, failing {failing:?}"));
    }
    let star = vec![r(3, 2), r(3, 2)];
    if !e.verify_equilibrium(&star).unwrap().valid {
        return outcome(false, "(3/2, 3/2) not certified");
    }
    let found = e.search_equilibria(&square(2, r(1, 8))).unwrap().points();
    let inside = found.iter().filter(|x| x.iter().all(|v| *v > r(0, 1) && *v < r(1, 1))).count();
    if !found.contains(&star) || inside > 0 {
        return outcome(false, format!("{} equilibria, star found {}, {inside} inside (0,1)^2", found.len(), found.contains(&star)));
    }
    outcome(true, format!("six conditions pass; (3/2,3/2) valid; {} equilibria on [0,2]^2, none in (0,1)^2", found.len()))
}

fn lemma_2_2() -> Outcome {
    let chain = [r(1, 1), r(1, 2), r(1, 4), r(1, 8)];
    let builtins = [(ex2_1_t1::<Q>().unwrap(), ex2_1_d::<Q>()), (ex2_2_t1().unwrap(), ex2_2_d()), (ex2_2_t2().unwrap(), ex2_2_d())];
    for (k, (t, d)) in builtins.iter().enumerate() {
        let res = chain_inclusion(t, d, &chain, &line(r(1, 64)), &Q::zero()).unwrap();
        if !res.witnesses.is_empty() {
            return outcome(false, format!("built-in {k}: {}", res.witnesses[0]));
        }
    }
    let mut sampler = Sampler::new(7);
    let mut worst = Q::zero();
    let mut points = 0;
    for k in 0..50 {
        let t: PiecewiseMap<Q> = sampler.piecewise_map(2, 4).unwrap();
        let d = sampler.compact(t.codomain_dim()).unwrap();
        let n = t.domain_dim();
        let step = if n == 1 { r(1, 64) } else { r(1, 16) };
        let grid = Grid::new(vec![r(0, 1); n], vec![r(1, 1); n], step).unwrap();
        let res = chain_inclusion(&t, &d, &chain, &grid, &step).unwrap();
        points += res.points;
        worst = worst.max(res.worst);
        if !res.witnesses.is_empty() {
            return outcome(false, format!("random map {k}: {}", res.witnesses[0]));
        }
    }
    outcome(
        true,
        format!("3 built-ins exact (tol 0); 50 random maps, {points} points, tol grid step beyond eps 1/8, worst {worst}"),
    )
}

fn lemma_2_1() -> Outcome {
    let mut sampler = Sampler::new(8);
    for k in 0..20 {
        let case = sum_clip_case::<Q>(&mut sampler, &r(1, 16), &Q::zero()).unwrap();
        if !check_usc(&case.s, &case.res).unwrap().verdict.is_pass() {
            return outcome(false, format!("case {k}: S fails"));
        }
        let usc = check_usc(&case.t, &case.res).unwrap();
        if !usc.verdict.is_pass() {
            return outcome(false, format!("case {k}: (S+C)∩K fails at {}", usc.witnesses[0]));
        }
    }
    outcome(true, "20 random cases pass check_usc at step 1/16, delta one step, tol 0")
}

fn reload(s: &ProductMap<Q>) -> ProductMap<Q> {
    let factors = s
        .factors()
        .iter()
        .map(|f| {
            let doc = Document::Map(MapDoc { name: String::new(), map: f.clone(), target: None, region: None, candidate: None, diagonal: None });
            match Document::<Q>::parse(&doc.to_text()).unwrap() {
                Document::Map(m) => m.map,
                _ => unreachable!(),
            }
        })
        .collect();
    ProductMap::new(factors, s.targets().to_vec()).unwrap()
}

/// Each Q_V recomputed point by point from the serialized factors.
fn oracle(s: &ProductMap<Q>, eps: Q, grid: &Grid<Q>) -> Vec<Vec<Q>> {
    let approx: Vec<PiecewiseMap<Q>> = s.factors().iter().zip(s.targets()).map(|(f, d)| f.t_upper(&eps, d).unwrap()).collect();
    grid.points_in(&s.target())
        .into_iter()
        .filter(|x| s.factors()[0].domain().contains(x))
        .filter(|x| approx.iter().enumerate().all(|(k, m)| m.adheres(x, &x[s.block(k)])))
        .collect()
}

fn theorem_3_1() -> Outcome {
    let chain = [r(1, 2), r(1, 4), r(1, 8), r(1, 16)];
    let first = ProductMap::new(vec![ex2_1_t1::<Q>().unwrap()], vec![ex2_1_d::<Q>()]).unwrap();
    let dual = ProductMap::new(vec![ex2_2_t1::<Q>().unwrap()], vec![ex2_2_d::<Q>()]).unwrap();
    let construction = theorem_4_1_construction(&ex4_1_economy::<Q>(2).unwrap()).unwrap();
    let cases = [("first", first, line(r(1, 64))), ("dual", dual, line(r(1, 64))), ("construction", construction, square(2, r(1, 8)))];
    let mut notes = Vec::new();
    for (name, s, grid) in &cases {
        let out = s.intersect_qv_chain(&chain, grid).unwrap();
        let fresh = reload(s);
        for q in &out.sets {
            if q.points != oracle(&fresh, q.eps, grid) {
                return outcome(false, format!("{name}: Q_V at eps {} differs from the oracle", q.eps));
            }
        }
        if !out.nesting_holds() {
            return outcome(false, format!("{name}: nesting fails"));
        }
        match *name {
            "first" => {
                if out.points.len() != 1 || out.points[0].point != vec![r(1, 1)] || !out.points[0].certified {
                    return outcome(false, format!("first: {} common points", out.points.len()));
                }
            }
            "construction" => {
                let near = out.certified().find(|p| p.point.iter().all(|v| (*v - r(3, 2)).abs() <= r(1, 8)));
                let Some(p) = near else { return outcome(false, "construction: no certified point near (3/2,3/2)") };
                notes.push(format!("construction certified ({}, {})", p.point[0], p.point[1]));
            }
            _ => {}
        }
    }
    outcome(true, format!("first example {{1}} certified; {}; nesting exact and oracle-equal on 3 built-ins", notes.join("")))
}

fn radner() -> Outcome {
    let e = radner_toy::<f64>().unwrap();
    let g = e.to_abstract_economy();
    let simplex = PriceSimplex::new(3, 8).unwrap();
    let inclusion = g.check_inclusion(&0.125, &simplex).unwrap();
    if !inclusion.verdict.is_pass() {
        return outcome(false, format!("inclusion fails: {}", inclusion.witnesses[0]));
    }
    let found = g.search(&0.125, &simplex).unwrap();
    for c in &found.certificates {
        let mc = g.verify_market_clearing(c, &1e-9, &0.125).unwrap();
        if !mc.clause1 {
            return outcome(false, format!("certificate fails clause (1): {c}"));
        }
    }
    outcome(
        true,
        format!(
            "A∩P ⊆ B at {} samples; {} certificates all clear componentwise (tol 1e-9)",
            inclusion.params.get("samples").cloned().unwrap_or_default(),
            found.certificates.len()
        ),
    )
}

fn reproduce() -> Outcome {
    let report = golden::run(&GoldenConfig::<f64>::standard()).unwrap();
    let failing: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    outcome(failing.is_empty(), format!("{} golden checks, failing {failing:?}", report.checks.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 8] = [
        ("example 2.1 golden", example_2_1, Duration::from_secs(1)),
        ("example 2.2 golden", example_2_2, Duration::from_secs(60)),
        ("example 4.1 golden", example_4_1, Duration::from_secs(10)),
        ("lemma 2.2 property suite", lemma_2_2, Duration::from_secs(60)),
        ("lemma 2.1 property suite", lemma_2_1, Duration::from_secs(60)),
        ("fixed-point scheme", theorem_3_1, Duration::from_secs(60)),
        ("radner pipeline", radner, Duration::from_secs(60)),
        ("reproduce-paper end to end", reproduce, Duration::from_secs(60)),
    ];
    let mut all = true;
    for (name, f, limit) in criteria {
        let t = Instant::now();
        let out = f();
        let elapsed = t.elapsed();
        let in_time = elapsed <= limit;
        let pass = out.pass && in_time;
        all &= pass;
        println!(
            "{} {name}: {} [{:.2}s, limit {}s{}]",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64(),
            limit.as_secs(),
            if in_time { "" } else { ", over time" }
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
