use num_traits::Zero;
use proptest::prelude::*;
use setval_core::doc::{Document, MapDoc};
use setval_core::maps::PiecewiseMap;
use setval_core::sample::Sampler;
use setval_core::{BoxSet, FlaggedBox, FlaggedInterval, Grid, Q};

fn sixteenth(k: i64) -> Q {
    Q::new(k, 16)
}

fn interval() -> impl Strategy<Value = FlaggedInterval<Q>> {
    (-32i64..32, 0i64..24, any::<bool>(), any::<bool>()).prop_map(|(lo, len, lc, hc)| {
        let (lc, hc) = if len == 0 { (true, true) } else { (lc, hc) };
        FlaggedInterval::new(sixteenth(lo), sixteenth(lo + len), lc, hc).unwrap()
    })
}

fn boxset(dim: usize) -> impl Strategy<Value = BoxSet<Q>> {
    prop::collection::vec(prop::collection::vec(interval(), dim), 0..4)
        .prop_map(move |boxes| BoxSet::from_boxes(dim, boxes.into_iter().map(FlaggedBox::new).collect()).unwrap())
}

fn point(dim: usize) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec((-40i64..40).prop_map(sixteenth), dim)
}

fn eps() -> impl Strategy<Value = Q> {
    (1i64..32).prop_map(sixteenth)
}

fn grid_for(map: &PiecewiseMap<Q>) -> Grid<Q> {
    let n = map.domain_dim();
    let step = if n == 1 { Q::new(1, 32) } else { Q::new(1, 8) };
    Grid::new(vec![Q::zero(); n], vec![Q::from_integer(1); n], step).unwrap()
}

proptest! {
    #[test]
    fn canonical_form_is_idempotent(s in boxset(2)) {
        let again = BoxSet::from_boxes(2, s.boxes().to_vec()).unwrap();
        prop_assert_eq!(&again, &s);
        prop_assert_eq!(BoxSet::<Q>::parse(2, &s.to_string()).unwrap(), s);
    }

    #[test]
    fn membership_follows_the_set_algebra(a in boxset(2), b in boxset(2), p in point(2)) {
        prop_assert_eq!(a.intersect(&b).unwrap().contains(&p), a.contains(&p) && b.contains(&p));
        prop_assert_eq!(a.union(&b).unwrap().contains(&p), a.contains(&p) || b.contains(&p));
        prop_assert_eq!(a.difference(&b).unwrap().contains(&p), a.contains(&p) && !b.contains(&p));
    }

    #[test]
    fn intersection_commutes_and_associates(a in boxset(2), b in boxset(2), c in boxset(2)) {
        prop_assert_eq!(a.intersect(&b).unwrap(), b.intersect(&a).unwrap());
        let left = a.intersect(&b).unwrap().intersect(&c).unwrap();
        let right = a.intersect(&b.intersect(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn dilation_grows_with_the_radius(s in boxset(2), e1 in eps(), e2 in eps()) {
        let (small, large) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let ds = s.dilate(&small).unwrap();
        prop_assert!(s.is_subset(&ds).unwrap());
        prop_assert!(ds.is_subset(&s.dilate(&large).unwrap()).unwrap());
    }

    #[test]
    fn excess_bounds(a in boxset(1), b in boxset(1), c in boxset(1), e in eps()) {
        prop_assume!(!a.is_empty() && !b.is_empty() && !c.is_empty());
        prop_assert_eq!(a.hausdorff_upper(&a).unwrap(), Q::zero());
        prop_assert!(a.dilate(&e).unwrap().hausdorff_upper(&a).unwrap() <= e);
        let ac = a.hausdorff_upper(&c).unwrap();
        prop_assert!(ac <= a.hausdorff_upper(&b).unwrap() + b.hausdorff_upper(&c).unwrap());
        prop_assert_eq!(a.hausdorff_upper(&a.union(&b).unwrap()).unwrap(), Q::zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn approximations_grow_with_eps(seed in any::<u64>(), e1 in eps(), e2 in eps()) {
        let mut sampler = Sampler::new(seed);
        let t: PiecewiseMap<Q> = sampler.piecewise_map(2, 4).unwrap();
        let d = sampler.compact(t.codomain_dim()).unwrap();
        let (small, large) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let (ts, tl) = (t.t_upper(&small, &d).unwrap(), t.t_upper(&large, &d).unwrap());
        for x in grid_for(&t).points() {
            prop_assert!(ts.evaluate(&x).unwrap().is_subset(&tl.evaluate(&x).unwrap()).unwrap(), "at {:?}", x);
        }
    }

    #[test]
    fn closure_of_values_lies_in_the_adherence(seed in any::<u64>()) {
        let t: PiecewiseMap<Q> = Sampler::new(seed).piecewise_map(2, 4).unwrap();
        let adh = t.adherence();
        let again = adh.adherence();
        for x in grid_for(&t).points() {
            let a = adh.evaluate(&x).unwrap();
            prop_assert!(t.evaluate(&x).unwrap().closure().is_subset(&a).unwrap(), "at {:?}", x);
            prop_assert_eq!(again.evaluate(&x).unwrap(), a);
        }
    }

    #[test]
    fn map_documents_round_trip(seed in any::<u64>()) {
        let t: PiecewiseMap<Q> = Sampler::new(seed).piecewise_map(2, 4).unwrap();
        let doc = Document::Map(MapDoc { name: "t".into(), map: t.clone(), target: None, region: None, candidate: None, diagonal: None });
        let Document::Map(back) = Document::<Q>::parse(&doc.to_text()).unwrap() else { panic!("kind changed") };
        prop_assert_eq!(back.map, t);
        let f: PiecewiseMap<f64> = Sampler::new(seed).piecewise_map(2, 4).unwrap();
        let doc = Document::Map(MapDoc { name: "t".into(), map: f.clone(), target: None, region: None, candidate: None, diagonal: None });
        let Document::Map(back) = Document::<f64>::parse(&doc.to_text()).unwrap() else { panic!("kind changed") };
        prop_assert_eq!(back.map, f);
    }
}
