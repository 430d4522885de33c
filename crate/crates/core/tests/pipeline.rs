use logrank_core::adcomb::BsgParams;
use logrank_core::approxdual::{
    base_case_dual, exact_dual_oracle, find_dual_pair, run_sequence, small_span_dual,
};
use logrank_core::f2core::{duality_measure, spectrum, F2Set};
use logrank_core::generators::{random_set, subspace, subspace_plus_noise, weight_slice};
use logrank_core::rational::ratio;
use logrank_core::Limits;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn weight_two_slice_gives_a_valid_but_small_pair() {
    let a = weight_slice(8, 2).unwrap();
    let tr = find_dual_pair(&a, &a, None, &Limits::default(), &BsgParams::default());
    let oracle = exact_dual_oracle(&a, &a, 28).unwrap();
    let p = tr.pair.as_ref().expect("pipeline pair");
    assert!(p.is_dual());
    assert!(p.area() <= oracle.area());
    assert!(oracle.area() * 4 < a.len() * a.len());
}

#[test]
fn subspace_pipeline_keeps_half() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..10 {
        let v = subspace(10, 3, &mut rng).unwrap();
        // V is self-orthogonal only by chance; pair it with its annihilator part.
        let b = F2Set::from_words(
            10,
            (0..1u64 << 10).filter(|&y| v.words().iter().all(|&x| (x & y).count_ones() % 2 == 0)),
        )
        .unwrap();
        assert!(duality_measure(&v, &b).unwrap().is_one());
        let tr = find_dual_pair(&v, &b, None, &Limits::default(), &BsgParams::default());
        let p = tr.pair.unwrap();
        assert!(2 * p.a.len() >= v.len());
        assert_eq!(p.b, b);
    }
}

#[test]
fn base_case_prunes_outliers() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let a = subspace_plus_noise(10, 4, 3, &mut rng).unwrap();
    let b = F2Set::from_words(10, [0]).unwrap();
    let st = run_sequence(&a, &b, &ratio(2, 1), &Limits::default()).unwrap();
    let base = base_case_dual(&st, &b, &Limits::default(), &BsgParams::default()).unwrap();
    assert!(base.pfr.span_size <= base.bsg.subset.len() as u128 || base.pfr.singleton_waiver);
    assert!(base.small_span.pair.is_dual());
}

#[test]
fn small_span_against_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut checked = 0;
    while checked < 20 {
        let v = subspace(8, 3, &mut rng).unwrap();
        let b = random_set(8, 12, &mut rng).unwrap();
        let spec = spectrum(&b, &ratio(1, 2), 20).unwrap().members;
        let a = v.intersection(&spec).unwrap();
        if a.is_empty() {
            continue;
        }
        let r = small_span_dual(&a, &b, &ratio(1, 2), &Limits::default()).unwrap();
        assert!(2 * r.pair.a.len() >= a.len());
        assert!(ratio(r.pair.b.len() as u64, 1) >= r.b_floor);
        assert!(exact_dual_oracle(&a, &b, 20).unwrap().area() >= r.pair.area());
        checked += 1;
    }
}

#[test]
fn fuzz_pairs_are_dual_and_dominated_by_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut produced = 0;
    for i in 0..120 {
        let n = rng.gen_range(3..=10);
        let a = random_set(n, rng.gen_range(1..=14.min(1 << n)), &mut rng).unwrap();
        let b = random_set(n, rng.gen_range(1..=14.min(1 << n)), &mut rng).unwrap();
        let k = if i % 2 == 0 {
            None
        } else {
            Some(ratio(rng.gen_range(2..6u64), 1))
        };
        let tr = find_dual_pair(
            &a,
            &b,
            k.as_ref(),
            &Limits::default(),
            &BsgParams {
                seed: i,
                samples: 12,
            },
        );
        if duality_measure(&a, &b).unwrap().is_zero() {
            assert!(tr.pair.is_none());
            continue;
        }
        if let Some(p) = &tr.pair {
            produced += 1;
            assert!(p.is_dual());
            assert!(p.a.is_subset(&a) && p.b.is_subset(&b));
            assert!(exact_dual_oracle(&a, &b, 20).unwrap().area() >= p.area());
            let st = tr.sequence.as_ref().unwrap();
            assert!(st.t <= st.t_bound);
            for lv in &tr.levels {
                assert!(lv.pair.a.is_subset(st.set(lv.level)));
            }
        } else {
            assert!(tr.failure.is_some());
        }
    }
    assert!(produced > 50);
}
