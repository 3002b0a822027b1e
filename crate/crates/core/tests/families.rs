mod common;

use num_traits::Zero;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use common::*;
use qmapk::cmdeg::{default_samples, make_pencil, DivClass, Verdict};
use qmapk::divisor::max_multiplicity;
use qmapk::elliptic::{kodaira_type, Adiabatic, KodairaType};
use qmapk::field::{int, rat};
use qmapk::{Rat, Stability};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn cm_degree_invariant_under_fiber_coordinates(seed in any::<u64>()) {
        let g = &mut rng(seed);
        let p = random_pencil(g);
        prop_assume!(p.is_some());
        let p = p.unwrap();
        let m = random_mobius(g);
        let moved = p.transform_fibers(&m);
        prop_assert_eq!(moved.cm_degree(), p.cm_degree());
        for pt in default_samples(3) {
            if let (Ok(a), Ok(b)) = (p.fiber_at(&pt), moved.fiber_at(&pt)) {
                prop_assert_eq!(a.classify().class, b.classify().class);
            }
        }
    }

    #[test]
    fn cm_degree_is_quadratic_in_weight(seed in any::<u64>()) {
        let g = &mut rng(seed);
        let p = random_pencil(g);
        prop_assume!(p.is_some());
        let p = p.unwrap();
        let (m, k) = (p.degree() as i64, p.base_degree() as i64);
        // −(K + B + uL)² expanded by hand
        let mut kb = DivClass::new(int(-2), int(0));
        for (b, c) in p.boundary() {
            let (bp, bq) = b.bidegree();
            kb = kb.add(&DivClass::of_bidegree(bp, bq).scale(c));
        }
        let l = DivClass::of_bidegree(m as usize, k as usize);
        for u in [rat(1, 7), rat(1, 3), rat(5, 4)] {
            let pu = make_pencil(p.degree(), p.base_degree(), u.clone(), p.sections().to_vec(), p.boundary().to_vec()).unwrap();
            let expected = -(kb.dot(&kb) + int(2) * &u * kb.dot(&l) + &u * &u * int(2 * m * k));
            prop_assert_eq!(pu.cm_degree(), expected);
        }
    }

    #[test]
    fn cm_degree_nonnegative_under_hypothesis(seed in any::<u64>()) {
        let g = &mut rng(seed);
        let p = random_pencil(g);
        prop_assume!(p.is_some());
        let rep = p.unwrap().nefness_probe(&default_samples(6)).unwrap();
        if rep.hypothesis {
            prop_assert!(rep.degree >= Rat::zero());
            prop_assert_eq!(rep.verdict, Verdict::Consistent);
        } else {
            prop_assert_eq!(rep.verdict, Verdict::HypothesisNotMet);
        }
    }

    #[test]
    fn elliptic_identities(seed in any::<u64>()) {
        let g = &mut rng(seed);
        let plant = *PLANTS.choose(g).unwrap();
        let w = random_weierstrass(g, plant);
        prop_assume!(w.is_some());
        let w = w.unwrap();
        let profile = w.kodaira_profile().unwrap();
        let total: u32 = profile.iter().map(|e| e.cluster.degree() as u32 * e.ord_delta).sum();
        prop_assert_eq!(total, 12);
        for e in &profile {
            let three_a = e.ord_a.map_or(u32::MAX, |a| 3 * a);
            prop_assert_eq!(int(three_a.min(e.ord_delta) as i64), int(12) * (int(1) - &e.lct));
        }
        let (disc, moduli) = w.discriminant_divisor().unwrap();
        prop_assert_eq!(disc.degree() + moduli, int(1));
        let q = w.associated_quasimap().unwrap();
        let (fixed, _) = q.fixed_movable();
        prop_assert_eq!(fixed.scale(q.weight()), disc.clone());
        let expected = match w.adiabatic_kstable().unwrap() {
            Adiabatic::StrictlyStable => vec![Stability::Stable],
            Adiabatic::StrictlySemistableOnly => vec![Stability::Semistable, Stability::Polystable],
            Adiabatic::Unstable => vec![Stability::Unstable, Stability::NotFano],
        };
        prop_assert!(expected.contains(&q.classify().class));
        prop_assert_eq!(max_multiplicity(&q.twisted_boundary()).0, max_multiplicity(&disc).0);
    }

    #[test]
    fn elliptic_report_round_trip(seed in any::<u64>()) {
        let g = &mut rng(seed);
        let w = random_weierstrass(g, Plant::Generic);
        prop_assume!(w.is_some());
        let w = w.unwrap();
        let text = serde_json::to_string(&w).unwrap();
        let back: qmapk::elliptic::WeierstrassModel = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &w);
        let a = serde_json::to_string(&w.analyze().unwrap()).unwrap();
        let b = serde_json::to_string(&back.analyze().unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }
}

/// Every consistent order triple of a minimal model, checked against
/// min(3·ordA, ordΔ) = 12·(1 − lct).
#[test]
fn kodaira_table_fixed_part_identity() {
    let mut seen = std::collections::BTreeSet::new();
    for oa in (0..=4).map(Some).chain([None]) {
        for ob in (0..=6).map(Some).chain([None]) {
            let (ta, tb) = (oa.map_or(u32::MAX, |a| 3 * a), ob.map_or(u32::MAX, |b| 2 * b));
            if ta >= 12 && tb >= 12 {
                continue;
            }
            let base = ta.min(tb);
            let deltas: Vec<u32> = if ta == tb { (base..=base + 4).collect() } else { vec![base] };
            for od in deltas {
                let Some(t) = kodaira_type(oa, ob, od) else { continue };
                seen.insert(t.to_string());
                let fixed = (3 * oa.unwrap_or(100)).min(od);
                assert_eq!(int(fixed as i64), int(12) * (int(1) - t.lct()), "{t} at {oa:?} {ob:?} {od}");
            }
        }
    }
    for name in ["I1", "I4", "II", "III", "IV", "I0*", "I2*", "IV*", "III*", "II*"] {
        assert!(seen.contains(name), "{name} never produced");
    }
    assert_eq!(KodairaType::I(0).lct(), int(1));
}

#[test]
fn movable_degree_reaches_both_extremes() {
    let g = &mut rng(11);
    let mut found = (false, false);
    for _ in 0..200 {
        if let Some(w) = random_weierstrass(g, Plant::ZeroA) {
            assert_eq!(w.associated_quasimap().unwrap().invariants().movable_degree, 0);
            found.0 = true;
        }
        if let Some(w) = random_weierstrass(g, Plant::Generic) {
            if w.discriminant().coeffs().iter().all(|c| !c.is_zero()) && g.gen_bool(0.5) {
                let mv = w.associated_quasimap().unwrap().invariants().movable_degree;
                assert!(mv <= 12);
                found.1 |= mv == 12;
            }
        }
    }
    assert!(found.0 && found.1);
}
