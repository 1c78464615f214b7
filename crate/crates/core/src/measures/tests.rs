use num_rational::Rational64;
use proptest::prelude::*;

use super::*;

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

#[test]
fn marginal_examples() {
    let u = DiscreteMeasure::probability(vec![0.25, 0.75]).unwrap();
    let chi = DiscreteMeasure::signed(vec![0.5, 1.0, -0.25]).unwrap();
    let m = ProductMeasure::product(&u, &chi).marginal();
    assert!(m.distance(&DiscreteMeasure::signed(vec![0.25 * 1.25, 0.75 * 1.25]).unwrap()) <= 1e-15);
    assert_eq!(
        ProductMeasure::<f64>::dirac(3, 2, (1, 1)).marginal(),
        DiscreteMeasure::dirac(3, 1)
    );
    let uni = ProductMeasure::probability(2, 3, vec![1.0 / 6.0; 6]).unwrap();
    assert!(uni.marginal().distance(&DiscreteMeasure::uniform(2)) <= 1e-15);
}

#[test]
fn probability_validation() {
    assert!(DiscreteMeasure::probability(vec![0.5, 0.6]).is_err());
    assert!(DiscreteMeasure::probability(vec![1.1, -0.1]).is_err());
    assert!(DiscreteMeasure::probability(vec![1.0, -1e-13]).is_ok());
    assert!(matches!(
        DiscreteMeasure::signed(vec![1.0, f64::NAN]),
        Err(Error::NonFinite(1))
    ));
    assert!(ProductMeasure::signed(2, 2, vec![0.0; 3]).is_err());
}

#[test]
fn product_table_lifts_to_product() {
    let chi = DiscreteMeasure::<f64>::probability(vec![0.2, 0.3, 0.5]).unwrap();
    let u = DiscreteMeasure::probability(vec![0.1, 0.6, 0.3]).unwrap();
    let out = classical_lift(&LiftTable::product(3, &chi), &u).unwrap();
    let expected = ProductMeasure::product(&u, &chi);
    for (a, b) in out.weights().iter().zip(expected.weights()) {
        assert!((a - b).abs() <= 1e-15);
    }
    assert!(out.is_product());
}

#[test]
fn dirac_lifts_to_its_entry() {
    let table = split_lift::<f64>(&[true, false, true], 2, 0, 1).unwrap();
    for q in 0..3 {
        assert_eq!(
            &classical_lift(&table, &DiscreteMeasure::dirac(3, q)).unwrap(),
            &table.entries()[q]
        );
    }
}

#[test]
fn split_lift_instance() {
    let table = split_lift::<f64>(&[true, false], 2, 0, 1).unwrap();
    let out = classical_lift(&table, &DiscreteMeasure::uniform(2)).unwrap();
    assert_eq!(out.weights(), &[0.5, 0.0, 0.0, 0.5]);
    assert_eq!(out.product_rank(), 2);
    assert_eq!(out.marginal(), DiscreteMeasure::uniform(2));

    let dirac = classical_lift(&table, &DiscreteMeasure::dirac(2, 0)).unwrap();
    assert_eq!(dirac, ProductMeasure::dirac(2, 2, (0, 0)));
    assert_eq!(dirac.product_rank(), 1);
    assert_eq!(dirac.marginal(), DiscreteMeasure::dirac(2, 0));
}

#[test]
fn split_lift_rejects_bad_arguments() {
    assert!(split_lift::<f64>(&[true, false], 2, 1, 1).is_err());
    assert!(split_lift::<f64>(&[true, true], 2, 0, 1).is_err());
    assert!(split_lift::<f64>(&[false, false], 2, 0, 1).is_err());
    assert!(split_lift::<f64>(&[true, false], 2, 0, 2).is_err());
}

#[test]
fn bad_entry_reports_q() {
    let good = ProductMeasure::<f64>::dirac(2, 2, (0, 1));
    let bad = ProductMeasure::<f64>::dirac(2, 2, (0, 0));
    match LiftTable::new(vec![good, bad]) {
        Err(Error::BadLiftEntry { q, deviation }) => {
            assert_eq!(q, 1);
            assert_eq!(deviation, 1.0);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn rational_lift_is_exact() {
    let table = LiftTable::new(vec![
        ProductMeasure::signed(
            2,
            3,
            vec![r(1, 3), r(1, 3), r(1, 3), r(0, 1), r(0, 1), r(0, 1)],
        )
        .unwrap(),
        ProductMeasure::signed(
            2,
            3,
            vec![r(0, 1), r(0, 1), r(0, 1), r(2, 7), r(-1, 7), r(6, 7)],
        )
        .unwrap(),
    ])
    .unwrap();
    let u = DiscreteMeasure::signed(vec![r(5, 3), r(-2, 3)]).unwrap();
    let out = classical_lift(&table, &u).unwrap();
    assert_eq!(out.marginal(), u);
    assert_eq!(*out.get(1, 1), r(2, 21));
    assert_eq!(
        DiscreteMeasure::<Rational64>::uniform(3).weights(),
        &[r(1, 3); 3]
    );
    assert!(!out.is_product());
}

fn weights(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, n)
}

fn random_table(q: usize, p: usize, raw: &[f64]) -> LiftTable<f64> {
    let entries = (0..q)
        .map(|i| {
            let row = &raw[i * p..(i + 1) * p];
            let mut w = vec![0.0; q * p];
            w[i * p..(i + 1) * p].copy_from_slice(row);
            w[i * p] += 1.0 - row.iter().sum::<f64>();
            ProductMeasure::signed(q, p, w).unwrap()
        })
        .collect();
    LiftTable::new(entries).unwrap()
}

proptest! {
    #[test]
    fn lift_is_linear_right_inverse(raw in weights(12), u in weights(3), v in weights(3), a in -2.0f64..2.0) {
        let table = random_table(3, 4, &raw);
        let (u, v) = (DiscreteMeasure::signed(u).unwrap(), DiscreteMeasure::signed(v).unwrap());
        let lu = classical_lift(&table, &u).unwrap();
        prop_assert!(lu.marginal().distance(&u) <= 1e-14);
        let combo = DiscreteMeasure::signed(u.weights().iter().zip(v.weights()).map(|(x, y)| a * x + y).collect()).unwrap();
        let lc = classical_lift(&table, &combo).unwrap();
        let lv = classical_lift(&table, &v).unwrap();
        for ((c, x), y) in lc.weights().iter().zip(lu.weights()).zip(lv.weights()) {
            prop_assert!((c - (a * x + y)).abs() <= 1e-13);
        }
    }

    #[test]
    fn right_inverse_recovered_from_diracs(raw in weights(12), u in weights(3)) {
        let table = random_table(3, 4, &raw);
        let map = |m: &DiscreteMeasure<f64>| classical_lift(&table, m).unwrap();
        let rebuilt = LiftTable::from_linear_map(3, map).unwrap();
        let u = DiscreteMeasure::signed(u).unwrap();
        let (x, y) = (classical_lift(&rebuilt, &u).unwrap(), classical_lift(&table, &u).unwrap());
        for (a, b) in x.weights().iter().zip(y.weights()) {
            prop_assert!((a - b).abs() <= 1e-14);
        }
    }

    #[test]
    fn product_rank_detects_products(u in prop::collection::vec(0.01f64..1.0, 3), chi in prop::collection::vec(0.01f64..1.0, 4)) {
        let m = ProductMeasure::product(&DiscreteMeasure::signed(u).unwrap(), &DiscreteMeasure::signed(chi).unwrap());
        prop_assert_eq!(m.product_rank(), 1);
    }
}
