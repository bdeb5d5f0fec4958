use super::*;
use proptest::prelude::*;

fn build(rows: &[Vec<i64>], n: usize) -> (Lattice, Vec<Vec<i64>>) {
    let mut lat = Lattice::new(n);
    for (i, r) in rows.iter().enumerate() {
        lat.insert(r, i);
    }
    (lat, rows.to_vec())
}

/// Determinant by cofactor expansion, for tiny matrices.
fn det(m: &[Vec<i64>]) -> i64 {
    if m.len() == 1 {
        return m[0][0];
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, v)| *v)
                        .collect()
                })
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det(&minor)
        })
        .sum()
}

#[test]
fn cyclic_examples() {
    let (lat, _) = build(&[vec![2, 0], vec![0, 3]], 2);
    let g = FiniteGroup::new(lat).unwrap();
    assert_eq!(g.invariants(), vec![BigInt::from(6)]);
    assert_eq!(g.torsion_count(2), BigInt::from(2));
    let (lat, _) = build(&[vec![2, 0], vec![0, 4]], 2);
    let g = FiniteGroup::new(lat).unwrap();
    assert_eq!(g.invariants(), vec![BigInt::from(2), BigInt::from(4)]);
    assert_eq!(g.torsion_count(2), BigInt::from(4));
    let (lat, _) = build(&[vec![1, 0, 0]], 3);
    assert!(FiniteGroup::new(lat).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn square_lattices(entries in prop::collection::vec(-6i64..7, 9), extra in prop::collection::vec(-9i64..9, 6), x in prop::collection::vec(-20i64..20, 3)) {
        let rows: Vec<Vec<i64>> = entries.chunks(3).map(|c| c.to_vec()).collect();
        let d = det(&rows);
        prop_assume!(d != 0);
        let mut all = rows.clone();
        all.extend(extra.chunks(3).map(|c| c.to_vec()));
        let (lat, rows) = build(&all, 3);
        let g = FiniteGroup::new(lat).unwrap();
        let order = g.order();
        prop_assert!((BigInt::from(d) % &order).is_zero());
        for r in &rows {
            prop_assert!(g.coords(r).iter().all(|c| c.is_zero()));
        }
        // Lifting inverts coordinates.
        let cx = g.coords(&x);
        let lifted: Vec<i64> = g.lift(&cx).iter().map(|v| i64::try_from(v).unwrap()).collect();
        prop_assert_eq!(g.coords(&lifted), cx.clone());
        // Multiples of the order are principal, with an exact expression.
        let y: Vec<i64> = x.iter().map(|v| v * i64::try_from(&order).unwrap()).collect();
        let comb = g.principal_combination(&y).unwrap();
        let mut rebuilt = vec![BigInt::zero(); 3];
        for (i, k) in &comb {
            for (acc, v) in rebuilt.iter_mut().zip(&rows[*i]) {
                *acc += k * v;
            }
        }
        prop_assert_eq!(rebuilt, y.iter().map(|v| BigInt::from(*v)).collect::<Vec<_>>());
        if !cx.iter().all(|c| c.is_zero()) {
            prop_assert!(g.principal_combination(&x).is_none());
        }
    }
}
