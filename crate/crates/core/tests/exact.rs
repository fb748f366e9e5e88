use num_traits::Zero;
use proptest::prelude::*;

use vecfield::exact::matrix::apply;
use vecfield::exact::{
    det, det_symbolic, kernel_basis, rank, rat, Coeff, MPoly, Rat, SparseMat, UPoly,
};
use vecfield::spanning::newton_matrix_generic;

/// Leibniz expansion over all permutations.
fn det_by_permutations<C: Coeff>(m: &SparseMat<C>) -> C {
    let n = m.nrows();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = C::zero();
    permute(&mut perm, 0, m, &mut total);
    total
}

fn permute<C: Coeff>(perm: &mut Vec<usize>, k: usize, m: &SparseMat<C>, total: &mut C) {
    let n = perm.len();
    if k == n {
        let mut inversions = 0;
        for i in 0..n {
            for j in i + 1..n {
                if perm[i] > perm[j] {
                    inversions += 1;
                }
            }
        }
        let mut t = C::one();
        for (i, &j) in perm.iter().enumerate() {
            t = t * m.get(i, j);
        }
        *total = if inversions % 2 == 0 {
            total.clone() + t
        } else {
            total.clone() - t
        };
        return;
    }
    for i in k..n {
        perm.swap(k, i);
        permute(perm, k + 1, m, total);
        perm.swap(k, i);
    }
}

fn sparse_matrix(max: usize) -> impl Strategy<Value = SparseMat<Rat>> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec((0..r, 0..c, -4i64..=4), 0..=(r * c).min(120)).prop_map(move |es| {
            let mut m = SparseMat::new(r, c);
            for (i, j, v) in es {
                m.set(i, j, rat(v));
            }
            m
        })
    })
}

fn square(n: usize) -> impl Strategy<Value = SparseMat<Rat>> {
    prop::collection::vec(-5i64..=5, n * n).prop_map(move |v| {
        SparseMat::from_dense(
            &v.chunks(n)
                .map(|r| r.iter().map(|&x| rat(x)).collect())
                .collect::<Vec<_>>(),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_is_transpose_invariant(m in sparse_matrix(40)) {
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
    }

    #[test]
    fn rank_nullity(m in sparse_matrix(25)) {
        let k = kernel_basis(&m);
        prop_assert_eq!(rank(&m) + k.len(), m.ncols());
        for v in &k {
            prop_assert!(apply(&m, v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn det_is_multiplicative(a in square(4), b in square(4)) {
        prop_assert_eq!(det(&a.mul(&b).unwrap()).unwrap(), det(&a).unwrap() * det(&b).unwrap());
    }

    #[test]
    fn det_matches_leibniz(a in square(5)) {
        prop_assert_eq!(det(&a).unwrap(), det_by_permutations(&a));
    }

    #[test]
    fn interpolation_recovers_polynomial(c in prop::collection::vec(-9i64..=9, 1..8)) {
        let p = UPoly::from_ints(&c);
        let xs: Vec<Rat> = (0..c.len() as i64).map(|i| rat(3 * i - 5)).collect();
        let ys: Vec<Rat> = xs.iter().map(|x| p.eval(x)).collect();
        prop_assert_eq!(UPoly::interpolate(&xs, &ys), p);
    }
}

fn poly_matrix(seed: u64) -> SparseMat<MPoly> {
    let vars = ["a", "b"];
    let a = MPoly::var(&vars, 0);
    let b = MPoly::var(&vars, 1);
    let mut s = seed;
    let mut next = || {
        s = s
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((s >> 33) % 7) as i64 - 3
    };
    let rows: Vec<Vec<MPoly>> = (0..3)
        .map(|_| {
            (0..3)
                .map(|_| {
                    let (x, y, z) = (next(), next(), next());
                    &(&a.scale(&rat(x)) + &b.scale(&rat(y))) + &MPoly::constant(rat(z))
                })
                .collect()
        })
        .collect();
    SparseMat::from_dense(&rows)
}

#[test]
fn symbolic_det_of_product() {
    for seed in 0..6 {
        let x = poly_matrix(seed);
        let y = poly_matrix(seed + 100);
        let lhs = det_symbolic(&x.mul(&y).unwrap()).unwrap();
        let rhs = &det_symbolic(&x).unwrap() * &det_symbolic(&y).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(det_symbolic(&x).unwrap(), det_by_permutations(&x));
    }
}

#[test]
fn small_cases() {
    let vars = ["N", "mu", "lambda"];
    let entry =
        &(&MPoly::var(&vars, 0) + &MPoly::var(&vars, 1)) + &MPoly::var(&vars, 2).scale(&rat(2));
    let m = SparseMat::from_dense(&[vec![entry.clone()]]);
    assert_eq!(det_symbolic(&m).unwrap(), entry);
    assert!(det_symbolic(&SparseMat::<MPoly>::new(2, 1)).is_err());
    assert_eq!(rank(&SparseMat::<Rat>::identity(2)), 2);
    assert_eq!(kernel_basis(&SparseMat::<Rat>::new(1, 3)).len(), 3);
}

#[test]
fn newton_a2_determinant_against_leibniz() {
    let vars = ["N"];
    let n = MPoly::var(&vars, 0);
    let zero = vec![MPoly::zero(); 2];
    let mu = vec![n.clone(), n.clone()];
    let a2 = newton_matrix_generic(2, &zero, &mu);
    let sym = det_symbolic(&a2).unwrap();
    assert_eq!(sym, det_by_permutations(&a2));
    for k in 0..6 {
        let z = vec![Rat::zero(); 2];
        let numeric = newton_matrix_generic(2, &z, &[rat(k), rat(k)]);
        assert_eq!(sym.eval(&[rat(k)]), det(&numeric).unwrap());
    }
    assert!(!sym.is_zero());
}
