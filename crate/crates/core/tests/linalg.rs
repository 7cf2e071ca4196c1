use nilcone::rational::{frac, int, parse, to_string};
use nilcone::{Matrix, Polynomial, Rational};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn square(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec((-6i64..=6, 1i64..=3), n * n)
        .prop_map(move |v| Matrix::from_fn(n, n, |i, j| frac(v[i * n + j].0, v[i * n + j].1)))
}

fn sized_pair() -> impl Strategy<Value = (Matrix, Matrix)> {
    (1usize..=5).prop_flat_map(|n| (square(n), square(n)))
}

/// Permutation expansion, used as an independent determinant.
fn leibniz(m: &Matrix) -> Rational {
    fn perms(k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(k - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, k - 1);
                out.push(q);
            }
        }
        out
    }
    let n = m.rows();
    perms(n)
        .into_iter()
        .map(|p| {
            let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            let prod = (0..n).fold(Rational::one(), |acc, i| acc * &m[(i, p[i])]);
            if inversions % 2 == 0 {
                prod
            } else {
                -prod
            }
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn det_is_multiplicative((a, b) in sized_pair()) {
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.det().unwrap(), a.det().unwrap() * b.det().unwrap());
    }

    #[test]
    fn det_matches_leibniz((a, _) in sized_pair()) {
        prop_assert_eq!(a.det().unwrap(), leibniz(&a));
    }

    #[test]
    fn powers_add(a in (1usize..=4).prop_flat_map(square), p in 0u32..4, q in 0u32..4) {
        let lhs = a.pow(p).unwrap().mul(&a.pow(q).unwrap()).unwrap();
        prop_assert_eq!(lhs, a.pow(p + q).unwrap());
        let table = a.powers((p + q) as usize).unwrap();
        prop_assert_eq!(&table[(p + q) as usize], &a.pow(p + q).unwrap());
    }

    #[test]
    fn corner_restricts(a in (2usize..=5).prop_flat_map(square), r in 0usize..=5, c in 0usize..=5) {
        let n = a.rows();
        let (r, c) = (r.min(n), c.min(n));
        let corner = a.corner(r, c).unwrap();
        prop_assert_eq!((corner.rows(), corner.cols()), (r, c));
        for i in 0..r {
            for j in 0..c {
                prop_assert_eq!(&corner[(i, j)], &a[(n - r + i, j)]);
            }
        }
    }

    #[test]
    fn nullspace_is_kernel_of_right_dimension(a in (1usize..=5).prop_flat_map(square), kill in 0usize..5) {
        // Zero out some rows so that the kernel is often nontrivial.
        let n = a.rows();
        let a = Matrix::from_fn(n, n, |i, j| if i < kill.min(n) { Rational::zero() } else { a[(i, j)].clone() });
        let basis = a.nullspace();
        prop_assert_eq!(basis.len() + a.rank(), n);
        for v in &basis {
            prop_assert!(a.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
        let spanned = Matrix::from_columns(n, &basis).unwrap();
        prop_assert_eq!(spanned.rank(), basis.len());
    }

    #[test]
    fn inverse_roundtrip(a in (1usize..=5).prop_flat_map(square)) {
        match a.inverse() {
            Ok(inv) => {
                prop_assert!(!a.det().unwrap().is_zero());
                prop_assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(a.rows()));
            }
            Err(_) => prop_assert!(a.det().unwrap().is_zero()),
        }
    }

    #[test]
    fn rational_text_roundtrip(p in -1000i64..1000, q in 1i64..50) {
        let r = frac(p, q);
        prop_assert_eq!(parse(&to_string(&r)).unwrap(), r);
    }

    #[test]
    fn polynomial_eval_is_sum_of_powers(a in (1usize..=4).prop_flat_map(square), cs in prop::collection::vec(-3i64..=3, 0..4)) {
        let poly = Polynomial::new(cs.iter().map(|&c| int(c)).collect());
        let mut expected = Matrix::zeros(a.rows(), a.rows());
        for (k, c) in cs.iter().enumerate() {
            expected = expected.add(&a.pow(k as u32).unwrap().scale(&int(*c))).unwrap();
        }
        prop_assert_eq!(poly.eval_matrix(&a).unwrap(), expected);
    }
}

#[test]
fn empty_determinant_is_one() {
    assert_eq!(Matrix::zeros(0, 0).det().unwrap(), Rational::one());
}

#[test]
fn known_determinants() {
    // Values from sympy.
    let m = Matrix::from_ints(&[[2, 0, 1], [1, 3, 2], [1, 1, 3]]);
    assert_eq!(m.det().unwrap(), int(12));
    let singular = Matrix::from_ints(&[[2, 0, 1], [1, 3, 2], [1, 1, 1]]);
    assert_eq!(singular.det().unwrap(), int(0));
    let h = Matrix::from_fn(4, 4, |i, j| frac(1, (i + j + 1) as i64));
    assert_eq!(h.det().unwrap(), frac(1, 6_048_000));
}

#[test]
fn known_nullspace() {
    let m = Matrix::from_ints(&[[1, 2, 3], [2, 4, 6]]);
    let basis = m.nullspace();
    assert_eq!(basis.len(), 2);
    assert_eq!(m.rank(), 1);
    let single = Matrix::from_ints(&[[1, 1, 0], [0, 1, 1]]).nullspace();
    assert_eq!(single.len(), 1);
    let v = &single[0];
    assert_eq!(v[0], v[2]);
    assert_eq!(v[1], -v[0].clone());
}

#[test]
fn matrix_serde_uses_strings() {
    let m = Matrix::from_fn(2, 2, |i, j| frac(i as i64 - 1, (j + 2) as i64));
    let json = serde_json::to_string(&m).unwrap();
    assert_eq!(json, r#"[["-1/2","-1/3"],["0","0"]]"#);
    assert_eq!(serde_json::from_str::<Matrix>(&json).unwrap(), m);
}
