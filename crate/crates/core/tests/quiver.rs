use nilcone::groups::{conjugate, Sampler};
use nilcone::quiver::{build_MN, datum_from_morphism, eval_f_phi, random_morphism, MorphismDatum, MorphismEntry};
use nilcone::rational::int;
use nilcone::semiinv::{eval, weight_of};
use nilcone::{Error, Matrix, ParabolicShape, Polynomial};
use num_traits::Zero;
use proptest::prelude::*;

fn entry(target: usize, source: usize, k: usize, l: usize, coeffs: &[i64]) -> MorphismEntry {
    MorphismEntry { target, source, k, l, coeffs: Polynomial::new(coeffs.iter().map(|&c| int(c)).collect()) }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn morphism_matches_block_datum(n in 2usize..=4, seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let phi = random_morphism(n, &mut s);
        prop_assert!(phi.validate().is_ok());
        let datum = datum_from_morphism(&phi).unwrap();
        prop_assert_eq!(datum.size(), phi.size());
        for _ in 0..3 {
            let m = s.nilpotent(n);
            prop_assert_eq!(eval_f_phi(&m, &phi).unwrap(), eval(&m, &datum).unwrap());
        }
    }

    #[test]
    fn morphism_invariants_transform_by_their_weight(n in 2usize..=4, seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let phi = random_morphism(n, &mut s);
        let chi = weight_of(&datum_from_morphism(&phi).unwrap(), n);
        let m = s.nilpotent(n);
        let b = s.borel(n);
        let u = s.unipotent(n);
        let base = eval_f_phi(&m, &phi).unwrap();
        prop_assert_eq!(eval_f_phi(&conjugate(&u, &m).unwrap(), &phi).unwrap(), base.clone());
        prop_assert_eq!(eval_f_phi(&conjugate(&b, &m).unwrap(), &phi).unwrap(), chi.eval(&b).unwrap() * base);
    }

    #[test]
    fn representation_paths_embed_coordinates(blocks in prop::collection::vec(1usize..=2, 1..=3), seed in any::<u64>()) {
        let shape = ParabolicShape::new(blocks).unwrap();
        let n = shape.n();
        let m = Sampler::new(seed).nilpotent(n);
        let rep = build_MN(&m, &shape).unwrap();
        let p = shape.block_count();
        prop_assert_eq!(rep.shape(n).p, p);
        for from in 1..=p {
            let d = shape.dims()[from - 1];
            let path = rep.path_map(from, p).unwrap();
            prop_assert_eq!((path.rows(), path.cols()), (n, d));
            for k in 0..n as u32 {
                let lp = rep.loop_path_map(from, k).unwrap();
                let power = m.pow(k).unwrap();
                for i in 0..n {
                    for j in 0..d {
                        prop_assert_eq!(&lp[(i, j)], &power[(i, j)]);
                    }
                }
            }
        }
    }
}

#[test]
fn mixed_targets_are_u_invariant() {
    // Target: P_2 and P_3; source: P_1 and two copies of P_2.
    let phi = MorphismDatum {
        n: 3,
        x: vec![1, 2, 0],
        y: vec![0, 1, 1],
        entries: vec![
            entry(2, 1, 0, 0, &[1]),
            entry(2, 2, 0, 0, &[1]),
            entry(3, 1, 0, 0, &[0, 1]),
            entry(3, 2, 0, 0, &[0, 0, 1]),
            entry(3, 2, 0, 1, &[1, 1]),
        ],
    };
    phi.validate().unwrap();
    assert!(matches!(datum_from_morphism(&phi), Err(Error::Unsupported(_))));
    let mut s = Sampler::new(4);
    let mut nonzero = 0;
    for _ in 0..20 {
        let m = s.nilpotent(3);
        let base = eval_f_phi(&m, &phi).unwrap();
        nonzero += usize::from(!base.is_zero());
        let u = s.unipotent(3);
        assert_eq!(eval_f_phi(&conjugate(&u, &m).unwrap(), &phi).unwrap(), base);
    }
    assert!(nonzero > 0);
}

#[test]
fn invalid_morphisms_are_rejected() {
    let unbalanced = MorphismDatum { n: 2, x: vec![1, 0], y: vec![0, 1], entries: vec![] };
    assert!(unbalanced.validate().is_err());
    let upward = MorphismDatum { n: 2, x: vec![0, 1], y: vec![2, 0], entries: vec![entry(1, 2, 0, 0, &[1])] };
    assert!(matches!(upward.validate(), Err(Error::Precondition(_))));
    let loop_below_top = MorphismDatum { n: 3, x: vec![1, 0, 0], y: vec![1, 0, 0], entries: vec![entry(1, 1, 0, 0, &[0, 1])] };
    assert!(matches!(loop_below_top.validate(), Err(Error::Precondition(_))));
    let bad_copy = MorphismDatum { n: 2, x: vec![0, 1], y: vec![0, 1], entries: vec![entry(2, 2, 1, 0, &[1])] };
    assert!(matches!(bad_copy.validate(), Err(Error::Index(_))));
}

#[test]
fn identity_morphism_gives_one() {
    let phi = MorphismDatum { n: 3, x: vec![0, 0, 1], y: vec![0, 0, 1], entries: vec![entry(3, 3, 0, 0, &[1])] };
    let m = Sampler::new(1).nilpotent(3);
    assert_eq!(eval_f_phi(&m, &phi).unwrap(), int(1));
    // Three copies of P_1 into P_3 by 1, x, x^2: the Krylov determinant of e_1.
    let krylov = MorphismDatum {
        n: 3,
        x: vec![3, 0, 0],
        y: vec![0, 0, 1],
        entries: vec![entry(3, 1, 0, 0, &[1]), entry(3, 1, 0, 1, &[0, 1]), entry(3, 1, 0, 2, &[0, 0, 1])],
    };
    let cols: Vec<_> = (0..3).map(|k| m.pow(k).unwrap().column(0)).collect();
    assert_eq!(eval_f_phi(&m, &krylov).unwrap(), Matrix::from_columns(3, &cols).unwrap().det().unwrap());
}
