use nilcone::groups::Sampler;
use nilcone::normalform::pattern;
use nilcone::rational::int;
use nilcone::semiinv::{eval, weight_of};
use nilcone::toric::{
    accperm, eval_via_permutation, exponent_weight, in_semigroup, is_acceptable_entry, is_sum_free, minimal_generators,
    sum_free_datum, sum_free_pairs, toric_cone, toric_exponents, toric_exponents_oracle, toric_generators, toric_part,
    BlockPair, Combinatorics, ToricCone, ToricExponent,
};
use nilcone::{Error, GroupKind, Matrix, Rational};
use proptest::prelude::*;

fn all_pairs() -> Vec<BlockPair> {
    (2..=6).flat_map(|n| sum_free_pairs(n, 8)).collect()
}

#[test]
fn exponents_match_the_oracle() {
    let pairs = all_pairs();
    assert!(pairs.len() > 40);
    for bp in &pairs {
        let datum = sum_free_datum(bp).unwrap();
        assert_eq!(toric_exponents_oracle(&datum, bp.n).unwrap(), toric_exponents(bp).unwrap(), "{bp:?}");
    }
}

#[test]
fn accperm_is_an_acceptable_permutation() {
    for bp in all_pairs() {
        let sigma = accperm(&bp).unwrap();
        let mut sorted = sigma.clone();
        sorted.sort();
        assert_eq!(sorted, (1..=bp.r()).collect::<Vec<_>>());
        for (i, &j) in sigma.iter().enumerate() {
            assert!(is_acceptable_entry(i + 1, j, &bp).unwrap(), "{bp:?} at ({}, {j})", i + 1);
        }
    }
}

#[test]
fn weights_follow_exponents() {
    for bp in all_pairs() {
        let datum = sum_free_datum(&bp).unwrap();
        assert_eq!(weight_of(&datum, bp.n), exponent_weight(&toric_exponents(&bp).unwrap()), "{bp:?}");
    }
}

#[test]
fn only_the_toric_part_matters() {
    let mut s = Sampler::new(31);
    for bp in all_pairs().into_iter().filter(|bp| bp.n <= 5) {
        let datum = sum_free_datum(&bp).unwrap();
        let sigma = accperm(&bp).unwrap();
        let spec = pattern(&GroupKind::Unipotent, bp.n);
        let h_exp = toric_exponents(&bp).unwrap();
        for _ in 0..20 {
            let h = spec.sample(&mut s);
            let tor = toric_part(&h).unwrap();
            let value = eval(&h, &datum).unwrap();
            assert_eq!(value, eval(&tor, &datum).unwrap(), "{bp:?}");
            let term = eval_via_permutation(&tor, &datum, &sigma).unwrap();
            assert_eq!(term.value, value);
            let monomial: Rational = h_exp.0.iter().enumerate().map(|(i, &e)| nilcone::rational::pow(&h[(i + 1, i)], e as i64).unwrap()).product();
            assert_eq!(value, term.lambda * monomial, "{bp:?}");
        }
    }
}

#[test]
fn known_exponents() {
    // The single-block pair (1) / (1) gives f_{2,1}-type invariants.
    let bp = BlockPair::new(2, vec![1], vec![1]).unwrap();
    assert_eq!(toric_exponents(&bp).unwrap(), ToricExponent(vec![1]));
    // At n = 3: f_1, f_2 and det_1 restrict to x1^2 x2, x1 x2^2 and x1 x2.
    for (a, ap, h) in [(vec![2], vec![1, 1], vec![2, 1]), (vec![1, 1], vec![2], vec![1, 2]), (vec![1], vec![1], vec![1, 1])] {
        let bp = BlockPair::new(3, a, ap).unwrap();
        assert_eq!(toric_exponents(&bp).unwrap(), ToricExponent(h.clone()));
        assert_eq!(toric_exponents_oracle(&sum_free_datum(&bp).unwrap(), 3).unwrap(), ToricExponent(h));
    }
    assert!(is_sum_free(&BlockPair::new(4, vec![1, 2], vec![3]).unwrap()));
    assert!(!is_sum_free(&BlockPair::new(4, vec![1, 2], vec![1, 2]).unwrap()));
    assert!(matches!(accperm(&BlockPair::new(4, vec![1, 2], vec![1, 2]).unwrap()), Err(Error::Precondition(_))));
    assert!(BlockPair::new(3, vec![3], vec![1, 2]).is_err());
}

#[test]
fn combinatorics_reject_out_of_range_indices() {
    let bp = BlockPair::new(4, vec![1, 3], vec![2, 2]).unwrap();
    let c = Combinatorics::new(&bp);
    assert_eq!(c.hc(0).unwrap(), 0);
    assert_eq!(c.hc(1).unwrap(), 1);
    assert_eq!(c.hs(1).unwrap(), 1);
    assert_eq!(c.ch(1).unwrap(), 1);
    assert!(matches!(c.hc(2), Err(Error::Index(_))));
    assert_eq!((c.hb(3).unwrap(), c.hd(3).unwrap()), (2, 2));
    assert_eq!((c.vb(3).unwrap(), c.vd(3).unwrap()), (2, 1));
}

#[test]
fn non_toric_data_fail_the_oracle() {
    // Semi-invariants restrict to monomials on toric matrices, so only
    // vanishing data fail.
    let zero = nilcone::SemiInvariantDatum::monomial(vec![1], vec![1], &[(0, 0, 2)]).unwrap();
    assert!(matches!(toric_exponents_oracle(&zero, 2), Err(Error::NotToric(_))));
    assert!(toric_part(&Matrix::identity(2)).is_err());
}

fn cone_strategy() -> impl Strategy<Value = ToricCone> {
    prop::collection::vec(prop::collection::vec(0i64..=4, 2), 1..=4)
        .prop_filter("full-dimensional", |gs| {
            Matrix::from_rows(gs.iter().map(|g| g.iter().map(|&x| int(x)).collect()).collect()).unwrap().rank() == 2
        })
        .prop_map(|gs| ToricCone::new(2, gs).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cones_contain_their_generators_and_sums(cone in cone_strategy(), a in 0i64..4, b in 0i64..4) {
        prop_assert!(cone.is_strongly_convex());
        for g in &cone.generators {
            prop_assert!(cone.contains(g));
        }
        let g0 = &cone.generators[0];
        let g1 = cone.generators.last().unwrap();
        let combo: Vec<i64> = g0.iter().zip(g1).map(|(x, y)| a * x + b * y).collect();
        prop_assert!(cone.contains(&combo));
        prop_assert!(cone.same_cone(&cone.clone()));
    }

    #[test]
    fn facets_and_duals(cone in cone_strategy()) {
        let normals = cone.facet_normals().unwrap();
        for normal in &normals {
            for g in &cone.generators {
                prop_assert!(normal.iter().zip(g).map(|(x, y)| x * y).sum::<i64>() >= 0);
            }
        }
        let dual = cone.dual().unwrap();
        prop_assert!(dual.dual().unwrap().same_cone(&cone));
    }

    #[test]
    fn hilbert_basis_generates_lattice_points(cone in cone_strategy()) {
        let basis = cone.hilbert_basis().unwrap();
        for g in &cone.generators {
            prop_assert!(in_semigroup(g, &basis));
        }
        for x in 0..=6i64 {
            for y in 0..=6i64 {
                let v = vec![x, y];
                prop_assert_eq!(cone.contains(&v), in_semigroup(&v, &basis), "{:?}", v);
            }
        }
        prop_assert_eq!(minimal_generators(&basis).len(), basis.len());
    }
}

#[test]
fn cones_for_small_n() {
    let c2 = toric_cone(2, 2).unwrap();
    assert!(c2.same_cone(&ToricCone::new(1, vec![vec![1]]).unwrap()));
    let c3 = toric_cone(3, 4).unwrap();
    assert!(c3.same_cone(&ToricCone::new(2, vec![vec![1, 1], vec![1, 2], vec![2, 1]]).unwrap()));
    let gens = toric_generators(3, 4).unwrap();
    for g in &gens {
        assert!(c3.contains(g));
    }
    // Outside: (1, 0) and (1, 3).
    assert!(!c3.contains(&[1, 0]));
    assert!(!c3.contains(&[1, 3]));
    assert!(c3.contains(&[3, 4]));
}
