//! Block-determinantal semi-invariants `f^P(N) = det(N^P)`.
//!
//! A datum `P` consists of row block sizes `(a_1, ..., a_s)`, column block
//! sizes `(a'_1, ..., a'_t)` with equal sums `r`, and an `s x t` grid of
//! polynomials. The block `(i, j)` of the `r x r` matrix `N^P` is the corner
//! of `P_ij(N)` formed by its last `a_i` rows and first `a'_j` columns.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{conjugate, Character, Sampler};
use crate::matrix::Matrix;
use crate::poly::Polynomial;
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "DatumRepr", into = "DatumRepr")]
pub struct SemiInvariantDatum {
    row_blocks: Vec<usize>,
    col_blocks: Vec<usize>,
    polys: Vec<Vec<Polynomial>>,
}

#[derive(Serialize, Deserialize)]
struct DatumRepr {
    row_blocks: Vec<usize>,
    col_blocks: Vec<usize>,
    polys: Vec<Vec<Polynomial>>,
}

impl TryFrom<DatumRepr> for SemiInvariantDatum {
    type Error = Error;

    fn try_from(r: DatumRepr) -> Result<Self> {
        SemiInvariantDatum::new(r.row_blocks, r.col_blocks, r.polys)
    }
}

impl From<SemiInvariantDatum> for DatumRepr {
    fn from(d: SemiInvariantDatum) -> Self {
        DatumRepr { row_blocks: d.row_blocks, col_blocks: d.col_blocks, polys: d.polys }
    }
}

impl SemiInvariantDatum {
    /// Validates the datum. Blocks of size zero are dropped together with
    /// their row or column of polynomials; this leaves `N^P` unchanged.
    pub fn new(row_blocks: Vec<usize>, col_blocks: Vec<usize>, polys: Vec<Vec<Polynomial>>) -> Result<Self> {
        if polys.len() != row_blocks.len() || polys.iter().any(|row| row.len() != col_blocks.len()) {
            return Err(Error::Shape(format!(
                "polynomial grid must be {}x{}",
                row_blocks.len(),
                col_blocks.len()
            )));
        }
        let r: usize = row_blocks.iter().sum();
        let c: usize = col_blocks.iter().sum();
        if r != c {
            return Err(Error::Shape(format!("row blocks sum to {r}, column blocks to {c}")));
        }
        let keep_cols: Vec<usize> = (0..col_blocks.len()).filter(|&j| col_blocks[j] > 0).collect();
        let mut rows = Vec::new();
        let mut grid = Vec::new();
        for (i, row) in polys.into_iter().enumerate() {
            if row_blocks[i] == 0 {
                continue;
            }
            rows.push(row_blocks[i]);
            grid.push(keep_cols.iter().map(|&j| row[j].clone()).collect());
        }
        let cols = keep_cols.iter().map(|&j| col_blocks[j]).collect();
        Ok(SemiInvariantDatum { row_blocks: rows, col_blocks: cols, polys: grid })
    }

    /// Builds a datum from a sparse list of monomial entries `(i, j, k)`
    /// meaning `P_ij = x^k`; all other entries are zero.
    pub fn monomial(row_blocks: Vec<usize>, col_blocks: Vec<usize>, entries: &[(usize, usize, usize)]) -> Result<Self> {
        let mut polys = vec![vec![Polynomial::zero(); col_blocks.len()]; row_blocks.len()];
        for &(i, j, k) in entries {
            if i >= row_blocks.len() || j >= col_blocks.len() {
                return Err(Error::Index(format!("entry ({i},{j}) outside the grid")));
            }
            polys[i][j] = Polynomial::power(k);
        }
        Self::new(row_blocks, col_blocks, polys)
    }

    pub fn row_blocks(&self) -> &[usize] {
        &self.row_blocks
    }

    pub fn col_blocks(&self) -> &[usize] {
        &self.col_blocks
    }

    pub fn polys(&self) -> &[Vec<Polynomial>] {
        &self.polys
    }

    pub fn poly(&self, i: usize, j: usize) -> &Polynomial {
        &self.polys[i][j]
    }

    /// The common sum `r` of the block sizes.
    pub fn size(&self) -> usize {
        self.row_blocks.iter().sum()
    }

    pub fn max_block(&self) -> usize {
        self.row_blocks.iter().chain(&self.col_blocks).copied().max().unwrap_or(0)
    }

    /// Block-diagonal concatenation; the function of the result is the
    /// product of the two functions.
    pub fn stack(&self, other: &SemiInvariantDatum) -> SemiInvariantDatum {
        let (s1, t1) = (self.row_blocks.len(), self.col_blocks.len());
        let (s2, t2) = (other.row_blocks.len(), other.col_blocks.len());
        let mut polys = vec![vec![Polynomial::zero(); t1 + t2]; s1 + s2];
        for i in 0..s1 {
            polys[i][..t1].clone_from_slice(&self.polys[i]);
        }
        for i in 0..s2 {
            polys[s1 + i][t1..].clone_from_slice(&other.polys[i]);
        }
        SemiInvariantDatum {
            row_blocks: [self.row_blocks.clone(), other.row_blocks.clone()].concat(),
            col_blocks: [self.col_blocks.clone(), other.col_blocks.clone()].concat(),
            polys,
        }
    }
}

/// A datum together with its weight and a display name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedInvariant {
    pub datum: SemiInvariantDatum,
    pub weight: Character,
    pub label: String,
}

impl WeightedInvariant {
    pub fn new(datum: SemiInvariantDatum, n: usize, label: impl Into<String>) -> Self {
        let weight = weight_of(&datum, n);
        WeightedInvariant { datum, weight, label: label.into() }
    }

    pub fn n(&self) -> usize {
        self.weight.len()
    }

    pub fn eval(&self, n: &Matrix) -> Result<Rational> {
        eval(n, &self.datum)
    }
}

/// The matrix `N^P`.
pub fn block_matrix(n: &Matrix, datum: &SemiInvariantDatum) -> Result<Matrix> {
    if !n.is_square() {
        return Err(Error::Shape("semi-invariants are evaluated at square matrices".into()));
    }
    let size = n.rows();
    if datum.max_block() > size {
        return Err(Error::Shape(format!("block of size {} exceeds n = {size}", datum.max_block())));
    }
    let max_deg = datum.polys.iter().flatten().filter_map(Polynomial::degree).max().unwrap_or(0);
    let powers = n.powers(max_deg)?;
    let r = datum.size();
    let mut out = Matrix::zeros(r, r);
    let mut row0 = 0;
    for (i, &a) in datum.row_blocks.iter().enumerate() {
        let mut col0 = 0;
        for (j, &b) in datum.col_blocks.iter().enumerate() {
            for (k, c) in datum.polys[i][j].coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let off = size - a;
                for x in 0..a {
                    for y in 0..b {
                        let v = &powers[k][(off + x, y)];
                        if !v.is_zero() {
                            out[(row0 + x, col0 + y)] += c * v;
                        }
                    }
                }
            }
            col0 += b;
        }
        row0 += a;
    }
    Ok(out)
}

/// `f^P(N) = det(N^P)`.
pub fn eval(n: &Matrix, datum: &SemiInvariantDatum) -> Result<Rational> {
    block_matrix(n, datum)?.det()
}

/// `sum_i (omega_{n-a_i+1} + ... + omega_n) - sum_j (omega_1 + ... + omega_{a'_j})`.
pub fn weight_of(datum: &SemiInvariantDatum, n: usize) -> Character {
    let mut w = Character::zero(n);
    for &a in &datum.row_blocks {
        w = &w + &Character::omega_range(n, n - a + 1, n);
    }
    for &b in &datum.col_blocks {
        w = &w - &Character::omega_range(n, 1, b);
    }
    w
}

/// `det_k(N) = det((N^{n-k})_{(k,k)})`.
pub fn det_k(n: usize, k: usize) -> Result<WeightedInvariant> {
    if k == 0 || k >= n {
        return Err(Error::Index(format!("det_k needs 1 <= k <= n-1, got k = {k}, n = {n}")));
    }
    let datum = SemiInvariantDatum::monomial(vec![k], vec![k], &[(0, 0, n - k)])?;
    Ok(WeightedInvariant::new(datum, n, format!("det_{k}")))
}

/// `f_{i,j}` with blocks `(j-1, n-i+1)`, `(j, n-i)` and polynomial grid
/// `[[x^{n-j+1}, 0], [x, x^i]]`, for `1 <= j < i-1 <= n-1`.
pub fn f_ij(n: usize, i: usize, j: usize) -> Result<WeightedInvariant> {
    if !(1 <= j && j + 1 < i && i <= n) {
        return Err(Error::Index(format!("f_ij needs 1 <= j < i-1 <= n-1, got ({i},{j}) at n = {n}")));
    }
    let datum = SemiInvariantDatum::monomial(
        vec![j - 1, n - i + 1],
        vec![j, n - i],
        &[(0, 0, n - j + 1), (1, 0, 1), (1, 1, i)],
    )?;
    Ok(WeightedInvariant::new(datum, n, format!("f_{{{i},{j}}}")))
}

/// The toric invariant with one row block `(k)` and `k` column blocks of
/// size one, `P = (x^{n-k}, x^{n-k+1}, ..., x^{n-1})`.
pub fn f_k(n: usize, k: usize) -> Result<WeightedInvariant> {
    if k == 0 || k >= n {
        return Err(Error::Index(format!("f_k needs 1 <= k <= n-1, got k = {k}, n = {n}")));
    }
    let entries: Vec<_> = (0..k).map(|l| (0, l, n - k + l)).collect();
    let datum = SemiInvariantDatum::monomial(vec![k], vec![1; k], &entries)?;
    Ok(WeightedInvariant::new(datum, n, format!("f_{k}")))
}

/// The generators of the `U`-invariants for `n = 3`, in the order
/// `f_{3,1}, f_1, f_2, det_1`, where `f_1 = ((2), (1,1), (x, x^2))` and
/// `f_2 = ((1,1), (2), (x^2, x))`.
pub fn n3_invariants() -> [WeightedInvariant; 4] {
    let f31 = f_ij(3, 3, 1).expect("valid indices");
    let f1 = SemiInvariantDatum::monomial(vec![2], vec![1, 1], &[(0, 0, 1), (0, 1, 2)]).expect("valid datum");
    let f2 = SemiInvariantDatum::monomial(vec![1, 1], vec![2], &[(0, 0, 2), (1, 0, 1)]).expect("valid datum");
    [
        f31,
        WeightedInvariant::new(f1, 3, "f_1"),
        WeightedInvariant::new(f2, 3, "f_2"),
        det_k(3, 1).expect("valid index"),
    ]
}

/// The semi-invariant `g_{i,j}` of weight [`chi_extract`] whose value on a
/// matrix `H` of the Borel normal-form pattern is `H_{i,j}`.
pub fn g_ij(n: usize, i: usize, j: usize) -> Result<WeightedInvariant> {
    if !(j >= 1 && j + 2 <= i && i <= n) {
        return Err(Error::Index(format!("g_ij needs 1 <= j, j+2 <= i <= n, got ({i},{j}) at n = {n}")));
    }
    let m = n - i + 1;
    let except = |skip: &[usize]| -> Vec<usize> { (1..n).filter(|x| !skip.contains(x)).collect() };
    let (rows, cols, mut entries): (Vec<usize>, Vec<usize>, Vec<(usize, usize, usize)>);
    let diag_from: usize;
    if m != j && m + 1 != j {
        let rest = except(&[j - 1, j, m]);
        rows = [vec![j - 1, m, j], rest.clone()].concat();
        cols = [vec![j, m, j - 1], rest].concat();
        entries = vec![(0, 0, n - j + 1), (2, 2, n - j + 1), (1, 0, 1), (1, 1, i), (2, 1, i - j)];
        diag_from = 3;
    } else if m == j {
        let rest = except(&[j - 1, j]);
        rows = [vec![j - 1, j], rest.clone()].concat();
        cols = [vec![j, j - 1], rest].concat();
        entries = vec![(0, 0, n - j + 1), (1, 1, n - j + 1), (1, 0, 1)];
        diag_from = 2;
    } else if j == 2 {
        rows = [vec![2, 1], (3..n).collect()].concat();
        cols = [vec![1, 2], (3..n).collect()].concat();
        entries = vec![(0, 0, n - 2), (0, 1, n - 1), (1, 1, 1)];
        diag_from = 2;
    } else {
        rows = [vec![j, j - 1], except(&[j - 1, j])].concat();
        cols = [vec![1, j, j - 1], except(&[1, j - 1, j])].concat();
        entries = vec![(0, 1, n - j + 1), (2, 2, n - j + 1), (1, 1, 1), (1, 2, n - j + 2), (0, 0, n - j)];
        diag_from = 3;
    }
    entries.extend((diag_from..rows.len()).map(|k| (k, k, n - rows[k])));
    let datum = SemiInvariantDatum::monomial(rows, cols, &entries)?;
    Ok(WeightedInvariant::new(datum, n, format!("g_{{{i},{j}}}")))
}

/// `sum_{k=1}^{n-1} (omega_{n-k+1} + ... + omega_n) - (omega_1 + ... + omega_k)`,
/// the common weight of all `g_{i,j}` and of `prod_k det_k`.
pub fn chi_extract(n: usize) -> Character {
    (1..n).fold(Character::zero(n), |acc, k| {
        let plus = &acc + &Character::omega_range(n, n - k + 1, n);
        &plus - &Character::omega_range(n, 1, k)
    })
}

/// Samples `f(b N b^{-1}) = chi(b) f(N)` for `matrices` random nilpotent `N`
/// and `elements` random `b` in `B` each.
pub fn verify_semiinvariance(inv: &WeightedInvariant, n: usize, matrices: usize, elements: usize, seed: u64) -> Result<bool> {
    let mut s = Sampler::new(seed);
    for _ in 0..matrices {
        let nil = s.nilpotent(n);
        let base = inv.eval(&nil)?;
        for _ in 0..elements {
            let b = s.borel(n);
            let lhs = inv.eval(&conjugate(&b, &nil)?)?;
            if lhs != inv.weight.eval(&b)? * &base {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Samples `f(u N u^{-1}) = f(N)` for random `u` in `U`.
pub fn verify_u_invariance(inv: &WeightedInvariant, n: usize, matrices: usize, elements: usize, seed: u64) -> Result<bool> {
    let mut s = Sampler::new(seed);
    for _ in 0..matrices {
        let nil = s.nilpotent(n);
        let base = inv.eval(&nil)?;
        for _ in 0..elements {
            let u = s.unipotent(n);
            if inv.eval(&conjugate(&u, &nil)?)? != base {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A random datum for `n`: size `r <= 2n`, block sizes in `[1, n]`, and
/// polynomials of degree below `n` with roughly half the grid zero.
pub fn random_datum(n: usize, s: &mut Sampler) -> SemiInvariantDatum {
    let r = s.int_in(1, 2 * n as i64) as usize;
    let rows = random_composition(r, n, s);
    let cols = random_composition(r, n, s);
    let polys = rows
        .iter()
        .map(|_| {
            cols.iter()
                .map(|_| {
                    if s.int_in(0, 1) == 0 {
                        return Polynomial::zero();
                    }
                    let coeffs = (0..n).map(|_| if s.int_in(0, 2) == 0 { s.rational() } else { rational::int(0) });
                    Polynomial::new(coeffs.collect())
                })
                .collect()
        })
        .collect();
    SemiInvariantDatum::new(rows, cols, polys).expect("compositions of the same r")
}

fn random_composition(r: usize, max_part: usize, s: &mut Sampler) -> Vec<usize> {
    let mut parts = Vec::new();
    let mut left = r;
    while left > 0 {
        let p = s.int_in(1, left.min(max_part) as i64) as usize;
        parts.push(p);
        left -= p;
    }
    parts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::random_nilpotent;
    use crate::rational::int;

    fn n3() -> Matrix {
        Matrix::from_ints(&[[0, 0, 0], [1, 0, 0], [0, 2, 0]])
    }

    #[test]
    fn block_matrices() {
        let d = SemiInvariantDatum::monomial(vec![1], vec![1], &[(0, 0, 1)]).unwrap();
        let n = Matrix::from_ints(&[[0, 0], [7, 0]]);
        assert_eq!(block_matrix(&n, &d).unwrap(), Matrix::from_ints(&[[7]]));
        assert_eq!(eval(&n, &d).unwrap(), int(7));

        let d2 = SemiInvariantDatum::monomial(vec![1], vec![1], &[(0, 0, 2)]).unwrap();
        assert_eq!(block_matrix(&n3(), &d2).unwrap(), Matrix::from_ints(&[[2]]));

        let zero = SemiInvariantDatum::monomial(vec![2, 1], vec![1, 2], &[]).unwrap();
        assert!(block_matrix(&n3(), &zero).unwrap().is_zero());

        let big = SemiInvariantDatum::monomial(vec![4], vec![4], &[(0, 0, 0)]).unwrap();
        assert!(matches!(block_matrix(&n3(), &big), Err(Error::Shape(_))));
    }

    #[test]
    fn datum_validation() {
        assert!(SemiInvariantDatum::monomial(vec![2], vec![1], &[]).is_err());
        assert!(SemiInvariantDatum::new(vec![1], vec![1], vec![]).is_err());
        let d = SemiInvariantDatum::monomial(vec![0, 2], vec![1, 1, 0], &[(1, 0, 1), (1, 1, 2)]).unwrap();
        assert_eq!(d.row_blocks(), &[2]);
        assert_eq!(d.col_blocks(), &[1, 1]);
        assert_eq!(d.poly(0, 1), &Polynomial::power(2));
    }

    #[test]
    fn det1_closed_form() {
        let d1 = det_k(3, 1).unwrap();
        assert_eq!(d1.eval(&n3()).unwrap(), int(2));
        for seed in 0..20 {
            let n = random_nilpotent(3, seed);
            let closed = &n[(1, 0)] * &n[(2, 1)] - &n[(1, 1)] * &n[(2, 0)];
            assert_eq!(d1.eval(&n).unwrap(), closed);
        }
    }

    #[test]
    fn zero_matrix_kills_positive_valuation() {
        let mut s = Sampler::new(5);
        for _ in 0..20 {
            let d = random_datum(3, &mut s);
            let positive = d.polys().iter().flatten().all(|p| p.valuation().is_none_or(|v| v > 0));
            if positive {
                assert!(eval(&Matrix::zeros(3, 3), &d).unwrap().is_zero());
            }
        }
        assert!(det_k(4, 2).unwrap().eval(&Matrix::zeros(4, 4)).unwrap().is_zero());
    }

    #[test]
    fn weights() {
        let f1 = SemiInvariantDatum::monomial(vec![2], vec![1, 1], &[]).unwrap();
        assert_eq!(weight_of(&f1, 3), Character(vec![-2, 1, 1]));
        let f21 = SemiInvariantDatum::monomial(vec![1], vec![1], &[]).unwrap();
        assert_eq!(weight_of(&f21, 2), Character(vec![-1, 1]));
        let full = SemiInvariantDatum::monomial(vec![4], vec![4], &[]).unwrap();
        assert_eq!(weight_of(&full, 4), Character::zero(4));
    }

    #[test]
    fn det_k_data() {
        assert_eq!(det_k(3, 1).unwrap().eval(&n3()).unwrap(), int(2));
        let f21 = SemiInvariantDatum::monomial(vec![1], vec![1], &[(0, 0, 1)]).unwrap();
        assert_eq!(det_k(2, 1).unwrap().datum, f21);
        assert!(det_k(3, 0).is_err() && det_k(3, 3).is_err());
    }

    #[test]
    fn f_ij_data() {
        let f31 = f_ij(3, 3, 1).unwrap();
        assert_eq!(f31.datum, SemiInvariantDatum::monomial(vec![1], vec![1], &[(0, 0, 1)]).unwrap());
        let n = random_nilpotent(3, 2);
        assert_eq!(f31.eval(&n).unwrap(), n[(2, 0)]);
        let f42 = f_ij(4, 4, 2).unwrap();
        assert_eq!(f42.datum.row_blocks(), &[1, 1]);
        assert_eq!(f42.datum.col_blocks(), &[2]);
        assert!(f_ij(4, 3, 2).is_err() && f_ij(4, 5, 1).is_err());
        for n in 3..7 {
            for i in 1..=n {
                for j in 1..(i as usize).saturating_sub(1) {
                    let d = f_ij(n, i, j).unwrap().datum;
                    assert_eq!(d.row_blocks().iter().sum::<usize>(), d.col_blocks().iter().sum::<usize>());
                }
            }
        }
    }

    #[test]
    fn n3_closed_forms_on_toric_matrix() {
        let h = Matrix::from_ints(&[[0, 0, 0], [1, 0, 0], [0, 2, 0]]);
        let [f31, f1, f2, d1] = n3_invariants();
        assert_eq!(f1.eval(&h).unwrap(), int(2));
        assert_eq!(f2.eval(&h).unwrap(), int(4));
        assert_eq!(d1.eval(&h).unwrap(), int(2));
        assert_eq!(f31.eval(&h).unwrap(), int(0));
        assert_eq!(f31.weight, d1.weight);
        assert_eq!(f31.weight, Character(vec![-1, 0, 1]));
    }

    #[test]
    fn n3_closed_forms_on_random_nilpotents() {
        let [_, f1, f2, d1] = n3_invariants();
        for seed in 0..30 {
            let n = random_nilpotent(3, seed);
            let e = |i: usize, j: usize| n[(i - 1, j - 1)].clone();
            let det1 = d1.eval(&n).unwrap();
            let f1_closed = e(2, 1) * &det1 + e(3, 1) * (e(2, 1) * e(3, 3) - e(3, 1) * e(2, 3));
            let f2_closed = e(3, 2) * &det1 + e(3, 1) * (e(1, 1) * e(3, 2) - e(1, 2) * e(3, 1));
            assert_eq!(f1.eval(&n).unwrap(), f1_closed);
            assert_eq!(f2.eval(&n).unwrap(), f2_closed);
        }
    }

    #[test]
    fn chi_extract_values() {
        assert_eq!(chi_extract(2), Character(vec![-1, 1]));
        assert_eq!(chi_extract(3), Character(vec![-2, 0, 2]));
        for n in 2..8 {
            let sum = (1..n).fold(Character::zero(n), |acc, k| &acc + &det_k(n, k).unwrap().weight);
            assert_eq!(chi_extract(n), sum);
        }
    }

    #[test]
    fn g_ij_weights() {
        for n in 3..=6 {
            for i in 3..=n {
                for j in 1..=i - 2 {
                    let g = g_ij(n, i, j).unwrap();
                    assert_eq!(g.weight, chi_extract(n), "g_({i},{j}) at n = {n}");
                }
            }
        }
        assert!(g_ij(3, 2, 1).is_err() && g_ij(3, 4, 1).is_err() && g_ij(4, 4, 0).is_err());
    }

    #[test]
    fn semiinvariance_is_falsifiable() {
        let good = det_k(3, 1).unwrap();
        assert!(verify_semiinvariance(&good, 3, 5, 3, 1).unwrap());
        let mut bad = good.clone();
        bad.weight = Character::zero(3);
        assert!(!verify_semiinvariance(&bad, 3, 5, 3, 1).unwrap());
        assert!(verify_u_invariance(&bad, 3, 5, 3, 1).unwrap());
    }

    #[test]
    fn datum_json() {
        let json = r#"{"row_blocks":[2],"col_blocks":[1,1],"polys":[[["0","1"],["0","0","1"]]]}"#;
        let d: SemiInvariantDatum = serde_json::from_str(json).unwrap();
        assert_eq!(d, n3_invariants()[1].datum);
        assert_eq!(serde_json::to_string(&d).unwrap(), json);
        assert!(serde_json::from_str::<SemiInvariantDatum>(r#"{"row_blocks":[2],"col_blocks":[1],"polys":[[[]]]}"#).is_err());
    }
}
