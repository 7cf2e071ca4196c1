//! Toric invariants: semi-invariants whose value on a matrix of the
//! unipotent normal-form pattern depends only on its subdiagonal, their
//! exponent vectors, and the cone and semigroup those exponents generate.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::Character;
use crate::matrix::Matrix;
use crate::rational::{self, Rational};
use crate::semiinv::{block_matrix, eval, SemiInvariantDatum};

/// Row and column block sizes of a toric invariant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockPair {
    pub n: usize,
    pub a: Vec<usize>,
    pub a_prime: Vec<usize>,
}

impl BlockPair {
    pub fn new(n: usize, a: Vec<usize>, a_prime: Vec<usize>) -> Result<Self> {
        if a.is_empty() || a_prime.is_empty() {
            return Err(Error::Shape("block sequences must be nonempty".into()));
        }
        if a.iter().chain(&a_prime).any(|&x| x == 0 || x >= n) {
            return Err(Error::Shape(format!("block sizes must lie in [1, {}]", n.saturating_sub(1))));
        }
        if a.iter().sum::<usize>() != a_prime.iter().sum::<usize>() {
            return Err(Error::Shape("block sizes must have equal sums".into()));
        }
        Ok(BlockPair { n, a, a_prime })
    }

    pub fn r(&self) -> usize {
        self.a.iter().sum()
    }

    pub fn s(&self) -> usize {
        self.a.len()
    }

    pub fn t(&self) -> usize {
        self.a_prime.len()
    }

    pub fn is_sorted(&self) -> bool {
        self.a.is_sorted() && self.a_prime.is_sorted()
    }
}

/// `(h_1, ..., h_{n-1})` with `f(H) = lambda * x_1^{h_1} ... x_{n-1}^{h_{n-1}}`
/// on toric matrices with subdiagonal `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ToricExponent(pub Vec<u64>);

/// The character of `B` by which a toric invariant with these exponents
/// transforms: `sum_i h_i (omega_{i+1} - omega_i)`.
pub fn exponent_weight(h: &ToricExponent) -> Character {
    let n = h.0.len() + 1;
    let mut w = Character::zero(n);
    for (i, &e) in h.0.iter().enumerate() {
        let step = &Character::omega(n, i + 2) - &Character::omega(n, i + 1);
        for _ in 0..e {
            w = &w + &step;
        }
    }
    w
}

/// The subdiagonal of `H`, everything else cleared.
pub fn toric_part(h: &Matrix) -> Result<Matrix> {
    let n = h.rows();
    if !h.is_square() || !h.is_strictly_lower() || (1..n).any(|i| h[(i, i - 1)].is_zero()) {
        return Err(Error::Precondition("matrix is not in the unipotent normal-form pattern".into()));
    }
    Ok(Matrix::from_fn(n, n, |i, j| if i == j + 1 { h[(i, j)].clone() } else { Rational::zero() }))
}

fn proper_subset_sums(xs: &[usize]) -> BTreeSet<(usize, bool)> {
    // (sum, subset is empty) over all proper subsets.
    let full = (1u32 << xs.len()) - 1;
    (0..full)
        .map(|mask| {
            let sum = xs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, x)| x).sum();
            (sum, mask == 0)
        })
        .collect()
}

/// No proper subsets `I`, `I'` (not both empty) with equal sums.
pub fn is_sum_free(bp: &BlockPair) -> bool {
    let left = proper_subset_sums(&bp.a);
    let right = proper_subset_sums(&bp.a_prime);
    !left.iter().any(|&(x, e)| right.iter().any(|&(y, f)| x == y && !(e && f)))
}

/// Block combinatorics of a pair, all indices one-based.
///
/// With prefix sums `A(k) = a_1 + ... + a_k` and `A'` likewise, `hc(k)` is
/// the least `c` with `A'(c) > A(k)`, `hs(k) = A'(hc(k)) - A(k)` and
/// `ch(k) = a'_{hc(k)} - hs(k)`; `vc`, `vs`, `cv` swap the roles of `a`
/// and `a'`. `hb(i)` is the block of `a` containing position `i` and
/// `hd(i)` the position inside it; `vb`, `vd` do the same for `a'`.
#[derive(Clone, Debug)]
pub struct Combinatorics {
    a: Vec<usize>,
    a_prime: Vec<usize>,
    pa: Vec<usize>,
    pa_prime: Vec<usize>,
}

fn prefix(xs: &[usize]) -> Vec<usize> {
    std::iter::once(0)
        .chain(xs.iter().scan(0, |acc, x| {
            *acc += x;
            Some(*acc)
        }))
        .collect()
}

fn change(p_self: &[usize], p_other: &[usize], k: usize) -> Result<(usize, usize)> {
    if k == 0 {
        return Ok((0, 0));
    }
    if k >= p_self.len() - 1 {
        return Err(Error::Index(format!("no positive split after block {k}")));
    }
    let c = (1..p_other.len()).find(|&c| p_other[c] > p_self[k]).expect("k < s");
    Ok((c, p_other[c] - p_self[k]))
}

fn block(p: &[usize], i: usize) -> Result<(usize, usize)> {
    if i == 0 || i > *p.last().unwrap() {
        return Err(Error::Index(format!("position {i} outside 1..={}", p.last().unwrap())));
    }
    let b = (1..p.len()).find(|&b| p[b] >= i).unwrap();
    Ok((b, i - p[b - 1]))
}

impl Combinatorics {
    pub fn new(bp: &BlockPair) -> Self {
        Combinatorics {
            a: bp.a.clone(),
            a_prime: bp.a_prime.clone(),
            pa: prefix(&bp.a),
            pa_prime: prefix(&bp.a_prime),
        }
    }

    /// Defined for `0 <= k < s`, with `hc(0) = 0`.
    pub fn hc(&self, k: usize) -> Result<usize> {
        Ok(change(&self.pa, &self.pa_prime, k)?.0)
    }

    /// Defined for `1 <= k < s`.
    pub fn hs(&self, k: usize) -> Result<usize> {
        if k == 0 {
            return Err(Error::Index("hs(0) is undefined".into()));
        }
        Ok(change(&self.pa, &self.pa_prime, k)?.1)
    }

    pub fn ch(&self, k: usize) -> Result<usize> {
        let hs = self.hs(k)?;
        Ok(self.a_prime[self.hc(k)? - 1] - hs)
    }

    pub fn vc(&self, k: usize) -> Result<usize> {
        Ok(change(&self.pa_prime, &self.pa, k)?.0)
    }

    pub fn vs(&self, k: usize) -> Result<usize> {
        if k == 0 {
            return Err(Error::Index("vs(0) is undefined".into()));
        }
        Ok(change(&self.pa_prime, &self.pa, k)?.1)
    }

    pub fn cv(&self, k: usize) -> Result<usize> {
        let vs = self.vs(k)?;
        Ok(self.a[self.vc(k)? - 1] - vs)
    }

    pub fn hb(&self, i: usize) -> Result<usize> {
        Ok(block(&self.pa, i)?.0)
    }

    pub fn hd(&self, i: usize) -> Result<usize> {
        Ok(block(&self.pa, i)?.1)
    }

    pub fn vb(&self, j: usize) -> Result<usize> {
        Ok(block(&self.pa_prime, j)?.0)
    }

    pub fn vd(&self, j: usize) -> Result<usize> {
        Ok(block(&self.pa_prime, j)?.1)
    }
}

/// `vd(j) < hd(i) + n - a_{hb(i)}`, one-based `i` and `j`.
pub fn is_acceptable_entry(i: usize, j: usize, bp: &BlockPair) -> Result<bool> {
    let c = Combinatorics::new(bp);
    let (hb, hd) = (c.hb(i)?, c.hd(i)?);
    Ok(c.vd(j)? + bp.a[hb - 1] < hd + bp.n)
}

/// An acceptable permutation of `1..=r`, returned as `sigma[i - 1] = sigma(i)`.
///
/// Starting from the identity, for each `k = 1, ..., s-1` with
/// `c = hc(k)`, positions `A'(c-1) < i <= A(k)` move to `i + hs(k)` and
/// positions `A(k) < i <= A'(c)` to `i - ch(k)`; this cyclically rotates
/// column block `c` so that the split row boundary lines up.
pub fn accperm(bp: &BlockPair) -> Result<Vec<usize>> {
    if !is_sum_free(bp) {
        return Err(Error::Precondition(format!("{:?}, {:?} share a partial sum", bp.a, bp.a_prime)));
    }
    if !bp.is_sorted() {
        return Err(Error::Precondition("block sizes must be sorted ascending".into()));
    }
    let c = Combinatorics::new(bp);
    let mut sigma: Vec<usize> = (1..=bp.r()).collect();
    for k in 1..bp.s() {
        let (col, hs, ch) = (c.hc(k)?, c.hs(k)?, c.ch(k)?);
        for i in c.pa_prime[col - 1] + 1..=c.pa[k] {
            sigma[i - 1] = i + hs;
        }
        for i in c.pa[k] + 1..=c.pa_prime[col] {
            sigma[i - 1] = i - ch;
        }
    }
    Ok(sigma)
}

/// The monomial datum selecting the entries `(i, sigma(i))`: the polynomial
/// of block `(hb(i), vb(sigma(i)))` is `x^{n - a_{hb(i)} + hd(i) - vd(sigma(i))}`
/// and all other blocks are zero.
pub fn induced_datum(bp: &BlockPair, sigma: &[usize]) -> Result<SemiInvariantDatum> {
    let c = Combinatorics::new(bp);
    let mut exps: HashMap<(usize, usize), usize> = HashMap::new();
    for (idx, &j) in sigma.iter().enumerate() {
        let i = idx + 1;
        let (k, hd) = (c.hb(i)?, c.hd(i)?);
        let (l, vd) = (c.vb(j)?, c.vd(j)?);
        if vd >= hd + bp.n - bp.a[k - 1] {
            return Err(Error::NotAcceptable(format!("entry ({i},{j})")));
        }
        let e = bp.n - bp.a[k - 1] + hd - vd;
        if *exps.entry((k - 1, l - 1)).or_insert(e) != e {
            return Err(Error::NotAcceptable(format!("block ({k},{l}) needs two different exponents")));
        }
    }
    let entries: Vec<_> = exps.into_iter().map(|((k, l), e)| (k, l, e)).collect();
    SemiInvariantDatum::monomial(bp.a.clone(), bp.a_prime.clone(), &entries)
}

/// The sum-free toric invariant of a sorted sum-free block pair.
pub fn sum_free_datum(bp: &BlockPair) -> Result<SemiInvariantDatum> {
    induced_datum(bp, &accperm(bp)?)
}

fn permutation_sign(sigma: &[usize]) -> i64 {
    let mut seen = vec![false; sigma.len()];
    let mut sign = 1;
    for start in 0..sigma.len() {
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = sigma[i] - 1;
            len += 1;
        }
        if len > 0 && len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationTerm {
    #[serde(with = "crate::rational::text")]
    pub value: Rational,
    /// `sign(sigma)` times the coefficients of the selected blocks.
    #[serde(with = "crate::rational::text")]
    pub lambda: Rational,
}

/// The single term `sign(sigma) prod_i (H^P)_{i, sigma(i)}` of `det(H^P)`.
pub fn eval_via_permutation(h: &Matrix, datum: &SemiInvariantDatum, sigma: &[usize]) -> Result<PermutationTerm> {
    let m = block_matrix(h, datum)?;
    if sigma.len() != m.rows() {
        return Err(Error::Shape("permutation length differs from the datum size".into()));
    }
    let rows = prefix(datum.row_blocks());
    let cols = prefix(datum.col_blocks());
    let sign = permutation_sign(sigma);
    let mut value = rational::int(sign);
    let mut lambda = rational::int(sign);
    for (idx, &j) in sigma.iter().enumerate() {
        let entry = &m[(idx, j - 1)];
        if entry.is_zero() {
            return Err(Error::NotAcceptable(format!("entry ({},{j}) vanishes", idx + 1)));
        }
        value *= entry;
        let (k, _) = block(&rows, idx + 1)?;
        let (l, _) = block(&cols, j)?;
        let (_, c) = datum
            .poly(k - 1, l - 1)
            .as_monomial()
            .ok_or_else(|| Error::Precondition(format!("block ({k},{l}) is not a monomial")))?;
        lambda *= c;
    }
    Ok(PermutationTerm { value, lambda })
}

/// `h_{n-1} = s` and, for `l < n-1`,
/// `h_l = t + sum_{k=2}^{l} #{j : a'_j >= k} - sum_{k=1}^{l-1} #{i : a_i >= n-k}`.
pub fn toric_exponents(bp: &BlockPair) -> Result<ToricExponent> {
    if !is_sum_free(bp) {
        return Err(Error::Precondition("block pair is not sum-free".into()));
    }
    let n = bp.n;
    let count = |xs: &[usize], k: usize| xs.iter().filter(|&&x| x >= k).count() as i64;
    let mut h = Vec::with_capacity(n - 1);
    for l in 1..n - 1 {
        let up: i64 = (2..=l).map(|k| count(&bp.a_prime, k)).sum();
        let down: i64 = (1..l).map(|k| count(&bp.a, n - k)).sum();
        let v = bp.t() as i64 + up - down;
        if v < 0 {
            return Err(Error::Internal(format!("negative exponent at position {l}")));
        }
        h.push(v as u64);
    }
    h.push(bp.s() as u64);
    Ok(ToricExponent(h))
}

const ORACLE_PRIMES: [[u64; 8]; 2] = [
    [101, 103, 107, 109, 113, 127, 131, 137],
    [139, 149, 151, 157, 163, 167, 173, 179],
];

fn toric_matrix(n: usize, sub: &[Rational]) -> Matrix {
    Matrix::from_fn(n, n, |i, j| if i == j + 1 { sub[j].clone() } else { Rational::zero() })
}

fn strip_prime(v: &mut BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut e = 0;
    while !v.is_zero() && (&*v % &p).is_zero() {
        *v /= &p;
        e += 1;
    }
    e
}

/// Exponents of `f` read off by factoring its values on toric matrices
/// whose subdiagonals are two different sets of primes. The two readings
/// must agree, including the leftover coefficient.
pub fn toric_exponents_oracle(datum: &SemiInvariantDatum, n: usize) -> Result<ToricExponent> {
    if n < 2 || n > ORACLE_PRIMES[0].len() + 1 {
        return Err(Error::Scale(format!("oracle supports 2 <= n <= {}", ORACLE_PRIMES[0].len() + 1)));
    }
    let mut readings = Vec::new();
    for primes in &ORACLE_PRIMES {
        let sub: Vec<Rational> = primes[..n - 1].iter().map(|&p| rational::int(p as i64)).collect();
        let value = eval(&toric_matrix(n, &sub), datum)?;
        if value.is_zero() {
            return Err(Error::NotToric("vanishes on toric matrices".into()));
        }
        let mut num = value.numer().clone();
        let mut den = value.denom().clone();
        let mut h = Vec::with_capacity(n - 1);
        for &p in &primes[..n - 1] {
            let e = strip_prime(&mut num, p) - strip_prime(&mut den, p);
            if e < 0 {
                return Err(Error::NotToric("negative exponent".into()));
            }
            h.push(e as u64);
        }
        readings.push((h, Rational::new(num, den)));
    }
    if readings[0] != readings[1] {
        return Err(Error::NotToric("values are not a single monomial".into()));
    }
    Ok(ToricExponent(readings.swap_remove(0).0))
}

fn partitions(r: usize, max_part: usize, min_part: usize, out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>) {
    if r == 0 {
        out.push(cur.clone());
        return;
    }
    for p in min_part..=r.min(max_part) {
        cur.push(p);
        partitions(r - p, max_part, p, out, cur);
        cur.pop();
    }
}

/// Ascending partitions of `r` into parts of size at most `max_part`.
pub fn sorted_partitions(r: usize, max_part: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    partitions(r, max_part, 1, &mut out, &mut Vec::new());
    out
}

/// Every sorted sum-free pair with `1 <= r <= max_r` and blocks `<= n-1`,
/// ordered by `r`, then `a`, then `a'`.
pub fn sum_free_pairs(n: usize, max_r: usize) -> Vec<BlockPair> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    for r in 1..=max_r {
        let parts = sorted_partitions(r, n - 1);
        for a in &parts {
            for b in &parts {
                let bp = BlockPair { n, a: a.clone(), a_prime: b.clone() };
                if is_sum_free(&bp) {
                    out.push(bp);
                }
            }
        }
    }
    out
}

/// A rational polyhedral cone given by integer generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToricCone {
    pub dim: usize,
    pub generators: Vec<Vec<i64>>,
}

fn to_rationals(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rational::int(x)).collect()
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn subsets(len: usize, size: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, len: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..len {
            cur.push(i);
            go(i + 1, len, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, len, size, &mut Vec::new(), &mut out);
    out
}

/// Scales a rational vector to the primitive integer vector on its ray.
fn primitive(v: &[Rational]) -> Result<Vec<i64>> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.iter()
        .map(|x| (x / &g).to_i64().ok_or_else(|| Error::Scale("coordinate overflow".into())))
        .collect()
}

/// Maximum dimension handled by the exhaustive cone routines.
pub const MAX_CONE_DIM: usize = 4;

/// Largest number of lattice points scanned per parallelepiped.
pub const MAX_BOX_POINTS: u64 = 2_000_000;

impl ToricCone {
    /// Drops zero and duplicate generators and sorts the rest.
    pub fn new(dim: usize, generators: Vec<Vec<i64>>) -> Result<Self> {
        if generators.iter().any(|g| g.len() != dim) {
            return Err(Error::Shape(format!("generators must have length {dim}")));
        }
        let set: BTreeSet<Vec<i64>> = generators.into_iter().filter(|g| g.iter().any(|&x| x != 0)).collect();
        Ok(ToricCone { dim, generators: set.into_iter().collect() })
    }

    fn rank(&self) -> usize {
        if self.generators.is_empty() {
            return 0;
        }
        let cols: Vec<Vec<Rational>> = self.generators.iter().map(|g| to_rationals(g)).collect();
        Matrix::from_columns(self.dim, &cols).expect("lengths agree").rank()
    }

    /// Exact membership: `v` is a nonnegative combination of some linearly
    /// independent subset of the generators.
    pub fn contains(&self, v: &[i64]) -> bool {
        if v.iter().all(|&x| x == 0) {
            return true;
        }
        let target = to_rationals(v);
        let max = self.dim.min(self.generators.len());
        for size in 1..=max {
            for subset in subsets(self.generators.len(), size) {
                let mut cols: Vec<Vec<Rational>> = subset.iter().map(|&i| to_rationals(&self.generators[i])).collect();
                let basis = Matrix::from_columns(self.dim, &cols).expect("lengths agree");
                if basis.rank() != size {
                    continue;
                }
                cols.push(target.clone());
                let aug = Matrix::from_columns(self.dim, &cols).expect("lengths agree");
                // A kernel vector with nonzero last coordinate gives the
                // unique coefficients of v in this basis.
                for k in aug.nullspace() {
                    let last = &k[size];
                    if last.is_zero() {
                        continue;
                    }
                    if k[..size].iter().all(|c| !(-(c / last)).is_negative()) {
                        return true;
                    }
                }
            }
        }
        false
    }

    pub fn contains_cone(&self, other: &ToricCone) -> bool {
        other.generators.iter().all(|g| self.contains(g))
    }

    /// Equality by double inclusion of generators.
    pub fn same_cone(&self, other: &ToricCone) -> bool {
        self.dim == other.dim && self.contains_cone(other) && other.contains_cone(self)
    }

    pub fn is_strongly_convex(&self) -> bool {
        self.generators.iter().all(|g| !self.contains(&g.iter().map(|x| -x).collect::<Vec<_>>()))
    }

    /// Primitive inner facet normals, which generate the dual cone.
    /// Requires a full-dimensional strongly convex cone.
    pub fn facet_normals(&self) -> Result<Vec<Vec<i64>>> {
        let d = self.dim;
        if d > MAX_CONE_DIM {
            return Err(Error::Scale(format!("dimension {d} exceeds {MAX_CONE_DIM}")));
        }
        if d == 0 || self.rank() != d || !self.is_strongly_convex() {
            return Err(Error::Unsupported("dual of a cone that is not full-dimensional and strongly convex".into()));
        }
        if d == 1 {
            return Ok(vec![vec![self.generators[0][0].signum()]]);
        }
        let mut normals = BTreeSet::new();
        for subset in subsets(self.generators.len(), d - 1) {
            let rows: Vec<Vec<Rational>> = subset.iter().map(|&i| to_rationals(&self.generators[i])).collect();
            let m = Matrix::from_rows(rows)?;
            let kernel = m.nullspace();
            if kernel.len() != 1 {
                continue;
            }
            let mut normal = primitive(&kernel[0])?;
            let pairings: Vec<i64> = self.generators.iter().map(|g| dot(&normal, g)).collect();
            if pairings.iter().all(|&p| p <= 0) {
                normal.iter_mut().for_each(|x| *x = -*x);
            } else if !pairings.iter().all(|&p| p >= 0) {
                continue;
            }
            normals.insert(normal);
        }
        Ok(normals.into_iter().collect())
    }

    pub fn dual(&self) -> Result<ToricCone> {
        ToricCone::new(self.dim, self.facet_normals()?)
    }

    /// The minimal generating set of the semigroup of lattice points in the
    /// cone.
    ///
    /// Every irreducible lattice point is a generator or lies in the
    /// half-open parallelepiped spanned by some linearly independent
    /// `d`-subset of generators; those points are collected and the
    /// reducible ones removed.
    pub fn hilbert_basis(&self) -> Result<Vec<Vec<i64>>> {
        let d = self.dim;
        let normals = self.facet_normals()?;
        let inside = |v: &[i64]| normals.iter().all(|m| dot(m, v) >= 0);
        let mut candidates: BTreeSet<Vec<i64>> = self.generators.iter().cloned().collect();
        for subset in subsets(self.generators.len(), d) {
            let gens: Vec<&Vec<i64>> = subset.iter().map(|&i| &self.generators[i]).collect();
            let cols: Vec<Vec<Rational>> = gens.iter().map(|g| to_rationals(g)).collect();
            let basis = Matrix::from_columns(d, &cols)?;
            let Ok(inv) = basis.inverse() else { continue };
            let lo: Vec<i64> = (0..d).map(|c| gens.iter().map(|g| g[c].min(0)).sum()).collect();
            let hi: Vec<i64> = (0..d).map(|c| gens.iter().map(|g| g[c].max(0)).sum()).collect();
            let points: u64 = lo.iter().zip(&hi).map(|(l, h)| (h - l + 1) as u64).product();
            if points > MAX_BOX_POINTS {
                return Err(Error::Scale(format!("parallelepiped box of {points} points")));
            }
            let mut point = lo.clone();
            loop {
                let coeffs = inv.mul_vec(&to_rationals(&point))?;
                if coeffs.iter().all(|c| !c.is_negative() && c < &Rational::one()) && point.iter().any(|&x| x != 0) {
                    candidates.insert(point.clone());
                }
                let mut c = 0;
                while c < d {
                    if point[c] < hi[c] {
                        point[c] += 1;
                        break;
                    }
                    point[c] = lo[c];
                    c += 1;
                }
                if c == d {
                    break;
                }
            }
        }
        let grade = |v: &[i64]| -> i64 { normals.iter().map(|m| dot(m, v)).sum() };
        let all: Vec<Vec<i64>> = candidates.into_iter().collect();
        let basis: Vec<Vec<i64>> = all
            .iter()
            .filter(|v| {
                !all.iter().any(|u| {
                    u != *v && grade(u) < grade(v) && inside(&v.iter().zip(u).map(|(x, y)| x - y).collect::<Vec<_>>())
                })
            })
            .cloned()
            .collect();
        Ok(basis)
    }
}

/// Whether `v` is a nonnegative integer combination of `gens`; all vectors
/// are assumed nonnegative.
pub fn in_semigroup(v: &[i64], gens: &[Vec<i64>]) -> bool {
    fn go(v: Vec<i64>, gens: &[Vec<i64>], memo: &mut HashMap<Vec<i64>, bool>) -> bool {
        if v.iter().all(|&x| x == 0) {
            return true;
        }
        if let Some(&known) = memo.get(&v) {
            return known;
        }
        let found = gens.iter().any(|g| {
            g.iter().any(|&x| x != 0)
                && g.iter().zip(&v).all(|(x, y)| x <= y)
                && go(v.iter().zip(g).map(|(y, x)| y - x).collect(), gens, memo)
        });
        memo.insert(v, found);
        found
    }
    go(v.to_vec(), gens, &mut HashMap::new())
}

/// Elements not expressible through the remaining ones.
pub fn minimal_generators(vectors: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let set: BTreeSet<Vec<i64>> = vectors.iter().filter(|v| v.iter().any(|&x| x != 0)).cloned().collect();
    let all: Vec<Vec<i64>> = set.into_iter().collect();
    all.iter()
        .filter(|v| {
            let others: Vec<Vec<i64>> = all.iter().filter(|u| u != v).cloned().collect();
            !in_semigroup(v, &others)
        })
        .cloned()
        .collect()
}

/// The default enumeration bound `2(n-1)` on the size of the data.
pub fn default_enumeration_bound(n: usize) -> usize {
    2 * n.saturating_sub(1)
}

/// The exponents of all sum-free toric invariants up to the bound, reduced
/// to a minimal generating set of the semigroup they generate.
pub fn toric_generators(n: usize, enumeration_bound: usize) -> Result<Vec<Vec<i64>>> {
    let exps: Vec<Vec<i64>> = sum_free_pairs(n, enumeration_bound)
        .iter()
        .map(|bp| Ok(toric_exponents(bp)?.0.iter().map(|&h| h as i64).collect()))
        .collect::<Result<_>>()?;
    Ok(minimal_generators(&exps))
}

pub fn toric_cone(n: usize, enumeration_bound: usize) -> Result<ToricCone> {
    if n < 2 {
        return Err(Error::Precondition("toric cones need n >= 2".into()));
    }
    ToricCone::new(n - 1, toric_generators(n, enumeration_bound)?)
}
