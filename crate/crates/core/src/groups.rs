//! Upper-block parabolic, Borel and unipotent subgroups of `GL_n`, their
//! characters, conjugation, and seeded sampling of group elements and
//! nilpotent matrices.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rational::{self, Rational};

/// Block sizes `(b_1, ..., b_p)` of an upper-block parabolic subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ShapeRepr", into = "ShapeRepr")]
pub struct ParabolicShape {
    n: usize,
    blocks: Vec<usize>,
    dims: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct ShapeRepr {
    n: usize,
    blocks: Vec<usize>,
}

impl TryFrom<ShapeRepr> for ParabolicShape {
    type Error = Error;

    fn try_from(r: ShapeRepr) -> Result<Self> {
        let shape = ParabolicShape::new(r.blocks)?;
        if shape.n != r.n {
            return Err(Error::Shape(format!("blocks sum to {} but n = {}", shape.n, r.n)));
        }
        Ok(shape)
    }
}

impl From<ParabolicShape> for ShapeRepr {
    fn from(s: ParabolicShape) -> Self {
        ShapeRepr { n: s.n, blocks: s.blocks }
    }
}

impl ParabolicShape {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(Error::Shape(format!("block sizes must be positive, got {blocks:?}")));
        }
        let dims: Vec<usize> = blocks
            .iter()
            .scan(0, |acc, b| {
                *acc += b;
                Some(*acc)
            })
            .collect();
        Ok(ParabolicShape { n: *dims.last().unwrap(), blocks, dims })
    }

    pub fn borel(n: usize) -> Self {
        Self::new(vec![1; n]).expect("n >= 1")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    /// Cumulative dimensions `(d_1, ..., d_p)` with `d_p = n`.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_borel(&self) -> bool {
        self.blocks.iter().all(|&b| b == 1)
    }

    /// Zero-based index of the block containing the zero-based coordinate `i`.
    pub fn block_of(&self, i: usize) -> usize {
        self.dims.iter().position(|&d| i < d).expect("coordinate inside the shape")
    }
}

/// A group `B`, `U`, or an upper-block parabolic `P`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum GroupKind {
    Borel,
    Unipotent,
    Parabolic { shape: ParabolicShape },
}

impl GroupKind {
    pub fn contains(&self, g: &Matrix) -> bool {
        match self {
            GroupKind::Borel => is_in_borel(g),
            GroupKind::Unipotent => is_in_unipotent(g),
            GroupKind::Parabolic { shape } => is_in_parabolic(g, shape),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GroupKind::Borel => "borel",
            GroupKind::Unipotent => "unipotent",
            GroupKind::Parabolic { .. } => "parabolic",
        }
    }

    /// Whether entry `(i, j)` may be nonzero in a group element.
    pub fn allows(&self, i: usize, j: usize) -> bool {
        match self {
            GroupKind::Borel | GroupKind::Unipotent => i <= j,
            GroupKind::Parabolic { shape } => shape.block_of(i) <= shape.block_of(j),
        }
    }
}

pub fn is_in_parabolic(g: &Matrix, shape: &ParabolicShape) -> bool {
    let n = shape.n();
    if g.rows() != n || g.cols() != n {
        return false;
    }
    let pattern = (0..n).all(|i| (0..n).all(|j| shape.block_of(i) <= shape.block_of(j) || g[(i, j)].is_zero()));
    pattern && g.det().is_ok_and(|d| !d.is_zero())
}

pub fn is_in_borel(g: &Matrix) -> bool {
    g.is_square() && g.is_upper() && (0..g.rows()).all(|i| !g[(i, i)].is_zero())
}

pub fn is_in_unipotent(g: &Matrix) -> bool {
    g.is_square() && g.is_upper() && (0..g.rows()).all(|i| g[(i, i)].is_one())
}

/// `g N g^{-1}`.
pub fn conjugate(g: &Matrix, n: &Matrix) -> Result<Matrix> {
    let inv = g.inverse()?;
    g.mul(n)?.mul(&inv)
}

pub fn is_nilpotent(n: &Matrix) -> bool {
    n.is_square() && n.pow(n.rows() as u32).is_ok_and(|p| p.is_zero())
}

/// A character of `B` written additively in the basis `omega_i(g) = g_ii`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Character(pub Vec<i64>);

impl Character {
    pub fn zero(n: usize) -> Self {
        Character(vec![0; n])
    }

    /// `omega_i` for a one-based index `i`.
    pub fn omega(n: usize, i: usize) -> Self {
        let mut c = vec![0; n];
        c[i - 1] = 1;
        Character(c)
    }

    /// `omega_lo + ... + omega_hi`, one-based and inclusive; empty when `lo > hi`.
    pub fn omega_range(n: usize, lo: usize, hi: usize) -> Self {
        let mut c = vec![0; n];
        for k in lo..=hi {
            c[k - 1] = 1;
        }
        Character(c)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    /// `prod_i g_ii^{c_i}`.
    pub fn eval(&self, g: &Matrix) -> Result<Rational> {
        if g.rows() != self.len() || !g.is_square() {
            return Err(Error::Shape("character and matrix sizes differ".into()));
        }
        let mut acc = Rational::one();
        for (i, &c) in self.0.iter().enumerate() {
            acc *= rational::pow(&g[(i, i)], c)?;
        }
        Ok(acc)
    }
}

impl std::ops::Add for &Character {
    type Output = Character;

    fn add(self, rhs: &Character) -> Character {
        assert_eq!(self.len(), rhs.len(), "character lengths differ");
        Character(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl std::ops::Sub for &Character {
    type Output = Character;

    fn sub(self, rhs: &Character) -> Character {
        assert_eq!(self.len(), rhs.len(), "character lengths differ");
        Character(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

/// Seeded source of the bounded random rationals used for sampling.
///
/// Entries are `p / q` with `p` uniform in `[-9, 9]` and `q` uniform in
/// `[1, 4]`; diagonal entries of triangular group elements are nonzero
/// integers in `[-9, 9]`.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rational(&mut self) -> Rational {
        rational::frac(self.rng.random_range(-9..=9), self.rng.random_range(1..=4))
    }

    pub fn nonzero_rational(&mut self) -> Rational {
        loop {
            let v = self.rational();
            if !v.is_zero() {
                return v;
            }
        }
    }

    pub fn nonzero_int(&mut self) -> Rational {
        let v = self.rng.random_range(1..=9);
        rational::int(if self.rng.random_bool(0.5) { v } else { -v })
    }

    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.random_range(lo..=hi)
    }

    pub fn borel(&mut self, n: usize) -> Matrix {
        let mut g = Matrix::zeros(n, n);
        for i in 0..n {
            g[(i, i)] = self.nonzero_int();
            for j in i + 1..n {
                g[(i, j)] = self.rational();
            }
        }
        g
    }

    pub fn unipotent(&mut self, n: usize) -> Matrix {
        let mut g = self.borel(n);
        for i in 0..n {
            g[(i, i)] = Rational::one();
        }
        g
    }

    /// A random invertible element of the parabolic subgroup. Diagonal
    /// blocks are redrawn until they are invertible.
    pub fn parabolic(&mut self, shape: &ParabolicShape) -> Matrix {
        let n = shape.n();
        let mut g = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if shape.block_of(i) < shape.block_of(j) {
                    g[(i, j)] = self.rational();
                }
            }
        }
        let mut start = 0;
        for &b in shape.blocks() {
            loop {
                let block = Matrix::from_fn(b, b, |i, j| if i == j { self.nonzero_int() } else { self.rational() });
                if !block.det().expect("square").is_zero() {
                    for i in 0..b {
                        for j in 0..b {
                            g[(start + i, start + j)] = block[(i, j)].clone();
                        }
                    }
                    break;
                }
            }
            start += b;
        }
        g
    }

    pub fn element(&mut self, kind: &GroupKind, n: usize) -> Matrix {
        match kind {
            GroupKind::Borel => self.borel(n),
            GroupKind::Unipotent => self.unipotent(n),
            GroupKind::Parabolic { shape } => self.parabolic(shape),
        }
    }

    /// A random invertible matrix with nonzero entries.
    pub fn invertible(&mut self, n: usize) -> Matrix {
        loop {
            let g = Matrix::from_fn(n, n, |_, _| self.nonzero_rational());
            if !g.det().expect("square").is_zero() {
                return g;
            }
        }
    }

    /// Strictly lower triangular with nonzero entries below the diagonal.
    pub fn strictly_lower(&mut self, n: usize) -> Matrix {
        Matrix::from_fn(n, n, |i, j| if i > j { self.nonzero_rational() } else { Rational::zero() })
    }

    /// A random strictly lower triangular matrix conjugated by a random
    /// invertible matrix. The lower entries are nonzero, so the result is a
    /// regular nilpotent.
    pub fn nilpotent(&mut self, n: usize) -> Matrix {
        let l = self.strictly_lower(n);
        let g = self.invertible(n);
        conjugate(&g, &l).expect("g is invertible")
    }
}

pub fn random_element(shape: &ParabolicShape, seed: u64) -> Matrix {
    Sampler::new(seed).parabolic(shape)
}

pub fn random_borel(n: usize, seed: u64) -> Matrix {
    Sampler::new(seed).borel(n)
}

pub fn random_unipotent(n: usize, seed: u64) -> Matrix {
    Sampler::new(seed).unipotent(n)
}

pub fn random_nilpotent(n: usize, seed: u64) -> Matrix {
    Sampler::new(seed).nilpotent(n)
}
