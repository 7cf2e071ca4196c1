//! Representations of the quiver `Q_p` (vertices `1 -> 2 -> ... -> p` with a
//! loop at `p`, bound by `loop^n = 0`) attached to nilpotent matrices, and
//! the determinantal semi-invariants of morphisms between projectives.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{ParabolicShape, Sampler};
use crate::matrix::Matrix;
use crate::poly::Polynomial;
use crate::rational::Rational;
use crate::semiinv::SemiInvariantDatum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverShape {
    pub p: usize,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Representation {
    pub dims: Vec<usize>,
    /// `arrow_maps[i]` represents the arrow from vertex `i + 1` to `i + 2`.
    pub arrow_maps: Vec<Matrix>,
    pub loop_map: Matrix,
}

impl Representation {
    pub fn shape(&self, n: usize) -> QuiverShape {
        QuiverShape { p: self.dims.len(), n }
    }

    /// The map of the path from vertex `from` to vertex `to` (one-based,
    /// `from <= to`) along the arrows, without the loop.
    pub fn path_map(&self, from: usize, to: usize) -> Result<Matrix> {
        if from == 0 || from > to || to > self.dims.len() {
            return Err(Error::Index(format!("no path from vertex {from} to vertex {to}")));
        }
        let mut m = Matrix::identity(self.dims[from - 1]);
        for arrow in &self.arrow_maps[from - 1..to - 1] {
            m = arrow.mul(&m)?;
        }
        Ok(m)
    }

    /// `loop^k` composed with the path from `from` to the last vertex.
    pub fn loop_path_map(&self, from: usize, k: u32) -> Result<Matrix> {
        self.loop_map.pow(k)?.mul(&self.path_map(from, self.dims.len())?)
    }
}

/// The representation with coordinate embeddings `K^{d_i} -> K^{d_{i+1}}`
/// and loop `N`.
#[allow(non_snake_case)]
pub fn build_MN(n: &Matrix, shape: &ParabolicShape) -> Result<Representation> {
    if !n.is_square() || n.rows() != shape.n() {
        return Err(Error::Shape(format!("matrix is {}x{}, shape has n = {}", n.rows(), n.cols(), shape.n())));
    }
    let dims = shape.dims().to_vec();
    let arrow_maps = dims
        .windows(2)
        .map(|w| Matrix::from_fn(w[1], w[0], |i, j| if i == j { Rational::from_integer(1.into()) } else { Rational::zero() }))
        .collect();
    Ok(Representation { dims, arrow_maps, loop_map: n.clone() })
}

/// One coefficient of a morphism from `x_j` copies of the projective at
/// vertex `j` to `y_i` copies of the projective at vertex `i`.
///
/// `k` and `l` are zero-based copy indices on the target and source side.
/// For `i < n` the coefficient is a scalar (a one-element list); for
/// `i = n` entry `h` of `coeffs` multiplies the path `loop^h` after the
/// arrows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismEntry {
    pub target: usize,
    pub source: usize,
    pub k: usize,
    pub l: usize,
    pub coeffs: Polynomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismDatum {
    pub n: usize,
    /// Source multiplicities `(x_1, ..., x_n)`.
    pub x: Vec<usize>,
    /// Target multiplicities `(y_1, ..., y_n)`.
    pub y: Vec<usize>,
    pub entries: Vec<MorphismEntry>,
}

impl MorphismDatum {
    /// `sum_j j x_j`, which must equal `sum_i i y_i`.
    pub fn size(&self) -> usize {
        self.x.iter().enumerate().map(|(j, x)| (j + 1) * x).sum()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if self.x.len() != n || self.y.len() != n {
            return Err(Error::Shape(format!("multiplicity vectors must have length {n}")));
        }
        let target: usize = self.y.iter().enumerate().map(|(i, y)| (i + 1) * y).sum();
        if self.size() != target {
            return Err(Error::Shape(format!(
                "source has total dimension {}, target {target}",
                self.size()
            )));
        }
        for e in &self.entries {
            let (i, j) = (e.target, e.source);
            if i == 0 || i > n || j == 0 || j > n {
                return Err(Error::Index(format!("vertex out of range in entry ({i},{j})")));
            }
            if e.k >= self.y[i - 1] || e.l >= self.x[j - 1] {
                return Err(Error::Index(format!("copy index out of range in entry ({i},{j})")));
            }
            if j > i && !e.coeffs.is_zero() {
                return Err(Error::Precondition(format!("no nonzero morphism from vertex {j} to vertex {i}")));
            }
            if i < n && e.coeffs.degree().is_some_and(|d| d > 0) {
                return Err(Error::Precondition(format!("coefficient for target {i} < n must be a scalar")));
            }
        }
        Ok(())
    }

    fn coefficient(&self, i: usize, k: usize, j: usize, l: usize) -> Polynomial {
        let mut acc = vec![Rational::zero(); self.n];
        for e in self.entries.iter().filter(|e| (e.target, e.k, e.source, e.l) == (i, k, j, l)) {
            for (h, c) in e.coeffs.coeffs().iter().enumerate().take(self.n) {
                acc[h] += c;
            }
        }
        Polynomial::new(acc)
    }
}

/// `det M^N(phi)` for the full flag, assembled from the maps of the
/// representation: the block of target copy `(i, k)` and source copy
/// `(j, l)` is `lambda * path(j -> i)` for `i < n` and
/// `sum_h lambda_h loop^h path(j -> n)` for `i = n`.
pub fn eval_f_phi(n: &Matrix, phi: &MorphismDatum) -> Result<Rational> {
    phi.validate()?;
    let size = phi.n;
    let rep = build_MN(n, &ParabolicShape::borel(size))?;
    let dim = phi.size();
    let mut m = Matrix::zeros(dim, dim);
    let mut row0 = 0;
    for i in 1..=size {
        for k in 0..phi.y[i - 1] {
            let mut col0 = 0;
            for j in 1..=size {
                for l in 0..phi.x[j - 1] {
                    let c = phi.coefficient(i, k, j, l);
                    if j <= i && !c.is_zero() {
                        let mut block = Matrix::zeros(i, j);
                        for (h, lambda) in c.coeffs().iter().enumerate() {
                            let path = if i < size { rep.path_map(j, i)? } else { rep.loop_path_map(j, h as u32)? };
                            block = block.add(&path.scale(lambda))?;
                        }
                        for a in 0..i {
                            for b in 0..j {
                                m[(row0 + a, col0 + b)] = block[(a, b)].clone();
                            }
                        }
                    }
                    col0 += j;
                }
            }
            row0 += i;
        }
    }
    m.det()
}

/// The datum `((n, ..., n), (1, ..., 1, ..., n, ..., n), P)` with
/// `P_{k,(j,l)} = sum_h lambda_h X^h`, whose function equals
/// [`eval_f_phi`]. Only morphisms into copies of the projective at vertex
/// `n` are supported.
pub fn datum_from_morphism(phi: &MorphismDatum) -> Result<SemiInvariantDatum> {
    phi.validate()?;
    let n = phi.n;
    if phi.y[..n - 1].iter().any(|&y| y != 0) {
        return Err(Error::Unsupported("targets other than the last vertex".into()));
    }
    let rows = vec![n; phi.y[n - 1]];
    let sources: Vec<(usize, usize)> = (1..=n).flat_map(|j| (0..phi.x[j - 1]).map(move |l| (j, l))).collect();
    let cols = sources.iter().map(|&(j, _)| j).collect();
    let polys = (0..rows.len())
        .map(|k| sources.iter().map(|&(j, l)| phi.coefficient(n, k, j, l)).collect())
        .collect();
    SemiInvariantDatum::new(rows, cols, polys)
}

/// A random morphism into `y_n in {1, 2}` copies of the last projective,
/// source multiplicities at most two, and at most three nonzero loop
/// coefficients per entry.
pub fn random_morphism(n: usize, s: &mut Sampler) -> MorphismDatum {
    let yn = s.int_in(1, 2) as usize;
    let target = n * yn;
    let x = loop {
        let x: Vec<usize> = (0..n).map(|_| s.int_in(0, 2) as usize).collect();
        if x.iter().enumerate().map(|(j, x)| (j + 1) * x).sum::<usize>() == target {
            break x;
        }
    };
    let mut y = vec![0; n];
    y[n - 1] = yn;
    let mut entries = Vec::new();
    for k in 0..yn {
        for j in 1..=n {
            for l in 0..x[j - 1] {
                let mut coeffs = vec![Rational::zero(); n];
                for _ in 0..s.int_in(0, 3) {
                    coeffs[s.int_in(0, n as i64 - 1) as usize] = s.rational();
                }
                entries.push(MorphismEntry { target: n, source: j, k, l, coeffs: Polynomial::new(coeffs) });
            }
        }
    }
    MorphismDatum { n, x, y, entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{conjugate, is_nilpotent, random_nilpotent};
    use crate::rational::int;
    use crate::semiinv::eval;

    fn scalar(c: i64) -> Polynomial {
        Polynomial::constant(int(c))
    }

    #[test]
    fn representation_of_a_matrix() {
        let r = build_MN(&Matrix::zeros(2, 2), &ParabolicShape::borel(2)).unwrap();
        assert_eq!(r.dims, vec![1, 2]);
        assert_eq!(r.arrow_maps, vec![Matrix::from_ints(&[[1], [0]])]);
        assert!(r.loop_map.is_zero());
        let n = random_nilpotent(4, 1);
        let shape = ParabolicShape::new(vec![2, 2]).unwrap();
        let r = build_MN(&n, &shape).unwrap();
        assert!(is_nilpotent(&r.loop_map));
        assert_eq!(r.shape(4), QuiverShape { p: 2, n: 4 });
        assert!(build_MN(&n, &ParabolicShape::borel(3)).is_err());
    }

    #[test]
    fn two_by_two_morphism() {
        // Sources: two copies of the first projective; target: the second.
        let phi = MorphismDatum {
            n: 2,
            x: vec![2, 0],
            y: vec![0, 1],
            entries: vec![
                MorphismEntry { target: 2, source: 1, k: 0, l: 0, coeffs: scalar(1) },
                MorphismEntry { target: 2, source: 1, k: 0, l: 1, coeffs: Polynomial::power(1) },
            ],
        };
        let d = datum_from_morphism(&phi).unwrap();
        assert_eq!(d.row_blocks(), &[2]);
        assert_eq!(d.col_blocks(), &[1, 1]);
        let n = Matrix::from_ints(&[[0, 0], [7, 0]]);
        assert_eq!(eval_f_phi(&n, &phi).unwrap(), int(7));
        assert_eq!(eval(&n, &d).unwrap(), int(7));
    }

    #[test]
    fn proportional_columns_vanish() {
        let phi = MorphismDatum {
            n: 2,
            x: vec![2, 0],
            y: vec![0, 1],
            entries: vec![
                MorphismEntry { target: 2, source: 1, k: 0, l: 0, coeffs: Polynomial::power(1) },
                MorphismEntry { target: 2, source: 1, k: 0, l: 1, coeffs: Polynomial::monomial(1, int(5)) },
            ],
        };
        assert!(eval_f_phi(&random_nilpotent(2, 3), &phi).unwrap().is_zero());
    }

    #[test]
    fn identity_morphism() {
        let phi = MorphismDatum {
            n: 3,
            x: vec![0, 0, 1],
            y: vec![0, 0, 1],
            entries: vec![MorphismEntry { target: 3, source: 3, k: 0, l: 0, coeffs: scalar(1) }],
        };
        let d = datum_from_morphism(&phi).unwrap();
        assert_eq!(d, SemiInvariantDatum::monomial(vec![3], vec![3], &[(0, 0, 0)]).unwrap());
        assert_eq!(eval_f_phi(&random_nilpotent(3, 4), &phi).unwrap(), int(1));
    }

    #[test]
    fn invalid_morphisms() {
        let mut phi = MorphismDatum { n: 2, x: vec![1, 0], y: vec![0, 1], entries: vec![] };
        assert!(matches!(phi.validate(), Err(Error::Shape(_))));
        phi = MorphismDatum { n: 2, x: vec![0, 1], y: vec![2, 0], entries: vec![] };
        assert!(phi.validate().is_ok());
        assert!(matches!(datum_from_morphism(&phi), Err(Error::Unsupported(_))));
        phi.entries.push(MorphismEntry { target: 1, source: 2, k: 0, l: 0, coeffs: scalar(1) });
        assert!(matches!(phi.validate(), Err(Error::Precondition(_))));
    }

    #[test]
    fn lower_vertex_targets_use_arrow_paths() {
        // One copy of each projective on both sides, block diagonal morphism.
        let phi = MorphismDatum {
            n: 2,
            x: vec![1, 1],
            y: vec![1, 1],
            entries: vec![
                MorphismEntry { target: 1, source: 1, k: 0, l: 0, coeffs: scalar(3) },
                MorphismEntry { target: 2, source: 2, k: 0, l: 0, coeffs: Polynomial::new(vec![int(2), int(1)]) },
            ],
        };
        // The second block is 2I + N, so the determinant is 3 * det(2I + N) = 12.
        assert_eq!(eval_f_phi(&random_nilpotent(2, 8), &phi).unwrap(), int(12));
    }

    #[test]
    fn u_invariance() {
        let mut s = Sampler::new(21);
        for _ in 0..10 {
            let phi = random_morphism(3, &mut s);
            let n = s.nilpotent(3);
            let u = s.unipotent(3);
            assert_eq!(eval_f_phi(&n, &phi).unwrap(), eval_f_phi(&conjugate(&u, &n).unwrap(), &phi).unwrap());
        }
    }
}
