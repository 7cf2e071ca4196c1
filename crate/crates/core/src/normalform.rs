//! Generic normal forms for the conjugation actions of `P`, `B` and `U` on
//! nilpotent matrices, with conjugacy certificates.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{GroupKind, ParabolicShape, Sampler};
use crate::matrix::Matrix;
use crate::rational::{self, Rational};
use crate::semiinv::{det_k, g_ij};

/// Seed of the randomized certificate search used by the normal forms.
pub const CERTIFICATE_SEED: u64 = 0x5eed;

/// Number of random points of the solution space tried before giving up.
pub const SEARCH_BUDGET: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cell {
    Zero,
    One,
    NonzeroFree,
    Free,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternSpec {
    pub n: usize,
    pub kind: GroupKind,
    pub cells: Vec<Vec<Cell>>,
}

impl PatternSpec {
    pub fn cell(&self, i: usize, j: usize) -> Cell {
        self.cells[i][j]
    }

    /// Zero-based positions of the free cells, row by row.
    pub fn free_cells(&self) -> Vec<(usize, usize)> {
        self.positions(Cell::Free)
    }

    pub fn positions(&self, kind: Cell) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if self.cells[i][j] == kind {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn contains(&self, h: &Matrix) -> bool {
        if h.rows() != self.n || h.cols() != self.n {
            return false;
        }
        (0..self.n).all(|i| {
            (0..self.n).all(|j| match self.cells[i][j] {
                Cell::Zero => h[(i, j)].is_zero(),
                Cell::One => h[(i, j)].is_one(),
                Cell::NonzeroFree => !h[(i, j)].is_zero(),
                Cell::Free => true,
            })
        })
    }

    /// A random matrix in the pattern.
    pub fn sample(&self, s: &mut Sampler) -> Matrix {
        Matrix::from_fn(self.n, self.n, |i, j| match self.cells[i][j] {
            Cell::Zero => Rational::zero(),
            Cell::One => Rational::one(),
            Cell::NonzeroFree => s.nonzero_rational(),
            Cell::Free => s.rational(),
        })
    }
}

/// Cell classification of the normal-form pattern of a parabolic shape
/// (one-based `i`, `j`, cumulative dimensions `d_k`, `d_0 = 0`):
///
/// * zero if `i <= j`;
/// * zero if `i = d_1 + 1` and `j < d_1`;
/// * zero if `d_{k-1} + 3 <= i <= d_k`, `d_{k-1} + 1 <= j <= d_k - 2`, `i > j + 1`;
/// * zero if `d_{k-1} + 2 <= i <= d_k` and `j = d_{k-1}`;
/// * one if `i = j + 1`;
/// * free otherwise.
pub fn parabolic_pattern(shape: &ParabolicShape) -> PatternSpec {
    let n = shape.n();
    let d: Vec<usize> = std::iter::once(0).chain(shape.dims().iter().copied()).collect();
    let zero = |i: usize, j: usize| -> bool {
        if i <= j || (i == d[1] + 1 && j < d[1]) {
            return true;
        }
        (1..d.len()).any(|k| {
            let within = d[k - 1] + 3 <= i && i <= d[k] && d[k - 1] < j && j + 2 <= d[k] && i > j + 1;
            let column = d[k - 1] + 2 <= i && i <= d[k] && j == d[k - 1];
            within || column
        })
    };
    let cells = (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| {
                    if zero(i, j) {
                        Cell::Zero
                    } else if i == j + 1 {
                        Cell::One
                    } else {
                        Cell::Free
                    }
                })
                .collect()
        })
        .collect();
    PatternSpec { n, kind: GroupKind::Parabolic { shape: shape.clone() }, cells }
}

pub fn pattern(kind: &GroupKind, n: usize) -> PatternSpec {
    match kind {
        GroupKind::Parabolic { shape } => parabolic_pattern(shape),
        GroupKind::Borel => PatternSpec { kind: GroupKind::Borel, ..parabolic_pattern(&ParabolicShape::borel(n)) },
        GroupKind::Unipotent => {
            let mut p = parabolic_pattern(&ParabolicShape::borel(n));
            p.kind = GroupKind::Unipotent;
            for i in 1..n {
                p.cells[i][i - 1] = Cell::NonzeroFree;
            }
            p
        }
    }
}

/// The minors `det((N^{n-d_k})_{(d_k,d_k)})` for `k = 1, ..., p-1`.
pub fn genericity_minors(n: &Matrix, shape: &ParabolicShape) -> Result<Vec<Rational>> {
    let size = shape.n();
    if !n.is_square() || n.rows() != size {
        return Err(Error::Shape(format!("matrix is {}x{}, shape has n = {size}", n.rows(), n.cols())));
    }
    let dims = shape.dims();
    dims[..dims.len() - 1]
        .iter()
        .map(|&d| n.pow((size - d) as u32)?.corner(d, d)?.det())
        .collect()
}

pub fn is_generic(n: &Matrix, shape: &ParabolicShape) -> Result<bool> {
    Ok(genericity_minors(n, shape)?.iter().all(|m| !m.is_zero()))
}

/// The equivalent rank condition: the first `d_k` columns of `N^{n-d_k}`
/// are linearly independent.
pub fn is_generic_by_rank(n: &Matrix, shape: &ParabolicShape) -> Result<bool> {
    let size = shape.n();
    let dims = shape.dims();
    for &d in &dims[..dims.len() - 1] {
        let p = n.pow((size - d) as u32)?;
        if p.corner(size, d)?.rank() != d {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugacyCertificate {
    pub g: Matrix,
    pub group_kind: GroupKind,
}

impl ConjugacyCertificate {
    /// `g` lies in the group and `g N = H g`.
    pub fn certifies(&self, n: &Matrix, h: &Matrix) -> bool {
        if !self.group_kind.contains(&self.g) {
            return false;
        }
        match (self.g.mul(n), h.mul(&self.g)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalForm {
    pub h: Matrix,
    pub cert: ConjugacyCertificate,
}

/// An element `g` of the group with `g N = H g`.
///
/// The entries of `g` allowed by the group pattern are the unknowns of the
/// linear system `g N - H g = 0`; random integer combinations of a
/// nullspace basis are tried until one is invertible. For the unipotent
/// group the diagonal is a single shared unknown, divided out at the end.
/// When the budget runs out and `n <= 3`, the determinant of a generic
/// combination is a polynomial of degree at most `n` in each coefficient,
/// so evaluating it on the grid `{0, ..., n}^d` decides exactly whether an
/// invertible solution exists.
pub fn conjugacy_witness(n: &Matrix, h: &Matrix, kind: &GroupKind, seed: u64) -> Result<Matrix> {
    if !n.is_square() || h.rows() != n.rows() || h.cols() != n.cols() {
        return Err(Error::Shape("conjugacy needs square matrices of equal size".into()));
    }
    let size = n.rows();
    if let GroupKind::Parabolic { shape } = kind {
        if shape.n() != size {
            return Err(Error::Shape("shape and matrix sizes differ".into()));
        }
    }
    if n == h {
        return Ok(Matrix::identity(size));
    }
    let unipotent = matches!(kind, GroupKind::Unipotent);
    // Unknown index per allowed position; the unipotent diagonal shares one.
    let mut var = vec![vec![None; size]; size];
    let mut count = 0;
    if unipotent {
        for (i, row) in var.iter_mut().enumerate() {
            row[i] = Some(0);
        }
        count = 1;
    }
    for (i, row) in var.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            if kind.allows(i, j) && !(unipotent && i == j) {
                *slot = Some(count);
                count += 1;
            }
        }
    }
    // Row (a, b) of the system: sum_c g_ac N_cb - sum_c H_ac g_cb.
    let mut system = Matrix::zeros(size * size, count);
    for a in 0..size {
        for b in 0..size {
            let row = a * size + b;
            for c in 0..size {
                if let Some(v) = var[a][c] {
                    system[(row, v)] += &n[(c, b)];
                }
                if let Some(v) = var[c][b] {
                    system[(row, v)] -= &h[(a, c)];
                }
            }
        }
    }
    let basis = system.nullspace();
    let assemble = |coeffs: &[Rational]| -> Matrix {
        let mut values = vec![Rational::zero(); count];
        for (c, vec) in coeffs.iter().zip(&basis) {
            for (v, x) in values.iter_mut().zip(vec) {
                *v += c * x;
            }
        }
        Matrix::from_fn(size, size, |i, j| var[i][j].map_or_else(Rational::zero, |v| values[v].clone()))
    };
    let finish = |g: Matrix| -> Matrix {
        if unipotent {
            let s = g[(0, 0)].clone();
            g.scale(&(Rational::one() / s))
        } else {
            g
        }
    };
    let invertible = |g: &Matrix| g.det().is_ok_and(|d| !d.is_zero());
    if basis.is_empty() {
        return Err(Error::NotConjugate { exact: true });
    }
    let mut s = Sampler::new(seed);
    for _ in 0..SEARCH_BUDGET {
        let coeffs: Vec<Rational> = (0..basis.len()).map(|_| rational::int(s.int_in(-9, 9))).collect();
        let g = assemble(&coeffs);
        if invertible(&g) {
            return Ok(finish(g));
        }
    }
    if size > 3 {
        return Err(Error::NotConjugate { exact: false });
    }
    let d = basis.len();
    let side = size as u64 + 1;
    let total = side.checked_pow(d as u32).filter(|&t| t <= 1 << 20).ok_or_else(|| {
        Error::Scale(format!("grid of {side}^{d} points"))
    })?;
    for index in 0..total {
        let mut rest = index;
        let coeffs: Vec<Rational> = (0..d)
            .map(|_| {
                let c = rest % side;
                rest /= side;
                rational::int(c as i64)
            })
            .collect();
        let g = assemble(&coeffs);
        if invertible(&g) {
            return Ok(finish(g));
        }
    }
    Err(Error::NotConjugate { exact: true })
}

fn require_borel_generic(n: &Matrix) -> Result<()> {
    if !n.is_square() {
        return Err(Error::Shape("normal forms need a square matrix".into()));
    }
    let minors = genericity_minors(n, &ParabolicShape::borel(n.rows()))?;
    if let Some(k) = minors.iter().position(Zero::is_zero) {
        return Err(Error::NotGeneric(format!("det_{} vanishes", k + 1)));
    }
    Ok(())
}

fn certify(n: &Matrix, h: Matrix, kind: GroupKind) -> Result<NormalForm> {
    let g = conjugacy_witness(n, &h, &kind, CERTIFICATE_SEED)
        .map_err(|e| Error::Internal(format!("no certificate for a computed normal form: {e}")))?;
    let cert = ConjugacyCertificate { g, group_kind: kind };
    if !cert.certifies(n, &h) {
        return Err(Error::Internal("certificate does not conjugate".into()));
    }
    Ok(NormalForm { h, cert })
}

/// The `B`-normal form: unit subdiagonal, zeros on and above the diagonal,
/// and `H_{i,j} = g_{i,j}(N) / prod_k det_k(N)` below the subdiagonal.
#[allow(non_snake_case)]
pub fn normal_form_B(n: &Matrix) -> Result<NormalForm> {
    require_borel_generic(n)?;
    let size = n.rows();
    let mut denom = Rational::one();
    for k in 1..size {
        denom *= det_k(size, k)?.eval(n)?;
    }
    let spec = pattern(&GroupKind::Borel, size);
    let mut h = Matrix::zeros(size, size);
    for i in 1..size {
        h[(i, i - 1)] = Rational::one();
    }
    for (i, j) in spec.free_cells() {
        h[(i, j)] = g_ij(size, i + 1, j + 1)?.eval(n)? / &denom;
    }
    for k in 1..size {
        if !det_k(size, k)?.eval(&h)?.is_one() {
            return Err(Error::Internal(format!("det_{k} is not one on the normal form")));
        }
    }
    certify(n, h, GroupKind::Borel)
}

/// The `U`-normal form: lower entries as for `B`, nonzero subdiagonal.
#[allow(non_snake_case)]
pub fn normal_form_U(n: &Matrix) -> Result<NormalForm> {
    let NormalForm { h: hb, cert } = normal_form_B(n)?;
    let b = cert.g;
    let size = n.rows();
    let t = Matrix::diagonal(&(0..size).map(|i| b[(i, i)].clone()).collect::<Vec<_>>());
    let t_inv = t.inverse()?;
    let u = t_inv.mul(&b)?;
    let h = t_inv.mul(&hb)?.mul(&t)?;
    let cert = ConjugacyCertificate { g: u, group_kind: GroupKind::Unipotent };
    if !cert.certifies(n, &h) || !pattern(&GroupKind::Unipotent, size).contains(&h) {
        return Err(Error::Internal("unipotent normal form failed its postconditions".into()));
    }
    Ok(NormalForm { h, cert })
}

/// The `P`-normal form through an adapted basis.
///
/// With `F_k = <e_1, ..., e_{d_k}>` and `T_k = im N^{d_k}`, generic `N`
/// gives `K^n = F_k + T_k`; let `pi_k` project onto `F_k` along `T_k`. The
/// basis is `w_{x+1} = pi_{k(x+1)}(N w_x)`, where `k(x)` is the block of
/// `x`, and `w_1` spans the line in `F_1` on which the coefficient of
/// `N^{d_1} c` (for a cyclic vector `c`) in `N w_x` vanishes for
/// `x < d_1`. Then `H = W^{-1} N W` and `g = W^{-1}`.
#[allow(non_snake_case)]
pub fn normal_form_P(n: &Matrix, shape: &ParabolicShape) -> Result<NormalForm> {
    require_borel_generic(n)?;
    let size = n.rows();
    if shape.n() != size {
        return Err(Error::Shape("shape and matrix sizes differ".into()));
    }
    let powers = n.powers(size)?;
    let c_index = (0..size)
        .find(|&j| !powers[size - 1].column(j).iter().all(Zero::is_zero))
        .ok_or_else(|| Error::NotGeneric("N is not regular".into()))?;
    let orbit: Vec<Vec<Rational>> = powers.iter().take(size).map(|p| p.column(c_index)).collect();
    let unit = |i: usize| -> Vec<Rational> { (0..size).map(|r| if r == i { Rational::one() } else { Rational::zero() }).collect() };
    // Coordinates with respect to [e_1..e_d | N^d c .. N^{n-1} c].
    let adapted_inverse = |d: usize| -> Result<Matrix> {
        let cols: Vec<Vec<Rational>> = (0..d).map(unit).chain(orbit[d..].iter().cloned()).collect();
        Matrix::from_columns(size, &cols)?
            .inverse()
            .map_err(|_| Error::NotGeneric(format!("F_{d} meets im N^{d}")))
    };
    let inverses: Vec<Matrix> = shape.dims().iter().map(|&d| adapted_inverse(d)).collect::<Result<_>>()?;
    let project = |k: usize, v: &[Rational]| -> Result<Vec<Rational>> {
        let d = shape.dims()[k];
        let coords = inverses[k].mul_vec(v)?;
        Ok((0..size).map(|r| if r < d { coords[r].clone() } else { Rational::zero() }).collect())
    };

    let d1 = shape.dims()[0];
    let w1 = if d1 == 1 {
        unit(0)
    } else if d1 == size {
        orbit[0].clone()
    } else {
        // A = pi_1 o N on F_1 in the basis e_1..e_{d_1}; ell reads the
        // coefficient of N^{d_1} c.
        let a = Matrix::from_fn(d1, d1, |r, col| {
            let image = project(0, &n.column(col)).expect("sizes agree");
            image[r].clone()
        });
        let ell: Vec<Rational> = (0..size).map(|col| inverses[0][(d1, col)].clone()).collect();
        let ell_n: Vec<Rational> = (0..d1)
            .map(|col| (0..size).map(|r| &ell[r] * &n[(r, col)]).sum())
            .collect();
        let mut constraints = Matrix::zeros(d1 - 1, d1);
        let mut a_pow = Matrix::identity(d1);
        for x in 0..d1 - 1 {
            for col in 0..d1 {
                constraints[(x, col)] = (0..d1).map(|r| &ell_n[r] * &a_pow[(r, col)]).sum();
            }
            a_pow = a.mul(&a_pow)?;
        }
        let kernel = constraints.nullspace();
        if kernel.len() != 1 {
            return Err(Error::NotGeneric(format!("first block admits {} starting vectors", kernel.len())));
        }
        (0..size).map(|r| if r < d1 { kernel[0][r].clone() } else { Rational::zero() }).collect()
    };
    let mut basis = vec![w1];
    for x in 1..size {
        let image = n.mul_vec(&basis[x - 1])?;
        basis.push(project(shape.block_of(x), &image)?);
    }
    let w = Matrix::from_columns(size, &basis)?;
    let g = w.inverse().map_err(|_| Error::NotGeneric("adapted vectors are dependent".into()))?;
    let h = g.mul(n)?.mul(&w)?;
    let kind = GroupKind::Parabolic { shape: shape.clone() };
    let cert = ConjugacyCertificate { g, group_kind: kind.clone() };
    if !pattern(&kind, size).contains(&h) {
        return Err(Error::Internal("adapted basis does not produce the normal-form pattern".into()));
    }
    if !cert.certifies(n, &h) {
        return Err(Error::Internal("adapted basis is not a certificate".into()));
    }
    Ok(NormalForm { h, cert })
}

pub fn normal_form(n: &Matrix, kind: &GroupKind) -> Result<NormalForm> {
    match kind {
        GroupKind::Borel => normal_form_B(n),
        GroupKind::Unipotent => normal_form_U(n),
        GroupKind::Parabolic { shape } => normal_form_P(n, shape),
    }
}

/// A random Borel-generic nilpotent matrix; redraws until every `det_k`
/// is nonzero.
pub fn random_generic_nilpotent(n: usize, s: &mut Sampler) -> Matrix {
    let shape = ParabolicShape::borel(n);
    loop {
        let m = s.nilpotent(n);
        if is_generic(&m, &shape).expect("sizes agree") {
            return m;
        }
    }
}
