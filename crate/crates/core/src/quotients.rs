//! Explicit quotient maps in small rank: the `U`-quotients for `n = 2, 3`,
//! the GIT quotients for `n = 2, 3`, and a relation among `U`-invariants
//! showing that the natural map is not surjective for `n >= 4`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{conjugate, Sampler};
use crate::matrix::Matrix;
use crate::normalform::{is_generic, pattern};
use crate::rational::{self, Rational};
use crate::semiinv::{det_k, f_ij, f_k, n3_invariants, SemiInvariantDatum, WeightedInvariant};
use crate::{GroupKind, ParabolicShape};

fn require_size(n: &Matrix, size: usize) -> Result<()> {
    if n.rows() != size || n.cols() != size {
        return Err(Error::Shape(format!("expected a {size}x{size} matrix")));
    }
    Ok(())
}

/// `f_{2,1}(N) = N_{2,1}`.
pub fn u_quotient_n2(n: &Matrix) -> Result<Rational> {
    require_size(n, 2)?;
    det_k(2, 1)?.eval(n)
}

/// `(f_{3,1}(N), f_1(N), f_2(N), det_1(N))`; the last three satisfy
/// `f_1 f_2 = det_1^3`.
pub fn u_quotient_n3(n: &Matrix) -> Result<[Rational; 4]> {
    require_size(n, 3)?;
    let [a, b, c, d] = n3_invariants().map(|inv| inv.eval(n));
    Ok([a?, b?, c?, d?])
}

/// The matrix of the `U`-pattern with the given quotient values:
/// `H_{3,1} = f_{3,1}`, subdiagonal `(f_1 / det_1, f_2 / det_1)`.
pub fn invert_u_quotient_n3(values: &[Rational; 4]) -> Result<Matrix> {
    let [f31, f1, f2, d1] = values;
    if d1.is_zero() {
        return Err(Error::NotGeneric("det_1 vanishes".into()));
    }
    let mut h = Matrix::zeros(3, 3);
    h[(1, 0)] = f1 / d1;
    h[(2, 1)] = f2 / d1;
    h[(2, 0)] = f31.clone();
    Ok(h)
}

/// The below-subdiagonal entries of `H` (rows top to bottom, columns left
/// to right) and its subdiagonal.
pub fn u_coordinates(h: &Matrix) -> Result<(Vec<Rational>, Vec<Rational>)> {
    let n = h.rows();
    if !pattern(&GroupKind::Unipotent, n).contains(h) {
        return Err(Error::Precondition("matrix is not in the unipotent normal-form pattern".into()));
    }
    let free = (2..n).flat_map(|i| (0..i - 1).map(move |j| (i, j))).map(|(i, j)| h[(i, j)].clone()).collect();
    let torus = (1..n).map(|i| h[(i, i - 1)].clone()).collect();
    Ok((free, torus))
}

/// Inverse of [`u_coordinates`].
pub fn from_u_coordinates(n: usize, free: &[Rational], torus: &[Rational]) -> Result<Matrix> {
    if torus.len() + 1 != n || free.len() != (n - 1) * (n.saturating_sub(2)) / 2 {
        return Err(Error::Shape("coordinate counts do not match n".into()));
    }
    if torus.iter().any(Zero::is_zero) {
        return Err(Error::Precondition("subdiagonal entries must be nonzero".into()));
    }
    let mut h = Matrix::zeros(n, n);
    let mut it = free.iter();
    for i in 2..n {
        for j in 0..i - 1 {
            h[(i, j)] = it.next().unwrap().clone();
        }
    }
    for (i, x) in torus.iter().enumerate() {
        h[(i + 1, i)] = x.clone();
    }
    Ok(h)
}

fn quotient_values(h: &Matrix) -> Result<Vec<Rational>> {
    match h.rows() {
        2 => Ok(vec![u_quotient_n2(h)?]),
        3 => Ok(u_quotient_n3(h)?.to_vec()),
        n => Err(Error::Unsupported(format!("U-quotient for n = {n}"))),
    }
}

/// Samples pairs of distinct matrices of the `U`-pattern and checks that
/// their quotient values differ, and that the values determine the matrix.
#[allow(non_snake_case)]
pub fn separation_check_U(n: usize, trials: usize, seed: u64) -> Result<bool> {
    if n != 2 && n != 3 {
        return Err(Error::Unsupported(format!("U-quotient for n = {n}")));
    }
    let spec = pattern(&GroupKind::Unipotent, n);
    let mut s = Sampler::new(seed);
    for _ in 0..trials {
        let h1 = spec.sample(&mut s);
        let h2 = spec.sample(&mut s);
        let (v1, v2) = (quotient_values(&h1)?, quotient_values(&h2)?);
        if (h1 == h2) != (v1 == v2) {
            return Ok(false);
        }
        let recovered = if n == 2 {
            Matrix::from_fn(2, 2, |i, j| if (i, j) == (1, 0) { v1[0].clone() } else { Rational::zero() })
        } else {
            invert_u_quotient_n3(&[v1[0].clone(), v1[1].clone(), v1[2].clone(), v1[3].clone()])?
        };
        if recovered != h1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Semistability for the character of `det_1`: `f_{2,1}(N) != 0` for
/// `n = 2`; `N` is `B`-generic or `N_{3,1} != 0` for `n = 3`.
pub fn git_semistable(n: &Matrix) -> Result<bool> {
    match n.rows() {
        2 => Ok(!u_quotient_n2(n)?.is_zero()),
        3 => Ok(is_generic(n, &ParabolicShape::borel(3))? || !n[(2, 0)].is_zero()),
        other => Err(Error::Unsupported(format!("GIT quotient for n = {other}"))),
    }
}

/// Scales a point of projective space so its first nonzero coordinate is one.
pub fn normalize_projective(point: &[Rational]) -> Result<Vec<Rational>> {
    let lead = point.iter().find(|x| !x.is_zero()).ok_or(Error::Unstable)?.clone();
    Ok(point.iter().map(|x| x / &lead).collect())
}

/// `(f_{3,1}(N) : det_1(N))`, normalized.
pub fn git_map_n3(n: &Matrix) -> Result<[Rational; 2]> {
    require_size(n, 3)?;
    let [f31, _, _, d1] = n3_invariants();
    let p = normalize_projective(&[f31.eval(n)?, d1.eval(n)?])?;
    Ok([p[0].clone(), p[1].clone()])
}

/// The semi-invariant `g` of the relation: `((2), (2), (x))` for `n = 4`,
/// `((n-2), (2, n-4), (x, x^4))` for larger `n`.
pub fn witness_invariant(n: usize) -> Result<WeightedInvariant> {
    if n < 4 {
        return Err(Error::Index(format!("the relation needs n >= 4, got {n}")));
    }
    let datum = if n == 4 {
        SemiInvariantDatum::monomial(vec![2], vec![2], &[(0, 0, 1)])?
    } else {
        SemiInvariantDatum::monomial(vec![n - 2], vec![2, n - 4], &[(0, 0, 1), (0, 1, 4)])?
    };
    Ok(WeightedInvariant::new(datum, n, "g"))
}

/// `det_k(N)` with `det_0 = 1`.
fn det_or_one(n: &Matrix, k: usize) -> Result<Rational> {
    if k == 0 {
        Ok(Rational::one())
    } else {
        det_k(n.rows(), k)?.eval(n)
    }
}

/// Both sides of
/// `g det_{n-3} det_1 f_{n-3} f_{n-1} = f_{3,1} f_{4,2} f_{n-3} f_{n-1} - f_{4,1} f_{n-2}^2 det_{n-3} det_1`,
/// where `f_k` has blocks `(k)`, `(1, ..., 1)`.
pub fn relation_sides(n: &Matrix) -> Result<(Rational, Rational)> {
    let size = n.rows();
    let g = witness_invariant(size)?.eval(n)?;
    let d_low = det_or_one(n, size - 3)?;
    let d1 = det_or_one(n, 1)?;
    let fa = f_k(size, size - 3)?.eval(n)?;
    let fb = f_k(size, size - 1)?.eval(n)?;
    let fc = f_k(size, size - 2)?.eval(n)?;
    let f31 = f_ij(size, 3, 1)?.eval(n)?;
    let f42 = f_ij(size, 4, 2)?.eval(n)?;
    let f41 = f_ij(size, 4, 1)?.eval(n)?;
    let lhs = &g * &d_low * &d1 * &fa * &fb;
    let rhs = &f31 * &f42 * &fa * &fb - &f41 * &fc * &fc * &d_low * &d1;
    Ok((lhs, rhs))
}

/// `(H_{3,1} H_{4,2} - H_{3,2} H_{4,1}) det_{n-4}(H)`.
pub fn witness_closed_form(h: &Matrix) -> Result<Rational> {
    let n = h.rows();
    if n < 4 {
        return Err(Error::Index(format!("the relation needs n >= 4, got {n}")));
    }
    let minor = &h[(2, 0)] * &h[(3, 1)] - &h[(2, 1)] * &h[(3, 0)];
    Ok(minor * det_or_one(h, n - 4)?)
}

/// Samples the relation on random nilpotent matrices.
pub fn nonsurjectivity_relation(n: usize, trials: usize, seed: u64) -> Result<bool> {
    let mut s = Sampler::new(seed);
    for _ in 0..trials {
        let (lhs, rhs) = relation_sides(&s.nilpotent(n))?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The outcome of one sampled identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub label: String,
    pub passed: bool,
    pub samples: usize,
    /// Distinct nonzero residuals, as exact rationals.
    pub residuals: Vec<String>,
}

impl Check {
    fn from_residuals(label: impl Into<String>, residuals: impl IntoIterator<Item = Rational>) -> Self {
        let mut samples = 0;
        let mut bad = std::collections::BTreeSet::new();
        for r in residuals {
            samples += 1;
            if !r.is_zero() {
                bad.insert(rational::to_string(&r));
            }
        }
        Check { label: label.into(), passed: bad.is_empty(), samples, residuals: bad.into_iter().collect() }
    }

    fn verdict(label: impl Into<String>, samples: usize, passed: bool) -> Self {
        Check { label: label.into(), passed, samples, residuals: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientReport {
    pub n: usize,
    pub map: String,
    pub seed: u64,
    pub trials: usize,
    /// Quotient values of the first few samples.
    pub values: Vec<Vec<String>>,
    pub checks: Vec<Check>,
}

impl QuotientReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

const SHOWN_VALUES: usize = 3;

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(rational::to_string).collect()
}

/// Samples every identity known for this `n` and collects the results.
pub fn relation_report(n: usize, trials: usize, seed: u64) -> Result<QuotientReport> {
    let mut s = Sampler::new(seed);
    let samples: Vec<Matrix> = (0..trials).map(|_| s.nilpotent(n)).collect();
    let mut values = Vec::new();
    let mut checks = Vec::new();
    let map;
    match n {
        2 => {
            map = "N -> f21(N)".to_string();
            for m in samples.iter().take(SHOWN_VALUES) {
                values.push(strings(&[u_quotient_n2(m)?]));
            }
            checks.push(Check::from_residuals(
                "f21(N) = N21",
                samples.iter().map(|m| u_quotient_n2(m).map(|v| v - &m[(1, 0)])).collect::<Result<Vec<_>>>()?,
            ));
            let mut invariance = Vec::new();
            let mut semistable = true;
            for m in &samples {
                let u = s.unipotent(2);
                invariance.push(u_quotient_n2(&conjugate(&u, m)?)? - u_quotient_n2(m)?);
                semistable &= git_semistable(m)? == !m[(1, 0)].is_zero();
            }
            checks.push(Check::from_residuals("f21(u N u^-1) = f21(N)", invariance));
            checks.push(Check::verdict("semistable iff f21 != 0", trials, semistable));
            checks.push(Check::verdict("f21 separates U-pattern matrices", trials, separation_check_U(2, trials, seed)?));
        }
        3 => {
            map = "N -> (f31(N), f1(N), f2(N), det1(N))".to_string();
            let tuples: Vec<[Rational; 4]> = samples.iter().map(u_quotient_n3).collect::<Result<_>>()?;
            for t in tuples.iter().take(SHOWN_VALUES) {
                values.push(strings(t));
            }
            checks.push(Check::from_residuals(
                "f1*f2 = det1^3",
                tuples.iter().map(|[_, f1, f2, d1]| f1 * f2 - d1 * d1 * d1),
            ));
            let det2 = det_k(3, 2)?;
            checks.push(Check::from_residuals(
                "det1 = det2",
                samples.iter().zip(&tuples).map(|(m, t)| det2.eval(m).map(|v| &t[3] - v)).collect::<Result<Vec<_>>>()?,
            ));
            let mut invariance = Vec::new();
            let mut git = true;
            for (m, t) in samples.iter().zip(&tuples) {
                let u = s.unipotent(3);
                let moved = u_quotient_n3(&conjugate(&u, m)?)?;
                invariance.extend(moved.iter().zip(t).map(|(a, b)| a - b));
                if git_semistable(m)? {
                    let b = s.borel(3);
                    git &= git_map_n3(&conjugate(&b, m)?)? == git_map_n3(m)?;
                }
            }
            checks.push(Check::from_residuals("U-invariants are constant on U-orbits", invariance));
            checks.push(Check::verdict("(f31 : det1) is constant on B-orbits", trials, git));
            checks.push(Check::verdict(
                "(f31, f1, f2, det1) separates U-pattern matrices",
                trials,
                separation_check_U(3, trials, seed)?,
            ));
        }
        _ if n >= 4 => {
            map = "N -> g(N)".to_string();
            let g = witness_invariant(n)?;
            for m in samples.iter().take(SHOWN_VALUES) {
                values.push(strings(&[g.eval(m)?]));
            }
            checks.push(Check::from_residuals(
                "g*det_{n-3}*det1*f_{n-3}*f_{n-1} = f31*f42*f_{n-3}*f_{n-1} - f41*f_{n-2}^2*det_{n-3}*det1",
                samples.iter().map(|m| relation_sides(m).map(|(l, r)| l - r)).collect::<Result<Vec<_>>>()?,
            ));
            let spec = pattern(&GroupKind::Unipotent, n);
            let mut closed = Vec::new();
            for _ in 0..trials {
                let h = spec.sample(&mut s);
                closed.push(g.eval(&h)? - witness_closed_form(&h)?);
            }
            checks.push(Check::from_residuals("g(H) = (H31*H42 - H32*H41)*det_{n-4}(H)", closed));
        }
        _ => return Err(Error::Unsupported(format!("no relations for n = {n}"))),
    }
    Ok(QuotientReport { n, map, seed, trials, values, checks })
}
