//! Multivariate polynomials with rational coefficients, just enough to
//! expand small determinants symbolically.

#![allow(dead_code)]

use std::collections::BTreeMap;

use nilcone::Rational;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MPoly(pub BTreeMap<Vec<u32>, Rational>);

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(Vec::new(), c);
        }
        MPoly(m)
    }

    pub fn one() -> Self {
        MPoly::constant(Rational::one())
    }

    pub fn var(idx: usize) -> Self {
        let mut e = vec![0; idx + 1];
        e[idx] = 1;
        MPoly(BTreeMap::from([(e, Rational::one())]))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn insert(&mut self, mut e: Vec<u32>, c: Rational) {
        while e.last() == Some(&0) {
            e.pop();
        }
        let slot = self.0.entry(e.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&e);
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.0 {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly(self.0.iter().map(|(e, c)| (e.clone(), -c)).collect())
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (ea, ca) in &self.0 {
            for (eb, cb) in &other.0 {
                let len = ea.len().max(eb.len());
                let e = (0..len)
                    .map(|i| ea.get(i).copied().unwrap_or(0) + eb.get(i).copied().unwrap_or(0))
                    .collect();
                out.insert(e, ca * cb);
            }
        }
        out
    }
}

pub type PMatrix = Vec<Vec<MPoly>>;

pub fn pmul(a: &PMatrix, b: &PMatrix) -> PMatrix {
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..b.len()).fold(MPoly::zero(), |acc, k| acc.add(&a[i][k].mul(&b[k][j]))))
                .collect()
        })
        .collect()
}

pub fn ppow(a: &PMatrix, e: usize) -> PMatrix {
    let n = a.len();
    let mut out: PMatrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j { MPoly::one() } else { MPoly::zero() }).collect())
        .collect();
    for _ in 0..e {
        out = pmul(&out, a);
    }
    out
}

/// Laplace expansion along the first row.
pub fn pdet(a: &PMatrix) -> MPoly {
    let n = a.len();
    if n == 0 {
        return MPoly::one();
    }
    let mut total = MPoly::zero();
    for j in 0..n {
        if a[0][j].is_zero() {
            continue;
        }
        let minor: PMatrix = a[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = a[0][j].mul(&pdet(&minor));
        total = if j % 2 == 0 { total.add(&term) } else { total.sub(&term) };
    }
    total
}
