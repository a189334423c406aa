#![allow(dead_code)]

use std::collections::BTreeMap;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_bigint::BigInt;
use num_traits::{Num, One, Zero};
use puncture_metric::{Coeff, Rational};

/// Sparse polynomial in t_1..t_8 with rational coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(BTreeMap<[u8; 8], Rational>);

impl Poly {
    pub fn var(j: usize) -> Self {
        let mut e = [0u8; 8];
        e[j - 1] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn monomial(e: [u8; 8], c: Rational) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(e, c);
        }
        Poly(m)
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial([0; 8], c)
    }

    fn insert(&mut self, e: [u8; 8], c: Rational) {
        let entry = self.0.entry(e).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.0.remove(&e);
        }
    }

    pub fn eval(&self, t: &[Rational]) -> Rational {
        self.0
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .enumerate()
                    .filter(|(_, &p)| p > 0)
                    .fold(c.clone(), |acc, (j, &p)| {
                        acc * num_traits::pow(t[j].clone(), p as usize)
                    })
            })
            .sum()
    }
}

impl Add for Poly {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (e, c) in rhs.0 {
            self.insert(e, c);
        }
        self
    }
}

impl Neg for Poly {
    type Output = Self;
    fn neg(self) -> Self {
        Poly(self.0.into_iter().map(|(e, c)| (e, -c)).collect())
    }
}

impl Sub for Poly {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for Poly {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Poly(BTreeMap::new());
        for (ea, ca) in &self.0 {
            for (eb, cb) in &rhs.0 {
                let mut e = *ea;
                for i in 0..8 {
                    e[i] += eb[i];
                }
                out.insert(e, ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl Div for Poly {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let c = match rhs.0.len() {
            1 if rhs.0.contains_key(&[0; 8]) => rhs.0[&[0; 8]].clone(),
            _ => panic!("division by a non-constant polynomial"),
        };
        Poly(
            self.0
                .into_iter()
                .map(|(e, x)| (e, x / c.clone()))
                .collect(),
        )
    }
}

impl Rem for Poly {
    type Output = Self;
    fn rem(self, _: Self) -> Self {
        panic!("polynomial remainder is not used")
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly(BTreeMap::new())
    }
    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Self::constant(Rational::one())
    }
}

impl Num for Poly {
    type FromStrRadixErr = ();
    fn from_str_radix(_: &str, _: u32) -> Result<Self, ()> {
        Err(())
    }
}

impl Coeff for Poly {
    fn from_integer(n: &BigInt) -> Self {
        Self::constant(Rational::from_integer(n.clone()))
    }
}

/// B_{n,k} as a sum over the set partitions of {1..n} into k blocks:
/// each partition contributes the monomial prod t_{|block|}.
pub fn bell_by_partitions(n: usize, k: usize) -> Poly {
    fn walk(i: usize, n: usize, k: usize, sizes: &mut Vec<usize>, out: &mut Poly) {
        if n - i < k.saturating_sub(sizes.len()) {
            return;
        }
        if i == n {
            if sizes.len() == k {
                let mut e = [0u8; 8];
                for &s in sizes.iter() {
                    e[s - 1] += 1;
                }
                out.insert(e, Rational::one());
            }
            return;
        }
        for b in 0..sizes.len() {
            sizes[b] += 1;
            walk(i + 1, n, k, sizes, out);
            sizes[b] -= 1;
        }
        if sizes.len() < k {
            sizes.push(1);
            walk(i + 1, n, k, sizes, out);
            sizes.pop();
        }
    }
    let mut out = Poly::zero();
    walk(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn sigma3_brute(m: u64) -> u64 {
    (1..=m)
        .filter(|d| m.is_multiple_of(*d))
        .map(|d| d * d * d)
        .sum()
}
