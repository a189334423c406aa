//! Partial exponential Bell polynomials B_{n,k}.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::rational::factorial;
use crate::scalar::Coeff;

/// Index pair (n, k) of B_{n,k}, with 1 <= k <= n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BellIndex {
    n: usize,
    k: usize,
}

impl BellIndex {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k < 1 || k > n {
            return Err(Error::InvalidBellIndex { n, k });
        }
        Ok(Self { n, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of arguments B_{n,k} reads: t_1, ..., t_{n-k+1}.
    pub fn arity(&self) -> usize {
        self.n - self.k + 1
    }
}

/// B_{n,k}(t_1, ..., t_{n-k+1}); `t[0]` is t_1. Extra trailing entries are ignored.
///
/// Sums n! prod t_i^{r_i} / (r_i! (i!)^{r_i}) over multiplicity vectors with
/// sum r_i = k and sum i r_i = n. Multiplicities of zero arguments are forced
/// to zero, which prunes most of the search for reversion-type inputs.
pub fn bell_polynomial<C: Coeff>(idx: BellIndex, t: &[C]) -> Result<C> {
    let arity = idx.arity();
    if t.len() < arity {
        return Err(Error::BellArgumentsTooShort {
            n: idx.n,
            k: idx.k,
            needed: arity,
            got: t.len(),
        });
    }
    let fact: Vec<BigInt> = (0..=idx.n).map(factorial).collect();
    let mut search = Search {
        t: &t[..arity],
        fact: &fact,
        total: C::zero(),
    };
    search.descend(arity, idx.k, idx.n, BigInt::one(), C::one());
    Ok(search.total)
}

/// All B_{n,k}(t) with n <= `n_max` whose arguments lie within `t`, by the
/// recurrence B_{n,k} = sum_{i=1}^{n-k+1} C(n-1, i-1) t_i B_{n-i,k-1}.
#[derive(Debug, Clone)]
pub struct BellTable<C> {
    rows: Vec<Vec<C>>,
    args: usize,
}

impl<C: Coeff> BellTable<C> {
    pub fn new(t: &[C], n_max: usize) -> Self {
        let mut binom: Vec<C> = vec![C::one()];
        let mut rows: Vec<Vec<C>> = vec![vec![C::one()]];
        for n in 1..=n_max {
            // binom holds C(n-1, j) for j = 0..n-1
            if n > 1 {
                let mut next = vec![C::one(); n];
                for j in 1..n - 1 {
                    next[j] = binom[j - 1].clone() + binom[j].clone();
                }
                binom = next;
            }
            let mut row = vec![C::zero(); n + 1];
            for (k, slot) in row.iter_mut().enumerate().skip(1) {
                if n - k + 1 > t.len() {
                    continue;
                }
                let mut total = C::zero();
                for i in 1..=n - k + 1 {
                    if t[i - 1].is_zero() {
                        continue;
                    }
                    let prev = &rows[n - i];
                    if k - 1 < prev.len() && !prev[k - 1].is_zero() {
                        total =
                            total + binom[i - 1].clone() * t[i - 1].clone() * prev[k - 1].clone();
                    }
                }
                *slot = total;
            }
            rows.push(row);
        }
        Self {
            rows,
            args: t.len(),
        }
    }

    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn get(&self, idx: BellIndex) -> Result<&C> {
        if idx.arity() > self.args {
            return Err(Error::BellArgumentsTooShort {
                n: idx.n,
                k: idx.k,
                needed: idx.arity(),
                got: self.args,
            });
        }
        self.rows
            .get(idx.n)
            .map(|row| &row[idx.k])
            .ok_or(Error::InvalidBellIndex { n: idx.n, k: idx.k })
    }
}

struct Search<'a, C> {
    t: &'a [C],
    fact: &'a [BigInt],
    total: C,
}

impl<C: Coeff> Search<'_, C> {
    /// Chooses r_size for part sizes `size`, `size - 1`, ..., 1.
    fn descend(&mut self, size: usize, parts: usize, sum: usize, denom: BigInt, product: C) {
        if parts == 0 {
            if sum == 0 {
                let weight = &self.fact[self.fact.len() - 1] / denom;
                self.total = self.total.clone() + C::from_integer(&weight) * product;
            }
            return;
        }
        if size == 0 || sum < parts || sum > parts * size {
            return;
        }
        let arg = &self.t[size - 1];
        let max_r = if arg.is_zero() {
            0
        } else {
            (sum / size).min(parts)
        };
        let mut power = C::one();
        let mut d = denom;
        for r in 0..=max_r {
            if r > 0 {
                power = power * arg.clone();
                d = d * &self.fact[size] * BigInt::from(r);
            }
            self.descend(
                size - 1,
                parts - r,
                sum - r * size,
                d.clone(),
                product.clone() * power.clone(),
            );
        }
    }
}
