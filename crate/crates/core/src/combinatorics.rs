//! Binomial coefficients and k-subset enumeration / ranking.

use num_bigint::BigUint;

/// `C(n, k)` as `u128`; panics on overflow (never reached at the sizes used here).
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul(u128::from(n - i))
            .expect("binomial overflow")
            / u128::from(i + 1);
    }
    acc
}

pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Table of binomials `C(a, b)` for `a <= n`, `b <= k`, used for fast colex ranking.
#[derive(Clone, Debug)]
pub struct BinomialTable {
    k: usize,
    table: Vec<u64>,
}

impl BinomialTable {
    pub fn new(n: usize, k: usize) -> Self {
        let mut table = vec![0u64; (n + 1) * (k + 1)];
        for a in 0..=n {
            for b in 0..=k.min(a) {
                table[a * (k + 1) + b] = binomial(a as u64, b as u64) as u64;
            }
        }
        BinomialTable { k, table }
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> u64 {
        if b > self.k {
            return binomial(a as u64, b as u64) as u64;
        }
        self.table.get(a * (self.k + 1) + b).copied().unwrap_or_else(|| binomial(a as u64, b as u64) as u64)
    }

    /// Colex rank of a strictly increasing vertex sequence.
    #[inline]
    pub fn colex_rank(&self, vertices: &[u32]) -> u64 {
        vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| self.get(v as usize, i + 1))
            .sum()
    }
}

/// Colex rank of a strictly increasing sequence.
pub fn colex_rank(vertices: &[u32]) -> u128 {
    vertices
        .iter()
        .enumerate()
        .map(|(i, &v)| binomial(u64::from(v), i as u64 + 1))
        .sum()
}

/// Inverse of [`colex_rank`] for subsets of size `k`.
pub fn colex_unrank(mut rank: u128, k: usize) -> Vec<u32> {
    let mut out = vec![0u32; k];
    for i in (1..=k).rev() {
        // largest v with C(v, i) <= rank
        let mut v = (i - 1) as u64;
        while binomial(v + 1, i as u64) <= rank {
            v += 1;
        }
        rank -= binomial(v, i as u64);
        out[i - 1] = v as u32;
    }
    out
}

/// Lexicographic iterator over the `k`-subsets of `0..n`.
#[derive(Clone, Debug)]
pub struct KSubsets {
    n: u32,
    current: Vec<u32>,
    done: bool,
}

impl KSubsets {
    pub fn new(n: usize, k: usize) -> Self {
        KSubsets {
            n: n as u32,
            current: (0..k as u32).collect(),
            done: k > n,
        }
    }
}

impl Iterator for KSubsets {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let k = self.current.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.current[i] < self.n - (k - i) as u32 {
                self.current[i] += 1;
                for j in i + 1..k {
                    self.current[j] = self.current[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Index subsets of size `k` from `0..n`, lexicographic, as `usize` positions.
pub fn index_subsets(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    KSubsets::new(n, k).map(|s| s.into_iter().map(|v| v as usize).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(20, 10), 184_756);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial_big(60, 3), BigUint::from(34_220u32));
    }

    #[test]
    fn subsets_are_lexicographic_and_complete() {
        let all: Vec<_> = KSubsets::new(5, 3).collect();
        assert_eq!(all.len(), 10);
        assert_eq!(all[0], vec![0, 1, 2]);
        assert_eq!(all[9], vec![2, 3, 4]);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(KSubsets::new(3, 0).count(), 1);
        assert_eq!(KSubsets::new(2, 3).count(), 0);
    }

    #[test]
    fn colex_round_trip() {
        let table = BinomialTable::new(9, 3);
        for s in KSubsets::new(9, 3) {
            let r = colex_rank(&s);
            assert_eq!(colex_unrank(r, 3), s);
            assert_eq!(u128::from(table.colex_rank(&s)), r);
        }
    }
}
