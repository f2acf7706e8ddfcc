//! Exact counting.
//!
//! `|W^(q)_r|` is computed by a memoized recursion over the remaining residue
//! counts and the residue of the running prefix sum:
//!
//! ```text
//! f(counts, s) = Σ_{i : counts_i > 0, s + i ≢ 0} f(counts − e_i, s + i mod q)
//! f(0, s)      = 1
//! ```
//!
//! and `c^(q)_λ` is assembled from it by a multinomial correction for the
//! actual part sizes in each residue class and a binomial for placing the
//! parts divisible by `q` anywhere except the front.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::composition::{check_modulus, BigCount, Partition, ResidueProfile};
use crate::error::{Error, Result};

type Key = (Vec<usize>, u64);

trait Memo {
    /// Adds the memoized value for `key` to `acc`; false if absent.
    fn add_to(&self, key: &Key, acc: &mut BigUint) -> bool;
    fn contains(&self, key: &Key) -> bool;
    fn insert(&mut self, key: Key, value: BigUint);
}

// Post-order walk with an explicit stack; recursion depth would otherwise grow
// with the number of parts.
fn evaluate<M: Memo>(memo: &mut M, q: u64, root: Key) -> BigCount {
    let mut stack = vec![root.clone()];
    while let Some(key) = stack.last().cloned() {
        if memo.contains(&key) {
            stack.pop();
            continue;
        }
        let (counts, s) = &key;
        let mut total = BigUint::zero();
        let mut leaf = true;
        let mut missing = false;
        for i in 1..q {
            let idx = (i - 1) as usize;
            if counts[idx] == 0 {
                continue;
            }
            leaf = false;
            let next = (s + i) % q;
            if next == 0 {
                continue;
            }
            let mut child_counts = counts.clone();
            child_counts[idx] -= 1;
            let child = (child_counts, next);
            if !memo.add_to(&child, &mut total) {
                stack.push(child);
                missing = true;
            }
        }
        if leaf {
            total = BigUint::one();
        }
        if !missing {
            stack.pop();
            memo.insert(key, total);
        }
    }
    let mut out = BigUint::zero();
    memo.add_to(&root, &mut out);
    BigCount::from(out)
}

fn check_reduced(rp: &ResidueProfile) -> Result<()> {
    check_modulus(rp.modulus(), 2)?;
    if rp.r0() != 0 {
        return Err(Error::NonzeroMultiples(rp.r0()));
    }
    Ok(())
}

/// Memo table for a single modulus, owned by one caller.
#[derive(Debug, Clone)]
pub struct WCountTable {
    q: u64,
    memo: HashMap<Key, BigUint>,
}

impl Memo for HashMap<Key, BigUint> {
    fn add_to(&self, key: &Key, acc: &mut BigUint) -> bool {
        match self.get(key) {
            Some(v) => {
                *acc += v;
                true
            }
            None => false,
        }
    }

    fn contains(&self, key: &Key) -> bool {
        self.contains_key(key)
    }

    fn insert(&mut self, key: Key, value: BigUint) {
        HashMap::insert(self, key, value);
    }
}

impl WCountTable {
    pub fn new(q: u64) -> Result<Self> {
        check_modulus(q, 2)?;
        Ok(WCountTable {
            q,
            memo: HashMap::new(),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// Number of memoized states.
    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }

    /// Number of ways to order the remaining parts, with residue counts
    /// `counts`, after a prefix whose sum is `residue` mod q, keeping every
    /// later prefix sum nonzero mod q. The zero vector gives 1.
    pub fn extensions(&mut self, counts: &[usize], residue: u64) -> Result<BigCount> {
        self.check_counts(counts)?;
        Ok(evaluate(&mut self.memo, self.q, (counts.to_vec(), residue % self.q)))
    }

    /// `|W^(q)_r|`; zero for the zero vector.
    pub fn w_count(&mut self, rp: &ResidueProfile) -> Result<BigCount> {
        check_reduced(rp)?;
        if rp.modulus() != self.q {
            return Err(Error::ModulusMismatch {
                table: self.q,
                profile: rp.modulus(),
            });
        }
        if rp.num_parts() == 0 {
            return Ok(BigCount::zero());
        }
        Ok(evaluate(&mut self.memo, self.q, (rp.counts().to_vec(), 0)))
    }

    fn check_counts(&self, counts: &[usize]) -> Result<()> {
        let expected = (self.q - 1) as usize;
        if counts.len() != expected {
            return Err(Error::ProfileLength {
                len: counts.len(),
                expected,
            });
        }
        Ok(())
    }
}

/// Memo table shared between threads. Lookups take a read lock; each new
/// state is inserted under a short write lock. Results are identical to a
/// private [`WCountTable`].
#[derive(Debug)]
pub struct SharedWCountTable {
    q: u64,
    memo: RwLock<HashMap<Key, BigUint>>,
}

struct SharedMemo<'a>(&'a RwLock<HashMap<Key, BigUint>>);

impl Memo for SharedMemo<'_> {
    fn add_to(&self, key: &Key, acc: &mut BigUint) -> bool {
        let guard = self.0.read().expect("memo lock poisoned");
        match guard.get(key) {
            Some(v) => {
                *acc += v;
                true
            }
            None => false,
        }
    }

    fn contains(&self, key: &Key) -> bool {
        self.0.read().expect("memo lock poisoned").contains_key(key)
    }

    fn insert(&mut self, key: Key, value: BigUint) {
        self.0
            .write()
            .expect("memo lock poisoned")
            .entry(key)
            .or_insert(value);
    }
}

impl SharedWCountTable {
    pub fn new(q: u64) -> Result<Self> {
        check_modulus(q, 2)?;
        Ok(SharedWCountTable {
            q,
            memo: RwLock::new(HashMap::new()),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.memo.read().expect("memo lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn w_count(&self, rp: &ResidueProfile) -> Result<BigCount> {
        check_reduced(rp)?;
        if rp.modulus() != self.q {
            return Err(Error::ModulusMismatch {
                table: self.q,
                profile: rp.modulus(),
            });
        }
        if rp.num_parts() == 0 {
            return Ok(BigCount::zero());
        }
        Ok(evaluate(
            &mut SharedMemo(&self.memo),
            self.q,
            (rp.counts().to_vec(), 0),
        ))
    }

    /// `c^(q)_λ` using this table for the `|W|` factor.
    pub fn c_count(&self, lambda: &Partition) -> Result<BigCount> {
        assemble_c(lambda, self.q, |rp| self.w_count(rp))
    }
}

/// `|W^(q)_r|` with a fresh private memo. The zero vector gives zero, since
/// the empty composition is never q'-cumulative.
pub fn w_count(rp: &ResidueProfile) -> Result<BigCount> {
    WCountTable::new(rp.modulus())?.w_count(rp)
}

pub fn factorial(n: u64) -> BigCount {
    let mut acc = BigUint::one();
    for k in 2..=n {
        acc *= k;
    }
    BigCount::from(acc)
}

/// `n choose k`, zero whenever `k < 0`, `k > n` or `n < 0`.
pub fn binomial(n: i64, k: i64) -> BigCount {
    if n < 0 || k < 0 || k > n {
        return BigCount::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    BigCount::from(acc)
}

/// `c^(q)_λ`, the number of q'-cumulative rearrangements of `lambda`.
pub fn c_count(lambda: &Partition, q: u64) -> Result<BigCount> {
    check_modulus(q, 1)?;
    if q == 1 {
        return Ok(BigCount::zero());
    }
    let mut table = WCountTable::new(q)?;
    assemble_c(lambda, q, |rp| table.w_count(rp))
}

fn assemble_c<F>(lambda: &Partition, q: u64, mut w: F) -> Result<BigCount>
where
    F: FnMut(&ResidueProfile) -> Result<BigCount>,
{
    check_modulus(q, 1)?;
    if q == 1 || lambda.is_empty() {
        return Ok(BigCount::zero());
    }
    let rp = lambda.residue_profile(q)?;
    let w = w(&rp.without_multiples())?;
    if w.is_zero() {
        return Ok(w);
    }

    // Orderings of actual parts within each residue class, up to equal parts.
    let mut numer = factorial(rp.r0() as u64).into_biguint();
    for &c in rp.counts() {
        numer *= factorial(c as u64).into_biguint();
    }
    let mut denom = BigUint::one();
    for (_, m) in lambda.multiplicities() {
        denom *= factorial(m as u64).into_biguint();
    }
    debug_assert!((&numer % &denom).is_zero());

    // Multiples of q go anywhere but the first slot.
    let slots = binomial(lambda.len() as i64 - 1, rp.r0() as i64);

    Ok(BigCount::from(
        w.into_biguint() * (numer / denom) * slots.into_biguint(),
    ))
}
