//! Compositions, partitions and residue profiles.

use std::fmt;
use std::ops::Deref;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};

/// An exact nonnegative count.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BigCount(BigUint);

impl BigCount {
    pub fn zero() -> Self {
        BigCount(BigUint::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn into_biguint(self) -> BigUint {
        self.0
    }
}

impl From<BigUint> for BigCount {
    fn from(v: BigUint) -> Self {
        BigCount(v)
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        BigCount(BigUint::from(v))
    }
}

impl From<usize> for BigCount {
    fn from(v: usize) -> Self {
        BigCount(BigUint::from(v))
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A finite sequence of positive parts. The empty composition is allowed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Composition {
    parts: Vec<u64>,
}

impl Composition {
    /// Fails on a zero part, or if the total does not fit in a `u64`.
    pub fn new(parts: Vec<u64>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::ZeroPart);
        }
        parts
            .iter()
            .try_fold(0u64, |acc, &p| acc.checked_add(p))
            .ok_or(Error::SizeOverflow)?;
        Ok(Composition { parts })
    }

    pub fn empty() -> Self {
        Composition { parts: Vec::new() }
    }

    // Callers guarantee positive parts with a representable total.
    pub(crate) fn from_parts_unchecked(parts: Vec<u64>) -> Self {
        debug_assert!(!parts.contains(&0));
        Composition { parts }
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn into_parts(self) -> Vec<u64> {
        self.parts
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Sum of the parts.
    pub fn size(&self) -> u64 {
        self.parts.iter().sum()
    }

    /// `(δ⁺_1, …, δ⁺_ℓ)`; the last entry is the size.
    pub fn partial_sums(&self) -> Vec<u64> {
        self.parts
            .iter()
            .scan(0u64, |acc, &p| {
                *acc += p;
                Some(*acc)
            })
            .collect()
    }

    /// Concatenation `self # other`.
    pub fn concat(&self, other: &Composition) -> Result<Composition> {
        let mut parts = Vec::with_capacity(self.len() + other.len());
        parts.extend_from_slice(&self.parts);
        parts.extend_from_slice(&other.parts);
        Composition::new(parts)
    }

    /// Number of parts equal to `d`.
    pub fn multiplicity(&self, d: u64) -> Result<usize> {
        if d < 1 {
            return Err(Error::InvalidPartValue(d));
        }
        Ok(self.parts.iter().filter(|&&p| p == d).count())
    }

    /// True iff the composition is nonempty and no partial sum is divisible
    /// by `q`. The empty composition never qualifies.
    pub fn is_cumulative(&self, q: u64) -> Result<bool> {
        check_modulus(q, 1)?;
        if self.is_empty() {
            return Ok(false);
        }
        let mut residue = 0u64;
        for &p in &self.parts {
            residue = (residue + p % q) % q;
            if residue == 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Classifies every part by its residue modulo `q`.
    pub fn residue_profile(&self, q: u64) -> Result<ResidueProfile> {
        check_modulus(q, 1)?;
        let mut r0 = 0;
        let mut r = vec![0usize; (q - 1) as usize];
        for &p in &self.parts {
            match p % q {
                0 => r0 += 1,
                j => r[(j - 1) as usize] += 1,
            }
        }
        Ok(ResidueProfile { q, r0, r })
    }

    /// The part-wise map `δ_t ↦ a·δ_t mod q`, which sends q'-cumulative
    /// compositions with parts in `1..q` to q'-cumulative ones.
    ///
    /// Only parts in `1..q` are accepted; nothing is silently reduced.
    pub fn scale(&self, a: u64, q: u64) -> Result<Composition> {
        check_modulus(q, 2)?;
        let a = invertible_residue(a, q)?;
        let parts = self
            .parts
            .iter()
            .map(|&p| {
                if p >= q {
                    Err(Error::PartOutOfRange { part: p, q })
                } else {
                    Ok(mul_mod(a, p, q))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Composition::from_parts_unchecked(parts))
    }

    /// Sorts the parts into a partition.
    pub fn sorted(&self) -> Partition {
        let mut parts = self.parts.clone();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition {
            inner: Composition { parts },
        }
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_parts(f, &self.parts, ",")
    }
}

/// A weakly decreasing composition.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Partition {
    inner: Composition,
}

impl Partition {
    /// Fails unless the parts are positive and weakly decreasing.
    pub fn new(parts: Vec<u64>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotPartition(parts));
        }
        Ok(Partition {
            inner: Composition::new(parts)?,
        })
    }

    /// Accepts parts in any order.
    pub fn from_unsorted(parts: Vec<u64>) -> Result<Self> {
        Ok(Composition::new(parts)?.sorted())
    }

    pub fn empty() -> Self {
        Partition::default()
    }

    pub(crate) fn from_parts_unchecked(parts: Vec<u64>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        Partition {
            inner: Composition::from_parts_unchecked(parts),
        }
    }

    pub fn as_composition(&self) -> &Composition {
        &self.inner
    }

    /// Multiplicities `(s, n_s)` of the distinct part sizes, largest first.
    pub fn multiplicities(&self) -> Vec<(u64, usize)> {
        let mut out: Vec<(u64, usize)> = Vec::new();
        for &p in self.inner.parts() {
            match out.last_mut() {
                Some((s, n)) if *s == p => *n += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }
}

impl Deref for Partition {
    type Target = Composition;

    fn deref(&self) -> &Composition {
        &self.inner
    }
}

impl From<Partition> for Composition {
    fn from(p: Partition) -> Self {
        p.inner
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.inner.fmt(f)
    }
}

/// Residue-class part counts modulo `q`: `r0` parts divisible by `q` and
/// `r[i - 1] = r_i` parts congruent to `i` for `i` in `1..q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueProfile {
    q: u64,
    r0: usize,
    r: Vec<usize>,
}

impl ResidueProfile {
    pub fn new(q: u64, r0: usize, r: Vec<usize>) -> Result<Self> {
        check_modulus(q, 1)?;
        let expected = (q - 1) as usize;
        if r.len() != expected {
            return Err(Error::ProfileLength {
                len: r.len(),
                expected,
            });
        }
        Ok(ResidueProfile { q, r0, r })
    }

    /// A profile with no parts divisible by `q`.
    pub fn reduced(q: u64, r: Vec<usize>) -> Result<Self> {
        ResidueProfile::new(q, 0, r)
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn r0(&self) -> usize {
        self.r0
    }

    /// `(r_1, …, r_{q-1})`.
    pub fn counts(&self) -> &[usize] {
        &self.r
    }

    /// `r_i` for `1 <= i < q`.
    pub fn get(&self, i: u64) -> usize {
        assert!(i >= 1 && i < self.q, "residue index {i} out of range");
        self.r[(i - 1) as usize]
    }

    /// Total number of parts, including those divisible by `q`.
    pub fn num_parts(&self) -> usize {
        self.r0 + self.r.iter().sum::<usize>()
    }

    /// `‖r‖ = Σ i·r_i`.
    pub fn norm(&self) -> u128 {
        self.r
            .iter()
            .enumerate()
            .map(|(k, &c)| (k as u128 + 1) * c as u128)
            .sum()
    }

    /// `|r|_q = (q − 1) + Σ_{i ≥ 2} (q − i)·r_i`. Note that `r_1` does not
    /// contribute.
    pub fn weight(&self) -> Result<u128> {
        check_modulus(self.q, 2)?;
        let q = self.q as u128;
        let tail: u128 = self
            .r
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| (q - (k as u128 + 1)) * c as u128)
            .sum();
        Ok(q - 1 + tail)
    }

    /// `max r` over the nonzero residues.
    pub fn max(&self) -> Result<usize> {
        check_modulus(self.q, 2)?;
        Ok(self.r.iter().copied().max().unwrap_or(0))
    }

    /// The index permutation `^a r`, where `r'_j = r_i` for `j ≡ a·i (mod q)`.
    pub fn scale(&self, a: u64) -> Result<ResidueProfile> {
        check_modulus(self.q, 2)?;
        let q = self.q;
        let a = invertible_residue(a, q)?;
        let mut r = vec![0usize; self.r.len()];
        for (k, &c) in self.r.iter().enumerate() {
            let j = mul_mod(a, k as u64 + 1, q);
            r[(j - 1) as usize] = c;
        }
        Ok(ResidueProfile { q, r0: self.r0, r })
    }

    /// Same counts with `r0` cleared.
    pub fn without_multiples(&self) -> ResidueProfile {
        ResidueProfile {
            q: self.q,
            r0: 0,
            r: self.r.clone(),
        }
    }

    /// The partition with `r_i` parts equal to `i`.
    pub fn base_partition(&self) -> Partition {
        let parts = (1..self.q)
            .rev()
            .flat_map(|i| std::iter::repeat_n(i, self.r[(i - 1) as usize]))
            .collect();
        Partition::from_parts_unchecked(parts)
    }
}

impl fmt::Display for ResidueProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q={} r0={} r=(", self.q, self.r0)?;
        for (k, c) in self.r.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// The unique `b` in `1..q` with `a·b ≡ 1 (mod q)`.
pub fn mod_inverse(a: u64, q: u64) -> Result<u64> {
    check_modulus(q, 2)?;
    let (g, x, _) = ext_gcd((a % q) as i128, q as i128);
    if g != 1 {
        return Err(Error::NotInvertible { a, q });
    }
    Ok(x.rem_euclid(q as i128) as u64)
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

pub(crate) fn check_modulus(q: u64, min: u64) -> Result<()> {
    if q < min {
        Err(Error::ModulusTooSmall { q, min })
    } else {
        Ok(())
    }
}

fn invertible_residue(a: u64, q: u64) -> Result<u64> {
    mod_inverse(a, q).map_err(|_| Error::NotInvertible { a, q })?;
    Ok(a % q)
}

pub(crate) fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

pub(crate) fn write_parts(f: &mut impl fmt::Write, parts: &[u64], sep: &str) -> fmt::Result {
    for (k, p) in parts.iter().enumerate() {
        if k > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{p}")?;
    }
    Ok(())
}
