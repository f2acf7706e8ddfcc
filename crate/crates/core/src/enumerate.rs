//! Brute-force enumeration. Everything in [`count`](crate::count) and
//! [`decide`](crate::decide) is checked against these generators.

use crate::composition::{check_modulus, BigCount, Composition, Partition, ResidueProfile};
use crate::error::{Error, Result};

/// Distinct rearrangements of a multiset of parts in lexicographic order.
///
/// Steps with the classical next-permutation rule, which skips equal
/// arrangements on its own, so each sequence is produced exactly once.
#[derive(Debug, Clone)]
pub struct Rearrangements {
    buffer: Vec<u64>,
    started: bool,
    done: bool,
}

impl Rearrangements {
    fn new(parts: &[u64]) -> Self {
        let mut buffer = parts.to_vec();
        buffer.sort_unstable();
        Rearrangements {
            buffer,
            started: false,
            done: false,
        }
    }

    fn advance(&mut self) -> bool {
        let v = &mut self.buffer;
        if v.len() < 2 {
            return false;
        }
        let mut i = v.len() - 1;
        while i > 0 && v[i - 1] >= v[i] {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        let mut j = v.len() - 1;
        while v[j] <= v[i - 1] {
            j -= 1;
        }
        v.swap(i - 1, j);
        v[i..].reverse();
        true
    }
}

impl Iterator for Rearrangements {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        if self.done {
            return None;
        }
        if self.started && !self.advance() {
            self.done = true;
            return None;
        }
        self.started = true;
        Some(Composition::from_parts_unchecked(self.buffer.clone()))
    }
}

/// All distinct rearrangements of `lambda`, lexicographically. The empty
/// partition has exactly one rearrangement, itself.
pub fn rearrangements(lambda: &Partition) -> Rearrangements {
    Rearrangements::new(lambda.parts())
}

/// The q'-cumulative rearrangements of `lambda`, in lexicographic order.
pub fn cumulative_rearrangements(lambda: &Partition, q: u64) -> Result<Vec<Composition>> {
    check_modulus(q, 1)?;
    Ok(rearrangements(lambda)
        .filter(|d| d.is_cumulative(q).unwrap_or(false))
        .collect())
}

/// `c^(q)_λ` by exhaustive enumeration.
pub fn brute_c(lambda: &Partition, q: u64) -> Result<BigCount> {
    check_modulus(q, 1)?;
    let n = rearrangements(lambda)
        .filter(|d| d.is_cumulative(q).unwrap_or(false))
        .count();
    Ok(BigCount::from(n))
}

/// The set `W^(q)_r` by exhaustive enumeration over rearrangements of the
/// partition with `r_i` parts equal to `i`.
pub fn brute_w(rp: &ResidueProfile) -> Result<Vec<Composition>> {
    check_modulus(rp.modulus(), 2)?;
    if rp.r0() != 0 {
        return Err(Error::NonzeroMultiples(rp.r0()));
    }
    cumulative_rearrangements(&rp.base_partition(), rp.modulus())
}

/// Visits every element of `W^(q)_r` in lexicographic order without
/// collecting them. A branch is abandoned as soon as a prefix sum hits a
/// multiple of `q`, so the cost tracks the size of the set rather than the
/// number of rearrangements.
pub fn brute_w_for_each<F: FnMut(&[u64])>(rp: &ResidueProfile, mut visit: F) -> Result<()> {
    check_modulus(rp.modulus(), 2)?;
    if rp.r0() != 0 {
        return Err(Error::NonzeroMultiples(rp.r0()));
    }
    let total = rp.num_parts();
    if total == 0 {
        return Ok(());
    }
    let mut walk = Walk {
        q: rp.modulus(),
        counts: rp.counts().to_vec(),
        live: rp.counts().iter().filter(|&&c| c > 0).count(),
        path: Vec::with_capacity(total),
    };
    walk.descend(total, 0, &mut visit);
    Ok(())
}

struct Walk {
    q: u64,
    counts: Vec<usize>,
    // Residue classes with parts still unplaced.
    live: usize,
    path: Vec<u64>,
}

impl Walk {
    fn descend<F: FnMut(&[u64])>(&mut self, left: usize, residue: u64, visit: &mut F) {
        if left == 0 {
            visit(&self.path);
            return;
        }
        if self.live == 1 {
            // Only one order remains for the rest.
            let slot = self.counts.iter().position(|&c| c > 0).expect("a live class");
            let i = slot as u64 + 1;
            let mut s = residue;
            for _ in 0..left {
                s += i;
                if s >= self.q {
                    s -= self.q;
                }
                if s == 0 {
                    return;
                }
            }
            let mark = self.path.len();
            self.path.extend(std::iter::repeat_n(i, left));
            visit(&self.path);
            self.path.truncate(mark);
            return;
        }
        for i in 1..self.q {
            let slot = (i - 1) as usize;
            if self.counts[slot] == 0 {
                continue;
            }
            let mut next = residue + i;
            if next >= self.q {
                next -= self.q;
            }
            if next == 0 {
                continue;
            }
            self.counts[slot] -= 1;
            if self.counts[slot] == 0 {
                self.live -= 1;
            }
            self.path.push(i);
            self.descend(left - 1, next, visit);
            self.path.pop();
            if self.counts[slot] == 0 {
                self.live += 1;
            }
            self.counts[slot] += 1;
        }
    }
}

/// `|W^(q)_r|` by the same enumeration as [`brute_w_for_each`].
pub fn brute_w_count(rp: &ResidueProfile) -> Result<u64> {
    let mut n = 0u64;
    brute_w_for_each(rp, |_| n += 1)?;
    Ok(n)
}

/// Lazily yields every partition of `n` once, in reverse-lexicographic order:
/// `(n)` first, `(1^n)` last.
#[derive(Debug, Clone)]
pub struct PartitionStream {
    current: Option<Vec<u64>>,
}

impl PartitionStream {
    pub fn new(n: u64) -> Self {
        let first = if n == 0 { Vec::new() } else { vec![n] };
        PartitionStream {
            current: Some(first),
        }
    }
}

impl Iterator for PartitionStream {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let cur = self.current.take()?;
        let out = Partition::from_parts_unchecked(cur.clone());

        let mut next = cur;
        let mut freed = 0u64;
        while next.last() == Some(&1) {
            next.pop();
            freed += 1;
        }
        if let Some(last) = next.last_mut() {
            *last -= 1;
            let cap = *last;
            freed += 1;
            while freed > 0 {
                let part = cap.min(freed);
                next.push(part);
                freed -= part;
            }
            self.current = Some(next);
        }
        Some(out)
    }
}

pub fn partitions_of(n: u64) -> PartitionStream {
    PartitionStream::new(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn part(p: &[u64]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    fn lists(v: impl IntoIterator<Item = Composition>) -> Vec<Vec<u64>> {
        v.into_iter().map(Composition::into_parts).collect()
    }

    fn factorial(n: usize) -> u128 {
        (1..=n as u128).product()
    }

    #[test]
    fn rearrangement_examples() {
        assert_eq!(
            lists(rearrangements(&part(&[2, 1, 1]))),
            vec![vec![1, 1, 2], vec![1, 2, 1], vec![2, 1, 1]]
        );
        assert_eq!(lists(rearrangements(&part(&[1, 1]))), vec![vec![1, 1]]);
        assert_eq!(lists(rearrangements(&Partition::empty())), vec![Vec::<u64>::new()]);
    }

    #[test]
    fn rearrangement_counts_are_multinomial() {
        for n in 0..=10 {
            for lambda in partitions_of(n) {
                let all = lists(rearrangements(&lambda));
                let denom: u128 = lambda
                    .multiplicities()
                    .iter()
                    .map(|&(_, m)| factorial(m))
                    .product();
                assert_eq!(all.len() as u128, factorial(lambda.len()) / denom);

                let distinct: HashSet<_> = all.iter().collect();
                assert_eq!(distinct.len(), all.len());
                assert!(all.windows(2).all(|w| w[0] < w[1]), "not lexicographic");
            }
        }
    }

    #[test]
    fn cumulative_examples() {
        assert_eq!(
            lists(cumulative_rearrangements(&part(&[3, 1, 1]), 3).unwrap()),
            vec![vec![1, 1, 3], vec![1, 3, 1]]
        );
        assert!(cumulative_rearrangements(&part(&[1, 1, 1, 1]), 3).unwrap().is_empty());
        assert_eq!(
            lists(cumulative_rearrangements(&part(&[2, 1, 1]), 3).unwrap()),
            vec![vec![1, 1, 2]]
        );
        assert!(cumulative_rearrangements(&part(&[1]), 0).is_err());
    }

    #[test]
    fn cumulative_members_sort_back() {
        for n in 1..=9 {
            for lambda in partitions_of(n) {
                for q in 2..=5 {
                    for d in cumulative_rearrangements(&lambda, q).unwrap() {
                        assert_eq!(d.sorted(), lambda);
                        assert!(d.is_cumulative(q).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn brute_c_examples() {
        assert_eq!(brute_c(&part(&[3, 1, 1]), 3).unwrap(), BigCount::from(2u64));
        assert_eq!(brute_c(&part(&[3, 2, 2]), 2).unwrap(), BigCount::from(1u64));
        assert!(brute_c(&Partition::empty(), 5).unwrap().is_zero());
        for lambda in partitions_of(6) {
            assert!(brute_c(&lambda, 1).unwrap().is_zero());
        }
    }

    #[test]
    fn brute_w_examples() {
        let w = |q, r: &[usize]| {
            lists(brute_w(&ResidueProfile::reduced(q, r.to_vec()).unwrap()).unwrap())
        };
        assert_eq!(w(3, &[2, 1]), vec![vec![1, 1, 2]]);
        assert!(w(3, &[4, 0]).is_empty());
        assert_eq!(w(2, &[1]), vec![vec![1]]);

        let with_multiples = ResidueProfile::new(3, 1, vec![1, 0]).unwrap();
        assert_eq!(brute_w(&with_multiples), Err(Error::NonzeroMultiples(1)));
        assert!(brute_w(&ResidueProfile::reduced(1, vec![]).unwrap()).is_err());
    }

    #[test]
    fn brute_w_members_match_profile() {
        for r in [[2usize, 1, 0], [1, 1, 1], [3, 0, 2], [2, 2, 2]] {
            let rp = ResidueProfile::reduced(4, r.to_vec()).unwrap();
            for d in brute_w(&rp).unwrap() {
                assert_eq!(d.residue_profile(4).unwrap(), rp);
                assert!(d.parts().iter().all(|&p| (1..4).contains(&p)));
            }
        }
    }

    #[test]
    fn streaming_w_matches_filtered_rearrangements() {
        for q in 2..=5u64 {
            let dims = (q - 1) as u32;
            for code in 0..4usize.pow(dims) {
                let r: Vec<usize> = (0..dims).map(|k| code / 4usize.pow(k) % 4).collect();
                let rp = ResidueProfile::reduced(q, r).unwrap();
                let mut seen = Vec::new();
                brute_w_for_each(&rp, |d| seen.push(d.to_vec())).unwrap();
                assert_eq!(seen, lists(brute_w(&rp).unwrap()), "{rp}");
                assert_eq!(brute_w_count(&rp).unwrap(), seen.len() as u64);
            }
        }
    }

    #[test]
    fn partition_stream_examples() {
        let four: Vec<Vec<u64>> = partitions_of(4).map(|p| p.parts().to_vec()).collect();
        assert_eq!(
            four,
            vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]
        );
        let zero: Vec<Partition> = partitions_of(0).collect();
        assert_eq!(zero, vec![Partition::empty()]);
        assert_eq!(partitions_of(7).count(), 15);
    }

    #[test]
    fn partition_numbers() {
        // A000041
        let expected = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135, 176, 231];
        for (n, &p) in expected.iter().enumerate() {
            let all: Vec<Partition> = partitions_of(n as u64).collect();
            assert_eq!(all.len(), p, "p({n})");
            assert!(all.iter().all(|l| l.size() == n as u64));
            assert!(all.windows(2).all(|w| w[0].parts() > w[1].parts()));
        }
    }
}
