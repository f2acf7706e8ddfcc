//! Deciding whether a partition has any q'-cumulative rearrangement, and
//! producing one when it does.
//!
//! For a prime modulus the decision needs only the residue profile: the size
//! must not be divisible by `p`, and after rotating a most frequent residue
//! class onto residue 1 (multiplying by its inverse), the largest class must
//! fit within the weighted capacity `|r|_p`. Witnesses are built on the
//! rotated profile by peeling parts off the end, then multiplied back.

use std::fmt;

use serde::Serialize;

use crate::composition::{check_modulus, mod_inverse, Composition, Partition, ResidueProfile};
use crate::count::{w_count, WCountTable};
use crate::error::{Error, Result};

/// Trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

fn check_lemma_domain(rp: &ResidueProfile) -> Result<()> {
    check_modulus(rp.modulus(), 2)?;
    if rp.r0() != 0 {
        return Err(Error::NonzeroMultiples(rp.r0()));
    }
    let max = rp.max()?;
    let r1 = rp.get(1);
    if r1 != max {
        return Err(Error::FirstNotMaximal { r1, max });
    }
    Ok(())
}

// Both conditions, assuming the domain checks already passed.
fn lemma1_holds(rp: &ResidueProfile) -> bool {
    let q = rp.modulus() as u128;
    let max = rp.max().unwrap_or(0);
    rp.get(1) == max && rp.norm() % q != 0 && max as u128 <= rp.weight().unwrap_or(0)
}

/// Nonemptiness of `W^(q)_r` for a profile whose most frequent residue is 1:
/// `q ∤ ‖r‖` and `max r ≤ |r|_q`.
pub fn lemma1_nonempty(rp: &ResidueProfile) -> Result<bool> {
    check_lemma_domain(rp)?;
    Ok(lemma1_holds(rp))
}

/// Outcome of the capacity test for one most frequent residue `a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaximizerCheck {
    pub a: u64,
    /// Inverse of `a` modulo the prime.
    pub b: u64,
    /// `|^b r|_p`.
    pub scaled_weight: u128,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExistenceVerdict {
    pub prime: u64,
    pub size: u64,
    pub max: usize,
    pub nonzero: bool,
    pub size_divisible: bool,
    pub checked_maximizers: Vec<MaximizerCheck>,
}

impl ExistenceVerdict {
    pub fn capacity_passed(&self) -> bool {
        self.checked_maximizers.iter().any(|m| m.passed)
    }

    /// True when some most frequent residues pass the capacity test and
    /// others fail it.
    pub fn maximizers_disagree(&self) -> bool {
        self.capacity_passed() && self.checked_maximizers.iter().any(|m| !m.passed)
    }

    /// One-line breakdown, e.g. `(i) pass, (ii) fail: max 4 > 2`.
    pub fn summary(&self) -> String {
        let first = if self.size_divisible {
            format!("(i) fail: {} divides {}", self.prime, self.size)
        } else {
            "(i) pass".to_string()
        };
        let second = match self.checked_maximizers.iter().find(|m| m.passed) {
            Some(m) => format!("(ii) pass: max {} <= {}", self.max, m.scaled_weight),
            None => {
                let best = self
                    .checked_maximizers
                    .iter()
                    .map(|m| m.scaled_weight)
                    .max()
                    .unwrap_or(0);
                format!("(ii) fail: max {} > {}", self.max, best)
            }
        };
        format!("{first}, {second}")
    }
}

impl fmt::Display for ExistenceVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.summary())
    }
}

/// Decides `c^(p)_λ ≠ 0` for prime `p`, testing every most frequent residue.
pub fn theorem1_nonzero(lambda: &Partition, p: u64) -> Result<ExistenceVerdict> {
    check_prime(p)?;
    let rp = lambda.residue_profile(p)?;
    let size = lambda.size();
    let size_divisible = size % p == 0;
    let max = rp.max()?;

    let mut checked = Vec::new();
    for a in 1..p {
        if rp.get(a) != max {
            continue;
        }
        let b = mod_inverse(a, p)?;
        let scaled_weight = rp.scale(b)?.weight()?;
        checked.push(MaximizerCheck {
            a,
            b,
            scaled_weight,
            passed: max as u128 <= scaled_weight,
        });
    }
    let nonzero = !size_divisible && checked.iter().any(|m| m.passed);
    Ok(ExistenceVerdict {
        prime: p,
        size,
        max,
        nonzero,
        size_divisible,
        checked_maximizers: checked,
    })
}

/// Cheap sufficient condition: `p ∤ |λ|` and the largest residue class count
/// is attained by at least two residues.
pub fn remark_sufficient(lambda: &Partition, p: u64) -> Result<bool> {
    check_prime(p)?;
    if lambda.size() % p == 0 {
        return Ok(false);
    }
    let rp = lambda.residue_profile(p)?;
    let max = rp.max()?;
    Ok(max > 0 && rp.counts().iter().filter(|&&c| c == max).count() >= 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessMethod {
    Lemma1Construction,
    DpGuidedSearch,
    None,
}

impl fmt::Display for WitnessMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WitnessMethod::Lemma1Construction => "lemma1-construction",
            WitnessMethod::DpGuidedSearch => "dp-guided-search",
            WitnessMethod::None => "none",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessReport {
    pub exists: bool,
    pub witness: Option<Composition>,
    pub method: WitnessMethod,
}

impl WitnessReport {
    fn none() -> Self {
        WitnessReport {
            exists: false,
            witness: None,
            method: WitnessMethod::None,
        }
    }
}

/// Builds an element of `W^(q)_r` for a profile with `r_1 = max r`, or
/// `None` when the set is empty.
pub fn witness_pattern(rp: &ResidueProfile) -> Result<Option<Composition>> {
    Ok(build_pattern(rp)?.map(|(c, _)| c))
}

fn build_pattern(rp: &ResidueProfile) -> Result<Option<(Composition, WitnessMethod)>> {
    check_lemma_domain(rp)?;
    if !lemma1_holds(rp) {
        return Ok(None);
    }
    let q = rp.modulus();
    let mut cur = rp.counts().to_vec();
    // Tails peeled off the end, innermost last.
    let mut tails: Vec<Vec<u64>> = Vec::new();
    let mut method = WitnessMethod::Lemma1Construction;

    let head = loop {
        let profile = ResidueProfile::reduced(q, cur.clone())?;
        let r1 = cur[0];
        let weight = profile.weight()?;
        if weight == (q - 1) as u128 {
            break Some(vec![1; r1]);
        }

        let norm = (profile.norm() % q as u128) as u64;
        if let Some(b) = (2..q).find(|&b| cur[(b - 1) as usize] > 0 && b != norm) {
            // Append a single b; the remainder keeps a nonzero total but not
            // necessarily the capacity bound, e.g. r = (6, 1, 0, 0) mod 5.
            let mut child = cur.clone();
            child[(b - 1) as usize] -= 1;
            if !lemma1_holds(&ResidueProfile::reduced(q, child.clone())?) {
                method = WitnessMethod::DpGuidedSearch;
                break greedy_pattern(&profile)?;
            }
            tails.push(vec![b]);
            cur = child;
            continue;
        }

        // Only one b in 2..q has r_b > 0, and b ≡ ‖r‖.
        let b = (2..q)
            .find(|&b| cur[(b - 1) as usize] > 0)
            .expect("weight above q - 1 implies a part of residue at least 2");
        let rb = cur[(b - 1) as usize];
        if r1 as u128 + (q - b) as u128 <= weight {
            let mut child = cur.clone();
            child[0] -= 1;
            child[(b - 1) as usize] -= 1;
            if !lemma1_holds(&ResidueProfile::reduced(q, child.clone())?) {
                method = WitnessMethod::DpGuidedSearch;
                break greedy_pattern(&profile)?;
            }
            tails.push(vec![b, 1]);
            cur = child;
            continue;
        }

        // Leading ones, then (b, 1^(q-b)) repeated, then (b, 1^tail).
        let used = (q - b) as i128 * (rb as i128 - 1) + (q - 1) as i128;
        let tail = r1 as i128 - used;
        if tail <= 0 || tail > (q - b) as i128 {
            method = WitnessMethod::DpGuidedSearch;
            break greedy_pattern(&profile)?;
        }
        let mut parts = vec![1u64; (q - 1) as usize];
        for _ in 1..rb {
            parts.push(b);
            parts.extend(std::iter::repeat_n(1, (q - b) as usize));
        }
        parts.push(b);
        parts.extend(std::iter::repeat_n(1, tail as usize));
        break Some(parts);
    };

    let Some(mut parts) = head else {
        return Ok(None);
    };
    for t in tails.into_iter().rev() {
        parts.extend(t);
    }
    let candidate = Composition::new(parts)?;
    if candidate.is_cumulative(q)? && candidate.residue_profile(q)? == *rp {
        return Ok(Some((candidate, method)));
    }
    Ok(greedy_pattern(rp)?
        .map(|p| (Composition::from_parts_unchecked(p), WitnessMethod::DpGuidedSearch)))
}

/// Picks, at every step, the smallest residue whose choice leaves a
/// completable remainder.
fn greedy_pattern(rp: &ResidueProfile) -> Result<Option<Vec<u64>>> {
    let q = rp.modulus();
    let mut table = WCountTable::new(q)?;
    if table.w_count(rp)?.is_zero() {
        return Ok(None);
    }
    let mut counts = rp.counts().to_vec();
    let mut residue = 0u64;
    let mut out = Vec::with_capacity(rp.num_parts());
    while counts.iter().any(|&c| c > 0) {
        let mut chosen = None;
        for i in 1..q {
            let idx = (i - 1) as usize;
            let next = (residue + i) % q;
            if counts[idx] == 0 || next == 0 {
                continue;
            }
            counts[idx] -= 1;
            let ok = !table.extensions(&counts, next)?.is_zero();
            counts[idx] += 1;
            if ok {
                chosen = Some((i, next));
                break;
            }
        }
        let (i, next) = chosen.expect("a completable state always has a completable step");
        counts[(i - 1) as usize] -= 1;
        residue = next;
        out.push(i);
    }
    Ok(Some(out))
}

/// Replaces each residue in `pattern` by an actual part of `lambda` from that
/// class, largest first, then appends the multiples of `q`.
fn lift(pattern: &Composition, lambda: &Partition, q: u64) -> Composition {
    let mut classes: Vec<Vec<u64>> = vec![Vec::new(); q as usize];
    // lambda is weakly decreasing, so each class comes out largest first.
    for &p in lambda.parts().iter().rev() {
        classes[(p % q) as usize].push(p);
    }
    let mut parts: Vec<u64> = pattern
        .parts()
        .iter()
        .map(|&i| classes[i as usize].pop().expect("pattern matches residue profile"))
        .collect();
    parts.extend(classes[0].drain(..).rev());
    Composition::from_parts_unchecked(parts)
}

/// A q'-cumulative rearrangement of `lambda`, or a report that none exists.
pub fn witness(lambda: &Partition, q: u64) -> Result<WitnessReport> {
    check_modulus(q, 2)?;
    if lambda.is_empty() {
        return Ok(WitnessReport::none());
    }
    let reduced = lambda.residue_profile(q)?.without_multiples();

    let found = if is_prime(q) {
        let verdict = theorem1_nonzero(lambda, q)?;
        match verdict.checked_maximizers.iter().find(|m| m.passed) {
            Some(m) if verdict.nonzero => build_pattern(&reduced.scale(m.b)?)?
                .map(|(pattern, method)| pattern.scale(m.a, q).map(|p| (p, method)))
                .transpose()?,
            _ => None,
        }
    } else if w_count(&reduced)?.is_zero() {
        None
    } else {
        greedy_pattern(&reduced)?
            .map(|p| (Composition::from_parts_unchecked(p), WitnessMethod::DpGuidedSearch))
    };

    Ok(match found {
        Some((pattern, method)) => WitnessReport {
            exists: true,
            witness: Some(lift(&pattern, lambda, q)),
            method,
        },
        None => WitnessReport::none(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{brute_c, brute_w, partitions_of};

    fn part(p: &[u64]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    fn profile(q: u64, r: &[usize]) -> ResidueProfile {
        ResidueProfile::reduced(q, r.to_vec()).unwrap()
    }

    fn parts_of(c: Option<Composition>) -> Option<Vec<u64>> {
        c.map(Composition::into_parts)
    }

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn lemma1_examples() {
        assert!(lemma1_nonempty(&profile(3, &[2, 1])).unwrap());
        assert!(!lemma1_nonempty(&profile(3, &[4, 0])).unwrap());
        assert!(!lemma1_nonempty(&profile(3, &[3, 3])).unwrap());
        assert!(!lemma1_nonempty(&profile(5, &[0, 0, 0, 0])).unwrap());
        assert_eq!(
            lemma1_nonempty(&profile(3, &[1, 2])),
            Err(Error::FirstNotMaximal { r1: 1, max: 2 })
        );
        assert!(lemma1_nonempty(&ResidueProfile::new(3, 1, vec![1, 0]).unwrap()).is_err());
    }

    #[test]
    fn theorem1_examples() {
        let v = theorem1_nonzero(&part(&[2, 1, 1]), 3).unwrap();
        assert!(v.nonzero);
        assert_eq!(
            v.checked_maximizers,
            vec![MaximizerCheck { a: 1, b: 1, scaled_weight: 3, passed: true }]
        );

        let v = theorem1_nonzero(&part(&[1, 1, 1, 1]), 3).unwrap();
        assert!(!v.nonzero && !v.size_divisible);
        assert_eq!(v.summary(), "(i) pass, (ii) fail: max 4 > 2");

        let v = theorem1_nonzero(&part(&[5, 5, 2]), 5).unwrap();
        assert!(v.nonzero);
        assert_eq!(
            v.checked_maximizers,
            vec![MaximizerCheck { a: 2, b: 3, scaled_weight: 4, passed: true }]
        );

        let v = theorem1_nonzero(&Partition::empty(), 3).unwrap();
        assert!(!v.nonzero && v.size_divisible);

        assert_eq!(theorem1_nonzero(&part(&[1]), 4), Err(Error::NotPrime(4)));
        assert_eq!(theorem1_nonzero(&part(&[1]), 1), Err(Error::NotPrime(1)));
    }

    #[test]
    fn remark_examples() {
        assert!(remark_sufficient(&part(&[2, 1]), 5).unwrap());
        assert!(!remark_sufficient(&part(&[2, 1, 1]), 3).unwrap());
        assert!(!remark_sufficient(&part(&[2, 1]), 3).unwrap());
        assert!(!remark_sufficient(&part(&[5, 5]), 5).unwrap());
        assert!(remark_sufficient(&part(&[1]), 6).is_err());
    }

    #[test]
    fn witness_pattern_examples() {
        assert_eq!(parts_of(witness_pattern(&profile(3, &[2, 0])).unwrap()), Some(vec![1, 1]));
        assert_eq!(
            parts_of(witness_pattern(&profile(3, &[3, 1])).unwrap()),
            Some(vec![1, 1, 2, 1])
        );
        assert_eq!(
            parts_of(witness_pattern(&profile(4, &[2, 0, 1])).unwrap()),
            Some(vec![1, 1, 3])
        );
        assert_eq!(witness_pattern(&profile(3, &[4, 0])).unwrap(), None);
        assert!(witness_pattern(&profile(3, &[0, 1])).is_err());
    }

    #[test]
    fn pattern_cases_use_the_construction() {
        // base, case A, case B(a) and case B(b)
        for (q, r) in [
            (5, vec![3, 0, 0, 0]),
            (5, vec![2, 1, 1, 0]),
            (5, vec![3, 0, 2, 0]),
            (3, vec![3, 1]),
        ] {
            let rp = profile(q, &r);
            let (c, method) = build_pattern(&rp).unwrap().unwrap();
            assert_eq!(method, WitnessMethod::Lemma1Construction, "q={q} r={r:?}");
            assert!(c.is_cumulative(q).unwrap());
            assert_eq!(c.residue_profile(q).unwrap(), rp);
        }
    }

    #[test]
    fn single_part_step_can_break_capacity() {
        // Dropping the 2 leaves (6, 0, 0, 0), which exceeds |r|_5 = 4.
        let rp = profile(5, &[6, 1, 0, 0]);
        assert!(lemma1_nonempty(&rp).unwrap());
        let (c, method) = build_pattern(&rp).unwrap().unwrap();
        assert_eq!(method, WitnessMethod::DpGuidedSearch);
        assert_eq!(c.into_parts(), vec![1, 1, 1, 1, 2, 1, 1]);
        assert_eq!(brute_w(&rp).unwrap().len(), 1);
    }

    #[test]
    fn pattern_agrees_with_enumeration() {
        for q in 2u64..=7 {
            let dims = (q - 1) as u32;
            for code in 0..5usize.pow(dims) {
                let r: Vec<usize> = (0..dims).map(|k| code / 5usize.pow(k) % 5).collect();
                if r.iter().sum::<usize>() > 10 {
                    continue;
                }
                let rp = profile(q, &r);
                if lemma1_nonempty(&rp).is_err() {
                    continue;
                }
                let brute = brute_w(&rp).unwrap();
                match witness_pattern(&rp).unwrap() {
                    Some(c) => assert!(brute.contains(&c), "q={q} r={r:?} got {c}"),
                    None => assert!(brute.is_empty(), "q={q} r={r:?}"),
                }
            }
        }
    }

    #[test]
    fn witness_examples() {
        let w = |p: &[u64], q| parts_of(witness(&part(p), q).unwrap().witness);
        assert_eq!(w(&[3, 1, 1], 3), Some(vec![1, 1, 3]));
        assert_eq!(w(&[5, 5, 2], 5), Some(vec![2, 5, 5]));
        assert_eq!(w(&[1, 1, 1, 1], 3), None);
        assert_eq!(witness(&part(&[1]), 1), Err(Error::ModulusTooSmall { q: 1, min: 2 }));

        let report = witness(&part(&[1, 1, 1, 1]), 3).unwrap();
        assert_eq!((report.exists, report.method), (false, WitnessMethod::None));
        let report = witness(&part(&[7, 4, 3]), 6).unwrap();
        assert_eq!(report.method, WitnessMethod::DpGuidedSearch);
    }

    #[test]
    fn lift_uses_largest_parts_first() {
        let lambda = part(&[9, 7, 6, 5, 4, 1]);
        let pattern = Composition::new(vec![1, 1, 2, 1]).unwrap();
        assert_eq!(lift(&pattern, &lambda, 3).into_parts(), vec![7, 4, 5, 1, 9, 6]);
    }

    #[test]
    fn witness_sound_and_complete() {
        for n in 0..=10 {
            for lambda in partitions_of(n) {
                for q in 2..=7 {
                    let report = witness(&lambda, q).unwrap();
                    let brute = brute_c(&lambda, q).unwrap();
                    assert_eq!(report.exists, !brute.is_zero(), "lambda={lambda} q={q}");
                    if let Some(w) = report.witness {
                        assert_eq!(w.sorted(), lambda);
                        assert!(w.is_cumulative(q).unwrap(), "lambda={lambda} q={q} w={w}");
                    }
                }
            }
        }
    }

    #[test]
    fn verdict_matches_brute_force() {
        for n in 0..=10 {
            for lambda in partitions_of(n) {
                for p in [2, 3, 5, 7] {
                    let v = theorem1_nonzero(&lambda, p).unwrap();
                    assert_eq!(v.nonzero, !brute_c(&lambda, p).unwrap().is_zero());
                    if remark_sufficient(&lambda, p).unwrap() {
                        assert!(v.nonzero);
                    }
                }
            }
        }
    }
}
