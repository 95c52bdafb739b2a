//! Numerical semigroups: Frobenius numbers, gap sets and representations.
//!
//! `frobenius_number` uses the Apéry set of `S` relative to `m = min(S)`:
//! the least element of `Σ(S)` in each residue class mod `m`, found as
//! shortest paths on the residue graph with an edge `r -> (r + s) mod m` of
//! weight `s` for every generator. The Frobenius number is the largest
//! Apéry element minus `m`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use crate::arith::{factorize, gcd_all};
use crate::error::{Error, Result};

/// Gap lists longer than this are not materialized.
pub const GAP_LIST_LIMIT: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Frobenius {
    Finite(i64),
    /// `gcd(S) > 1`: infinitely many integers are not representable.
    Infinite,
}

impl Frobenius {
    pub fn finite(self) -> Option<i64> {
        match self {
            Frobenius::Finite(v) => Some(v),
            Frobenius::Infinite => None,
        }
    }
}

impl Serialize for Frobenius {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Frobenius::Finite(v) => s.serialize_i64(*v),
            Frobenius::Infinite => s.serialize_str("infinity"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemigroupSpec {
    /// Sorted, deduplicated generators.
    pub generators: Vec<u64>,
    pub gcd: u64,
    pub frobenius: Frobenius,
    /// Number of non-representable positive integers, when finite.
    pub gap_count: Option<u64>,
    /// The gaps themselves, when finite and at most [`GAP_LIST_LIMIT`] long.
    pub gaps: Option<Vec<u64>>,
}

fn normalize(set: &[u64]) -> Result<Vec<u64>> {
    if set.is_empty() {
        return Err(Error::InvalidParameter("generator set must be nonempty".into()));
    }
    if set.contains(&0) {
        return Err(Error::InvalidParameter("generators must be positive".into()));
    }
    let mut gens = set.to_vec();
    gens.sort_unstable();
    gens.dedup();
    Ok(gens)
}

/// Apéry set of a gcd-1 generator list with respect to its minimum:
/// entry `r` is the least representable integer congruent to `r`.
pub fn apery_set(generators: &[u64]) -> Result<Vec<u64>> {
    let gens = normalize(generators)?;
    if gcd_all(&gens) != 1 {
        return Err(Error::InvalidParameter("Apéry set needs gcd(S) = 1".into()));
    }
    let m = gens[0];
    let size = usize::try_from(m).map_err(|_| Error::BudgetExceeded(format!("min(S) = {m}")))?;
    let mut dist = vec![u64::MAX; size];
    dist[0] = 0;
    let mut heap = BinaryHeap::from([Reverse((0u64, 0usize))]);
    while let Some(Reverse((d, r))) = heap.pop() {
        if d > dist[r] {
            continue;
        }
        for &s in &gens[1..] {
            let next = ((r as u64 + s) % m) as usize;
            let nd = d + s;
            if nd < dist[next] {
                dist[next] = nd;
                heap.push(Reverse((nd, next)));
            }
        }
    }
    Ok(dist)
}

pub fn frobenius_number(set: &[u64]) -> Result<SemigroupSpec> {
    let generators = normalize(set)?;
    let gcd = gcd_all(&generators);
    if gcd != 1 {
        return Ok(SemigroupSpec { generators, gcd, frobenius: Frobenius::Infinite, gap_count: None, gaps: None });
    }
    let apery = apery_set(&generators)?;
    let m = generators[0];
    let frobenius = *apery.iter().max().unwrap() as i64 - m as i64;
    // class r holds the gaps r, r + m, ..., apery[r] - m
    let gap_count: u64 = apery.iter().enumerate().map(|(r, &a)| (a - r as u64) / m).sum();
    let gaps = (gap_count <= GAP_LIST_LIMIT).then(|| {
        let mut gaps: Vec<u64> = apery
            .iter()
            .enumerate()
            .flat_map(|(r, &a)| (r as u64..a).step_by(m as usize))
            .collect();
        gaps.sort_unstable();
        gaps
    });
    Ok(SemigroupSpec {
        generators,
        gcd,
        frobenius: Frobenius::Finite(frobenius),
        gap_count: Some(gap_count),
        gaps,
    })
}

/// Closed form `xy - x - y` for two coprime generators.
pub fn sylvester(x: u64, y: u64) -> Result<i64> {
    if x < 2 || y < 2 {
        return Err(Error::InvalidParameter("generators must be at least 2".into()));
    }
    if gcd_all(&[x, y]) != 1 {
        return Err(Error::InvalidParameter(format!("{x} and {y} are not coprime")));
    }
    Ok((x * y) as i64 - x as i64 - y as i64)
}

/// Membership of `k` in the semigroup generated by `set` (0 included).
pub fn contains(k: u64, set: &[u64]) -> Result<bool> {
    let gens = normalize(set)?;
    Ok(Membership::new(&gens)?.contains(k))
}

/// Membership oracle for one generator list, via its reduced Apéry set.
struct Membership {
    divisor: u64,
    modulus: u64,
    apery: Vec<u64>,
}

impl Membership {
    fn new(gens: &[u64]) -> Result<Self> {
        if gens.is_empty() {
            return Ok(Membership { divisor: 0, modulus: 0, apery: Vec::new() });
        }
        let divisor = gcd_all(gens);
        let reduced: Vec<u64> = gens.iter().map(|&g| g / divisor).collect();
        let apery = apery_set(&reduced)?;
        Ok(Membership { divisor, modulus: *reduced.iter().min().unwrap(), apery })
    }

    fn contains(&self, k: u64) -> bool {
        if k == 0 {
            return true;
        }
        if self.divisor == 0 || k % self.divisor != 0 {
            return false;
        }
        let v = k / self.divisor;
        v >= self.apery[(v % self.modulus) as usize]
    }
}

/// Non-negative coefficients `c` with `sum c_i s_i = k` over the sorted,
/// deduplicated generators, choosing the largest coefficient for the
/// largest generator first. `None` when `k` is a gap.
pub fn represent(k: u64, set: &[u64]) -> Result<Option<Vec<u64>>> {
    let gens = normalize(set)?;
    // oracle[j] answers membership for the generators strictly smaller than gens[j]
    let oracles: Vec<Membership> =
        (0..gens.len()).map(|j| Membership::new(&gens[..j])).collect::<Result<_>>()?;
    if !Membership::new(&gens)?.contains(k) {
        return Ok(None);
    }
    let mut coefficients = vec![0u64; gens.len()];
    let mut rest = k;
    for j in (0..gens.len()).rev() {
        let s = gens[j];
        let c = (0..=rest / s)
            .rev()
            .find(|&c| oracles[j].contains(rest - c * s))
            .expect("rest stays representable");
        coefficients[j] = c;
        rest -= c * s;
    }
    debug_assert_eq!(rest, 0);
    Ok(Some(coefficients))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiPrime {
    pub n: u64,
    /// `n / p^e` for every prime power `p^e` exactly dividing `n`, ascending.
    pub b: Vec<u64>,
    pub phi: i64,
}

/// Frobenius number of `{n / p_i^{e_i}}`.
pub fn phi_prime(n: u64) -> Result<PhiPrime> {
    if n < 2 {
        return Err(Error::InvalidParameter("phi_prime needs n >= 2".into()));
    }
    let mut b: Vec<u64> = factorize(n).into_iter().map(|(p, e)| n / p.pow(e)).collect();
    b.sort_unstable();
    let phi = frobenius_number(&b)?
        .frobenius
        .finite()
        .expect("the cofactors n / p^e are coprime");
    Ok(PhiPrime { n, b, phi })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub n: u64,
    pub phi_prime: i64,
    pub n_squared: u64,
    pub holds: bool,
}

/// Compares `phi_prime(n)` with `n^2`.
pub fn bound_check(n: u64) -> Result<BoundCheck> {
    let phi = phi_prime(n)?.phi;
    let n_squared = n * n;
    Ok(BoundCheck { n, phi_prime: phi, n_squared, holds: phi <= n_squared as i64 })
}

/// `(n + 1)!`, the length bound beyond which k-roundness for all smaller
/// coprime `k` forces total roundness. Far too large to loop over.
pub fn k_decision_bound(n: u64) -> BigUint {
    (1..=n + 1).map(BigUint::from).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    #[test]
    fn frobenius_examples() {
        let one = frobenius_number(&[1]).unwrap();
        assert_eq!(one.frobenius, Frobenius::Finite(-1));
        assert_eq!(one.gaps, Some(vec![]));

        let s = frobenius_number(&[5, 3]).unwrap();
        assert_eq!(s.frobenius, Frobenius::Finite(7));
        assert_eq!(s.gaps, Some(vec![1, 2, 4, 7]));
        assert_eq!(s.gaps.unwrap(), oracle::gaps_by_scan(&[3, 5], 15));

        let even = frobenius_number(&[2, 4]).unwrap();
        assert_eq!(even.frobenius, Frobenius::Infinite);
        assert_eq!(even.gcd, 2);
        assert!(even.gaps.is_none());

        assert!(frobenius_number(&[]).is_err());
        assert!(frobenius_number(&[0, 3]).is_err());
    }

    #[test]
    fn sylvester_examples() {
        assert_eq!(sylvester(3, 5).unwrap(), 7);
        assert_eq!(sylvester(2, 3).unwrap(), 1);
        assert_eq!(oracle::frobenius_by_scan(&[3, 5], 15), Some(7));
        assert_eq!(oracle::frobenius_by_scan(&[2, 3], 10), Some(1));
        assert!(sylvester(2, 4).is_err());
        assert!(sylvester(1, 4).is_err());
    }

    #[test]
    fn phi_prime_examples() {
        let p = phi_prime(12).unwrap();
        assert_eq!((p.b.clone(), p.phi), (vec![3, 4], 5));
        assert_eq!(oracle::frobenius_by_scan(&[3, 4], 144), Some(5));

        let p = phi_prime(8).unwrap();
        assert_eq!((p.b, p.phi), (vec![1], -1));

        let p = phi_prime(30).unwrap();
        assert_eq!((p.b.clone(), p.phi), (vec![6, 10, 15], 29));
        assert_eq!(oracle::frobenius_by_scan(&[6, 10, 15], 60), Some(29));
        assert!(phi_prime(1).is_err());
    }

    #[test]
    fn representations() {
        assert_eq!(represent(8, &[3, 5]).unwrap(), Some(vec![1, 1]));
        assert_eq!(represent(7, &[3, 5]).unwrap(), None);
        assert_eq!(represent(3, &[3, 7]).unwrap(), Some(vec![1, 0]));
        assert_eq!(represent(3, &[1, 2, 3]).unwrap(), Some(vec![0, 0, 1]));
        // largest generator gets the largest coefficient: 30 = 2*15
        assert_eq!(represent(30, &[6, 10, 15]).unwrap(), Some(vec![0, 0, 2]));
        assert_eq!(represent(29, &[6, 10, 15]).unwrap(), None);
        assert_eq!(represent(0, &[4, 9]).unwrap(), Some(vec![0, 0]));
    }

    #[test]
    fn bounds() {
        assert_eq!(
            bound_check(12).unwrap(),
            BoundCheck { n: 12, phi_prime: 5, n_squared: 144, holds: true }
        );
        assert_eq!(bound_check(2).unwrap().phi_prime, -1);
        assert_eq!(bound_check(30).unwrap().phi_prime, 29);
        assert_eq!(k_decision_bound(3), BigUint::from(24u32));
        assert_eq!(k_decision_bound(1), BigUint::from(2u32));
        assert_eq!(k_decision_bound(10), BigUint::from(39_916_800u32));
    }

    #[test]
    fn membership_with_common_divisor() {
        assert!(contains(12, &[4, 6]).unwrap());
        assert!(!contains(14 + 1, &[4, 6]).unwrap());
        assert!(!contains(2, &[4, 6]).unwrap());
        assert!(contains(10, &[4, 6]).unwrap());
        assert!(contains(5, &[2, 3]).unwrap());
        assert!(!contains(1, &[2, 3]).unwrap());
    }

    #[test]
    fn serialization_of_infinity() {
        let v = serde_json::to_value(frobenius_number(&[4, 6]).unwrap()).unwrap();
        assert_eq!(v["frobenius"], "infinity");
        let v = serde_json::to_value(frobenius_number(&[3, 5]).unwrap()).unwrap();
        assert_eq!(v["frobenius"], 7);
    }
}
