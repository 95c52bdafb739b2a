//! Negative side: root-count certificates of unroundness, Frobenius
//! divisibility, and the nilpotence decision by three independent methods.
//!
//! A 1-1 cycle that is k-round for `k = c_1 l_1 + ... + c_s l_s` forces
//! `R_{l_1} ... R_{l_s} <= n^{s-1}`, so a strict violation of that bound
//! excludes every such `k` at once.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize, Serializer};

use crate::arith::{divisors, factorize, gcd, gcd_all};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::semigroup::{self, Frobenius};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DivisibilityRow {
    pub l: u64,
    pub count: usize,
    pub divides: bool,
}

/// `R_l` for every divisor `l` of the order, with `l | R_l` checked.
pub fn frobenius_divisibility(group: &FiniteGroup) -> Result<Vec<DivisibilityRow>> {
    let rows: Vec<DivisibilityRow> = group
        .root_counts()
        .entries
        .into_iter()
        .map(|(l, count)| DivisibilityRow { l, count, divides: count as u64 % l == 0 })
        .collect();
    if let Some(bad) = rows.iter().find(|r| !r.divides) {
        return Err(Error::InternalInconsistency(format!(
            "R_{} = {} is not a multiple of {} in {}",
            bad.l,
            bad.count,
            bad.l,
            group.name()
        )));
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnroundnessCertificate {
    pub order: u64,
    pub ls: Vec<u64>,
    #[serde(rename = "Rs")]
    pub rs: Vec<u64>,
    pub product: u128,
    pub bound: u128,
    pub excluded_generators: Vec<u64>,
    #[serde(deserialize_with = "frobenius_from_json")]
    pub frobenius_number_of_generators: Frobenius,
}

fn frobenius_from_json<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Frobenius, D::Error> {
    match serde_json::Value::deserialize(d)? {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(Frobenius::Finite)
            .ok_or_else(|| serde::de::Error::custom("frobenius number out of range")),
        serde_json::Value::String(s) if s == "infinity" => Ok(Frobenius::Infinite),
        other => Err(serde::de::Error::custom(format!("bad frobenius number {other}"))),
    }
}

impl UnroundnessCertificate {
    fn build(order: u64, ls: Vec<u64>, rs: Vec<u64>) -> Result<Option<Self>> {
        let product = rs.iter().try_fold(1u128, |acc, &r| acc.checked_mul(r as u128));
        let bound = (order as u128).checked_pow(ls.len() as u32 - 1);
        let (Some(product), Some(bound)) = (product, bound) else {
            return Ok(None);
        };
        if product <= bound {
            return Ok(None);
        }
        let frobenius = semigroup::frobenius_number(&ls)?.frobenius;
        Ok(Some(UnroundnessCertificate {
            order,
            excluded_generators: ls.clone(),
            ls,
            rs,
            product,
            bound,
            frobenius_number_of_generators: frobenius,
        }))
    }

    /// Recomputes every count and the inequality against `group`.
    pub fn verify(&self, group: &FiniteGroup) -> Result<()> {
        let fail = |msg: String| Err(Error::InternalInconsistency(msg));
        if group.order() as u64 != self.order {
            return fail(format!("certificate is for order {}, group has {}", self.order, group.order()));
        }
        if self.ls.is_empty() || self.ls.len() != self.rs.len() {
            return fail("divisor and count lists differ in length".into());
        }
        for (&l, &r) in self.ls.iter().zip(&self.rs) {
            if l == 0 || self.order % l != 0 {
                return fail(format!("{l} does not divide {}", self.order));
            }
            let actual = group.root_count(l) as u64;
            if actual != r {
                return fail(format!("R_{l} is {actual}, certificate says {r}"));
            }
        }
        match Self::build(self.order, self.ls.clone(), self.rs.clone())? {
            Some(fresh) if &fresh == self => Ok(()),
            Some(_) => fail("derived fields do not match".into()),
            None => fail("root-count product does not exceed the bound".into()),
        }
    }

    /// Whether `k` lies in the semigroup generated by the divisors, so that
    /// the inequality alone rules out k-roundness.
    pub fn excludes(&self, k: u64) -> Result<bool> {
        semigroup::contains(k, &self.ls)
    }

    /// No cycle is k-round: either `gcd(k, n) > 1` or `k` is excluded.
    pub fn rules_out(&self, k: u64) -> Result<bool> {
        if k <= 1 {
            return Ok(false);
        }
        Ok(gcd(k, self.order) > 1 || self.excludes(k)?)
    }

    /// Smallest `k > 1` coprime to the order that the certificate excludes.
    pub fn smallest_nontrivial_excluded(&self) -> Result<Option<u64>> {
        // past the Frobenius number every k is excluded, and any n
        // consecutive integers contain one coprime to n
        let limit = match self.frobenius_number_of_generators {
            Frobenius::Finite(f) => (f + 1) as u64 + self.order,
            Frobenius::Infinite => return Ok(None),
        };
        for k in 2..=limit {
            if gcd(k, self.order) == 1 && self.excludes(k)? {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let s = idx.len();
    for i in (0..s).rev() {
        if idx[i] < n - s + i {
            idx[i] += 1;
            for j in i + 1..s {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// First subset of proper divisors `1 < l < n` (increasing size, then
/// lexicographic) with `gcd(l_1..l_s) = 1` and `prod R_{l_i} > n^{s-1}`.
///
/// Subsets with a common factor only exclude multiples of that factor,
/// which the gcd obstruction already covers, so they are skipped.
pub fn unroundness_certificate(group: &FiniteGroup, max_s: usize) -> Result<Option<UnroundnessCertificate>> {
    let n = group.order() as u64;
    let candidates: Vec<u64> = divisors(n).into_iter().filter(|&l| l > 1 && l < n).collect();
    let counts: Vec<u64> = candidates.iter().map(|&l| group.root_count(l) as u64).collect();
    for s in 1..=max_s.min(candidates.len()) {
        let mut idx: Vec<usize> = (0..s).collect();
        loop {
            let ls: Vec<u64> = idx.iter().map(|&i| candidates[i]).collect();
            if gcd_all(&ls) == 1 {
                let rs = idx.iter().map(|&i| counts[i]).collect();
                if let Some(cert) = UnroundnessCertificate::build(n, ls, rs)? {
                    return Ok(Some(cert));
                }
            }
            if !next_combination(&mut idx, candidates.len()) {
                break;
            }
        }
    }
    Ok(None)
}

/// The `(2, 3)` certificate for the dihedral group of order `2l`, `3 | l`,
/// with both counts obtained by enumeration.
pub fn dihedral_certificate(l: usize) -> Result<UnroundnessCertificate> {
    if l == 0 || l % 3 != 0 {
        return Err(Error::InvalidParameter(format!("dihedral certificate needs 3 | l, got l = {l}")));
    }
    let group = FiniteGroup::dihedral(l)?;
    let rs = vec![group.root_count(2) as u64, group.root_count(3) as u64];
    UnroundnessCertificate::build(group.order() as u64, vec![2, 3], rs)?.ok_or_else(|| {
        Error::InternalInconsistency(format!("R_2 R_3 does not exceed |D_{l}|"))
    })
}

/// One prime `p` with `p^e` exactly dividing the order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeCheck {
    pub p: u64,
    pub e: u32,
    /// `n / p^e`
    pub cofactor: u64,
    /// `M = R_{n/p^e}`
    pub m: u64,
    pub tight: bool,
    /// Checked only when `tight`: `{x : x^{n/p^e} = 1}` is a normal subgroup.
    pub root_set_normal: Option<bool>,
    /// Size of `{x : x^{p^e} = 1}`.
    pub p_part_size: u64,
    /// `p_part_size == p^e` and the set is closed under products.
    pub sylow_unique: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MethodAgreement {
    pub central_series: bool,
    pub root_count_tight: bool,
    pub sylow_unique: bool,
    pub primes: Vec<PrimeCheck>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NilpotenceVerdict {
    pub nilpotent: bool,
    pub method_agreement: MethodAgreement,
    /// The unique Sylow subgroups, one per prime, when nilpotent.
    pub sylow_subgroups: Vec<Subgroup>,
}

fn root_set(group: &FiniteGroup, l: u64) -> Vec<usize> {
    (0..group.order()).filter(|&x| group.pow(x, l) == 0).collect()
}

fn is_closed(group: &FiniteGroup, set: &[usize]) -> bool {
    let mut member = vec![false; group.order()];
    for &x in set {
        member[x] = true;
    }
    set.iter().all(|&a| set.iter().all(|&b| member[group.mul(a, b)]))
}

/// Decides nilpotence by the upper central series, by tightness of the
/// root counts `M_p = R_{n/p^e}`, and by uniqueness of every Sylow
/// subgroup, and insists that all three agree.
pub fn nilpotence_verdict(group: &FiniteGroup) -> Result<NilpotenceVerdict> {
    let n = group.order() as u64;
    let central_series = group.upper_central_series().nilpotent;
    let mut primes = Vec::new();
    let mut sylow_subgroups = Vec::new();
    for (p, e) in factorize(n) {
        let pe = p.pow(e);
        let cofactor = n / pe;
        let hall = root_set(group, cofactor);
        let m = hall.len() as u64;
        let tight = m == cofactor;
        let root_set_normal = if tight {
            let normal = group
                .subgroup_from_members(hall)
                .map(|h| h.is_normal_in(group))
                .unwrap_or(false);
            if !normal {
                return Err(Error::InternalInconsistency(format!(
                    "R_{cofactor} = {cofactor} but the root set is not a normal subgroup"
                )));
            }
            Some(true)
        } else {
            None
        };
        let p_part = root_set(group, pe);
        let p_part_size = p_part.len() as u64;
        let sylow_unique = p_part_size == pe && is_closed(group, &p_part);
        if sylow_unique {
            sylow_subgroups.push(group.subgroup_from_members(p_part)?);
        }
        primes.push(PrimeCheck { p, e, cofactor, m, tight, root_set_normal, p_part_size, sylow_unique });
    }
    let root_count_tight = primes.iter().all(|c| c.tight);
    let sylow_unique = primes.iter().all(|c| c.sylow_unique);
    if central_series != root_count_tight || central_series != sylow_unique {
        return Err(Error::InternalInconsistency(format!(
            "nilpotence methods disagree on {}: central series {central_series}, \
             root counts {root_count_tight}, Sylow {sylow_unique}",
            group.name()
        )));
    }
    if !central_series {
        sylow_subgroups.clear();
    }
    Ok(NilpotenceVerdict {
        nilpotent: central_series,
        method_agreement: MethodAgreement { central_series, root_count_tight, sylow_unique, primes },
        sylow_subgroups,
    })
}

fn factorial(l: u64) -> BigUint {
    (1..=l).fold(BigUint::from(1u32), |acc, i| acc * i)
}

fn as_decimal<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecurrenceRow {
    pub l: u64,
    #[serde(serialize_with = "as_decimal")]
    pub r2: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub r3: BigUint,
    /// `R_{2,l}^2 > l!`, for `l >= 2`.
    pub r2_exceeds_sqrt_factorial: Option<bool>,
    /// `R_{3,l}^3 > (l!)^2`, for `l >= 3`.
    pub r3_exceeds_two_thirds_power: Option<bool>,
    /// `R_{2,l} R_{3,l} > l!`, for `l >= 3`.
    pub product_exceeds_factorial: Option<bool>,
}

/// Solutions of `x^2 = 1` and `x^3 = 1` in `S_l`, for `l = 0..=l_max`:
/// `R_{2,l} = R_{2,l-1} + (l-1) R_{2,l-2}` and
/// `R_{3,l} = R_{3,l-1} + (l-1)(l-2) R_{3,l-3}`.
pub fn symmetric_root_recurrences(l_max: u64) -> Result<Vec<RecurrenceRow>> {
    if l_max < 1 {
        return Err(Error::InvalidParameter("l_max must be at least 1".into()));
    }
    let mut r2: Vec<BigUint> = Vec::new();
    let mut r3: Vec<BigUint> = Vec::new();
    let mut rows = Vec::new();
    for l in 0..=l_max {
        let i = l as usize;
        let next2 = if l <= 1 { BigUint::from(1u32) } else { &r2[i - 1] + &r2[i - 2] * (l - 1) };
        let next3 = if l <= 2 {
            BigUint::from(1u32)
        } else {
            &r3[i - 1] + &r3[i - 3] * ((l - 1) * (l - 2))
        };
        let f = factorial(l);
        rows.push(RecurrenceRow {
            l,
            r2_exceeds_sqrt_factorial: (l >= 2).then(|| &next2 * &next2 > f),
            r3_exceeds_two_thirds_power: (l >= 3).then(|| &next3 * &next3 * &next3 > &f * &f),
            product_exceeds_factorial: (l >= 3).then(|| &next2 * &next3 > f),
            r2: next2.clone(),
            r3: next3.clone(),
        });
        r2.push(next2);
        r3.push(next3);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::root_count_naive;

    #[test]
    fn divisibility_examples() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        let rows = frobenius_divisibility(&z6).unwrap();
        let pairs: Vec<(u64, usize)> = rows.iter().map(|r| (r.l, r.count)).collect();
        assert_eq!(pairs, [(1, 1), (2, 2), (3, 3), (6, 6)]);

        let s3 = FiniteGroup::symmetric(3).unwrap();
        let rows = frobenius_divisibility(&s3).unwrap();
        assert_eq!(rows[1].count, 4);
        assert_eq!(rows[2].count, 3);

        let d6 = FiniteGroup::dihedral(6).unwrap();
        let rows = frobenius_divisibility(&d6).unwrap();
        assert_eq!(rows.iter().find(|r| r.l == 2).unwrap().count, 8);
        assert_eq!(root_count_naive(&d6, 2), 8);
    }

    #[test]
    fn certificate_examples() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let c = unroundness_certificate(&s3, 3).unwrap().unwrap();
        assert_eq!((c.ls.as_slice(), c.rs.as_slice(), c.product, c.bound), (&[2, 3][..], &[4, 3][..], 12, 6));
        assert_eq!(c.frobenius_number_of_generators, Frobenius::Finite(1));
        for k in 2..50 {
            assert!(c.rules_out(k).unwrap());
        }
        assert!(!c.rules_out(1).unwrap());
        assert_eq!(c.smallest_nontrivial_excluded().unwrap(), Some(5));
        c.verify(&s3).unwrap();

        let a4 = FiniteGroup::alternating(4).unwrap();
        let c = unroundness_certificate(&a4, 3).unwrap().unwrap();
        assert_eq!((c.ls.as_slice(), c.rs.as_slice(), c.product, c.bound), (&[2, 3][..], &[4, 9][..], 36, 12));

        let z9 = FiniteGroup::cyclic(9).unwrap();
        assert_eq!(unroundness_certificate(&z9, 3).unwrap(), None);
        let d4 = FiniteGroup::dihedral(4).unwrap();
        assert_eq!(unroundness_certificate(&d4, 4).unwrap(), None);
    }

    #[test]
    fn certificate_json_shape() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let c = unroundness_certificate(&s3, 3).unwrap().unwrap();
        let v = serde_json::to_value(&c).unwrap();
        let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        keys.sort_unstable();
        assert_eq!(
            keys,
            ["Rs", "bound", "excluded_generators", "frobenius_number_of_generators", "ls", "order", "product"]
        );
        let back: UnroundnessCertificate = serde_json::from_value(v).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn tampered_certificate_fails_verification() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let mut c = unroundness_certificate(&s3, 3).unwrap().unwrap();
        c.rs[0] = 5;
        c.product = 15;
        assert!(c.verify(&s3).is_err());
        let z6 = FiniteGroup::cyclic(6).unwrap();
        let c = unroundness_certificate(&s3, 3).unwrap().unwrap();
        assert!(c.verify(&z6).is_err());
    }

    #[test]
    fn dihedral_certificates() {
        let c = dihedral_certificate(3).unwrap();
        assert_eq!((c.rs.as_slice(), c.product, c.bound), (&[4, 3][..], 12, 6));
        let c = dihedral_certificate(6).unwrap();
        assert_eq!(c.rs, [8, 3]);
        assert!(c.product > c.bound);
        assert!(matches!(dihedral_certificate(4), Err(Error::InvalidParameter(_))));
        assert!(matches!(dihedral_certificate(0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn nilpotence_examples() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        let v = nilpotence_verdict(&z6).unwrap();
        assert!(v.nilpotent);
        let ms: Vec<(u64, u64)> = v.method_agreement.primes.iter().map(|c| (c.cofactor, c.m)).collect();
        assert_eq!(ms, [(3, 3), (2, 2)]);
        assert_eq!(v.sylow_subgroups.len(), 2);

        let s3 = FiniteGroup::symmetric(3).unwrap();
        let v = nilpotence_verdict(&s3).unwrap();
        assert!(!v.nilpotent);
        let p = &v.method_agreement.primes;
        assert!(p[0].tight && p[0].m == 3);
        assert!(!p[1].tight && p[1].m == 4);
        assert!(v.sylow_subgroups.is_empty());

        let d4 = FiniteGroup::dihedral(4).unwrap();
        let v = nilpotence_verdict(&d4).unwrap();
        assert!(v.nilpotent);
        assert_eq!(v.method_agreement.primes[0].m, 1);
        assert_eq!(v.sylow_subgroups[0].len(), 8);
    }

    #[test]
    fn recurrences_match_enumeration() {
        let rows = symmetric_root_recurrences(6).unwrap();
        for l in 1..=6usize {
            let s = FiniteGroup::symmetric(l).unwrap();
            assert_eq!(rows[l].r2, BigUint::from(root_count_naive(&s, 2)), "R_2(S_{l})");
            assert_eq!(rows[l].r3, BigUint::from(root_count_naive(&s, 3)), "R_3(S_{l})");
        }
        assert_eq!(rows[3].r2, BigUint::from(4u32));
        assert_eq!(rows[4].r2, BigUint::from(10u32));
        assert_eq!(rows[3].product_exceeds_factorial, Some(true));
        assert_eq!(rows[3].r3_exceeds_two_thirds_power, Some(false));
        assert!(symmetric_root_recurrences(0).is_err());
    }

    #[test]
    fn recurrences_go_past_native_range() {
        let rows = symmetric_root_recurrences(60).unwrap();
        assert!(rows[60].r2.bits() > 64);
        assert!(rows[3..].iter().all(|r| r.product_exceeds_factorial == Some(true)));
        let json = serde_json::to_value(&rows[4]).unwrap();
        assert_eq!(json["r2"], "10");
    }
}
