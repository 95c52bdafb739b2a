use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::FiniteGroup;
use crate::arith::divisors;
use crate::error::{Error, Result};

/// A subgroup, stored as the sorted member indices of its parent group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgroup {
    parent_order: usize,
    members: Vec<usize>,
}

impl Subgroup {
    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    /// Full check of `g H g^-1 = H` for every `g`.
    pub fn is_normal_in(&self, group: &FiniteGroup) -> bool {
        (0..group.order()).all(|g| {
            let gi = group.inv(g);
            self.members.iter().all(|&h| self.contains(group.mul(group.mul(g, h), gi)))
        })
    }
}

#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FiniteGroup,
    /// Element index to coset index.
    pub coset_of: Vec<usize>,
    /// Coset index to its smallest element index.
    pub reps: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CentralSeries {
    pub terms: Vec<Subgroup>,
    pub nilpotent: bool,
    pub class: Option<usize>,
}

/// `R_l = |{x : x^l = 1}|` for every divisor `l` of the group order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootCountTable {
    pub entries: BTreeMap<u64, usize>,
}

impl RootCountTable {
    pub fn get(&self, l: u64) -> Option<usize> {
        self.entries.get(&l).copied()
    }
}

impl FiniteGroup {
    /// Validates that `members` form a subgroup: contains the identity and
    /// is closed under products and inverses.
    pub fn subgroup_from_members(&self, mut members: Vec<usize>) -> Result<Subgroup> {
        members.sort_unstable();
        members.dedup();
        if members.iter().any(|&m| m >= self.order()) {
            return Err(Error::InvalidParameter("subgroup member out of range".into()));
        }
        let sub = Subgroup { parent_order: self.order(), members };
        if !sub.contains(0) {
            return Err(Error::InvalidParameter("subgroup must contain the identity".into()));
        }
        for &a in sub.members() {
            if !sub.contains(self.inv(a)) {
                return Err(Error::InvalidParameter(format!("not closed under inverse at {a}")));
            }
            for &b in sub.members() {
                if !sub.contains(self.mul(a, b)) {
                    return Err(Error::InvalidParameter(format!(
                        "not closed under products at ({a}, {b})"
                    )));
                }
            }
        }
        Ok(sub)
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { parent_order: self.order(), members: vec![0] }
    }

    pub fn whole_group(&self) -> Subgroup {
        Subgroup { parent_order: self.order(), members: (0..self.order()).collect() }
    }

    pub fn center(&self) -> Subgroup {
        let members = (0..self.order())
            .filter(|&z| (0..self.order()).all(|g| self.commute(z, g)))
            .collect();
        Subgroup { parent_order: self.order(), members }
    }

    /// Smallest subgroup containing `seeds`, by closure under right
    /// multiplication by the seeds.
    pub fn subgroup_generated(&self, seeds: &[usize]) -> Result<Subgroup> {
        if let Some(&bad) = seeds.iter().find(|&&s| s >= self.order()) {
            return Err(Error::InvalidParameter(format!("seed {bad} out of range")));
        }
        let mut inside = vec![false; self.order()];
        inside[0] = true;
        let mut queue = vec![0];
        while let Some(x) = queue.pop() {
            for &s in seeds {
                let y = self.mul(x, s);
                if !inside[y] {
                    inside[y] = true;
                    queue.push(y);
                }
            }
        }
        let members = (0..self.order()).filter(|&g| inside[g]).collect();
        Ok(Subgroup { parent_order: self.order(), members })
    }

    /// `G / H` on cosets ordered by smallest element; coset 0 is `H`.
    pub fn quotient(&self, h: &Subgroup) -> Result<Quotient> {
        if h.parent_order() != self.order() {
            return Err(Error::InvalidParameter("subgroup belongs to a different group".into()));
        }
        if !h.is_normal_in(self) {
            return Err(Error::NotNormal);
        }
        let mut coset_of = vec![usize::MAX; self.order()];
        let mut reps = Vec::new();
        for g in 0..self.order() {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(g);
            for &x in h.members() {
                coset_of[self.mul(g, x)] = c;
            }
        }
        let labels = reps.iter().map(|&r| format!("[{}]", self.label(r))).collect();
        let name = format!("{} / H{}", self.name(), h.len());
        let group =
            FiniteGroup::from_fn(name, labels, |a, b| coset_of[self.mul(reps[a], reps[b])])?;
        Ok(Quotient { group, coset_of, reps })
    }

    /// `Z_0 = 1`, `Z_{i+1}` = preimage of the center of `G / Z_i`, until stable.
    pub fn upper_central_series(&self) -> CentralSeries {
        let mut terms = vec![self.trivial_subgroup()];
        loop {
            let last = terms.last().unwrap();
            if last.len() == self.order() {
                break;
            }
            let q = self.quotient(last).expect("terms of the upper central series are normal");
            let zq = q.group.center();
            let members: Vec<usize> =
                (0..self.order()).filter(|&g| zq.contains(q.coset_of[g])).collect();
            if members.len() == last.len() {
                break;
            }
            terms.push(Subgroup { parent_order: self.order(), members });
        }
        let nilpotent = terms.last().unwrap().len() == self.order();
        let class = nilpotent.then(|| terms.len() - 1);
        CentralSeries { terms, nilpotent, class }
    }

    /// Number of solutions of `x^l = 1`.
    pub fn root_count(&self, l: u64) -> usize {
        (0..self.order()).filter(|&x| self.pow(x, l) == 0).count()
    }

    pub fn root_counts(&self) -> RootCountTable {
        let entries = divisors(self.order() as u64)
            .into_iter()
            .map(|l| (l, self.root_count(l)))
            .collect();
        RootCountTable { entries }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centers() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        assert_eq!(z6.center(), z6.whole_group());
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert!(s3.center().is_trivial());
        let d4 = FiniteGroup::dihedral(4).unwrap();
        // {1, r^2}
        assert_eq!(d4.center().members(), [0, 2]);
    }

    #[test]
    fn generated_subgroups() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        assert!(z6.subgroup_generated(&[]).unwrap().is_trivial());
        assert_eq!(z6.subgroup_generated(&[2]).unwrap().members(), [0, 2, 4]);
        let s3 = FiniteGroup::symmetric(3).unwrap();
        // "132" is a transposition, "231" a 3-cycle
        assert_eq!(s3.subgroup_generated(&[1, 3]).unwrap(), s3.whole_group());
        assert!(z6.subgroup_generated(&[9]).is_err());
    }

    #[test]
    fn subgroup_validation() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        assert!(z6.subgroup_from_members(vec![0, 3]).is_ok());
        assert!(z6.subgroup_from_members(vec![0, 2]).is_err());
        assert!(z6.subgroup_from_members(vec![3]).is_err());
    }

    #[test]
    fn quotients() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        let whole = z6.quotient(&z6.whole_group()).unwrap();
        assert_eq!(whole.group.order(), 1);

        let q = z6.quotient(&z6.subgroup_from_members(vec![0, 3]).unwrap()).unwrap();
        assert_eq!(q.group.order(), 3);
        assert_eq!(q.reps, [0, 1, 2]);
        assert_eq!(q.group.cyclic_generator(), Some(1));

        let d6 = FiniteGroup::dihedral(6).unwrap();
        let rotations = d6.subgroup_generated(&[1]).unwrap();
        let q = d6.quotient(&rotations).unwrap();
        assert_eq!(q.group.order(), 2);
        assert_eq!(q.reps, [0, 6]);

        let s3 = FiniteGroup::symmetric(3).unwrap();
        let transposition = s3.subgroup_generated(&[1]).unwrap();
        assert!(matches!(s3.quotient(&transposition), Err(Error::NotNormal)));
    }

    #[test]
    fn coset_map_is_a_homomorphism() {
        let d6 = FiniteGroup::dihedral(6).unwrap();
        let h = d6.center();
        let q = d6.quotient(&h).unwrap();
        for a in 0..12 {
            for b in 0..12 {
                assert_eq!(q.coset_of[d6.mul(a, b)], q.group.mul(q.coset_of[a], q.coset_of[b]));
            }
        }
    }

    #[test]
    fn central_series() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        let series = z6.upper_central_series();
        assert_eq!(series.terms.len(), 2);
        assert_eq!(series.class, Some(1));

        let s3 = FiniteGroup::symmetric(3).unwrap();
        let series = s3.upper_central_series();
        assert!(!series.nilpotent);
        assert_eq!(series.terms, vec![s3.trivial_subgroup()]);
        assert_eq!(series.class, None);

        let d4 = FiniteGroup::dihedral(4).unwrap();
        let series = d4.upper_central_series();
        assert!(series.nilpotent);
        assert_eq!(series.class, Some(2));
        assert_eq!(series.terms[1].members(), [0, 2]);

        let trivial = FiniteGroup::cyclic(1).unwrap().upper_central_series();
        assert!(trivial.nilpotent);
        assert_eq!(trivial.class, Some(0));
    }

    #[test]
    fn root_count_examples() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let r = s3.root_counts();
        assert_eq!((r.get(1), r.get(2), r.get(3), r.get(6)), (Some(1), Some(4), Some(3), Some(6)));

        let d3 = FiniteGroup::dihedral(3).unwrap();
        assert_eq!(d3.root_count(2), 4);

        let s4 = FiniteGroup::symmetric(4).unwrap();
        assert_eq!(s4.root_count(2), 10);

        // six reflections, r^3 and the identity
        let d6 = FiniteGroup::dihedral(6).unwrap();
        assert_eq!(d6.root_count(2), 8);
        assert_eq!(d6.root_count(3), 3);
        assert!(d6.root_count(2) * d6.root_count(3) > 12);
    }
}
