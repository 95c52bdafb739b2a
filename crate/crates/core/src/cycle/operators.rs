//! Difference operators and iterated balance checks.

use serde::{Deserialize, Serialize};

use super::Cycle;
use crate::error::{Error, Result};

/// The four difference operators. The first word names the inverted
/// neighbour (`right` = `g_{i+1}`, `left` = `g_i`); the second says whether
/// `g_{i+1}` stands after or before `g_i` in the product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DVariant {
    /// `g_i g_{i+1}^-1`
    RightInverseAfter,
    /// `g_{i+1}^-1 g_i`
    RightInverseBefore,
    /// `g_i^-1 g_{i+1}`
    LeftInverseAfter,
    /// `g_{i+1} g_i^-1`
    LeftInverseBefore,
}

impl DVariant {
    pub const ALL: [DVariant; 4] = [
        DVariant::RightInverseAfter,
        DVariant::RightInverseBefore,
        DVariant::LeftInverseAfter,
        DVariant::LeftInverseBefore,
    ];
}

impl Default for DVariant {
    fn default() -> Self {
        DVariant::RightInverseAfter
    }
}

impl Cycle {
    pub fn difference_operator(&self, variant: DVariant) -> Cycle {
        let g = self.group();
        let len = self.len();
        let e = self.entries();
        let entries = (0..len)
            .map(|i| {
                let (cur, next) = (e[i], e[(i + 1) % len]);
                match variant {
                    DVariant::RightInverseAfter => g.mul(cur, g.inv(next)),
                    DVariant::RightInverseBefore => g.mul(g.inv(next), cur),
                    DVariant::LeftInverseAfter => g.mul(g.inv(cur), next),
                    DVariant::LeftInverseBefore => g.mul(next, g.inv(cur)),
                }
            })
            .collect();
        self.with_entries(entries)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BalanceReport {
    pub balanced: bool,
    /// Smallest depth at which some variant path produced an unbalanced cycle.
    pub first_failing_depth: Option<usize>,
    pub failing_path: Option<Vec<DVariant>>,
    pub paths_checked: u64,
}

/// Checks that every cycle reachable by at most `r` applications of the
/// given variants (in any order) is balanced.
pub fn check_dr_balanced(cycle: &Cycle, r: usize, variants: &[DVariant], budget: u64) -> Result<BalanceReport> {
    let n = cycle.group().order();
    if cycle.len() % n != 0 {
        return Err(Error::InvalidParameter(format!(
            "cycle length {} is not a multiple of the group order {n}",
            cycle.len()
        )));
    }
    if variants.is_empty() {
        return Err(Error::InvalidParameter("at least one difference variant is required".into()));
    }
    let cost = (variants.len() as u64)
        .checked_pow(r as u32)
        .and_then(|p| p.checked_mul(cycle.len() as u64));
    if cost.is_none_or(|c| c > budget) {
        return Err(Error::BudgetExceeded(format!(
            "{}^{r} paths of length {} exceed the budget {budget}",
            variants.len(),
            cycle.len()
        )));
    }

    struct Walk<'v> {
        variants: &'v [DVariant],
        max_depth: usize,
        path: Vec<DVariant>,
        best: Option<(usize, Vec<DVariant>)>,
        paths: u64,
    }

    impl Walk<'_> {
        fn visit(&mut self, c: &Cycle, depth: usize) {
            if self.best.as_ref().is_some_and(|(d, _)| *d <= depth) {
                return;
            }
            if !c.is_balanced() {
                self.best = Some((depth, self.path.clone()));
                return;
            }
            if depth == self.max_depth {
                self.paths += 1;
                return;
            }
            for &v in self.variants {
                self.path.push(v);
                self.visit(&c.difference_operator(v), depth + 1);
                self.path.pop();
            }
        }
    }

    let mut walk = Walk { variants, max_depth: r, path: Vec::new(), best: None, paths: 0 };
    walk.visit(cycle, 0);
    Ok(match walk.best {
        Some((depth, path)) => BalanceReport {
            balanced: false,
            first_failing_depth: Some(depth),
            failing_path: Some(path),
            paths_checked: walk.paths,
        },
        None => BalanceReport {
            balanced: true,
            first_failing_depth: None,
            failing_path: None,
            paths_checked: walk.paths,
        },
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::FiniteGroup;

    fn over(group: FiniteGroup, entries: Vec<usize>) -> Cycle {
        Cycle::new(Arc::new(group), entries).unwrap()
    }

    #[test]
    fn difference_of_permutation_avoids_identity() {
        let d4 = FiniteGroup::dihedral(4).unwrap();
        let c = over(d4, vec![3, 0, 5, 1, 7, 2, 4, 6]);
        for v in DVariant::ALL {
            assert!(c.difference_operator(v).entries().iter().all(|&e| e != 0));
        }
    }

    #[test]
    fn constant_cycle_goes_to_identity() {
        let c = over(FiniteGroup::symmetric(3).unwrap(), vec![4; 5]);
        for v in DVariant::ALL {
            assert_eq!(c.difference_operator(v).entries(), [0; 5]);
        }
    }

    #[test]
    fn interleaved_z3_example() {
        let c = over(FiniteGroup::cyclic(3).unwrap(), vec![0, 0, 1, 2, 2, 1]);
        let d = c.difference_operator(DVariant::default());
        assert_eq!(d.entries(), [0, 2, 2, 0, 1, 1]);
        assert!(d.is_balanced());
        let report = check_dr_balanced(&c, 3, &DVariant::ALL, 1_000_000).unwrap();
        assert!(report.balanced);
        assert_eq!(report.paths_checked, 64);
    }

    #[test]
    fn variants_differ_in_non_abelian_groups() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let c = over(s3, vec![0, 1, 2, 3, 4, 5]);
        let images: Vec<Vec<usize>> =
            DVariant::ALL.iter().map(|&v| c.difference_operator(v).into_entries()).collect();
        assert_ne!(images[0], images[1]);
        assert_ne!(images[2], images[3]);
    }

    #[test]
    fn balance_reports() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let db = over(z2.clone(), vec![0, 0, 1, 1]);
        assert_eq!(db.difference_operator(DVariant::default()).entries(), [0, 1, 0, 1]);
        assert!(check_dr_balanced(&db, 1, &[DVariant::default()], 100).unwrap().balanced);

        let skew = over(z2.clone(), vec![0, 0, 0, 1]);
        let r = check_dr_balanced(&skew, 0, &[DVariant::default()], 100).unwrap();
        assert!(!r.balanced);
        assert_eq!(r.first_failing_depth, Some(0));

        // (0,1,0,1) -> (1,1,1,1): fails at depth 1
        let alt = over(z2.clone(), vec![0, 1, 0, 1]);
        let r = check_dr_balanced(&alt, 3, &DVariant::ALL, 10_000).unwrap();
        assert_eq!(r.first_failing_depth, Some(1));

        assert!(matches!(
            check_dr_balanced(&alt, 20, &DVariant::ALL, 10_000_000),
            Err(Error::BudgetExceeded(_))
        ));
        let odd = over(z2, vec![0, 1, 0]);
        assert!(check_dr_balanced(&odd, 1, &DVariant::ALL, 100).is_err());
    }

    #[test]
    fn variant_names() {
        let names: Vec<String> = DVariant::ALL
            .iter()
            .map(|v| serde_json::to_value(v).unwrap().as_str().unwrap().to_string())
            .collect();
        assert_eq!(
            names,
            ["right-inverse-after", "right-inverse-before", "left-inverse-after", "left-inverse-before"]
        );
    }
}
