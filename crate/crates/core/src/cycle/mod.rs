//! Cycles over a finite group and their rotate-products.

mod operators;
mod roundness;

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;

pub use operators::{check_dr_balanced, BalanceReport, DVariant};
pub use roundness::{
    check_k_round, check_strongly_k_round, CheckConfig, Mode, RoundnessReport, SearchPolicy,
    Verdict, Witness,
};

/// A finite sequence of element indices over a group, read modulo its length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    group: Arc<FiniteGroup>,
    entries: Vec<usize>,
}

/// Shifts `m_1..m_k` with optional exponents `+1`/`-1` (absent means all `+1`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftTuple {
    pub shifts: Vec<i64>,
    pub signs: Option<Vec<i8>>,
}

impl ShiftTuple {
    pub fn unsigned(shifts: Vec<i64>) -> Self {
        ShiftTuple { shifts, signs: None }
    }

    pub fn signed(shifts: Vec<i64>, signs: Vec<i8>) -> Result<Self> {
        if signs.len() != shifts.len() {
            return Err(Error::InvalidParameter(format!(
                "{} signs for {} shifts",
                signs.len(),
                shifts.len()
            )));
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidParameter("signs must be +1 or -1".into()));
        }
        Ok(ShiftTuple { shifts, signs: Some(signs) })
    }

    pub fn len(&self) -> usize {
        self.shifts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shifts.is_empty()
    }

    /// Sum of the exponents.
    pub fn weight(&self) -> i64 {
        match &self.signs {
            Some(s) => s.iter().map(|&e| e as i64).sum(),
            None => self.shifts.len() as i64,
        }
    }
}

impl Cycle {
    pub fn new(group: Arc<FiniteGroup>, entries: Vec<usize>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter("a cycle needs at least one entry".into()));
        }
        if let Some(&bad) = entries.iter().find(|&&e| e >= group.order()) {
            return Err(Error::InvalidParameter(format!(
                "entry {bad} is not an element of {} (order {})",
                group.name(),
                group.order()
            )));
        }
        Ok(Cycle { group, entries })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<usize> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Entry at `i` read cyclically; negative indices count from the end.
    pub fn at(&self, i: i64) -> usize {
        self.entries[i.rem_euclid(self.len() as i64) as usize]
    }

    /// Same group, new entries; entries are trusted to be in range.
    pub(crate) fn with_entries(&self, entries: Vec<usize>) -> Cycle {
        debug_assert_eq!(entries.len(), self.len());
        Cycle { group: Arc::clone(&self.group), entries }
    }

    /// The cycle `(g_{i+c})_i`.
    pub fn rotated(&self, c: i64) -> Cycle {
        let entries = (0..self.len() as i64).map(|i| self.at(i + c)).collect();
        self.with_entries(entries)
    }

    /// Length `n` and every element exactly once.
    pub fn is_one_to_one(&self) -> bool {
        let n = self.group.order();
        if self.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        self.entries.iter().all(|&e| !std::mem::replace(&mut seen[e], true))
    }

    /// `n | L` and every element occurs exactly `L / n` times.
    pub fn is_balanced(&self) -> bool {
        let n = self.group.order();
        if self.len() % n != 0 {
            return false;
        }
        let expected = self.len() / n;
        let mut counts = vec![0usize; n];
        for &e in &self.entries {
            counts[e] += 1;
        }
        counts.iter().all(|&c| c == expected)
    }

    /// Entry `i` is the ordered product `g_{i+m_1} ... g_{i+m_k}`.
    pub fn rotate_product(&self, t: &ShiftTuple) -> Result<Cycle> {
        if t.signs.is_some() {
            return Err(Error::InvalidParameter(
                "rotate_product takes an unsigned tuple; use signed_rotate_product".into(),
            ));
        }
        self.product_cycle(t)
    }

    /// Entry `i` is the ordered product of `g_{i+m_j}^{e_j}`.
    pub fn signed_rotate_product(&self, t: &ShiftTuple) -> Result<Cycle> {
        if t.signs.is_none() {
            return Err(Error::InvalidParameter("signed_rotate_product needs signs".into()));
        }
        self.product_cycle(t)
    }

    fn product_cycle(&self, t: &ShiftTuple) -> Result<Cycle> {
        if t.is_empty() {
            return Err(Error::InvalidParameter("shift tuple must be nonempty".into()));
        }
        let g = &*self.group;
        let entries = (0..self.len() as i64)
            .map(|i| {
                t.shifts.iter().enumerate().fold(g.identity(), |acc, (j, &m)| {
                    let x = self.at(i + m);
                    let minus = t.signs.as_ref().is_some_and(|s| s[j] < 0);
                    g.mul(acc, if minus { g.inv(x) } else { x })
                })
            })
            .collect();
        Ok(self.with_entries(entries))
    }

    /// `S(g) = (g_i g_{i+1})_i`.
    pub fn sum_operator(&self) -> Cycle {
        self.rotate_product(&ShiftTuple::unsigned(vec![0, 1])).expect("nonempty tuple")
    }

    /// Occurrence counts of every window `(g_i, ..., g_{i+width-1})`, indexed
    /// by the window read as a base-`n` number.
    pub fn block_census(&self, width: usize, budget: u64) -> Result<Vec<u64>> {
        let n = self.group.order() as u64;
        let size = n
            .checked_pow(width as u32)
            .filter(|&s| s <= budget)
            .ok_or_else(|| Error::BudgetExceeded(format!("{n}^{width} block classes")))?;
        let mut counts = vec![0u64; size as usize];
        for i in 0..self.len() as i64 {
            let code = (0..width as i64).fold(0u64, |acc, d| acc * n + self.at(i + d) as u64);
            counts[code as usize] += 1;
        }
        Ok(counts)
    }

    pub fn to_file(&self, group: GroupRef) -> CycleFile {
        CycleFile { group, entries: self.entries.clone() }
    }
}

/// Either a path to a group JSON file or an inline group object.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Path(String),
    Inline(FiniteGroup),
}

/// On-disk layout of a cycle: `{ "group": path | group, "entries": [..] }`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CycleFile {
    pub group: GroupRef,
    pub entries: Vec<usize>,
}

impl CycleFile {
    /// Resolves the group (relative paths against `base_dir`) and validates.
    pub fn load(self, base_dir: Option<&Path>) -> Result<Cycle> {
        let group = match self.group {
            GroupRef::Inline(g) => g,
            GroupRef::Path(p) => {
                let path = match base_dir {
                    Some(dir) if Path::new(&p).is_relative() => dir.join(&p),
                    _ => p.into(),
                };
                FiniteGroup::from_json(&std::fs::read_to_string(path)?)?
            }
        };
        Cycle::new(Arc::new(group), self.entries)
    }
}
