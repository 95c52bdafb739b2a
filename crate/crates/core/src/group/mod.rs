//! Finite groups as explicit multiplication tables.
//!
//! Every group is stored as a row-major Cayley table over element indices
//! `0..n`, with the identity at index 0. Tables are validated on
//! construction and again whenever they are loaded from JSON.

mod build;
mod structure;

use rand::Rng;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use structure::{CentralSeries, Quotient, RootCountTable, Subgroup};

/// Largest supported group order (7!), so that indices fit in 16 bits.
pub const MAX_ORDER: usize = 5040;

/// Orders up to this bound get the full O(n^3) associativity check.
pub const FULL_ASSOCIATIVITY_LIMIT: usize = 256;

/// Random triples tested for associativity above [`FULL_ASSOCIATIVITY_LIMIT`].
pub const SAMPLED_ASSOCIATIVITY_TRIPLES: usize = 1_000_000;

const ASSOCIATIVITY_SEED: u64 = 0x5eed_a550c;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GroupFile", into = "GroupFile")]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<u16>,
    inverses: Vec<u16>,
    labels: Vec<String>,
}

/// On-disk layout of a group: `{ "name", "order", "table", "labels" }`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupFile {
    pub name: String,
    pub order: usize,
    pub table: Vec<usize>,
    /// Defaults to `"0"`, `"1"`, ... when absent.
    #[serde(default)]
    pub labels: Vec<String>,
}

impl FiniteGroup {
    /// Builds a group from a flat row-major table, validating every invariant.
    pub fn from_table(name: impl Into<String>, table: Vec<usize>, labels: Vec<String>) -> Result<Self> {
        let order = labels.len();
        if order == 0 {
            return Err(Error::InvalidGroup("group must have at least one element".into()));
        }
        if order > MAX_ORDER {
            return Err(Error::BudgetExceeded(format!(
                "order {order} exceeds the table cap {MAX_ORDER}"
            )));
        }
        if table.len() != order * order {
            return Err(Error::InvalidGroup(format!(
                "table has {} entries, expected {}",
                table.len(),
                order * order
            )));
        }
        if let Some(bad) = table.iter().find(|&&v| v >= order) {
            return Err(Error::InvalidGroup(format!("table entry {bad} out of range")));
        }
        let table = table.into_iter().map(|v| v as u16).collect();
        let mut group = FiniteGroup {
            name: name.into(),
            order,
            table,
            inverses: Vec::new(),
            labels,
        };
        group.validate()?;
        group.inverses = (0..order)
            .map(|a| {
                (0..order)
                    .find(|&b| group.mul(a, b) == 0)
                    .expect("latin square guarantees an inverse") as u16
            })
            .collect();
        Ok(group)
    }

    pub(crate) fn from_fn(
        name: impl Into<String>,
        labels: Vec<String>,
        mul: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let n = labels.len();
        if n > MAX_ORDER {
            return Err(Error::BudgetExceeded(format!(
                "order {n} exceeds the table cap {MAX_ORDER}"
            )));
        }
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                table.push(mul(a, b));
            }
        }
        Self::from_table(name, table, labels)
    }

    /// Re-checks the table invariants: identity at index 0, Latin square,
    /// associativity (full for small orders, seeded sampling above).
    pub fn validate(&self) -> Result<()> {
        let n = self.order;
        for a in 0..n {
            if self.mul(0, a) != a || self.mul(a, 0) != a {
                return Err(Error::InvalidGroup(format!(
                    "identity: element 0 is not a two-sided identity (fails at {a})"
                )));
            }
        }
        let mut seen = vec![usize::MAX; n];
        for a in 0..n {
            for b in 0..n {
                let v = self.mul(a, b);
                if seen[v] == a {
                    return Err(Error::InvalidGroup(format!(
                        "latin-square: row {a} repeats element {v}"
                    )));
                }
                seen[v] = a;
            }
        }
        seen.fill(usize::MAX);
        for b in 0..n {
            for a in 0..n {
                let v = self.mul(a, b);
                if seen[v] == b {
                    return Err(Error::InvalidGroup(format!(
                        "latin-square: column {b} repeats element {v}"
                    )));
                }
                seen[v] = b;
            }
        }
        let check = |a: usize, b: usize, c: usize| -> Result<()> {
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                return Err(Error::InvalidGroup(format!(
                    "associativity fails on ({a}, {b}, {c})"
                )));
            }
            Ok(())
        };
        if n <= FULL_ASSOCIATIVITY_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = Xoshiro256PlusPlus::seed_from_u64(ASSOCIATIVITY_SEED);
            for _ in 0..SAMPLED_ASSOCIATIVITY_TRIPLES {
                check(rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n))?;
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, g: usize) -> &str {
        &self.labels[g]
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    /// `g` raised to a non-negative power by repeated squaring.
    pub fn pow(&self, g: usize, mut exp: u64) -> usize {
        let mut base = g;
        let mut acc = 0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Smallest `m >= 1` with `g^m` equal to the identity.
    pub fn element_order(&self, g: usize) -> Result<usize> {
        if g >= self.order {
            return Err(Error::InvalidParameter(format!(
                "element {g} out of range for group of order {}",
                self.order
            )));
        }
        let mut x = g;
        let mut m = 1;
        while x != 0 {
            x = self.mul(x, g);
            m += 1;
        }
        Ok(m)
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.commute(a, b)))
    }

    /// Smallest-index element generating the whole group, if it is cyclic.
    pub fn cyclic_generator(&self) -> Option<usize> {
        (0..self.order).find(|&g| self.element_order(g).ok() == Some(self.order))
    }

    pub fn to_file(&self) -> GroupFile {
        GroupFile {
            name: self.name.clone(),
            order: self.order,
            table: self.table.iter().map(|&v| v as usize).collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Overwrites one table entry without re-validating. Used for fault
    /// injection in the acceptance runner.
    #[doc(hidden)]
    pub fn corrupt_entry_unchecked(&mut self, a: usize, b: usize, value: usize) {
        self.table[a * self.order + b] = value as u16;
    }
}

impl TryFrom<GroupFile> for FiniteGroup {
    type Error = Error;

    fn try_from(mut file: GroupFile) -> Result<Self> {
        if file.labels.is_empty() {
            file.labels = (0..file.order).map(|i| i.to_string()).collect();
        }
        if file.order != file.labels.len() {
            return Err(Error::InvalidGroup(format!(
                "order {} does not match {} labels",
                file.order,
                file.labels.len()
            )));
        }
        FiniteGroup::from_table(file.name, file.table, file.labels)
    }
}

impl From<FiniteGroup> for GroupFile {
    fn from(group: FiniteGroup) -> Self {
        group.to_file()
    }
}
