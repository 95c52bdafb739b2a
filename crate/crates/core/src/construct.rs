//! Constructive side: cycles that are round or balanced by construction.
//!
//! Totally round cycles for nilpotent groups are built by repeatedly
//! splitting off a central subgroup `H` of prime order. Given 1-1 cycles
//! `h` over `H` and `x` over `G/H` (lifted to coset representatives
//! commuting with `H`), the cycle with entry `h_a x_b` at position
//! `a * t + b` is k-round whenever both inputs are, for every `k` at once.

use std::sync::Arc;

use serde::Serialize;

use crate::arith::factorize;
use crate::cycle::Cycle;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Quotient, Subgroup};

/// `(z^0, z^1, ..., z^{n-1})` for the smallest-index generator `z`.
pub fn ap_cycle(group: &Arc<FiniteGroup>) -> Result<Cycle> {
    let z = group.cyclic_generator().ok_or_else(|| {
        Error::InvalidParameter(format!("{} is not cyclic", group.name()))
    })?;
    let entries = (0..group.order() as u64).map(|i| group.pow(z, i)).collect();
    Cycle::new(Arc::clone(group), entries)
}

/// One lifting step `G/H -> G` of the construction.
#[derive(Clone, Debug)]
pub struct ExtensionStep {
    pub central_generator: usize,
    pub subgroup: Subgroup,
    /// 1-1 cycle over `H`, as element indices of the parent group.
    pub h_cycle: Vec<usize>,
    pub quotient: Quotient,
    /// 1-1 cycle over the quotient, as coset indices.
    pub quotient_cycle: Vec<usize>,
    pub result: Vec<usize>,
}

impl ExtensionStep {
    pub fn new(
        group: &FiniteGroup,
        subgroup: Subgroup,
        h_cycle: Vec<usize>,
        quotient_cycle: Vec<usize>,
    ) -> Result<Self> {
        let quotient = group.quotient(&subgroup)?;
        let central_generator = h_cycle.get(1).copied().unwrap_or(0);
        let mut step = ExtensionStep {
            central_generator,
            subgroup,
            h_cycle,
            quotient,
            quotient_cycle,
            result: Vec::new(),
        };
        step.result = assemble(group, &step)?;
        Ok(step)
    }

    pub fn s(&self) -> usize {
        self.h_cycle.len()
    }

    pub fn t(&self) -> usize {
        self.quotient_cycle.len()
    }
}

fn is_permutation_of(entries: &[usize], universe: impl Iterator<Item = usize>) -> bool {
    let mut expected: Vec<usize> = universe.collect();
    let mut got = entries.to_vec();
    expected.sort_unstable();
    got.sort_unstable();
    expected == got
}

fn assemble(group: &FiniteGroup, step: &ExtensionStep) -> Result<Vec<usize>> {
    let h = &step.subgroup;
    let q = &step.quotient;
    if h.parent_order() != group.order() || q.coset_of.len() != group.order() {
        return Err(Error::InvalidExtension("step belongs to a different group".into()));
    }
    if !is_permutation_of(&step.h_cycle, h.members().iter().copied()) {
        return Err(Error::InvalidParameter("h_cycle is not a 1-1 cycle over H".into()));
    }
    if !is_permutation_of(&step.quotient_cycle, 0..q.group.order()) {
        return Err(Error::InvalidParameter("quotient_cycle is not a 1-1 cycle over G/H".into()));
    }
    for (c, &rep) in q.reps.iter().enumerate() {
        if q.coset_of[rep] != c {
            return Err(Error::InvalidExtension(format!("rep {rep} is not in coset {c}")));
        }
        if let Some(&hm) = h.members().iter().find(|&&hm| !group.commute(rep, hm)) {
            return Err(Error::InvalidExtension(format!(
                "representative {} does not commute with {}",
                group.label(rep),
                group.label(hm)
            )));
        }
    }
    let mut out = Vec::with_capacity(step.s() * step.t());
    for &ha in &step.h_cycle {
        for &coset in &step.quotient_cycle {
            out.push(group.mul(ha, q.reps[coset]));
        }
    }
    Ok(out)
}

/// Entry `a * t + b` is `h_a x_b`, with `x_b` the representative of the
/// `b`-th coset along the quotient cycle.
pub fn extend_cycle(group: &Arc<FiniteGroup>, step: &ExtensionStep) -> Result<Cycle> {
    Cycle::new(Arc::clone(group), assemble(group, step)?)
}

/// The steps of a construction, innermost first, and the resulting cycle.
#[derive(Clone, Debug)]
pub struct ConstructionTrace {
    /// Cycle over the innermost (trivial or cyclic) quotient.
    pub base: Vec<usize>,
    pub steps: Vec<ExtensionStep>,
    pub result: Cycle,
}

impl ConstructionTrace {
    /// Re-runs every step from the base and returns the final entries.
    pub fn replay(&self) -> Result<Vec<usize>> {
        let mut current = self.base.clone();
        for (idx, step) in self.steps.iter().enumerate() {
            if step.quotient_cycle != current {
                return Err(Error::InternalInconsistency(format!(
                    "step {idx} does not start from its predecessor's result"
                )));
            }
            let parent = match self.steps.get(idx + 1) {
                Some(outer) => &outer.quotient.group,
                None => self.result.group(),
            };
            current = assemble(parent, step)?;
        }
        Ok(current)
    }

    pub fn to_json(&self) -> TraceJson {
        TraceJson {
            group: self.result.group().name().to_string(),
            order: self.result.group().order(),
            base: self.base.clone(),
            steps: self
                .steps
                .iter()
                .map(|s| StepJson {
                    group_order: s.quotient.coset_of.len(),
                    central_generator: s.central_generator,
                    subgroup: s.subgroup.members().to_vec(),
                    h_cycle: s.h_cycle.clone(),
                    quotient_order: s.quotient.group.order(),
                    quotient_cycle: s.quotient_cycle.clone(),
                    reps: s.quotient.reps.clone(),
                    result: s.result.clone(),
                })
                .collect(),
            result: self.result.entries().to_vec(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceJson {
    pub group: String,
    pub order: usize,
    pub base: Vec<usize>,
    pub steps: Vec<StepJson>,
    pub result: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StepJson {
    pub group_order: usize,
    pub central_generator: usize,
    pub subgroup: Vec<usize>,
    pub h_cycle: Vec<usize>,
    pub quotient_order: usize,
    pub quotient_cycle: Vec<usize>,
    pub reps: Vec<usize>,
    pub result: Vec<usize>,
}

/// Central element of prime order: the smallest non-identity central
/// element, raised to `ord / p` for the smallest prime `p | ord`.
fn prime_order_central_element(group: &FiniteGroup) -> Option<usize> {
    let z0 = *group.center().members().get(1)?;
    let ord = group.element_order(z0).ok()? as u64;
    let p = factorize(ord)[0].0;
    Some(group.pow(z0, ord / p))
}

fn build(group: &FiniteGroup, steps: &mut Vec<ExtensionStep>, base: &mut Vec<usize>) -> Result<Vec<usize>> {
    let n = group.order();
    if n == 1 {
        *base = vec![0];
        return Ok(vec![0]);
    }
    if let Some(z) = group.cyclic_generator() {
        let entries: Vec<usize> = (0..n as u64).map(|i| group.pow(z, i)).collect();
        *base = entries.clone();
        return Ok(entries);
    }
    let z = prime_order_central_element(group).ok_or(Error::NotNilpotent)?;
    let p = group.element_order(z)? as u64;
    let subgroup = group.subgroup_generated(&[z])?;
    let h_cycle: Vec<usize> = (0..p).map(|i| group.pow(z, i)).collect();
    let quotient = group.quotient(&subgroup)?;
    let quotient_cycle = build(&quotient.group, steps, base)?;
    let mut step = ExtensionStep {
        central_generator: z,
        subgroup,
        h_cycle,
        quotient,
        quotient_cycle,
        result: Vec::new(),
    };
    step.result = assemble(group, &step)?;
    let result = step.result.clone();
    steps.push(step);
    Ok(result)
}

/// A 1-1 cycle that is k-round for every `k` coprime to the order, for any
/// nilpotent group.
pub fn totally_round_cycle(group: &Arc<FiniteGroup>) -> Result<ConstructionTrace> {
    if !group.upper_central_series().nilpotent {
        return Err(Error::NotNilpotent);
    }
    let mut steps = Vec::new();
    let mut base = Vec::new();
    let entries = build(group, &mut steps, &mut base)?;
    let result = Cycle::new(Arc::clone(group), entries)?;
    Ok(ConstructionTrace { base, steps, result })
}

/// The cycle `(x^a y^b)` at index `a * p + b` over the non-abelian group of
/// order `pq`; it is 2-round.
pub fn pq_two_round_cycle(p: u64, q: u64) -> Result<Cycle> {
    let group = Arc::new(FiniteGroup::pq(p, q)?);
    let entries = (0..group.order()).collect();
    Cycle::new(group, entries)
}

/// `(g_0, g_0^-1, g_1, g_1^-1, ...)` for a 1-1 cycle over an odd-order group.
pub fn interleaved_balanced_cycle(cycle: &Cycle) -> Result<Cycle> {
    let g = cycle.group();
    if g.order() % 2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "interleaving needs odd group order, got {}",
            g.order()
        )));
    }
    if !cycle.is_one_to_one() {
        return Err(Error::InvalidParameter("interleaving needs a 1-1 cycle".into()));
    }
    let entries = cycle.entries().iter().flat_map(|&e| [e, g.inv(e)]).collect();
    Cycle::new(Arc::clone(cycle.group_arc()), entries)
}

/// A cycle of length `n^(r+1)` containing every `(r+1)`-block of element
/// indices exactly once: an Eulerian circuit of the order-`r` De Bruijn
/// graph, taking the smallest unused symbol first.
pub fn de_bruijn_cycle(group: &Arc<FiniteGroup>, r: usize, length_budget: u64) -> Result<Cycle> {
    let n = group.order();
    let length = (n as u64)
        .checked_pow(r as u32 + 1)
        .filter(|&l| l <= length_budget)
        .ok_or_else(|| {
            Error::BudgetExceeded(format!("De Bruijn cycle of length {n}^{} over budget", r + 1))
        })?;
    let nodes = n.pow(r as u32);
    let mut next_symbol = vec![0usize; nodes];
    let mut stack: Vec<(usize, Option<usize>)> = vec![(0, None)];
    let mut circuit = Vec::with_capacity(length as usize);
    while let Some(&(v, _)) = stack.last() {
        if next_symbol[v] < n {
            let s = next_symbol[v];
            next_symbol[v] += 1;
            stack.push(((v * n + s) % nodes, Some(s)));
        } else if let (_, Some(s)) = stack.pop().unwrap() {
            circuit.push(s);
        }
    }
    circuit.reverse();
    debug_assert_eq!(circuit.len() as u64, length);
    Cycle::new(Arc::clone(group), circuit)
}

/// Best balanced depth found over `Z_2` for one cycle length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DepthRecord {
    pub length: usize,
    /// Largest `r` with `D^0 .. D^r` all balanced, if any cycle is balanced.
    pub best_depth: Option<usize>,
    pub example: Option<Vec<usize>>,
    pub reached_cap: bool,
}

/// Experimental search over every `Z_2` cycle of each even length up to
/// `max_len`, reporting how deep the difference operator stays balanced.
/// Over `Z_2` all four variants coincide with `x_i + x_{i+1}`.
pub fn z2_balanced_depth_search(max_len: usize, depth_cap: usize) -> Result<Vec<DepthRecord>> {
    if max_len > 20 {
        return Err(Error::BudgetExceeded(format!("2^{max_len} cycles is too many")));
    }
    let mut records = Vec::new();
    for length in (2..=max_len).step_by(2) {
        let mask: u32 = if length == 32 { u32::MAX } else { (1 << length) - 1 };
        let half = (length / 2) as u32;
        let mut best: Option<(usize, u32)> = None;
        let mut reached_cap = false;
        for x in 0..=mask {
            if x.count_ones() != half {
                continue;
            }
            let mut cur = x;
            let mut depth = 0;
            loop {
                if depth == depth_cap {
                    reached_cap = true;
                    break;
                }
                let shifted = (cur >> 1) | ((cur & 1) << (length - 1));
                let next = (cur ^ shifted) & mask;
                if next.count_ones() != half {
                    break;
                }
                cur = next;
                depth += 1;
            }
            if best.is_none_or(|(d, _)| depth > d) {
                best = Some((depth, x));
            }
        }
        records.push(DepthRecord {
            length,
            best_depth: best.map(|(d, _)| d),
            example: best.map(|(_, x)| (0..length).map(|i| ((x >> i) & 1) as usize).collect()),
            reached_cap,
        });
    }
    Ok(records)
}
