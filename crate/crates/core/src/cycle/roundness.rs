//! k-roundness and strong k-roundness checks.
//!
//! Exhaustive mode fixes `m_1 = 0`: adding a constant to every shift only
//! rotates the product cycle, so `n^(k-1)` tuples decide the question.
//! Partial products are kept per depth so each tuple costs `O(n)`.
//! Sampled mode draws unrestricted tuples from a seeded xoshiro256++ stream.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use super::{Cycle, ShiftTuple};
use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::{DEFAULT_SEED, DEFAULT_TUPLE_BUDGET};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchPolicy {
    /// Exhaustive when the tuple count fits the budget, sampled otherwise.
    Auto,
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub budget: u64,
    pub seed: u64,
    pub policy: SearchPolicy,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { budget: DEFAULT_TUPLE_BUDGET, seed: DEFAULT_SEED, policy: SearchPolicy::Auto }
    }
}

impl CheckConfig {
    pub fn exhaustive() -> Self {
        CheckConfig { policy: SearchPolicy::Exhaustive, ..Default::default() }
    }

    pub fn sampled(trials: u64, seed: u64) -> Self {
        CheckConfig { budget: trials, seed, policy: SearchPolicy::Sampled }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    Sampled { trials: u64, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Round,
    NotRound,
    PassSampled,
}

/// A shift tuple whose product cycle repeats a value at positions `i < i_prime`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub shifts: Vec<usize>,
    pub signs: Option<Vec<i8>>,
    pub i: usize,
    pub i_prime: usize,
}

impl Witness {
    pub fn tuple(&self) -> ShiftTuple {
        ShiftTuple {
            shifts: self.shifts.iter().map(|&m| m as i64).collect(),
            signs: self.signs.clone(),
        }
    }

    /// Recomputes both products straight from the cycle entries.
    pub fn verify(&self, cycle: &Cycle) -> bool {
        if self.i == self.i_prime || self.i >= cycle.len() || self.i_prime >= cycle.len() {
            return false;
        }
        if self.signs.as_ref().is_some_and(|s| s.len() != self.shifts.len()) {
            return false;
        }
        let g = cycle.group();
        let product_at = |i: usize| {
            let mut acc = g.identity();
            for (j, &m) in self.shifts.iter().enumerate() {
                let x = cycle.at((i + m) as i64);
                let inverted = self.signs.as_ref().is_some_and(|s| s[j] == -1);
                acc = g.mul(acc, if inverted { g.inv(x) } else { x });
            }
            acc
        };
        product_at(self.i) == product_at(self.i_prime)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundnessReport {
    pub k: u64,
    pub mode: Mode,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
}

impl RoundnessReport {
    pub fn holds(&self) -> bool {
        self.verdict != Verdict::NotRound
    }
}

/// Depth-first search over shift tuples with a fixed sign pattern.
struct Searcher<'a> {
    cycle: &'a Cycle,
    n: usize,
    inverses: Vec<usize>,
    signs: Vec<i8>,
    shifts: Vec<usize>,
    levels: Vec<Vec<usize>>,
    stamp: Vec<u64>,
    pos: Vec<usize>,
    tick: u64,
}

impl<'a> Searcher<'a> {
    fn new(cycle: &'a Cycle, len: usize) -> Self {
        let n = cycle.len();
        let g = cycle.group();
        Searcher {
            cycle,
            n,
            inverses: cycle.entries().iter().map(|&e| g.inv(e)).collect(),
            signs: vec![1; len],
            shifts: vec![0; len],
            levels: vec![vec![0; n]; len],
            stamp: vec![0; g.order()],
            pos: vec![0; g.order()],
            tick: 0,
        }
    }

    #[inline]
    fn factor(&self, depth: usize, idx: usize) -> usize {
        if self.signs[depth] < 0 {
            self.inverses[idx]
        } else {
            self.cycle.entries()[idx]
        }
    }

    /// First repeated value as `(i, i_prime)` with `i < i_prime`.
    fn collision(&mut self, values: &[usize]) -> Option<(usize, usize)> {
        self.tick += 1;
        for (ip, &v) in values.iter().enumerate() {
            if self.stamp[v] == self.tick {
                return Some((self.pos[v], ip));
            }
            self.stamp[v] = self.tick;
            self.pos[v] = ip;
        }
        None
    }

    fn witness(&self, (i, i_prime): (usize, usize), signed: bool) -> Witness {
        Witness {
            shifts: self.shifts.clone(),
            signs: signed.then(|| self.signs.clone()),
            i,
            i_prime,
        }
    }

    /// All tuples with `m_1 = 0`, lexicographic; returns the first collision.
    fn exhaustive(&mut self) -> Option<(usize, usize)> {
        self.shifts[0] = 0;
        for i in 0..self.n {
            self.levels[0][i] = self.factor(0, i);
        }
        self.descend(1)
    }

    fn descend(&mut self, depth: usize) -> Option<(usize, usize)> {
        let len = self.levels.len();
        if depth == len {
            let last = std::mem::take(&mut self.levels[len - 1]);
            let hit = self.collision(&last);
            self.levels[len - 1] = last;
            return hit;
        }
        let g = self.cycle.group();
        for m in 0..self.n {
            self.shifts[depth] = m;
            for i in 0..self.n {
                let idx = (i + m) % self.n;
                let f = self.factor(depth, idx);
                self.levels[depth][i] = g.mul(self.levels[depth - 1][i], f);
            }
            if let Some(hit) = self.descend(depth + 1) {
                return Some(hit);
            }
        }
        None
    }

    /// Product cycle for the current `shifts` and `signs`, computed directly.
    fn evaluate_current(&mut self) -> Option<(usize, usize)> {
        let g = self.cycle.group();
        let mut values = std::mem::take(&mut self.levels[0]);
        for (i, slot) in values.iter_mut().enumerate() {
            let mut acc = g.identity();
            for depth in 0..self.shifts.len() {
                acc = g.mul(acc, self.factor(depth, (i + self.shifts[depth]) % self.n));
            }
            *slot = acc;
        }
        let hit = self.collision(&values);
        self.levels[0] = values;
        hit
    }
}

fn validate_input(cycle: &Cycle, k: u64) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if cycle.len() != cycle.group().order() {
        return Err(Error::InvalidParameter(format!(
            "roundness is defined for full-length cycles: length {} but group order {}",
            cycle.len(),
            cycle.group().order()
        )));
    }
    Ok(())
}

/// When `gcd(k, n) > 1`, the all-zero tuple already collides: `g^k` hits the
/// identity at least `p` times for a prime `p | gcd(k, n)`.
fn gcd_witness(cycle: &Cycle, k: u64) -> Option<Witness> {
    let n = cycle.len() as u64;
    if gcd(k, n) == 1 {
        return None;
    }
    let g = cycle.group();
    let powers: Vec<usize> = cycle.entries().iter().map(|&e| g.pow(e, k)).collect();
    let mut first = vec![usize::MAX; g.order()];
    for (ip, &v) in powers.iter().enumerate() {
        if first[v] != usize::MAX {
            return Some(Witness { shifts: vec![0; k as usize], signs: None, i: first[v], i_prime: ip });
        }
        first[v] = ip;
    }
    None
}

fn use_exhaustive(policy: SearchPolicy, tuples: Option<u64>, budget: u64) -> bool {
    match policy {
        SearchPolicy::Exhaustive => true,
        SearchPolicy::Sampled => false,
        SearchPolicy::Auto => tuples.is_some_and(|t| t <= budget),
    }
}

/// Decides whether every product of `k` rotates of `cycle` is 1-1.
pub fn check_k_round(cycle: &Cycle, k: u64, config: &CheckConfig) -> Result<RoundnessReport> {
    validate_input(cycle, k)?;
    if let Some(w) = gcd_witness(cycle, k) {
        return Ok(RoundnessReport { k, mode: Mode::Exhaustive, verdict: Verdict::NotRound, witness: Some(w) });
    }
    let n = cycle.len() as u64;
    let tuples = u32::try_from(k).ok().and_then(|k| n.checked_pow(k));
    let len = usize::try_from(k)
        .map_err(|_| Error::InvalidParameter(format!("k = {k} is too large")))?;

    if use_exhaustive(config.policy, tuples, config.budget) {
        let mut s = Searcher::new(cycle, len);
        let witness = s.exhaustive().map(|hit| s.witness(hit, false));
        let verdict = if witness.is_some() { Verdict::NotRound } else { Verdict::Round };
        return Ok(RoundnessReport { k, mode: Mode::Exhaustive, verdict, witness });
    }

    let mut s = Searcher::new(cycle, len);
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(config.seed);
    for trial in 1..=config.budget {
        for m in s.shifts.iter_mut() {
            *m = rng.random_range(0..cycle.len());
        }
        if let Some(hit) = s.evaluate_current() {
            return Ok(RoundnessReport {
                k,
                mode: Mode::Sampled { trials: trial, seed: config.seed },
                verdict: Verdict::NotRound,
                witness: Some(s.witness(hit, false)),
            });
        }
    }
    Ok(RoundnessReport {
        k,
        mode: Mode::Sampled { trials: config.budget, seed: config.seed },
        verdict: Verdict::PassSampled,
        witness: None,
    })
}

fn binomial(n: u64, r: u64) -> Option<u64> {
    let mut acc: u64 = 1;
    for i in 0..r {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// Advances `positions` to the next `r`-combination of `0..len`.
fn next_combination(positions: &mut [usize], len: usize) -> bool {
    let r = positions.len();
    let Some(i) = (0..r).rev().find(|&i| positions[i] < len - r + i) else {
        return false;
    };
    positions[i] += 1;
    for j in i + 1..r {
        positions[j] = positions[j - 1] + 1;
    }
    true
}

/// Checks signed tuples of length `k + 2j` with exponent sum `k`, for
/// `j = 0..=max_extra_pairs`.
pub fn check_strongly_k_round(
    cycle: &Cycle,
    k: u64,
    max_extra_pairs: usize,
    config: &CheckConfig,
) -> Result<RoundnessReport> {
    validate_input(cycle, k)?;
    if let Some(w) = gcd_witness(cycle, k) {
        return Ok(RoundnessReport { k, mode: Mode::Exhaustive, verdict: Verdict::NotRound, witness: Some(w) });
    }
    let n = cycle.len() as u64;
    let base = usize::try_from(k)
        .map_err(|_| Error::InvalidParameter(format!("k = {k} is too large")))?;
    let mut sampled_trials = 0u64;
    let mut any_sampled = false;

    for extra in 0..=max_extra_pairs {
        let len = base + 2 * extra;
        let tuples = binomial(len as u64, extra as u64)
            .zip(n.checked_pow(len as u32))
            .and_then(|(c, t)| c.checked_mul(t));
        let mut s = Searcher::new(cycle, len);
        let mut failure = None;

        if use_exhaustive(config.policy, tuples, config.budget) {
            let mut minus: Vec<usize> = (0..extra).collect();
            loop {
                s.signs.fill(1);
                for &p in &minus {
                    s.signs[p] = -1;
                }
                if let Some(hit) = s.exhaustive() {
                    failure = Some(s.witness(hit, true));
                    break;
                }
                if !next_combination(&mut minus, len) {
                    break;
                }
            }
        } else {
            any_sampled = true;
            let mut rng = Xoshiro256PlusPlus::seed_from_u64(config.seed.wrapping_add(extra as u64));
            for _ in 0..config.budget {
                sampled_trials += 1;
                s.signs.fill(1);
                for p in sample(&mut rng, len, extra) {
                    s.signs[p] = -1;
                }
                for m in s.shifts.iter_mut() {
                    *m = rng.random_range(0..cycle.len());
                }
                if let Some(hit) = s.evaluate_current() {
                    failure = Some(s.witness(hit, true));
                    break;
                }
            }
        }

        let mode_so_far = || {
            if any_sampled {
                Mode::Sampled { trials: sampled_trials, seed: config.seed }
            } else {
                Mode::Exhaustive
            }
        };
        if let Some(w) = failure {
            return Ok(RoundnessReport { k, mode: mode_so_far(), verdict: Verdict::NotRound, witness: Some(w) });
        }
        if extra == max_extra_pairs {
            let verdict = if any_sampled { Verdict::PassSampled } else { Verdict::Round };
            return Ok(RoundnessReport { k, mode: mode_so_far(), verdict, witness: None });
        }
    }
    unreachable!("loop returns on its last iteration")
}
