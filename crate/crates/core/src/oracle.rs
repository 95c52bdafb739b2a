//! Deliberately naive reference implementations.
//!
//! These share no code with the optimized paths they check: plain scans,
//! base-n counters and repeated multiplication. Tests and the acceptance
//! runner compare the two.

use crate::group::FiniteGroup;

/// Representability of `0..=limit` by direct dynamic programming.
pub fn representable_by_scan(gens: &[u64], limit: u64) -> Vec<bool> {
    let mut ok = vec![false; limit as usize + 1];
    ok[0] = true;
    for v in 1..=limit as usize {
        ok[v] = gens.iter().any(|&s| s as usize <= v && ok[v - s as usize]);
    }
    ok
}

pub fn gaps_by_scan(gens: &[u64], limit: u64) -> Vec<u64> {
    representable_by_scan(gens, limit)
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, &ok)| !ok)
        .map(|(v, _)| v as u64)
        .collect()
}

/// Largest gap up to `limit`, or `None` when the scan cannot certify it
/// (the final `min(gens)` values are not all representable).
pub fn frobenius_by_scan(gens: &[u64], limit: u64) -> Option<i64> {
    let ok = representable_by_scan(gens, limit);
    let m = *gens.iter().min()? as usize;
    if m > ok.len() || !ok[ok.len() - m..].iter().all(|&b| b) {
        return None;
    }
    Some(ok.iter().rposition(|&b| !b).map_or(-1, |v| v as i64))
}

/// `|{x : x * x * ... * x (l factors) = 1}|` by repeated multiplication.
pub fn root_count_naive(group: &FiniteGroup, l: u64) -> usize {
    (0..group.order())
        .filter(|&x| {
            let mut acc = 0;
            for _ in 0..l {
                acc = group.mul(acc, x);
            }
            acc == 0
        })
        .count()
}

/// k-roundness of `entries` by visiting every tuple `(0, m_2, .., m_k)`
/// with a base-n counter and recomputing each product from scratch.
pub fn is_k_round_naive(group: &FiniteGroup, entries: &[usize], k: usize) -> bool {
    let n = entries.len();
    if n != group.order() || k == 0 {
        return false;
    }
    let mut shifts = vec![0usize; k];
    loop {
        let mut seen = vec![false; n];
        for i in 0..n {
            let p = shifts.iter().fold(0, |acc, &m| group.mul(acc, entries[(i + m) % n]));
            if seen[p] {
                return false;
            }
            seen[p] = true;
        }
        // advance positions 1..k as a base-n counter
        let mut pos = k;
        loop {
            if pos == 1 {
                return true;
            }
            pos -= 1;
            shifts[pos] += 1;
            if shifts[pos] < n {
                break;
            }
            shifts[pos] = 0;
        }
    }
}

/// Every arrangement of `items`, by Heap's algorithm.
pub fn all_arrangements(items: &[usize]) -> Vec<Vec<usize>> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        heap(k - 1, a, out);
        for i in 0..k - 1 {
            if k % 2 == 0 {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
            heap(k - 1, a, out);
        }
    }
    let mut a = items.to_vec();
    let mut out = Vec::new();
    heap(a.len(), &mut a, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scan_oracle() {
        assert_eq!(gaps_by_scan(&[3, 5], 15), vec![1, 2, 4, 7]);
        assert_eq!(frobenius_by_scan(&[3, 5], 15), Some(7));
        assert_eq!(frobenius_by_scan(&[3, 5], 8), None);
        assert_eq!(frobenius_by_scan(&[1], 5), Some(-1));
    }

    #[test]
    fn arrangements_are_complete() {
        let mut all = all_arrangements(&[1, 2, 3, 4]);
        assert_eq!(all.len(), 24);
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 24);
    }

    #[test]
    fn naive_roundness() {
        let z5 = FiniteGroup::cyclic(5).unwrap();
        assert!(is_k_round_naive(&z5, &[0, 1, 2, 3, 4], 2));
        assert!(!is_k_round_naive(&z5, &[0, 1, 2, 3, 4], 5));
        let z2 = FiniteGroup::cyclic(2).unwrap();
        assert!(!is_k_round_naive(&z2, &[0, 1], 2));
    }
}
