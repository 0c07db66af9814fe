//! Minimum-sum representations by exhaustive search over small weight
//! vectors.

use std::collections::{BTreeSet, HashMap};

use wvg_core::{CompleteGame, Lattice};

/// Minimum sum and the `(weights, least quota)` pairs attaining it.
pub type Optima = (u64, BTreeSet<(Vec<u64>, u64)>);

pub fn truth_table(n: usize, weights: &[u64], quota: u64) -> u64 {
    (0..1u32 << n)
        .filter(|&c| {
            (0..n)
                .filter(|k| c >> (n - 1 - k) & 1 == 1)
                .map(|k| weights[k])
                .sum::<u64>()
                >= quota
        })
        .fold(0u64, |t, c| t | 1 << c)
}

/// Every vector of `n` non-negative integers summing to exactly `s`.
pub fn compositions(n: usize, s: u64) -> Vec<Vec<u64>> {
    fn rec(n: usize, left: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() + 1 == n {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for v in 0..=left {
            cur.push(v);
            rec(n, left - v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, s, &mut Vec::new(), &mut out);
    out
}

/// For each truth table reachable with weight sum at most `cap`: the
/// smallest sum and every vector attaining it, paired with its least quota.
pub fn brute_force(n: usize, cap: u64) -> HashMap<u64, Optima> {
    let mut best: HashMap<u64, Optima> = HashMap::new();
    for s in 1..=cap {
        for w in compositions(n, s) {
            for q in 1..=s {
                let t = truth_table(n, &w, q);
                let entry = best.entry(t).or_insert_with(|| (s, BTreeSet::new()));
                if entry.0 != s {
                    continue;
                }
                // quotas are scanned upwards, so the first hit is the least
                if !entry.1.iter().any(|(v, _)| *v == w) {
                    entry.1.insert((w.clone(), q));
                }
            }
        }
    }
    best
}

pub fn game_table(lattice: &Lattice, g: &CompleteGame) -> u64 {
    g.winning_set(lattice).iter().fold(0u64, |t, c| t | 1 << c)
}
