//! Random small LPs and a brute-force solver that enumerates basic
//! solutions in exact integer arithmetic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wvg_core::{Constraint, LPOutcome, Rational, RationalLP, Relation, SimplexState};

/// `G x ≤ h` with integer data.
pub struct Inequalities {
    g: Vec<Vec<i128>>,
    h: Vec<i128>,
}

#[derive(Debug, PartialEq)]
pub enum Expected {
    Infeasible,
    Unbounded,
    /// Optimal value as `num / den`, `den > 0`.
    Optimal(i128, i128),
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Solves the square system `m x = rhs` by Cramer's rule, returning
/// `(numerators, det)` with `det > 0`, or `None` if singular.
fn cramer(m: &[Vec<i128>], rhs: &[i128]) -> Option<(Vec<i128>, i128)> {
    let det = determinant(m);
    if det == 0 {
        return None;
    }
    let sign = det.signum();
    let nums = (0..m.len())
        .map(|j| {
            let replaced: Vec<Vec<i128>> = m
                .iter()
                .zip(rhs)
                .map(|(row, &r)| {
                    let mut row = row.clone();
                    row[j] = r;
                    row
                })
                .collect();
            sign * determinant(&replaced)
        })
        .collect();
    Some((nums, det.abs()))
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn oracle(sys: &Inequalities, c: &[i128]) -> Expected {
    let d = c.len();
    let rows = sys.g.len();
    let mut best: Option<(i128, i128)> = None;
    for s in subsets(rows, d) {
        let m: Vec<Vec<i128>> = s.iter().map(|&i| sys.g[i].clone()).collect();
        let rhs: Vec<i128> = s.iter().map(|&i| sys.h[i]).collect();
        let Some((x, den)) = cramer(&m, &rhs) else { continue };
        let feasible = (0..rows).all(|i| {
            let lhs: i128 = sys.g[i].iter().zip(&x).map(|(a, b)| a * b).sum();
            lhs <= sys.h[i] * den
        });
        if feasible {
            let num: i128 = c.iter().zip(&x).map(|(a, b)| a * b).sum();
            let better = match best {
                None => true,
                Some((bn, bd)) => num * bd < bn * den,
            };
            if better {
                best = Some((num, den));
            }
        }
    }
    let Some((num, den)) = best else {
        return Expected::Infeasible;
    };
    // extreme rays of {r : G r ≤ 0}: one-dimensional solution sets of d-1
    // tight rows
    let improving_ray = |r: &[i128]| {
        sys.g
            .iter()
            .all(|row| row.iter().zip(r).map(|(a, b)| a * b).sum::<i128>() <= 0)
            && c.iter().zip(r).map(|(a, b)| a * b).sum::<i128>() < 0
    };
    if d == 1 {
        if improving_ray(&[1]) || improving_ray(&[-1]) {
            return Expected::Unbounded;
        }
    } else {
        for s in subsets(rows, d - 1) {
            // direction from cofactors of the (d-1)×d matrix
            let m: Vec<&Vec<i128>> = s.iter().map(|&i| &sys.g[i]).collect();
            let mut r = vec![0i128; d];
            for (j, rj) in r.iter_mut().enumerate() {
                let minor: Vec<Vec<i128>> = m
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(k, _)| k != j)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let det = determinant(&minor);
                *rj = if j % 2 == 0 { det } else { -det };
            }
            if r.iter().all(|&v| v == 0) {
                continue;
            }
            let neg: Vec<i128> = r.iter().map(|v| -v).collect();
            if improving_ray(&r) || improving_ray(&neg) {
                return Expected::Unbounded;
            }
        }
    }
    let g = gcd(num, den).max(1);
    Expected::Optimal(num / g, den / g)
}

fn determinant(m: &[Vec<i128>]) -> i128 {
    let d = m.len();
    if d == 0 {
        return 1;
    }
    let mut a = m.to_vec();
    let mut prev = 1i128;
    let mut sign = 1i128;
    for k in 0..d {
        let Some(p) = (k..d).find(|&i| a[i][k] != 0) else {
            return 0;
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..d {
            for j in k + 1..d {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[d - 1][d - 1]
}

pub fn random_lp(rng: &mut ChaCha8Rng) -> (RationalLP, Inequalities, Vec<i128>) {
    let vars = rng.gen_range(1..=4);
    let rows = rng.gen_range(1..=6);
    let mut lp = RationalLP::new(vars);
    let c: Vec<i128> = (0..vars).map(|_| rng.gen_range(-4..=4)).collect();
    lp.set_objective(c.iter().map(|&v| Rational::from_int(v as i64)).collect());
    let mut sys = Inequalities {
        g: Vec::new(),
        h: Vec::new(),
    };
    for _ in 0..rows {
        let a: Vec<i128> = (0..vars).map(|_| rng.gen_range(-3..=3)).collect();
        let b: i128 = rng.gen_range(-6..=8);
        let rel = match rng.gen_range(0..10) {
            0..=4 => Relation::Le,
            5..=8 => Relation::Ge,
            _ => Relation::Eq,
        };
        lp.add_constraint(Constraint::new(
            a.iter().map(|&v| Rational::from_int(v as i64)).collect(),
            rel,
            Rational::from_int(b as i64),
        ));
        if rel != Relation::Ge {
            sys.g.push(a.clone());
            sys.h.push(b);
        }
        if rel != Relation::Le {
            sys.g.push(a.iter().map(|v| -v).collect());
            sys.h.push(-b);
        }
    }
    for j in 0..vars {
        let lower = if rng.gen_bool(0.3) { rng.gen_range(-2..=2) } else { 0 };
        lp.set_lower_bound(j, Rational::from_int(lower as i64));
        let mut row = vec![0i128; vars];
        row[j] = -1;
        sys.g.push(row);
        sys.h.push(-lower);
    }
    (lp, sys, c)
}

pub fn check(outcome: &LPOutcome, expected: &Expected, lp: &RationalLP, case: usize) {
    match (outcome, expected) {
        (LPOutcome::Infeasible, Expected::Infeasible) | (LPOutcome::Unbounded, Expected::Unbounded) => {}
        (LPOutcome::Optimal { solution, value }, Expected::Optimal(num, den)) => {
            assert_eq!(*value, Rational::new(*num as i64, *den as i64), "case {case}\n{lp}");
            assert!(lp.is_feasible(solution), "case {case}");
            assert_eq!(lp.objective_value(solution), *value, "case {case}");
        }
        _ => panic!("case {case}: simplex says {outcome:?}, oracle says {expected:?}\n{lp}"),
    }
}

/// Solves `cases` random LPs with the simplex code and the oracle, panicking
/// on the first disagreement. Returns how often each outcome kind occurred
/// (infeasible, unbounded, optimal).
pub fn compare_random(seed: u64, cases: usize) -> [usize; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = [0usize; 3];
    for case in 0..cases {
        let (lp, sys, c) = random_lp(&mut rng);
        let expected = oracle(&sys, &c);
        tally[match expected {
            Expected::Infeasible => 0,
            Expected::Unbounded => 1,
            Expected::Optimal(..) => 2,
        }] += 1;
        let (outcome, _) = SimplexState::solve(lp.clone());
        check(&outcome, &expected, &lp, case);
    }
    tally
}
