use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

/// A CNF formula over variables `1..=n`; literals are signed variable indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Formula {
    n: usize,
    clauses: Vec<Vec<i32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CleanViolation {
    OccurrenceCount { variable: usize, count: usize },
    MissingPolarity { variable: usize, positive: bool },
    ClauseSize { clause: usize, size: usize },
    RepeatedVariable { clause: usize, variable: usize },
    LiteralOutOfRange { clause: usize, literal: i32 },
}

impl Formula {
    pub fn new(n: usize, clauses: Vec<Vec<i32>>) -> Self {
        Formula { n, clauses }
    }

    pub fn variable_count(&self) -> usize {
        self.n
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    /// Clause-then-literal order of all `(clause, literal)` pairs.
    pub fn occurrences(&self) -> Vec<(usize, i32)> {
        self.clauses
            .iter()
            .enumerate()
            .flat_map(|(c, lits)| lits.iter().map(move |&l| (c, l)))
            .collect()
    }

    /// Every violation of cleanliness; empty iff the formula is clean.
    pub fn validate_clean(&self) -> Vec<CleanViolation> {
        let mut out = Vec::new();
        let mut pos = vec![0usize; self.n + 1];
        let mut neg = vec![0usize; self.n + 1];
        for (c, clause) in self.clauses.iter().enumerate() {
            if !(2..=3).contains(&clause.len()) {
                out.push(CleanViolation::ClauseSize { clause: c, size: clause.len() });
            }
            let mut seen = BTreeSet::new();
            for &lit in clause {
                let var = lit.unsigned_abs() as usize;
                if lit == 0 || var > self.n {
                    out.push(CleanViolation::LiteralOutOfRange { clause: c, literal: lit });
                    continue;
                }
                if !seen.insert(var) {
                    out.push(CleanViolation::RepeatedVariable { clause: c, variable: var });
                }
                if lit > 0 {
                    pos[var] += 1;
                } else {
                    neg[var] += 1;
                }
            }
        }
        for var in 1..=self.n {
            if pos[var] + neg[var] != 3 {
                out.push(CleanViolation::OccurrenceCount { variable: var, count: pos[var] + neg[var] });
            }
            if pos[var] == 0 {
                out.push(CleanViolation::MissingPolarity { variable: var, positive: true });
            }
            if neg[var] == 0 {
                out.push(CleanViolation::MissingPolarity { variable: var, positive: false });
            }
        }
        out
    }

    pub fn is_clean(&self) -> bool {
        self.validate_clean().is_empty()
    }

    pub fn satisfied_by(&self, assignment: u64) -> bool {
        self.clauses.iter().all(|c| {
            c.iter().any(|&lit| {
                let value = assignment >> (lit.unsigned_abs() - 1) & 1 == 1;
                value == (lit > 0)
            })
        })
    }

    /// A satisfying assignment (bit `i` = value of variable `i+1`) by exhaustive search.
    pub fn brute_force_sat(&self) -> Option<u64> {
        assert!(self.n < 40, "exhaustive search over too many variables");
        (0..1u64 << self.n).find(|&a| self.satisfied_by(a))
    }

    /// Relabels so that every variable occurs positively at least twice, then
    /// takes the lexicographically least form over variable permutations.
    pub fn canonical(&self) -> Formula {
        let flip: Vec<bool> = (0..=self.n)
            .map(|v| {
                let neg = self.clauses.iter().flatten().filter(|&&l| l == -(v as i32)).count();
                v > 0 && neg >= 2
            })
            .collect();
        let base: Vec<Vec<(usize, bool)>> = self
            .clauses
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&l| {
                        let v = l.unsigned_abs() as usize;
                        (v, (l > 0) != flip[v])
                    })
                    .collect()
            })
            .collect();
        let mut perm: Vec<usize> = (0..=self.n).collect();
        let mut best: Option<Vec<Vec<i32>>> = None;
        permute(&mut perm, 1, &mut |p| {
            let mut cs: Vec<Vec<i32>> = base
                .iter()
                .map(|c| {
                    let mut lits: Vec<i32> = c
                        .iter()
                        .map(|&(v, s)| if s { p[v] as i32 } else { -(p[v] as i32) })
                        .collect();
                    lits.sort_unstable_by_key(|l| (l.abs(), *l));
                    lits
                })
                .collect();
            cs.sort();
            if best.as_ref().is_none_or(|b| cs < *b) {
                best = Some(cs);
            }
        });
        Formula::new(self.n, best.unwrap_or_default())
    }

    /// A uniformly shuffled clean formula on `n ≥ 2` variables.
    pub fn random_clean<R: Rng>(n: usize, rng: &mut R) -> Formula {
        assert!(n >= 2, "clean formulas need at least two variables");
        loop {
            let mut occ: Vec<i32> = Vec::with_capacity(3 * n);
            for v in 1..=n as i32 {
                let neg = rng.gen_range(1..=2);
                for k in 0..3 {
                    occ.push(if k < neg { -v } else { v });
                }
            }
            occ.shuffle(rng);
            if let Some(clauses) = split_clauses(&occ, rng) {
                let f = Formula::new(n, clauses);
                debug_assert!(f.is_clean());
                return f;
            }
        }
    }
}

fn permute(perm: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k + 1 >= perm.len() {
        visit(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute(perm, k + 1, visit);
        perm.swap(k, i);
    }
}

/// Greedy split of a literal sequence into clauses of size 2 or 3 with
/// distinct variables.
fn split_clauses<R: Rng>(occ: &[i32], rng: &mut R) -> Option<Vec<Vec<i32>>> {
    let mut rest: Vec<i32> = occ.to_vec();
    let mut clauses = Vec::new();
    while !rest.is_empty() {
        let size = match rest.len() {
            2 | 3 => rest.len(),
            4 => 2,
            _ => rng.gen_range(2..=3),
        };
        let first = rest.remove(0);
        let mut clause = vec![first];
        let mut i = 0;
        while clause.len() < size && i < rest.len() {
            if clause.iter().all(|l| l.abs() != rest[i].abs()) {
                clause.push(rest.remove(i));
            } else {
                i += 1;
            }
        }
        if clause.len() < size {
            return None;
        }
        clauses.push(clause);
    }
    Some(clauses)
}

/// All clean formulas on `n` variables up to variable renaming and polarity
/// flips, as canonical representatives in increasing order.
pub fn clean_formulas(n: usize) -> Vec<Formula> {
    // each variable: two positive occurrences and one negative
    let mut occ: Vec<i32> = Vec::with_capacity(3 * n);
    for v in 1..=n as i32 {
        occ.extend([v, v, -v]);
    }
    let mut seen: BTreeSet<Vec<Vec<i32>>> = BTreeSet::new();
    let mut labeled: BTreeSet<Vec<Vec<i32>>> = BTreeSet::new();
    partitions(&occ, &mut Vec::new(), &mut labeled);
    for clauses in labeled {
        let canon = Formula::new(n, clauses).canonical();
        seen.insert(canon.clauses);
    }
    seen.into_iter().map(|c| Formula::new(n, c)).collect()
}

fn partitions(rest: &[i32], current: &mut Vec<Vec<i32>>, out: &mut BTreeSet<Vec<Vec<i32>>>) {
    let Some((&first, tail)) = rest.split_first() else {
        let mut cs = current.clone();
        for c in &mut cs {
            c.sort_unstable_by_key(|l| (l.abs(), *l));
        }
        cs.sort();
        out.insert(cs);
        return;
    };
    let m = tail.len();
    for i in 0..m {
        if tail[i].abs() == first.abs() || (i > 0 && tail[i] == tail[i - 1]) {
            continue;
        }
        let pick2: Vec<i32> = vec![first, tail[i]];
        let left: Vec<i32> = tail.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &l)| l).collect();
        current.push(pick2);
        partitions(&left, current, out);
        current.pop();
        for j in i + 1..m {
            if tail[j].abs() == first.abs() || tail[j].abs() == tail[i].abs() || (j > i + 1 && tail[j] == tail[j - 1]) {
                continue;
            }
            let left: Vec<i32> = tail
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i && k != j)
                .map(|(_, &l)| l)
                .collect();
            current.push(vec![first, tail[i], tail[j]]);
            partitions(&left, current, out);
            current.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn four_occurrences_rejected() {
        let f = Formula::new(2, vec![vec![1, 2], vec![-1, 2], vec![1, -2], vec![-1, -2]]);
        assert!(f
            .validate_clean()
            .contains(&CleanViolation::OccurrenceCount { variable: 1, count: 4 }));
    }

    #[test]
    fn small_clean_example() {
        let f = Formula::new(2, vec![vec![1, 2], vec![-1, -2], vec![1, -2]]);
        assert!(f.is_clean());
        assert_eq!(f.occurrences().len(), 6);
    }

    #[test]
    fn repeated_variable_rejected() {
        let f = Formula::new(1, vec![vec![1, -1]]);
        assert!(f
            .validate_clean()
            .contains(&CleanViolation::RepeatedVariable { clause: 0, variable: 1 }));
    }

    #[test]
    fn canonical_is_invariant() {
        let f = Formula::new(2, vec![vec![1, 2], vec![-1, -2], vec![1, -2]]);
        let g = Formula::new(2, vec![vec![-2, -1], vec![2, 1], vec![-2, 1]]);
        assert_eq!(f.canonical(), g.canonical());
    }

    #[test]
    fn class_counts() {
        assert_eq!(clean_formulas(2).len(), 2);
        assert_eq!(clean_formulas(3).len(), 10);
    }

    #[test]
    fn random_formulas_are_clean() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for n in 2..8 {
            for _ in 0..20 {
                assert!(Formula::random_clean(n, &mut rng).is_clean());
            }
        }
    }
}
