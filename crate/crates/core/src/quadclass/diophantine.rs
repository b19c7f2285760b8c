//! Index triples with `1/n1 + 1/n2 + 1/n3 = 1`, `n_i` nonzero integers or
//! infinity, up to permutation.

use std::fmt;

use serde::Serialize;

use super::orbits::Index;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum IndexTriple {
    /// `{1, m, -m}` for any positive integer `m`.
    OneOppositePair,
    Fixed([Index; 3]),
}

impl fmt::Display for IndexTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexTriple::OneOppositePair => f.write_str("1,m,-m"),
            IndexTriple::Fixed(t) => write!(f, "{},{},{}", t[0], t[1], t[2]),
        }
    }
}

impl IndexTriple {
    /// Whether a sorted multiset of three indices belongs to this solution.
    pub fn matches(&self, sorted: &[Index]) -> bool {
        match self {
            IndexTriple::Fixed(t) => sorted == t,
            IndexTriple::OneOppositePair => match sorted {
                [Index::Finite(a), Index::Finite(1), Index::Finite(c)] => *a == -*c && *c > 0,
                _ => false,
            },
        }
    }
}

/// All solutions.
///
/// An index 1 forces the other two to be opposite (or both infinite). With
/// no index 1, two infinite indices are impossible, one infinite index
/// leaves `1/a + 1/b = 1` whose only solution is `a = b = 2`, and with all
/// finite indices no index can be negative: the other two are at least 2,
/// so their reciprocals sum to at most 1. The positive case is a bounded
/// search with `a <= b <= c`, `a <= 3`, `b <= 2a/(a-1)`.
pub fn solve_index_diophantine() -> Vec<IndexTriple> {
    use Index::{Finite as F, Infinite as Inf};
    let mut out = vec![IndexTriple::OneOppositePair, IndexTriple::Fixed([F(1), Inf, Inf])];
    out.push(IndexTriple::Fixed([F(2), F(2), Inf]));
    let mut finite = Vec::new();
    for a in 2i64..=3 {
        for b in a..=(2 * a / (a - 1)) {
            // 1/c = 1 - 1/a - 1/b = (ab - a - b)/(ab)
            let num = a * b - a - b;
            if num > 0 && (a * b) % num == 0 {
                let c = a * b / num;
                if c >= b {
                    finite.push([F(a), F(b), F(c)]);
                }
            }
        }
    }
    finite.sort_by_key(|t| std::cmp::Reverse(t[0]));
    out.extend(finite.into_iter().map(IndexTriple::Fixed));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::rat;
    use crate::quadclass::orbits::reciprocal_sum;
    use Index::{Finite as F, Infinite as Inf};

    #[test]
    fn contains_known_triples() {
        let sols = solve_index_diophantine();
        assert!(sols.contains(&IndexTriple::Fixed([F(2), F(3), F(6)])));
        assert!(sols.contains(&IndexTriple::Fixed([F(2), F(2), Inf])));
        assert_eq!(sols.len(), 6);
    }

    #[test]
    fn brute_force_agrees() {
        let sols = solve_index_diophantine();
        let mut vals: Vec<Index> = (-100i64..=100).filter(|&n| n != 0).map(F).collect();
        vals.push(Inf);
        for (i, a) in vals.iter().enumerate() {
            for (j, b) in vals.iter().enumerate().skip(i) {
                for c in vals.iter().skip(j) {
                    let mut t = [*a, *b, *c];
                    t.sort();
                    if !sums_to_one(&t) {
                        continue;
                    }
                    let hits = sols.iter().filter(|s| s.matches(&t)).count();
                    assert_eq!(hits, 1, "{t:?}");
                }
            }
        }
        for s in &sols {
            if let IndexTriple::Fixed(t) = s {
                assert_eq!(reciprocal_sum(t), rat(1));
            }
        }
    }

    /// Integer form of the identity, for speed.
    fn sums_to_one(t: &[Index; 3]) -> bool {
        let fin: Vec<i64> = t.iter().filter_map(|k| if let F(n) = k { Some(*n) } else { None }).collect();
        match fin.as_slice() {
            [a, b, c] => a * b + b * c + a * c == a * b * c,
            [a, b] => a + b == a * b,
            [a] => *a == 1,
            _ => false,
        }
    }
}
