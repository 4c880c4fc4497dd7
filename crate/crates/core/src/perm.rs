//! Permutations, disjoint cycle decompositions, and the class of a
//! permutation under inversion of individual cycles.

use std::fmt;

use crate::error::PermError;

/// A permutation of `{0, .., n-1}`, stored as its image list.
///
/// Displayed in 1-based cycle notation, e.g. `(1 2 5 7)(3 4 6)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    /// Build from an image list; `images[i]` is where `i` is sent.
    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(PermError::NotBijection(images.clone()));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Build from 0-based disjoint cycles on a ground set of size `n`.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x >= n || touched[x] {
                    return Err(PermError::BadCycle(cycle.iter().map(|c| c + 1).collect()));
                }
                touched[x] = true;
                images[x] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    /// Parse 1-based cycle notation such as `(27)(36)(45)` or `(1 2 5 7)(3 4 6)`.
    ///
    /// Without separators inside a cycle every digit is its own element, which
    /// only makes sense for `n < 10`.
    pub fn parse_cycles(n: usize, text: &str) -> Result<Self, PermError> {
        let mut cycles = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let open = rest.strip_prefix('(').ok_or_else(|| PermError::Syntax(text.to_string()))?;
            let close = open.find(')').ok_or_else(|| PermError::Syntax(text.to_string()))?;
            let body = open[..close].trim();
            let elems: Vec<usize> = if body.contains([' ', ',']) {
                body.split([' ', ','])
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<usize>().map_err(|_| PermError::Syntax(text.to_string())))
                    .collect::<Result<_, _>>()?
            } else {
                body.chars()
                    .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| PermError::Syntax(text.to_string())))
                    .collect::<Result<_, _>>()?
            };
            if elems.contains(&0) {
                return Err(PermError::Syntax(text.to_string()));
            }
            cycles.push(elems.into_iter().map(|e| e - 1).collect());
            rest = open[close + 1..].trim_start();
        }
        Self::from_cycles(n, &cycles)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Self {
        assert_eq!(self.len(), other.len());
        Permutation { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    /// Disjoint cycles including fixed points, each starting at its smallest
    /// element, ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    /// `true` for even permutations.
    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }

    pub fn cycle_class(&self) -> CycleClass {
        CycleClass::of(self)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

/// Canonical form of a permutation up to inverting any subset of its cycles.
///
/// Each cycle starts at its smallest element; of the two directions the
/// lexicographically smaller word is kept. Fixed points stay in the list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleClass {
    canonical_cycles: Vec<Vec<usize>>,
}

impl CycleClass {
    pub fn of(p: &Permutation) -> Self {
        let mut canonical_cycles: Vec<Vec<usize>> = p
            .cycles()
            .into_iter()
            .map(|c| {
                if c.len() <= 2 {
                    return c;
                }
                let mut reversed = vec![c[0]];
                reversed.extend(c[1..].iter().rev());
                c.min(reversed)
            })
            .collect();
        canonical_cycles.sort();
        CycleClass { canonical_cycles }
    }

    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.canonical_cycles
    }

    /// Every permutation in the class, obtained by inverting each subset of
    /// the cycles of length at least three.
    pub fn members(&self) -> Vec<Permutation> {
        let n: usize = self.canonical_cycles.iter().map(Vec::len).sum();
        let long: Vec<usize> = (0..self.canonical_cycles.len())
            .filter(|&k| self.canonical_cycles[k].len() > 2)
            .collect();
        (0..1usize << long.len())
            .map(|mask| {
                let cycles: Vec<Vec<usize>> = self
                    .canonical_cycles
                    .iter()
                    .enumerate()
                    .map(|(k, c)| match long.iter().position(|&l| l == k) {
                        Some(bit) if mask >> bit & 1 == 1 => c.iter().rev().copied().collect(),
                        _ => c.clone(),
                    })
                    .collect();
                Permutation::from_cycles(n, &cycles).expect("class cycles partition the ground set")
            })
            .collect()
    }
}

/// Whether two permutations agree up to inverting individual cycles.
pub fn cycle_similar(s: &Permutation, t: &Permutation) -> Result<bool, PermError> {
    if s.len() != t.len() {
        return Err(PermError::GroundSetMismatch(s.len(), t.len()));
    }
    Ok(CycleClass::of(s) == CycleClass::of(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn p(n: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(n, s).unwrap()
    }

    #[test]
    fn inverting_cycles_keeps_the_class() {
        let base = p(7, "(1257)(346)");
        for other in ["(1752)(346)", "(1257)(364)", "(1752)(364)"] {
            assert!(cycle_similar(&base, &p(7, other)).unwrap(), "{other}");
        }
        assert_eq!(base.cycle_class().members().len(), 4);
    }

    #[test]
    fn different_supports_are_distinct() {
        assert!(!cycle_similar(&p(3, "(12)"), &p(3, "(13)")).unwrap());
        let s = p(5, "(123)(45)");
        assert!(cycle_similar(&s, &s).unwrap());
        assert!(cycle_similar(&p(3, "(12)"), &p(4, "(12)")).is_err());
    }

    #[test]
    fn display_round_trips() {
        let s = p(7, "(1 2 5 7)(3 4 6)");
        assert_eq!(s.to_string(), "(1 2 5 7)(3 4 6)");
        assert_eq!(Permutation::identity(3).to_string(), "()");
        assert_eq!(p(7, &s.to_string()), s);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Permutation::parse_cycles(3, "(14)").is_err());
        assert!(Permutation::parse_cycles(3, "(12)(23)").is_err());
        assert!(Permutation::parse_cycles(3, "12").is_err());
        assert!(Permutation::from_images(vec![0, 0]).is_err());
    }

    #[test]
    fn class_counts_in_small_groups() {
        // Oracle: brute-force partition of S_n by "each cycle of s appears in t
        // up to reversal", checked directly on cycle sets.
        fn same_up_to_reversal(s: &Permutation, t: &Permutation) -> bool {
            s.cycles().iter().all(|c| {
                let mut fwd = vec![false; c.len()];
                let mut bwd = vec![false; c.len()];
                for (k, &x) in c.iter().enumerate() {
                    fwd[k] = t.apply(x) == s.apply(x);
                    bwd[k] = t.apply(s.apply(x)) == x;
                }
                fwd.iter().all(|&b| b) || bwd.iter().all(|&b| b)
            })
        }
        for (n, expected) in [(3usize, 5usize), (4, 17)] {
            let perms: Vec<Permutation> = (0..n)
                .permutations(n)
                .map(|v| Permutation::from_images(v).unwrap())
                .collect();
            let mut reps: Vec<&Permutation> = Vec::new();
            for s in &perms {
                if !reps.iter().any(|r| same_up_to_reversal(r, s)) {
                    reps.push(s);
                }
            }
            assert_eq!(reps.len(), expected);
            let classes: std::collections::BTreeSet<_> = perms.iter().map(CycleClass::of).collect();
            assert_eq!(classes.len(), expected);
        }
    }

    #[test]
    fn classes_share_parity() {
        for v in (0..5).permutations(5) {
            let s = Permutation::from_images(v).unwrap();
            let class = s.cycle_class();
            let members = class.members();
            assert!(members.contains(&s));
            assert!(members.iter().all(|m| m.is_even() == s.is_even() && m.cycle_class() == class));
        }
    }
}
