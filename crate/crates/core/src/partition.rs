//! Brute-force set partition enumeration, used as an oracle for the Bell
//! family and for counting partition pairs.

/// A set partition of `{0, ..., n-1}` as a restricted growth string:
/// `labels[0] = 0` and `labels[i] <= 1 + max(labels[..i])`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetPartition {
    labels: Vec<u8>,
}

impl SetPartition {
    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn block_count(&self) -> usize {
        self.labels.iter().max().map_or(0, |&m| m as usize + 1)
    }

    /// Every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &SetPartition) -> bool {
        let n = self.len();
        (0..n).all(|i| {
            (i + 1..n).all(|j| self.labels[i] != self.labels[j] || coarser.labels[i] == coarser.labels[j])
        })
    }

    /// The common refinement of `self` and `other` has only singleton blocks.
    pub fn meet_is_discrete(&self, other: &SetPartition) -> bool {
        let n = self.len();
        (0..n).all(|i| {
            (i + 1..n).all(|j| self.labels[i] != self.labels[j] || other.labels[i] != other.labels[j])
        })
    }
}

/// Iterator over all partitions of an `n`-set in lexicographic order of
/// their restricted growth strings. Yields one (empty) partition for `n = 0`.
pub struct SetPartitions {
    labels: Vec<u8>,
    maxes: Vec<u8>,
    done: bool,
}

impl SetPartitions {
    pub fn new(n: usize) -> Self {
        assert!(n < 256, "labels are stored as u8");
        SetPartitions {
            labels: vec![0; n],
            maxes: vec![0; n],
            done: false,
        }
    }
}

impl Iterator for SetPartitions {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        if self.done {
            return None;
        }
        let out = SetPartition {
            labels: self.labels.clone(),
        };
        // maxes[i] = max(labels[..i]); find the rightmost position that can grow
        let n = self.labels.len();
        let mut i = n;
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.labels[i] <= self.maxes[i] {
                self.labels[i] += 1;
                for j in i + 1..n {
                    self.labels[j] = 0;
                    self.maxes[j] = self.maxes[j - 1].max(self.labels[j - 1]);
                }
                break;
            }
        }
        Some(out)
    }
}

/// Ordered pairs `(P, Q)` of partitions of `[n]` whose meet is discrete,
/// counted by exhaustive enumeration. Cost is `B_n^2`, so keep `n <= 9`.
pub fn trivial_meet_pairs(n: usize) -> u64 {
    let parts: Vec<SetPartition> = SetPartitions::new(n).collect();
    parts
        .iter()
        .map(|p| parts.iter().filter(|q| p.meet_is_discrete(q)).count() as u64)
        .sum()
}

/// Ordered pairs `(P, Q)` of partitions of `[n]` with `P` refining `Q`.
pub fn refinement_pairs(n: usize) -> u64 {
    let parts: Vec<SetPartition> = SetPartitions::new(n).collect();
    parts
        .iter()
        .map(|p| parts.iter().filter(|q| p.refines(q)).count() as u64)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn counts_are_bell_numbers() {
        let counts: Vec<usize> = (0..=7).map(|n| SetPartitions::new(n).count()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 15, 52, 203, 877]);
    }

    #[test]
    fn strings_are_distinct_and_restricted() {
        let all: Vec<_> = SetPartitions::new(6).collect();
        let set: HashSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), all.len());
        for p in &all {
            let mut max = 0u8;
            for (i, &l) in p.labels().iter().enumerate() {
                if i == 0 {
                    assert_eq!(l, 0);
                }
                assert!(l <= max + 1);
                max = max.max(l);
            }
        }
    }

    #[test]
    fn refinement_and_meet_small_cases() {
        assert_eq!(refinement_pairs(3), 12);
        assert_eq!(refinement_pairs(4), 60);
        // frozen from an independent Python enumeration and the Moebius
        // formula sum_k s(n,k) B_k^2
        let expected = [1u64, 1, 3, 15, 113, 1153, 15125];
        for (n, &e) in expected.iter().enumerate() {
            assert_eq!(trivial_meet_pairs(n), e, "n = {n}");
        }
    }
}
