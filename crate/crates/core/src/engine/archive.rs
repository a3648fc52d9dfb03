use crate::space::euclidean;

use super::dominance::dominates_unchecked;
use super::Solution;

/// Feasible, mutually non-dominated solutions.
#[derive(Debug, Clone, Default)]
pub struct ParetoArchive {
    members: Vec<Solution>,
}

impl ParetoArchive {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn members(&self) -> &[Solution] {
        &self.members
    }

    pub fn into_members(self) -> Vec<Solution> {
        self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Offers one candidate. Infeasible, dominated and duplicate candidates
    /// are rejected; members the candidate dominates are evicted.
    pub fn insert(&mut self, candidate: Solution) -> bool {
        if !candidate.is_feasible() {
            return false;
        }
        let c = &candidate.objectives;
        if self
            .members
            .iter()
            .any(|m| m.objectives == *c || dominates_unchecked(&m.objectives, c))
        {
            return false;
        }
        self.members
            .retain(|m| !dominates_unchecked(c, &m.objectives));
        self.members.push(candidate);
        true
    }

    /// Offers candidates in order; returns whether the archive changed.
    pub fn update(&mut self, candidates: impl IntoIterator<Item = Solution>) -> bool {
        let mut changed = false;
        for c in candidates {
            changed |= self.insert(c);
        }
        changed
    }

    /// Shrinks to `capacity` by repeatedly dropping the member closest to its
    /// nearest neighbor in range-normalized objective space. The first
    /// minimizer of each objective is never dropped.
    pub fn truncate(&mut self, capacity: usize) {
        let n = self.members.len();
        if n <= capacity {
            return;
        }
        let d = self.members[0].objectives.len();
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        let mut keep = vec![false; n];
        for k in 0..d {
            let mut best = 0;
            for (i, m) in self.members.iter().enumerate() {
                let v = m.objectives[k];
                lo[k] = lo[k].min(v);
                hi[k] = hi[k].max(v);
                if v < self.members[best].objectives[k] {
                    best = i;
                }
            }
            keep[best] = true;
        }
        let scaled: Vec<Vec<f64>> = self
            .members
            .iter()
            .map(|m| {
                m.objectives
                    .iter()
                    .enumerate()
                    .map(|(k, v)| {
                        let span = hi[k] - lo[k];
                        if span > 0.0 { (v - lo[k]) / span } else { 0.0 }
                    })
                    .collect()
            })
            .collect();
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = euclidean(&scaled[i], &scaled[j]);
                dist[i * n + j] = v;
                dist[j * n + i] = v;
            }
        }
        let mut alive = vec![true; n];
        let mut remaining = n;
        while remaining > capacity.max(keep.iter().filter(|k| **k).count()) {
            let mut victim = None;
            let mut victim_d = f64::INFINITY;
            for i in (0..n).filter(|&i| alive[i] && !keep[i]) {
                let nn = (0..n)
                    .filter(|&j| j != i && alive[j])
                    .map(|j| dist[i * n + j])
                    .fold(f64::INFINITY, f64::min);
                // ties resolve to the later member
                if nn <= victim_d {
                    victim_d = nn;
                    victim = Some(i);
                }
            }
            match victim {
                Some(i) => {
                    alive[i] = false;
                    remaining -= 1;
                }
                None => break,
            }
        }
        let mut idx = 0;
        self.members.retain(|_| {
            idx += 1;
            alive[idx - 1]
        });
    }
}
